//! Ready-made filtrations used by tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::pipelines::PointCloud;
use crate::simplicial::{GlobalComplex, Simplex, SubcomplexMask};

pub(crate) fn simplex(v: &[u32]) -> Simplex {
    Simplex::new(v.to_vec()).expect("fixture simplices are well formed")
}

/// Path `X0 -> X1 -> ... -> Xn` where `X0` is empty and `X{i+1}` adds the
/// `i`-th simplex of `order` (which must list faces before cofaces).
pub fn path_filtration(complex: GlobalComplex, order: &[usize]) -> GraphFiltration {
    let mut vertices = vec![("X0".to_string(), SubcomplexMask::empty())];
    for i in 0..order.len() {
        vertices.push((format!("X{}", i + 1), SubcomplexMask::from_ids_unchecked(order[..=i].iter().copied())));
    }
    let edges = (0..order.len()).map(|i| (i, i + 1)).collect();
    GraphFiltration::new(complex, vertices, edges).expect("path fixture is well formed")
}

/// v0, v1, v2, e01, e12, e02, t012 added one at a time to the empty complex.
pub fn triangle_path() -> GraphFiltration {
    let c = GlobalComplex::close_under_faces([simplex(&[0, 1, 2])]);
    let order: Vec<usize> = [&[0][..], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]]
        .iter()
        .map(|s| c.id_of(&simplex(s)).unwrap())
        .collect();
    path_filtration(c, &order)
}

/// Random complex on at most six vertices with at most `max_simplices`
/// simplices, mostly edges (rich in 1-cycles) with a few triangles.
pub fn random_complex(rng: &mut impl Rng, max_simplices: usize) -> GlobalComplex {
    let n = rng.gen_range(3..=6u32);
    let mut seeds: Vec<Simplex> = Vec::new();
    let mut current = GlobalComplex::close_under_faces([]);
    for _ in 0..60 {
        let dim = match rng.gen_range(0..10) {
            0 => 0,
            1..=7 => 1,
            _ => 2,
        };
        let mut vs: Vec<u32> = (0..n).collect();
        vs.shuffle(rng);
        vs.truncate(dim + 1);
        let mut trial = seeds.clone();
        trial.push(Simplex::new(vs).expect("distinct vertices"));
        let closed = GlobalComplex::close_under_faces(trial.clone());
        if closed.len() <= max_simplices {
            seeds = trial;
            current = closed;
        }
    }
    current
}

fn random_subcomplex(rng: &mut impl Rng, complex: &GlobalComplex, base: &SubcomplexMask, p: f64) -> SubcomplexMask {
    let extra: Vec<usize> = (0..complex.len()).filter(|_| rng.gen_bool(p)).collect();
    SubcomplexMask::closure(complex, base.members().iter().copied().chain(extra))
}

/// A random face-respecting order of a random complex, as a path from the
/// empty complex.
pub fn random_path(seed: u64, max_simplices: usize) -> GraphFiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_complex(&mut rng, max_simplices);
    let mut order = Vec::with_capacity(c.len());
    let mut present = vec![false; c.len()];
    while order.len() < c.len() {
        let ready: Vec<usize> =
            (0..c.len()).filter(|&id| !present[id] && c.facets(id).iter().all(|&f| present[f])).collect();
        let &id = ready.choose(&mut rng).expect("faces come first");
        present[id] = true;
        order.push(id);
    }
    path_filtration(c, &order)
}

/// Random weakly connected DAG on at most `max_vertices` vertices (edges go
/// from lower to higher index) over a complex of at most `max_simplices`
/// simplices.
pub fn random_dag(seed: u64, max_vertices: usize, max_simplices: usize) -> GraphFiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_complex(&mut rng, max_simplices);
    random_dag_over(&mut rng, c, max_vertices, 0.55)
}

/// Random DAG over the simplices of a block of unit cubes in R^3, split
/// into tetrahedra, so every vertex space embeds in R^3.
pub fn random_embedded_dag(seed: u64, max_vertices: usize) -> GraphFiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nx, ny, nz) = (2u32, 2u32, 1u32);
    let id = |x: u32, y: u32, z: u32| x + (nx + 1) * (y + (ny + 1) * z);
    let mut tetrahedra = Vec::new();
    for (x, y, z) in (0..nx).flat_map(|x| (0..ny).flat_map(move |y| (0..nz).map(move |z| (x, y, z)))) {
        for axes in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let mut p = [x, y, z];
            let mut verts = vec![id(p[0], p[1], p[2])];
            for a in axes {
                p[a] += 1;
                verts.push(id(p[0], p[1], p[2]));
            }
            tetrahedra.push(Simplex::new(verts).expect("distinct corners"));
        }
    }
    let block = GlobalComplex::close_under_faces(tetrahedra);
    let weight = [0.0, 0.25, 0.2, 0.05];
    let seeds: Vec<Simplex> =
        block.simplices().iter().filter(|s| rng.gen_bool(weight[s.dim()])).cloned().collect();
    let c = GlobalComplex::close_under_faces(seeds);
    random_dag_over(&mut rng, c, max_vertices, 0.3)
}

fn random_dag_over(rng: &mut impl Rng, c: GlobalComplex, max_vertices: usize, source_p: f64) -> GraphFiltration {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let mut edges = Vec::new();
    for j in 1..n {
        let before = edges.len();
        for i in 0..j {
            if rng.gen_bool(0.35) {
                edges.push((i, j));
            }
        }
        if edges.len() == before && (j == 1 || rng.gen_bool(0.6)) {
            edges.push((rng.gen_range(0..j), j));
        } else if edges.len() == before {
            edges.push((j, rng.gen_range(0..j)));
        }
    }
    // edges j -> i with i < j were added to vary sources; order vertices so
    // that every mask contains the masks of its predecessors
    let probe = GraphFiltration::new(
        c.clone(),
        (0..n).map(|v| (format!("V{v}"), SubcomplexMask::empty())).collect(),
        edges.clone(),
    )
    .expect("indices in range");
    let order = probe.topological_order().expect("no two-way edges");
    let inc = probe.in_edges();
    let mut masks = vec![SubcomplexMask::empty(); n];
    for &v in &order {
        let mut base = SubcomplexMask::empty();
        for &e in &inc[v] {
            base = base.union(&masks[edges[e].0]);
        }
        let p = if inc[v].is_empty() { source_p } else { 0.1 };
        masks[v] = random_subcomplex(rng, &c, &base, p);
    }
    let vertices = masks.into_iter().enumerate().map(|(v, m)| (format!("V{v}"), m)).collect();
    GraphFiltration::new(c, vertices, edges).expect("well formed")
}

/// Random filtration over a grid of the given shape (vertex numbering as in
/// [`crate::ssss::lattice_coords`]).
pub fn random_lattice(seed: u64, shape: &[usize], growth: usize) -> GraphFiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_complex(&mut rng, 18);
    let n: usize = shape.iter().product();
    let p = growth as f64 / c.len().max(1) as f64 / shape.len() as f64;
    let mut masks: Vec<SubcomplexMask> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for v in 0..n {
        let coords = crate::ssss::lattice_coords(shape, v);
        let mut base = SubcomplexMask::empty();
        for axis in 0..shape.len() {
            if coords[axis] > 0 {
                let mut d = coords.clone();
                d[axis] -= 1;
                let u = crate::ssss::lattice_index(shape, &d);
                base = base.union(&masks[u]);
                edges.push((u, v));
            }
        }
        masks.push(random_subcomplex(&mut rng, &c, &base, p.min(1.0)));
    }
    let vertices = masks.into_iter().enumerate().map(|(v, m)| (format!("L{v}"), m)).collect();
    GraphFiltration::new(c, vertices, edges).expect("well formed")
}

fn named(c: GlobalComplex, spec: &[(&str, &[&[u32]])], edges: &[(&str, &str)]) -> GraphFiltration {
    let vertices = spec
        .iter()
        .map(|(id, seeds)| {
            let ids = seeds.iter().map(|s| c.id_of(&simplex(s)).expect("seed in complex"));
            (id.to_string(), SubcomplexMask::closure(&c, ids))
        })
        .collect();
    GraphFiltration::with_named_edges(c, vertices, edges).expect("fixture is well formed")
}

/// Two sources holding the same hollow triangle, both included into a sink
/// that adds an isolated vertex.
pub fn shared_cycle() -> GraphFiltration {
    let c = GlobalComplex::close_under_faces([simplex(&[0, 1]), simplex(&[1, 2]), simplex(&[0, 2]), simplex(&[3])]);
    let hollow: &[&[u32]] = &[&[0, 1], &[1, 2], &[0, 2]];
    named(c, &[("A", hollow), ("B", hollow), ("C", &[&[0, 1], &[1, 2], &[0, 2], &[3]])], &[("A", "C"), ("B", "C")])
}

/// Two hollow triangles sharing a vertex; one edge fills the first, another
/// edge fills the second.
pub fn split_fillings() -> GraphFiltration {
    let c = GlobalComplex::close_under_faces([simplex(&[0, 1, 2]), simplex(&[0, 3, 4])]);
    let bowtie: &[&[u32]] = &[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[3, 4], &[0, 4]];
    named(
        c,
        &[("V", bowtie), ("S1", &[&[0, 1, 2], &[0, 3], &[3, 4], &[0, 4]]), ("S2", &[&[0, 3, 4], &[0, 1], &[1, 2], &[0, 2]])],
        &[("V", "S1"), ("V", "S2")],
    )
}

/// Random weakly connected vertex set, grown from a random start vertex.
pub fn random_connected_selector(rng: &mut impl Rng, gf: &GraphFiltration) -> SubgraphSelector {
    let n = gf.vertex_count();
    let target = rng.gen_range(1..=n);
    let mut chosen = vec![rng.gen_range(0..n)];
    while chosen.len() < target {
        let frontier: Vec<usize> = gf
            .edges()
            .iter()
            .filter_map(|&(u, v)| match (chosen.contains(&u), chosen.contains(&v)) {
                (true, false) => Some(v),
                (false, true) => Some(u),
                _ => None,
            })
            .collect();
        let Some(&next) = frontier.choose(rng) else { break };
        chosen.push(next);
    }
    SubgraphSelector::new(gf, chosen).expect("grown along edges")
}

/// Vertex id of grid point `(x, y)` in a grid `width` cells wide.
fn grid_vertex(width: u32, x: u32, y: u32) -> u32 {
    y * (width + 1) + x
}

/// Triangulated cells of a `width x height` grid, skipping `holes`.
fn grid_triangles(width: u32, height: u32, cells: impl Fn(u32, u32) -> bool) -> Vec<Simplex> {
    let v = |x, y| grid_vertex(width, x, y);
    let mut out = Vec::new();
    for cy in 0..height {
        for cx in 0..width {
            if cells(cx, cy) {
                out.push(simplex(&[v(cx, cy), v(cx + 1, cy), v(cx + 1, cy + 1)]));
                out.push(simplex(&[v(cx, cy), v(cx, cy + 1), v(cx + 1, cy + 1)]));
            }
        }
    }
    out
}

/// Corners of a cell, counterclockwise from the lower left.
fn cell_ring(width: u32, cx: u32, cy: u32) -> Vec<u32> {
    let v = |x, y| grid_vertex(width, x, y);
    vec![v(cx, cy), v(cx + 1, cy), v(cx + 1, cy + 1), v(cx, cy + 1)]
}

/// Boundary of the whole grid, counterclockwise from the origin.
fn outer_ring(width: u32, height: u32) -> Vec<u32> {
    let v = |x, y| grid_vertex(width, x, y);
    let mut ring: Vec<u32> = (0..width).map(|x| v(x, 0)).collect();
    ring.extend((0..height).map(|y| v(width, y)));
    ring.extend((1..=width).rev().map(|x| v(x, height)));
    ring.extend((1..=height).rev().map(|y| v(0, y)));
    ring
}

fn ring_edges(ring: &[u32]) -> Vec<Simplex> {
    (0..ring.len()).map(|i| simplex(&[ring[i], ring[(i + 1) % ring.len()]])).collect()
}

/// Triangulated annulus between two rings, walking both in parallel.
fn annulus(a: &[u32], b: &[u32]) -> Vec<Simplex> {
    let (m, n) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < m || j < n {
        // advance the ring whose next vertex comes first in angle
        if j == n || (i < m && (i + 1) * n <= (j + 1) * m) {
            out.push(simplex(&[a[i % m], a[(i + 1) % m], b[j % n]]));
            i += 1;
        } else {
            out.push(simplex(&[a[i % m], b[j % n], b[(j + 1) % n]]));
            j += 1;
        }
    }
    out
}

/// Tube through `layers` new rings of `size` vertices each, numbered from
/// `next`, joining ring `from` to ring `to`.
fn tube(from: &[u32], to: &[u32], layers: usize, size: u32, next: &mut u32) -> Vec<Simplex> {
    let mut rings = vec![from.to_vec()];
    for _ in 0..layers {
        rings.push((*next..*next + size).collect());
        *next += size;
    }
    rings.push(to.to_vec());
    rings.windows(2).flat_map(|w| annulus(&w[0], &w[1])).collect()
}

fn masks_by_name(c: &GlobalComplex, parts: Vec<(&str, Vec<Simplex>)>) -> Vec<(String, SubcomplexMask)> {
    parts
        .into_iter()
        .map(|(id, seeds)| {
            let ids = seeds.iter().map(|s| c.id_of(s).expect("seed in complex"));
            (id.to_string(), SubcomplexMask::closure(c, ids))
        })
        .collect()
}

/// Three boundary circles of a disk with three holes and the outer circle,
/// each included into the holed disk (a sphere with four punctures).
pub fn four_punctured_sphere() -> GraphFiltration {
    let holes = [(1, 1), (3, 1), (2, 3)];
    let surface = grid_triangles(5, 5, |cx, cy| !holes.contains(&(cx, cy)));
    let c = GlobalComplex::close_under_faces(surface.clone());
    let parts = vec![
        ("A", ring_edges(&cell_ring(5, 1, 1))),
        ("B", ring_edges(&cell_ring(5, 3, 1))),
        ("C", ring_edges(&cell_ring(5, 2, 3))),
        ("D", ring_edges(&outer_ring(5, 5))),
        ("S", surface),
    ];
    let vertices = masks_by_name(&c, parts);
    GraphFiltration::with_named_edges(c, vertices, &[("A", "S"), ("B", "S"), ("C", "S"), ("D", "S")])
        .expect("fixture is well formed")
}

/// A closed genus-two surface covered by three subsurfaces:
///
/// * `Y`, a sphere with four holes `c1..c4` (a grid with three hole cells
///   and its outer boundary);
/// * `X`, a tube joining `c1` and `c2`;
/// * `Z`, the pair of pants `P` of `Y` around `c3` and `c4` with a tube
///   joining `c3` and `c4`,
///
/// together with `X ∩ Y`, `Y ∩ Z = P`, `X ∪ Y`, `Y ∪ Z` and the whole
/// surface, ordered by inclusion.
pub fn genus_two() -> GraphFiltration {
    let (w, h) = (10, 5);
    let holes = [(2, 2), (4, 2), (8, 2)];
    let in_r = |cx: u32, cy: u32| (1..7).contains(&cx) && (1..4).contains(&cy);
    let y_part = grid_triangles(w, h, |cx, cy| !holes.contains(&(cx, cy)));
    let pants = grid_triangles(w, h, |cx, cy| !holes.contains(&(cx, cy)) && !in_r(cx, cy));
    let (c1, c2, c3) = (cell_ring(w, 2, 2), cell_ring(w, 4, 2), cell_ring(w, 8, 2));
    let c4 = outer_ring(w, h);
    let mut next = (w + 1) * (h + 1);
    // reversing c2 keeps the glued surface orientable; c4 already runs opposite c3
    let mut c2_rev = c2.clone();
    c2_rev.reverse();
    let x_part = tube(&c1, &c2_rev, 2, 4, &mut next);
    let z_tube = tube(&c3, &c4, 2, 6, &mut next);
    let z_part: Vec<Simplex> = pants.iter().cloned().chain(z_tube.iter().cloned()).collect();
    let top: Vec<Simplex> = y_part.iter().chain(&x_part).chain(&z_tube).cloned().collect();
    let c = GlobalComplex::close_under_faces(top.clone());
    let xy: Vec<Simplex> = ring_edges(&c1).into_iter().chain(ring_edges(&c2)).collect();
    let x_or_y: Vec<Simplex> = y_part.iter().chain(&x_part).cloned().collect();
    let y_or_z: Vec<Simplex> = y_part.iter().chain(&z_tube).cloned().collect();
    let parts = vec![
        ("XY", xy),
        ("YZ", pants),
        ("X", x_part),
        ("Y", y_part),
        ("Z", z_part),
        ("XuY", x_or_y),
        ("YuZ", y_or_z),
        ("Top", top),
    ];
    let vertices = masks_by_name(&c, parts);
    let edges = [
        ("XY", "X"),
        ("XY", "Y"),
        ("YZ", "Y"),
        ("YZ", "Z"),
        ("X", "XuY"),
        ("Y", "XuY"),
        ("Y", "YuZ"),
        ("Z", "YuZ"),
        ("XuY", "Top"),
        ("YuZ", "Top"),
    ];
    GraphFiltration::with_named_edges(c, vertices, &edges).expect("fixture is well formed")
}

/// Path filtration of a `1 x cells` strip with every other cell missing,
/// adding simplices in id order (vertices, edges, then triangles).
pub fn holed_strip(cells: u32) -> GraphFiltration {
    let c = GlobalComplex::close_under_faces(grid_triangles(cells, 1, |cx, _| cx % 2 == 0));
    let order: Vec<usize> = (0..c.len()).collect();
    path_filtration(c, &order)
}

/// `n` points near the unit circle, one in each of `n` equal arcs, with the
/// radius jittered by up to `noise`.
pub fn noisy_circle(seed: u64, n: usize, noise: f64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let angle = (i as f64 + rng.gen_range(0.0..1.0)) * std::f64::consts::TAU / n as f64;
            let radius = 1.0 + rng.gen_range(-noise..=noise);
            vec![radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    PointCloud::from_f64(&points)
}

/// `n` points uniform in the annulus between radii `inner` and `outer`.
pub fn annulus_sample(seed: u64, n: usize, inner: f64, outer: f64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius = rng.gen_range(inner * inner..=outer * outer).sqrt();
            vec![radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    PointCloud::from_f64(&points)
}
