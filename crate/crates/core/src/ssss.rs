//! Rank invariants of single-source/single-sink subgraphs.
//!
//! For a source `u`, a BFS tree over the vertices reachable from `u` is
//! walked depth first. Along the way the standard persistence reduction is
//! run incrementally: first the simplices of `X_u` (in id order), then the
//! simplices added by each tree edge. At branch points the reduction state is
//! cloned. At a vertex `w` the rank of `H_k(X_u) -> H_k(X_w)` is the number of
//! `k`-classes born inside the `X_u` prefix that are still alive.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::io::Write;

use crate::dagmodel::GraphFiltration;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::parallel::{self, Execution};
use crate::simplicial::{facet_sign, GlobalComplex};
use crate::sparse::{self, SparseVec};

/// Incremental column reduction of the boundary matrix of a growing
/// filtration, tracking the live `k`-classes.
#[derive(Clone, Debug)]
pub struct ReductionState<F: Field> {
    field: F,
    k: usize,
    position: HashMap<usize, usize>,
    dims: Vec<usize>,
    /// Reduced columns keyed by their lowest position.
    pivots: HashMap<usize, SparseVec<F::Elem>>,
    /// Positions of unpaired positive `k`-simplices.
    alive: BTreeSet<usize>,
}

impl<F: Field> ReductionState<F> {
    pub fn new(field: F, k: usize) -> Self {
        ReductionState {
            field,
            k,
            position: HashMap::new(),
            dims: Vec::new(),
            pivots: HashMap::new(),
            alive: BTreeSet::new(),
        }
    }

    /// Number of simplices inserted so far.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Appends a simplex whose facets are already present. Returns the
    /// position of the class it kills, if any.
    pub fn insert(&mut self, complex: &GlobalComplex, id: usize) -> Option<usize> {
        let f = &self.field;
        let pos = self.dims.len();
        let dim = complex.dim_of(id);
        let mut col: SparseVec<F::Elem> = if dim == 0 {
            Vec::new()
        } else {
            complex
                .facets(id)
                .iter()
                .enumerate()
                .map(|(i, face)| (self.position[face], facet_sign(f, i)))
                .collect()
        };
        col.sort_by_key(|(p, _)| *p);
        while let Some(l) = sparse::low(&col) {
            let Some(piv) = self.pivots.get(&l) else { break };
            let c = f.div(&col.last().unwrap().1, &piv.last().unwrap().1);
            col = sparse::sub_scaled(f, &col, &c, piv);
        }
        self.position.insert(id, pos);
        self.dims.push(dim);
        match sparse::low(&col) {
            Some(l) => {
                self.pivots.insert(l, col);
                if dim == self.k + 1 {
                    self.alive.remove(&l);
                }
                Some(l)
            }
            None => {
                if dim == self.k {
                    self.alive.insert(pos);
                }
                None
            }
        }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.position.contains_key(&id)
    }

    /// Live `k`-classes born among the first `prefix` insertions.
    pub fn alive_born_before(&self, prefix: usize) -> usize {
        self.alive.range(..prefix).count()
    }

    pub fn alive_count(&self) -> usize {
        self.alive.len()
    }
}

/// Simplices of `X_v` not yet in the state, by (dimension, id).
fn pending(gf: &GraphFiltration, v: usize, state_has: impl Fn(usize) -> bool) -> Vec<usize> {
    let complex = gf.complex();
    let mut ids: Vec<usize> = gf.mask(v).members().iter().copied().filter(|&id| !state_has(id)).collect();
    ids.sort_by_key(|&id| (complex.dim_of(id), id));
    ids
}

fn advance<F: Field>(gf: &GraphFiltration, state: &mut ReductionState<F>, v: usize) {
    for id in pending(gf, v, |id| state.contains(id)) {
        state.insert(gf.complex(), id);
    }
}

/// A persistence pair of a path filtration: the class appears with edge
/// `birth` and disappears with edge `death`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PersistencePair {
    pub birth: usize,
    pub death: Option<usize>,
}

/// Vertex sequence of a path graph, from its unique source.
pub fn path_order(gf: &GraphFiltration) -> Result<Vec<usize>> {
    let n = gf.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let out = gf.out_edges();
    let inc = gf.in_edges();
    if gf.edge_count() + 1 != n || out.iter().any(|o| o.len() > 1) || inc.iter().any(|i| i.len() > 1) {
        return Err(Error::NotAPath("every vertex needs at most one edge in and out".into()));
    }
    let source = (0..n).find(|&v| inc[v].is_empty()).ok_or_else(|| Error::NotAPath("no source".into()))?;
    let mut order = vec![source];
    while let Some(&e) = out[*order.last().unwrap()].first() {
        order.push(gf.edge(e).1);
        if order.len() > n {
            return Err(Error::NotAPath("cycle".into()));
        }
    }
    if order.len() != n {
        return Err(Error::NotAPath("graph is not a single chain".into()));
    }
    Ok(order)
}

/// Persistence pairing of a path starting at the empty complex. Positions
/// are edge indices along the path; classes created and destroyed by the
/// same edge are omitted.
pub fn standard_persistence<F: Field>(f: &F, gf: &GraphFiltration, k: usize) -> Result<Vec<PersistencePair>> {
    let order = path_order(gf)?;
    if let Some(&s) = order.first() {
        if !gf.mask(s).is_empty() {
            return Err(Error::NotAPath(format!("source {} is not empty", gf.id(s))));
        }
    }
    let mut state = ReductionState::new(f.clone(), k);
    let mut edge_of_position = Vec::new();
    let mut pairs: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    for (step, &v) in order.iter().enumerate().skip(1) {
        let edge = step - 1;
        for id in pending(gf, v, |id| state.contains(id)) {
            let dim = gf.complex().dim_of(id);
            let pos = state.len();
            edge_of_position.push(edge);
            match state.insert(gf.complex(), id) {
                Some(killed) if dim == k + 1 => {
                    pairs.insert(killed, Some(edge));
                }
                None if dim == k => {
                    pairs.insert(pos, None);
                }
                _ => {}
            }
        }
    }
    let mut out: Vec<PersistencePair> = pairs
        .into_iter()
        .map(|(p, d)| PersistencePair { birth: edge_of_position[p], death: d })
        .filter(|pp| pp.death != Some(pp.birth))
        .collect();
    out.sort();
    Ok(out)
}

/// Ranks `rank(u, w)` of induced maps in one homology degree, for pairs with
/// `w` reachable from `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    k: usize,
    ids: Vec<String>,
    entries: BTreeMap<(usize, usize), usize>,
}

impl RankTable {
    pub fn new(k: usize, ids: Vec<String>) -> Self {
        RankTable { k, ids, entries: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn get(&self, u: usize, w: usize) -> Option<usize> {
        self.entries.get(&(u, w)).copied()
    }

    pub fn insert(&mut self, u: usize, w: usize, rank: usize) {
        self.entries.insert((u, w), rank);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.entries.iter().map(|(&key, &r)| (key, r))
    }

    /// Drops entries whose endpoints fail `keep`.
    pub fn retain_vertices(&mut self, keep: impl Fn(usize) -> bool) {
        self.entries.retain(|&(u, w), _| keep(u) && keep(w));
    }

    /// `source,target,k,rank` rows sorted by source id, then target id.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut rows: Vec<(&str, &str, usize)> =
            self.entries.iter().map(|(&(u, w), &r)| (self.ids[u].as_str(), self.ids[w].as_str(), r)).collect();
        rows.sort();
        let mut out = std::io::BufWriter::new(out);
        writeln!(out, "source,target,k,rank")?;
        for (s, t, r) in rows {
            writeln!(out, "{s},{t},{},{r}", self.k)?;
        }
        out.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ids are strings")
    }

    fn merge(&mut self, other: RankTable) {
        self.entries.extend(other.entries);
    }
}

/// Children lists of a BFS tree from `root` (children in vertex-id order).
fn bfs_tree(gf: &GraphFiltration, out: &[Vec<usize>], root: usize) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); gf.vertex_count()];
    let mut seen = vec![false; gf.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let mut next: Vec<usize> = out[x].iter().map(|&e| gf.edge(e).1).collect();
        next.sort_unstable();
        next.dedup();
        for y in next {
            if !seen[y] {
                seen[y] = true;
                children[x].push(y);
                queue.push_back(y);
            }
        }
    }
    children
}

/// Depth-first walk of a tree carrying a reduction state; `visit` sees each
/// vertex with the state after reaching it and the root-to-vertex path.
fn walk_tree<F: Field>(
    gf: &GraphFiltration,
    children: &[Vec<usize>],
    root: usize,
    state: ReductionState<F>,
    mut visit: impl FnMut(usize, &ReductionState<F>, &[(usize, usize)]),
) {
    // stack of (vertex, state on arrival, depth)
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut stack = vec![(root, state, 0usize)];
    while let Some((v, mut state, depth)) = stack.pop() {
        advance(gf, &mut state, v);
        path.truncate(depth);
        path.push((v, state.len()));
        visit(v, &state, &path);
        let kids = &children[v];
        if let Some((&last, rest)) = kids.split_last() {
            // branch point: every child but the last gets a snapshot
            let snapshots: Vec<_> = rest.iter().map(|&c| (c, state.clone(), depth + 1)).collect();
            stack.push((last, state, depth + 1));
            stack.extend(snapshots.into_iter().rev());
        }
    }
}

fn single_source<F: Field>(f: &F, gf: &GraphFiltration, out: &[Vec<usize>], u: usize, k: usize) -> RankTable {
    let children = bfs_tree(gf, out, u);
    let mut table = RankTable::new(k, gf.ids().to_vec());
    let state = ReductionState::new(f.clone(), k);
    walk_tree(gf, &children, u, state, |w, state, path| {
        table.insert(u, w, state.alive_born_before(path[0].1));
    });
    table
}

/// Rank of `H_k(X_u) -> H_k(X_w)` for all `u` and all `w` reachable from `u`.
/// Inclusions may add any number of simplices per edge.
pub fn all_pairs_rank<F: Field>(f: &F, gf: &GraphFiltration, k: usize, exec: Execution) -> Result<RankTable> {
    gf.validate()?;
    let out = gf.out_edges();
    let tables = parallel::map(exec, (0..gf.vertex_count()).collect(), |u| single_source(f, gf, &out, u, k));
    let mut table = RankTable::new(k, gf.ids().to_vec());
    for t in tables {
        table.merge(t);
    }
    Ok(table)
}

/// Grid coordinates of vertex `index` (axis 0 varies fastest).
pub fn lattice_coords(shape: &[usize], mut index: usize) -> Vec<usize> {
    shape
        .iter()
        .map(|&m| {
            let c = index % m;
            index /= m;
            c
        })
        .collect()
}

pub fn lattice_index(shape: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(shape).rev().fold(0, |acc, (&c, &m)| acc * m + c)
}

/// Rank invariants of comparable pairs `u <= v` of a `d`-parameter grid
/// filtration whose vertex `i` sits at [`lattice_coords`]`(shape, i)` and
/// whose edges are exactly the unit steps. Trees are rooted only at the
/// vertices with first coordinate zero.
pub fn lattice_rank_invariants<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    shape: &[usize],
    k: usize,
    exec: Execution,
) -> Result<RankTable> {
    gf.validate()?;
    let n: usize = shape.iter().product();
    if shape.is_empty() || shape.contains(&0) || n != gf.vertex_count() {
        return Err(Error::NotALattice(format!("shape {shape:?} does not match {} vertices", gf.vertex_count())));
    }
    let mut expected = BTreeSet::new();
    for v in 0..n {
        let c = lattice_coords(shape, v);
        for axis in 0..shape.len() {
            if c[axis] + 1 < shape[axis] {
                let mut d = c.clone();
                d[axis] += 1;
                expected.insert((v, lattice_index(shape, &d)));
            }
        }
    }
    let actual: BTreeSet<(usize, usize)> = gf.edges().iter().copied().collect();
    if actual != expected || gf.edge_count() != expected.len() {
        return Err(Error::NotALattice("edges are not the unit grid steps".into()));
    }

    let roots: Vec<usize> = (0..n).filter(|&v| lattice_coords(shape, v)[0] == 0).collect();
    let tables = parallel::map(exec, roots, |root| {
        let r = lattice_coords(shape, root);
        // tree parent: lower the last axis >= 1 above the root, else axis 0;
        // root-to-vertex paths therefore run along axis 0 first
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            let c = lattice_coords(shape, v);
            if v == root || c.iter().zip(&r).any(|(a, b)| a < b) {
                continue;
            }
            let mut p = c.clone();
            match (1..shape.len()).rev().find(|&i| c[i] > r[i]) {
                Some(i) => p[i] -= 1,
                None => p[0] -= 1,
            }
            children[lattice_index(shape, &p)].push(v);
        }
        let mut table = RankTable::new(k, gf.ids().to_vec());
        walk_tree(gf, &children, root, ReductionState::new(f.clone(), k), |v, state, path| {
            for &(a, prefix) in path {
                if lattice_coords(shape, a)[1..] != r[1..] {
                    break;
                }
                table.insert(a, v, state.alive_born_before(prefix));
            }
        });
        table
    });
    let mut table = RankTable::new(k, gf.ids().to_vec());
    for t in tables {
        table.merge(t);
    }
    Ok(table)
}
