//! Modules over a DAG, persistence diagrams and the bottleneck distance.

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::error::{Error, Result};
use crate::exactlinalg::{self, Matrix};
use crate::field::Field;
use crate::parallel::Execution;
use crate::ssss::PersistencePair;
use crate::subgraph::InducedMaps;

/// A vector space per vertex and a linear map per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule<E> {
    ids: Vec<String>,
    dims: Vec<usize>,
    edges: Vec<(usize, usize)>,
    maps: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> GModule<E> {
    pub fn new(ids: Vec<String>, dims: Vec<usize>, edges: Vec<(usize, usize)>, maps: Vec<Matrix<E>>) -> Result<Self> {
        if ids.len() != dims.len() {
            return Err(Error::DimensionMismatch(ids.len(), dims.len()));
        }
        if edges.len() != maps.len() {
            return Err(Error::DimensionMismatch(edges.len(), maps.len()));
        }
        for (&(u, v), m) in edges.iter().zip(&maps) {
            if u >= dims.len() || v >= dims.len() {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            if m.rows() != dims[v] {
                return Err(Error::DimensionMismatch(m.rows(), dims[v]));
            }
            if m.cols() != dims[u] {
                return Err(Error::DimensionMismatch(m.cols(), dims[u]));
            }
        }
        Ok(GModule { ids, dims, edges, maps })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id).map(|i| self.dims[i])
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn map(&self, e: usize) -> &Matrix<E> {
        &self.maps[e]
    }

    /// `sum_v dim W_v - sum_e rank f_e`.
    pub fn module_dimension<F: Field<Elem = E>>(&self, f: &F) -> i64 {
        let total: usize = self.dims.iter().sum();
        let ranks: usize = self.maps.iter().map(|m| exactlinalg::rank(f, m)).sum();
        total as i64 - ranks as i64
    }

    /// Whether all directed paths with common endpoints compose to the same
    /// map.
    pub fn is_commutative<F: Field<Elem = E>>(&self, f: &F) -> bool {
        let n = self.dims.len();
        let mut inc = vec![Vec::new(); n];
        for (e, &(_, v)) in self.edges.iter().enumerate() {
            inc[v].push(e);
        }
        let Some(order) = topological(n, &self.edges) else { return false };
        for u in 0..n {
            let mut composed: HashMap<usize, Matrix<E>> = HashMap::from([(u, Matrix::identity(f, self.dims[u]))]);
            for &w in order.iter().skip_while(|&&w| w != u).skip(1) {
                let mut value: Option<Matrix<E>> = None;
                for &e in &inc[w] {
                    let Some(prev) = composed.get(&self.edges[e].0) else { continue };
                    let m = exactlinalg::mul(f, &self.maps[e], prev);
                    match &value {
                        None => value = Some(m),
                        Some(v) if *v != m => return false,
                        _ => {}
                    }
                }
                if let Some(v) = value {
                    composed.insert(w, v);
                }
            }
        }
        true
    }

    /// One-dimensional on the connected `carrier`, zero elsewhere, and
    /// isomorphic to the constant module there: edge scalars must admit a
    /// consistent rescaling.
    pub fn is_elementary<F: Field<Elem = E>>(&self, f: &F, carrier: &[usize]) -> bool {
        let n = self.dims.len();
        let inside: Vec<bool> = (0..n).map(|v| carrier.contains(&v)).collect();
        if carrier.is_empty() || (0..n).any(|v| self.dims[v] != usize::from(inside[v])) {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if inside[u] && inside[v] {
                let x = self.maps[e].get(0, 0).clone();
                if f.is_zero(&x) {
                    return false;
                }
                adj[u].push((v, x.clone()));
                adj[v].push((u, f.inv(&x)));
            }
        }
        // propagate a unit from one carrier vertex: scale(v) = x * scale(u)
        let mut scale: Vec<Option<E>> = vec![None; n];
        scale[carrier[0]] = Some(f.one());
        let mut queue = VecDeque::from([carrier[0]]);
        while let Some(u) = queue.pop_front() {
            let su = scale[u].clone().unwrap();
            for (v, x) in &adj[u] {
                let want = f.mul(x, &su);
                match &scale[*v] {
                    None => {
                        scale[*v] = Some(want);
                        queue.push_back(*v);
                    }
                    Some(s) if *s != want => return false,
                    _ => {}
                }
            }
        }
        carrier.iter().all(|&v| scale[v].is_some())
    }

    /// Block direct sum over the same graph.
    pub fn direct_sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        if self.ids != other.ids || self.edges != other.edges {
            return Err(Error::DimensionMismatch(self.ids.len(), other.ids.len()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| {
                let top = a.hstack(&Matrix::zeros(f, a.rows(), b.cols()));
                let bottom = Matrix::zeros(f, b.rows(), a.cols()).hstack(b);
                top.vstack(&bottom)
            })
            .collect();
        GModule::new(self.ids.clone(), dims, self.edges.clone(), maps)
    }
}

fn topological(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in edges {
        indeg[v] += 1;
        out[u].push(v);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// `H_k` of the selected part of a graph filtration, in the homology bases
/// of [`crate::simplicial::HomologyBasis`].
pub fn homology_module<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    sel: &SubgraphSelector,
    k: usize,
) -> Result<GModule<F::Elem>> {
    gf.validate()?;
    let maps = InducedMaps::new(f, gf, sel.vertices(), sel.edges(), k, Execution::Parallel);
    let local: HashMap<usize, usize> = sel.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    GModule::new(
        sel.vertices().iter().map(|&v| gf.id(v).to_string()).collect(),
        sel.vertices().iter().map(|&v| maps.dim(v)).collect(),
        sel.edges().iter().map(|&e| (local[&gf.edge(e).0], local[&gf.edge(e).1])).collect(),
        sel.edges().iter().map(|&e| maps.map(e).clone()).collect(),
    )
}

/// Support of a module annotated with its module dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedBarcode {
    pub carrier: Vec<String>,
    pub annotation: i64,
}

impl AnnotatedBarcode {
    pub fn of_module<F: Field>(f: &F, m: &GModule<F::Elem>) -> Self {
        let carrier = m.ids.iter().zip(&m.dims).filter(|(_, &d)| d > 0).map(|(id, _)| id.clone()).collect();
        AnnotatedBarcode { carrier, annotation: m.module_dimension(f) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagramPoint {
    pub birth: f64,
    /// `f64::INFINITY` for classes that never die.
    pub death: f64,
    pub multiplicity: usize,
}

impl DiagramPoint {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }
}

/// A point `(i, j)` stands for a class alive exactly on the index interval
/// `[i, j]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    /// Merges equal points and sorts by (birth, death).
    pub fn new(points: impl IntoIterator<Item = DiagramPoint>) -> Self {
        let mut pts: Vec<DiagramPoint> = points.into_iter().filter(|p| p.multiplicity > 0).collect();
        pts.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        let mut merged: Vec<DiagramPoint> = Vec::with_capacity(pts.len());
        for p in pts {
            match merged.last_mut() {
                Some(q) if q.birth == p.birth && q.death == p.death => q.multiplicity += p.multiplicity,
                _ => merged.push(p),
            }
        }
        PersistenceDiagram { points: merged }
    }

    /// From path pairs: a class born with edge `b` and killed by edge `d` is
    /// alive on vertices `b + 1 ..= d`.
    pub fn from_pairs(pairs: &[PersistencePair]) -> Self {
        Self::new(pairs.iter().map(|p| DiagramPoint {
            birth: (p.birth + 1) as f64,
            death: p.death.map_or(f64::INFINITY, |d| d as f64),
            multiplicity: 1,
        }))
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total number of points counted with multiplicity.
    pub fn len(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// Persistences of all points, with multiplicity, largest first.
    pub fn persistences(&self) -> Vec<f64> {
        let mut out: Vec<f64> =
            self.points.iter().flat_map(|p| std::iter::repeat_n(p.persistence(), p.multiplicity)).collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// Applies `g` to births and deaths (for instance index to radius).
    pub fn map_coordinates(&self, g: impl Fn(f64) -> f64) -> Self {
        Self::new(self.points.iter().map(|p| DiagramPoint {
            birth: g(p.birth),
            death: if p.death.is_infinite() { p.death } else { g(p.death) },
            multiplicity: p.multiplicity,
        }))
    }

    /// `birth,death,multiplicity` rows; infinite deaths as `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(out);
        writeln!(out, "birth,death,multiplicity")?;
        for p in &self.points {
            let death = if p.death.is_infinite() { "inf".to_string() } else { p.death.to_string() };
            writeln!(out, "{},{death},{}", p.birth, p.multiplicity)?;
        }
        out.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

/// Inverts a rank function on the index family `0..n` by inclusion and
/// exclusion. Intervals reaching the last index are reported with infinite
/// death.
pub fn diagram_from_ranks(n: usize, rank: impl Fn(usize, usize) -> usize) -> Result<PersistenceDiagram> {
    let r = |i: Option<usize>, j: usize| -> i64 {
        match i {
            Some(i) if j < n && i <= j => rank(i, j) as i64,
            _ => 0,
        }
    };
    let mut points = Vec::new();
    for i in 0..n {
        for j in i..n {
            let left = i.checked_sub(1);
            let m = r(Some(i), j) - r(left, j) - r(Some(i), j + 1) + r(left, j + 1);
            if m < 0 {
                return Err(Error::NotIntervalDecomposable { birth: i, death: j, multiplicity: m });
            }
            if m > 0 {
                let death = if j + 1 == n { f64::INFINITY } else { j as f64 };
                points.push(DiagramPoint { birth: i as f64, death, multiplicity: m as usize });
            }
        }
    }
    Ok(PersistenceDiagram::new(points))
}

#[derive(Clone, Copy, Debug)]
struct Pt {
    birth: f64,
    death: f64,
}

fn expand(d: &PersistenceDiagram) -> Vec<Pt> {
    d.points
        .iter()
        .flat_map(|p| std::iter::repeat_n(Pt { birth: p.birth, death: p.death }, p.multiplicity))
        .collect()
}

/// Cost of matching `a` to `b`; `None` stands for the diagonal.
fn match_cost(a: Option<Pt>, b: Option<Pt>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(p), None) | (None, Some(p)) => {
            if p.death.is_infinite() {
                f64::INFINITY
            } else {
                (p.death - p.birth) / 2.0
            }
        }
        (Some(p), Some(q)) => match (p.death.is_infinite(), q.death.is_infinite()) {
            (true, true) => (p.birth - q.birth).abs(),
            (false, false) => (p.birth - q.birth).abs().max((p.death - q.death).abs()),
            _ => f64::INFINITY,
        },
    }
}

/// Bottleneck distance with the diagonal and the sup norm. Diagrams with
/// different numbers of essential points are at infinite distance.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let a = expand(d1);
    let b = expand(d2);
    // rows: a's points, then one diagonal slot per point of b;
    // columns: b's points, then one diagonal slot per point of a
    let size = a.len() + b.len();
    let cost = |i: usize, j: usize| -> f64 {
        match (i < a.len(), j < b.len()) {
            (true, true) => match_cost(Some(a[i]), Some(b[j])),
            (true, false) => {
                if j - b.len() == i {
                    match_cost(Some(a[i]), None)
                } else {
                    f64::INFINITY
                }
            }
            (false, true) => {
                if i - a.len() == j {
                    match_cost(None, Some(b[j]))
                } else {
                    f64::INFINITY
                }
            }
            (false, false) => 0.0,
        }
    };
    let mut candidates: Vec<f64> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .map(|(i, j)| cost(i, j))
        .filter(|c| c.is_finite())
        .collect();
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |limit: f64| perfect_matching(size, |i, j| cost(i, j) <= limit);
    if !feasible(*candidates.last().unwrap()) {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Kuhn's augmenting paths on the bipartite graph given by `allowed`.
fn perfect_matching(size: usize, allowed: impl Fn(usize, usize) -> bool) -> bool {
    let adj: Vec<Vec<usize>> = (0..size).map(|i| (0..size).filter(|&j| allowed(i, j)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; size];
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, adj, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    (0..size).all(|i| augment(i, &adj, &mut owner, &mut vec![false; size]))
}
