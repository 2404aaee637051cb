//! Local fixpoint propagation on chain-level subspace pairs.
//!
//! Every vertex keeps `B_v <= ZB_v` inside its `k`-chains, starting from
//! the boundaries and the cycles of `X_v`. Along an edge `f: X_i -> X_j`
//! four rules are applied until none changes anything:
//!
//! * `ZB_j <- ZB_j ∩ (f(ZB_i) + B_j)`
//! * `ZB_i <- ZB_i ∩ (f⁻¹(ZB_j) + B_i)`
//! * `B_i <- B_i + f⁻¹(B_j)`, adding the same vectors to `ZB_i`
//! * `B_j <- B_j + f(B_i)`, adding the same vectors to `ZB_j`
//!
//! At rest `f⁻¹(B_j) = B_i` and `f(ZB_i) + B_j = ZB_j` on every edge, so
//! `f` induces isomorphisms `ZB_i/B_i -> ZB_j/B_j` and `z = dim ZB - dim B`
//! is constant on a connected subgraph. Each change raises `dim B_v` or
//! lowers `z_v`, which bounds the number of updates by `sum_v 2 s_v`.
//!
//! The common `z` is a local consistency value. It is not the subgraph
//! persistence rank in general: a class can be forced into `B` by two
//! different edges although a combination of classes survives both, and
//! around undirected cycles of the graph the identifications can disagree.

use std::collections::{HashMap, VecDeque};

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::error::Result;
use crate::exactlinalg::{self, Matrix, Subspace};
use crate::field::Field;
use crate::simplicial::{boundary_space, cycle_space};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexState<E> {
    pub vertex: usize,
    boundary: Subspace<E>,
    candidate: Subspace<E>,
}

impl<E: Clone> VertexState<E> {
    /// Boundaries and cycles of `X_v` in degree `k`.
    pub fn init<F: Field<Elem = E>>(f: &F, gf: &GraphFiltration, v: usize, k: usize) -> Self {
        let boundary = boundary_space(f, gf.complex(), gf.mask(v), k);
        let candidate = cycle_space(f, gf.complex(), gf.mask(v), k);
        VertexState { vertex: v, boundary, candidate }
    }

    /// Number of `k`-simplices.
    pub fn s(&self) -> usize {
        self.candidate.ambient_dim()
    }

    pub fn b(&self) -> usize {
        self.boundary.dim()
    }

    pub fn z(&self) -> usize {
        self.candidate.dim() - self.boundary.dim()
    }

    pub fn c(&self) -> usize {
        self.s() - self.candidate.dim()
    }

    pub fn boundary(&self) -> &Subspace<E> {
        &self.boundary
    }

    /// `Z + B`.
    pub fn candidate(&self) -> &Subspace<E> {
        &self.candidate
    }

    /// Square matrix with pairwise orthogonal columns `(B | Z | C)`: the first
    /// `b` span `B`, the first `b + z` span `Z + B`. Needs an inner product.
    pub fn frame<F: Field<Elem = E>>(&self, f: &F) -> Result<Matrix<E>> {
        let s = self.s();
        let cols: Vec<Vec<E>> = self
            .boundary
            .vectors()
            .into_iter()
            .chain(self.candidate.vectors())
            .chain(Matrix::identity(f, s).row_vecs())
            .collect();
        let orth = exactlinalg::orthogonalize(f, &Matrix::from_cols(s, &cols))?;
        Ok(orth.matrix)
    }
}

/// Inclusion data of one edge in degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeContext {
    pub edge: usize,
    pub src: usize,
    pub dst: usize,
    /// Target position of each source `k`-simplex.
    embedding: Vec<usize>,
    target_len: usize,
    /// Target position of the single `k`-simplex added by the edge, if any.
    pub added: Option<usize>,
}

impl EdgeContext {
    pub fn new(gf: &GraphFiltration, edge: usize, k: usize) -> Self {
        let (src, dst) = gf.edge(edge);
        let complex = gf.complex();
        let from = gf.mask(src).simplices_of_dim(complex, k);
        let to = gf.mask(dst).simplices_of_dim(complex, k);
        let embedding: Vec<usize> = from.iter().map(|id| to.binary_search(id).expect("inclusion")).collect();
        let added = match gf.mask(dst).difference(gf.mask(src))[..] {
            [id] if complex.dim_of(id) == k => to.binary_search(&id).ok(),
            _ => None,
        };
        EdgeContext { edge, src, dst, embedding, target_len: to.len(), added }
    }

    pub fn image<F: Field>(&self, f: &F, v: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        let rows = v
            .vectors()
            .into_iter()
            .map(|x| {
                let mut y = vec![f.zero(); self.target_len];
                for (p, val) in self.embedding.iter().zip(x) {
                    y[*p] = val;
                }
                y
            })
            .collect();
        Subspace::from_vectors(f, self.target_len, rows)
    }

    pub fn preimage<F: Field>(&self, f: &F, w: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        let annihilator = if w.dim() == 0 {
            Matrix::identity(f, self.target_len)
        } else {
            exactlinalg::nullspace(f, w.basis())
        };
        let restricted = annihilator.select_cols(&self.embedding);
        if restricted.rows() == 0 {
            return Subspace::full(f, self.embedding.len());
        }
        Subspace::from_rows(f, exactlinalg::nullspace(f, &restricted))
    }
}

/// The four local rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    PullBoundary,
    PushBoundary,
    ShrinkTarget,
    ShrinkSource,
}

fn sum<F: Field>(f: &F, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> Subspace<F::Elem> {
    a.sum(f, b).expect("same ambient space")
}

fn meet<F: Field>(f: &F, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> Subspace<F::Elem> {
    a.intersect(f, b).expect("same ambient space")
}

/// First violated rule on an edge, if any.
pub fn deficiency<F: Field>(
    f: &F,
    ctx: &EdgeContext,
    si: &VertexState<F::Elem>,
    sj: &VertexState<F::Elem>,
) -> Option<Rule> {
    if !si.boundary.contains(f, &ctx.preimage(f, &sj.boundary)) {
        return Some(Rule::PullBoundary);
    }
    if !sj.boundary.contains(f, &ctx.image(f, &si.boundary)) {
        return Some(Rule::PushBoundary);
    }
    if !sum(f, &ctx.image(f, &si.candidate), &sj.boundary).contains(f, &sj.candidate) {
        return Some(Rule::ShrinkTarget);
    }
    if !sum(f, &ctx.preimage(f, &sj.candidate), &si.boundary).contains(f, &si.candidate) {
        return Some(Rule::ShrinkSource);
    }
    None
}

/// Applies one rule; returns the vertex whose state changed.
pub fn apply<F: Field>(
    f: &F,
    ctx: &EdgeContext,
    si: &mut VertexState<F::Elem>,
    sj: &mut VertexState<F::Elem>,
    rule: Rule,
) -> usize {
    match rule {
        Rule::PullBoundary => {
            let extra = ctx.preimage(f, &sj.boundary);
            si.boundary = sum(f, &si.boundary, &extra);
            si.candidate = sum(f, &si.candidate, &extra);
            ctx.src
        }
        Rule::PushBoundary => {
            let extra = ctx.image(f, &si.boundary);
            sj.boundary = sum(f, &sj.boundary, &extra);
            sj.candidate = sum(f, &sj.candidate, &extra);
            ctx.dst
        }
        Rule::ShrinkTarget => {
            let allowed = sum(f, &ctx.image(f, &si.candidate), &sj.boundary);
            sj.candidate = meet(f, &sj.candidate, &allowed);
            ctx.dst
        }
        Rule::ShrinkSource => {
            let allowed = sum(f, &ctx.preimage(f, &sj.candidate), &si.boundary);
            si.candidate = meet(f, &si.candidate, &allowed);
            ctx.src
        }
    }
}

/// Applies rules to one edge until it is consistent; returns the number of
/// updates.
pub fn add_edge<F: Field>(
    f: &F,
    ctx: &EdgeContext,
    si: &mut VertexState<F::Elem>,
    sj: &mut VertexState<F::Elem>,
) -> usize {
    let mut updates = 0;
    while let Some(rule) = deficiency(f, ctx, si, sj) {
        apply(f, ctx, si, sj, rule);
        updates += 1;
    }
    updates
}

/// One recorded state change: vertex and its `(b, z)` afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Update {
    pub vertex: usize,
    pub rule: Rule,
    pub b: usize,
    pub z: usize,
}

#[derive(Clone, Debug)]
pub struct Fixpoint<E> {
    pub states: HashMap<usize, VertexState<E>>,
    pub contexts: Vec<EdgeContext>,
    pub trace: Vec<Update>,
}

impl<E: Clone> Fixpoint<E> {
    pub fn updates(&self) -> usize {
        self.trace.len()
    }

    /// Common `z` of the (connected) subgraph.
    pub fn z(&self) -> usize {
        self.states.values().next().map_or(0, VertexState::z)
    }
}

/// Adds the edges in `edge_order` one at a time, restoring consistency with
/// a FIFO worklist after each.
pub fn propagate<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    sel: &SubgraphSelector,
    k: usize,
    edge_order: &[usize],
) -> Fixpoint<F::Elem> {
    let mut states: HashMap<usize, VertexState<F::Elem>> =
        sel.vertices().iter().map(|&v| (v, VertexState::init(f, gf, v, k))).collect();
    let mut contexts: Vec<EdgeContext> = Vec::with_capacity(edge_order.len());
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut trace = Vec::new();
    for &e in edge_order {
        let ctx = EdgeContext::new(gf, e, k);
        let slot = contexts.len();
        incident.entry(ctx.src).or_default().push(slot);
        incident.entry(ctx.dst).or_default().push(slot);
        contexts.push(ctx);
        let mut queue = VecDeque::from([slot]);
        let mut queued = vec![false; contexts.len()];
        queued[slot] = true;
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            let ctx = &contexts[c];
            loop {
                let mut si = states.remove(&ctx.src).unwrap();
                let mut sj = states.remove(&ctx.dst).unwrap();
                let rule = deficiency(f, ctx, &si, &sj);
                let changed = rule.map(|r| (r, apply(f, ctx, &mut si, &mut sj, r)));
                states.insert(ctx.src, si);
                states.insert(ctx.dst, sj);
                let Some((rule, w)) = changed else { break };
                let st = &states[&w];
                trace.push(Update { vertex: w, rule, b: st.b(), z: st.z() });
                for &other in &incident[&w] {
                    if other != c && !queued[other] {
                        queued[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
    }
    Fixpoint { states, contexts, trace }
}

/// Common `z` after propagation in canonical edge order.
pub fn fixpoint_value<F: Field>(f: &F, gf: &GraphFiltration, sel: &SubgraphSelector, k: usize) -> Result<usize> {
    let order = super::canonical_edge_order(gf, sel)?;
    Ok(propagate(f, gf, sel, k, &order).z())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures;
    use crate::simplicial::{chain_inclusion, GlobalComplex, SubcomplexMask};
    use crate::ssss;
    use crate::parallel::Execution;

    fn triangle_pair() -> GraphFiltration {
        let gf = fixtures::triangle_path();
        let vs = vec![("hollow".to_string(), gf.mask(6).clone()), ("filled".to_string(), gf.mask(7).clone())];
        GraphFiltration::new(gf.complex().clone(), vs, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn init_counts() {
        let q = Rationals;
        let gf = triangle_pair();
        let hollow = VertexState::init(&q, &gf, 0, 1);
        assert_eq!((hollow.b(), hollow.z(), hollow.c()), (0, 1, 2));
        let filled = VertexState::init(&q, &gf, 1, 1);
        assert_eq!((filled.b(), filled.z(), filled.c()), (1, 0, 2));
        let c = GlobalComplex::close_under_faces([]);
        let empty = GraphFiltration::new(c, vec![("E".into(), SubcomplexMask::empty())], vec![]).unwrap();
        assert_eq!(VertexState::init(&q, &empty, 0, 1).s(), 0);
    }

    #[test]
    fn filling_kills_on_both_sides() {
        let q = Rationals;
        let gf = triangle_pair();
        let ctx = EdgeContext::new(&gf, 0, 1);
        let mut si = VertexState::init(&q, &gf, 0, 1);
        let mut sj = VertexState::init(&q, &gf, 1, 1);
        add_edge(&q, &ctx, &mut si, &mut sj);
        assert_eq!((si.z(), sj.z()), (0, 0));
    }

    #[test]
    fn identity_edge_is_at_rest() {
        let q = Rationals;
        let gf = fixtures::shared_cycle();
        let vs = vec![("A".to_string(), gf.mask(0).clone()), ("B".to_string(), gf.mask(0).clone())];
        let twin = GraphFiltration::new(gf.complex().clone(), vs, vec![(0, 1)]).unwrap();
        let ctx = EdgeContext::new(&twin, 0, 1);
        let mut si = VertexState::init(&q, &twin, 0, 1);
        let mut sj = VertexState::init(&q, &twin, 1, 1);
        assert_eq!(add_edge(&q, &ctx, &mut si, &mut sj), 0);
    }

    fn explicit_checks<F: Field>(f: &F, gf: &GraphFiltration, fp: &Fixpoint<F::Elem>, k: usize) {
        // image and preimage recomputed from the chain inclusion matrix
        for ctx in &fp.contexts {
            let (si, sj) = (&fp.states[&ctx.src], &fp.states[&ctx.dst]);
            let inc = chain_inclusion(f, gf.complex(), gf.mask(ctx.src), gf.mask(ctx.dst), k);
            let push = |s: &Subspace<F::Elem>| {
                Subspace::from_rows(f, exactlinalg::mul(f, s.basis(), &inc.transpose()))
            };
            let image_zb = push(si.candidate()).sum(f, sj.boundary()).unwrap();
            assert_eq!(&image_zb, sj.candidate());
            let pulled: Vec<Vec<F::Elem>> = (0..si.s())
                .map(|c| inc.column(c))
                .collect();
            // x is in the preimage of B_j iff inc x is in B_j
            let solve = sj.boundary().basis().vstack(&Matrix::from_rows(sj.s(), pulled).clone());
            let ker = exactlinalg::nullspace(f, &solve.transpose());
            let b = sj.b();
            let coeffs: Vec<Vec<F::Elem>> = ker.row_vecs().into_iter().map(|r| r[b..].to_vec()).collect();
            let pre = Subspace::from_vectors(f, si.s(), coeffs);
            assert_eq!(&pre, si.boundary());
        }
    }

    #[test]
    fn random_fixpoints_satisfy_invariants() {
        for seed in 0..25 {
            let gf = fixtures::random_dag(seed, 6, 15);
            let sel = SubgraphSelector::whole(&gf).unwrap();
            let order = crate::subgraph::canonical_edge_order(&gf, &sel).unwrap();
            for k in 0..2 {
                let q = Rationals;
                let fp = propagate(&q, &gf, &sel, k, &order);
                explicit_checks(&q, &gf, &fp, k);
                let z = fp.z();
                assert!(fp.states.values().all(|s| s.z() == z));
                let bound: usize = fp.states.values().map(|s| 2 * s.s()).sum();
                assert!(fp.updates() <= bound);
                for st in fp.states.values() {
                    let m = st.frame(&q).unwrap();
                    assert_eq!(m.cols(), st.s());
                    for a in 0..m.cols() {
                        for b in (a + 1)..m.cols() {
                            assert!(q.is_zero(&exactlinalg::dot(&q, &m.column(a), &m.column(b))));
                        }
                    }
                }
                let fp_p = propagate(&PrimeField::default_prime(), &gf, &sel, k, &order);
                explicit_checks(&PrimeField::default_prime(), &gf, &fp_p, k);
            }
        }
    }

    #[test]
    fn monotone_evolution() {
        for seed in 0..15 {
            let gf = fixtures::random_dag(seed, 6, 15);
            let sel = SubgraphSelector::whole(&gf).unwrap();
            let order = crate::subgraph::canonical_edge_order(&gf, &sel).unwrap();
            let f = PrimeField::default_prime();
            let fp = propagate(&f, &gf, &sel, 1, &order);
            let mut last: HashMap<usize, (usize, usize)> =
                sel.vertices().iter().map(|&v| { let s = VertexState::init(&f, &gf, v, 1); (v, (s.b(), s.z())) }).collect();
            for u in &fp.trace {
                let (b, z) = last[&u.vertex];
                assert!(u.b >= b && u.z <= z && (u.b > b || u.z < z));
                last.insert(u.vertex, (u.b, u.z));
            }
        }
    }

    #[test]
    fn path_fixpoint_is_standard_persistence() {
        let f = PrimeField::default_prime();
        for seed in 0..6 {
            let gf = fixtures::random_path(seed, 18);
            let table = ssss::all_pairs_rank(&f, &gf, 1, Execution::Sequential).unwrap();
            let n = gf.vertex_count();
            for (i, j) in [(0, n - 1), (1, n / 2), (n / 3, 2 * n / 3)] {
                let sel = SubgraphSelector::new(&gf, i..=j).unwrap();
                assert_eq!(Some(fixpoint_value(&f, &gf, &sel, 1).unwrap()), table.get(i, j));
            }
        }
    }

    #[test]
    fn local_value_misses_combined_classes() {
        // the sum of the two cycles survives both fillings, but each
        // single edge forces one cycle into B at the shared vertex
        let q = Rationals;
        let gf = fixtures::split_fillings();
        let sel = SubgraphSelector::whole(&gf).unwrap();
        assert_eq!(fixpoint_value(&q, &gf, &sel, 1).unwrap(), 0);
        assert_eq!(crate::subgraph::persistence_rank(&q, &gf, &sel, 1).unwrap().rank, 1);
    }
}
