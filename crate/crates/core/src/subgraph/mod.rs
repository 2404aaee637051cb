//! Persistent homology of a connected subgraph: the largest vector space
//! that maps injectively into every `H_k(X_v)` of the subgraph, compatibly
//! with all edge maps.
//!
//! [`persistence_rank`] adds the subgraph's edges one at a time. Every
//! connected component `C` of the partial graph carries a parameter space
//! `L_C` of compatible families `(x_v)_{v in C}` together with the matrices
//! `P_v : L_C -> H_k(X_v)`. An edge inside a component cuts `L_C` down to the
//! kernel of `F_e P_i - P_j`; an edge between two components replaces them
//! with the fibre product. At the end the answer is the largest dimension of
//! a subspace of `L` meeting every `ker P_v` trivially, which over an
//! infinite field is `min_v rank P_v`.
//!
//! [`state`] holds the local fixpoint engine on chain-level subspace pairs
//! and [`oracle`] an independent brute-force reference.

pub mod oracle;
pub mod state;

use std::collections::HashMap;

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::error::{Error, Result};
use crate::exactlinalg::{self, Matrix, Subspace};
use crate::field::Field;
use crate::parallel::{self, Execution};
use crate::simplicial::{induced_map, HomologyBasis};

/// Betti numbers and induced homology maps for (part of) a graph filtration.
#[derive(Clone, Debug)]
pub struct InducedMaps<E> {
    k: usize,
    dims: HashMap<usize, usize>,
    maps: HashMap<usize, Matrix<E>>,
}

impl<E: Clone + Send + Sync> InducedMaps<E> {
    /// Computes homology bases for the given vertices and maps for the given
    /// edges (whose endpoints must be among the vertices).
    pub fn new<F: Field<Elem = E>>(
        f: &F,
        gf: &GraphFiltration,
        vertices: &[usize],
        edges: &[usize],
        k: usize,
        exec: Execution,
    ) -> Self {
        let bases: HashMap<usize, HomologyBasis<E>> = parallel::map(exec, vertices.to_vec(), |v| {
            (v, HomologyBasis::new(f, gf.complex(), gf.mask(v), k))
        })
        .into_iter()
        .collect();
        let maps = parallel::map(exec, edges.to_vec(), |e| {
            let (u, v) = gf.edge(e);
            (e, induced_map(f, &bases[&u], &bases[&v]))
        })
        .into_iter()
        .collect();
        let dims = bases.iter().map(|(&v, b)| (v, b.dim())).collect();
        InducedMaps { k, dims, maps }
    }

    pub fn whole<F: Field<Elem = E>>(f: &F, gf: &GraphFiltration, k: usize, exec: Execution) -> Self {
        let vertices: Vec<usize> = (0..gf.vertex_count()).collect();
        let edges: Vec<usize> = (0..gf.edge_count()).collect();
        Self::new(f, gf, &vertices, &edges, k, exec)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[&v]
    }

    /// Matrix of the map on edge `e`, of shape `dim(dst) x dim(src)`.
    pub fn map(&self, e: usize) -> &Matrix<E> {
        &self.maps[&e]
    }
}

/// Outcome of a subgraph query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceResult {
    pub selector: SubgraphSelector,
    pub k: usize,
    pub field: String,
    pub rank: usize,
    /// Dimension of the space of compatible families over the subgraph.
    pub family_dim: usize,
}

/// Selector edges sorted by topological position of (source, target).
pub fn canonical_edge_order(gf: &GraphFiltration, sel: &SubgraphSelector) -> Result<Vec<usize>> {
    let topo = gf.topological_order()?;
    let mut rank = vec![0; gf.vertex_count()];
    for (i, &v) in topo.iter().enumerate() {
        rank[v] = i;
    }
    let mut edges = sel.edges().to_vec();
    edges.sort_by_key(|&e| {
        let (u, v) = gf.edge(e);
        (rank[u], rank[v], e)
    });
    Ok(edges)
}

struct Component<E> {
    dim: usize,
    projections: Vec<(usize, Matrix<E>)>,
}

/// Projection matrices keyed by vertex.
pub type Projections<E> = Vec<(usize, Matrix<E>)>;

/// Space of compatible families and the projection onto each vertex, built by adding
/// `edge_order` one edge at a time.
pub fn compatible_families<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    maps: &InducedMaps<F::Elem>,
    sel: &SubgraphSelector,
    edge_order: &[usize],
) -> (usize, Projections<F::Elem>) {
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Option<Component<F::Elem>>> = Vec::new();
    for &v in sel.vertices() {
        let h = maps.dim(v);
        owner.insert(v, comps.len());
        comps.push(Some(Component { dim: h, projections: vec![(v, Matrix::identity(f, h))] }));
    }
    let proj = |c: &Component<F::Elem>, v: usize| c.projections.iter().find(|(w, _)| *w == v).unwrap().1.clone();
    for &e in edge_order {
        let (i, j) = gf.edge(e);
        let (ci, cj) = (owner[&i], owner[&j]);
        let fe = maps.map(e);
        if ci == cj {
            let comp = comps[ci].as_mut().unwrap();
            let constraint = sub(f, &exactlinalg::mul(f, fe, &proj(comp, i)), &proj(comp, j));
            let kernel = exactlinalg::nullspace(f, &constraint).transpose();
            comp.dim = kernel.cols();
            for (_, p) in comp.projections.iter_mut() {
                *p = exactlinalg::mul(f, p, &kernel);
            }
        } else {
            let a = comps[ci].take().unwrap();
            let b = comps[cj].take().unwrap();
            let left = exactlinalg::mul(f, fe, &proj(&a, i));
            let right = neg(f, &proj(&b, j));
            let kernel = exactlinalg::nullspace(f, &left.hstack(&right)).transpose();
            let top = kernel.select_rows(&(0..a.dim).collect::<Vec<_>>());
            let bottom = kernel.select_rows(&(a.dim..a.dim + b.dim).collect::<Vec<_>>());
            let mut projections = Vec::with_capacity(a.projections.len() + b.projections.len());
            for (v, p) in a.projections {
                projections.push((v, exactlinalg::mul(f, &p, &top)));
            }
            for (v, p) in b.projections {
                owner.insert(v, ci);
                projections.push((v, exactlinalg::mul(f, &p, &bottom)));
            }
            comps[ci] = Some(Component { dim: kernel.cols(), projections });
        }
    }
    let mut live = comps.into_iter().flatten();
    let comp = live.next().expect("selector is nonempty");
    assert!(live.next().is_none(), "selector is connected");
    (comp.dim, comp.projections)
}

fn sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let data = a.entries().iter().zip(b.entries()).map(|(x, y)| f.sub(x, y)).collect();
    Matrix::from_vec(a.rows(), a.cols(), data)
}

fn neg<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Matrix::from_vec(a.rows(), a.cols(), a.entries().iter().map(|x| f.neg(x)).collect())
}

/// Largest dimension of a subspace of `F^dim` meeting every `kernels[i]`
/// trivially. Exact over infinite fields, and over `Z/p` when `p` is at
/// least the number of nonzero kernels; otherwise small instances are
/// searched exhaustively.
pub(crate) fn max_avoiding_dim<F: Field>(f: &F, dim: usize, kernels: &[Subspace<F::Elem>]) -> Result<usize> {
    let worst = kernels.iter().map(Subspace::dim).max().unwrap_or(0);
    let nonzero = kernels.iter().filter(|k| k.dim() > 0).count() as u64;
    match f.order() {
        Some(q) if q < nonzero => oracle::exhaustive_avoiding_dim(f, dim, kernels),
        _ => Ok(dim - worst),
    }
}

/// Rank of the persistent homology of the subgraph `sel`, adding edges in
/// `edge_order`.
pub fn persistence_rank_with_order<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    maps: &InducedMaps<F::Elem>,
    sel: &SubgraphSelector,
    edge_order: &[usize],
) -> Result<(usize, usize)> {
    let (dim, projections) = compatible_families(f, gf, maps, sel, edge_order);
    let kernels: Vec<Subspace<F::Elem>> =
        projections.iter().map(|(_, p)| Subspace::from_rows(f, exactlinalg::nullspace(f, p))).collect();
    Ok((max_avoiding_dim(f, dim, &kernels)?, dim))
}

/// Rank of the persistent homology of a connected subgraph.
pub fn persistence_rank<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    sel: &SubgraphSelector,
    k: usize,
) -> Result<PersistenceResult> {
    gf.validate()?;
    let maps = InducedMaps::new(f, gf, sel.vertices(), sel.edges(), k, Execution::Sequential);
    persistence_rank_prepared(f, gf, &maps, sel)
}

/// As [`persistence_rank`], reusing precomputed homology data.
pub fn persistence_rank_prepared<F: Field>(
    f: &F,
    gf: &GraphFiltration,
    maps: &InducedMaps<F::Elem>,
    sel: &SubgraphSelector,
) -> Result<PersistenceResult> {
    if sel.vertices().iter().any(|&v| v >= gf.vertex_count()) {
        return Err(Error::InvalidSelector("selector does not belong to this graph".into()));
    }
    let order = canonical_edge_order(gf, sel)?;
    let (rank, family_dim) = persistence_rank_with_order(f, gf, maps, sel, &order)?;
    Ok(PersistenceResult { selector: sel.clone(), k: maps.degree(), field: f.name(), rank, family_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dagmodel::refine_to_simplexwise;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures;
    use crate::simplicial::betti;
    use crate::ssss;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_vertex_is_betti() {
        let q = Rationals;
        let gf = fixtures::triangle_path();
        for v in 0..gf.vertex_count() {
            let sel = SubgraphSelector::new(&gf, [v]).unwrap();
            let r = persistence_rank(&q, &gf, &sel, 1).unwrap();
            assert_eq!(r.rank, betti(&q, gf.complex(), gf.mask(v), 1));
        }
    }

    #[test]
    fn intervals_match_standard_persistence() {
        let f = PrimeField::default_prime();
        for seed in 0..6 {
            let gf = fixtures::random_path(seed, 20);
            let maps = InducedMaps::whole(&f, &gf, 1, Execution::Sequential);
            let table = ssss::all_pairs_rank(&f, &gf, 1, Execution::Sequential).unwrap();
            for i in 0..gf.vertex_count() {
                for j in i..gf.vertex_count() {
                    let sel = SubgraphSelector::new(&gf, i..=j).unwrap();
                    let r = persistence_rank_prepared(&f, &gf, &maps, &sel).unwrap();
                    assert_eq!(Some(r.rank), table.get(i, j));
                }
            }
        }
    }

    #[test]
    fn order_independent() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..10 {
            let gf = fixtures::random_dag(seed, 6, 15);
            let sel = SubgraphSelector::whole(&gf).unwrap();
            let maps = InducedMaps::whole(&q, &gf, 1, Execution::Sequential);
            let mut order = sel.edges().to_vec();
            let base = persistence_rank_with_order(&q, &gf, &maps, &sel, &order).unwrap();
            for _ in 0..5 {
                order.shuffle(&mut rng);
                assert_eq!(persistence_rank_with_order(&q, &gf, &maps, &sel, &order).unwrap(), base);
            }
        }
    }

    #[test]
    fn refinement_does_not_change_rank() {
        let q = Rationals;
        for seed in 0..8 {
            let gf = fixtures::random_dag(seed, 5, 12);
            let dag = refine_to_simplexwise(&gf).unwrap();
            let sel = SubgraphSelector::whole(&gf).unwrap();
            let a = persistence_rank(&q, &gf, &sel, 1).unwrap().rank;
            let b = persistence_rank(&q, dag.graph(), &sel.lift(&dag), 1).unwrap().rank;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn two_sources_share_a_cycle() {
        let q = Rationals;
        let gf = fixtures::shared_cycle();
        let sel = SubgraphSelector::whole(&gf).unwrap();
        assert_eq!(persistence_rank(&q, &gf, &sel, 1).unwrap().rank, 1);
    }

    #[test]
    fn sum_of_two_classes_survives_both_fillings() {
        // one vertex with two cycles, each filled along a different edge:
        // the sum of the two classes injects into both targets
        let q = Rationals;
        let gf = fixtures::split_fillings();
        let sel = SubgraphSelector::whole(&gf).unwrap();
        assert_eq!(persistence_rank(&q, &gf, &sel, 1).unwrap().rank, 1);
        assert_eq!(oracle::oracle_rank(&q, &gf, &sel, 1).unwrap(), 1);
    }
}

#[cfg(test)]
mod oracle_agreement {
    use super::*;
    use crate::dagmodel::refine_to_simplexwise;
    use crate::field::Rationals;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_refined_dags_match_oracle() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..30 {
            let gf = fixtures::random_dag(seed, 6, 15);
            let dag = refine_to_simplexwise(&gf).unwrap();
            let sel = fixtures::random_connected_selector(&mut rng, &gf).lift(&dag);
            for k in 0..2 {
                let got = persistence_rank(&q, dag.graph(), &sel, k).unwrap().rank;
                let want = oracle::oracle_rank(&q, dag.graph(), &sel, k).unwrap();
                assert_eq!(got, want, "seed {seed} k {k}");
            }
        }
    }
}
