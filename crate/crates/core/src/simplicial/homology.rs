//! Homology bases from column reduction.
//!
//! For a subcomplex `X` and dimension `k` the boundary matrix of `d_{k+1}` is
//! column-reduced (rows in id order), and the `d_k` matrix is reduced while
//! tracking the change of basis. Zero columns of the latter give cycles whose
//! lowest entry is the simplex itself; those whose simplex is not the pivot
//! of a reduced boundary column are the essential classes and serve as
//! homology representatives. Together, reduced boundary columns and
//! representatives have pairwise distinct pivots, which makes writing a
//! cycle in homology coordinates a single back-substitution pass.

use std::collections::HashMap;

use crate::exactlinalg::Matrix;
use crate::field::Field;
use crate::simplicial::{facet_sign, GlobalComplex, SubcomplexMask};
use crate::sparse::{self, SparseVec};

#[derive(Clone, Debug)]
pub struct HomologyBasis<E> {
    k: usize,
    /// Ids of the k-simplices of the subcomplex; positions index chains.
    chain_ids: Vec<usize>,
    /// Reduced boundary columns keyed by pivot position.
    boundary_pivots: HashMap<usize, SparseVec<E>>,
    /// Representative cycles, ordered by pivot position; pivot coefficient is one.
    reps: Vec<SparseVec<E>>,
    rep_of_pivot: HashMap<usize, usize>,
}

impl<E: Clone> HomologyBasis<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, complex: &GlobalComplex, sub: &SubcomplexMask, k: usize) -> Self {
        let chain_ids = sub.simplices_of_dim(complex, k);
        let pos_of = |id: usize, ids: &[usize]| ids.binary_search(&id).expect("closed subcomplex");

        // reduce d_{k+1}
        let mut boundary_pivots: HashMap<usize, SparseVec<E>> = HashMap::new();
        for id in sub.simplices_of_dim(complex, k + 1) {
            let mut col: SparseVec<E> = complex
                .facets(id)
                .iter()
                .enumerate()
                .map(|(i, &face)| (pos_of(face, &chain_ids), facet_sign(f, i)))
                .collect();
            col.sort_by_key(|(p, _)| *p);
            while let Some(l) = sparse::low(&col) {
                let Some(piv) = boundary_pivots.get(&l) else { break };
                let c = f.div(&col.last().unwrap().1, &piv.last().unwrap().1);
                col = sparse::sub_scaled(f, &col, &c, piv);
            }
            if let Some(l) = sparse::low(&col) {
                boundary_pivots.insert(l, col);
            }
        }

        // reduce d_k, tracking the basis change, to find cycles
        let mut reps = Vec::new();
        let mut rep_of_pivot = HashMap::new();
        let lower_ids = if k > 0 { sub.simplices_of_dim(complex, k - 1) } else { Vec::new() };
        let mut pivots: HashMap<usize, (SparseVec<E>, SparseVec<E>)> = HashMap::new();
        for (p, &id) in chain_ids.iter().enumerate() {
            let mut col: SparseVec<E> = if k == 0 {
                Vec::new()
            } else {
                let mut c: SparseVec<E> = complex
                    .facets(id)
                    .iter()
                    .enumerate()
                    .map(|(i, &face)| (pos_of(face, &lower_ids), facet_sign(f, i)))
                    .collect();
                c.sort_by_key(|(q, _)| *q);
                c
            };
            let mut v: SparseVec<E> = vec![(p, f.one())];
            while let Some(l) = sparse::low(&col) {
                let Some((pc, pv)) = pivots.get(&l) else { break };
                let c = f.div(&col.last().unwrap().1, &pc.last().unwrap().1);
                col = sparse::sub_scaled(f, &col, &c, pc);
                v = sparse::sub_scaled(f, &v, &c, pv);
            }
            match sparse::low(&col) {
                Some(l) => {
                    pivots.insert(l, (col, v));
                }
                None => {
                    if !boundary_pivots.contains_key(&p) {
                        rep_of_pivot.insert(p, reps.len());
                        reps.push(v);
                    }
                }
            }
        }
        HomologyBasis { k, chain_ids, boundary_pivots, reps, rep_of_pivot }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Betti number.
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn chain_ids(&self) -> &[usize] {
        &self.chain_ids
    }

    /// Dimension of the boundary space `B_k`.
    pub fn boundary_rank(&self) -> usize {
        self.boundary_pivots.len()
    }

    /// Representative cycle `i` as `(simplex id, coefficient)` pairs.
    pub fn representative(&self, i: usize) -> Vec<(usize, E)> {
        self.reps[i].iter().map(|(p, x)| (self.chain_ids[*p], x.clone())).collect()
    }

    /// Homology coordinates of a chain given over simplex ids; `None` if the
    /// chain is not a cycle of this subcomplex.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, chain: &[(usize, E)]) -> Option<Vec<E>> {
        let mut col: SparseVec<E> = Vec::with_capacity(chain.len());
        for (id, x) in chain {
            if f.is_zero(x) {
                continue;
            }
            let p = self.chain_ids.binary_search(id).ok()?;
            col.push((p, x.clone()));
        }
        col.sort_by_key(|(p, _)| *p);
        let mut coords = vec![f.zero(); self.reps.len()];
        while let Some(l) = sparse::low(&col) {
            let top = col.last().unwrap().1.clone();
            if let Some(piv) = self.boundary_pivots.get(&l) {
                let c = f.div(&top, &piv.last().unwrap().1);
                col = sparse::sub_scaled(f, &col, &c, piv);
            } else if let Some(&r) = self.rep_of_pivot.get(&l) {
                coords[r] = top.clone();
                col = sparse::sub_scaled(f, &col, &top, &self.reps[r]);
            } else {
                return None;
            }
        }
        Some(coords)
    }

    /// Whether a chain over simplex ids is a boundary of this subcomplex.
    pub fn is_boundary<F: Field<Elem = E>>(&self, f: &F, chain: &[(usize, E)]) -> bool {
        self.coordinates(f, chain).is_some_and(|c| c.iter().all(|x| f.is_zero(x)))
    }
}

/// Matrix (`dst.dim() x src.dim()`) of the map on homology induced by the
/// inclusion of the source subcomplex into the destination.
pub fn induced_map<F: Field>(f: &F, src: &HomologyBasis<F::Elem>, dst: &HomologyBasis<F::Elem>) -> Matrix<F::Elem> {
    let cols: Vec<Vec<F::Elem>> = (0..src.dim())
        .map(|i| dst.coordinates(f, &src.representative(i)).expect("inclusion maps cycles to cycles"))
        .collect();
    if cols.is_empty() {
        return Matrix::zeros(f, dst.dim(), 0);
    }
    Matrix::from_cols(dst.dim(), &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg;
    use crate::field::{PrimeField, Rationals};
    use crate::simplicial::{betti, induced_rank_dense, Simplex};

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn betti_agrees_with_dense() {
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        let c = super::super::tests::rp2();
        let full = c.full_mask();
        for k in 0..3 {
            assert_eq!(HomologyBasis::new(&q, &c, &full, k).dim(), betti(&q, &c, &full, k));
            assert_eq!(HomologyBasis::new(&f2, &c, &full, k).dim(), betti(&f2, &c, &full, k));
        }
    }

    #[test]
    fn filling_a_triangle_kills_its_cycle() {
        let q = Rationals;
        let c = GlobalComplex::close_under_faces([s(&[0, 1, 2])]);
        let t = c.id_of(&s(&[0, 1, 2])).unwrap();
        let full = c.full_mask();
        let hollow = SubcomplexMask::from_ids_unchecked(full.members().iter().copied().filter(|&i| i != t));
        let hb = HomologyBasis::new(&q, &c, &hollow, 1);
        let fb = HomologyBasis::new(&q, &c, &full, 1);
        assert_eq!(hb.dim(), 1);
        assert_eq!(fb.dim(), 0);
        let m = induced_map(&q, &hb, &fb);
        assert_eq!((m.rows(), m.cols()), (0, 1));
        assert!(fb.is_boundary(&q, &hb.representative(0)));
        assert_eq!(exactlinalg::rank(&q, &m), induced_rank_dense(&q, &c, &hollow, &full, 1));
    }

    #[test]
    fn coordinates_reject_non_cycles() {
        let q = Rationals;
        let c = GlobalComplex::close_under_faces([s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        let hb = HomologyBasis::new(&q, &c, &c.full_mask(), 1);
        let e = c.id_of(&s(&[0, 1])).unwrap();
        assert!(hb.coordinates(&q, &[(e, q.one())]).is_none());
        let rep = hb.representative(0);
        assert_eq!(hb.coordinates(&q, &rep).unwrap(), vec![q.one()]);
    }
}
