//! Simplicial complexes, boundary operators and homology ranks.
//!
//! A [`GlobalComplex`] is the ambient complex; every space in a graph
//! filtration is a [`SubcomplexMask`] of it. Simplex ids are face-ordered:
//! every face has a smaller id than its cofaces, so ascending id order is a
//! valid filtration order of any subcomplex.

mod homology;

pub use homology::{induced_map, HomologyBasis};

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exactlinalg::{self, Matrix, Subspace};
use crate::field::Field;

/// An oriented simplex: strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedSimplex(vertices, "empty".into()));
        }
        let original = vertices.clone();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(original, "duplicate vertices".into()));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-1 faces; face `i` omits vertex `i` and carries sign `(-1)^i`.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalComplex {
    simplices: Vec<Simplex>,
    /// Facet ids of each simplex, in omitted-vertex order.
    facets: Vec<Vec<usize>>,
    index: HashMap<Simplex, usize>,
}

impl GlobalComplex {
    /// Smallest complex containing every seed simplex, ids ordered by
    /// dimension and then lexicographically.
    pub fn close_under_faces(seed: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all = BTreeSet::new();
        let mut stack: Vec<Simplex> = seed.into_iter().collect();
        while let Some(s) = stack.pop() {
            if all.contains(&(s.dim(), s.clone())) {
                continue;
            }
            stack.extend(s.facets());
            all.insert((s.dim(), s));
        }
        Self::from_simplices(all.into_iter().map(|(_, s)| s).collect()).expect("closure is face-ordered")
    }

    /// Uses the given order as ids; the list must be closed under faces and
    /// face-ordered.
    pub fn from_simplices(simplices: Vec<Simplex>) -> Result<Self> {
        let mut index = HashMap::with_capacity(simplices.len());
        let mut facets = Vec::with_capacity(simplices.len());
        for (id, s) in simplices.iter().enumerate() {
            let mut fs = Vec::new();
            for face in s.facets() {
                match index.get(&face) {
                    Some(&fid) => fs.push(fid),
                    None => {
                        return Err(if simplices.contains(&face) {
                            Error::NotFaceOrdered(id)
                        } else {
                            Error::NotClosed { simplex: id, face: face.0 }
                        })
                    }
                }
            }
            if index.insert(s.clone(), id).is_some() {
                return Err(Error::MalformedSimplex(s.0.clone(), "listed twice".into()));
            }
            facets.push(fs);
        }
        Ok(GlobalComplex { simplices, facets, index })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn facets(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    pub fn dim_of(&self, id: usize) -> usize {
        self.simplices[id].dim()
    }

    pub fn id_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn full_mask(&self) -> SubcomplexMask {
        SubcomplexMask { members: (0..self.len()).collect() }
    }
}

/// A subcomplex of a [`GlobalComplex`], as a sorted set of simplex ids.
///
/// The mask does not borrow its complex; operations take both.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SubcomplexMask {
    members: Vec<usize>,
}

impl SubcomplexMask {
    pub fn empty() -> Self {
        SubcomplexMask::default()
    }

    /// Checked constructor: ids must exist and be closed under faces.
    pub fn new(complex: &GlobalComplex, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mask = Self::from_ids_unchecked(ids);
        if mask.members.last().is_some_and(|&m| m >= complex.len()) {
            return Err(Error::MaskNotClosed(format!("unknown simplex id {}", mask.members.last().unwrap())));
        }
        if !mask.is_closed(complex) {
            return Err(Error::MaskNotClosed("missing faces".into()));
        }
        Ok(mask)
    }

    pub fn from_ids_unchecked(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        SubcomplexMask { members }
    }

    /// Face closure of the given simplex ids.
    pub fn closure(complex: &GlobalComplex, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = ids.into_iter().collect();
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend_from_slice(complex.facets(id));
            }
        }
        SubcomplexMask { members: seen.into_iter().collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn is_closed(&self, complex: &GlobalComplex) -> bool {
        self.members.iter().all(|&id| complex.facets(id).iter().all(|&f| self.contains(f)))
    }

    pub fn is_subset(&self, other: &SubcomplexMask) -> bool {
        self.first_missing_from(other).is_none()
    }

    /// First member of `self` not in `other`.
    pub fn first_missing_from(&self, other: &SubcomplexMask) -> Option<usize> {
        self.members.iter().copied().find(|&id| !other.contains(id))
    }

    pub fn difference(&self, other: &SubcomplexMask) -> Vec<usize> {
        self.members.iter().copied().filter(|&id| !other.contains(id)).collect()
    }

    pub fn union(&self, other: &SubcomplexMask) -> SubcomplexMask {
        Self::from_ids_unchecked(self.members.iter().chain(&other.members).copied())
    }

    pub fn intersection(&self, other: &SubcomplexMask) -> SubcomplexMask {
        SubcomplexMask { members: self.members.iter().copied().filter(|&id| other.contains(id)).collect() }
    }

    /// Ids of the `k`-simplices, ascending. These index the chain group `C_k`.
    pub fn simplices_of_dim(&self, complex: &GlobalComplex, k: usize) -> Vec<usize> {
        self.members.iter().copied().filter(|&id| complex.dim_of(id) == k).collect()
    }

    pub fn count_of_dim(&self, complex: &GlobalComplex, k: usize) -> usize {
        self.members.iter().filter(|&&id| complex.dim_of(id) == k).count()
    }
}

/// Sign of facet number `i` in the boundary of a simplex.
pub(crate) fn facet_sign<F: Field>(f: &F, i: usize) -> F::Elem {
    if i.is_multiple_of(2) {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// Dense matrix of `d_k` restricted to `sub`: rows are the (k-1)-simplices,
/// columns the k-simplices, both in id order.
pub fn boundary_matrix<F: Field>(f: &F, complex: &GlobalComplex, sub: &SubcomplexMask, k: usize) -> Matrix<F::Elem> {
    let cols = sub.simplices_of_dim(complex, k);
    if k == 0 {
        return Matrix::zeros(f, 0, cols.len());
    }
    let rows = sub.simplices_of_dim(complex, k - 1);
    let mut m = Matrix::zeros(f, rows.len(), cols.len());
    for (c, &id) in cols.iter().enumerate() {
        for (i, &face) in complex.facets(id).iter().enumerate() {
            let r = rows.binary_search(&face).expect("subcomplex closed under faces");
            m.set(r, c, facet_sign(f, i));
        }
    }
    m
}

/// `dim ker d_k - rank d_{k+1}`, by dense elimination.
pub fn betti<F: Field>(f: &F, complex: &GlobalComplex, sub: &SubcomplexMask, k: usize) -> usize {
    let n = sub.count_of_dim(complex, k);
    let rk = exactlinalg::rank(f, &boundary_matrix(f, complex, sub, k));
    let rk1 = exactlinalg::rank(f, &boundary_matrix(f, complex, sub, k + 1));
    n - rk - rk1
}

/// Cycle space `Z_k(sub)` in coordinates of `sub`'s k-simplices.
pub fn cycle_space<F: Field>(f: &F, complex: &GlobalComplex, sub: &SubcomplexMask, k: usize) -> Subspace<F::Elem> {
    let d = boundary_matrix(f, complex, sub, k);
    Subspace::from_rows(f, exactlinalg::nullspace(f, &d))
}

/// Boundary space `B_k(sub)` in coordinates of `sub`'s k-simplices.
pub fn boundary_space<F: Field>(f: &F, complex: &GlobalComplex, sub: &SubcomplexMask, k: usize) -> Subspace<F::Elem> {
    let d = boundary_matrix(f, complex, sub, k + 1);
    let mut s = Subspace::column_space(f, &d);
    if d.cols() == 0 {
        s = Subspace::zero(sub.count_of_dim(complex, k));
    }
    s
}

/// Matrix of the chain inclusion `C_k(sub) -> C_k(sup)`.
pub fn chain_inclusion<F: Field>(
    f: &F,
    complex: &GlobalComplex,
    sub: &SubcomplexMask,
    sup: &SubcomplexMask,
    k: usize,
) -> Matrix<F::Elem> {
    let src = sub.simplices_of_dim(complex, k);
    let dst = sup.simplices_of_dim(complex, k);
    let mut m = Matrix::zeros(f, dst.len(), src.len());
    for (c, id) in src.iter().enumerate() {
        let r = dst.binary_search(id).expect("sub is contained in sup");
        m.set(r, c, f.one());
    }
    m
}

/// Rank of `H_k(sub) -> H_k(sup)` computed densely as
/// `dim(Z_k(sub) + B_k(sup)) - dim B_k(sup)`.
pub fn induced_rank_dense<F: Field>(
    f: &F,
    complex: &GlobalComplex,
    sub: &SubcomplexMask,
    sup: &SubcomplexMask,
    k: usize,
) -> usize {
    let inc = chain_inclusion(f, complex, sub, sup, k);
    let z = cycle_space(f, complex, sub, k);
    let lifted = exactlinalg::mul(f, z.basis(), &inc.transpose());
    let b = boundary_space(f, complex, sup, k);
    let total = Subspace::from_rows(f, lifted.vstack(b.basis()));
    total.dim() - b.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    pub(crate) fn tetra_boundary() -> GlobalComplex {
        GlobalComplex::close_under_faces([s(&[0, 1, 2]), s(&[0, 1, 3]), s(&[0, 2, 3]), s(&[1, 2, 3])])
    }

    /// Six-vertex real projective plane.
    pub(crate) fn rp2() -> GlobalComplex {
        // standard 6-vertex RP^2 (hemi-icosahedron)
        let faces: [[u32; 3]; 10] = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ];
        GlobalComplex::close_under_faces(faces.iter().map(|t| s(t)))
    }

    #[test]
    fn closure_counts() {
        let tri = GlobalComplex::close_under_faces([s(&[0, 1, 2])]);
        assert_eq!(tri.len(), 7);
        assert_eq!(GlobalComplex::close_under_faces([s(&[0])]).len(), 1);
        assert_eq!(tetra_boundary().len(), 14);
    }

    #[test]
    fn duplicate_vertices_rejected() {
        assert!(matches!(Simplex::new(vec![1, 1]), Err(Error::MalformedSimplex(..))));
    }

    #[test]
    fn from_simplices_checks_order_and_closure() {
        assert!(matches!(
            GlobalComplex::from_simplices(vec![s(&[0, 1]), s(&[0]), s(&[1])]),
            Err(Error::NotFaceOrdered(0))
        ));
        assert!(matches!(GlobalComplex::from_simplices(vec![s(&[0]), s(&[0, 1])]), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn edge_boundary_signs() {
        let q = Rationals;
        let c = GlobalComplex::close_under_faces([s(&[0, 1])]);
        let d = boundary_matrix(&q, &c, &c.full_mask(), 1);
        assert_eq!(d.column(0), vec![q.of_int(-1), q.of_int(1)]);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let solid = GlobalComplex::close_under_faces([s(&[0, 1, 2, 3])]);
        let full = solid.full_mask();
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        for k in 1..4 {
            let p = exactlinalg::mul(&q, &boundary_matrix(&q, &solid, &full, k), &boundary_matrix(&q, &solid, &full, k + 1));
            assert!(p.is_zero(&q));
            let p = exactlinalg::mul(&f2, &boundary_matrix(&f2, &solid, &full, k), &boundary_matrix(&f2, &solid, &full, k + 1));
            assert!(p.is_zero(&f2));
        }
        assert_eq!(exactlinalg::rank(&q, &boundary_matrix(&q, &solid, &full, 2)), 3);
    }

    #[test]
    fn betti_numbers_of_small_spaces() {
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        let hollow = GlobalComplex::close_under_faces([s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]);
        assert_eq!(betti(&q, &hollow, &hollow.full_mask(), 1), 1);
        let sphere = tetra_boundary();
        assert_eq!(betti(&q, &sphere, &sphere.full_mask(), 2), 1);
        assert_eq!(betti(&q, &sphere, &sphere.full_mask(), 3), 0);
        let p = rp2();
        assert_eq!(betti(&f2, &p, &p.full_mask(), 1), 1);
        assert_eq!(betti(&q, &p, &p.full_mask(), 1), 0);
        assert_eq!(betti(&f2, &p, &p.full_mask(), 2), 1);
        assert_eq!(betti(&q, &p, &p.full_mask(), 2), 0);
    }

    #[test]
    fn euler_characteristic_matches() {
        let q = Rationals;
        let f3 = PrimeField::new(3).unwrap();
        for c in [tetra_boundary(), rp2()] {
            let full = c.full_mask();
            let top = c.dim().unwrap();
            let chi: i64 = (0..=top).map(|k| (-1i64).pow(k as u32) * full.count_of_dim(&c, k) as i64).sum();
            let bq: i64 = (0..=top).map(|k| (-1i64).pow(k as u32) * betti(&q, &c, &full, k) as i64).sum();
            let b3: i64 = (0..=top).map(|k| (-1i64).pow(k as u32) * betti(&f3, &c, &full, k) as i64).sum();
            assert_eq!(chi, bq);
            assert_eq!(chi, b3);
        }
    }

    #[test]
    fn masks_check_closure() {
        let c = GlobalComplex::close_under_faces([s(&[0, 1])]);
        let edge = c.id_of(&s(&[0, 1])).unwrap();
        assert!(SubcomplexMask::new(&c, [edge]).is_err());
        let m = SubcomplexMask::closure(&c, [edge]);
        assert_eq!(m.len(), 3);
        assert!(SubcomplexMask::new(&c, m.members().to_vec()).is_ok());
    }
}
