//! Sparse column vectors: sorted `(index, value)` pairs with no stored zeros.

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

pub fn low<E>(v: &SparseVec<E>) -> Option<usize> {
    v.last().map(|(i, _)| *i)
}

/// `a - c * b`.
pub fn sub_scaled<F: Field>(f: &F, a: &SparseVec<F::Elem>, c: &F::Elem, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.neg(&f.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = f.sub_mul(&a[i].1, c, &b[j].1);
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn cancellation_drops_entries() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![(0, 1), (3, 2)];
        let b = vec![(1, 5), (3, 1)];
        assert_eq!(sub_scaled(&f, &a, &2, &b), vec![(0, 1), (1, 4)]);
    }
}
