//! Brute-force reference for subgraph persistence, working directly with
//! chains instead of homology bases.
//!
//! Unknowns are a `k`-chain `c_v` per selected vertex and a `(k+1)`-chain
//! `d_e` per selected edge, subject to `dc_v = 0` and
//! `c_src - c_dst = d d_e` in the target. Projecting the solutions to the
//! `c` block and dividing out the boundaries gives the space `L` of
//! compatible homology families; `K_v` is the part of `L` vanishing at `v`.

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::error::{Error, Result};
use crate::exactlinalg::{self, Matrix, Subspace};
use crate::field::Field;
use crate::simplicial::{boundary_matrix, boundary_space};

/// Largest exhaustive search: subspaces of `F_q^4` with `q <= 5`.
const MAX_SEARCH_DIM: usize = 4;
const MAX_SEARCH_ORDER: u64 = 5;

pub fn oracle_rank<F: Field>(f: &F, gf: &GraphFiltration, sel: &SubgraphSelector, k: usize) -> Result<usize> {
    gf.validate()?;
    let complex = gf.complex();
    let verts = sel.vertices();
    let slot = |v: usize| verts.binary_search(&v).expect("selected vertex");
    let k_ids: Vec<Vec<usize>> = verts.iter().map(|&v| gf.mask(v).simplices_of_dim(complex, k)).collect();
    let mut c_offset = vec![0];
    for ids in &k_ids {
        c_offset.push(c_offset.last().unwrap() + ids.len());
    }
    let chain_total = *c_offset.last().unwrap();
    let fillers: Vec<usize> = sel.edges().iter().map(|&e| gf.mask(gf.edge(e).1).count_of_dim(complex, k + 1)).collect();
    let unknowns = chain_total + fillers.iter().sum::<usize>();

    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let d = boundary_matrix(f, complex, gf.mask(v), k);
        for r in 0..d.rows() {
            let mut row = vec![f.zero(); unknowns];
            row[c_offset[i]..c_offset[i + 1]].clone_from_slice(d.row(r));
            rows.push(row);
        }
    }
    let mut d_offset = chain_total;
    for (n, &e) in sel.edges().iter().enumerate() {
        let (u, v) = gf.edge(e);
        let (iu, iv) = (slot(u), slot(v));
        let d = boundary_matrix(f, complex, gf.mask(v), k + 1);
        for (r, id) in k_ids[iv].iter().enumerate() {
            let mut row = vec![f.zero(); unknowns];
            if let Ok(p) = k_ids[iu].binary_search(id) {
                row[c_offset[iu] + p] = f.one();
            }
            row[c_offset[iv] + r] = f.neg(&f.one());
            for c in 0..fillers[n] {
                row[d_offset + c] = f.neg(d.get(r, c));
            }
            rows.push(row);
        }
        d_offset += fillers[n];
    }
    let solutions = if rows.is_empty() {
        Matrix::identity(f, unknowns)
    } else {
        exactlinalg::nullspace(f, &Matrix::from_rows(unknowns, rows))
    };
    let chain_block: Vec<usize> = (0..chain_total).collect();
    let families = Subspace::from_rows(f, solutions.select_cols(&chain_block));

    // boundaries in every slot, and annihilators of each slot's boundaries
    let mut boundary_vectors = Vec::new();
    let mut annihilators = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let b = boundary_space(f, complex, gf.mask(v), k);
        for vec in b.vectors() {
            let mut full = vec![f.zero(); chain_total];
            full[c_offset[i]..c_offset[i + 1]].clone_from_slice(&vec);
            boundary_vectors.push(full);
        }
        annihilators.push(if b.dim() == 0 {
            Matrix::identity(f, k_ids[i].len())
        } else {
            exactlinalg::nullspace(f, b.basis())
        });
    }
    let mut span = Subspace::from_vectors(f, chain_total, boundary_vectors);
    assert!(families.contains(f, &span), "boundary families are compatible");
    let mut reps: Vec<Vec<F::Elem>> = Vec::new();
    for vec in families.vectors() {
        if !span.contains_vector(f, &vec) {
            span = span.sum(f, &Subspace::from_vectors(f, chain_total, vec![vec.clone()]))?;
            reps.push(vec);
        }
    }
    let dim = reps.len();
    let kernels: Vec<Subspace<F::Elem>> = (0..verts.len())
        .map(|i| {
            let slot_reps: Vec<Vec<F::Elem>> = reps.iter().map(|r| r[c_offset[i]..c_offset[i + 1]].to_vec()).collect();
            let slot_matrix = Matrix::from_rows(k_ids[i].len(), slot_reps);
            let constraint = exactlinalg::mul(f, &annihilators[i], &slot_matrix.transpose());
            if constraint.rows() == 0 {
                return Subspace::full(f, dim);
            }
            Subspace::from_rows(f, exactlinalg::nullspace(f, &constraint))
        })
        .collect();

    let worst = kernels.iter().map(Subspace::dim).max().unwrap_or(0);
    match f.order() {
        None => Ok(dim - worst),
        Some(q) if q <= MAX_SEARCH_ORDER && dim <= MAX_SEARCH_DIM => exhaustive_avoiding_dim(f, dim, &kernels),
        Some(q) if q >= kernels.iter().filter(|k| k.dim() > 0).count() as u64 => Ok(dim - worst),
        Some(q) => Err(Error::InstanceTooLarge(format!("family space of dimension {dim} over a field of order {q}"))),
    }
}

/// Largest `m` such that some `m`-dimensional subspace of `F_q^dim` meets
/// every kernel trivially, by enumerating subspaces in reduced echelon form.
pub(crate) fn exhaustive_avoiding_dim<F: Field>(f: &F, dim: usize, kernels: &[Subspace<F::Elem>]) -> Result<usize> {
    let q = f.order().ok_or_else(|| Error::InstanceTooLarge("exhaustive search needs a finite field".into()))?;
    if q > MAX_SEARCH_ORDER || dim > MAX_SEARCH_DIM {
        return Err(Error::InstanceTooLarge(format!("subspaces of F_{q}^{dim}")));
    }
    let avoids = |p: &Subspace<F::Elem>| {
        kernels.iter().all(|k| p.sum(f, k).map(|s| s.dim() == p.dim() + k.dim()).unwrap_or(false))
    };
    for m in (1..=dim).rev() {
        for pivots in combinations(dim, m) {
            let free: Vec<(usize, usize)> = (0..m)
                .flat_map(|r| ((pivots[r] + 1)..dim).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let count = q.pow(free.len() as u32);
            for code in 0..count {
                let mut rows = vec![vec![f.zero(); dim]; m];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = f.one();
                }
                let mut rest = code;
                for &(r, c) in &free {
                    rows[r][c] = f.of_int((rest % q) as i64);
                    rest /= q;
                }
                if avoids(&Subspace::from_vectors(f, dim, rows)) {
                    return Ok(m);
                }
            }
        }
    }
    Ok(0)
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in (m - 1)..n {
        for mut c in combinations(last, m - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures;
    use crate::simplicial::betti;
    use crate::ssss;
    use crate::parallel::Execution;

    #[test]
    fn single_vertex_is_betti() {
        let q = Rationals;
        let gf = fixtures::split_fillings();
        for v in 0..gf.vertex_count() {
            let sel = SubgraphSelector::new(&gf, [v]).unwrap();
            assert_eq!(oracle_rank(&q, &gf, &sel, 1).unwrap(), betti(&q, gf.complex(), gf.mask(v), 1));
        }
    }

    #[test]
    fn paths_give_composed_ranks() {
        let f = PrimeField::default_prime();
        for seed in 0..4 {
            let gf = fixtures::random_path(seed, 14);
            let table = ssss::all_pairs_rank(&f, &gf, 1, Execution::Sequential).unwrap();
            let n = gf.vertex_count();
            for (i, j) in [(0, n - 1), (n / 3, n - 1), (n / 2, n / 2 + 2)] {
                let sel = SubgraphSelector::new(&gf, i..=j.min(n - 1)).unwrap();
                assert_eq!(Some(oracle_rank(&f, &gf, &sel, 1).unwrap()), table.get(i, j.min(n - 1)));
            }
        }
    }

    #[test]
    fn shared_cycle_is_one() {
        let gf = fixtures::shared_cycle();
        let sel = SubgraphSelector::whole(&gf).unwrap();
        assert_eq!(oracle_rank(&Rationals, &gf, &sel, 1).unwrap(), 1);
    }

    #[test]
    fn small_field_search() {
        let f2 = PrimeField::new(2).unwrap();
        // three distinct lines in F_2^2 leave no room for a common complement
        let lines: Vec<Subspace<u32>> =
            [[1, 0], [0, 1], [1, 1]].iter().map(|v| Subspace::from_vectors(&f2, 2, vec![v.to_vec()])).collect();
        assert_eq!(exhaustive_avoiding_dim(&f2, 2, &lines).unwrap(), 0);
        assert_eq!(exhaustive_avoiding_dim(&f2, 2, &lines[..2]).unwrap(), 1);
        let f3 = PrimeField::new(3).unwrap();
        let lines3: Vec<Subspace<u32>> =
            [[1, 0], [0, 1], [1, 1]].iter().map(|v| Subspace::from_vectors(&f3, 2, vec![v.to_vec()])).collect();
        assert_eq!(exhaustive_avoiding_dim(&f3, 2, &lines3).unwrap(), 1);
        assert!(matches!(
            exhaustive_avoiding_dim(&PrimeField::new(7).unwrap(), 2, &[]),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
