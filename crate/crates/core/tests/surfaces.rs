use dagph::dagmodel::{GraphFiltration, SubgraphSelector};
use dagph::fixtures::{four_punctured_sphere, genus_two};
use dagph::gmodule::{homology_module, AnnotatedBarcode};
use dagph::subgraph::{oracle::oracle_rank, persistence_rank};
use dagph::{Field, PrimeField, Rationals};

fn rank_of<F: Field>(f: &F, gf: &GraphFiltration, ids: &[&str]) -> usize {
    let sel = SubgraphSelector::from_ids(gf, ids).unwrap();
    persistence_rank(f, gf, &sel, 1).unwrap().rank
}

#[test]
fn punctured_sphere_module() {
    let gf = four_punctured_sphere();
    let sel = SubgraphSelector::whole(&gf).unwrap();
    let m = homology_module(&Rationals, &gf, &sel, 1).unwrap();
    assert_eq!(m.dims(), &[1, 1, 1, 1, 3]);
    assert!(m.is_commutative(&Rationals));
    assert_eq!(m.module_dimension(&Rationals), 3);
    assert!(!m.is_elementary(&Rationals, &[0, 1, 2, 3, 4]));
    let barcode = AnnotatedBarcode::of_module(&Rationals, &m);
    assert_eq!(barcode.carrier.len(), 5);
    assert_eq!(barcode.annotation, 3);
}

#[test]
fn punctured_sphere_ranks() {
    let gf = four_punctured_sphere();
    // the four boundary circles sum to zero in the surface, any three are independent
    assert_eq!(rank_of(&Rationals, &gf, &["A", "B", "C", "D", "S"]), 0);
    assert_eq!(rank_of(&Rationals, &gf, &["A", "S"]), 1);
    assert_eq!(rank_of(&PrimeField::default_prime(), &gf, &["A", "B", "C", "D", "S"]), 0);
    let sel = SubgraphSelector::whole(&gf).unwrap();
    assert_eq!(oracle_rank(&Rationals, &gf, &sel, 1).unwrap(), 0);
}

#[test]
fn genus_two_module_dimensions() {
    let gf = genus_two();
    let sel = SubgraphSelector::whole(&gf).unwrap();
    let m = homology_module(&Rationals, &gf, &sel, 1).unwrap();
    let expected = [("Top", 4), ("XuY", 3), ("YuZ", 3), ("X", 1), ("Y", 3), ("Z", 2), ("XY", 2), ("YZ", 2)];
    for (id, d) in expected {
        assert_eq!(m.dim_of(id), Some(d), "{id}");
    }
    assert!(m.is_commutative(&Rationals));
}

#[test]
fn genus_two_elementary_carriers() {
    let gf = genus_two();
    let carriers: [(&[&str], usize); 5] = [
        (&["XY", "X", "Y", "XuY", "YuZ", "Top"], 1),
        (&["YZ", "Y", "Z", "XuY", "YuZ", "Top"], 1),
        (&["XuY", "Top"], 3),
        (&["Z", "YuZ", "Top"], 2),
        (&["XY", "YZ", "Y"], 1),
    ];
    let fp = PrimeField::default_prime();
    for (ids, rank) in carriers {
        assert_eq!(rank_of(&Rationals, &gf, ids), rank, "{ids:?} over Q");
        assert_eq!(rank_of(&fp, &gf, ids), rank, "{ids:?} over F_p");
    }
}
