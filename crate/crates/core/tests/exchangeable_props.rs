use proptest::prelude::*;
use stodom::exchangeable::{count_tail_dominance, definetti_uvector, exch_dominates, exch_fkg_check, MixingLaw, UVector};
use stodom::lattice::{dominates, product_measure};

fn uvector(n: usize) -> impl Strategy<Value = UVector> {
    prop::collection::vec(0.01f64..1.0, n + 1).prop_map(move |u| UVector::from_unnormalized(n, u).unwrap())
}

fn fkg_uvector(n: usize) -> impl Strategy<Value = UVector> {
    (-3.0f64..3.0, prop::collection::vec(0.0f64..1.5, n)).prop_map(move |(first, incs)| {
        let mut phi = vec![0.0];
        let mut step = first;
        for inc in incs {
            let last = *phi.last().unwrap();
            phi.push(last + step);
            step += inc;
        }
        UVector::from_unnormalized(n, phi.into_iter().map(f64::exp).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fkg_equivalence_matches_strassen(n in 2usize..=5, step in 0usize..=100, u in fkg_uvector(5)) {
        let u = UVector::from_unnormalized(n, u.u()[..=n].to_vec()).unwrap();
        prop_assume!(exch_fkg_check(&u));
        let rho = step as f64 * 0.01;
        let oracle = dominates(&u.to_measure().unwrap(), &product_measure(n, rho).unwrap()).unwrap();
        prop_assert_eq!(exch_dominates(&u, rho).unwrap(), oracle);
    }

    #[test]
    fn tail_dominance_matches_strassen(n in 1usize..=5, step in 0usize..=50, u in uvector(5)) {
        let u = UVector::from_unnormalized(n, u.u()[..=n].to_vec()).unwrap();
        let rho = step as f64 * 0.02;
        let oracle = dominates(&u.to_measure().unwrap(), &product_measure(n, rho).unwrap()).unwrap();
        prop_assert_eq!(count_tail_dominance(&u, rho).unwrap(), oracle);
    }

    #[test]
    fn de_finetti_mixtures_are_fkg(atoms in prop::collection::vec((0.0f64..1.0, 0.05f64..1.0), 1..4), n in 2usize..=6) {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(w, p)| (w, p / total)).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let atoms = atoms.into_iter().map(|(w, p)| (w, p / total)).collect();
        let u = definetti_uvector(&MixingLaw::new(atoms).unwrap(), n).unwrap();
        prop_assert!(exch_fkg_check(&u));
    }
}
