mod common;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::{random_primitive, random_scrambled, random_unimodular, rng};
use salemlat_core::lattice::{radical_in, sum_corank_and_index, Sublattice};
use salemlat_core::{
    cone_contains, lattice_kind, orth_complement, saturation, signature, ConeReference, Lattice,
    LatticeKind,
};

fn same_span(a: &Sublattice, b: &Sublattice) -> bool {
    let ra = a.basis().to_rational().rank();
    let joint = a.basis().hstack(b.basis()).to_rational().rank();
    ra == b.rank() && joint == ra
}

fn random_gram(rng: &mut impl Rng, r: usize) -> Lattice {
    let mut g = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i..r {
            let x = rng.random_range(-4..=4);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    let rows: Vec<&[i64]> = g.iter().map(Vec::as_slice).collect();
    Lattice::from_i64(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn signature_is_congruence_invariant(seed in any::<u64>(), r in 1usize..=6) {
        let mut rng = rng(seed);
        let l = random_gram(&mut rng, r);
        let u = random_unimodular(&mut rng, r, 3 * r);
        let moved = Lattice::new(u.transpose().mul(l.gram()).mul(&u)).unwrap();
        prop_assert_eq!(signature(&moved), signature(&l));
        let s = signature(&l);
        prop_assert_eq!(s.positives + s.zeros + s.negatives, r);
        prop_assert_eq!(s.zeros, r - l.gram().to_rational().rank());
    }

    #[test]
    fn saturation_is_idempotent(seed in any::<u64>(), r in 2usize..=6, k in 1usize..=3) {
        let mut rng = rng(seed);
        let cols: Vec<Vec<BigInt>> = (0..k.min(r))
            .map(|_| (0..r).map(|_| BigInt::from(rng.random_range(-6..=6))).collect())
            .collect();
        let Ok(m) = Sublattice::new(r, cols) else { return Ok(()) };
        let s = saturation(&m).unwrap();
        prop_assert!(s.is_primitive());
        prop_assert!(same_span(&m, &s));
        let again = saturation(&s).unwrap();
        prop_assert_eq!(again.basis(), s.basis());
        for c in m.columns() {
            prop_assert!(s.spans(&c));
        }
    }

    #[test]
    fn complement_rank(seed in any::<u64>(), r in 2usize..=6, k in 1usize..=4) {
        let mut rng = rng(seed);
        let s = random_scrambled(&mut rng, r);
        let l = &s.lattice;
        let Some(m) = random_primitive(&mut rng, r, k.min(r), 3) else { return Ok(()) };
        let perp = orth_complement(l, &m).unwrap();
        prop_assert_eq!(perp.rank(), r - m.rank());
        prop_assert!(perp.is_primitive());
        for u in m.columns() {
            for v in perp.columns() {
                prop_assert!(l.pair(&u, &v).is_zero());
            }
        }
    }

    #[test]
    fn index_facts(seed in any::<u64>(), r in 2usize..=6, k in 1usize..=5, isotropic in any::<bool>()) {
        let mut rng = rng(seed);
        let s = random_scrambled(&mut rng, r);
        let l = &s.lattice;
        let m = if isotropic {
            // an isotropic line plus vectors orthogonal to it
            let e = s.p_inv.mul_vec(&common::unit(r, 0));
            let line = Sublattice::new(r, vec![e.clone()]).unwrap();
            let perp = orth_complement(l, &line).unwrap().columns();
            let mut cols = vec![e];
            for _ in 1..k.min(r - 1) {
                let mut v = vec![BigInt::zero(); r];
                for b in &perp {
                    let c = BigInt::from(rng.random_range(-2..=2));
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &c * y;
                    }
                }
                cols.push(v);
            }
            match Sublattice::new(r, cols) {
                Ok(m) => saturation(&m).unwrap(),
                Err(_) => return Ok(()),
            }
        } else {
            match random_primitive(&mut rng, r, k.min(r), 3) {
                Some(m) => m,
                None => return Ok(()),
            }
        };
        let restricted = l.restrict(&m).unwrap();
        let perp = orth_complement(l, &m).unwrap();
        let rad = radical_in(l, &m).unwrap();
        let (corank, index) = sum_corank_and_index(l, &m, &perp).unwrap();
        match lattice_kind(&restricted) {
            LatticeKind::Hyperbolic | LatticeKind::Elliptic => {
                prop_assert_eq!(rad.rank(), 0);
                prop_assert_eq!(corank, 0);
                prop_assert!(index.is_some_and(|i| i.is_positive()));
            }
            LatticeKind::Parabolic => {
                prop_assert_eq!(rad.rank(), 1);
                prop_assert!(l.norm(&rad.columns()[0]).is_zero());
                prop_assert_eq!(corank, 1);
            }
            LatticeKind::Other => prop_assert!(false, "sublattice of a hyperbolic lattice of kind Other"),
        }
    }

    #[test]
    fn cone_membership_agrees(seed in any::<u64>(), r in 2usize..=6) {
        let mut rng = rng(seed);
        let s = random_scrambled(&mut rng, r);
        let l = &s.lattice;
        let a = ConeReference::new(l, s.cone_vector()).unwrap();
        let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<BigInt> {
            (0..r).map(|_| BigInt::from(rng.random_range(-5..=5))).collect()
        };
        let Some(b) = (0..50).map(|_| rand_vec(&mut rng)).find(|v| cone_contains(&a, v)) else {
            return Ok(());
        };
        let b = ConeReference::new(l, b).unwrap();
        for _ in 0..20 {
            let v = rand_vec(&mut rng);
            prop_assert_eq!(cone_contains(&a, &v), cone_contains(&b, &v));
        }
        let neg: Vec<BigInt> = a.vector().iter().map(|x| -x).collect();
        prop_assert!(!cone_contains(&a, &neg));
    }
}
