//! Seeded generators for lattices, isometries and sublattices.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use salemlat_core::corpus::transvection;
use salemlat_core::lattice::{saturation, Sublattice};
use salemlat_core::{IntMatrix, IntPolynomial, Isometry, Lattice};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn unit(r: usize, k: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); r];
    v[k] = BigInt::one();
    v
}

/// Product of elementary matrices.
pub fn random_unimodular(rng: &mut impl Rng, r: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(r);
    if r < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.random_range(0..r);
        let mut j = rng.random_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(*[-1i64, 1].choose(rng).unwrap());
        let mut e = IntMatrix::identity(r);
        e[(i, j)] = c;
        m = m.mul(&e);
    }
    m
}

/// `U + <-2a_1> + ...` with an even negative-definite tail.
pub struct Model {
    pub lattice: Lattice,
    pub tail: Vec<i64>,
}

pub fn random_model(rng: &mut impl Rng, rank: usize) -> Model {
    let tail: Vec<i64> = (2..rank).map(|_| -2 * rng.random_range(1..=3)).collect();
    let lattice = tail.iter().fold(Lattice::hyperbolic_plane(), |l, &n| {
        l.direct_sum(&Lattice::rank_one(n).unwrap())
    });
    Model { lattice, tail }
}

/// One cone-preserving generator of `O(U + tail)`.
fn model_step(rng: &mut impl Rng, m: &Model) -> Isometry {
    let l = &m.lattice;
    let r = l.rank();
    loop {
        match rng.random_range(0..5) {
            0 | 1 if r > 2 => {
                let e = unit(r, rng.random_range(0..2));
                let mut a = vec![BigInt::zero(); r];
                for x in a.iter_mut().skip(2) {
                    *x = BigInt::from(rng.random_range(-1..=1));
                }
                if a.iter().all(Zero::is_zero) {
                    continue;
                }
                return transvection(l, &e, &a).unwrap();
            }
            2 if r > 2 => {
                // reflection in a tail axis
                let k = 2 + rng.random_range(0..r - 2);
                let mut g = IntMatrix::identity(r);
                g[(k, k)] = BigInt::from(-1);
                return Isometry::new(l, g).unwrap();
            }
            3 if r > 3 => {
                let i = 2 + rng.random_range(0..r - 2);
                let j = 2 + rng.random_range(0..r - 2);
                if i == j || m.tail[i - 2] != m.tail[j - 2] {
                    continue;
                }
                let mut g = IntMatrix::identity(r);
                g.swap_rows(i, j);
                return Isometry::new(l, g).unwrap();
            }
            4 => {
                let mut g = IntMatrix::identity(r);
                g.swap_rows(0, 1);
                return Isometry::new(l, g).unwrap();
            }
            _ if r == 2 => {
                let mut g = IntMatrix::identity(r);
                g.swap_rows(0, 1);
                return Isometry::new(l, g).unwrap();
            }
            _ => {}
        }
    }
}

pub fn random_model_isometry(rng: &mut impl Rng, m: &Model, factors: usize) -> Isometry {
    (0..factors).fold(Isometry::identity(&m.lattice), |acc, _| {
        acc.compose(&model_step(rng, m))
    })
}

/// The model lattice in a scrambled basis, with the change of basis `p`
/// (columns are the new basis in model coordinates).
pub struct Scrambled {
    pub model: Model,
    pub lattice: Lattice,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
}

pub fn scramble(rng: &mut impl Rng, model: Model) -> Scrambled {
    let r = model.lattice.rank();
    let p = random_unimodular(rng, r, 2 * r);
    let p_inv = p.inverse_unimodular().unwrap();
    let gram = p.transpose().mul(model.lattice.gram()).mul(&p);
    Scrambled {
        lattice: Lattice::new(gram).unwrap(),
        model,
        p,
        p_inv,
    }
}

impl Scrambled {
    pub fn transport(&self, g: &Isometry) -> Isometry {
        Isometry::new(&self.lattice, self.p_inv.mul(g.matrix()).mul(&self.p)).unwrap()
    }

    /// Image of the model cone vector `(1,1,0,...)`.
    pub fn cone_vector(&self) -> Vec<BigInt> {
        let r = self.lattice.rank();
        let mut v = vec![BigInt::zero(); r];
        v[0] = BigInt::one();
        v[1] = BigInt::one();
        self.p_inv.mul_vec(&v)
    }
}

/// A rank 2..=8 hyperbolic lattice in a scrambled basis with a cone-preserving isometry.
pub fn random_case(rng: &mut impl Rng) -> (Scrambled, Isometry) {
    let rank = rng.random_range(2..=8);
    let model = random_model(rng, rank);
    let factors = rng.random_range(1..=6);
    let g = random_model_isometry(rng, &model, factors);
    let s = scramble(rng, model);
    let g = s.transport(&g);
    (s, g)
}

/// Random vectors saturated to a primitive sublattice of rank `k`, if independent.
pub fn random_primitive(rng: &mut impl Rng, r: usize, k: usize, span: i64) -> Option<Sublattice> {
    let cols: Vec<Vec<BigInt>> = (0..k)
        .map(|_| (0..r).map(|_| BigInt::from(rng.random_range(-span..=span))).collect())
        .collect();
    let m = Sublattice::new(r, cols).ok()?;
    saturation(&m).ok()
}

pub fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

pub fn random_scrambled(rng: &mut impl Rng, rank: usize) -> Scrambled {
    let model = random_model(rng, rank);
    scramble(rng, model)
}

/// Reflections `x -> x - 2(x,v)/(v,v) v` in short vectors `v` for which the
/// formula is integral.
pub fn reflections(l: &Lattice) -> Vec<Isometry> {
    let r = l.rank();
    let span: i64 = if r <= 5 { 2 } else { 1 };
    let mut out = Vec::new();
    let mut v = vec![-span; r];
    loop {
        let big = ints(&v);
        let n = l.norm(&big);
        if !n.is_zero() {
            let gv = l.gram().mul_vec(&big);
            if gv.iter().all(|x| (x * 2i64 % &n).is_zero()) {
                let cols: Vec<Vec<BigInt>> = (0..r)
                    .map(|k| {
                        let c = &gv[k] * 2i64 / &n;
                        (0..r).map(|i| &unit(r, k)[i] - &c * &big[i]).collect()
                    })
                    .collect();
                if let Ok(g) = Isometry::new(l, IntMatrix::from_columns(r, &cols)) {
                    if !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
        }
        // odometer
        let mut i = 0;
        while i < r && v[i] == span {
            v[i] = -span;
            i += 1;
        }
        if i == r {
            break;
        }
        v[i] += 1;
    }
    out
}

/// A product of `len` random reflections (and, if given, extra isometries).
pub fn random_isometry(rng: &mut impl Rng, l: &Lattice, pool: &[Isometry], len: usize) -> Isometry {
    (0..len).fold(Isometry::identity(l), |acc, _| {
        acc.compose(pool.choose(rng).expect("nonempty pool"))
    })
}

/// A signed permutation of `U + tail`: swap of the `U` basis, a tail sign
/// flip, or a swap of equal tail entries.
pub fn finite_step(rng: &mut impl Rng, m: &Model) -> Isometry {
    let l = &m.lattice;
    let r = l.rank();
    let mut g = IntMatrix::identity(r);
    match rng.random_range(0..3) {
        1 if r > 2 => {
            let k = rng.random_range(2..r);
            g[(k, k)] = BigInt::from(-1);
        }
        2 if r > 3 => {
            let i = rng.random_range(2..r);
            let j = rng.random_range(2..r);
            if m.tail[i - 2] == m.tail[j - 2] {
                g.swap_rows(i, j);
            }
        }
        _ => g.swap_rows(0, 1),
    }
    Isometry::new(l, g).unwrap()
}
