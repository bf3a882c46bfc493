//! Small named generator sets with known verdicts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::groupdyn::GeneratorSet;
use crate::isometry::{binary_forms_lattice, sym_square, Isometry};
use crate::lattice::Lattice;
use crate::linalg::IntMatrix;

pub struct CorpusCase {
    pub name: &'static str,
    pub lattice: Lattice,
    pub generators: Vec<(String, IntMatrix)>,
    /// Verdict tag under default budgets.
    pub expected: &'static str,
}

impl CorpusCase {
    pub fn generator_set(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(&self.lattice, None, self.generators.clone())
    }
}

/// Eichler transvection `x -> x + (x,a)e - (x,e)a - (a,a)/2 (x,e)e`.
///
/// Needs `e` isotropic, `(e,a) = 0` and `(a,a)` even.
pub fn transvection(l: &Lattice, e: &[BigInt], a: &[BigInt]) -> Result<Isometry> {
    let r = l.rank();
    let half = l.norm(a) / 2;
    let cols: Vec<Vec<BigInt>> = (0..r)
        .map(|k| {
            let mut x = vec![BigInt::zero(); r];
            x[k] = BigInt::one();
            let xa = l.pair(&x, a);
            let xe = l.pair(&x, e);
            (0..r)
                .map(|i| &x[i] + &xa * &e[i] - &xe * &a[i] - &half * &xe * &e[i])
                .collect()
        })
        .collect();
    Isometry::new(l, IntMatrix::from_columns(r, &cols))
}

fn vec_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn gens(list: Vec<(&str, IntMatrix)>) -> Vec<(String, IntMatrix)> {
    list.into_iter().map(|(n, m)| (n.to_string(), m)).collect()
}

fn u_plus(neg: &[i64]) -> Lattice {
    neg.iter().fold(Lattice::hyperbolic_plane(), |l, &n| {
        l.direct_sum(&Lattice::rank_one(n).expect("even"))
    })
}

fn tv(l: &Lattice, e: &[i64], a: &[i64]) -> IntMatrix {
    transvection(l, &vec_i64(e), &vec_i64(a))
        .expect("transvection")
        .matrix()
        .clone()
}

pub fn cases() -> Vec<CorpusCase> {
    let bf = binary_forms_lattice();
    let u = Lattice::hyperbolic_plane();
    let a2 = Lattice::from_i64(&[&[-2, 1], &[1, -2]]).expect("symmetric");
    let r2 = Lattice::from_i64(&[&[2, 1], &[1, -2]]).expect("symmetric");
    let u2 = u_plus(&[-2]);
    let u22 = u_plus(&[-2, -2]);
    let salem = sym_square(2, 1, 1, 1);
    let conj = Isometry::new(&bf, salem.clone())
        .and_then(|g| Ok(g.conjugate_by(&Isometry::new(&bf, sym_square(1, 2, 0, 1))?)))
        .expect("isometry");
    let split = r2.direct_sum(&Lattice::rank_one(-2).expect("even"));
    vec![
        CorpusCase {
            name: "sanov",
            lattice: bf.clone(),
            generators: gens(vec![("a", sym_square(1, 2, 0, 1)), ("b", sym_square(1, 0, 2, 1))]),
            expected: "Free",
        },
        CorpusCase {
            name: "salem_pair",
            lattice: bf,
            generators: gens(vec![("g", salem), ("h", conj.matrix().clone())]),
            expected: "Free",
        },
        CorpusCase {
            name: "dihedral_u",
            lattice: u,
            generators: gens(vec![
                ("s", IntMatrix::from_i64(&[&[0, 1], &[1, 0]])),
                ("m", IntMatrix::from_i64(&[&[-1, 0], &[0, -1]])),
            ]),
            expected: "Finite",
        },
        CorpusCase {
            name: "coxeter_a2",
            lattice: a2,
            generators: gens(vec![("c", IntMatrix::from_i64(&[&[0, -1], &[1, -1]]))]),
            expected: "Finite",
        },
        CorpusCase {
            name: "eichler",
            lattice: u2.clone(),
            generators: gens(vec![("t", tv(&u2, &[1, 0, 0], &[0, 0, 1]))]),
            expected: "AlmostAbelian",
        },
        CorpusCase {
            name: "shared_ray",
            lattice: u22.clone(),
            generators: gens(vec![
                ("t1", tv(&u22, &[1, 0, 0, 0], &[0, 0, 1, 0])),
                ("t2", tv(&u22, &[1, 0, 0, 0], &[0, 0, 0, 1])),
            ]),
            expected: "AlmostAbelian",
        },
        CorpusCase {
            name: "cyclic_salem",
            lattice: r2,
            generators: gens(vec![("g", IntMatrix::from_i64(&[&[1, 1], &[1, 2]]))]),
            expected: "AlmostAbelian",
        },
        CorpusCase {
            name: "split_salem",
            lattice: split,
            generators: gens(vec![
                ("g", IntMatrix::from_i64(&[&[1, 1, 0], &[1, 2, 0], &[0, 0, 1]])),
                ("r", IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]])),
            ]),
            expected: "AlmostAbelian",
        },
    ]
}
