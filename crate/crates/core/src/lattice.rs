//! Integral symmetric bilinear forms on `Z^r`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, clear_denominators, int, primitive, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    gram: IntMatrix,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: format!("square Gram matrix, {} columns", gram.rows()),
                found: format!("{} columns", gram.cols()),
            });
        }
        if gram.rows() == 0 {
            return Err(Error::invalid("lattice rank must be at least 1"));
        }
        for i in 0..gram.rows() {
            for j in i + 1..gram.cols() {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(Error::invalid(format!(
                        "Gram matrix is not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                        gram[(i, j)],
                        gram[(j, i)]
                    )));
                }
            }
        }
        Ok(Lattice { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// `U = [[0,1],[1,0]]`
    pub fn hyperbolic_plane() -> Self {
        Lattice {
            gram: IntMatrix::from_i64(&[&[0, 1], &[1, 0]]),
        }
    }

    /// `<value>`; only even values are accepted.
    pub fn rank_one(value: i64) -> Result<Self> {
        if value % 2 != 0 {
            return Err(Error::invalid(format!("rank_one needs an even value, got {value}")));
        }
        Ok(Lattice {
            gram: IntMatrix::from_i64(&[&[value]]),
        })
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// `NS + <-2(n-1)>`
    pub fn hilbert_twist(&self, n: u32) -> Result<Lattice> {
        if n < 2 {
            return Err(Error::invalid(format!("hilbert_twist needs n >= 2, got {n}")));
        }
        Ok(self.direct_sum(&Lattice::rank_one(-2 * (i64::from(n) - 1))?))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        bilinear(&self.gram, u, v)
    }

    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.pair(v, v)
    }

    pub fn pair_rat(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        bilinear(&self.gram.to_rational(), u, v)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.gram.det().is_zero()
    }

    pub fn signature(&self) -> Signature {
        signature(self)
    }

    pub fn kind(&self) -> LatticeKind {
        lattice_kind(self)
    }

    /// Gram matrix `B^T G B` of the sublattice spanned by the columns of `B`.
    pub fn restrict(&self, m: &Sublattice) -> Result<Lattice> {
        self.check_ambient(m)?;
        let b = m.basis();
        Lattice::new(b.transpose().mul(&self.gram).mul(b))
    }

    pub(crate) fn check_ambient(&self, m: &Sublattice) -> Result<()> {
        if m.ambient_rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: format!("sublattice of rank-{} lattice", self.rank()),
                found: format!("ambient rank {}", m.ambient_rank()),
            });
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.rank()),
                found: format!("length {}", v.len()),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .gram
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Inertia `(positives, zeros, negatives)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub positives: usize,
    pub zeros: usize,
    pub negatives: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positives, self.zeros, self.negatives)
    }
}

/// Symmetric elimination over the rationals. Pivots on the nonzero diagonal
/// entry of least absolute value; if the active diagonal is zero but some
/// off-diagonal entry `b` is not, `e_i + e_j` has square `2b` and becomes the
/// next pivot. Returns the pivot vectors with their squares and the number of
/// null directions left over.
fn diagonalize(l: &Lattice) -> (Vec<(Vec<BigRational>, BigRational)>, usize) {
    let n = l.rank();
    let mut a = l.gram.to_rational();
    let mut basis: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|k| BigRational::from_integer(BigInt::from(u8::from(i == k)))).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    while !active.is_empty() {
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| !a[(i, i)].is_zero())
            .min_by(|&x, &y| a[(x, x)].abs().cmp(&a[(y, y)].abs()));
        let p = match pivot {
            Some(p) => p,
            None => {
                let off = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(
                    |&(i, j)| i != j && !a[(i, j)].is_zero(),
                );
                let Some((i, j)) = off else {
                    return (pivots, active.len());
                };
                for k in 0..n {
                    let v = a[(i, k)].clone() + &a[(j, k)];
                    a[(i, k)] = v;
                }
                for k in 0..n {
                    let v = a[(k, i)].clone() + &a[(k, j)];
                    a[(k, i)] = v;
                }
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(&bj) {
                    *x += y;
                }
                i
            }
        };
        let d = a[(p, p)].clone();
        active.retain(|&i| i != p);
        for &i in &active {
            if a[(i, p)].is_zero() {
                continue;
            }
            let f = &a[(i, p)] / &d;
            for &j in &active {
                let v = &a[(i, j)] - &f * &a[(p, j)];
                a[(i, j)] = v;
            }
            let bp = basis[p].clone();
            for (x, y) in basis[i].iter_mut().zip(&bp) {
                *x -= &f * y;
            }
        }
        for &i in &active {
            a[(i, p)] = BigRational::zero();
            a[(p, i)] = BigRational::zero();
        }
        pivots.push((basis[p].clone(), d));
    }
    (pivots, 0)
}

pub fn signature(l: &Lattice) -> Signature {
    let (pivots, zeros) = diagonalize(l);
    let positives = pivots.iter().filter(|(_, d)| d.is_positive()).count();
    Signature {
        positives,
        zeros,
        negatives: pivots.len() - positives,
    }
}

/// A primitive vector of positive square, if the form has one.
pub fn positive_vector(l: &Lattice) -> Option<Vec<BigInt>> {
    let (pivots, _) = diagonalize(l);
    pivots
        .into_iter()
        .find(|(_, d)| d.is_positive())
        .map(|(v, _)| clear_denominators(&v))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LatticeKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Other,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LatticeKind::Hyperbolic => "hyperbolic",
            LatticeKind::Parabolic => "parabolic",
            LatticeKind::Elliptic => "elliptic",
            LatticeKind::Other => "other",
        };
        f.write_str(s)
    }
}

pub fn lattice_kind(l: &Lattice) -> LatticeKind {
    let s = signature(l);
    let r = l.rank();
    match (s.positives, s.zeros) {
        (1, 0) => LatticeKind::Hyperbolic,
        (0, 1) => LatticeKind::Parabolic,
        (0, 0) if s.negatives == r => LatticeKind::Elliptic,
        _ => LatticeKind::Other,
    }
}

/// Sublattice stored by an `r x k` basis matrix with independent columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sublattice {
    basis: IntMatrix,
    primitive: bool,
}

impl Sublattice {
    /// Primitivity is computed, never assumed.
    pub fn new(ambient_rank: usize, columns: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.len() != ambient_rank) {
            return Err(Error::DimensionMismatch {
                expected: format!("basis vectors of length {ambient_rank}"),
                found: format!("length {}", c.len()),
            });
        }
        let basis = IntMatrix::from_columns(ambient_rank, &columns);
        if basis.to_rational().rank() != columns.len() {
            return Err(Error::invalid("sublattice basis columns are linearly dependent"));
        }
        let primitive = basis.smith_invariants().iter().all(|d| d == &int(1));
        Ok(Sublattice { basis, primitive })
    }

    pub fn from_i64(ambient_rank: usize, columns: &[&[i64]]) -> Result<Self> {
        Self::new(
            ambient_rank,
            columns
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice {
            basis: IntMatrix::identity(ambient_rank),
            primitive: true,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_proper(&self) -> bool {
        self.rank() > 0 && self.rank() < self.ambient_rank()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the sublattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let rhs: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let x = self.basis.to_rational().solve(&rhs)?;
        x.iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Whether `v` is in the rational span.
    pub fn spans(&self, v: &[BigInt]) -> bool {
        let m = self.basis.hstack(&IntMatrix::from_columns(v.len(), &[v.to_vec()]));
        m.to_rational().rank() == self.rank()
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .columns()
            .iter()
            .map(|c| format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "span{{{}}}", cols.join(", "))
    }
}

/// Primitive closure `(M tensor Q) cap Z^r`: the integer kernel of the integer
/// kernel of `B^T`.
pub fn saturation(m: &Sublattice) -> Result<Sublattice> {
    let r = m.ambient_rank();
    if m.basis.to_rational().rank() != m.rank() {
        return Err(Error::invalid("sublattice basis columns are linearly dependent"));
    }
    if m.primitive {
        return Ok(m.clone());
    }
    let annihilator = m.basis.transpose().integer_kernel();
    let a = if annihilator.is_empty() {
        IntMatrix::zeros(0, r)
    } else {
        IntMatrix::from_rows(annihilator)
    };
    let cols = a.integer_kernel();
    let out = Sublattice::new(r, cols)?;
    if !out.primitive || out.rank() != m.rank() {
        return Err(Error::internal("saturation produced a non-primitive basis"));
    }
    Ok(out)
}

/// `{v : (v, w) = 0 for all w in M}`, primitive by construction.
pub fn orth_complement(l: &Lattice, m: &Sublattice) -> Result<Sublattice> {
    l.check_ambient(m)?;
    let pairing = m.basis.transpose().mul(&l.gram);
    let cols = if m.rank() == 0 {
        IntMatrix::identity(l.rank()).columns()
    } else {
        pairing.integer_kernel()
    };
    Sublattice::new(l.rank(), cols)
}

/// `M cap M^perp`, the radical of the restricted form pushed back into `L`.
pub fn radical_in(l: &Lattice, m: &Sublattice) -> Result<Sublattice> {
    let restricted = l.restrict(m)?;
    let coords = restricted.gram.integer_kernel();
    let cols = coords.iter().map(|c| m.basis.mul_vec(c)).collect();
    Sublattice::new(l.rank(), cols)
}

/// Corank of `M + N` in `L`, with the index of `M + N` when the corank is 0.
pub fn sum_corank_and_index(l: &Lattice, m: &Sublattice, n: &Sublattice) -> Result<(usize, Option<BigInt>)> {
    l.check_ambient(m)?;
    l.check_ambient(n)?;
    let joined = m.basis.hstack(&n.basis);
    let rank = joined.to_rational().rank();
    let corank = l.rank() - rank;
    let index = if corank == 0 && joined.cols() == l.rank() {
        Some(joined.det().abs())
    } else if corank == 0 {
        let d = joined.smith_invariants();
        Some(d.iter().fold(int(1), |acc, x| acc * x))
    } else {
        None
    };
    Ok((corank, index))
}

/// A chosen component of the positive cone, represented by a vector of positive
/// square.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConeReference {
    lattice: Lattice,
    vector: Vec<BigInt>,
}

impl ConeReference {
    pub fn new(l: &Lattice, vector: Vec<BigInt>) -> Result<Self> {
        l.check_vector(&vector)?;
        if !l.norm(&vector).is_positive() {
            return Err(Error::invalid(format!(
                "cone reference must have positive square, got {}",
                l.norm(&vector)
            )));
        }
        Ok(ConeReference {
            lattice: l.clone(),
            vector,
        })
    }

    pub fn from_i64(l: &Lattice, v: &[i64]) -> Result<Self> {
        Self::new(l, v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// First vector of positive square in `{-2..2}^r`, by sup-norm radius and
    /// then lexicographically with digits ordered `0, 1, -1, 2, -2`.
    pub fn default_for(l: &Lattice) -> Result<Self> {
        const DIGITS: [i64; 5] = [0, 1, -1, 2, -2];
        let r = l.rank();
        for radius in 1..=2usize {
            let width = 2 * radius + 1;
            let total = width.checked_pow(r as u32).unwrap_or(usize::MAX);
            for code in 0..total {
                let mut c = code;
                let mut digits = vec![0usize; r];
                for d in digits.iter_mut().rev() {
                    *d = c % width;
                    c /= width;
                }
                if !digits.contains(&(width - 1)) && !digits.contains(&(width - 2)) {
                    continue;
                }
                let v: Vec<BigInt> = digits.iter().map(|&d| BigInt::from(DIGITS[d])).collect();
                if l.norm(&v).is_positive() {
                    return Self::new(l, v);
                }
            }
        }
        Err(Error::invalid("no vector of positive square with coordinates in -2..2"))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    /// Same component as `other` (both references must live on one lattice).
    pub fn agrees_with(&self, other: &ConeReference) -> bool {
        self.lattice.pair(&self.vector, &other.vector).is_positive()
    }

    pub fn negated(&self) -> ConeReference {
        ConeReference {
            lattice: self.lattice.clone(),
            vector: self.vector.iter().map(|x| -x).collect(),
        }
    }
}

/// `(v, v) > 0` and `(v, ref) > 0`.
pub fn cone_contains(cone: &ConeReference, v: &[BigInt]) -> bool {
    let l = &cone.lattice;
    v.len() == l.rank() && l.norm(v).is_positive() && l.pair(v, &cone.vector).is_positive()
}

/// Isotropic or positive vector on the closure of the chosen component.
pub fn closed_cone_contains(cone: &ConeReference, v: &[BigInt]) -> bool {
    let l = &cone.lattice;
    v.len() == l.rank() && !l.norm(v).is_negative() && !l.pair(v, &cone.vector).is_negative()
}

/// Primitive vector with the sign making its pairing with the reference
/// nonnegative (or the first nonzero coordinate positive on a tie).
pub fn orient(cone: &ConeReference, v: &[BigInt]) -> Vec<BigInt> {
    let v = primitive(v);
    let p = cone.lattice.pair(&v, &cone.vector);
    let flip = if p.is_zero() {
        v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative)
    } else {
        p.is_negative()
    };
    if flip {
        v.iter().map(|x| -x).collect()
    } else {
        v
    }
}
