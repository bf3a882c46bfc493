//! Isometries of integral lattices and their spectral classification.
//!
//! A cone-preserving isometry of a hyperbolic lattice has characteristic
//! polynomial `S(t) * prod Phi_n(t)^m` with at most one Salem factor `S`. The
//! three cases are elliptic (finite order), parabolic (infinite order, all
//! eigenvalues roots of unity) and Salem type.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{orient, ConeReference, Lattice, LatticeKind, Sublattice};
use crate::linalg::{l1_norm_rat, primitive, to_rational_vec, IntMatrix, RatMatrix};
use crate::polyarith::{
    is_salem, salem_number_interval, strip_cyclotomic, CyclotomicMultiset, IntPolynomial,
    RationalInterval,
};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

/// Checks `m^T G m = G` and `|det m| = 1` exactly.
pub fn verify_isometry(l: &Lattice, m: &IntMatrix) -> Result<Isometry> {
    let r = l.rank();
    if m.rows() != r || m.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: format!("{r}x{r} matrix"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let pulled = m.transpose().mul(l.gram()).mul(m);
    for i in 0..r {
        for j in 0..r {
            if pulled[(i, j)] != l.gram()[(i, j)] {
                return Err(Error::NotIsometry {
                    row: i,
                    col: j,
                    expected: l.gram()[(i, j)].to_string(),
                    found: pulled[(i, j)].to_string(),
                });
            }
        }
    }
    let det = m.det();
    if !det.abs().is_one() {
        return Err(Error::invalid(format!("isometry determinant must be +-1, got {det}")));
    }
    Ok(Isometry {
        lattice: l.clone(),
        matrix: m.clone(),
    })
}

impl Isometry {
    pub fn new(l: &Lattice, m: IntMatrix) -> Result<Self> {
        verify_isometry(l, &m)
    }

    pub fn from_i64(l: &Lattice, rows: &[&[i64]]) -> Result<Self> {
        verify_isometry(l, &IntMatrix::from_i64(rows))
    }

    pub fn identity(l: &Lattice) -> Self {
        Isometry {
            lattice: l.clone(),
            matrix: IntMatrix::identity(l.rank()),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            lattice: self.lattice.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self
            .matrix
            .inverse_unimodular()
            .expect("verified isometries are unimodular");
        Isometry {
            lattice: self.lattice.clone(),
            matrix: inv,
        }
    }

    pub fn pow(&self, e: i64) -> Isometry {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        Isometry {
            lattice: self.lattice.clone(),
            matrix: base.matrix.pow(e.unsigned_abs()),
        }
    }

    /// `h * self * h^-1`
    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose(self).compose(&h.inverse())
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_rat(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.matrix.to_rational().mul_vec(v)
    }

    pub fn commutes_with(&self, other: &Isometry) -> bool {
        self.matrix.mul(&other.matrix) == other.matrix.mul(&self.matrix)
    }

    /// Action on a sublattice with `g(M) = M`, in the basis of `M`.
    pub fn restrict(&self, m: &Sublattice) -> Result<Isometry> {
        let sub = self.lattice.restrict(m)?;
        let cols = m
            .columns()
            .iter()
            .map(|c| {
                m.coordinates(&self.apply(c))
                    .ok_or_else(|| Error::precondition("sublattice is not invariant"))
            })
            .collect::<Result<Vec<_>>>()?;
        verify_isometry(&sub, &IntMatrix::from_columns(m.rank(), &cols))
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

/// `det(tI - g)` by Berkowitz's division-free algorithm.
pub fn char_poly(g: &Isometry) -> IntPolynomial {
    char_poly_matrix(&g.matrix)
}

pub fn char_poly_matrix(a: &IntMatrix) -> IntPolynomial {
    assert!(a.is_square());
    let n = a.rows();
    // coefficients highest degree first
    let mut vect = vec![BigInt::one()];
    for r in 0..n {
        let row: Vec<BigInt> = (0..r).map(|j| a[(r, j)].clone()).collect();
        let mut x: Vec<BigInt> = (0..r).map(|i| a[(i, r)].clone()).collect();
        let mut toeplitz = vec![BigInt::one(), -a[(r, r)].clone()];
        for _ in 0..r {
            let dot = row.iter().zip(&x).fold(BigInt::zero(), |s, (p, q)| s + p * q);
            toeplitz.push(-dot);
            x = (0..r)
                .map(|i| (0..r).fold(BigInt::zero(), |s, j| s + &a[(i, j)] * &x[j]))
                .collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .filter(|&j| i - j < toeplitz.len())
                    .fold(BigInt::zero(), |s, j| s + &toeplitz[i - j] * &vect[j])
            })
            .collect();
        vect = next;
    }
    vect.reverse();
    IntPolynomial::new(vect)
}

/// `p(m)` by Horner's rule.
pub fn eval_at_matrix(p: &IntPolynomial, m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    p.coeffs().iter().rev().fold(IntMatrix::zeros(n, n), |acc, c| {
        acc.mul(m).add(&IntMatrix::identity(n).scale(c))
    })
}

/// `(g ref, ref) > 0`.
pub fn preserves_cone(g: &Isometry, cone: &ConeReference) -> bool {
    let v = cone.vector();
    g.lattice.pair(&g.apply(v), v).is_positive()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpectralClass {
    Elliptic {
        order: u64,
    },
    Parabolic {
        fixed_ray: Vec<BigInt>,
    },
    SalemType {
        salem_factor: IntPolynomial,
        cyclotomic_part: CyclotomicMultiset,
        salem_number: RationalInterval,
    },
}

impl SpectralClass {
    pub fn tag(&self) -> &'static str {
        match self {
            SpectralClass::Elliptic { .. } => "Elliptic",
            SpectralClass::Parabolic { .. } => "Parabolic",
            SpectralClass::SalemType { .. } => "SalemType",
        }
    }

    pub fn is_infinite_order(&self) -> bool {
        !matches!(self, SpectralClass::Elliptic { .. })
    }
}

pub fn default_salem_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 32u32)
}

/// Elliptic / parabolic / Salem-type classification on a hyperbolic lattice.
pub fn classify(g: &Isometry, cone: &ConeReference) -> Result<SpectralClass> {
    classify_with_precision(g, cone, &default_salem_precision())
}

pub fn classify_with_precision(
    g: &Isometry,
    cone: &ConeReference,
    precision: &BigRational,
) -> Result<SpectralClass> {
    if g.lattice.kind() != LatticeKind::Hyperbolic {
        return Err(Error::precondition("classify needs a hyperbolic lattice"));
    }
    check_cone(g, cone)?;
    if !preserves_cone(g, cone) {
        return Err(Error::precondition("isometry swaps the two components of the positive cone"));
    }
    let phi = char_poly(g);
    let (rest, cyc) = strip_cyclotomic(&phi)?;
    if rest.is_one() {
        return match finite_order(g, &cyc)? {
            Some(order) => Ok(SpectralClass::Elliptic { order }),
            None => Ok(SpectralClass::Parabolic {
                fixed_ray: fixed_isotropic_ray(g, cone)?,
            }),
        };
    }
    if !is_salem(&rest) {
        return Err(Error::internal(format!(
            "non-cyclotomic part {rest} of {phi} is not a Salem polynomial"
        )));
    }
    let salem_number = salem_number_interval(&rest, precision)?;
    Ok(SpectralClass::SalemType {
        salem_factor: rest,
        cyclotomic_part: cyc,
        salem_number,
    })
}

fn check_cone(g: &Isometry, cone: &ConeReference) -> Result<()> {
    if cone.lattice() != &g.lattice {
        return Err(Error::invalid("cone reference belongs to a different lattice"));
    }
    Ok(())
}

/// Order of `g` when its characteristic polynomial is a product of cyclotomic
/// factors: finite iff the product of the distinct factors kills `g`.
fn finite_order(g: &Isometry, cyc: &CyclotomicMultiset) -> Result<Option<u64>> {
    let mut radical = CyclotomicMultiset::new();
    for &n in cyc.entries().keys() {
        radical.insert(n, 1);
    }
    if !eval_at_matrix(&radical.product(), &g.matrix).is_zero() {
        return Ok(None);
    }
    let order = cyc.lcm();
    if !g.matrix.pow(order).is_identity() {
        return Err(Error::internal(format!("g^{order} is not the identity")));
    }
    for p in prime_factors(order) {
        if g.matrix.pow(order / p).is_identity() {
            return Err(Error::internal(format!("g^{} is already the identity", order / p)));
        }
    }
    Ok(Some(order))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exact multiplicative order of a finite-order isometry of any lattice.
pub fn order(g: &Isometry) -> Result<u64> {
    let (rest, cyc) = strip_cyclotomic(&char_poly(g))?;
    if !rest.is_one() {
        return Err(Error::precondition("isometry has an eigenvalue off the unit circle"));
    }
    finite_order(g, &cyc)?.ok_or_else(|| Error::precondition("isometry has infinite order"))
}

/// The primitive isotropic vector fixed by a parabolic `g`, oriented towards
/// the closed cone.
pub fn fixed_isotropic_ray(g: &Isometry, cone: &ConeReference) -> Result<Vec<BigInt>> {
    check_cone(g, cone)?;
    let r = g.rank();
    let k = g.matrix.sub(&IntMatrix::identity(r)).integer_kernel();
    if k.is_empty() {
        return Err(Error::precondition("isometry fixes no nonzero vector"));
    }
    let fixed = Sublattice::new(r, k)?;
    let rad = crate::lattice::radical_in(&g.lattice, &fixed)?;
    if rad.rank() != 1 {
        return Err(Error::precondition(format!(
            "fixed sublattice has radical of rank {}, expected a single isotropic ray",
            rad.rank()
        )));
    }
    let u = orient(cone, &rad.columns()[0]);
    if g.lattice.pair(&u, cone.vector()).is_zero() {
        return Err(Error::precondition("fixed radical vector is not on the cone boundary"));
    }
    Ok(u)
}

/// Approximate eigenvectors for `a` and `1/a`, with exact residual bounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EigenRays {
    pub attracting: Vec<BigRational>,
    pub repelling: Vec<BigRational>,
    /// Midpoint of the refined Salem interval.
    pub lambda: BigRational,
    pub salem_number: RationalInterval,
    /// `||g v - lambda v||_1 / ||v||_1` for the attracting vector.
    pub attracting_residual: BigRational,
    /// `||g^-1 v - lambda v||_1 / ||v||_1` for the repelling vector.
    pub repelling_residual: BigRational,
    /// The bound both residuals satisfy: `tolerance * (lo - 1)`.
    pub bound: BigRational,
}

impl EigenRays {
    /// `|(v, v)| / ||v||_1^2` for both vectors; small for near-isotropic rays.
    pub fn self_pairing(&self, l: &Lattice) -> (BigRational, BigRational) {
        let f = |v: &[BigRational]| {
            let n = l1_norm_rat(v);
            l.pair_rat(v, v).abs() / (&n * &n)
        };
        (f(&self.attracting), f(&self.repelling))
    }
}

pub fn residual(m: &IntMatrix, v: &[BigRational], lambda: &BigRational) -> BigRational {
    let gv = m.to_rational().mul_vec(v);
    let diff: Vec<BigRational> = gv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
    l1_norm_rat(&diff) / l1_norm_rat(v)
}

const EIGEN_ITERATION_CAP: usize = 100_000;

/// Power iteration from the cone reference. Both rays lie in the closure of
/// the chosen cone component.
pub fn eigen_rays(g: &Isometry, cone: &ConeReference, tolerance: &BigRational) -> Result<EigenRays> {
    if !tolerance.is_positive() {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let SpectralClass::SalemType { salem_factor, .. } = classify(g, cone)? else {
        return Err(Error::precondition("eigen rays need a Salem-type isometry"));
    };
    let coarse = salem_number_interval(&salem_factor, &default_salem_precision())?;
    let gap = coarse.lo() - BigRational::one();
    let bound = tolerance * &gap;
    let refined = salem_number_interval(&salem_factor, &(&bound / BigInt::from(8)))?;
    let lambda = refined.midpoint();
    let g_inv = g.inverse();
    let (attracting, attracting_residual) = power_iterate(&g.matrix, cone.vector(), &lambda, &bound)?;
    let (repelling, repelling_residual) = power_iterate(&g_inv.matrix, cone.vector(), &lambda, &bound)?;
    Ok(EigenRays {
        attracting,
        repelling,
        lambda,
        salem_number: refined,
        attracting_residual,
        repelling_residual,
        bound,
    })
}

fn power_iterate(
    m: &IntMatrix,
    start: &[BigInt],
    lambda: &BigRational,
    bound: &BigRational,
) -> Result<(Vec<BigRational>, BigRational)> {
    const KEEP_BITS: u64 = 192;
    let mut v = start.to_vec();
    for step in 0..EIGEN_ITERATION_CAP {
        v = m.mul_vec(&v);
        let bits = v.iter().map(|x| x.bits()).max().unwrap_or(0);
        if bits > 2 * KEEP_BITS {
            let shift = bits - KEEP_BITS;
            v = v.iter().map(|x| round_shift(x, shift)).collect();
        }
        if step % 4 == 3 {
            let vr = to_rational_vec(&v);
            let res = residual(m, &vr, lambda);
            if &res <= bound {
                let p = primitive(&v);
                return Ok((to_rational_vec(&p), res));
            }
        }
    }
    Err(Error::internal("power iteration did not reach the requested tolerance"))
}

fn round_shift(x: &BigInt, shift: u64) -> BigInt {
    let half = BigInt::one() << (shift - 1);
    (x + half).div_floor(&(BigInt::one() << shift))
}

/// Coefficients `c_k` with `g = sum c_k g0^k`, or `NotInCentralizer`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PowerExpansion {
    Coefficients(Vec<BigRational>),
    NotInCentralizer,
}

pub fn express_in_powers(g: &Isometry, g0: &Isometry) -> Result<PowerExpansion> {
    if g.lattice != g0.lattice {
        return Err(Error::invalid("isometries act on different lattices"));
    }
    let r = g0.rank();
    let phi = char_poly(g0);
    if !is_salem(&phi) || phi.deg() != r {
        return Err(Error::precondition(format!(
            "characteristic polynomial {phi} of g0 is not an irreducible Salem polynomial of degree {r}"
        )));
    }
    if !g.commutes_with(g0) {
        return Ok(PowerExpansion::NotInCentralizer);
    }
    let mut powers = Vec::with_capacity(r);
    let mut p = IntMatrix::identity(r);
    for _ in 0..r {
        powers.push(p.data().to_vec());
        p = p.mul(&g0.matrix);
    }
    let system = RatMatrix::from_columns(r * r, &powers.iter().map(|c| to_rational_vec(c)).collect::<Vec<_>>());
    let target = to_rational_vec(g.matrix.data());
    let coeffs = system
        .solve(&target)
        .ok_or_else(|| Error::internal("commuting isometry is not a polynomial in g0"))?;
    Ok(PowerExpansion::Coefficients(coeffs))
}

/// `sum c_k g0^k` over the rationals.
pub fn reconstruct(coeffs: &[BigRational], g0: &Isometry) -> RatMatrix {
    let r = g0.rank();
    let m = g0.matrix.to_rational();
    coeffs.iter().rev().fold(RatMatrix::zeros(r, r), |acc, c| {
        acc.mul(&m).add(&RatMatrix::identity(r).scale(c))
    })
}

/// Symmetric-square action of `[[a, b], [c, d]]` on binary quadratic forms
/// `x X^2 + y XY + z Y^2`, in the basis `(x, y, z)`.
pub fn sym_square(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
    IntMatrix::from_i64(&[
        &[a * a, a * c, c * c],
        &[2 * a * b, a * d + b * c, 2 * c * d],
        &[b * b, b * d, d * d],
    ])
}

/// Gram matrix of the discriminant form `y^2 - 4xz` up to sign, so that the
/// lattice is hyperbolic.
pub fn binary_forms_lattice() -> Lattice {
    Lattice::from_i64(&[&[0, 0, 2], &[0, -1, 0], &[2, 0, 0]]).expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn u() -> Lattice {
        Lattice::hyperbolic_plane()
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    /// `U + <-2>` and the transvection `x -> x + (x,a)e - (x,e)a + (x,e)e`
    /// with `e = (1,0,0)`, `a = (0,0,1)`.
    fn eichler() -> (Lattice, Isometry) {
        let l = u().direct_sum(&Lattice::rank_one(-2).unwrap());
        let e = v(&[1, 0, 0]);
        let a = v(&[0, 0, 1]);
        let cols: Vec<Vec<BigInt>> = (0..3)
            .map(|k| {
                let mut x = vec![BigInt::zero(); 3];
                x[k] = BigInt::one();
                let xa = l.pair(&x, &a);
                let xe = l.pair(&x, &e);
                (0..3)
                    .map(|i| &x[i] + &xa * &e[i] - &xe * &a[i] + &xe * &e[i])
                    .collect()
            })
            .collect();
        let g = Isometry::new(&l, IntMatrix::from_columns(3, &cols)).unwrap();
        (l, g)
    }

    fn sanov_salem() -> (Lattice, Isometry, ConeReference) {
        let l = binary_forms_lattice();
        let g = Isometry::new(&l, sym_square(2, 1, 1, 1)).unwrap();
        let cone = ConeReference::default_for(&l).unwrap();
        (l, g, cone)
    }

    #[test]
    fn verify_examples() {
        let l = u();
        assert!(verify_isometry(&l, &IntMatrix::identity(2)).is_ok());
        let swap = verify_isometry(&l, &IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(swap.det(), int(-1));
        match verify_isometry(&l, &IntMatrix::from_i64(&[&[2, 1], &[1, 1]])) {
            Err(Error::NotIsometry { row, col, found, .. }) => {
                assert_eq!((row, col), (0, 0));
                assert_eq!(found, "4");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            verify_isometry(&l, &IntMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn char_poly_examples() {
        let l3 = u().direct_sum(&Lattice::rank_one(-2).unwrap());
        let id = Isometry::identity(&l3);
        assert_eq!(char_poly(&id), IntPolynomial::from_i64(&[-1, 1]).pow(3));
        let swap = Isometry::from_i64(&u(), &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(char_poly(&swap), IntPolynomial::from_i64(&[-1, 0, 1]));
        let (_, g, _) = sanov_salem();
        let expect = &IntPolynomial::from_i64(&[-1, 1]) * &IntPolynomial::from_i64(&[1, -7, 1]);
        assert_eq!(char_poly(&g), expect);
        assert!(eval_at_matrix(&expect, g.matrix()).is_zero());
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64(&[&[1, 2, 0, -1], &[3, -1, 2, 0], &[0, 1, 4, 2], &[-2, 0, 1, 1]]);
        let p = char_poly_matrix(&m);
        assert_eq!(p.deg(), 4);
        assert_eq!(p.coeffs()[3], -m.trace());
        assert_eq!(p.coeffs()[0], m.det());
        assert!(eval_at_matrix(&p, &m).is_zero());
    }

    #[test]
    fn cone_preservation() {
        let l = u();
        let cone = ConeReference::from_i64(&l, &[1, 1]).unwrap();
        assert!(preserves_cone(&Isometry::identity(&l), &cone));
        let minus = Isometry::from_i64(&l, &[&[-1, 0], &[0, -1]]).unwrap();
        assert!(!preserves_cone(&minus, &cone));
        let swap = Isometry::from_i64(&l, &[&[0, 1], &[1, 0]]).unwrap();
        assert!(preserves_cone(&swap, &cone));
        assert!(matches!(classify(&minus, &cone), Err(Error::Precondition(_))));
    }

    #[test]
    fn classify_examples() {
        let l = u();
        let cone = ConeReference::default_for(&l).unwrap();
        assert_eq!(
            classify(&Isometry::identity(&l), &cone).unwrap(),
            SpectralClass::Elliptic { order: 1 }
        );

        let (l3, g) = eichler();
        let cone3 = ConeReference::default_for(&l3).unwrap();
        assert_eq!(char_poly(&g), IntPolynomial::from_i64(&[-1, 1]).pow(3));
        let n = g.matrix().sub(&IntMatrix::identity(3));
        assert!(!n.mul(&n).is_zero());
        assert!(n.mul(&n).mul(&n).is_zero());
        match classify(&g, &cone3).unwrap() {
            SpectralClass::Parabolic { fixed_ray } => assert_eq!(fixed_ray, v(&[1, 0, 0])),
            other => panic!("unexpected {other:?}"),
        }

        let (_, s, cone) = sanov_salem();
        match classify(&s, &cone).unwrap() {
            SpectralClass::SalemType {
                salem_factor,
                cyclotomic_part,
                salem_number,
            } => {
                assert_eq!(salem_factor, IntPolynomial::from_i64(&[1, -7, 1]));
                assert_eq!(cyclotomic_part.multiplicity(1), 1);
                // (7 + 3 sqrt 5)/2 = 6.854101966...
                assert!(salem_number.contains(&rat(6_854_101_966, 1_000_000_000))
                    || salem_number.lo() > &rat(6_854_101_965, 1_000_000_000));
                assert!(salem_number.hi() < &rat(6_854_101_967, 1_000_000_000));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(s.det(), int(1));

        let elliptic = Lattice::from_i64(&[&[-2]]).unwrap();
        let c = ConeReference::from_i64(&elliptic, &[1]);
        assert!(c.is_err());
    }

    #[test]
    fn order_examples() {
        let l = u();
        assert_eq!(order(&Isometry::from_i64(&l, &[&[-1, 0], &[0, -1]]).unwrap()).unwrap(), 2);
        assert_eq!(order(&Isometry::from_i64(&l, &[&[0, 1], &[1, 0]]).unwrap()).unwrap(), 2);
        let a2 = Lattice::from_i64(&[&[-2, 1], &[1, -2]]).unwrap();
        let cox = Isometry::from_i64(&a2, &[&[0, -1], &[1, -1]]).unwrap();
        let brute = (1..=12).find(|&k| cox.pow(k).is_identity()).unwrap() as u64;
        assert_eq!(order(&cox).unwrap(), brute);
        assert_eq!(brute, 3);
        let (_, g) = eichler();
        assert!(matches!(order(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn fixed_ray_examples() {
        let (l, g) = eichler();
        let cone = ConeReference::default_for(&l).unwrap();
        assert_eq!(fixed_isotropic_ray(&g, &cone).unwrap(), v(&[1, 0, 0]));
        assert!(fixed_isotropic_ray(&Isometry::identity(&l), &cone).is_err());
        // conjugate by the reflection in (0,0,1) composed with the swap of U
        let h = Isometry::from_i64(&l, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]).unwrap();
        let gh = g.conjugate_by(&h);
        let expect = orient(&cone, &h.apply(&v(&[1, 0, 0])));
        assert_eq!(fixed_isotropic_ray(&gh, &cone).unwrap(), expect);
    }

    #[test]
    fn eigen_ray_examples() {
        let (l, g, cone) = sanov_salem();
        let tol = rat(1, 1 << 20);
        let rays = eigen_rays(&g, &cone, &tol).unwrap();
        assert!(rays.attracting_residual <= rays.bound);
        assert!(rays.repelling_residual <= rays.bound);
        assert_eq!(residual(g.matrix(), &rays.attracting, &rays.lambda), rays.attracting_residual);
        let (pa, pr) = rays.self_pairing(&l);
        assert!(pa < rat(1, 1000) && pr < rat(1, 1000));

        let inv = eigen_rays(&g.inverse(), &cone, &tol).unwrap();
        assert_eq!(inv.attracting, rays.repelling);
        assert_eq!(inv.repelling, rays.attracting);

        let fine = eigen_rays(&g, &cone, &(tol / BigInt::from(1024))).unwrap();
        assert!(fine.attracting_residual <= fine.bound);
    }

    #[test]
    fn power_expression_examples() {
        // discriminant -5: the isometry group contains units of Q(sqrt 5)
        let l = Lattice::from_i64(&[&[2, 1], &[1, -2]]).unwrap();
        let g0 = find_rank2_salem(&l);
        let sq = g0.pow(2);
        let PowerExpansion::Coefficients(c) = express_in_powers(&sq, &g0).unwrap() else {
            panic!("g0^2 commutes with g0");
        };
        assert_eq!(reconstruct(&c, &g0), sq.matrix().to_rational());
        let inv = g0.inverse();
        let PowerExpansion::Coefficients(c) = express_in_powers(&inv, &g0).unwrap() else {
            panic!("g0^-1 commutes with g0");
        };
        assert_eq!(reconstruct(&c, &g0), inv.matrix().to_rational());
        let swap_like = small_isometries(&l)
            .into_iter()
            .find(|h| !h.commutes_with(&g0))
            .unwrap();
        assert_eq!(express_in_powers(&swap_like, &g0).unwrap(), PowerExpansion::NotInCentralizer);
        assert!(matches!(
            express_in_powers(&g0, &Isometry::identity(&l)),
            Err(Error::Precondition(_))
        ));
    }

    fn small_isometries(l: &Lattice) -> Vec<Isometry> {
        let mut out = Vec::new();
        for a in -5..=5 {
            for b in -5..=5 {
                for c in -5..=5 {
                    for d in -5..=5 {
                        if let Ok(g) = Isometry::from_i64(l, &[&[a, b], &[c, d]]) {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    }

    fn find_rank2_salem(l: &Lattice) -> Isometry {
        small_isometries(l)
            .into_iter()
            .find(|g| is_salem(&char_poly(g)))
            .expect("rank-2 lattice with a Salem isometry")
    }
}
