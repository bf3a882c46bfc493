//! Exact univariate integer polynomials.
//!
//! Real roots are located with Sturm sequences evaluated at rational points.
//! Roots on the unit circle are counted through the substitution
//! `x = t + 1/t`, which sends the reciprocal part of a polynomial to a
//! polynomial whose real roots in `(-2, 2)` pair up with the unit-circle roots.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `t - c`
    pub fn linear_root(c: i64) -> Self {
        Self::from_i64(&[-c, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// Panics on the zero polynomial.
    pub fn lead(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lead().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `t^deg * p(1/t)`
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Sign of `p(x)` computed with integers only: the sign of the homogenised
    /// value `sum c_k n^k d^(deg-k)` for `x = n/d`, `d > 0`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner in n with powers of d growing from the top coefficient down
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        acc.sign_ord()
    }

    /// Sign of `p(x)` as `x -> +infinity`.
    pub fn sign_at_pos_infinity(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else {
            self.lead().sign_ord()
        }
    }

    pub fn sign_at_neg_infinity(&self) -> Ordering {
        let s = self.sign_at_pos_infinity();
        if self.deg() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return self.clone();
        }
        let lc = d.lead().clone();
        let mut r = self.coeffs.clone();
        let steps = self.deg() - dd + 1;
        for _ in 0..steps {
            let top = r.len() - 1;
            let t = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - dd;
            for (k, dc) in d.coeffs.iter().enumerate() {
                r[shift + k] -= &t * dc;
            }
            r.pop();
        }
        Self::new(r)
    }

    /// Exact quotient over the integers, `None` if `d` does not divide `self`
    /// with integral quotient.
    pub fn checked_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let lc = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &quot * dc;
            }
            q[k] = quot;
        }
        if r.iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Space separated decimal coefficients, constant term first.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_coeffs(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>()
                    .map_err(|_| Error::invalid(format!("not an integer coefficient: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_default();
                    a + o.coeffs.get(k).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        self + &(-o)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `[lo, hi]` printed with `digits` decimals, rounded outward.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            decimal(&self.lo, digits, false),
            decimal(&self.hi, digits, true)
        )
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Decimal rendering of a rational, rounded down (or up when `ceil`).
pub fn decimal(x: &BigRational, digits: usize, ceil: bool) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let v = if ceil { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = v.is_negative();
    let a = v.abs();
    let (int_part, frac) = a.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    s
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Region of the real line for Sturm counting. All regions are open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealInterval {
    Open(BigRational, BigRational),
    Above(BigRational),
    Below(BigRational),
    Line,
}

impl RealInterval {
    pub fn open(lo: i64, hi: i64) -> Self {
        RealInterval::Open(BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into()))
    }

    pub fn above(lo: i64) -> Self {
        RealInterval::Above(BigRational::from_integer(lo.into()))
    }
}

/// Multiplicities of the cyclotomic factors `Phi_n` of a polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CyclotomicMultiset {
    entries: BTreeMap<u64, u32>,
}

impl CyclotomicMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: u64, mult: u32) {
        if mult > 0 {
            *self.entries.entry(n).or_insert(0) += mult;
        }
    }

    pub fn entries(&self) -> &BTreeMap<u64, u32> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, n: u64) -> u32 {
        self.entries.get(&n).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.entries
            .iter()
            .map(|(&n, &m)| euler_phi(n) * u64::from(m))
            .sum()
    }

    /// Least common multiple of the indices.
    pub fn lcm(&self) -> u64 {
        self.entries.keys().fold(1u64, |l, &n| l.lcm(&n))
    }

    pub fn product(&self) -> IntPolynomial {
        let mut cache = CyclotomicCache::default();
        self.entries.iter().fold(IntPolynomial::one(), |acc, (&n, &m)| {
            &acc * &cache.get(n).pow(m)
        })
    }
}

impl fmt::Display for CyclotomicMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(n, m)| {
                if *m == 1 {
                    format!("Phi{n}")
                } else {
                    format!("Phi{n}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[derive(Default)]
struct CyclotomicCache {
    polys: HashMap<u64, IntPolynomial>,
}

impl CyclotomicCache {
    fn get(&mut self, n: u64) -> IntPolynomial {
        if let Some(p) = self.polys.get(&n) {
            return p.clone();
        }
        let mut p = IntPolynomial::monomial(BigInt::one(), n as usize);
        p = &p - &IntPolynomial::one();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let phi_d = self.get(d);
            p = p
                .checked_div(&phi_d)
                .expect("cyclotomic factor divides t^n - 1");
        }
        self.polys.insert(n, p.clone());
        p
    }
}

/// The `n`-th cyclotomic polynomial, obtained by dividing `t^n - 1` by `Phi_d`
/// for every proper divisor `d` of `n`.
pub fn cyclotomic_poly(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::invalid("cyclotomic index must be positive"));
    }
    Ok(CyclotomicCache::default().get(n))
}

/// Primitive gcd with positive leading coefficient, by the primitive
/// polynomial remainder sequence.
pub fn poly_gcd(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::invalid("gcd of two zero polynomials"));
    }
    let mut a = p.primitive_part();
    let mut b = q.primitive_part();
    if a.deg() < b.deg() || a.is_zero() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part();
    }
    Ok(a.primitive_part())
}

pub fn squarefree_part(p: &IntPolynomial) -> Result<IntPolynomial> {
    if p.is_zero() {
        return Err(Error::invalid("squarefree part of the zero polynomial"));
    }
    let g = poly_gcd(p, &p.derivative())?;
    let q = p
        .checked_div(&g)
        .or_else(|| p.primitive_part().checked_div(&g))
        .ok_or_else(|| Error::internal("gcd does not divide its argument"))?;
    Ok(q.primitive_part())
}

pub fn is_squarefree(p: &IntPolynomial) -> bool {
    !p.is_zero() && poly_gcd(p, &p.derivative()).is_ok_and(|g| g.is_constant())
}

/// Splits `p = q * prod Phi_n^m(n)` with `q` free of cyclotomic factors.
pub fn strip_cyclotomic(p: &IntPolynomial) -> Result<(IntPolynomial, CyclotomicMultiset)> {
    if !p.is_monic() {
        return Err(Error::invalid(format!("strip_cyclotomic needs a monic polynomial, got {p}")));
    }
    let d = p.deg() as u64;
    let bound = 2 * d * d;
    let mut cache = CyclotomicCache::default();
    let mut rest = p.clone();
    let mut mult = CyclotomicMultiset::new();
    for n in 1..=bound {
        if rest.deg() == 0 {
            break;
        }
        if euler_phi(n) > rest.deg() as u64 {
            continue;
        }
        let phi = cache.get(n);
        let mut m = 0;
        while let Some(q) = rest.checked_div(&phi) {
            rest = q;
            m += 1;
        }
        mult.insert(n, m);
    }
    Ok((rest, mult))
}

struct SturmSequence {
    chain: Vec<IntPolynomial>,
}

impl SturmSequence {
    fn new(p: &IntPolynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_zero() {
                chain.pop();
                break;
            }
            if b.is_constant() {
                break;
            }
            let delta = a.deg() - b.deg();
            let mut r = a.pseudo_rem(b);
            // prem = lc(b)^(delta+1) * rem; the chain needs -c * rem with c > 0
            let lc_power_negative = b.lead().is_negative() && (delta + 1) % 2 == 1;
            if !lc_power_negative {
                r = -&r;
            }
            if r.is_zero() {
                break;
            }
            let c = r.content();
            chain.push(IntPolynomial::new(r.coeffs().iter().map(|x| x / &c).collect()));
        }
        SturmSequence { chain }
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn at_pos_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(IntPolynomial::sign_at_pos_infinity))
    }

    fn at_neg_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(IntPolynomial::sign_at_neg_infinity))
    }
}

/// Number of distinct real roots of a squarefree `p` in an open region.
///
/// Endpoints that happen to be roots are handled exactly: with zeros dropped
/// from the sign sequence, the variation count at a root equals the count just
/// to its right, so `V(a) - V(b)` counts roots in `(a, b]`.
pub fn sturm_count(p: &IntPolynomial, region: &RealInterval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::invalid("Sturm count of the zero polynomial"));
    }
    if !is_squarefree(p) {
        return Err(Error::invalid(format!(
            "Sturm count needs a squarefree polynomial; apply squarefree_part to {p}"
        )));
    }
    if p.is_constant() {
        return Ok(0);
    }
    let s = SturmSequence::new(p);
    let root_at = |x: &BigRational| usize::from(p.sign_at(x) == Ordering::Equal);
    let count = match region {
        RealInterval::Open(a, b) => {
            if a >= b {
                return Ok(0);
            }
            s.at(a) - s.at(b) - root_at(b)
        }
        RealInterval::Above(a) => s.at(a) - s.at_pos_infinity(),
        RealInterval::Below(b) => s.at_neg_infinity() - s.at(b) - root_at(b),
        RealInterval::Line => s.at_neg_infinity() - s.at_pos_infinity(),
    };
    Ok(count)
}

/// `t^deg p(1/t) = +-p(t)`.
pub fn is_reciprocal(p: &IntPolynomial) -> bool {
    if p.is_zero() {
        return false;
    }
    let r = p.reverse();
    r == *p || r == -p
}

/// `q` with `t^m q(t + 1/t) = g(t)` for a palindromic `g` of degree `2m`.
fn trace_polynomial(g: &IntPolynomial) -> IntPolynomial {
    let m = g.deg() / 2;
    let c = g.coeffs();
    // D_0 = 2, D_1 = x, D_k = x D_{k-1} - D_{k-2}; t^k + t^-k = D_k(t + 1/t)
    let x = IntPolynomial::from_i64(&[0, 1]);
    let mut d_prev = IntPolynomial::from_i64(&[2]);
    let mut d_cur = x.clone();
    let mut q = IntPolynomial::constant(c[m].clone());
    for k in 1..=m {
        if k > 1 {
            let next = &(&x * &d_cur) - &d_prev;
            d_prev = std::mem::replace(&mut d_cur, next);
        }
        q = &q + &d_cur.scale(&c[m + k]);
    }
    q
}

/// Number of roots of a squarefree `p` on the unit circle, `+-1` included.
pub fn unit_circle_root_count(p: &IntPolynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::invalid("unit-circle count of the zero polynomial"));
    }
    if !is_squarefree(p) {
        return Err(Error::invalid(format!(
            "unit-circle count needs a squarefree polynomial; apply squarefree_part to {p}"
        )));
    }
    let mut rest = p.primitive_part();
    let mut count = 0;
    for r in [1, -1] {
        if let Some(q) = rest.checked_div(&IntPolynomial::linear_root(r)) {
            rest = q;
            count += 1;
        }
    }
    if rest.is_constant() {
        return Ok(count);
    }
    let g = poly_gcd(&rest, &rest.reverse())?;
    if g.is_constant() {
        return Ok(count);
    }
    if g.reverse() != g || g.deg() % 2 != 0 {
        return Err(Error::internal(format!("reciprocal part {g} is not palindromic")));
    }
    let q = trace_polynomial(&g);
    Ok(count + 2 * sturm_count(&q, &RealInterval::open(-2, 2))?)
}

/// Salem test following the Kronecker argument: a monic squarefree reciprocal
/// polynomial with no cyclotomic factor, exactly one root in `(1, inf)`, one in
/// `(0, 1)` and the rest on the unit circle is irreducible, because any factor
/// missing the root above 1 would have all its roots on the circle.
pub fn is_salem(p: &IntPolynomial) -> bool {
    salem_check(p).unwrap_or(false)
}

fn salem_check(p: &IntPolynomial) -> Result<bool> {
    if p.is_zero() || p.deg() < 2 || !p.is_monic() {
        return Ok(false);
    }
    if !is_reciprocal(p) || !is_squarefree(p) {
        return Ok(false);
    }
    let (rest, cyc) = strip_cyclotomic(p)?;
    if !cyc.is_empty() || rest != *p {
        return Ok(false);
    }
    if sturm_count(p, &RealInterval::above(1))? != 1 {
        return Ok(false);
    }
    if sturm_count(p, &RealInterval::open(0, 1))? != 1 {
        return Ok(false);
    }
    Ok(unit_circle_root_count(p)? == p.deg() - 2)
}

/// Bisection enclosure of the Salem number of `p` with width at most
/// `precision`.
pub fn salem_number_interval(p: &IntPolynomial, precision: &BigRational) -> Result<RationalInterval> {
    if !precision.is_positive() {
        return Err(Error::invalid("precision must be positive"));
    }
    if !is_salem(p) {
        return Err(Error::invalid(format!("{p} is not a Salem polynomial")));
    }
    let bound = p
        .coeffs()
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::one);
    let mut lo = BigRational::one();
    let mut hi = BigRational::from_integer(BigInt::one() + bound);
    let s_lo = p.sign_at(&lo);
    let s_hi = p.sign_at(&hi);
    if s_lo == Ordering::Equal || s_lo == s_hi {
        return Err(Error::internal("Salem bracket lost its sign change"));
    }
    let two = BigInt::from(2);
    while &hi - &lo > *precision {
        let mid = (&lo + &hi) / &two;
        match p.sign_at(&mid) {
            Ordering::Equal => return Err(Error::internal("rational root of a Salem polynomial")),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    RationalInterval::new(lo, hi)
}
