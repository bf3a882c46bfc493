//! Ping-pong search with half-spaces of hyperbolic space.
//!
//! Every set is `X_n = {x in P : (x, n) >= 0}` for a spacelike normal `n`, where
//! `P` is the chosen cone component. An element `e` maps `X_m` to `X_{e m}`.
//!
//! - `X_m' subset X_n` holds when `n = lambda m' + p` with `lambda >= 0` and `p`
//!   in the closed cone, because `(x, p) >= 0` for all `x in P`.
//! - `X_m` and `X_n` are disjoint when `-(m + mu n)` is a nonzero vector of the
//!   closed cone for some `mu >= 0`.
//!
//! `lambda = (m', n)/(m', m')` and `mu = -(m, n)/(n, n)` maximise the square of
//! `p` and give exact zeros when two boundaries are tangent at infinity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::certificate::{CertificateElement, Disjointness, Inclusion, PingPongCertificate};
use super::{GeneratorSet, Word};
use crate::error::{Error, Result};
use crate::isometry::{classify, eigen_rays, Isometry, SpectralClass};
use crate::lattice::{ConeReference, Lattice};
use crate::linalg::{clear_denominators, proportional, to_rational_vec, IntMatrix};

/// Sets `A+, A-, B+, B-` are indexed `0..4`; elements `f^N, f^-N, g^N, g^-N`
/// likewise.
pub(crate) const REQUIRED_INCLUSIONS: [(usize, usize, usize); 12] = [
    (0, 0, 0),
    (1, 1, 1),
    (2, 2, 2),
    (3, 3, 3),
    (0, 2, 0),
    (0, 3, 0),
    (1, 2, 1),
    (1, 3, 1),
    (2, 0, 2),
    (2, 1, 2),
    (3, 0, 3),
    (3, 1, 3),
];

pub(crate) const REQUIRED_DISJOINT: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)];

const LADDER_LEVELS: u32 = 48;

/// Rays are compared after normalising `(v, ref) = 1`.
fn near_threshold() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 40u32)
}

fn eigen_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 80u32)
}

#[derive(Clone, Debug)]
pub(crate) enum RayData {
    Parabolic { ray: Vec<BigInt>, period: u64 },
    Salem { plus: Vec<BigRational>, minus: Vec<BigRational> },
}

#[derive(Clone, Debug)]
pub(crate) struct ElementData {
    pub word: Word,
    pub iso: Isometry,
    pub rays: RayData,
}

/// Ray data for an infinite-order element, `None` for finite order.
pub(crate) fn element_data(word: Word, iso: Isometry, cone: &ConeReference) -> Result<Option<ElementData>> {
    let rays = match classify(&iso, cone)? {
        SpectralClass::Elliptic { .. } => return Ok(None),
        SpectralClass::Parabolic { fixed_ray } => {
            let (_, cyc) = crate::polyarith::strip_cyclotomic(&crate::isometry::char_poly(&iso))?;
            RayData::Parabolic {
                ray: fixed_ray,
                period: cyc.lcm(),
            }
        }
        SpectralClass::SalemType { .. } => {
            let r = eigen_rays(&iso, cone, &eigen_tolerance())?;
            RayData::Salem {
                plus: normalise(cone, &r.attracting),
                minus: normalise(cone, &r.repelling),
            }
        }
    };
    Ok(Some(ElementData { word, iso, rays }))
}

fn normalise(cone: &ConeReference, v: &[BigRational]) -> Vec<BigRational> {
    let l = cone.lattice();
    let p = l.pair_rat(v, &to_rational_vec(cone.vector()));
    v.iter().map(|x| x / &p).collect()
}

fn ray_list<'a>(cone: &ConeReference, d: &'a ElementData) -> Vec<(Vec<BigRational>, Option<&'a Vec<BigInt>>)> {
    match &d.rays {
        RayData::Parabolic { ray, .. } => vec![(normalise(cone, &to_rational_vec(ray)), Some(ray))],
        RayData::Salem { plus, minus } => vec![(plus.clone(), None), (minus.clone(), None)],
    }
}

/// True when some ray of `a` coincides with some ray of `b`.
pub(crate) fn coincident(cone: &ConeReference, a: &ElementData, b: &ElementData) -> bool {
    let ra = ray_list(cone, a);
    let rb = ray_list(cone, b);
    let eps = near_threshold();
    ra.iter().any(|(x, ex)| {
        rb.iter().any(|(y, ey)| match (ex, ey) {
            (Some(u), Some(v)) => proportional(u, v),
            _ => {
                let d: BigRational = x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum();
                d < eps
            }
        })
    })
}

struct Context<'a> {
    lattice: &'a Lattice,
    cone_ref: Vec<BigRational>,
}

impl Context<'_> {
    fn pair(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        self.lattice.pair_rat(u, v)
    }

    fn in_closed_cone(&self, p: &[BigRational], strict: bool) -> bool {
        let s = self.pair(p, &self.cone_ref);
        !self.pair(p, p).is_negative() && if strict { s.is_positive() } else { !s.is_negative() }
    }
}

pub(crate) fn inclusion_lambda(l: &Lattice, cone: &[BigInt], image: &[BigInt], target: &[BigInt]) -> Option<BigRational> {
    let ctx = Context {
        lattice: l,
        cone_ref: to_rational_vec(cone),
    };
    let m = to_rational_vec(image);
    let n = to_rational_vec(target);
    let mm = ctx.pair(&m, &m);
    if !mm.is_negative() {
        return None;
    }
    let lambda = ctx.pair(&m, &n) / mm;
    check_inclusion(&ctx, &m, &n, &lambda).then_some(lambda)
}

fn check_inclusion(ctx: &Context, m: &[BigRational], n: &[BigRational], lambda: &BigRational) -> bool {
    if lambda.is_negative() {
        return false;
    }
    let p: Vec<BigRational> = n.iter().zip(m).map(|(a, b)| a - lambda * b).collect();
    ctx.in_closed_cone(&p, false)
}

pub(crate) fn verify_inclusion(l: &Lattice, cone: &[BigInt], image: &[BigInt], target: &[BigInt], lambda: &BigRational) -> bool {
    let ctx = Context {
        lattice: l,
        cone_ref: to_rational_vec(cone),
    };
    check_inclusion(&ctx, &to_rational_vec(image), &to_rational_vec(target), lambda)
}

pub(crate) fn disjoint_mu(l: &Lattice, cone: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Option<BigRational> {
    let ctx = Context {
        lattice: l,
        cone_ref: to_rational_vec(cone),
    };
    let m = to_rational_vec(a);
    let n = to_rational_vec(b);
    let nn = ctx.pair(&n, &n);
    if !nn.is_negative() {
        return None;
    }
    let mu = -ctx.pair(&m, &n) / nn;
    check_disjoint(&ctx, &m, &n, &mu).then_some(mu)
}

fn check_disjoint(ctx: &Context, m: &[BigRational], n: &[BigRational], mu: &BigRational) -> bool {
    if mu.is_negative() {
        return false;
    }
    let p: Vec<BigRational> = m.iter().zip(n).map(|(a, b)| -(a + mu * b)).collect();
    ctx.in_closed_cone(&p, true)
}

pub(crate) fn verify_disjoint(l: &Lattice, cone: &[BigInt], a: &[BigInt], b: &[BigInt], mu: &BigRational) -> bool {
    let ctx = Context {
        lattice: l,
        cone_ref: to_rational_vec(cone),
    };
    check_disjoint(&ctx, &to_rational_vec(a), &to_rational_vec(b), mu)
}

/// `s(x) = (x, n) / (x, u)`, the horospherical coordinate along `n`.
fn horo(l: &Lattice, n: &[BigRational], u: &[BigRational], x: &[BigRational]) -> BigRational {
    l.pair_rat(x, n) / l.pair_rat(x, u)
}

const ROUNDING_MARGIN: u32 = 12;

fn round_dyadic(v: &[BigRational], bits: u32) -> Vec<BigRational> {
    let scale = BigRational::from_integer(BigInt::one() << bits);
    v.iter().map(|x| (x * &scale).round() / &scale).collect()
}

/// Half-space normals `(plus, minus)` for one side of the configuration.
fn side_normals(
    l: &Lattice,
    cone: &ConeReference,
    own: &ElementData,
    inverse_power: &IntMatrix,
    partner: &ElementData,
    level: u32,
) -> Option<[Vec<BigInt>; 2]> {
    match &own.rays {
        RayData::Salem { plus, minus } => {
            let c = BigRational::new(BigInt::one(), BigInt::one() << level);
            // the normals only need to be close to the eigen-rays; short
            // dyadic approximations keep the exact checks cheap
            let bits = level + ROUNDING_MARGIN;
            let plus = round_dyadic(plus, bits);
            let minus = round_dyadic(minus, bits);
            let a_plus: Vec<BigRational> = minus.iter().zip(&plus).map(|(m, p)| &c * m - p).collect();
            let a_minus: Vec<BigRational> = plus.iter().zip(&minus).map(|(p, m)| &c * p - m).collect();
            Some([clear_denominators(&a_plus), clear_denominators(&a_minus)])
        }
        RayData::Parabolic { ray, .. } => {
            let r = cone.vector();
            let id = IntMatrix::identity(l.rank());
            let mut n = inverse_power.sub(&id).mul_vec(r);
            let w = inverse_power.sub(&id).mul_vec(&n);
            let idx = ray.iter().position(|x| !x.is_zero())?;
            let mut kappa = BigRational::new(w[idx].clone(), ray[idx].clone());
            let consistent = w
                .iter()
                .zip(ray)
                .all(|(wi, ui)| BigRational::from_integer(wi.clone()) == &kappa * BigRational::from_integer(ui.clone()));
            if !consistent || kappa.is_zero() {
                return None;
            }
            if kappa.is_negative() {
                n = n.iter().map(|x| -x).collect();
                kappa = -kappa;
            }
            let u = to_rational_vec(ray);
            let nr = to_rational_vec(&n);
            let centre = match &partner.rays {
                RayData::Parabolic { ray: v, .. } => horo(l, &nr, &u, &to_rational_vec(v)),
                RayData::Salem { plus, minus } => {
                    (horo(l, &nr, &u, plus) + horo(l, &nr, &u, minus)) / BigInt::from(2)
                }
            };
            let sigma = kappa / BigInt::from(2);
            let centred: Vec<BigRational> = nr.iter().zip(&u).map(|(a, b)| a - &centre * b).collect();
            let plus: Vec<BigRational> = centred.iter().zip(&u).map(|(a, b)| a - &sigma * b).collect();
            let minus: Vec<BigRational> = centred.iter().zip(&u).map(|(a, b)| -a - &sigma * b).collect();
            Some([clear_denominators(&plus), clear_denominators(&minus)])
        }
    }
}

fn period(d: &ElementData) -> u64 {
    match d.rays {
        RayData::Parabolic { period, .. } => period,
        RayData::Salem { .. } => 1,
    }
}

/// Certificate for `<f^N, g^N>` with the smallest `N <= max_n`, checking own
/// inclusions of each side before the cross conditions.
pub(crate) fn search_pair(
    set: &GeneratorSet,
    cone: &ConeReference,
    f: &ElementData,
    g: &ElementData,
    max_n: u32,
) -> Option<PingPongCertificate> {
    let l = cone.lattice();
    let r = cone.vector();
    let levels = match (&f.rays, &g.rays) {
        (RayData::Parabolic { .. }, RayData::Parabolic { .. }) => 0..=0,
        _ => 0..=LADDER_LEVELS,
    };
    let (pf, pg) = (period(f), period(g));
    let (f_inv, g_inv) = (f.iso.inverse(), g.iso.inverse());
    for n in 1..=max_n {
        if u64::from(n) % pf != 0 || u64::from(n) % pg != 0 {
            continue;
        }
        let elems = [
            f.iso.pow(i64::from(n)).matrix().clone(),
            f_inv.pow(i64::from(n)).matrix().clone(),
            g.iso.pow(i64::from(n)).matrix().clone(),
            g_inv.pow(i64::from(n)).matrix().clone(),
        ];
        for level in levels.clone() {
            let Some([ap, am]) = side_normals(l, cone, f, &elems[1], g, level) else { continue };
            let Some([bp, bm]) = side_normals(l, cone, g, &elems[3], f, level) else { continue };
            let sets = [ap, am, bp, bm];
            if let Some(cert) = check_configuration(l, r, &elems, &sets) {
                let (inclusions, disjoint) = cert;
                return Some(PingPongCertificate {
                    generators_digest: set.digest().to_string(),
                    basis: None,
                    cone: r.to_vec(),
                    f: CertificateElement {
                        word: f.word.clone(),
                        power: n,
                    },
                    g: CertificateElement {
                        word: g.word.clone(),
                        power: n,
                    },
                    normals: sets,
                    inclusions,
                    disjoint,
                });
            }
        }
    }
    None
}

fn check_configuration(
    l: &Lattice,
    r: &[BigInt],
    elems: &[IntMatrix; 4],
    sets: &[Vec<BigInt>; 4],
) -> Option<(Vec<Inclusion>, Vec<Disjointness>)> {
    if sets.iter().any(|n| !l.norm(n).is_negative()) {
        return None;
    }
    let mut disjoint = Vec::new();
    let mut inclusions = Vec::new();
    // own conditions of each side come first in both tables
    for &(a, b) in &REQUIRED_DISJOINT {
        let mu = disjoint_mu(l, r, &sets[a], &sets[b])?;
        disjoint.push(Disjointness { a, b, mu });
    }
    for &(e, s, t) in &REQUIRED_INCLUSIONS {
        let image = elems[e].mul_vec(&sets[s]);
        let lambda = inclusion_lambda(l, r, &image, &sets[t])?;
        inclusions.push(Inclusion {
            element: e,
            source: s,
            target: t,
            lambda,
        });
    }
    Some((inclusions, disjoint))
}

/// Infinite-order candidates: acting generators, then products of two, then
/// conjugates `a b a^-1`.
pub(crate) fn candidates(set: &GeneratorSet) -> Vec<(Word, Isometry)> {
    const MAX_CANDIDATES: usize = 32;
    let acting = set.acting();
    let mut words: Vec<Word> = acting.iter().map(|(w, _)| w.clone()).collect();
    for (i, (a, _)) in acting.iter().enumerate() {
        for (j, (b, _)) in acting.iter().enumerate() {
            if i != j {
                words.push(a.mul(b));
                words.push(a.mul(&b.inverse()));
            }
        }
    }
    for (i, (a, _)) in acting.iter().enumerate() {
        for (j, (b, _)) in acting.iter().enumerate() {
            if i != j {
                words.push(a.mul(b).mul(&a.inverse()));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for w in words {
        let m = set.eval(&w);
        if !m.is_identity() && seen.insert(m.matrix().clone()) {
            out.push((w, m));
        }
        if out.len() >= MAX_CANDIDATES {
            break;
        }
    }
    out
}

/// First verified certificate in the deterministic pair order.
pub(crate) fn free_search(set: &GeneratorSet, max_n: u32) -> Result<Option<PingPongCertificate>> {
    let Some(cone) = set.cone() else { return Ok(None) };
    let data: Vec<Option<ElementData>> = candidates(set)
        .into_par_iter()
        .map(|(w, m)| element_data(w, m, cone))
        .collect::<Result<Vec<_>>>()?;
    let data: Vec<ElementData> = data.into_iter().flatten().collect();
    let pairs: Vec<(usize, usize)> = (0..data.len())
        .flat_map(|i| (i + 1..data.len()).map(move |j| (i, j)))
        .collect();
    Ok(pairs.par_iter().find_map_first(|&(i, j)| {
        if coincident(cone, &data[i], &data[j]) {
            return None;
        }
        let cert = search_pair(set, cone, &data[i], &data[j], max_n)?;
        super::verify_certificate_detailed(&cert, set).ok()?;
        Some(cert)
    }))
}

/// Ping-pong certificate for the pair of words `f`, `g` in the generators, or
/// `None` when no `N <= max_n` works.
pub fn ping_pong_search(set: &GeneratorSet, f: &Word, g: &Word, max_n: u32) -> Result<Option<PingPongCertificate>> {
    let cone = set
        .cone()
        .ok_or_else(|| Error::precondition("ping-pong needs a hyperbolic lattice with a cone"))?;
    let load = |w: &Word| -> Result<ElementData> {
        element_data(w.clone(), set.eval(w), cone)?
            .ok_or_else(|| Error::precondition(format!("{} has finite order", w.format(set.names()))))
    };
    let fd = load(f)?;
    let gd = load(g)?;
    if coincident(cone, &fd, &gd) {
        return Err(Error::precondition("the two elements share a fixed or eigen ray"));
    }
    Ok(search_pair(set, cone, &fd, &gd, max_n))
}
