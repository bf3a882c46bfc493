//! Finitely generated subgroups of `O(L)`.
//!
//! [`analyze`] runs a fixed cascade: Burnside closure for finite-order
//! generators, ping-pong search for a free pair, a common fixed isotropic ray,
//! reduction to an invariant sublattice, and finally the minimal full lattice
//! case where every generator is a polynomial in one Salem-type element.

mod certificate;
mod pingpong;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::isometry::{
    char_poly, classify, eval_at_matrix, express_in_powers, order, preserves_cone, Isometry,
    PowerExpansion,
};
use crate::lattice::{
    orient, orth_complement, positive_vector, radical_in, sum_corank_and_index, ConeReference, Lattice,
    LatticeKind, Sublattice,
};
use crate::linalg::{primitive, IntMatrix};
use crate::polyarith::{cyclotomic_poly, is_salem, strip_cyclotomic};

pub use certificate::{
    no_relation, verify_certificate, verify_certificate_detailed, CertificateElement, Disjointness,
    Inclusion,
    PingPongCertificate, NO_RELATION_LENGTH,
};
pub use pingpong::ping_pong_search;

/// Reduced word in the named generators, `(index, exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(letters.len());
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == g => {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word::new(vec![(i, 1)])
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Word::new(l)
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Replaces generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        self.letters.iter().fold(Word::identity(), |acc, &(g, e)| {
            let base = if e < 0 { images[g].inverse() } else { images[g].clone() };
            (0..e.unsigned_abs()).fold(acc, |a, _| a.mul(&base))
        })
    }

    pub fn eval(&self, gens: &[Isometry], lattice: &Lattice) -> Isometry {
        self.letters
            .iter()
            .fold(Isometry::identity(lattice), |acc, &(g, e)| acc.compose(&gens[g].pow(e)))
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    names[g].clone()
                } else {
                    format!("{}^{e}", names[g])
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(tokens: &[&str], names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in tokens {
            if *tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::invalid(format!("bad exponent in {tok:?}")))?,
                ),
                None => (*tok, 1),
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::invalid(format!("unknown generator {name:?}")))?;
            letters.push((idx, exp));
        }
        Ok(Word::new(letters))
    }
}

/// Named generators of a subgroup of `O(L)`.
///
/// On a hyperbolic lattice every generator that swaps the two cone components
/// is replaced, together with the others, by Schreier generators of the
/// cone-preserving subgroup of index at most 2.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    lattice: Lattice,
    cone: Option<ConeReference>,
    names: Vec<String>,
    originals: Vec<Isometry>,
    acting: Vec<(Word, Isometry)>,
    substituted: bool,
    digest: String,
}

fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl GeneratorSet {
    /// On hyperbolic lattices the cone is defaulted when absent; elsewhere it is ignored.
    pub fn new(
        lattice: &Lattice,
        cone: Option<ConeReference>,
        generators: Vec<(String, IntMatrix)>,
    ) -> Result<Self> {
        let mut names = Vec::new();
        let mut originals = Vec::new();
        for (name, m) in generators {
            if !valid_name(&name) {
                return Err(Error::invalid(format!("invalid generator name {name:?}")));
            }
            if names.contains(&name) {
                return Err(Error::invalid(format!("duplicate generator name {name:?}")));
            }
            originals.push(Isometry::new(lattice, m)?);
            names.push(name);
        }
        let cone = if lattice.kind() == LatticeKind::Hyperbolic {
            Some(match cone {
                Some(c) => {
                    if c.lattice() != lattice {
                        return Err(Error::invalid("cone reference belongs to a different lattice"));
                    }
                    c
                }
                None => ConeReference::default_for(lattice)?,
            })
        } else {
            None
        };
        let (acting, substituted) = match &cone {
            Some(c) => schreier_generators(&originals, c),
            None => (
                originals
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (Word::generator(i), g.clone()))
                    .collect(),
                false,
            ),
        };
        let digest = digest_of(lattice, cone.as_ref(), &names, &originals);
        Ok(GeneratorSet {
            lattice: lattice.clone(),
            cone,
            names,
            originals,
            acting,
            substituted,
            digest,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cone(&self) -> Option<&ConeReference> {
        self.cone.as_ref()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.originals
    }

    /// Cone-preserving generators with their words in the originals.
    pub fn acting(&self) -> &[(Word, Isometry)] {
        &self.acting
    }

    /// True when cone-swapping generators forced the index-2 substitution.
    pub fn substituted(&self) -> bool {
        self.substituted
    }

    /// sha256 of the canonical lattice, cone and generator text.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn eval(&self, w: &Word) -> Isometry {
        w.eval(&self.originals, &self.lattice)
    }

    /// Conjugate every generator by `h`.
    pub fn conjugated(&self, h: &Isometry) -> Result<GeneratorSet> {
        let gens = self
            .names
            .iter()
            .zip(&self.originals)
            .map(|(n, g)| (n.clone(), g.conjugate_by(h).matrix().clone()))
            .collect();
        GeneratorSet::new(&self.lattice, self.cone.clone(), gens)
    }
}

fn schreier_generators(originals: &[Isometry], cone: &ConeReference) -> (Vec<(Word, Isometry)>, bool) {
    let swap = originals.iter().position(|g| !preserves_cone(g, cone));
    let Some(s) = swap else {
        return (
            originals
                .iter()
                .enumerate()
                .map(|(i, g)| (Word::generator(i), g.clone()))
                .collect(),
            false,
        );
    };
    let sw = Word::generator(s);
    let mut out: Vec<(Word, Isometry)> = Vec::new();
    let mut seen = HashSet::new();
    for (i, g) in originals.iter().enumerate() {
        let x = Word::generator(i);
        let words = if preserves_cone(g, cone) {
            [x.clone(), sw.mul(&x).mul(&sw.inverse())]
        } else {
            [x.mul(&sw.inverse()), sw.mul(&x)]
        };
        for w in words {
            let m = w.eval(originals, cone.lattice());
            if m.is_identity() || !seen.insert(m.matrix().clone()) {
                continue;
            }
            out.push((w, m));
        }
    }
    (out, true)
}

fn matrix_text(m: &IntMatrix) -> String {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn digest_of(l: &Lattice, cone: Option<&ConeReference>, names: &[String], gens: &[Isometry]) -> String {
    let mut text = format!("lattice {}\n{}\n", l.rank(), matrix_text(l.gram()));
    if let Some(c) = cone {
        let v: Vec<String> = c.vector().iter().map(ToString::to_string).collect();
        text.push_str(&format!("cone {}\n", v.join(" ")));
    }
    for (n, g) in names.iter().zip(gens) {
        text.push_str(&format!("gen {n}\n{}\n", matrix_text(g.matrix())));
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Budget {
    pub max_power: u32,
    pub bfs_cap: usize,
    pub depth: usize,
}

impl Budget {
    pub fn for_rank(rank: usize) -> Self {
        Budget {
            max_power: 16,
            bfs_cap: 100_000,
            depth: rank,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BurnsideOutcome {
    Finite { order: usize, element_list_hash: String },
    ExceededCap,
}

/// Breadth-first closure of the original generators.
pub fn burnside_check(set: &GeneratorSet, cap: usize) -> BurnsideOutcome {
    if set.originals.iter().any(|g| order(g).is_err()) {
        return BurnsideOutcome::ExceededCap;
    }
    let gens: Vec<&IntMatrix> = set.originals.iter().map(Isometry::matrix).collect();
    let id = IntMatrix::identity(set.lattice.rank());
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.mul(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return BurnsideOutcome::ExceededCap;
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let closed = seen.iter().all(|x| {
        gens.iter().all(|g| seen.contains(&g.mul(x)))
            && x.inverse_unimodular().is_some_and(|inv| seen.contains(&inv))
    });
    if !closed {
        return BurnsideOutcome::ExceededCap;
    }
    let mut elems: Vec<&IntMatrix> = seen.iter().collect();
    elems.sort();
    let mut hasher = Sha256::new();
    for e in &elems {
        hasher.update(matrix_text(e).as_bytes());
        hasher.update(b"\n\n");
    }
    BurnsideOutcome::Finite {
        order: elems.len(),
        element_list_hash: hex::encode(hasher.finalize()),
    }
}

/// Primitive isotropic vector fixed by every acting generator, oriented
/// towards the cone.
pub fn common_fixed_ray(set: &GeneratorSet) -> Option<Vec<BigInt>> {
    let cone = set.cone.as_ref()?;
    let r = set.lattice.rank();
    let id = IntMatrix::identity(r);
    let stacked = set
        .acting
        .iter()
        .fold(IntMatrix::zeros(0, r), |acc, (_, g)| acc.vstack(&g.matrix().sub(&id)));
    let k = stacked.integer_kernel();
    if k.is_empty() {
        return None;
    }
    let fixed = Sublattice::new(r, k).ok()?;
    let rad = radical_in(&set.lattice, &fixed).ok()?;
    if rad.rank() == 1 {
        return Some(orient(cone, &rad.columns()[0]));
    }
    isotropic_search(&set.lattice, &fixed).map(|v| orient(cone, &v))
}

/// First nonzero isotropic combination with coefficients in `-3..=3`.
fn isotropic_search(l: &Lattice, m: &Sublattice) -> Option<Vec<BigInt>> {
    const DIGITS: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];
    let k = m.rank();
    if k > 8 {
        return None;
    }
    let basis = m.basis();
    let total = 7usize.pow(k as u32);
    (1..total).find_map(|mut code| {
        let mut c = vec![BigInt::from(0); k];
        for x in c.iter_mut().rev() {
            *x = BigInt::from(DIGITS[code % 7]);
            code /= 7;
        }
        let v = basis.mul_vec(&c);
        (l.norm(&v) == BigInt::from(0)).then(|| primitive(&v))
    })
}

/// Saturated `Q`-span of arbitrary columns in `Z^r`.
fn saturated_span(r: usize, cols: &[Vec<BigInt>]) -> Result<Sublattice> {
    if cols.is_empty() {
        return Sublattice::new(r, Vec::new());
    }
    let c = IntMatrix::from_columns(r, cols);
    let ann = c.transpose().integer_kernel();
    let a = if ann.is_empty() {
        IntMatrix::zeros(0, r)
    } else {
        IntMatrix::from_rows(ann)
    };
    Sublattice::new(r, a.integer_kernel())
}

fn intersect(r: usize, a: &Sublattice, b: &Sublattice) -> Result<Sublattice> {
    let ann = |m: &Sublattice| m.basis().transpose().integer_kernel();
    let rows: Vec<Vec<BigInt>> = ann(a).into_iter().chain(ann(b)).collect();
    let k = if rows.is_empty() {
        IntMatrix::identity(r).columns()
    } else {
        IntMatrix::from_rows(rows).integer_kernel()
    };
    Sublattice::new(r, k)
}

/// Smallest saturated sublattice containing `m` and stable under the acting
/// generators.
fn close_under(set: &GeneratorSet, m: &Sublattice) -> Result<Sublattice> {
    let r = set.lattice.rank();
    let mut cur = m.clone();
    loop {
        let mut cols = cur.columns();
        for (_, g) in &set.acting {
            for c in cur.columns() {
                cols.push(g.apply(&c));
            }
        }
        let next = saturated_span(r, &cols)?;
        if next.rank() == cur.rank() {
            return Ok(next);
        }
        cur = next;
    }
}

fn factor_kernels(set: &GeneratorSet) -> Vec<Sublattice> {
    let r = set.lattice.rank();
    let mut out = Vec::new();
    for (_, g) in &set.acting {
        let phi = char_poly(g);
        let Ok((rest, cyc)) = strip_cyclotomic(&phi) else { continue };
        let mut factors: Vec<_> = cyc.entries().keys().filter_map(|&n| cyclotomic_poly(n).ok()).collect();
        if !rest.is_one() {
            factors.push(rest);
        }
        for f in factors {
            let k = eval_at_matrix(&f, g.matrix()).integer_kernel();
            if let Ok(s) = Sublattice::new(r, k) {
                if s.is_proper() && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Proper invariant primitive sublattice from rational eigenspaces of the
/// generators, or `None` when the search finds nothing.
pub fn invariant_sublattice(set: &GeneratorSet) -> Option<Sublattice> {
    invariant_candidates(set).into_iter().next()
}

fn invariant_candidates(set: &GeneratorSet) -> Vec<Sublattice> {
    let r = set.lattice.rank();
    let base = factor_kernels(set);
    let mut cands = base.clone();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            if let Ok(s) = intersect(r, &base[i], &base[j]) {
                if s.is_proper() && !cands.contains(&s) {
                    cands.push(s);
                }
            }
        }
    }
    cands.sort_by_key(Sublattice::rank);
    let mut out: Vec<Sublattice> = Vec::new();
    for c in cands {
        if let Ok(closed) = close_under(set, &c) {
            if closed.is_proper() && !out.contains(&closed) {
                out.push(closed);
            }
        }
    }
    out
}

/// Evidence for an almost abelian verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlmostAbelianEvidence {
    /// Every generator fixes `ray`. Relies on the external fact that such a
    /// group is almost abelian of finite rank.
    CommonIsotropicRay { ray: Vec<BigInt>, dependency: String },
    MinimalFullLattice {
        salem_generator: String,
        power_expressions: Vec<(String, Vec<BigRational>)>,
        commutators: Vec<(String, String, bool)>,
    },
    InvariantSplit {
        sublattice: Sublattice,
        complement: Sublattice,
        sub_verdicts: Box<(Verdict, Verdict)>,
        /// Corank of `M + M^perp` and its index when the corank is 0.
        defect: (usize, Option<BigInt>),
    },
}

impl AlmostAbelianEvidence {
    pub fn tag(&self) -> &'static str {
        match self {
            AlmostAbelianEvidence::CommonIsotropicRay { .. } => "CommonIsotropicRay",
            AlmostAbelianEvidence::MinimalFullLattice { .. } => "MinimalFullLattice",
            AlmostAbelianEvidence::InvariantSplit { .. } => "InvariantSplit",
        }
    }
}

pub const FIXED_RAY_DEPENDENCY: &str =
    "external result: a group of isometries fixing an isotropic ray of a hyperbolic lattice is almost abelian of finite rank";

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Free { certificate: PingPongCertificate },
    Finite { order: usize, element_list_hash: String },
    AlmostAbelian { evidence: AlmostAbelianEvidence, rank_bound: usize },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Free { .. } => "Free",
            Verdict::Finite { .. } => "Finite",
            Verdict::AlmostAbelian { .. } => "AlmostAbelian",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Inconclusive { .. })
    }

    fn rank_bound(&self) -> usize {
        match self {
            Verdict::AlmostAbelian { rank_bound, .. } => *rank_bound,
            _ => 0,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Free { certificate } => {
                write!(f, "Free (ping-pong at N = {})", certificate.f.power)
            }
            Verdict::Finite { order, .. } => write!(f, "Finite, order {order}"),
            Verdict::AlmostAbelian { evidence, rank_bound } => {
                write!(f, "AlmostAbelian ({}), rank bound {rank_bound}", evidence.tag())
            }
            Verdict::Inconclusive { reason } => write!(f, "Inconclusive: {reason}"),
        }
    }
}

/// Lemma-style check for the case `M = L`: one acting generator with a Salem
/// characteristic polynomial of full degree, all generators commuting and each
/// a rational polynomial in it.
pub fn minimal_full_analysis(set: &GeneratorSet) -> Option<AlmostAbelianEvidence> {
    let r = set.lattice.rank();
    let labels = acting_labels(set);
    let (idx, g0) = set.acting.iter().enumerate().find_map(|(i, (_, g))| {
        let phi = char_poly(g);
        (phi.deg() == r && is_salem(&phi)).then_some((i, g))
    })?;
    let mut commutators = Vec::new();
    for i in 0..set.acting.len() {
        for j in i + 1..set.acting.len() {
            let ok = set.acting[i].1.commutes_with(&set.acting[j].1);
            commutators.push((labels[i].clone(), labels[j].clone(), ok));
            if !ok {
                return None;
            }
        }
    }
    let mut power_expressions = Vec::new();
    for (i, (_, g)) in set.acting.iter().enumerate() {
        match express_in_powers(g, g0).ok()? {
            PowerExpansion::Coefficients(c) => power_expressions.push((labels[i].clone(), c)),
            PowerExpansion::NotInCentralizer => return None,
        }
    }
    Some(AlmostAbelianEvidence::MinimalFullLattice {
        salem_generator: labels[idx].clone(),
        power_expressions,
        commutators,
    })
}

fn acting_labels(set: &GeneratorSet) -> Vec<String> {
    set.acting.iter().map(|(w, _)| w.format(&set.names)).collect()
}

/// Tits-alternative verdict for the group generated by `set`.
pub fn analyze(set: &GeneratorSet, budget: &Budget) -> Verdict {
    analyze_at_depth(set, budget, budget.depth)
}

fn inconclusive(reason: impl Into<String>) -> Verdict {
    Verdict::Inconclusive { reason: reason.into() }
}

fn analyze_at_depth(set: &GeneratorSet, budget: &Budget, depth: usize) -> Verdict {
    let all_finite = set.originals.iter().all(|g| order(g).is_ok());
    let mut reason = String::from("no stage produced a certified verdict");
    if all_finite {
        if let BurnsideOutcome::Finite { order, element_list_hash } = burnside_check(set, budget.bfs_cap) {
            return Verdict::Finite { order, element_list_hash };
        }
        reason = format!("finite-order generators but closure exceeded cap {}", budget.bfs_cap);
    }
    let Some(cone) = set.cone.as_ref() else {
        return inconclusive(format!("lattice is {}; {reason}", set.lattice.kind()));
    };
    for (w, g) in &set.acting {
        if let Err(e) = classify(g, cone) {
            return inconclusive(format!("classification of {} failed: {e}", w.format(&set.names)));
        }
    }

    match pingpong::free_search(set, budget.max_power) {
        Ok(Some(certificate)) => return Verdict::Free { certificate },
        Ok(None) => reason = format!("no ping-pong certificate up to N = {}", budget.max_power),
        Err(e) => return inconclusive(format!("ping-pong search failed: {e}")),
    }

    if let Some(ray) = common_fixed_ray(set) {
        return Verdict::AlmostAbelian {
            evidence: AlmostAbelianEvidence::CommonIsotropicRay {
                ray,
                dependency: FIXED_RAY_DEPENDENCY.to_string(),
            },
            rank_bound: set.lattice.rank().saturating_sub(2),
        };
    }

    if let Some(m) = invariant_sublattice(set) {
        if depth == 0 {
            reason = "invariant sublattice found but recursion depth exhausted".to_string();
        } else {
            match split(set, cone, &m, budget, depth) {
                Ok(v) if v.is_certified() => return v,
                Ok(Verdict::Inconclusive { reason: r }) => reason = format!("invariant split: {r}"),
                Ok(_) => unreachable!(),
                Err(e) => reason = format!("invariant split failed: {e}"),
            }
        }
    }

    if let Some(evidence) = minimal_full_analysis(set) {
        return Verdict::AlmostAbelian {
            evidence,
            rank_bound: set.lattice.rank() - 1,
        };
    }
    inconclusive(reason)
}

/// The acting generators restricted to an invariant sublattice, as a new
/// generator set whose generator `i` is the parent's acting word `i`.
fn restricted_set(set: &GeneratorSet, m: &Sublattice, cone: Option<ConeReference>) -> Result<(GeneratorSet, Vec<Word>)> {
    let sub = set.lattice.restrict(m)?;
    let mut gens = Vec::new();
    let mut words = Vec::new();
    for (i, (w, g)) in set.acting.iter().enumerate() {
        gens.push((format!("h{i}"), g.restrict(m)?.matrix().clone()));
        words.push(w.clone());
    }
    Ok((GeneratorSet::new(&sub, cone, gens)?, words))
}

/// Cone reference on a hyperbolic sublattice lying in the ambient cone.
fn sub_cone(l: &Lattice, cone: &ConeReference, m: &Sublattice) -> Result<ConeReference> {
    let sub = l.restrict(m)?;
    let c = match ConeReference::default_for(&sub) {
        Ok(c) => c,
        Err(_) => {
            let v = positive_vector(&sub).ok_or_else(|| Error::internal("hyperbolic sublattice without a positive vector"))?;
            ConeReference::new(&sub, v)?
        }
    };
    let ambient = m.basis().mul_vec(c.vector());
    if l.pair(&ambient, cone.vector()) < BigInt::from(0) {
        Ok(c.negated())
    } else {
        Ok(c)
    }
}

fn split(set: &GeneratorSet, cone: &ConeReference, m: &Sublattice, budget: &Budget, depth: usize) -> Result<Verdict> {
    let l = &set.lattice;
    let perp = orth_complement(l, m)?;
    let kind = l.restrict(m)?.kind();
    if kind == LatticeKind::Parabolic {
        let rad = radical_in(l, m)?;
        let u = orient(cone, &rad.columns()[0]);
        if set.acting.iter().all(|(_, g)| g.apply(&u) == u) {
            return Ok(Verdict::AlmostAbelian {
                evidence: AlmostAbelianEvidence::CommonIsotropicRay {
                    ray: u,
                    dependency: FIXED_RAY_DEPENDENCY.to_string(),
                },
                rank_bound: l.rank().saturating_sub(2),
            });
        }
        return Ok(inconclusive("parabolic invariant sublattice whose radical is not fixed"));
    }
    let defect = sum_corank_and_index(l, m, &perp)?;
    let mut verdicts = Vec::new();
    for part in [m, &perp] {
        let part_kind = l.restrict(part)?.kind();
        let part_cone = match part_kind {
            LatticeKind::Hyperbolic => Some(sub_cone(l, cone, part)?),
            _ => None,
        };
        let (sub, words) = restricted_set(set, part, part_cone)?;
        let v = analyze_at_depth(&sub, budget, depth - 1);
        if let Verdict::Free { certificate } = &v {
            let lifted = certificate.lift(part, &words, set.digest());
            return Ok(match verify_certificate_detailed(&lifted, set) {
                Ok(()) => Verdict::Free { certificate: lifted },
                Err(e) => inconclusive(format!("restricted free pair does not lift: {e}")),
            });
        }
        verdicts.push(v);
    }
    let (a, b) = (verdicts.remove(0), verdicts.remove(0));
    for v in [&a, &b] {
        if let Verdict::Inconclusive { reason } = v {
            return Ok(inconclusive(reason.clone()));
        }
    }
    let rank_bound = a.rank_bound() + b.rank_bound();
    Ok(Verdict::AlmostAbelian {
        evidence: AlmostAbelianEvidence::InvariantSplit {
            sublattice: m.clone(),
            complement: perp,
            sub_verdicts: Box::new((a, b)),
            defect,
        },
        rank_bound,
    })
}
