//! Ping-pong certificates: text form and the independent verifier.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::pingpong::{verify_disjoint, verify_inclusion, REQUIRED_DISJOINT, REQUIRED_INCLUSIONS};
use super::{GeneratorSet, Word};
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::{Lattice, LatticeKind, Sublattice};
use crate::linalg::IntMatrix;

/// Length of the brute-force no-relation check.
pub const NO_RELATION_LENGTH: usize = 8;

const SET_NAMES: [&str; 4] = ["A+", "A-", "B+", "B-"];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CertificateElement {
    pub word: Word,
    pub power: u32,
}

/// `elements[element]` maps set `source` into set `target`, witnessed by
/// `lambda`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Inclusion {
    pub element: usize,
    pub source: usize,
    pub target: usize,
    pub lambda: BigRational,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Disjointness {
    pub a: usize,
    pub b: usize,
    pub mu: BigRational,
}

/// Table-tennis data for `<f^N, g^N>`.
///
/// Sets and elements are indexed `A+, A-, B+, B-` and `f^N, f^-N, g^N, g^-N`.
/// When `basis` is present the sets live in the invariant sublattice it spans
/// and all vectors are in its coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PingPongCertificate {
    pub generators_digest: String,
    pub basis: Option<Vec<Vec<BigInt>>>,
    pub cone: Vec<BigInt>,
    pub f: CertificateElement,
    pub g: CertificateElement,
    pub normals: [Vec<BigInt>; 4],
    pub inclusions: Vec<Inclusion>,
    pub disjoint: Vec<Disjointness>,
}

fn ints(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn ratio(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl PingPongCertificate {
    /// Moves a certificate found on the restriction to `m` up to the parent
    /// generator set; `words[i]` is the parent word of sub-generator `i`.
    pub fn lift(&self, m: &Sublattice, words: &[Word], parent_digest: &str) -> PingPongCertificate {
        let basis = match &self.basis {
            None => m.columns(),
            Some(cols) => cols.iter().map(|c| m.basis().mul_vec(c)).collect(),
        };
        PingPongCertificate {
            generators_digest: parent_digest.to_string(),
            basis: Some(basis),
            f: CertificateElement {
                word: self.f.word.substitute(words),
                power: self.f.power,
            },
            g: CertificateElement {
                word: self.g.word.substitute(words),
                power: self.g.power,
            },
            ..self.clone()
        }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let mut s = String::from("certificate v1\n");
        let _ = writeln!(s, "generators-digest {}", self.generators_digest);
        if let Some(b) = &self.basis {
            let _ = writeln!(s, "basis {}", b.len());
            for c in b {
                let _ = writeln!(s, "{}", ints(c));
            }
        }
        let _ = writeln!(s, "cone {}", ints(&self.cone));
        for (tag, e) in [("f", &self.f), ("g", &self.g)] {
            let _ = writeln!(s, "element {tag} power {} word {}", e.power, e.word.format(names));
        }
        for (name, n) in SET_NAMES.iter().zip(&self.normals) {
            let _ = writeln!(s, "set {name} {}", ints(n));
        }
        for i in &self.inclusions {
            let _ = writeln!(s, "include {} {} {} {}", i.element, i.source, i.target, ratio(&i.lambda));
        }
        for d in &self.disjoint {
            let _ = writeln!(s, "disjoint {} {} {}", d.a, d.b, ratio(&d.mu));
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str, names: &[String]) -> Result<PingPongCertificate> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let bad = |n: usize, msg: &str| Error::invalid(format!("certificate line {n}: {msg}"));
        let parse_ints = |n: usize, toks: &[&str]| -> Result<Vec<BigInt>> {
            toks.iter()
                .map(|t| t.parse::<BigInt>().map_err(|_| bad(n, &format!("not an integer: {t:?}"))))
                .collect()
        };
        let parse_ratio = |n: usize, t: &str| -> Result<BigRational> {
            let (a, b) = t.split_once('/').unwrap_or((t, "1"));
            let a = a.parse::<BigInt>().map_err(|_| bad(n, "bad rational"))?;
            let b = b.parse::<BigInt>().map_err(|_| bad(n, "bad rational"))?;
            if b.is_zero() {
                return Err(bad(n, "zero denominator"));
            }
            Ok(BigRational::new(a, b))
        };
        let parse_index = |n: usize, t: &str| -> Result<usize> {
            t.parse::<usize>()
                .ok()
                .filter(|&i| i < 4)
                .ok_or_else(|| bad(n, &format!("index out of range: {t:?}")))
        };

        match lines.next() {
            Some((_, "certificate v1")) => {}
            Some((n, _)) => return Err(bad(n, "expected header `certificate v1`")),
            None => return Err(Error::invalid("empty certificate")),
        }
        let mut digest = None;
        let mut basis = None;
        let mut cone = None;
        let mut elems: [Option<CertificateElement>; 2] = [None, None];
        let mut normals: [Option<Vec<BigInt>>; 4] = Default::default();
        let mut inclusions = Vec::new();
        let mut disjoint = Vec::new();
        let mut ended = false;
        while let Some((n, line)) = lines.next() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "generators-digest" if toks.len() == 2 => digest = Some(toks[1].to_string()),
                "basis" if toks.len() == 2 => {
                    let k: usize = toks[1].parse().map_err(|_| bad(n, "bad basis size"))?;
                    let mut cols = Vec::with_capacity(k);
                    for _ in 0..k {
                        let (m, l) = lines.next().ok_or_else(|| bad(n, "truncated basis"))?;
                        cols.push(parse_ints(m, &l.split_whitespace().collect::<Vec<_>>())?);
                    }
                    basis = Some(cols);
                }
                "cone" => cone = Some(parse_ints(n, &toks[1..])?),
                "element" if toks.len() >= 6 && toks[2] == "power" && toks[4] == "word" => {
                    let slot = match toks[1] {
                        "f" => 0,
                        "g" => 1,
                        _ => return Err(bad(n, "element must be f or g")),
                    };
                    let power = toks[3].parse::<u32>().map_err(|_| bad(n, "bad power"))?;
                    let word = Word::parse(&toks[5..], names).map_err(|e| bad(n, &e.to_string()))?;
                    elems[slot] = Some(CertificateElement { word, power });
                }
                "set" if toks.len() >= 2 => {
                    let i = SET_NAMES
                        .iter()
                        .position(|s| *s == toks[1])
                        .ok_or_else(|| bad(n, "unknown set name"))?;
                    normals[i] = Some(parse_ints(n, &toks[2..])?);
                }
                "include" if toks.len() == 5 => inclusions.push(Inclusion {
                    element: parse_index(n, toks[1])?,
                    source: parse_index(n, toks[2])?,
                    target: parse_index(n, toks[3])?,
                    lambda: parse_ratio(n, toks[4])?,
                }),
                "disjoint" if toks.len() == 4 => disjoint.push(Disjointness {
                    a: parse_index(n, toks[1])?,
                    b: parse_index(n, toks[2])?,
                    mu: parse_ratio(n, toks[3])?,
                }),
                "end" if toks.len() == 1 => {
                    ended = true;
                    break;
                }
                _ => return Err(bad(n, &format!("unrecognised line {line:?}"))),
            }
        }
        if !ended {
            return Err(Error::invalid("certificate is missing `end`"));
        }
        let missing = |what: &str| Error::invalid(format!("certificate is missing {what}"));
        let [f, g] = elems;
        let [a, b, c, d] = normals;
        Ok(PingPongCertificate {
            generators_digest: digest.ok_or_else(|| missing("generators-digest"))?,
            basis,
            cone: cone.ok_or_else(|| missing("cone"))?,
            f: f.ok_or_else(|| missing("element f"))?,
            g: g.ok_or_else(|| missing("element g"))?,
            normals: [
                a.ok_or_else(|| missing("set A+"))?,
                b.ok_or_else(|| missing("set A-"))?,
                c.ok_or_else(|| missing("set B+"))?,
                d.ok_or_else(|| missing("set B-"))?,
            ],
            inclusions,
            disjoint,
        })
    }
}

/// Re-checks every ledger entry and the short-word no-relation condition.
pub fn verify_certificate(c: &PingPongCertificate, set: &GeneratorSet) -> bool {
    verify_certificate_detailed(c, set).is_ok()
}

/// Like [`verify_certificate`], reporting the first failing check.
pub fn verify_certificate_detailed(c: &PingPongCertificate, set: &GeneratorSet) -> std::result::Result<(), String> {
    if c.generators_digest != set.digest() {
        return Err("generator digest does not match the input".into());
    }
    for (tag, e) in [("f", &c.f), ("g", &c.g)] {
        if e.power == 0 || e.word.is_identity() {
            return Err(format!("element {tag} is trivial"));
        }
        if e.word.letters().iter().any(|&(i, _)| i >= set.generators().len()) {
            return Err(format!("element {tag} uses an unknown generator"));
        }
    }
    let ambient = set.lattice();
    let f_amb = set.eval(&c.f.word).pow(i64::from(c.f.power));
    let g_amb = set.eval(&c.g.word).pow(i64::from(c.g.power));
    let (lattice, f, g) = match &c.basis {
        None => (ambient.clone(), f_amb.clone(), g_amb.clone()),
        Some(cols) => {
            let m = Sublattice::new(ambient.rank(), cols.clone()).map_err(|e| format!("basis: {e}"))?;
            let fr = f_amb.restrict(&m).map_err(|e| format!("element f on basis: {e}"))?;
            let gr = g_amb.restrict(&m).map_err(|e| format!("element g on basis: {e}"))?;
            (fr.lattice().clone(), fr, gr)
        }
    };
    if lattice.kind() != LatticeKind::Hyperbolic {
        return Err("sets do not live on a hyperbolic lattice".into());
    }
    let k = lattice.rank();
    if c.cone.len() != k || !lattice.norm(&c.cone).is_positive() {
        return Err("cone vector does not have positive square".into());
    }
    let elems: [Isometry; 4] = [f.clone(), f.inverse(), g.clone(), g.inverse()];
    for (i, e) in elems.iter().enumerate() {
        if !lattice.pair(&e.apply(&c.cone), &c.cone).is_positive() {
            return Err(format!("element {i} swaps the cone components"));
        }
    }
    for (name, n) in ["A+", "A-", "B+", "B-"].iter().zip(&c.normals) {
        if n.len() != k || !lattice.norm(n).is_negative() {
            return Err(format!("set {name} normal is not spacelike"));
        }
    }
    check_ledger(c, &lattice, &elems)?;
    no_relation(&f_amb, &g_amb, NO_RELATION_LENGTH)
}

fn check_ledger(c: &PingPongCertificate, lattice: &Lattice, elems: &[Isometry; 4]) -> std::result::Result<(), String> {
    for &(e, s, t) in &REQUIRED_INCLUSIONS {
        let entry = c
            .inclusions
            .iter()
            .find(|i| (i.element, i.source, i.target) == (e, s, t))
            .ok_or_else(|| format!("missing inclusion {e} {s} {t}"))?;
        let image = elems[e].apply(&c.normals[s]);
        if !verify_inclusion(lattice, &c.cone, &image, &c.normals[t], &entry.lambda) {
            return Err(format!("inclusion {e} {s} {t} fails"));
        }
    }
    for &(a, b) in &REQUIRED_DISJOINT {
        let entry = c
            .disjoint
            .iter()
            .find(|d| (d.a, d.b) == (a, b))
            .ok_or_else(|| format!("missing disjointness {a} {b}"))?;
        if !verify_disjoint(lattice, &c.cone, &c.normals[a], &c.normals[b], &entry.mu) {
            return Err(format!("disjointness {a} {b} fails"));
        }
    }
    Ok(())
}

/// No nonempty reduced word of length `<= len` in `f^+-1, g^+-1` is the identity.
pub fn no_relation(f: &Isometry, g: &Isometry, len: usize) -> std::result::Result<(), String> {
    let letters: [IntMatrix; 4] = [
        f.matrix().clone(),
        f.inverse().matrix().clone(),
        g.matrix().clone(),
        g.inverse().matrix().clone(),
    ];
    fn walk(letters: &[IntMatrix; 4], acc: &IntMatrix, last: usize, depth: usize, word: &mut Vec<usize>) -> std::result::Result<(), String> {
        for (i, m) in letters.iter().enumerate() {
            if !word.is_empty() && i == (last ^ 1) {
                continue;
            }
            let next = acc.mul(m);
            word.push(i);
            if next.is_identity() {
                return Err(format!("relation found: word {word:?} is the identity"));
            }
            if depth > 1 {
                walk(letters, &next, i, depth - 1, word)?;
            }
            word.pop();
        }
        Ok(())
    }
    let id = IntMatrix::identity(f.rank());
    walk(&letters, &id, usize::MAX, len, &mut Vec::new())
}
