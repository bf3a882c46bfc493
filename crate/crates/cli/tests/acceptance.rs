//! One line per acceptance criterion; exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use common::{random_case, random_model_isometry, random_primitive, random_scrambled, reflections, rng, unit};
use salemlat_core::corpus::cases;
use salemlat_core::groupdyn::{no_relation, NO_RELATION_LENGTH};
use salemlat_core::isometry::reconstruct;
use salemlat_core::lattice::{radical_in, sum_corank_and_index, Sublattice};
use salemlat_core::polyarith::euler_phi;
use salemlat_core::{
    analyze, char_poly, cyclotomic_poly, express_in_powers, is_reciprocal, is_salem, lattice_kind,
    orth_complement, poly_gcd, saturation, strip_cyclotomic, sturm_count, unit_circle_root_count,
    verify_certificate, Budget, IntMatrix, IntPolynomial, Isometry, LatticeKind, PowerExpansion,
    RealInterval, Verdict,
};

type Check = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// cone-preserving isometries: every Φ_g is reciprocal, cyclotomic times at most one Salem factor
fn spectral_suite() -> Check {
    const N: usize = 500;
    let results: Vec<Result<bool, String>> = (0..N as u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = rng(1_000 + seed);
            let (s, g) = random_case(&mut rng);
            let p = char_poly(&g);
            if !is_reciprocal(&p) {
                return Err(format!("seed {seed}: {p} is not reciprocal"));
            }
            let (rest, _) = strip_cyclotomic(&p).map_err(|e| e.to_string())?;
            if !(rest.is_one() || is_salem(&rest)) {
                return Err(format!("seed {seed} rank {}: remainder {rest} is not Salem", s.lattice.rank()));
            }
            Ok(!rest.is_one())
        })
        .collect();
    let mut salem = 0;
    for r in results {
        salem += usize::from(r?);
    }
    Ok(format!("{N} isometries over ranks 2..8, {salem} with a Salem factor"))
}

enum Oracle {
    Decided(bool),
    Ambiguous,
}

const ROOT_OF_UNITY_ORDERS: [u32; 13] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 18];

/// Companion-matrix eigenvalues with safety margins; `Ambiguous` inside the band.
fn float_oracle(c: &[i64]) -> Oracle {
    let d = c.len() - 1;
    if d < 2 || c[0] == 0 {
        return Oracle::Decided(false);
    }
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(c[i] as f64);
    }
    // the unguarded QR iteration can stall on companion matrices
    let Some(schur) = m.try_schur(f64::EPSILON, 1_000) else {
        return Oracle::Ambiguous;
    };
    let roots: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    for i in 0..d {
        for j in i + 1..d {
            if (roots[i] - roots[j]).norm() < 1e-4 {
                return Oracle::Ambiguous;
            }
        }
    }
    const TIGHT: f64 = 1e-9;
    const LOOSE: f64 = 1e-6;
    let mut outside = Vec::new();
    let mut inside = Vec::new();
    for z in &roots {
        let gap = z.norm() - 1.0;
        if gap.abs() > LOOSE {
            if gap > 0.0 {
                outside.push(*z);
            } else {
                inside.push(*z);
            }
        } else if gap.abs() > TIGHT {
            return Oracle::Ambiguous;
        } else {
            let turns = z.arg() / std::f64::consts::TAU;
            for n in ROOT_OF_UNITY_ORDERS {
                let x = turns * f64::from(n);
                let off = (x - x.round()).abs();
                if off < 1e-8 {
                    return Oracle::Decided(false);
                }
                if off < 1e-4 {
                    return Oracle::Ambiguous;
                }
            }
        }
    }
    if outside.len() != 1 || inside.len() != 1 {
        return Oracle::Decided(false);
    }
    let (a, b) = (outside[0], inside[0]);
    if a.im.abs() > LOOSE || b.im.abs() > LOOSE || a.re < 1.0 || b.re < 0.0 {
        return Oracle::Ambiguous;
    }
    if (a.re * b.re - 1.0).abs() > LOOSE {
        return Oracle::Decided(false);
    }
    Oracle::Decided(true)
}

/// Exact resolution from primitive counts, independent of the decision pipeline.
fn sturm_resolution(p: &IntPolynomial) -> bool {
    let d = p.deg();
    if d < 2 || p.reverse() != *p {
        return false;
    }
    if !poly_gcd(p, &p.derivative()).unwrap().is_constant() {
        return false;
    }
    for n in (1..=200u64).filter(|&n| euler_phi(n) as usize <= d) {
        if p.checked_div(&cyclotomic_poly(n).unwrap()).is_some() {
            return false;
        }
    }
    sturm_count(p, &RealInterval::above(1)).unwrap() == 1
        && sturm_count(p, &RealInterval::open(0, 1)).unwrap() == 1
        && unit_circle_root_count(p).unwrap() == d - 2
}

fn salem_oracle() -> Check {
    let mut all: Vec<Vec<i64>> = Vec::new();
    for d in 1..=6u32 {
        for idx in 0..7i64.pow(d) {
            let mut c: Vec<i64> = (0..d).map(|k| (idx / 7i64.pow(k)) % 7 - 3).collect();
            c.push(1);
            all.push(c);
        }
    }
    let outcome: Vec<(bool, bool, bool, bool)> = all
        .par_iter()
        .map(|c| {
            let p = IntPolynomial::from_i64(c);
            let exact = is_salem(&p);
            let reciprocal = is_reciprocal(&p);
            match float_oracle(c) {
                Oracle::Decided(f) => (f == exact, false, exact, reciprocal),
                Oracle::Ambiguous => (sturm_resolution(&p) == exact, true, exact, reciprocal),
            }
        })
        .collect();
    let disagree: Vec<&Vec<i64>> = all.iter().zip(&outcome).filter(|(_, o)| !o.0).map(|(c, _)| c).collect();
    let ambiguous = outcome.iter().filter(|o| o.1).count();
    let salem = outcome.iter().filter(|o| o.2).count();
    let reciprocal = outcome.iter().filter(|o| o.3).count();
    ensure(disagree.is_empty(), || {
        format!("{} disagreements, first {:?}", disagree.len(), disagree.first())
    })?;
    Ok(format!(
        "{} monic polynomials ({reciprocal} reciprocal), {salem} Salem, {ambiguous} resolved exactly, 0 disagreements",
        all.len()
    ))
}

fn kronecker() -> Check {
    let mut rng = rng(2_000);
    let orders: Vec<u64> = (1..=60).filter(|&n| euler_phi(n) <= 20).collect();
    for case in 0..200 {
        let mut chosen = Vec::new();
        let mut degree = 0;
        for _ in 0..rng.random_range(1..=6) {
            let n = orders[rng.random_range(0..orders.len())];
            if degree + euler_phi(n) <= 20 {
                degree += euler_phi(n);
                chosen.push(n);
            }
        }
        let p = chosen
            .iter()
            .fold(IntPolynomial::one(), |acc, &n| &acc * &cyclotomic_poly(n).unwrap());
        let (rest, m) = strip_cyclotomic(&p).map_err(|e| e.to_string())?;
        ensure(rest.is_one() && m.product() == p, || format!("case {case}: {chosen:?} left {rest}"))?;
    }
    Ok("200 cyclotomic products of degree <= 20 strip to 1".into())
}

fn index_facts() -> Check {
    let mut rng = rng(3_000);
    let mut done = 0;
    let mut parabolic = 0;
    while done < 100 {
        let r = rng.random_range(2..=6);
        let k = rng.random_range(1..=r);
        let s = random_scrambled(&mut rng, r);
        let l = &s.lattice;
        let m = if rng.random_bool(0.3) {
            // isotropic line plus vectors orthogonal to it
            let e = s.p_inv.mul_vec(&unit(r, 0));
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
                Err(_) => continue,
            }
        } else {
            match random_primitive(&mut rng, r, k, 3) {
                Some(m) => m,
                None => continue,
            }
        };
        let kind = lattice_kind(&l.restrict(&m).unwrap());
        let perp = orth_complement(l, &m).unwrap();
        let rad = radical_in(l, &m).unwrap();
        let (corank, index) = sum_corank_and_index(l, &m, &perp).unwrap();
        let ok = match kind {
            LatticeKind::Hyperbolic | LatticeKind::Elliptic => {
                rad.rank() == 0 && corank == 0 && index.as_ref().is_some_and(Signed::is_positive)
            }
            LatticeKind::Parabolic => {
                parabolic += 1;
                rad.rank() == 1 && l.norm(&rad.columns()[0]).is_zero() && corank == 1
            }
            LatticeKind::Other => false,
        };
        ensure(ok, || format!("rank {r}, sublattice {m}: {kind} with radical {} corank {corank}", rad.rank()))?;
        done += 1;
    }
    Ok(format!("100 primitive sublattices, {parabolic} parabolic"))
}

fn corpus_case(name: &str) -> salemlat_core::corpus::CorpusCase {
    cases().into_iter().find(|c| c.name == name).expect("corpus case")
}

fn free_end_to_end() -> Check {
    let case = corpus_case("sanov");
    let set = case.generator_set().map_err(|e| e.to_string())?;
    let Verdict::Free { certificate } = analyze(&set, &Budget::for_rank(3)) else {
        return Err("Sanov pair is not Free".into());
    };
    ensure(verify_certificate(&certificate, &set), || "certificate rejected".into())?;
    let f = set.eval(&certificate.f.word).pow(certificate.f.power.into());
    let g = set.eval(&certificate.g.word).pow(certificate.g.power.into());
    no_relation(&f, &g, NO_RELATION_LENGTH)?;
    let words: u64 = (1..=NO_RELATION_LENGTH as u32).map(|k| 4 * 3u64.pow(k - 1)).sum();
    Ok(format!(
        "N = {}, certificate verified, {words} reduced words up to length {NO_RELATION_LENGTH} ({} of full length) are nontrivial",
        certificate.f.power,
        4 * 3u64.pow(NO_RELATION_LENGTH as u32 - 1)
    ))
}

fn brute_order(gens: &[Isometry]) -> usize {
    let id = Isometry::identity(gens[0].lattice());
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.matrix().clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.matrix().clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

fn finite_verdicts() -> Check {
    let mut found = Vec::new();
    for (name, expected) in [("dihedral_u", Some(4)), ("coxeter_a2", None)] {
        let case = corpus_case(name);
        let set = case.generator_set().map_err(|e| e.to_string())?;
        let brute = brute_order(set.generators());
        let want = expected.unwrap_or(brute);
        ensure(brute == want, || format!("{name}: closure has {brute} elements"))?;
        match analyze(&set, &Budget::for_rank(case.lattice.rank())) {
            Verdict::Finite { order, .. } if order == want => found.push(format!("{name} order {order}")),
            v => return Err(format!("{name}: {v}")),
        }
    }
    Ok(found.join(", "))
}

fn reconstruction() -> Check {
    let mut rng = rng(4_000);
    let mut done = 0;
    let mut tried = 0;
    while done < 50 {
        tried += 1;
        let s = random_scrambled(&mut rng, 4);
        let g0 = s.transport(&random_model_isometry(&mut rng, &s.model, 6));
        if !is_salem(&char_poly(&g0)) {
            continue;
        }
        let k = rng.random_range(-5i64..=5);
        let g = g0.pow(k);
        let PowerExpansion::Coefficients(c) = express_in_powers(&g, &g0).map_err(|e| e.to_string())? else {
            return Err(format!("g0^{k} reported outside the centralizer"));
        };
        ensure(reconstruct(&c, &g0) == g.matrix().to_rational(), || format!("g0^{k} reconstructs wrongly"))?;
        done += 1;
    }
    Ok(format!("50 full-degree Salem g0 on rank 4 ({tried} draws), |k| <= 5, exact"))
}

fn corpus_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.txt"))
}

fn cli_pass(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let mut out = Vec::new();
    for case in cases() {
        let file = corpus_file(case.name);
        let cert = dir.join(format!("{}.cert", case.name));
        for format in ["text", "json"] {
            for cmd in [&["lattice-info"][..], &["classify"][..], &["analyze", "--cert-out"][..]] {
                let mut c = Command::new(env!("CARGO_BIN_EXE_salemlat"));
                c.args(["--format", format, cmd[0]]).arg(&file);
                if cmd.len() > 1 {
                    c.arg(cmd[1]).arg(&cert);
                }
                let o = c.output().map_err(|e| e.to_string())?;
                out.push(o.status.code().unwrap_or(-1).to_string().into_bytes());
                out.push(o.stdout);
            }
        }
        if cert.exists() {
            out.push(std::fs::read(&cert).map_err(|e| e.to_string())?);
            std::fs::remove_file(&cert).map_err(|e| e.to_string())?;
        }
    }
    Ok(out)
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("salemlat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let runs: Vec<Vec<Vec<u8>>> = (0..3).map(|_| cli_pass(&dir)).collect::<Result<_, _>>()?;
    let _ = std::fs::remove_dir_all(&dir);
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    ensure(same, || "reports differ between runs".into())?;
    Ok(format!("3 runs, {} outputs each, byte-identical", runs[0].len()))
}

fn equivariance() -> Check {
    let mut rng = rng(5_000);
    let mut count = 0;
    for case in cases() {
        let set = case.generator_set().map_err(|e| e.to_string())?;
        let budget = Budget::for_rank(case.lattice.rank());
        let base = analyze(&set, &budget);
        let pool = reflections(&case.lattice);
        let conjugators: Vec<Isometry> = (0..20)
            .map(|_| common::random_isometry(&mut rng, &case.lattice, &pool, 3))
            .collect();
        let verdicts: Vec<Verdict> = conjugators
            .par_iter()
            .map(|h| analyze(&set.conjugated(h).expect("conjugate"), &budget))
            .collect();
        for v in verdicts {
            let same_order = match (&base, &v) {
                (Verdict::Finite { order: a, .. }, Verdict::Finite { order: b, .. }) => a == b,
                _ => true,
            };
            ensure(v.tag() == base.tag() && same_order, || format!("{}: {base} became {v}", case.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} conjugated corpus sets keep their verdicts"))
}

fn main() {
    let criteria = [
        Criterion { name: "spectral factorization suite", limit: Some(Duration::from_secs(30)), run: spectral_suite },
        Criterion { name: "Salem test oracle equivalence", limit: Some(Duration::from_secs(120)), run: salem_oracle },
        Criterion { name: "Kronecker property", limit: Some(Duration::from_secs(5)), run: kronecker },
        Criterion { name: "index and corank facts", limit: Some(Duration::from_secs(10)), run: index_facts },
        Criterion { name: "Free verdict end to end", limit: Some(Duration::from_secs(5)), run: free_end_to_end },
        Criterion { name: "Finite verdicts", limit: Some(Duration::from_secs(1)), run: finite_verdicts },
        Criterion { name: "power reconstruction", limit: Some(Duration::from_secs(10)), run: reconstruction },
        Criterion { name: "CLI determinism", limit: None, run: determinism },
        Criterion { name: "conjugation equivariance", limit: None, run: equivariance },
    ];
    // optional substring filters, as with the default harness
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<&Criterion> = criteria
        .iter()
        .filter(|c| filters.is_empty() || filters.iter().any(|f| c.name.contains(f.as_str())))
        .collect();
    let mut failed = 0;
    for c in &selected {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(msg), Some(limit)) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(msg) => println!("PASS  {}: {msg} [{took:.2?}]", c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {}: {msg} [{took:.2?}]", c.name);
            }
        }
    }
    println!("{} of {} criteria passed", selected.len() - failed, selected.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
