use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};

use salemlat_core::error::Error as CoreError;
use salemlat_core::groupdyn::verify_certificate_detailed;
use salemlat_core::isometry::{classify_with_precision, default_salem_precision};
use salemlat_core::lattice::Sublattice;
use salemlat_core::{
    analyze, char_poly, cyclotomic_poly, is_salem, order, preserves_cone, salem_number_interval,
    strip_cyclotomic, AlmostAbelianEvidence, Budget, ConeReference, GeneratorSet, IntPolynomial,
    Isometry, LatticeKind, PingPongCertificate, SpectralClass, Verdict,
};

use crate::input::{content_digest, parse_input, InputDocument};
use crate::report::Report;
use crate::CliError;

/// A report with its process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    /// Certificate text to be written to `--cert-out`, if any.
    pub certificate: Option<(PathBuf, String)>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            exit_code: 0,
            certificate: None,
        }
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn tuple(v: &[BigInt]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

const INTERVAL_DIGITS: usize = 7;

fn parse_coeffs(args: &[String]) -> Result<IntPolynomial, CliError> {
    if args.is_empty() {
        return Err(CliError::Usage("expected a coefficient list, constant term first".into()));
    }
    let c: Vec<BigInt> = args
        .iter()
        .map(|a| {
            a.parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("malformed coefficient {a:?}")))
        })
        .collect::<Result<_, _>>()?;
    let p = IntPolynomial::new(c);
    if p.is_zero() {
        return Err(CliError::Usage("the zero polynomial has no roots to classify".into()));
    }
    Ok(p)
}

pub fn poly_salem(args: &[String]) -> Result<Outcome, CliError> {
    let p = parse_coeffs(args)?;
    let mut r = Report::new("poly salem");
    r.push("polynomial", p.to_coeff_string()).push("display", p.to_string());
    let salem = is_salem(&p);
    r.push("salem", salem);
    let interval = if salem {
        let iv = salem_number_interval(&p, &default_salem_precision())?;
        Value::String(iv.to_decimal_string(INTERVAL_DIGITS))
    } else {
        Value::Null
    };
    r.push("salem_number", interval);
    Ok(Outcome::ok(r))
}

pub fn poly_strip(args: &[String]) -> Result<Outcome, CliError> {
    let p = parse_coeffs(args)?;
    let (rest, m) = strip_cyclotomic(&p)?;
    let mut r = Report::new("poly strip");
    r.push("polynomial", p.to_coeff_string())
        .push("remainder", rest.to_coeff_string())
        .push("factors", m.to_string())
        .push("remainder_is_salem", is_salem(&rest));
    Ok(Outcome::ok(r))
}

pub fn poly_cyclo(n: u64) -> Result<Outcome, CliError> {
    let p = cyclotomic_poly(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut r = Report::new("poly cyclo");
    r.push("n", n)
        .push("coefficients", p.to_coeff_string())
        .push("display", p.to_string());
    Ok(Outcome::ok(r))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(InputDocument, String), CliError> {
    let bytes = read(path)?;
    let doc = parse_input(&bytes).map_err(|e| CliError::Parse(path.display().to_string(), e))?;
    Ok((doc, content_digest(&bytes)))
}

fn cone_for(doc: &InputDocument) -> Result<Option<ConeReference>, CliError> {
    if doc.lattice.kind() != LatticeKind::Hyperbolic {
        return Ok(None);
    }
    Ok(Some(match doc.cone_reference()? {
        Some(c) => c,
        None => ConeReference::default_for(&doc.lattice)?,
    }))
}

pub fn lattice_info(file: &Path) -> Result<Outcome, CliError> {
    let (doc, digest) = load(file)?;
    let l = &doc.lattice;
    let mut r = Report::new("lattice-info");
    let cone = cone_for(&doc)?;
    r.push("input_digest", digest)
        .push("rank", l.rank())
        .push("signature", l.signature().to_string())
        .push("kind", l.kind().to_string())
        .push("cone", cone.as_ref().map_or(Value::Null, |c| ints(c.vector())))
        .push(
            "cone_source",
            match (&cone, &doc.cone) {
                (None, _) => "none",
                (Some(_), Some(_)) => "input",
                (Some(_), None) => "default",
            },
        )
        .push("generators", doc.generators.len());
    Ok(Outcome::ok(r))
}

fn class_summary(class: &SpectralClass) -> String {
    match class {
        SpectralClass::Elliptic { order } => format!("Elliptic, order {order}"),
        SpectralClass::Parabolic { fixed_ray } => format!("Parabolic, fixed ray {}", tuple(fixed_ray)),
        SpectralClass::SalemType { salem_factor, .. } => format!("SalemType, factor {salem_factor}"),
    }
}

fn class_fields(item: &mut serde_json::Map<String, Value>, class: &SpectralClass) {
    item.insert("class".into(), class.tag().into());
    item.insert("summary".into(), class_summary(class).into());
    match class {
        SpectralClass::Elliptic { order } => {
            item.insert("order".into(), (*order).into());
        }
        SpectralClass::Parabolic { fixed_ray } => {
            item.insert("fixed_ray".into(), tuple(fixed_ray).into());
        }
        SpectralClass::SalemType {
            salem_factor,
            salem_number,
            ..
        } => {
            item.insert("salem_factor".into(), salem_factor.to_coeff_string().into());
            item.insert("salem_factor_display".into(), salem_factor.to_string().into());
            item.insert(
                "salem_number".into(),
                salem_number.to_decimal_string(INTERVAL_DIGITS).into(),
            );
        }
    }
}

fn classify_one(name: &str, g: &Isometry, cone: Option<&ConeReference>) -> Result<Value, CliError> {
    let p = char_poly(g);
    let (_, cyclo) = strip_cyclotomic(&p)?;
    let mut item = serde_json::Map::new();
    item.insert("name".into(), name.into());
    item.insert("char_poly".into(), p.to_coeff_string().into());
    item.insert("char_poly_display".into(), p.to_string().into());
    item.insert("cyclotomic_part".into(), cyclo.to_string().into());
    match cone {
        Some(c) => {
            let swaps = !preserves_cone(g, c);
            item.insert("cone_swapping".into(), swaps.into());
            let target = if swaps { g.pow(2) } else { g.clone() };
            if swaps {
                item.insert("classified".into(), format!("{name}^2").into());
            }
            let class = classify_with_precision(&target, c, &default_salem_precision())?;
            class_fields(&mut item, &class);
        }
        None => match order(g) {
            Ok(n) => class_fields(&mut item, &SpectralClass::Elliptic { order: n }),
            Err(CoreError::Precondition(_)) => {
                return Err(CliError::Usage(format!(
                    "{name} has infinite order; its spectral class needs a hyperbolic lattice"
                )))
            }
            Err(e) => return Err(e.into()),
        },
    }
    Ok(Value::Object(item))
}

pub fn classify(file: &Path, gen: Option<&str>) -> Result<Outcome, CliError> {
    let (doc, digest) = load(file)?;
    let cone = cone_for(&doc)?;
    let selected: Vec<&(String, salemlat_core::IntMatrix)> = match gen {
        Some(n) => vec![doc
            .generators
            .iter()
            .find(|(name, _)| name == n)
            .ok_or_else(|| CliError::Usage(format!("no generator named {n:?}")))?],
        None => doc.generators.iter().collect(),
    };
    if selected.is_empty() {
        return Err(CliError::Usage("the input has no generators".into()));
    }
    let mut items = Vec::new();
    for (name, m) in selected {
        let g = Isometry::new(&doc.lattice, m.clone()).map_err(|e| CliError::from_isometry(name, e))?;
        items.push(classify_one(name, &g, cone.as_ref())?);
    }
    let mut r = Report::new("classify");
    r.push("input_digest", digest)
        .push("cone", cone.as_ref().map_or(Value::Null, |c| ints(c.vector())))
        .push("results", Value::Array(items));
    Ok(Outcome::ok(r))
}

fn sublattice_json(m: &Sublattice) -> Value {
    Value::Array(m.columns().iter().map(|c| ints(c)).collect())
}

fn evidence_json(e: &AlmostAbelianEvidence, names: &[String]) -> Value {
    match e {
        AlmostAbelianEvidence::CommonIsotropicRay { ray, dependency } => json!({
            "type": e.tag(),
            "ray": tuple(ray),
            "dependency": dependency,
        }),
        AlmostAbelianEvidence::MinimalFullLattice {
            salem_generator,
            power_expressions,
            commutators,
        } => json!({
            "type": e.tag(),
            "salem_generator": salem_generator,
            "power_expressions": power_expressions
                .iter()
                .map(|(n, c)| json!({
                    "element": n,
                    "coefficients": c.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
            "commutators": commutators
                .iter()
                .map(|(a, b, ok)| json!({"a": a, "b": b, "commute": ok}))
                .collect::<Vec<_>>(),
        }),
        AlmostAbelianEvidence::InvariantSplit {
            sublattice,
            complement,
            sub_verdicts,
            defect,
        } => json!({
            "type": e.tag(),
            "sublattice": sublattice_json(sublattice),
            "complement": sublattice_json(complement),
            "sublattice_verdict": verdict_json(&sub_verdicts.0, names),
            "complement_verdict": verdict_json(&sub_verdicts.1, names),
            "sum_corank": defect.0,
            "sum_index": defect.1.as_ref().map(ToString::to_string),
        }),
    }
}

fn verdict_json(v: &Verdict, names: &[String]) -> Value {
    match v {
        Verdict::Free { certificate } => json!({
            "tag": v.tag(),
            "f": certificate.f.word.format(names),
            "g": certificate.g.word.format(names),
            "power": certificate.f.power,
            "restricted": certificate.basis.is_some(),
        }),
        Verdict::Finite {
            order,
            element_list_hash,
        } => json!({
            "tag": v.tag(),
            "order": order,
            "element_list_hash": element_list_hash,
        }),
        Verdict::AlmostAbelian { evidence, rank_bound } => json!({
            "tag": v.tag(),
            "rank_bound": rank_bound,
            "evidence": evidence_json(evidence, names),
        }),
        Verdict::Inconclusive { reason } => json!({
            "tag": v.tag(),
            "reason": reason,
        }),
    }
}

pub struct AnalyzeArgs<'a> {
    pub file: &'a Path,
    pub max_power: u32,
    pub bfs_cap: usize,
    pub depth: Option<usize>,
    pub cert_out: Option<&'a Path>,
}

fn generator_set(doc: &InputDocument) -> Result<GeneratorSet, CliError> {
    for (name, m) in &doc.generators {
        Isometry::new(&doc.lattice, m.clone()).map_err(|e| CliError::from_isometry(name, e))?;
    }
    Ok(doc.generator_set()?)
}

pub fn analyze_file(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let (doc, digest) = load(args.file)?;
    if doc.generators.is_empty() {
        return Err(CliError::Usage("analyze needs at least one generator".into()));
    }
    let set = generator_set(&doc)?;
    let budget = Budget {
        max_power: args.max_power,
        bfs_cap: args.bfs_cap,
        depth: args.depth.unwrap_or(doc.lattice.rank()),
    };
    let verdict = analyze(&set, &budget);
    let mut r = Report::new("analyze");
    r.push("input_digest", digest)
        .push("generators_digest", set.digest())
        .push("generators", doc.generators.len())
        .push(
            "budget",
            json!({"max_power": budget.max_power, "bfs_cap": budget.bfs_cap, "depth": budget.depth}),
        )
        .push("schreier_substitution", set.substituted());
    r.push("verdict", verdict.to_string())
        .push("verdict_detail", verdict_json(&verdict, set.names()));
    let mut certificate = None;
    match (&verdict, args.cert_out) {
        (Verdict::Free { certificate: c }, Some(path)) => {
            r.push("certificate", path.display().to_string());
            certificate = Some((path.to_path_buf(), c.to_text(set.names())));
        }
        _ => {
            r.push("certificate", Value::Null);
        }
    }
    Ok(Outcome {
        report: r,
        exit_code: if verdict.is_certified() { 0 } else { 4 },
        certificate,
    })
}

pub fn verify(input: &Path, cert: &Path) -> Result<Outcome, CliError> {
    let (doc, digest) = load(input)?;
    let set = generator_set(&doc)?;
    let text = read(cert)?;
    let text = String::from_utf8(text).map_err(|_| CliError::Usage("certificate is not UTF-8".into()))?;
    let mut r = Report::new("verify");
    r.push("input_digest", digest)
        .push("certificate_digest", content_digest(text.as_bytes()));
    let outcome = PingPongCertificate::parse(&text, set.names())
        .map_err(|e| e.to_string())
        .and_then(|c| verify_certificate_detailed(&c, &set));
    let exit_code = match &outcome {
        Ok(()) => {
            r.push("valid", true).push("failure", Value::Null);
            0
        }
        Err(why) => {
            r.push("valid", false).push("failure", why.clone());
            5
        }
    };
    Ok(Outcome {
        report: r,
        exit_code,
        certificate: None,
    })
}
