use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

use wmtc_core::affine::{
    default_alpha_star, enumerate_p_plus_k, make_admissible_level, principal_labels, subregular_labels,
    AdmissibleLevel, AffineWeight,
};
use wmtc_core::fusion::verlinde;
use wmtc_core::liealg::{root_system, RootSystem, Weight};
use wmtc_core::linalg::Q;
use wmtc_core::modular::{
    fkw_principal, kac_peterson, subregular_s_with, Label, Normalization, Probe, Provenance, SMatrix, SubregularOptions,
    UNITARY_TOL,
};
use wmtc_core::qseries::{
    brst_character, irreducible_character, principal_generator_weights, w_vacuum_character, weyl_dimensions,
    weyl_kac_character, AffineWeylElement, QSeries, ReflectionGroup, TwoVarCharacter,
};
use wmtc_ope::{
    brst_nilpotency_abelian, brst_principal, heisenberg, sl2_defining, sugawara, verify_fermion_currents,
    virasoro_test, Algebra, Field, LambdaPoly, Scalar, VirasoroOutcome,
};

use crate::output::{complex_pair, emit, emit_json, ratio_string, sig12, Failure, Header};
use crate::{CharArgs, CharKind, FusionArgs, LevelArgs, OpeArgs, Preset, ProbeArg, RootsArgs, SmatrixArgs, TableFormat, Variant, WeightsArgs};

enum Level {
    Integrable(i64),
    Admissible(i64, i64),
}

fn level(args: &LevelArgs) -> Result<Level> {
    match (args.level, args.p, args.q) {
        (Some(k), None, None) => Ok(Level::Integrable(k)),
        (None, Some(p), Some(q)) => Ok(Level::Admissible(p, q)),
        _ => Err(Failure::validation("give either --level or both --p and --q").into()),
    }
}

fn admissible<'a>(rs: &'a RootSystem, args: &LevelArgs) -> Result<AdmissibleLevel<'a>> {
    match level(args)? {
        Level::Admissible(p, q) => Ok(make_admissible_level(rs, p, q)?),
        Level::Integrable(_) => Err(Failure::validation("this variant needs --p and --q").into()),
    }
}

/// `auto` or a 1-based node index.
fn alpha_star(rs: &RootSystem, arg: &str) -> Result<usize> {
    if arg == "auto" {
        return Ok(default_alpha_star(rs)?);
    }
    let i: usize = arg.parse().map_err(|_| Failure::validation(format!("--alpha-star must be `auto` or a node index, got {arg}")))?;
    if i == 0 || i > rs.rank() {
        bail!(Failure::validation(format!("--alpha-star {i} is outside 1..={}", rs.rank())));
    }
    Ok(i - 1)
}

fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => Q::new(a.trim().parse()?, b.trim().parse()?),
        None => Q::from_integer(s.parse()?),
    };
    Ok(v)
}

fn parse_list(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|x| parse_q(x).map_err(|_| Failure::validation(format!("not a rational list: {s}")).into()))
        .collect()
}

fn config(args: &impl serde::Serialize) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

pub fn roots(args: &RootsArgs) -> Result<()> {
    let rs = root_system(&args.cartan)?;
    let ct = rs.cartan_type();
    let body = json!({
        "header": Header::new("roots", config(args)),
        "type": ct.to_string(),
        "rank": rs.rank(),
        "dimension": rs.dimension(),
        "cartan_matrix": rs.cartan_matrix(),
        "positive_roots": rs.positive_roots().iter().map(|r| r.root_coords.clone()).collect::<Vec<_>>(),
        "highest_root": rs.highest_root().root_coords,
        "marks": rs.marks(),
        "comarks": rs.comarks(),
        "dual_coxeter": rs.dual_coxeter(),
        "exponents": rs.exponents(),
        "weyl_order": ct.weyl_order() as u64,
    });
    emit_json(args.out.as_deref(), &body)
}

pub fn weights(args: &WeightsArgs) -> Result<()> {
    let rs = root_system(&args.cartan)?;
    let mut body = json!({ "header": Header::new("weights", config(args)), "type": rs.cartan_type().to_string() });
    let labels: Vec<Value> = match args.variant {
        Variant::Integrable => {
            let Level::Integrable(k) = level(&args.level)? else {
                bail!(Failure::validation("the integrable variant needs --level"));
            };
            body["level"] = json!(k);
            enumerate_p_plus_k(&rs, k).iter().map(|w| json!({ "lambda": w.to_ints() })).collect()
        }
        Variant::Principal => {
            let lv = admissible(&rs, &args.level)?;
            body["p"] = json!(lv.p());
            body["q"] = json!(lv.q());
            principal_labels(&lv).into_iter().map(|l| json!({ "nu": l.nu, "eta": l.eta, "wall": null })).collect()
        }
        Variant::Subregular => {
            let lv = admissible(&rs, &args.level)?;
            let star = alpha_star(&rs, &args.alpha_star)?;
            body["p"] = json!(lv.p());
            body["q"] = json!(lv.q());
            body["alpha_star"] = json!(star + 1);
            subregular_labels(&lv, star)?
                .into_iter()
                .map(|l| json!({ "nu": l.nu, "eta": l.eta, "wall": l.wall }))
                .collect()
        }
    };
    body["count"] = json!(labels.len());
    body["labels"] = Value::Array(labels);
    emit_json(args.out.as_deref(), &body)
}

fn series_json(f: &QSeries) -> Value {
    let den = f.den();
    let coeffs: Vec<Value> = f.terms().map(|(e, c)| json!([format!("{e}/{den}"), ratio_string(c)])).collect();
    json!({ "exponent_den": den, "prec": format!("{}/{den}", f.prec()), "coeffs": coeffs })
}

fn two_var_json(ch: &TwoVarCharacter) -> Value {
    let den = ch.den();
    let terms: Vec<Value> = ch
        .terms()
        .map(|(mu, f)| {
            let f = f.with_den(den);
            let coeffs: Vec<Value> = f.terms().map(|(e, c)| json!([format!("{e}/{den}"), ratio_string(c)])).collect();
            let weight: Vec<String> = mu.coords().iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
            json!({ "weight": weight, "coeffs": coeffs })
        })
        .collect();
    json!({ "exponent_den": den, "prec": format!("{}/{den}", ch.prec()), "terms": terms })
}

fn specialized_json(ch: &TwoVarCharacter, x: &[Q]) -> Result<Value> {
    let den = ch.den();
    let powers: Vec<Value> = ch
        .specialize(x)?
        .iter()
        .map(|(y, f)| {
            let f = f.with_den(den);
            let coeffs: Vec<Value> = f.terms().map(|(e, c)| json!([format!("{e}/{den}"), ratio_string(c)])).collect();
            json!({ "y": format!("{}/{}", y.numer(), y.denom()), "coeffs": coeffs })
        })
        .collect();
    Ok(json!({ "exponent_den": den, "prec": format!("{}/{den}", ch.prec()), "y_powers": powers }))
}

fn affine_character(rs: &RootSystem, args: &CharArgs) -> Result<TwoVarCharacter> {
    let n = rs.rank();
    match level(&args.level)? {
        Level::Integrable(k) => {
            let lambda = match &args.weight {
                Some(w) => Weight(parse_list(w)?),
                None => Weight::zero(n),
            };
            Ok(weyl_kac_character(rs, k, &lambda, args.order)?)
        }
        Level::Admissible(p, q) => {
            if args.weight.is_some() {
                bail!(Failure::validation("--weight is only supported at integrable level"));
            }
            let lv = make_admissible_level(rs, p, q)?;
            let vacuum = AffineWeight::new(Weight::zero(n), lv.k(), Q::from_integer(0));
            // integral coroots of k Lambda_0 + rho-hat are alpha + n q delta
            let group = ReflectionGroup::Conjugated { conj: AffineWeylElement::identity(n), scale: q };
            Ok(irreducible_character(rs, &vacuum, &group, args.order, None)?)
        }
    }
}

pub fn character(args: &CharArgs) -> Result<()> {
    if args.order < 0 {
        bail!(Failure::validation("--order must be nonnegative"));
    }
    let rs = root_system(&args.cartan)?;
    let header = Header::new("char", config(args));
    let (mut body, note) = match args.kind {
        CharKind::WVacuum => {
            if args.two_var || args.y_spec.is_some() {
                bail!(Failure::validation("the W vacuum character is a one-variable series"));
            }
            let d = principal_generator_weights(&rs);
            let mut v = series_json(&w_vacuum_character(&d, args.order)?);
            v["generator_weights"] = json!(d);
            (v, "prod_i prod_{n >= d_i} (1 - q^n)^{-1}")
        }
        CharKind::Brst => {
            let b = brst_character(args.order)?;
            let mut v = match (&args.y_spec, args.two_var) {
                (Some(x), _) => specialized_json(&b.two_var, &parse_list(x)?)?,
                (None, true) => two_var_json(&b.two_var),
                (None, false) => series_json(&b.y1),
            };
            v["matches_closed_form"] = json!(b.matches_closed_form);
            (v, "chi_V * chi_F of the principal sl2 BRST complex")
        }
        CharKind::Affine => {
            let ch = affine_character(&rs, args)?;
            match (&args.y_spec, args.two_var) {
                (Some(x), _) => (specialized_json(&ch, &parse_list(x)?)?, "numerator over prod_{alpha>0} (1 - e^{-alpha})"),
                (None, true) => (two_var_json(&ch), "numerator over prod_{alpha>0} (1 - e^{-alpha})"),
                (None, false) => (series_json(&weyl_dimensions(&rs, &ch)?), "y = 1 specialization"),
            }
        }
    };
    body["header"] = serde_json::to_value(header)?;
    body["form"] = json!(note);
    emit_json(args.out.as_deref(), &body)
}

fn smatrix_json(s: &SMatrix, header: Header, variant: Variant) -> Value {
    json!({
        "header": header,
        "variant": variant,
        "type": s.provenance.cartan_type,
        "labels": s.labels,
        "matrix": s.entries.iter().map(|r| r.iter().map(|z| complex_pair(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "normalization": s.normalization,
        "unitarity_residual": sig12(s.unitarity_residual()),
        "symmetry_residual": sig12(s.symmetry_residual()),
        "provenance": s.provenance,
    })
}

pub fn smatrix(args: &SmatrixArgs, _threads: usize) -> Result<()> {
    let rs = root_system(&args.cartan)?;
    let s = match args.variant {
        Variant::Integrable => match level(&args.level)? {
            Level::Integrable(k) => kac_peterson(&rs, k)?,
            Level::Admissible(..) => bail!(Failure::validation("the integrable variant needs --level")),
        },
        Variant::Principal => fkw_principal(&admissible(&rs, &args.level)?)?,
        Variant::Subregular => {
            let lv = admissible(&rs, &args.level)?;
            let star = alpha_star(&rs, &args.alpha_star)?;
            let probe = match args.probe {
                ProbeArg::Default => Probe::Default,
                ProbeArg::Alt => Probe::Alternate,
            };
            let opts = SubregularOptions {
                probe,
                checkpoint: args.checkpoint.as_deref(),
                batch: args.checkpoint_interval.max(1),
                ..Default::default()
            };
            subregular_s_with(&lv, star, &opts, |done, total| eprintln!("kernel chunks {done}/{total}"))?
        }
    };
    let body = smatrix_json(&s, Header::new("smatrix", config(args)), args.variant);
    emit_json(args.out.as_deref(), &body)?;
    let residual = s.unitarity_residual();
    if residual > UNITARY_TOL {
        bail!(Failure::tolerance(format!("unitarity residual {residual:e} exceeds {UNITARY_TOL:e}")));
    }
    Ok(())
}

/// Reads an S-matrix artifact back; subregular labels are restored from the variant tag.
pub fn read_smatrix(path: &Path) -> Result<SMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| Failure::validation(format!("{}: missing or malformed `{what}`", path.display()));
    let matrix: Vec<Vec<[f64; 2]>> = serde_json::from_value(v["matrix"].clone()).map_err(|_| bad("matrix"))?;
    let mut labels: Vec<Label> = serde_json::from_value(v["labels"].clone()).map_err(|_| bad("labels"))?;
    if labels.len() != matrix.len() || matrix.iter().any(|r| r.len() != labels.len()) {
        bail!(bad("matrix"));
    }
    if v["variant"] == "subregular" {
        for l in &mut labels {
            if let Label::Principal { nu, eta, wall } = l.clone() {
                *l = Label::Subregular { nu, eta, wall };
            }
        }
    }
    Ok(SMatrix {
        labels,
        entries: matrix.iter().map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()).collect(),
        normalization: Normalization::Unitary,
        provenance: Provenance {
            constructor: "file".into(),
            cartan_type: v["type"].as_str().unwrap_or_default().into(),
            params: vec![("path".into(), path.display().to_string())],
            notes: vec![],
        },
    })
}

pub fn fusion(args: &FusionArgs) -> Result<()> {
    let s = read_smatrix(&args.from)?;
    let residual = s.unitarity_residual();
    if residual > UNITARY_TOL {
        bail!(Failure::tolerance(format!("input S-matrix is not unitary: residual {residual:e}")));
    }
    let f = verlinde(&s)?;
    f.check_axioms().map_err(|e| Failure::tolerance(format!("fusion axioms fail: {e}")))?;
    let format = args.format.unwrap_or(match args.out.as_ref().and_then(|p| p.extension()) {
        Some(e) if e == "csv" => TableFormat::Csv,
        _ => TableFormat::Json,
    });
    match format {
        TableFormat::Csv => emit(args.out.as_deref(), f.to_csv().trim_end()),
        TableFormat::Json => {
            let l = f.len();
            let mut rows = Vec::new();
            for a in 0..l {
                for b in 0..l {
                    for c in 0..l {
                        let n = f.n(a, b, c);
                        if n != 0 {
                            rows.push(json!([a, b, c, n]));
                        }
                    }
                }
            }
            let body = json!({
                "header": Header::new("fusion", config(args)),
                "labels": f.labels,
                "vacuum": f.vacuum,
                "quantum_dimensions": f.quantum_dimensions.iter().map(|x| sig12(*x)).collect::<Vec<_>>(),
                "frobenius_perron_dimensions": f.frobenius_perron_dimensions().iter().map(|x| sig12(*x)).collect::<Vec<_>>(),
                "max_coefficient": f.max_coefficient,
                "rounding_residual": sig12(f.rounding_residual),
                "coefficients": rows,
            });
            emit_json(args.out.as_deref(), &body)
        }
    }
}

fn parse_scalar(v: &str) -> Scalar {
    match v.split_once('/') {
        Some((a, b)) => match (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
            (Ok(a), Ok(b)) if b != 0 => Scalar::ratio(a, b),
            _ => Scalar::param(v),
        },
        None => v.trim().parse::<i64>().map(Scalar::int).unwrap_or_else(|_| Scalar::param(v.trim())),
    }
}

fn param(args: &OpeArgs, name: &str) -> Result<Option<Scalar>> {
    for p in &args.params {
        let Some((n, v)) = p.split_once('=') else {
            bail!(Failure::validation(format!("--param expects name=value, got {p}")));
        };
        if n.trim() == name {
            return Ok(Some(parse_scalar(v)));
        }
    }
    Ok(None)
}

struct BracketOut {
    lhs: String,
    rhs: String,
    value: LambdaPoly,
}

fn bracket_entry(alg: &Algebra, b: &BracketOut) -> Value {
    json!({
        "lhs": b.lhs,
        "rhs": b.rhs,
        "text": format!("[{}_λ {}] = {}", b.lhs, b.rhs, alg.fmt_lambda(&b.value)),
        "ast": alg.lambda_json(&b.value),
    })
}

fn virasoro_json(alg: &Algebra, l: &Field) -> Result<Value> {
    Ok(match virasoro_test(alg, l)? {
        VirasoroOutcome::Virasoro { central_charge } => json!(central_charge.to_string()),
        VirasoroOutcome::Mismatch { .. } => Value::Null,
    })
}

pub fn ope(args: &OpeArgs) -> Result<()> {
    let k = param(args, "k")?.unwrap_or_else(|| Scalar::param("k"));
    let mut extra = serde_json::Map::new();
    let (alg, brackets, fields) = match args.preset {
        Preset::Heisenberg => {
            let alg = heisenberg();
            let h = alg.gen("h")?;
            let mut l = alg.nop(&h, &h)?.scale(&Scalar::ratio(1, 2));
            if let Some(beta) = param(args, "beta")? {
                l = &l + &alg.derivative(&h)?.scale(&beta);
            }
            let out = vec![
                BracketOut { lhs: "h".into(), rhs: "h".into(), value: alg.bracket(&h, &h)? },
                BracketOut { lhs: "L".into(), rhs: "h".into(), value: alg.bracket(&l, &h)? },
                BracketOut { lhs: "L".into(), rhs: "L".into(), value: alg.bracket(&l, &l)? },
            ];
            extra.insert("central_charge".into(), virasoro_json(&alg, &l)?);
            let fields = vec![("L".to_string(), l)];
            (alg, out, fields)
        }
        Preset::Sugawara => {
            let rs = root_system(&args.cartan)?;
            let (pre, l) = sugawara(&rs, &k)?;
            let alg = pre.algebra;
            let out = vec![BracketOut { lhs: "L".into(), rhs: "L".into(), value: alg.bracket(&l, &l)? }];
            extra.insert("central_charge".into(), virasoro_json(&alg, &l)?);
            (alg, out, vec![("L".to_string(), l)])
        }
        Preset::FermionCurrent => {
            let names = ["e", "h", "f"];
            let (alg, checks) = verify_fermion_currents(&sl2_defining())?;
            let out: Vec<BracketOut> = checks
                .iter()
                .map(|c| BracketOut { lhs: format!("F^{}", names[c.a]), rhs: format!("F^{}", names[c.b]), value: c.bracket.clone() })
                .collect();
            extra.insert("currents_close".into(), json!(checks.iter().all(|c| c.holds)));
            (alg, out, vec![])
        }
        Preset::BrstSl2 => {
            let rs = root_system(&args.cartan)?;
            let (alg, q) = brst_principal(&rs, &k)?;
            let report = brst_nilpotency_abelian(&alg, &q)?;
            extra.insert("nilpotent".into(), json!(report.nilpotent));
            let out = vec![BracketOut { lhs: "Q".into(), rhs: "Q".into(), value: report.bracket }];
            (alg, out, vec![("Q".to_string(), q)])
        }
    };
    let text: Vec<String> = fields
        .iter()
        .map(|(n, f)| format!("{n} = {}", alg.fmt_field(f)))
        .chain(brackets.iter().map(|b| format!("[{}_λ {}] = {}", b.lhs, b.rhs, alg.fmt_lambda(&b.value))))
        .collect();
    let mut body = json!({
        "header": Header::new("ope", config(args)),
        "preset": args.preset,
        "jacobi_verified": alg.jacobi_verified(),
        "fields": fields.iter().map(|(n, f)| json!({ "name": n, "text": alg.fmt_field(f), "ast": alg.field_json(f) })).collect::<Vec<_>>(),
        "brackets": brackets.iter().map(|b| bracket_entry(&alg, b)).collect::<Vec<_>>(),
    });
    for (key, v) in extra {
        body[key] = v;
    }
    match &args.out {
        Some(p) => {
            emit_json(Some(p), &body)?;
            crate::output::print_stdout(&text.join("\n"))
        }
        None => emit_json(None, &body),
    }
}
