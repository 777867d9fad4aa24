use cycdex_core::certify::{
    agree_at_random_points, build_generator_set, certify_in_cone, certify_poly2, conjecture_search, poly1_target,
    poly2_target, validate_certificate, Certificate, CertificateJson, CertificateRef, DecodedCertificate, GenKind,
    GeneratorSet, SearchOutcome, Validation,
};
use cycdex_core::conv::{corollary_convexity_check, multi_expand_a, verify_dmdn_identity, ConvFamily, CorollaryStatus};
use cycdex_core::distexamples::{
    geometric_report, geometric_weights, logseries_report, random_logshape, two_geometric_report, Boundary,
    LogSeriesStatus, Shape,
};
use cycdex_core::hiprec::SignConfidence;
use cycdex_core::ineqcheck::{logconcavity_report, theorem1_verdict, SignReport, Theorem1Status, Verdict};
use cycdex_core::probseq::{is_infinitely_divisible, panjer, recover_r, CPModel};
use cycdex_core::rational::{self, format_list};
use cycdex_core::seqcore::{expand_a, TruncationOrder, WeightSeq};
use cycdex_core::sympoly::{
    verify_hansen_identities, verify_prop2, verify_prop22, verify_prop4, verify_theorem1_proof_identity,
    IdentityCheck, MultiPoly,
};
use cycdex_core::BigRational;
use serde_json::{json, Value};

use crate::config::{
    BoundaryArg, CertifyCmd, CheckCmd, Command, ExamplesCmd, Settings, ShapeArg, Suite, TargetArg, VerifyCmd,
    MAX_SYMBOLIC_ENV,
};
use crate::report::{Check, Report, Table};
use crate::Failure;

type Res = Result<Report, Failure>;

pub fn dispatch(cmd: &Command, s: &Settings) -> Res {
    match cmd {
        Command::Expand { c } => expand(c, s),
        Command::Panjer { lambda, f } => panjer_cmd(lambda, f, s),
        Command::RecoverR { p } => recover(p),
        Command::Check(c) => check(c, s),
        Command::Verify(VerifyCmd::Identities { suite, max_m }) => identities(*suite, *max_m, s),
        Command::Certify(c) => certify(c, s),
        Command::Examples(e) => examples(e, s),
        Command::Convolve { families } => convolve(families, s),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn order(k: usize) -> Result<TruncationOrder, Failure> {
    Ok(TruncationOrder::new(k)?)
}

/// Parses weights; a list shorter than `k` is extended by repeating its last
/// entry, so `1,1,1` with `--K 10` means `c_j = 1` throughout.
fn weights(text: &str, k: Option<usize>) -> Result<WeightSeq, Failure> {
    let mut c = rational::parse_list(text)?;
    let last = c.last().cloned().ok_or_else(|| Failure::invalid("empty weight list"))?;
    if let Some(k) = k {
        c.resize(c.len().max(k), last);
    }
    Ok(WeightSeq::new(c)?)
}

fn families(text: &str, k: Option<usize>) -> Result<Vec<WeightSeq>, Failure> {
    text.split(';').map(|f| weights(f, k)).collect()
}

fn fmt(r: &BigRational) -> String {
    rational::format(r)
}

fn sign_str(r: &BigRational) -> String {
    match rational::sign(r) {
        1 => "+".into(),
        -1 => "-".into(),
        _ => "0".into(),
    }
}

fn expand(c: &str, s: &Settings) -> Res {
    let c = weights(c, s.k)?;
    let k = order(s.order_or(c.len()))?;
    let e = expand_a(&c, k);
    let mut t = Table::new(&["k", "a_k", "b_k"]);
    for (i, (a, b)) in e.a.iter().zip(&e.b).enumerate() {
        t.push(vec![i.to_string(), fmt(a), fmt(b)]);
    }
    Ok(Report::new("expand", json!({"K": k.get(), "c": c, "expansion": e}), vec![]).with_table(t))
}

fn panjer_cmd(lambda: &str, f: &str, s: &Settings) -> Res {
    let model = CPModel::new(rational::parse(lambda)?, rational::parse_list(f)?)?;
    let k = order(s.order_or(20))?;
    let pmf = panjer(&model, k);
    let mut t = Table::new(&["n", "Q_n"]);
    for (i, q) in pmf.q().iter().enumerate() {
        t.push(vec![i.to_string(), fmt(q)]);
    }
    let data = json!({"K": k.get(), "model": model, "pmf": pmf.to_report(s.digits)});
    Ok(Report::new("panjer", data, vec![]).with_table(t))
}

fn recover(p: &str) -> Res {
    let p = rational::parse_list(p)?;
    let r = recover_r(&p)?;
    let id = is_infinitely_divisible(&p)?;
    let mut t = Table::new(&["k", "r_k"]);
    for (i, x) in r.0.iter().enumerate() {
        t.push(vec![i.to_string(), fmt(x)]);
    }
    Ok(Report::new("recover-r", json!({"r": r, "infinite_divisibility": id}), vec![]).with_table(t))
}

fn sign_rows(t: &mut Table, label: &str, r: &SignReport) {
    for (k, d) in r.indexed() {
        t.push(vec![label.to_string(), k.to_string(), fmt(d), sign_str(d)]);
    }
}

fn violation_witness(r: &SignReport) -> String {
    match r.first_violation {
        Some(k) => {
            let d = &r.differences[k - r.start_index];
            format!("first violation at k = {k}: d_k = {}", fmt(d))
        }
        None => "no violation where one was expected".into(),
    }
}

fn check(cmd: &CheckCmd, s: &Settings) -> Res {
    match cmd {
        CheckCmd::Logconcavity { seq, first_index, expect } => {
            let seq = rational::parse_list(seq)?;
            let r = logconcavity_report(&seq, *first_index);
            let mut t = Table::new(&["k", "d_k", "sign"]);
            for (k, d) in r.indexed() {
                t.push(vec![k.to_string(), fmt(d), sign_str(d)]);
            }
            let mut checks = vec![];
            if let Some(shape) = expect {
                let ok = match shape {
                    ShapeArg::Concave => matches!(r.verdict, Verdict::LogConcave | Verdict::Both),
                    ShapeArg::Convex => matches!(r.verdict, Verdict::LogConvex | Verdict::Both),
                };
                let id = format!("expect_log_{}", if *shape == ShapeArg::Concave { "concave" } else { "convex" });
                checks.push(Check::new("ineqcheck", id, ok, || format!("verdict {:?}, first violation {:?}", r.verdict, r.first_violation)));
            }
            Ok(Report::new("check logconcavity", to_json(&r), checks).with_table(t))
        }
        CheckCmd::Theorem1 { c, random, boundary } => {
            let k = order(s.order_or(50))?;
            let c = match (c, random) {
                (Some(text), _) => weights(text, Some(k.get()))?,
                (None, Some(shape)) => {
                    let shape = if *shape == ShapeArg::Concave { Shape::Concave } else { Shape::Convex };
                    let b = if *boundary == BoundaryArg::Ge { Boundary::C1sqGeC2 } else { Boundary::C1sqLeC2 };
                    random_logshape(s.seed, k, shape, b)
                }
                (None, None) => return Err(Failure::invalid("give --c or --random")),
            };
            let v = theorem1_verdict(&c, k);
            Ok(theorem1_report("check theorem1", &v, json!({"c": c, "verdict": v})))
        }
        CheckCmd::Corollary { families: text } => {
            let fams = families(text, s.k)?;
            let k = order(s.order_or(fams.iter().map(WeightSeq::len).max().unwrap_or(1)))?;
            let v = corollary_convexity_check(&ConvFamily::new(fams, k)?);
            let grid = |g: &Option<cycdex_core::conv::GridReport>| g.as_ref().and_then(|g| g.first_violation);
            let checks = vec![
                Check::new("conv", "boundary_identity", v.boundary_identity, || {
                    "B_0B_2 - 2B_1^2 != C_2 - C_1^2".into()
                }),
                Check::new("conv", "convexity_grid", v.status != CorollaryStatus::Contradiction, || {
                    format!(
                        "condition {} ; b grid violation {:?} ; a grid violation {:?}",
                        fmt(&v.condition),
                        grid(&v.b_grid),
                        grid(&v.a_grid)
                    )
                }),
            ];
            Ok(Report::new("check corollary", to_json(&v), checks))
        }
    }
}

fn theorem1_report(command: &str, v: &cycdex_core::ineqcheck::Theorem1Verdict, data: Value) -> Report {
    let mut t = Table::new(&["inequality", "k", "d_k", "sign"]);
    let mut checks = vec![Check::new("ineqcheck", "boundary_identity", v.boundary_identity, || {
        "b_0b_2 - 2b_1^2 != c_2 - c_1^2".into()
    })];
    for ch in &v.checks {
        let id = ch.report.inequality_id.as_str();
        sign_rows(&mut t, id, &ch.report);
        let expectation = to_json(&ch.expectation);
        let id = format!("{id}:{}", expectation.as_str().unwrap_or_default());
        checks.push(Check::new("ineqcheck", id, ch.met, || violation_witness(&ch.report)));
    }
    let summary = format!(
        "weights: {:?}; c_1^2 - c_2 = {}; status: {:?}",
        v.weight_shape,
        fmt(&v.c1sq_minus_c2),
        v.status
    );
    debug_assert!(v.status != Theorem1Status::Contradiction || checks.iter().any(|c| c.witness.is_some()));
    Report::new(command, data, checks).with_table(t).with_summary(summary)
}

fn identity_checks(list: Vec<IdentityCheck>) -> Vec<Check> {
    list.into_iter()
        .map(|c| {
            let witness = c.witness.clone();
            Check::new("sympoly", format!("{}[{}]", c.identity, c.params), c.passed, || witness.unwrap_or_default())
        })
        .collect()
}

fn identities(suite: Suite, max_m: usize, s: &Settings) -> Res {
    if max_m > s.max_symbolic_m {
        return Err(Failure {
            code: 4,
            message: format!(
                "--max-m {max_m} exceeds the symbolic cap {} (raise it with {MAX_SYMBOLIC_ENV})",
                s.max_symbolic_m
            ),
        });
    }
    let mut all = Vec::new();
    match suite {
        Suite::Props => {
            for m in 0..=max_m {
                all.push(verify_prop4(m));
                all.push(verify_prop2(m)?);
                all.push(verify_prop22(m)?);
            }
        }
        Suite::Theorem1proof => {
            for m in 1..=max_m.max(1) {
                all.extend(verify_theorem1_proof_identity(m)?);
            }
        }
        Suite::Hansen => {
            for m in 0..=max_m {
                all.extend(verify_hansen_identities(m));
            }
        }
        Suite::Dmdn => {
            for n in 1..=max_m.max(1) {
                for m in 1..=n {
                    all.extend(verify_dmdn_identity(m, n)?);
                }
            }
        }
    }
    let checks = identity_checks(all);
    let count = checks.len();
    Ok(Report::new("verify identities", json!({"suite": format!("{suite:?}").to_lowercase(), "max_m": max_m, "count": count}), checks))
}

fn validation_check(id: &str, v: &Validation) -> Check {
    let witness = match v {
        Validation::Pass => String::new(),
        Validation::Fail { reason, difference } => match difference {
            Some(d) => format!("{reason}; difference {d}"),
            None => reason.clone(),
        },
    };
    Check::new("certify", id, v.passed(), || witness)
}

/// Serializes, decodes and validates again, so the emitted JSON itself is checked.
fn emit_and_revalidate(json: &CertificateJson, target: &MultiPoly, rendered: String, s: &Settings, extra: Vec<Check>) -> Res {
    let text = serde_json::to_string(json).expect("certificate serializes");
    let back: CertificateJson = serde_json::from_str(&text).map_err(|e| Failure::invalid(e.to_string()))?;
    let (gens, decoded) = back.decode()?;
    let mut checks = extra;
    checks.push(validation_check("certificate_revalidates", &validate_certificate(decoded.as_ref(), target, &gens)));
    checks.push(shadow_check(&decoded, target, &gens, s.seed)?);
    let data = json!({"target": target.to_string(), "rendered": rendered, "certificate": json});
    Ok(Report::new("certify", data, checks).with_summary(rendered))
}

fn shadow_check(cert: &DecodedCertificate, target: &MultiPoly, gens: &GeneratorSet, seed: u64) -> Result<Check, Failure> {
    let target = target.extend_to(gens.alphabet())?;
    let ok = match cert.as_ref() {
        CertificateRef::Plain(c) => agree_at_random_points(&c.expand(gens)?, &target, 20, seed),
        CertificateRef::Ratio(r) => {
            let num = r.numerator.expand(gens)?;
            let den = r.denominator.expand(gens)?;
            agree_at_random_points(&num, &(&target * &den), 20, seed)
        }
    };
    Ok(Check::new("certify", "random_point_agreement", ok, || "expansion and target differ at a random point".into()))
}

fn plain_or_missing(out: SearchOutcome, gens: &GeneratorSet, target: &MultiPoly, s: &Settings) -> Res {
    match out {
        SearchOutcome::Found(cert) => {
            let first = validate_certificate(&cert, target, gens);
            emit_and_revalidate(
                &CertificateJson::plain(&cert, gens),
                target,
                cert.render(gens),
                s,
                vec![validation_check("certificate_valid", &first)],
            )
        }
        SearchOutcome::NotFound { bound } => {
            let check = Check::new("certify", "certificate_found", false, || {
                format!("no nonnegative integer combination within degree {bound}")
            });
            Ok(Report::new("certify", json!({"target": target.to_string(), "bound": bound}), vec![check]))
        }
    }
}

fn render_ratio(num: &Certificate, den: &Certificate, gens: &GeneratorSet) -> String {
    format!("({}) / ({})", num.render(gens), den.render(gens))
}

fn certify(cmd: &CertifyCmd, s: &Settings) -> Res {
    match cmd {
        CertifyCmd::Poly1 { m, n, bound } => {
            let target = poly1_target(*m, *n)?;
            let gens = build_generator_set(GenKind::Y, n + 1)?;
            let out = certify_in_cone(&target, &gens, bound.unwrap_or(target.total_degree()))?;
            plain_or_missing(out, &gens, &target, s)
        }
        CertifyCmd::Conjecture { m, n, bound } => {
            let target = poly2_target(*m, *n)?;
            let (gens, out) = conjecture_search(*m, *n, bound.unwrap_or(target.total_degree()))?;
            plain_or_missing(out, &gens, &target, s)
        }
        CertifyCmd::Poly2 { m, n } => {
            let target = poly2_target(*m, *n)?;
            let (gens, rc) = certify_poly2(*m, *n)?;
            let first = validate_certificate(&rc, &target, &gens);
            emit_and_revalidate(
                &CertificateJson::ratio(&rc, &gens),
                &target,
                render_ratio(&rc.numerator, &rc.denominator, &gens),
                s,
                vec![validation_check("certificate_valid", &first)],
            )
        }
        CertifyCmd::Validate { input, target, m, n } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| Failure::invalid(format!("{}: {e}", input.display())))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure::invalid(e.to_string()))?;
            // accept either a bare certificate or a certify report
            let cert_value = value.get("data").and_then(|d| d.get("certificate")).cloned().unwrap_or(value);
            let json: CertificateJson =
                serde_json::from_value(cert_value).map_err(|e| Failure::invalid(e.to_string()))?;
            let target = match target {
                TargetArg::Poly1 => poly1_target(*m, *n)?,
                TargetArg::Poly2 => poly2_target(*m, *n)?,
            };
            let (gens, decoded) = json.decode()?;
            let rendered = match &decoded {
                DecodedCertificate::Plain(c) => c.render(&gens),
                DecodedCertificate::Ratio(r) => render_ratio(&r.numerator, &r.denominator, &gens),
            };
            emit_and_revalidate(&json, &target, rendered, s, vec![])
        }
    }
}

fn examples(cmd: &ExamplesCmd, s: &Settings) -> Res {
    match cmd {
        ExamplesCmd::Geometric { p, p2 } => {
            let p = rational::parse(p)?;
            let k = order(s.order_or(20))?;
            match p2 {
                None => {
                    let r = geometric_report(&p, k)?;
                    let v = theorem1_verdict(&geometric_weights(&p, k)?, k);
                    let checks = vec![
                        Check::new("distexamples", "geometric_ratio_differences_vanish", r.ratio_differences_vanish, || {
                            "some c_k^2 - c_{k-1}c_{k+1} is nonzero".into()
                        }),
                        Check::new("distexamples", "geometric_boundary_closed_form", r.boundary_closed_form, || {
                            format!("c_1^2 - c_2 = {} != p(2p-1)", fmt(&r.c1sq_minus_c2))
                        }),
                        Check::new("ineqcheck", "theorem1_consistent", v.status != Theorem1Status::Contradiction, || {
                            format!("{:?}", v.checks.iter().find(|c| !c.met).map(|c| c.report.inequality_id))
                        }),
                    ];
                    let mut t = Table::new(&["k", "c_k"]);
                    for (i, c) in r.weights.as_slice().iter().enumerate() {
                        t.push(vec![(i + 1).to_string(), fmt(c)]);
                    }
                    Ok(Report::new("examples geometric", json!({"report": r, "theorem1": v}), checks).with_table(t))
                }
                Some(p2) => {
                    let p2 = rational::parse(p2)?;
                    let r = two_geometric_report(&p, &p2, k)?;
                    let a = expand_a(&r.summed, k).a;
                    let shape = logconcavity_report(&a, 0);
                    let checks = vec![
                        Check::new("distexamples", "two_geometric_closed_form", r.closed_form, || {
                            "C_k^2 - C_{k-1}C_{k+1} differs from -pp'((1-p)(1-p'))^{k-2}(p-p')^2".into()
                        }),
                        Check::new("distexamples", "two_geometric_boundary_closed_form", r.boundary_closed_form, || {
                            format!("C_1^2 - C_2 = {}", fmt(&r.c1sq_minus_c2))
                        }),
                    ];
                    let mut t = Table::new(&["k", "d_k", "sign"]);
                    for (i, d) in shape.indexed() {
                        t.push(vec![i.to_string(), fmt(d), sign_str(d)]);
                    }
                    let data = json!({"report": r, "a": format_list(&a), "a_shape": shape.verdict});
                    Ok(Report::new("examples geometric", data, checks).with_table(t))
                }
            }
        }
        ExamplesCmd::Logseries { p } => {
            let p = rational::parse(p)?;
            let k = order(s.order_or(20))?;
            let r = logseries_report(&p, k, s.digits)?;
            let weights_check = if r.weight_differences.iter().any(|x| !x.is_conclusive()) {
                Check::inconclusive("distexamples", "logseries_weights_log_convex", format!("sign undecided at {} digits", s.digits))
            } else {
                Check::new(
                    "distexamples",
                    "logseries_weights_log_convex",
                    r.weight_differences.iter().all(|x| *x == SignConfidence::ExactSign(-1)),
                    || "some c_k^2 - c_{k-1}c_{k+1} is positive".into(),
                )
            };
            let conclusion = match r.status {
                LogSeriesStatus::Inconclusive => Check::inconclusive(
                    "distexamples",
                    "logseries_convex_conclusions",
                    format!("sign undecided at {} digits", s.digits),
                ),
                st => Check::new("distexamples", "logseries_convex_conclusions", st != LogSeriesStatus::Contradiction, || {
                    let bad = r.a_differences.iter().position(|x| *x == SignConfidence::ExactSign(-1));
                    format!("a-side violation at k = {:?}", bad.map(|i| i + 1))
                }),
            };
            let checks = vec![
                weights_check,
                Check::new("distexamples", "logseries_gap_closed_form", r.gap_closed_form_agrees, || {
                    format!("c_1^2 - c_2 = {} disagrees with its closed form", r.c1sq_minus_c2.value)
                }),
                conclusion,
            ];
            let mut t = Table::new(&["k", "c_k"]);
            for (i, c) in r.weights.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), c.value.clone()]);
            }
            Ok(Report::new("examples logseries", to_json(&r), checks).with_table(t))
        }
    }
}

fn convolve(text: &str, s: &Settings) -> Res {
    let fams = families(text, s.k)?;
    let k = order(s.order_or(fams.iter().map(WeightSeq::len).max().unwrap_or(1)))?;
    let e = multi_expand_a(&ConvFamily::new(fams, k)?);
    let checks = vec![
        Check::new("conv", "a_matches_convolution", e.a_matches_convolution, || "A differs from the convolution".into()),
        Check::new("conv", "b_matches_binomial_convolution", e.b_matches_binomial, || {
            "B differs from the binomial convolution".into()
        }),
    ];
    let mut t = Table::new(&["k", "A_k", "B_k"]);
    for (i, (a, b)) in e.coeffs.a.iter().zip(&e.coeffs.b).enumerate() {
        t.push(vec![i.to_string(), fmt(a), fmt(b)]);
    }
    Ok(Report::new("convolve", to_json(&e), checks).with_table(t))
}
