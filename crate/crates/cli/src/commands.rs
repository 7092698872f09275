use std::path::Path;
use std::time::Duration;

use frobenius_core::corpus::{fixture_by_name, fixture_regular, FIXTURE_NAMES};
use frobenius_core::lab::{
    c2_from_chain, clearing_check, colon_chain, frobenius_closure_test, hk_series, lc_probe,
    radical_chain_check, stable_radical_of, strong_test_certificate, tc_evidence,
    test_exponent_probe, two_variable_certificate, verify_certificate, verify_two_variable,
    ChainRow, RadicalCheck, StableRadicalOutcome, Verdict,
};
use frobenius_core::{
    bracket_power, colength, ideal_colon, ideal_colon_ideal, ideal_member, saturation, GbLimits,
    IdealHandle, MonomialOrder, Polynomial, Ratio,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command, CorpusAction, FixtureArgs, OrderArg, Probe, Src};
use crate::error::{CliError, CliResult};
use crate::report::{self, Report};
use crate::session::Session;

pub enum Output {
    Json(Value),
    Text(String),
}

pub struct Outcome {
    pub output: Output,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Self {
            output: Output::Json(v),
            exit_code: 0,
        }
    }
}

fn env_cap(name: &str) -> CliResult<Option<u64>> {
    match std::env::var(name) {
        Ok(v) => v.trim().parse::<u64>().map(Some).map_err(|_| {
            CliError::Input(format!(
                "environment variable {name}=`{v}` is not a non-negative integer"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(_) => Err(CliError::Input(format!(
            "environment variable {name} is not valid unicode"
        ))),
    }
}

pub fn limits_from_env() -> CliResult<GbLimits> {
    let mut limits = GbLimits::default();
    if let Some(v) = env_cap("FROBLAB_MAX_BASIS")? {
        limits.max_basis = v as usize;
    }
    if let Some(v) = env_cap("FROBLAB_MAX_DEGREE")? {
        limits.max_degree = v;
    }
    if let Some(v) = env_cap("FROBLAB_ROW_SECONDS")? {
        limits.row_timeout = Some(Duration::from_secs(v));
    }
    Ok(limits)
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

struct Loaded {
    session: Session,
    report: Report,
}

fn load(src: &Src, argv: &[String]) -> CliResult<Loaded> {
    load_path(&src.file, argv)
}

fn load_path(path: &Path, argv: &[String]) -> CliResult<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| {
        CliError::Input(format!("cannot read session file {}: {e}", path.display()))
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| {
        CliError::Input(format!(
            "session file {} is not valid UTF-8",
            path.display()
        ))
    })?;
    let session = Session::parse(&text, limits_from_env()?).map_err(|e| match e {
        CliError::Limit(m) => CliError::Limit(format!("{}: {m}", path.display())),
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
    })?;
    let mut report = Report::new(argv.to_vec());
    report.input(json!({
        "kind": "session",
        "path": path.display().to_string(),
        "sha256": sha256_hex(&bytes),
    }));
    report.ring(&session.ctx, session.dimension);
    Ok(Loaded { session, report })
}

fn eng<T>(what: &str, r: frobenius_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::engine(what, e))
}

fn parse_ratio(text: &str) -> CliResult<Ratio<u64>> {
    let bad = || CliError::Input(format!("tolerance `{text}` is not of the form a or a/b"));
    match text.split_once('/') {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            if b == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => Ok(Ratio::from_integer(text.trim().parse().map_err(|_| bad())?)),
    }
}

/// Integers that may exceed 64 bits are emitted as strings.
fn big(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn named(name: &str, f: &Polynomial) -> Value {
    json!({ "name": name, "poly": f.to_string() })
}

fn ideal_json(name: &str, i: &IdealHandle) -> Value {
    report::ideal(Some(name), i)
}

fn canonical_gens(what: &str, i: &IdealHandle) -> CliResult<Value> {
    let c = eng(what, i.canonical())?;
    Ok(report::polys(c.generators()))
}

pub fn run(cli: &Cli, argv: Vec<String>) -> CliResult<Outcome> {
    match &cli.command {
        Command::Gb { src, order } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let order = match order {
                Some(OrderArg::Lex) => MonomialOrder::Lex,
                Some(OrderArg::Grevlex) => MonomialOrder::Grevlex,
                None => session.ctx.ambient().order(),
            };
            let gb = eng("groebner basis", i.groebner(order))?;
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "order": order.name(),
                "includes_defining_ideal": session.ctx.is_quotient(),
                "basis": report::polys(gb.basis()),
                "unit": gb.is_unit(),
            }))))
        }
        Command::Member { src, elem } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let f = session.element(elem)?;
            let member = eng("membership", ideal_member(f, i))?;
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "elem": named(elem, f),
                "member": member,
            }))))
        }
        Command::Colon { src, elem, by } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let (by_json, colon) = match (elem, by) {
                (Some(e), _) => {
                    let f = session.element(e)?;
                    (
                        json!({ "elem": named(e, f) }),
                        eng("colon", ideal_colon(i, f))?,
                    )
                }
                (None, Some(b)) => {
                    let j = session.ideal(b)?;
                    (
                        json!({ "ideal": ideal_json(b, j) }),
                        eng("colon", ideal_colon_ideal(i, j))?,
                    )
                }
                (None, None) => return Err(CliError::Input("colon needs --elem or --by".into())),
            };
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "by": by_json,
                "colon": canonical_gens("colon", &colon)?,
                "unit": eng("colon", colon.is_unit())?,
            }))))
        }
        Command::Sat { src, by } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let (by_json, j) = match by {
                Some(b) => (ideal_json(b, session.ideal(b)?), session.ideal(b)?.clone()),
                None => {
                    let m = IdealHandle::maximal(&session.ctx);
                    (report::ideal(Some("m"), &m), m)
                }
            };
            let (sat, steps) = eng("saturation", saturation(i, &j))?;
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "by": by_json,
                "saturation": canonical_gens("saturation", &sat)?,
                "steps": steps,
            }))))
        }
        Command::Bracket { src, e } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let b = eng("bracket power", bracket_power(i, *e))?;
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "e": b.e,
                "q": b.q,
                "bracket": report::polys(b.handle.generators()),
            }))))
        }
        Command::Colength { src } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let len = eng("colength", colength(i))?;
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "colength": big(len),
            }))))
        }
        Command::Tc {
            probe,
            test_exponent,
        } => tc(probe, *test_exponent, &argv),
        Command::Fc { src, elem, emax } => {
            let Loaded {
                session,
                mut report,
            } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let u = session.element(elem)?;
            let fc = eng("frobenius closure", frobenius_closure_test(u, i, *emax))?;
            let rows: Vec<Value> = fc
                .rows
                .iter()
                .map(|r| report.row(r.e, Some(r.q), &r.holds, report::bool_row))
                .collect();
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "elem": named(elem, u),
                "rows": rows,
                "first_member": fc.first_member,
                "in_frobenius_closure": fc.first_member.is_some(),
                "monotone": fc.monotone,
            }))))
        }
        Command::Chain { probe } => chain(probe, &argv),
        Command::Stableradical { probe } => stable(probe, &argv),
        Command::Clear { probe, y, emin } => clear(probe, y, *emin, &argv),
        Command::C2probe { probe, tolerance } => c2(probe, tolerance, &argv),
        Command::Lcprobe {
            src,
            emax,
            tolerance,
        } => {
            let tol = parse_ratio(tolerance)?;
            let Loaded {
                session,
                mut report,
            } = load(src, &argv)?;
            report.localized();
            let j = session.ideal(&src.ideal)?;
            let lc = eng("lc probe", lc_probe(j, *emax, tol))?;
            let rows: Vec<Value> = lc
                .rows
                .iter()
                .enumerate()
                .map(|(e, r)| {
                    report.row(e as u32, r.exact().map(|x| x.q), r, |x| {
                        json!({
                            "n_q": x.n_q,
                            "ratio": report::ratio(&Ratio::new(x.n_q, x.q as u64)),
                            "saturated": x.saturated,
                        })
                    })
                })
                .collect();
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, j),
                "rows": rows,
                "ratio_sup": lc.ratio_sup.as_ref().map(report::ratio),
                "tolerance": report::ratio(&tol),
                "bounded": lc.bounded,
            }))))
        }
        Command::Hk { src, emax, elem, c } => {
            let Loaded {
                session,
                mut report,
            } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let attached = match (elem, c) {
                (Some(x), Some(c)) => Some((session.element(x)?, session.test_element(c)?)),
                _ => None,
            };
            let hk = eng(
                "hilbert-kunz series",
                hk_series(i, attached, *emax, session.dimension),
            )?;
            let length = |v: &(u128, Ratio<u128>)| json!({ "length": big(v.0), "normalized": report::ratio(&v.1) });
            let mut rows = Vec::new();
            for r in &hk.rows {
                let mut row = report.row(r.e, Some(r.q), &r.length, length);
                if let Some(ch) = &r.chain_length {
                    let v = report.row(r.e, Some(r.q), ch, length);
                    row["chain"] = v;
                }
                rows.push(row);
            }
            let mut result = json!({
                "ideal": ideal_json(&src.ideal, i),
                "dimension": hk.dimension,
                "rows": rows,
                "eps_inf_empirical": hk.eps_inf.as_ref().map(report::ratio),
            });
            if let (Some(x), Some(c)) = (elem, c) {
                result["chain"] = json!({ "elem": x, "c": c });
            }
            Ok(Outcome::ok(report.finish(result)))
        }
        Command::Strongtest { src, elem, j, v } => {
            let Loaded { session, report } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let u = session.element(elem)?;
            let jj = session.ideal(j)?;
            let result = match v {
                None => {
                    let cert = eng(
                        "strong test certificate",
                        strong_test_certificate(u, i, jj.generators()),
                    )?;
                    let verified = verify_certificate(&cert).is_ok();
                    json!({
                        "ideal": ideal_json(&src.ideal, i),
                        "elem": named(elem, u),
                        "j": ideal_json(j, jj),
                        "matrix": cert.matrix.iter().map(|row| report::polys(row)).collect::<Vec<_>>(),
                        "charpoly_ascending": report::polys(&cert.charpoly),
                        "residue": report::poly(&cert.residue),
                        "valid": cert.valid,
                        "independently_verified": verified,
                        "integral_over_ideal": cert.valid && verified,
                    })
                }
                Some(vname) => {
                    let vv = session.element(vname)?;
                    let cert = eng(
                        "two-variable certificate",
                        two_variable_certificate(u, vv, i, jj.generators()),
                    )?;
                    let verified = verify_two_variable(&cert).is_ok();
                    json!({
                        "ideal": ideal_json(&src.ideal, i),
                        "elem": named(elem, u),
                        "v": named(vname, vv),
                        "j": ideal_json(j, jj),
                        "r": cert.r.iter().map(|row| report::polys(row)).collect::<Vec<_>>(),
                        "form_coefficients": report::polys(&cert.coeffs),
                        "independently_verified": verified,
                    })
                }
            };
            Ok(Outcome::ok(report.finish(result)))
        }
        Command::Testexp {
            src,
            c,
            cands,
            emax,
        } => {
            let Loaded {
                session,
                mut report,
            } = load(src, &argv)?;
            let i = session.ideal(&src.ideal)?;
            let decl = session.test_element(c)?;
            let polys = cands
                .iter()
                .map(|n| session.element(n).cloned())
                .collect::<CliResult<Vec<_>>>()?;
            let rep = eng(
                "test exponent probe",
                test_exponent_probe(decl, i, &polys, *emax),
            )?;
            let mut out = Vec::new();
            for (name, cand) in cands.iter().zip(&rep.candidates) {
                let rows: Vec<Value> = cand
                    .rows
                    .iter()
                    .map(|r| report.row(r.e, Some(r.q), &r.holds, report::bool_row))
                    .collect();
                out.push(json!({
                    "elem": named(name, &cand.u),
                    "rows": rows,
                    "verdict": cand.verdict.name(),
                    "prefix_law": cand.prefix_law,
                }));
            }
            Ok(Outcome::ok(report.finish(json!({
                "ideal": ideal_json(&src.ideal, i),
                "test_element": report::test_element(c, decl),
                "candidates": out,
                "consistent_exponent": rep.consistent_exponent,
                "note": "consistency bound over the tested candidates only",
            }))))
        }
        Command::Corpus { action } => corpus(action, &argv),
    }
}

fn probe_inputs<'a>(
    session: &'a Session,
    probe: &Probe,
) -> CliResult<(
    &'a IdealHandle,
    &'a Polynomial,
    &'a frobenius_core::lab::TestElementDecl,
)> {
    Ok((
        session.ideal(&probe.src.ideal)?,
        session.element(&probe.elem)?,
        session.test_element(&probe.c)?,
    ))
}

fn tc(probe: &Probe, q0: Option<u32>, argv: &[String]) -> CliResult<Outcome> {
    let Loaded {
        session,
        mut report,
    } = load(&probe.src, argv)?;
    let (i, u, c) = probe_inputs(&session, probe)?;
    let ev = eng(
        "tight closure evidence",
        tc_evidence(u, i, c, probe.emax, q0),
    )?;
    let rows: Vec<Value> = ev
        .rows
        .iter()
        .map(|r| report.row(r.e, Some(r.q), &r.holds, report::bool_row))
        .collect();
    let scope = match (ev.verdict, ev.proven) {
        (Verdict::Excluded, _) => "u is not in I*, conditional on c being a test element",
        (Verdict::MemberEvidence, true) => {
            "u is in I*, conditional on c and the supplied test exponent"
        }
        (Verdict::MemberEvidence, false) => "evidence for the tested exponents only",
        (Verdict::Inconclusive, _) => "no conclusion",
    };
    Ok(Outcome::ok(report.finish(json!({
        "ideal": ideal_json(&probe.src.ideal, i),
        "elem": named(&probe.elem, u),
        "test_element": report::test_element(&probe.c, c),
        "rows": rows,
        "first_false": ev.first_false().map(|r| json!({ "e": r.e, "q": r.q })),
        "verdict": ev.verdict.name(),
        "proven": ev.proven,
        "verdict_scope": scope,
    }))))
}

fn chain_row_json(row: &ChainRow) -> Value {
    json!({
        "ideal": report::polys(row.ideal.generators()),
        "unit": row.is_unit,
        "m_primary": row.is_m_primary,
        "n_q": row.n_q,
        "colength": row.colength.map(big),
    })
}

fn radical_json(check: &RadicalCheck) -> Value {
    match check {
        RadicalCheck::Pass => json!({ "status": "pass" }),
        RadicalCheck::Skipped => {
            json!({ "status": "skipped", "note": "test element is not a recorded square" })
        }
        RadicalCheck::PrefixViolation { earlier, later } => {
            json!({ "status": "prefix-violation", "earlier": earlier, "later": later })
        }
        RadicalCheck::Fail {
            earlier,
            later,
            witness,
        } => json!({
            "status": "fail",
            "earlier": earlier,
            "later": later,
            "witness": witness.to_string(),
        }),
    }
}

fn chain(probe: &Probe, argv: &[String]) -> CliResult<Outcome> {
    let Loaded {
        session,
        mut report,
    } = load(&probe.src, argv)?;
    report.localized();
    let (i, x, c) = probe_inputs(&session, probe)?;
    let rep = eng("colon chain", colon_chain(i, x, c, probe.emax))?;
    let check = eng("radical check", radical_chain_check(&rep))?;
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .enumerate()
        .map(|(e, r)| report.row(e as u32, r.exact().map(|x| x.q), r, chain_row_json))
        .collect();
    Ok(Outcome::ok(report.finish(json!({
        "ideal": ideal_json(&probe.src.ideal, i),
        "elem": named(&probe.elem, x),
        "test_element": report::test_element(&probe.c, c),
        "rows": rows,
        "stabilization": rep.stabilization,
        "monotonicity_applies": rep.monotonicity_applies,
        "radical_check": radical_json(&check),
    }))))
}

fn stable(probe: &Probe, argv: &[String]) -> CliResult<Outcome> {
    let Loaded {
        session,
        mut report,
    } = load(&probe.src, argv)?;
    report.localized();
    let (i, x, c) = probe_inputs(&session, probe)?;
    if !c.is_square() {
        return Err(CliError::Input(format!(
            "test element `{}` must be declared `square` for a stable radical",
            probe.c
        )));
    }
    let rep = eng("colon chain", colon_chain(i, x, c, probe.emax))?;
    let outcome = eng("stable radical", stable_radical_of(&rep))?;
    let result = match outcome {
        StableRadicalOutcome::Stable(s) => json!({
            "stable": true,
            "radical": report::polys(s.radical.generators()),
            "exact": s.exact,
            "representative_note": if s.exact { Value::Null } else { json!("radical of the listed ideal") },
            "unit": eng("stable radical", s.is_unit())?,
            "stabilized_at": s.stabilized_at,
            "confirmed_through": s.confirmed_through,
        }),
        StableRadicalOutcome::NotStabilized { e_max } => json!({ "stable": false, "e_max": e_max }),
    };
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .enumerate()
        .map(|(e, r)| {
            report.row(
                e as u32,
                r.exact().map(|x| x.q),
                r,
                |row| json!({ "unit": row.is_unit, "m_primary": row.is_m_primary }),
            )
        })
        .collect();
    Ok(Outcome::ok(report.finish(json!({
        "ideal": ideal_json(&probe.src.ideal, i),
        "elem": named(&probe.elem, x),
        "test_element": report::test_element(&probe.c, c),
        "rows": rows,
        "outcome": result,
    }))))
}

fn clear(probe: &Probe, y: &str, emin: u32, argv: &[String]) -> CliResult<Outcome> {
    let Loaded {
        session,
        mut report,
    } = load(&probe.src, argv)?;
    report.localized();
    let (i, x, c) = probe_inputs(&session, probe)?;
    let yy = session.element(y)?;
    if emin > probe.emax {
        return Err(CliError::Input(format!(
            "--emin {emin} exceeds --emax {}",
            probe.emax
        )));
    }
    let rows = eng("clearing", clearing_check(yy, i, x, c, emin..=probe.emax))?;
    let p = session.ctx.characteristic();
    let rows: Vec<Value> = rows
        .iter()
        .map(|(e, r)| report.row(*e, p.checked_pow(*e), r, report::bool_row))
        .collect();
    Ok(Outcome::ok(report.finish(json!({
        "ideal": ideal_json(&probe.src.ideal, i),
        "elem": named(&probe.elem, x),
        "y": named(y, yy),
        "test_element": report::test_element(&probe.c, c),
        "rows": rows,
    }))))
}

fn c2(probe: &Probe, tolerance: &str, argv: &[String]) -> CliResult<Outcome> {
    let tol = parse_ratio(tolerance)?;
    let Loaded {
        session,
        mut report,
    } = load(&probe.src, argv)?;
    report.localized();
    let (i, x, c) = probe_inputs(&session, probe)?;
    let chain = eng("colon chain", colon_chain(i, x, c, probe.emax))?;
    let rep = c2_from_chain(&chain, tol);
    let p = session.ctx.characteristic();
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|(e, r)| {
            let q = p.checked_pow(*e);
            report.row(*e, q, r, |n| {
                json!({ "n_q": n, "ratio": q.map(|q| report::ratio(&Ratio::new(*n, q as u64))) })
            })
        })
        .collect();
    Ok(Outcome::ok(report.finish(json!({
        "ideal": ideal_json(&probe.src.ideal, i),
        "elem": named(&probe.elem, x),
        "test_element": report::test_element(&probe.c, c),
        "rows": rows,
        "max_ratio": rep.max_ratio.as_ref().map(report::ratio),
        "tolerance": report::ratio(&tol),
        "bounded": rep.bounded,
    }))))
}

fn corpus(action: &CorpusAction, argv: &[String]) -> CliResult<Outcome> {
    let build = |a: &FixtureArgs| {
        let fx = if a.name == "regular" {
            fixture_regular(a.p, a.n)
        } else {
            fixture_by_name(&a.name, a.p)
        };
        fx.map_err(|e| CliError::Input(format!("fixture `{}` at p = {}: {e}", a.name, a.p)))
    };
    match action {
        CorpusAction::List => {
            let report = Report::new(argv.to_vec());
            Ok(Outcome::ok(
                report.finish(json!({ "fixtures": FIXTURE_NAMES })),
            ))
        }
        CorpusAction::Export(a) => Ok(Outcome {
            output: Output::Text(build(a)?.to_session_text()),
            exit_code: 0,
        }),
        CorpusAction::Run(a) => {
            let fx = build(a)?;
            let mut report = Report::new(argv.to_vec());
            let text = fx.to_session_text();
            report.input(json!({
                "kind": "fixture",
                "name": fx.name,
                "p": fx.p,
                "sha256": sha256_hex(text.as_bytes()),
            }));
            report.ring(&fx.ctx, Some(fx.dimension));
            report.localized();
            let outcomes = eng("corpus run", fx.run())?;
            let mut entries = Vec::new();
            let (mut failed, mut limited) = (0usize, 0usize);
            for o in &outcomes {
                if o.limited {
                    limited += 1;
                    report.note(format!("{}: resource cap hit", o.label));
                } else if !o.passed {
                    failed += 1;
                }
                entries.push(json!({
                    "label": o.label,
                    "provenance": { "tag": o.provenance.tag(), "note": o.provenance.note() },
                    "passed": o.passed,
                    "limited": o.limited,
                    "observed": o.observed,
                }));
            }
            let exit_code = if failed > 0 {
                4
            } else if limited > 0 {
                3
            } else {
                0
            };
            Ok(Outcome {
                output: Output::Json(report.finish(json!({
                    "fixture": fx.name,
                    "entries": entries,
                    "passed": outcomes.len() - failed - limited,
                    "failed": failed,
                    "limited_entries": limited,
                    "all_passed": failed == 0 && limited == 0,
                }))),
                exit_code,
            })
        }
    }
}
