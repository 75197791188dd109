//! One function per subcommand; each returns text, JSON and an exit code.

use std::fmt::Write as _;
use std::thread;

use anyhow::{bail, ensure, Context, Result};
use serde_json::{json, Value};
use slocc_core::bell::{canonical_order, is_entangled_bd, WeightVector};
use slocc_core::choi::map_action_bd;
use slocc_core::convertibility::{monotones as monotone_triple, Conversion, Decision, Obstruction, Ratio};
use slocc_core::normal_form::{bd_of_class, classify, NormalFormClass};
use slocc_core::numerics::Tolerances;
use slocc_core::selfcheck::self_checks;
use slocc_core::separability::{is_separable, vertex_set, SeparabilityCertificate, VertexKind};
use slocc_core::strategy::{convertibility_strategies, separability_strategies};
use slocc_core::symmetric::{invert, RMatrix};
use slocc_core::Error;

use crate::input::Input;

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

/// The input lies outside what a command handles (exit 3).
#[derive(Debug)]
pub struct Unsupported(pub String);

impl std::fmt::Display for Unsupported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Unsupported {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Unsupported>() {
            return EXIT_UNSUPPORTED;
        }
        if let Some(Error::NotEntangled(_) | Error::SeparableInput) = cause.downcast_ref::<Error>() {
            return EXIT_UNSUPPORTED;
        }
    }
    EXIT_INPUT
}

/// Shortest decimal up to ten places; "inf" for +∞.
pub fn num(x: f64) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn json_num(x: f64) -> Value {
    if x.is_finite() { json!(x) } else { json!(num(x)) }
}

fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

fn ratio_json(r: &Ratio) -> Value {
    json!({ "ratio": [r.num, r.den], "value": json_num(r.value()) })
}

fn rmatrix_json(r: &RMatrix) -> Value {
    json!({ "kind": "rmatrix", "r": r.rows() })
}

pub fn monotones(input: &Input, tol: &Tolerances) -> Result<Outcome> {
    let (w, _) = canonical_order(&input.weights(tol)?);
    let m = monotone_triple(&w)?;
    let mut text = format!("lambda (ordered): {}\n", nums(w.as_array()));
    writeln!(text, "E1 = {}", num(m.e1))?;
    for (name, r) in [("E2", &m.e2), ("E3", &m.e3)] {
        writeln!(text, "{name} = {}/{} = {}", num(r.num), num(r.den), num(r.value()))?;
    }
    let json = json!({
        "lambda": w.as_array(),
        "E1": m.e1,
        "E2": ratio_json(&m.e2),
        "E3": ratio_json(&m.e3),
    });
    Ok(Outcome { text, json, code: EXIT_YES })
}

/// A state reduced to its Bell-diagonal representative.
enum Reduced {
    Separable,
    /// Ordered weights; `given` holds the original weights and sort
    /// permutation when the input itself is Bell-diagonal.
    Entangled { ordered: WeightVector, given: Option<(WeightVector, [usize; 4])> },
}

fn reduce(input: &Input, tol: &Tolerances) -> Result<Reduced> {
    if let Ok(w) = input.weights(tol) {
        let (ordered, perm) = canonical_order(&w);
        return Ok(if is_entangled_bd(&ordered) {
            Reduced::Entangled { ordered, given: Some((w, perm)) }
        } else {
            Reduced::Separable
        });
    }
    match classify(&input.density()?, tol)?.class {
        NormalFormClass::Separable => Ok(Reduced::Separable),
        class => Ok(Reduced::Entangled { ordered: bd_of_class(&class)?, given: None }),
    }
}

pub fn convert(source: &Input, target: &Input, method: &str, tol: &Tolerances) -> Result<Outcome> {
    let registry = convertibility_strategies();
    let strategy = registry.get(method)?;
    let (s, t) = (reduce(source, tol).context("source")?, reduce(target, tol).context("target")?);
    let (s, t) = match (s, t) {
        (_, Reduced::Separable) => {
            return Ok(Outcome {
                text: "YES\nrule: target separable (prepared locally)\n".into(),
                json: json!({ "answer": "YES", "rule": "target separable", "method": method }),
                code: EXIT_YES,
            });
        }
        (Reduced::Separable, _) => {
            let o = Obstruction::SeparableSource;
            return Ok(Outcome {
                text: format!("NO\nrule: {o}\n"),
                json: json!({ "answer": "NO", "rule": "separable source", "method": method }),
                code: EXIT_NO,
            });
        }
        (Reduced::Entangled { ordered: so, given: sg }, Reduced::Entangled { ordered: to, given: tg }) => {
            ((so, sg), (to, tg))
        }
    };
    let decision = strategy.decide(&s.0, &t.0, tol)?;
    match decision {
        Decision::Convertible(Conversion::Map(map)) => {
            // Re-index the map so it acts on the weights exactly as given.
            let (r, from, to, acts_on) = match (s.1, t.1) {
                (Some((sw, sp)), Some((tw, tp))) => {
                    (map.r.permute(&invert(&tp), &invert(&sp)), sw, tw, "the weights as given")
                }
                _ => (map.r, s.0, t.0, "the ordered Bell-diagonal normal forms"),
            };
            let (out, weight) = map_action_bd(&r, &from)?;
            let deviation = out.max_abs_diff(&to);
            ensure!(deviation <= tol.equality, "replayed map misses the target by {deviation:e}");
            let cert = is_separable(&r, tol)?;
            ensure!(cert.is_separable() && cert.verify(&r, tol), "synthesized map is not separable");
            let map_json = rmatrix_json(&r);
            let text = format!(
                "YES\nmap (acts on {acts_on}):\n{}\nsuccess weight: {}\nreplay: output {} (max deviation {deviation:.1e})\n",
                serde_json::to_string(&map_json)?,
                num(weight),
                nums(out.as_array()),
            );
            let json = json!({
                "answer": "YES",
                "rule": "map",
                "method": method,
                "acts_on": acts_on,
                "map": map_json,
                "success_weight": weight,
                "replay": { "output": out.as_array(), "max_deviation": deviation },
            });
            Ok(Outcome { text, json, code: EXIT_YES })
        }
        Decision::Convertible(Conversion::SeparableTarget) => bail!("entangled target reported separable"),
        Decision::NotConvertible(Obstruction::Monotone { which, source, target }) => Ok(Outcome {
            text: format!("NO\n{which} violated: {} < {}\n", num(source), num(target)),
            json: json!({
                "answer": "NO",
                "rule": "monotone",
                "method": method,
                "monotone": which.to_string(),
                "source": json_num(source),
                "target": json_num(target),
            }),
            code: EXIT_NO,
        }),
        Decision::NotConvertible(o @ Obstruction::SeparableSource) => Ok(Outcome {
            text: format!("NO\nrule: {o}\n"),
            json: json!({ "answer": "NO", "rule": "separable source", "method": method }),
            code: EXIT_NO,
        }),
    }
}

fn kind_name(k: VertexKind) -> &'static str {
    match k {
        VertexKind::D0 => "D0",
        VertexKind::G0 => "G0",
    }
}

pub fn separable(input: &Input, method: &str, tol: &Tolerances) -> Result<Outcome> {
    let r = input.rmatrix()?;
    let cert = separability_strategies().get(method)?.decide(&r, tol)?;
    ensure!(cert.verify(&r, tol), "certificate failed re-verification");
    let mut text = String::new();
    let json = match &cert {
        SeparabilityCertificate::ConvexDecomposition(terms) => {
            writeln!(text, "SEPARABLE\ndecomposition (vertex, kind, rows, cols, weight):")?;
            let mut parts = Vec::new();
            for &(k, c) in terms {
                let v = &vertex_set()[k];
                writeln!(text, "  {k:2} {} {:?} {:?} {}", kind_name(v.kind), v.row_perm, v.col_perm, num(c))?;
                parts.push(json!({
                    "vertex": k,
                    "kind": kind_name(v.kind),
                    "row_perm": v.row_perm,
                    "col_perm": v.col_perm,
                    "weight": c,
                }));
            }
            json!({ "answer": "SEPARABLE", "method": method, "decomposition": parts })
        }
        SeparabilityCertificate::ViolatedWitness { witness, value } => {
            writeln!(
                text,
                "ENTANGLED\nwitness {}{} rows {:?} cols {:?} value {}",
                witness.family,
                if witness.transposed { " (transposed)" } else { "" },
                witness.row_perm,
                witness.col_perm,
                num(*value)
            )?;
            json!({
                "answer": "ENTANGLED",
                "method": method,
                "witness": {
                    "family": witness.family.to_string(),
                    "transposed": witness.transposed,
                    "row_perm": witness.row_perm,
                    "col_perm": witness.col_perm,
                    "matrix": witness.matrix.rows(),
                    "value": value,
                },
            })
        }
        SeparabilityCertificate::SeparatingHyperplane(f) => {
            writeln!(
                text,
                "ENTANGLED\nseparating hyperplane: offset {} normal [{}] value {}",
                num(f.offset),
                nums(&f.normal),
                num(f.eval(&r.to_vec()))
            )?;
            json!({
                "answer": "ENTANGLED",
                "method": method,
                "hyperplane": { "normal": f.normal, "offset": f.offset, "value": f.eval(&r.to_vec()) },
            })
        }
    };
    let code = if cert.is_separable() { EXIT_YES } else { EXIT_NO };
    Ok(Outcome { text, json, code })
}

pub fn normal_form(input: &Input, tol: &Tolerances) -> Result<Outcome> {
    let res = classify(&input.density()?, tol)?;
    let stats = json!({
        "iterations": res.iterations,
        "marginal_deviation": res.marginal_deviation,
        "ppt_min_eigenvalue": res.ppt_min_eigenvalue,
    });
    let (text, json) = match res.class {
        NormalFormClass::Separable => (
            format!("Separable (partial transpose min eigenvalue {})\n", num(res.ppt_min_eigenvalue)),
            json!({ "class": "Separable", "stats": stats }),
        ),
        NormalFormClass::BellDiagonal(w) => (
            format!(
                "BDClass lambda = {} ({} iterations, marginal deviation {:.1e})\n",
                nums(w.as_array()),
                res.iterations,
                res.marginal_deviation
            ),
            json!({ "class": "BDClass", "lambda": w.as_array(), "stats": stats }),
        ),
        NormalFormClass::NonDiagonal { b, exact } => {
            let w = bd_of_class(&res.class)?;
            let head = if exact { format!("NDClass b={b:.3}") } else { format!("NDClass b≈{b:.3} (approx)") };
            (
                format!("{head}\nlambda = {}\n", nums(w.as_array())),
                json!({ "class": "NDClass", "b": b, "exact": exact, "lambda": w.as_array(), "stats": stats }),
            )
        }
    };
    Ok(Outcome { text, json, code: EXIT_YES })
}

pub fn apply_map(map: &Input, state: &Input, tol: &Tolerances) -> Result<Outcome> {
    let r = map.rmatrix().context("map")?;
    let w = state.weights(tol).context("state")?;
    if !is_separable(&r, tol)?.is_separable() {
        return Err(Unsupported("r-matrix is entangled, so it is not a separable map".into()).into());
    }
    let (out, weight) = map_action_bd(&r, &w)?;
    let text = format!(
        "output lambda: {}\nsuccess weight: {} (sum of r·lambda for the unit-sum r)\n",
        nums(out.as_array()),
        num(weight)
    );
    let json = json!({ "lambda": out.as_array(), "success_weight": weight });
    Ok(Outcome { text, json, code: EXIT_YES })
}

pub fn selfcheck(seed: u64, only: Option<&str>, tol: &Tolerances) -> Result<Outcome> {
    let registry = self_checks();
    let checks: Vec<_> = match only {
        Some(name) => vec![registry.get(name)?],
        None => registry.iter().collect(),
    };
    // Independent items run in parallel, each with its own seed.
    let results: Vec<_> = thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .enumerate()
            .map(|(k, c)| scope.spawn(move || c.run(seed.wrapping_add(k as u64), tol)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("self-check panicked")).collect()
    });
    let mut text = String::new();
    let mut items = Vec::new();
    let mut all = true;
    for (c, res) in checks.iter().zip(results) {
        let (passed, detail) = match res {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        writeln!(text, "{} {}: {detail}", if passed { "PASS" } else { "FAIL" }, c.name())?;
        items.push(json!({ "name": c.name(), "passed": passed, "detail": detail }));
    }
    let code = if all { EXIT_YES } else { EXIT_NO };
    Ok(Outcome { text, json: json!({ "passed": all, "items": items }), code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(0.7), "0.7");
        assert_eq!(num(4.000000000000001), "4");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(-1e-17), "0");
        assert_eq!(num(0.25), "0.25");
    }
}
