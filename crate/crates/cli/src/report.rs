//! JSON and plain-text rendering of results. Big integers are decimal
//! strings and slopes are exact fractions, so the output never depends on
//! floating point.

use num_bigint::BigInt;
use serde_json::{json, Value};
use wzeta::checkers::{CheckReport, Verdict};
use wzeta::padic::format_rational;
use wzeta::upoly;

/// A finished command: the report plus the verdict, if the command has one.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: String,
    pub report: CheckReport,
    pub verdict: Option<Verdict>,
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

/// The stable JSON form of an outcome.
pub fn emit_report(o: &Outcome) -> String {
    let r = &o.report;
    let zeta = match &r.zeta {
        Some(z) => json!({ "num": ints(&z.num), "den": ints(&z.den) }),
        None => Value::Null,
    };
    let slopes: Vec<Value> = r
        .slopes
        .iter()
        .map(|s| json!({ "part": s.part, "lambda": format_rational(&s.lambda), "factor_mod_pM": ints(&s.factor) }))
        .collect();
    let residues: Vec<Value> = r
        .residues
        .iter()
        .map(|x| {
            json!({
                "label": x.label,
                "r": x.r,
                "difference": x.difference.to_string(),
                "modulus": x.modulus.to_string(),
                "residue": x.residue.to_string(),
            })
        })
        .collect();
    let inputs: serde_json::Map<String, Value> =
        r.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let v = json!({
        "command": o.command,
        "check": if o.command == "check" { Value::String(r.name.clone()) } else { Value::Null },
        "q": r.q.to_string(),
        "inputs": inputs,
        "counts": ints(&r.counts),
        "zeta": zeta,
        "slopes": slopes,
        "precision": r.precision,
        "residues": residues,
        "verdict": o.verdict.map(|v| v.as_str()),
        "assertions": r.assertions.iter().map(|a| json!({ "name": a.name, "holds": a.holds, "detail": a.detail })).collect::<Vec<_>>(),
        "assumptions": r.assumptions,
        "cross_checks": r.cross_checks.iter().map(|c| json!({ "name": c.name, "agree": c.agree, "detail": c.detail })).collect::<Vec<_>>(),
        "notes": r.notes,
        "inconclusive": r.inconclusive,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

/// A short human-readable summary.
pub fn summary(o: &Outcome) -> String {
    let r = &o.report;
    let mut out = Vec::new();
    let title = if o.command == "check" { format!("check {}", r.name) } else { o.command.clone() };
    out.push(format!("{title} over F_{}", r.q));
    for (k, v) in &r.inputs {
        out.push(format!("  {k}: {v}"));
    }
    if !r.counts.is_empty() {
        out.push(format!("  counts: {}", r.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")));
    }
    if let Some(z) = &r.zeta {
        out.push(format!("  zeta: ({}) / ({})", upoly::format(&z.num), upoly::format(&z.den)));
    }
    for s in &r.slopes {
        out.push(format!("  slope {} ({}): {}", format_rational(&s.lambda), s.part, upoly::format(&s.factor)));
    }
    for a in &r.assertions {
        out.push(format!("  [{}] {}", if a.holds { "holds" } else { "FAILS" }, a.name));
    }
    for c in &r.cross_checks {
        out.push(format!("  [{}] {}", if c.agree { "agree" } else { "DISAGREE" }, c.name));
    }
    for n in r.notes.iter().chain(&r.inconclusive) {
        out.push(format!("  note: {n}"));
    }
    for a in &r.assumptions {
        out.push(format!("  assumes: {a}"));
    }
    if let Some(v) = o.verdict {
        out.push(format!("verdict: {}", v.as_str()));
    }
    out.join("\n") + "\n"
}
