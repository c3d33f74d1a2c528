//! Structured reports for every command: a versioned JSON document and a text rendering
//! of the same tree. Coefficients are exact rational strings; counts, arities and degrees
//! are JSON integers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebras::{check_axioms, cohomology_algebra, DgAlgebra, Species};
use crate::enveloping::{alt_chain_map_check, pbw_eta, quillen_check, summand_retraction, Envelope};
use crate::error::{Error, Result};
use crate::formality::{
    cochain_terms, compare_com_vs_ass, compare_lie_vs_ass, obstruction_sequence, EnvelopeVerdict, Terminal,
};
use crate::graded::GradedSpace;
use crate::homotopy::{check_morphism, check_relations, minimal_model, PInfinity};
use crate::linalg::Vector;
use crate::opcohomology::{barr_splitting, CochainContext};
use crate::scalar::fmt_q;

pub const SCHEMA: &str = "formality-report/1";

/// Default last arity of `harrison-split`; arity-5 slices take minutes in exact arithmetic.
pub const HARRISON_SPLIT_DEFAULT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Cohomology,
    Transfer,
    Obstructions,
    Envelope,
    Alt,
    HarrisonSplit,
    CompareComAss,
    CompareLieAss,
    Certify,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Check,
        Command::Cohomology,
        Command::Transfer,
        Command::Obstructions,
        Command::Envelope,
        Command::Alt,
        Command::HarrisonSplit,
        Command::CompareComAss,
        Command::CompareLieAss,
        Command::Certify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Cohomology => "cohomology",
            Command::Transfer => "transfer",
            Command::Obstructions => "obstructions",
            Command::Envelope => "envelope",
            Command::Alt => "alt",
            Command::HarrisonSplit => "harrison-split",
            Command::CompareComAss => "compare-com-ass",
            Command::CompareLieAss => "compare-lie-ass",
            Command::Certify => "certify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    pub arity_bound: usize,
    pub weight_bound: usize,
    /// Last obstruction stage; defaults to the arity bound.
    pub stage: Option<usize>,
    /// Drives the basis-permutation recheck of verdicts.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { arity_bound: 5, weight_bound: 4, stage: None, seed: 0 }
    }
}

impl Options {
    fn stage(&self) -> usize {
        self.stage.unwrap_or(self.arity_bound)
    }
}

fn terms(v: &Vector, space: &GradedSpace) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([space.name(i), fmt_q(c)])).collect())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn require(alg: &DgAlgebra, species: &[Species], cmd: Command) -> Result<()> {
    if !species.contains(&alg.species) {
        let names: Vec<&str> = species.iter().map(|s| s.keyword()).collect();
        return Err(Error::input(format!("{} needs species {}", cmd.name(), names.join(" or "))));
    }
    let axioms = check_axioms(alg);
    if !axioms.pass {
        return Err(Error::input(format!("{} fails the {} axioms", alg.name, alg.species)));
    }
    Ok(())
}

/// The verdict of `cmd` on a seeded reordering of the basis.
fn permutation_recheck(cmd: Command, alg: &DgAlgebra, opts: &Options, verdict: &Value) -> Result<Value> {
    let mut order: Vec<usize> = (0..alg.dim()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
    let permuted = alg.permuted(&order);
    let again = verdict_of(cmd, &permuted, opts)?;
    if again != *verdict {
        return Err(Error::internal(format!("verdict changed under the basis order {order:?}")));
    }
    Ok(json!({
        "seed": opts.seed,
        "order": order.iter().map(|&i| alg.space.name(i)).collect::<Vec<_>>(),
        "same_verdict": true,
    }))
}

fn verdict_of(cmd: Command, alg: &DgAlgebra, opts: &Options) -> Result<Value> {
    Ok(match cmd {
        Command::Obstructions | Command::Certify => {
            let s = minimal_model(alg, opts.stage())?.minimal;
            to_value(&obstruction_sequence(&s, opts.stage())?.terminal)
        }
        Command::CompareComAss => {
            let r = compare_com_vs_ass(alg, opts.stage())?;
            json!({ "harrison": to_value(&r.harrison), "hochschild": to_value(&r.hochschild) })
        }
        Command::CompareLieAss => {
            let r = compare_lie_vs_ass(alg, opts.stage(), opts.weight_bound)?;
            json!({ "lie": to_value(&r.lie.terminal), "envelope": to_value(&r.envelope), "agreement": r.agreement })
        }
        _ => Value::Null,
    })
}

/// Runs one command and returns the `result` part of the report.
pub fn run(cmd: Command, alg: &DgAlgebra, opts: &Options) -> Result<Value> {
    match cmd {
        Command::Check => {
            let axioms = check_axioms(alg);
            Ok(json!({ "pass": axioms.pass, "axioms": to_value(&axioms) }))
        }
        Command::Cohomology => {
            require(alg, &[Species::Ass, Species::Com, Species::Lie], cmd)?;
            let ca = cohomology_algebra(alg)?;
            let h = &ca.algebra;
            let classes: Vec<Value> = (0..h.dim())
                .map(|i| {
                    json!({
                        "class": h.space.name(i),
                        "degree": h.space.degree(i),
                        "representative": terms(&ca.contraction.g.cols[i], &alg.space),
                    })
                })
                .collect();
            let products: Vec<Value> = h
                .products()
                .map(|(&(a, b), v)| json!({ "left": h.space.name(a), "right": h.space.name(b), "value": terms(v, &h.space) }))
                .collect();
            let dims: Vec<Value> = h.space.dims_by_degree().into_iter().map(|(d, n)| json!({ "degree": d, "dim": n })).collect();
            Ok(json!({ "dims": dims, "classes": classes, "products": products }))
        }
        Command::Transfer => {
            require(alg, &[Species::Ass, Species::Com, Species::Lie], cmd)?;
            let n = opts.arity_bound;
            let t = minimal_model(alg, n)?;
            let s = &t.minimal;
            let ops: Vec<Value> = (2..=n)
                .map(|k| json!({ "arity": k, "terms": to_value(&cochain_terms(&s.op(k), &s.space, &s.space)) }))
                .collect();
            let relations = check_relations(s, n);
            let morphism = check_morphism(&t.morphism, n);
            if !relations.pass || !morphism.pass {
                return Err(Error::internal("the transferred structure fails its relations"));
            }
            Ok(json!({
                "cohomology": s.space.names(),
                "degrees": s.space.degrees(),
                "operations": ops,
                "relations": to_value(&relations),
                "morphism": to_value(&morphism),
            }))
        }
        Command::Obstructions | Command::Certify => {
            require(alg, &[Species::Ass, Species::Com, Species::Lie], cmd)?;
            let s = minimal_model(alg, opts.stage())?.minimal;
            let r = obstruction_sequence(&s, opts.stage())?;
            let verdict = to_value(&r.terminal);
            let recheck = permutation_recheck(cmd, alg, opts, &verdict)?;
            let mut out = Map::new();
            out.insert("verdict".into(), verdict);
            if cmd == Command::Certify {
                out.insert("certified".into(), json!(r.terminal == Terminal::CertifiedFormal));
                out.insert("certificate".into(), to_value(&r.certificate));
                out.insert("stages".into(), json!(r.entries.iter().map(|e| json!({ "k": e.k, "vanishes": e.vanishes })).collect::<Vec<_>>()));
            } else {
                out.insert("sequence".into(), to_value(&r));
            }
            out.insert("permutation_recheck".into(), recheck);
            Ok(Value::Object(out))
        }
        Command::Envelope => {
            require(alg, &[Species::Lie], cmd)?;
            let w = opts.weight_bound;
            let quillen = quillen_check(alg, w)?;
            let env = Envelope::new(alg, w)?;
            let checked = w.saturating_sub(1);
            let eta = pbw_eta(&env, checked).is_ok();
            let retraction = summand_retraction(&env, checked).is_ok();
            if !(quillen.dims_match && quillen.isomorphism && quillen.multiplicative && eta && retraction) {
                return Err(Error::internal("an envelope check failed"));
            }
            Ok(json!({
                "envelope_dim": env.dim(),
                "quillen": to_value(&quillen),
                "eta_checked_to_weight": checked,
                "retraction_checked_to_weight": checked,
            }))
        }
        Command::Alt => {
            require(alg, &[Species::Lie], cmd)?;
            let h = cohomology_algebra(alg)?.algebra;
            let checks = (1..=3).map(|n| alt_chain_map_check(&h, n, 2)).collect::<Result<Vec<_>>>()?;
            if checks.iter().any(|c| !c.pass) {
                return Err(Error::internal("Alt is not a chain map"));
            }
            Ok(json!({ "lie": h.name, "checks": to_value(&checks) }))
        }
        Command::HarrisonSplit => {
            require(alg, &[Species::Com], cmd)?;
            let h = cohomology_algebra(alg)?.algebra;
            let ctx = CochainContext::hochschild(&PInfinity::from_algebra(&h, 2))?;
            let mut slices = Vec::new();
            for n in 1..=opts.stage.unwrap_or(opts.arity_bound.min(HARRISON_SPLIT_DEFAULT)) {
                for q in ctx.degrees(n) {
                    let b = barr_splitting(&ctx, n, q)?;
                    if !(b.kernel_matches && b.direct_sum) {
                        return Err(Error::internal(format!("Barr splitting fails at arity {n}, bar degree {q}")));
                    }
                    slices.push(b);
                }
            }
            Ok(json!({ "slices": to_value(&slices) }))
        }
        Command::CompareComAss => {
            require(alg, &[Species::Com], cmd)?;
            let r = compare_com_vs_ass(alg, opts.stage())?;
            let verdict = verdict_of(cmd, alg, opts)?;
            let recheck = permutation_recheck(cmd, alg, opts, &verdict)?;
            Ok(json!({ "agreement": r.harrison == r.hochschild, "report": to_value(&r), "permutation_recheck": recheck }))
        }
        Command::CompareLieAss => {
            require(alg, &[Species::Lie], cmd)?;
            let r = compare_lie_vs_ass(alg, opts.stage(), opts.weight_bound)?;
            let verdict = json!({ "lie": to_value(&r.lie.terminal), "envelope": to_value(&r.envelope), "agreement": r.agreement });
            let recheck = permutation_recheck(cmd, alg, opts, &verdict)?;
            let partial = matches!(r.envelope, EnvelopeVerdict::Partial { .. });
            Ok(json!({ "partial": partial, "report": to_value(&r), "permutation_recheck": recheck }))
        }
    }
}

/// The full report document for one run, successful or not.
pub fn report(cmd: Command, alg: &DgAlgebra, opts: &Options) -> (Value, Option<Error>) {
    let mut doc = header(cmd, opts);
    doc.insert(
        "algebra".into(),
        json!({ "name": alg.name, "species": alg.species.keyword(), "dim": alg.dim() }),
    );
    match run(cmd, alg, opts) {
        Ok(result) => {
            doc.insert("status".into(), json!("ok"));
            doc.insert("result".into(), result);
            (Value::Object(doc), None)
        }
        Err(e) => {
            doc.insert("status".into(), json!("error"));
            doc.insert("error".into(), error_value(&e));
            (Value::Object(doc), Some(e))
        }
    }
}

/// Report for a run that failed before an algebra was available (unreadable or malformed file).
pub fn error_report(cmd: Command, opts: &Options, e: &Error) -> Value {
    let mut doc = header(cmd, opts);
    doc.insert("status".into(), json!("error"));
    doc.insert("error".into(), error_value(e));
    Value::Object(doc)
}

fn header(cmd: Command, opts: &Options) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("tool".into(), json!({ "name": "formality", "version": env!("CARGO_PKG_VERSION") }));
    doc.insert("command".into(), json!(cmd.name()));
    doc.insert("parameters".into(), to_value(opts));
    doc
}

fn error_value(e: &Error) -> Value {
    let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::Syntax { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

/// Exit code for a finished run: 0, 2 for input problems, 3 for internal invariant violations.
pub fn exit_code(e: Option<&Error>) -> i32 {
    match e {
        None => 0,
        Some(Error::Internal(_)) => 3,
        Some(_) => 2,
    }
}

pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Indented `key: value` rendering of the report tree.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    text_node(doc, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|y| y.iter().all(|z| !z.is_object() && !z.is_array()))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text_node(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_node(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_node(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
