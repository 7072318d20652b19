//! Human-readable tables and JSON-lines records.
//!
//! Decimal values in tables are printed exactly as the JSON output prints
//! them, so the two renderings never disagree.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use bellgraph::loss::LossReport;
use bellgraph::mixture::MixtureAnalysis;
use bellgraph::sweep::{SizeRow, Tolerance};
use bellgraph::verify::VerifyReport;
use bellgraph::{Quad, VertexSet};

pub const SCHEMA_VERSION: u32 = 1;

/// One JSON line: `schema_version` and `kind` followed by the fields of `value`.
pub fn json_line<T: Serialize>(kind: &str, value: &T) -> String {
    let mut obj = Map::new();
    obj.insert("schema_version".into(), SCHEMA_VERSION.into());
    obj.insert("kind".into(), kind.into());
    match serde_json::to_value(value).expect("report types serialize") {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("value".into(), other);
        }
    }
    let mut line = Value::Object(obj).to_string();
    line.push('\n');
    line
}

/// Decimal rendering shared with the JSON output.
pub fn decimal(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

pub fn quad(q: &Quad) -> String {
    format!("{q} ({})", decimal(q.to_f64()))
}

fn opt_quad(q: Option<&Quad>) -> String {
    q.map(quad).unwrap_or_else(|| "undefined".into())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_set(s: Option<&VertexSet>) -> String {
    s.map(ToString::to_string).unwrap_or_else(|| "-".into())
}

pub fn loss_report_table(r: &LossReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graph {}  N={}  n_max={}  loss={}  induced N'={} n_max'={}",
        r.graph,
        r.n,
        r.n_max,
        r.loss.vertices(),
        r.induced_n,
        r.induced_n_max
    );
    let _ = writeln!(
        out,
        "bounds  classical {}  induced classical {}  quantum {}",
        quad(&r.bound_full),
        opt_quad(r.bound_induced.as_ref()),
        quad(&r.quantum_bound)
    );
    let _ = writeln!(
        out,
        "{:>5}  {:<34} {:>4} {:>4}  {:<4} {:<12} {:<7}",
        "root", "expectation", "|W|", "|T|", "hit", "violates G", "violates G'"
    );
    for rec in &r.records {
        let induced = if rec.root_of_induced {
            yes_no(rec.violates_induced).to_string()
        } else {
            format!("{} (not a root of G')", yes_no(rec.violates_induced))
        };
        let _ = writeln!(
            out,
            "{:>5}  {:<34} {:>4} {:>4}  {:<4} {:<12} {}",
            rec.root,
            quad(&rec.expectation),
            rec.w_size,
            rec.t_size,
            yes_no(rec.root_hit),
            yes_no(rec.violates_full),
            induced
        );
    }
    if r.root_lost {
        let _ = writeln!(out, "note: a root of G is lost; no root can violate either bound");
    }
    if r.no_admissible_root {
        let _ = writeln!(
            out,
            "note: every root of G is lost; no admissible root for the full-graph operator"
        );
    }
    out
}

pub fn sweep_table(rows: &[SizeRow], tol: &Tolerance, semantics: &str, bound: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4} {:>9}  {:>13} {:>13}  {:<30} {:<30} first failing (G')",
        "|L|", "subsets", "violating G", "violating G'", "max best-root value", "min best-root value"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>4} {:>9}  {:>13} {:>13}  {:<30} {:<30} {}",
            row.size,
            row.subsets,
            row.full.violating,
            row.induced.violating,
            opt_quad(row.max_expectation.as_ref()),
            opt_quad(row.min_expectation.as_ref()),
            opt_set(row.induced.first_failing.as_ref()),
        );
    }
    let _ = writeln!(
        out,
        "tolerance ({semantics}, {bound} bound): k = {}  witness {}",
        tol.k,
        opt_set(tol.witness.as_ref())
    );
    out
}

pub fn critical_table(sets: &[VertexSet], bound: &str, max_size: usize) -> String {
    let mut out = format!(
        "minimal critical sets ({bound} bound, size <= {max_size}): {}\n",
        sets.len()
    );
    for s in sets {
        let _ = writeln!(out, "  {s}");
    }
    out
}

pub fn verify_table(rep: &VerifyReport) -> String {
    let mut out = format!("graphs {}  loss sets {}\n", rep.graphs, rep.loss_sets);
    let _ = writeln!(out, "{:<20} {:>9} {:>7}  max deviation", "check", "checked", "failed");
    for (name, s) in rep.categories() {
        if s.checked == 0 {
            continue;
        }
        let _ = writeln!(
            out,
            "{:<20} {:>9} {:>7}  {:.3e}",
            name, s.checked, s.failed, s.max_deviation
        );
    }
    for f in &rep.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    let _ = writeln!(
        out,
        "{}: {} identities, max deviation {:.3e}",
        if rep.passed() { "PASS" } else { "FAIL" },
        rep.total_checked(),
        rep.max_deviation()
    );
    out
}

pub fn mixture_table(a: &MixtureAnalysis, header: &str) -> String {
    let mut out = format!("{header}\n");
    let _ = writeln!(
        out,
        "bounds  full {}  induced {}  quantum full {}  quantum induced {}",
        quad(&a.bound_full),
        quad(&a.bound_induced),
        quad(&a.quantum_full),
        quad(&a.quantum_induced)
    );
    let _ = writeln!(
        out,
        "{:>8}  {:<40} {:<40} {:<40} induced margin",
        "p", "full operator", "induced operator", "full margin"
    );
    for s in &a.samples {
        let _ = writeln!(
            out,
            "{:>8}  {:<40} {:<40} {:<40} {}",
            s.p.to_string(),
            quad(&s.full),
            quad(&s.induced),
            quad(&s.margin_full),
            quad(&s.margin_induced)
        );
    }
    match (&a.crossover, &a.equal_margin_p) {
        (Some(p), _) => {
            let _ = writeln!(out, "crossover: margins equal at p = {}", quad(p));
        }
        (None, Some(p)) => {
            let _ = writeln!(out, "crossover: none in [0, 1]; margins equal at p = {}", quad(p));
        }
        (None, None) => {
            let _ = writeln!(out, "crossover: none; margins are parallel");
        }
    }
    let _ = writeln!(
        out,
        "full margin first exceeds induced at p = {}",
        a.first_full_ahead
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_else(|| "never on this grid".into())
    );
    out
}
