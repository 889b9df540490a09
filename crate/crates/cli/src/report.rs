//! Report schema `formap-report/1`, rendered as JSON or text.

use std::fmt::Write;

use serde::Serialize;

use formap::loops::LoopReport;
use formap::series::SeriesRecord;
use formap::wick::TableRecord;

pub const SCHEMA: &str = "formap-report/1";

#[derive(Serialize, Debug)]
pub struct ModelSummary {
    pub p: usize,
    pub c: Vec<Vec<String>>,
    pub potential: String,
}

#[derive(Serialize, Debug)]
pub struct CensusLine {
    pub l: usize,
    pub genus: i64,
    pub automorphisms: u64,
    pub weight: String,
}

/// `F^(g)` from one route, in the convention `F^(g) = −Σ_l t^{l+2−2g} F_{l,g}`.
#[derive(Serialize, Debug)]
pub struct GenusSeries {
    pub route: String,
    pub genus: u32,
    pub series: String,
    pub record: SeriesRecord,
}

#[derive(Serialize, Debug)]
pub struct CoefficientMismatch {
    pub power: i64,
    pub left: String,
    pub right: String,
}

#[derive(Serialize, Debug)]
pub struct Comparison {
    pub genus: u32,
    pub left: String,
    pub right: String,
    /// Powers `t^from .. t^to` inclusive.
    pub from: i64,
    pub to: i64,
    pub passed: bool,
    pub first_mismatch: Option<CoefficientMismatch>,
}

#[derive(Serialize, Debug)]
pub struct BudgetUsage {
    pub pairings_swept: u64,
    pub pairing_budget: u64,
    pub max_order: i64,
}

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub model: ModelSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub census: Vec<CensusLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub free_energies: Vec<GenusSeries>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<LoopReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub crosscheck: Vec<Comparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub budget: BudgetUsage,
    pub passed: bool,
    /// Wall time; not part of golden comparisons.
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, model: ModelSummary, budget: BudgetUsage) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            model,
            table: None,
            census: Vec::new(),
            free_energies: Vec::new(),
            loops: Vec::new(),
            crosscheck: Vec::new(),
            notes: Vec::new(),
            budget,
            passed: true,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let rows: Vec<String> = self.model.c.iter().map(|r| format!("[{}]", r.join(", "))).collect();
        let _ = writeln!(s, "{} ({})", self.command, self.schema);
        let _ = writeln!(s, "model: p = {}, C = [{}], V = {}", self.model.p, rows.join(", "), self.model.potential);
        if let Some(t) = &self.table {
            for e in &t.entries {
                let _ = writeln!(s, "F[{},{}] = {}", e.l, e.g, e.value);
            }
        }
        for c in &self.census {
            let _ = writeln!(s, "l = {} genus {}: {} / {}", c.l, c.genus, c.weight, c.automorphisms);
        }
        for f in &self.free_energies {
            let _ = writeln!(s, "{} F^({}) = {}", f.route, f.genus, f.series);
        }
        for r in &self.loops {
            let g: Vec<String> = r.word.iter().map(u8::to_string).collect();
            let verdict = if r.passed { "pass" } else { "FAIL" };
            let _ = writeln!(s, "loop k = {} G = [{}] through t^{}: {verdict}", r.color, g.join(","), r.order);
            if let Some(m) = r.mismatches.first() {
                let _ = writeln!(s, "  first mismatch at t^{} N^{}: {} vs {}", m.t_power, m.n_power, m.lhs, m.rhs);
            }
        }
        for c in &self.crosscheck {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(s, "g = {}: {} vs {} on t^{}..t^{}: {verdict}", c.genus, c.left, c.right, c.from, c.to);
            if let Some(m) = &c.first_mismatch {
                let _ = writeln!(s, "  first mismatch at t^{}: {} vs {}", m.power, m.left, m.right);
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(
            s,
            "budget: {} pairings swept of {}, max order {}",
            self.budget.pairings_swept, self.budget.pairing_budget, self.budget.max_order
        );
        let _ = writeln!(s, "status: {}", if self.passed { "pass" } else { "FAIL" });
        let _ = writeln!(s, "elapsed: {} ms", self.elapsed_ms);
        s
    }
}
