//! JSON and text rendering of verification reports, classification records
//! and the classification table.
//!
//! Residuals are written in scientific notation with 15 significant digits,
//! other numbers are rounded to 15 significant digits, so output is stable
//! across runs and platforms.

use std::fmt::Write as _;

use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::models::{
    alpha_for_invariant, family_for_invariant, verify_model, Family, ModelSpec, Report,
    Tolerances,
};
use crate::triple::{classify_base, standard_constant, BaseSpace, StructureKind};

/// `1.23456789012345e-10` as a JSON number.
pub fn residual_value(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let s = format!("{v:.14e}");
    Value::Number(serde_json::from_str::<Number>(&s).expect("formatted float is valid JSON"))
}

/// `v` rounded to 15 significant digits.
pub fn round15(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

pub fn number_value(v: f64) -> Value {
    Number::from_f64(round15(v)).map_or(Value::Null, Value::Number)
}

fn opt_number(v: Option<f64>) -> Value {
    v.map_or(Value::Null, number_value)
}

fn base_value(b: BaseSpace, n: usize) -> Value {
    json!({
        "label": b.label(n),
        "type": b.type_tag(),
    })
}

pub fn report_json(r: &Report) -> Value {
    let mut residuals = Map::new();
    for c in &r.checks {
        residuals.insert(c.name.to_string(), residual_value(c.value));
    }
    let n = r.spec.n;
    json!({
        "spec": {
            "family": r.spec.family.cli_name(),
            "model": r.spec.family.model_label(n),
            "n": n,
            "alpha": number_value(r.spec.alpha),
        },
        "sasakian": r.sasakian,
        "residuals": residuals,
        "kappa": opt_number(r.kappa),
        "mu": opt_number(r.mu),
        "lambda": opt_number(r.lambda),
        "boeckx": opt_number(r.boeckx),
        "boeckx_closed_form": opt_number(r.boeckx_closed_form),
        "base": r.base.map_or(Value::Null, |b| base_value(b, n)),
        "standard_structure": r.standard_structure.as_ref().map_or(Value::Null, |s| json!({
            "kind": s.kind.name(),
            "a": number_value(s.a),
        })),
        "failures": r.failures(),
        "errors": r.errors,
        "pass": r.pass(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{}", round15(x)))
}

pub fn report_text(r: &Report) -> String {
    let n = r.spec.n;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} n={} alpha={}  [{}]",
        r.spec.family.model_label(n),
        n,
        round15(r.spec.alpha),
        if r.pass() { "PASS" } else { "FAIL" }
    );
    if r.sasakian {
        let _ = writeln!(s, "  sasakian (h = 0), boeckx invariant undefined");
    }
    let _ = writeln!(
        s,
        "  kappa={} mu={} lambda={} boeckx={} closed_form={}",
        fmt_opt(r.kappa),
        fmt_opt(r.mu),
        fmt_opt(r.lambda),
        fmt_opt(r.boeckx),
        fmt_opt(r.boeckx_closed_form)
    );
    if let Some(b) = r.base {
        let _ = writeln!(s, "  base {} ({})", b.label(n), b.type_tag());
    }
    if let Some(st) = &r.standard_structure {
        let _ = writeln!(s, "  standard {} structure, a={}", st.kind.name(), round15(st.a));
    }
    for c in &r.checks {
        let rel = match c.bound {
            crate::models::Bound::AtMost => "<=",
            crate::models::Bound::Above => ">",
        };
        let _ = writeln!(
            s,
            "  {:<4} {:<28} {:.3e} {rel} {:.0e}",
            if c.passed() { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    for e in &r.errors {
        let _ = writeln!(s, "  error {e}");
    }
    s
}

/// Everything the classification says about one invariant value.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub invariant: f64,
    pub n: usize,
    pub family: Family,
    pub base: BaseSpace,
    pub alpha: f64,
    pub kind: StructureKind,
    pub a: f64,
}

pub fn classify(invariant: f64, n: usize) -> Result<Classification> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be at least 1, got {n}")));
    }
    let base = classify_base(invariant)?;
    let family = family_for_invariant(invariant)?;
    let alpha = alpha_for_invariant(family, invariant)?;
    let (kind, a) = standard_constant(invariant)?;
    Ok(Classification {
        invariant,
        n,
        family,
        base,
        alpha,
        kind,
        a,
    })
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({
            "invariant": number_value(self.invariant),
            "n": self.n,
            "family": self.family.cli_name(),
            "model": self.family.model_label(self.n),
            "base": self.base.label(self.n),
            "type": self.base.type_tag(),
            "alpha": number_value(self.alpha),
            "standard_structure": {
                "kind": self.kind.name(),
                "a": number_value(self.a),
            },
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "I = {}\n  model  {}\n  base   {}\n  type   {}\n  alpha  {}\n  {} structure, a = {}\n",
            round15(self.invariant),
            self.family.model_label(self.n),
            self.base.label(self.n),
            self.base.type_tag(),
            round15(self.alpha),
            self.kind.name(),
            round15(self.a)
        )
    }
}

pub const DEFAULT_TABLE_INVARIANTS: [f64; 7] = [-5.0, -1.5, -0.5, 0.0, 0.5, 1.5, 5.0];

/// One grid value of the table: either excluded or a verified model run.
#[derive(Debug, Clone, PartialEq)]
pub enum TableEntry {
    Excluded { invariant: f64 },
    Model { classification: Classification, report: Report },
}

impl TableEntry {
    pub fn invariant(&self) -> f64 {
        match self {
            Self::Excluded { invariant } => *invariant,
            Self::Model { classification, .. } => classification.invariant,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationTable {
    pub n: usize,
    pub entries: Vec<TableEntry>,
}

pub fn classification_table(
    invariants: &[f64],
    n: usize,
    tol: &Tolerances,
    seed: u64,
) -> Result<ClassificationTable> {
    if invariants.is_empty() {
        return Err(Error::InvalidParameter("empty invariant grid".into()));
    }
    let mut entries = Vec::with_capacity(invariants.len());
    for &i in invariants {
        match classify(i, n) {
            Ok(c) => {
                let report = verify_model(ModelSpec::new(c.family, n, c.alpha)?, tol, seed)?;
                entries.push(TableEntry::Model {
                    classification: c,
                    report,
                });
            }
            Err(Error::BoundaryInvariant) => entries.push(TableEntry::Excluded { invariant: i }),
            Err(e) => return Err(e),
        }
    }
    Ok(ClassificationTable { n, entries })
}

const ROW_ORDER: [BaseSpace; 3] = [
    BaseSpace::ComplexificationOfSphere,
    BaseSpace::ParaComplexificationOfSphere,
    BaseSpace::ComplexificationOfHyperbolic,
];

impl ClassificationTable {
    /// Rows with at least one grid value, in table order.
    pub fn rows(&self) -> Vec<(BaseSpace, Vec<(&Classification, &Report)>)> {
        ROW_ORDER
            .into_iter()
            .map(|b| {
                let hits = self
                    .entries
                    .iter()
                    .filter_map(|e| match e {
                        TableEntry::Model {
                            classification,
                            report,
                        } if classification.base == b => Some((classification, report)),
                        _ => None,
                    })
                    .collect::<Vec<_>>();
                (b, hits)
            })
            .filter(|(_, hits)| !hits.is_empty())
            .collect()
    }

    pub fn all_verified(&self) -> bool {
        self.entries.iter().all(|e| match e {
            TableEntry::Excluded { .. } => true,
            TableEntry::Model { report, .. } => report.pass(),
        })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows()
            .into_iter()
            .map(|(b, hits)| {
                json!({
                    "range": b.invariant_range(),
                    "model": b.symbolic_model_label(),
                    "base": b.symbolic_label(),
                    "type": b.type_tag(),
                    "instances": hits.iter().map(|(c, r)| json!({
                        "invariant": number_value(c.invariant),
                        "family": c.family.cli_name(),
                        "alpha": number_value(c.alpha),
                        "boeckx": opt_number(r.boeckx),
                        "base": c.base.label(self.n),
                        "pass": r.pass(),
                    })).collect::<Vec<_>>(),
                    "verified": hits.iter().all(|(_, r)| r.pass()),
                })
            })
            .collect();
        let excluded: Vec<Value> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                TableEntry::Excluded { invariant } => Some(json!({
                    "invariant": number_value(*invariant),
                    "status": "excluded (|I| = 1)",
                })),
                _ => None,
            })
            .collect();
        json!({
            "n": self.n,
            "rows": rows,
            "excluded": excluded,
            "pass": self.all_verified(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:<18} {:<28} {:<30} verified at (n = {})",
            "invariant", "model", "base", "type", self.n
        );
        for (b, hits) in self.rows() {
            let list = hits
                .iter()
                .map(|(c, r)| {
                    format!(
                        "{}{}",
                        round15(c.invariant),
                        if r.pass() { "" } else { " (FAIL)" }
                    )
                })
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                s,
                "{:<12} {:<18} {:<28} {:<30} {}",
                b.invariant_range(),
                b.symbolic_model_label(),
                b.symbolic_label(),
                b.type_tag(),
                list
            );
        }
        for e in &self.entries {
            if let TableEntry::Excluded { invariant } = e {
                let _ = writeln!(s, "{:<12} excluded (|I| = 1)", round15(*invariant));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_formatting() {
        assert_eq!(residual_value(1.5e-10).to_string(), "1.50000000000000e-10");
        assert_eq!(residual_value(0.0).to_string(), "0.00000000000000e+0");
        assert_eq!(residual_value(f64::NAN), Value::Null);
    }

    #[test]
    fn rounding() {
        assert_eq!(round15(5.0 / 3.0), 1.66666666666667);
        assert_eq!(number_value(0.5).to_string(), "0.5");
    }

    #[test]
    fn classify_records() {
        let c = classify(2.0, 3).unwrap();
        assert_eq!(c.family.model_label(3), "SO(5)/SO(3)");
        assert_eq!(c.base.label(3), "SO(5)/(SO(3)×SO(2))");
        assert!((c.alpha - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((c.a - 3.0f64.sqrt()).abs() < 1e-12);
        let c = classify(0.0, 2).unwrap();
        assert_eq!(c.base, BaseSpace::ParaComplexificationOfSphere);
        assert_eq!(c.a, 1.0);
        let c = classify(-3.0, 2).unwrap();
        assert_eq!(c.family.model_label(2), "SO(2,2)/SO(2)");
        assert_eq!(c.base.label(2), "SO(2,2)/(SO(2)×SO(2))");
        assert_eq!(classify(1.0, 2), Err(Error::BoundaryInvariant));
    }

    #[test]
    fn table_marks_boundary() {
        let t = classification_table(&[1.0, 2.0], 1, &Tolerances::default(), 1).unwrap();
        assert_eq!(t.rows().len(), 1);
        assert!(t.to_text().contains("excluded (|I| = 1)"));
        assert!(t.all_verified());
        assert!(classification_table(&[], 1, &Tolerances::default(), 1).is_err());
    }
}
