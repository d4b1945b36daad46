//! Report bodies produced by scenario requests, with deterministic
//! CSV and JSON rendering.
//!
//! Atom tables are emitted in the fixed lexicographic atom enumeration,
//! and every floating-point cell in the CSV renderer is printed with 17
//! significant digits, so identical inputs produce identical bytes.

use serde_json::{json, Value};

/// One rendered request.
#[derive(Debug, Clone)]
pub struct Report {
    pub index: usize,
    pub kind: &'static str,
    pub body: ReportBody,
}

#[derive(Debug, Clone)]
pub enum ReportBody {
    /// Atom table: per-coordinate outcome values plus the weight.
    Table {
        state: String,
        columns: Vec<String>,
        rows: Vec<(Vec<f64>, f64)>,
    },
    Event {
        state: String,
        constraints: Vec<(String, Vec<f64>)>,
        value: f64,
    },
    Moment {
        state: String,
        observables: Vec<String>,
        value: f64,
    },
    Chsh {
        state: String,
        correlators: Vec<(String, String, f64)>,
        s: f64,
    },
    Negativity {
        state: String,
        observables: Vec<String>,
        min_weight: f64,
        negative_atoms: Vec<(Vec<f64>, f64)>,
        total_variation: f64,
        is_classical: bool,
    },
    Audit { checks: Vec<AuditCheck> },
}

/// Outcome of one consistency check.
#[derive(Debug, Clone)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
}

impl ReportBody {
    pub fn audit_passed(&self) -> Option<&[AuditCheck]> {
        match self {
            ReportBody::Audit { checks } => Some(checks),
            _ => None,
        }
    }
}

/// 17 significant digits; enough to reproduce any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut value = match &self.body {
            ReportBody::Table {
                state,
                columns,
                rows,
            } => json!({
                "state": state,
                "columns": columns,
                "rows": rows
                    .iter()
                    .map(|(outcome, weight)| json!({"outcome": outcome, "weight": weight}))
                    .collect::<Vec<_>>(),
            }),
            ReportBody::Event {
                state,
                constraints,
                value,
            } => json!({
                "state": state,
                "constraints": constraints
                    .iter()
                    .map(|(name, values)| json!({"observable": name, "values": values}))
                    .collect::<Vec<_>>(),
                "value": value,
            }),
            ReportBody::Moment {
                state,
                observables,
                value,
            } => json!({
                "state": state,
                "observables": observables,
                "value": value,
            }),
            ReportBody::Chsh {
                state,
                correlators,
                s,
            } => json!({
                "state": state,
                "correlators": correlators
                    .iter()
                    .map(|(a, b, e)| json!({"a": a, "b": b, "value": e}))
                    .collect::<Vec<_>>(),
                "s": s,
            }),
            ReportBody::Negativity {
                state,
                observables,
                min_weight,
                negative_atoms,
                total_variation,
                is_classical,
            } => json!({
                "state": state,
                "observables": observables,
                "min_weight": min_weight,
                "negative_atoms": negative_atoms
                    .iter()
                    .map(|(outcome, weight)| json!({"outcome": outcome, "weight": weight}))
                    .collect::<Vec<_>>(),
                "total_variation": total_variation,
                "is_classical": is_classical,
            }),
            ReportBody::Audit { checks } => json!({
                "checks": checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "deviation": c.deviation}))
                    .collect::<Vec<_>>(),
                "passed": checks.iter().all(|c| c.passed),
            }),
        };
        if let Value::Object(map) = &mut value {
            let mut wrapped = serde_json::Map::new();
            wrapped.insert("request".into(), json!(self.index));
            wrapped.insert("kind".into(), json!(self.kind));
            wrapped.append(map);
            return Value::Object(wrapped);
        }
        value
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.body {
            ReportBody::Table {
                columns, rows, ..
            } => {
                out.push_str(&columns.join(","));
                out.push_str(",weight\n");
                for (outcome, weight) in rows {
                    for v in outcome {
                        out.push_str(&fmt_float(*v));
                        out.push(',');
                    }
                    out.push_str(&fmt_float(*weight));
                    out.push('\n');
                }
            }
            ReportBody::Event { value, .. } => {
                out.push_str("value\n");
                out.push_str(&fmt_float(*value));
                out.push('\n');
            }
            ReportBody::Moment { value, .. } => {
                out.push_str("value\n");
                out.push_str(&fmt_float(*value));
                out.push('\n');
            }
            ReportBody::Chsh { correlators, s, .. } => {
                out.push_str("a,b,value\n");
                for (a, b, e) in correlators {
                    out.push_str(&format!("{a},{b},{}\n", fmt_float(*e)));
                }
                out.push_str("s,,\n");
                out.push_str(&fmt_float(*s));
                out.push('\n');
            }
            ReportBody::Negativity {
                min_weight,
                negative_atoms,
                total_variation,
                is_classical,
                ..
            } => {
                out.push_str("key,value\n");
                out.push_str(&format!("min_weight,{}\n", fmt_float(*min_weight)));
                out.push_str(&format!(
                    "total_variation,{}\n",
                    fmt_float(*total_variation)
                ));
                out.push_str(&format!("is_classical,{is_classical}\n"));
                out.push_str(&format!("negative_atom_count,{}\n", negative_atoms.len()));
                for (outcome, weight) in negative_atoms {
                    let cells: Vec<String> = outcome.iter().map(|v| fmt_float(*v)).collect();
                    out.push_str(&format!(
                        "negative_atom,{}:{}\n",
                        cells.join(";"),
                        fmt_float(*weight)
                    ));
                }
            }
            ReportBody::Audit { checks } => {
                out.push_str("check,passed,deviation\n");
                for c in checks {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        c.name,
                        c.passed,
                        fmt_float(c.deviation)
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_17_digits() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(-0.25), "-2.5000000000000000e-1");
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn table_csv_layout() {
        let report = Report {
            index: 0,
            kind: "table",
            body: ReportBody::Table {
                state: "up".into(),
                columns: vec!["sz".into(), "sx".into()],
                rows: vec![(vec![-1.0, -1.0], 0.0), (vec![1.0, 1.0], 0.5)],
            },
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("sz,sx,weight"));
        assert_eq!(
            lines.next(),
            Some("-1.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0")
        );
    }

    #[test]
    fn json_keys_keep_order() {
        let report = Report {
            index: 2,
            kind: "moment",
            body: ReportBody::Moment {
                state: "up".into(),
                observables: vec!["sz".into()],
                value: 1.0,
            },
        };
        let text = serde_json::to_string(&report.to_json()).unwrap();
        assert!(text.starts_with("{\"request\":2,\"kind\":\"moment\""));
    }
}
