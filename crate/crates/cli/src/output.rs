//! Renderers for results; all output is exact.

use std::fmt::Write as _;

use dowling_kl::algebra::TQPoly;
use dowling_kl::klengine::{grid_json, PZResult, Provenance};
use serde_json::{json, Value};

/// `P` to report: scaled by `t -> t/q^2` when requested.
pub struct PzView<'a> {
    pub result: &'a PZResult,
    pub p: TQPoly,
    pub scaled: bool,
}

impl PzView<'_> {
    pub fn json(&self) -> Value {
        let mut v = self.result.to_json();
        v["P"] = grid_json(&self.p);
        if self.scaled {
            v["scaled"] = json!(true);
        }
        v
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("poly,t_power,q_power,coeff\n");
        for (name, poly) in [("P", &self.p), ("Z", &self.result.z)] {
            for (i, c) in poly.coeffs().iter().enumerate() {
                for (k, a) in c.coeffs().iter().enumerate() {
                    let _ = writeln!(out, "{name},{i},{k},{a}");
                }
            }
        }
        out
    }

    pub fn latex(&self) -> String {
        let lhs = if self.scaled { "P(t/q^{2})" } else { "P(t)" };
        let group = match &self.result.provenance {
            Provenance::Symbolic => String::new(),
            Provenance::Generic(spec) => format!("% {spec}\n"),
        };
        format!(
            "{group}{lhs} = {}\nZ(t) = {}\n",
            self.p.to_latex_expanded(),
            self.result.z.to_latex_expanded()
        )
    }
}

/// The table of `P` for `n = 1..`, in the factored `cases` layout.
pub fn table_latex(rows: &[(usize, TQPoly)]) -> String {
    let mut out = String::from("\\begin{cases}\n");
    for (idx, (n, p)) in rows.iter().enumerate() {
        let end = if idx + 1 == rows.len() { "." } else { ", \\\\" };
        let _ = writeln!(out, "{} & n = {n}{end}", p.to_latex_factored());
    }
    out.push_str("\\end{cases}\n");
    out
}

pub fn table_csv(rows: &[(usize, TQPoly)]) -> String {
    let mut out = String::from("n,t_power,q_power,coeff\n");
    for (n, p) in rows {
        for (i, c) in p.coeffs().iter().enumerate() {
            for (k, a) in c.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{n},{i},{k},{a}");
            }
        }
    }
    out
}

pub fn table_json(rows: &[(usize, TQPoly)], scaled: bool) -> Value {
    Value::Array(
        rows.iter()
            .map(|(n, p)| json!({"n": n, "q": "symbolic", "scaled": scaled, "P": grid_json(p)}))
            .collect(),
    )
}
