//! Rendering helpers. Every command builds one `Report` carrying both the
//! text and JSON forms; numbers are always exact strings like `9/2`, never
//! floats, so output is identical across platforms.

use clap::ValueEnum;
use serde_json::{json, Value};

use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::Polyhedron;
use scg_core::scg::{CutCertificate, Strengthened};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// One command's output in both formats.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => format!("{:#}\n", self.json),
        }
    }
}

pub fn rat_str(r: &Rational) -> String {
    rat::fmt_rat(r)
}

/// `(a, b, c)` tuples for text output.
pub fn int_tuple(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(Int::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn rat_tuple(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rat::fmt_rat).collect();
    format!("({})", parts.join(", "))
}

pub fn json_rat(r: &Rational) -> Value {
    Value::String(rat::fmt_rat(r))
}

pub fn json_int_vec(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn json_rat_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat::fmt_rat(x))).collect())
}

/// Canonical H-rep rows as text lines `a₁ … aₙ <= b`, sorted and with
/// primitive integral coefficients.
pub fn hrep_lines(p: &Polyhedron) -> Vec<String> {
    let canon = p.canonicalized();
    canon
        .rows()
        .iter()
        .map(|row| {
            let coeffs: Vec<String> = row
                .coeffs
                .iter()
                .map(|c| c.to_integer().to_string())
                .collect();
            format!("{} {} {}", coeffs.join(" "), row.rel.as_str(), rat::fmt_rat(&row.rhs))
        })
        .collect()
}

pub fn json_hrep(p: &Polyhedron) -> Value {
    let canon = p.canonicalized();
    Value::Array(
        canon
            .rows()
            .iter()
            .map(|row| {
                json!({
                    "coeffs": row.coeffs.iter().map(|c| c.to_integer().to_string()).collect::<Vec<_>>(),
                    "rel": row.rel.as_str(),
                    "rhs": rat::fmt_rat(&row.rhs),
                })
            })
            .collect(),
    )
}

/// One certificate as a text line: normal, β, strengthened side, witness,
/// multipliers.
pub fn certificate_line(cert: &CutCertificate) -> String {
    let alpha = int_tuple(&cert.cut.alpha);
    let beta = rat_str(&cert.cut.beta);
    let lambda = rat_tuple(&cert.lambda);
    match &cert.cut.strengthened {
        Strengthened::Finite { value, witness } => format!(
            "alpha={alpha} beta={beta} strengthened={value} witness={} lambda={lambda}",
            int_tuple(witness)
        ),
        Strengthened::EmptySide => {
            format!("alpha={alpha} beta={beta} strengthened=empty_side lambda={lambda}")
        }
    }
}

pub fn json_certificate(cert: &CutCertificate) -> Value {
    let mut obj = json!({
        "alpha": json_int_vec(&cert.cut.alpha),
        "beta": rat_str(&cert.cut.beta),
        "lambda": json_rat_vec(&cert.lambda),
    });
    let map = obj.as_object_mut().expect("object");
    match &cert.cut.strengthened {
        Strengthened::Finite { value, witness } => {
            map.insert("strengthened".into(), Value::String(value.to_string()));
            map.insert("witness".into(), json_int_vec(witness));
        }
        Strengthened::EmptySide => {
            map.insert("strengthened".into(), Value::String("empty_side".into()));
        }
    }
    obj
}
