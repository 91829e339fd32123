use std::io::Write;

use anyhow::Result;
use num_rational::Rational64;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

/// Checks above this fail the run with exit code 2.
pub const PO_FAIL_TOL: f64 = 1e-8;

/// Floats are reported with 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn ser_sig12<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(sig12(*x))
}

fn ser_opt_sig12<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&sig12(*v)),
        None => s.serialize_none(),
    }
}

pub fn ratio(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalSearch {
    pub mode: String,
    pub value: String,
    pub strategy: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumValue {
    pub method: String,
    #[serde(serialize_with = "ser_sig12")]
    pub value: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub margin_over_pnc: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bell {
    #[serde(serialize_with = "ser_sig12")]
    pub expectation: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub success: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub two_bit_success: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoCheck {
    pub context: String,
    #[serde(serialize_with = "ser_sig12")]
    pub max_violation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Interferometer {
    /// Input assigned to each of the eight settings, in setting order.
    pub assignment: Vec<String>,
    #[serde(serialize_with = "ser_sig12")]
    pub min_fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameReport {
    pub n: usize,
    pub g: usize,
    pub pnc_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_search: Option<ClassicalSearch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumValue>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_sig12")]
    pub delta_trace: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ontic_trace_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bell: Option<Bell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interferometer: Option<Interferometer>,
    pub po_checks: Vec<PoCheck>,
    pub provenance: Map<String, Value>,
    pub timings: Map<String, Value>,
}

impl GameReport {
    pub fn new(n: usize, g: usize, pnc: Rational64) -> Self {
        let mut provenance = Map::new();
        provenance.insert("pnc_bound".into(), "analytic".into());
        Self {
            n,
            g,
            pnc_bound: ratio(pnc),
            classical_search: None,
            quantum: None,
            delta_trace: None,
            ontic_trace_bound: None,
            bell: None,
            interferometer: None,
            po_checks: Vec::new(),
            provenance,
            timings: Map::new(),
        }
    }

    pub fn tag(&mut self, key: &str, tag: impl Into<String>) {
        self.provenance.insert(key.into(), Value::String(tag.into()));
    }

    pub fn time(&mut self, key: &str, secs: f64) {
        self.timings.insert(format!("{key}_ms"), Value::from(sig12(secs * 1e3)));
    }

    pub fn check(&mut self, context: impl Into<String>, max_violation: f64) {
        self.po_checks.push(PoCheck { context: context.into(), max_violation });
    }

    pub fn po_failed(&self) -> bool {
        self.po_checks.iter().any(|c| c.max_violation.is_nan() || c.max_violation > PO_FAIL_TOL)
    }

    pub fn csv_row(&self) -> TableRow {
        let pnc = self.pnc_bound.clone();
        match &self.quantum {
            Some(q) => TableRow {
                n: self.n,
                g: self.g,
                pnc_bound: pnc,
                quantum_value: Some(q.value),
                margin: Some(q.margin_over_pnc),
                method: q.method.clone(),
                provenance: self
                    .provenance
                    .get("quantum")
                    .and_then(Value::as_str)
                    .unwrap_or("")
                    .to_string(),
            },
            None => TableRow {
                n: self.n,
                g: self.g,
                pnc_bound: pnc,
                quantum_value: None,
                margin: None,
                method: String::new(),
                provenance: String::new(),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub n: usize,
    pub g: usize,
    pub pnc_bound: String,
    pub quantum_value: Option<f64>,
    pub margin: Option<f64>,
    pub method: String,
    pub provenance: String,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| sig12(v).to_string()).unwrap_or_default()
}

pub fn write_csv(rows: &[TableRow], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "n,g,pnc_bound,quantum_value,margin,method,provenance")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.g,
            r.pnc_bound,
            opt(r.quantum_value),
            opt(r.margin),
            csv_field(&r.method),
            csv_field(&r.provenance)
        )?;
    }
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(0.926_776_695_296_636_9), 0.926776695297);
        assert_eq!(sig12(54.627_416_997_969_52), 54.627416998);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(3.3e-16), 3.3e-16);
    }

    #[test]
    fn ratios_keep_denominator() {
        assert_eq!(ratio(Rational64::new(5, 6)), "5/6");
        assert_eq!(ratio(Rational64::from_integer(1)), "1/1");
    }

    #[test]
    fn nan_violation_fails() {
        let mut r = GameReport::new(2, 2, Rational64::new(3, 4));
        r.check("x", f64::NAN);
        assert!(r.po_failed());
    }

    #[test]
    fn csv_quotes_commas() {
        let row = TableRow {
            n: 4,
            g: 3,
            pnc_bound: "3/4".into(),
            quantum_value: Some(0.85),
            margin: Some(0.1),
            method: "seesaw".into(),
            provenance: "seesaw(7, 50)".into(),
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with("4,3,3/4,0.85,0.1,seesaw,\"seesaw(7, 50)\"\n"), "{text}");
    }
}
