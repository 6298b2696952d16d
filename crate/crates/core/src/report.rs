//! Check reports and their JSON / CSV serialization.
//!
//! Output is byte-deterministic: keys keep insertion order and every float is
//! written with 17 significant digits.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::calculus::GridField;
use crate::error::{GeomError, Result};
use crate::surface::Domain;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldStat {
    pub name: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub argmax: (usize, usize),
    /// `None` for informational fields that do not enter the verdict.
    pub tol: Option<f64>,
    pub pass: bool,
}

impl FieldStat {
    /// Statistics of |value| over the available nodes.
    pub fn from_grid(name: &str, grid: &GridField<Option<f64>>, tol: Option<f64>) -> Result<Self> {
        let mut max_abs = f64::NEG_INFINITY;
        let mut argmax = (0, 0);
        let mut sum = 0.0;
        let mut count = 0usize;
        for i in 0..grid.nu {
            for j in 0..grid.nv {
                if let Some(x) = grid.get(i, j) {
                    let a = x.abs();
                    // NaN must fail loudly
                    if a > max_abs || a.is_nan() && !max_abs.is_nan() {
                        max_abs = a;
                        argmax = (i, j);
                    }
                    sum += a;
                    count += 1;
                }
            }
        }
        if count == 0 {
            return Err(GeomError::StencilUnavailable(format!(
                "no node of the {}x{} grid supports the stencil for '{name}'",
                grid.nu, grid.nv
            )));
        }
        let pass = match tol {
            Some(t) => max_abs <= t,
            None => true,
        };
        Ok(FieldStat {
            name: name.to_string(),
            max_abs,
            mean_abs: sum / count as f64,
            argmax,
            tol,
            pass,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Audit {
    pub s_fit: Option<f64>,
    pub c_t_fit: Option<f64>,
    /// Global sign σ in q ≈ σ·(reference form), resolved at the grid center.
    pub ar_sign: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub surface: String,
    pub params: Vec<(String, f64)>,
    pub grid: (usize, usize),
    pub richardson: bool,
    pub fields: Vec<FieldStat>,
    pub audit: Audit,
    pub metadata: Vec<(String, Value)>,
    /// Residual grids for CSV export, with the domain they live on.
    pub grids: Vec<(String, GridField<Option<f64>>)>,
    pub domain: Option<Domain>,
}

impl CheckReport {
    pub fn new(check: &str, surface: &str, params: Vec<(String, f64)>, grid: (usize, usize), richardson: bool) -> Self {
        CheckReport {
            check: check.to_string(),
            surface: surface.to_string(),
            params,
            grid,
            richardson,
            fields: Vec::new(),
            audit: Audit::default(),
            metadata: Vec::new(),
            grids: Vec::new(),
            domain: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.fields.iter().all(|f| f.pass)
    }

    pub fn field(&self, name: &str) -> Option<&FieldStat> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn meta(&self, key: &str) -> Option<&Value> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Add a field computed from a grid and keep the grid for CSV export.
    pub fn push_grid(&mut self, name: &str, grid: GridField<Option<f64>>, tol: Option<f64>) -> Result<()> {
        self.fields.push(FieldStat::from_grid(name, &grid, tol)?);
        self.grids.push((name.to_string(), grid));
        Ok(())
    }

    pub fn push_meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("check".into(), self.check.clone().into());
        top.insert("surface".into(), self.surface.clone().into());
        let mut params = Map::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), num(*v));
        }
        top.insert("params".into(), Value::Object(params));
        top.insert("grid".into(), Value::from(vec![self.grid.0, self.grid.1]));
        top.insert("richardson".into(), self.richardson.into());
        let fields = self
            .fields
            .iter()
            .map(|f| {
                let mut m = Map::new();
                m.insert("name".into(), f.name.clone().into());
                m.insert("max_abs".into(), num(f.max_abs));
                m.insert("mean_abs".into(), num(f.mean_abs));
                m.insert("argmax".into(), Value::from(vec![f.argmax.0, f.argmax.1]));
                m.insert("tol".into(), f.tol.map(num).unwrap_or(Value::Null));
                m.insert("pass".into(), f.pass.into());
                Value::Object(m)
            })
            .collect::<Vec<_>>();
        top.insert("fields".into(), Value::Array(fields));
        let mut audit = Map::new();
        let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
        audit.insert("s_fit".into(), opt(self.audit.s_fit));
        audit.insert("c_t_fit".into(), opt(self.audit.c_t_fit));
        audit.insert("ar_sign".into(), opt(self.audit.ar_sign));
        top.insert("audit".into(), Value::Object(audit));
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), v.clone());
        }
        top.insert("metadata".into(), Value::Object(meta));
        top.insert(
            "verdict".into(),
            if self.passed() { "pass" } else { "fail" }.into(),
        );
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }

    /// "u,v,value" rows for one stored grid (available nodes only).
    pub fn csv(&self, name: &str) -> Option<String> {
        let domain = self.domain?;
        let (_, grid) = self.grids.iter().find(|(n, _)| n == name)?;
        let mut out = String::from("u,v,value\n");
        for i in 0..grid.nu {
            for j in 0..grid.nv {
                if let Some(x) = grid.get(i, j) {
                    let (u, v) = domain.node(i, j);
                    let _ = writeln!(out, "{},{},{}", fmt_f64(u), fmt_f64(v), fmt_f64(*x));
                }
            }
        }
        Some(out)
    }

    /// One-line human summary: verdict and the worst failing field.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} {} [{}]",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.surface
        );
        for f in &self.fields {
            let _ = write!(
                s,
                " {}={:.3e}{}",
                f.name,
                f.max_abs,
                match f.tol {
                    Some(t) if !f.pass => format!("(>{t:.0e} at [{},{}])", f.argmax.0, f.argmax.1),
                    _ => String::new(),
                }
            );
        }
        s
    }
}

/// A float as a JSON value. Non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalise −0
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

/// Pretty JSON with deterministic float formatting.
pub fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.iter().all(|x| !x.is_object() && !x.is_array()) {
                out.push('[');
                for (k, x) in a.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, level);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, x) in a.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                if k + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, x)) in m.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, level + 1);
                if k + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Boundary;

    fn grid() -> GridField<Option<f64>> {
        GridField::from_fn(3, 3, Boundary::InteriorOnly, |i, j| {
            (i == 1).then_some(j as f64 - 1.5)
        })
    }

    #[test]
    fn statistics_and_verdict() {
        let f = FieldStat::from_grid("r", &grid(), Some(1.0)).unwrap();
        assert_eq!(f.max_abs, 1.5);
        assert_eq!(f.argmax, (1, 0));
        assert!((f.mean_abs - (1.5 + 0.5 + 0.5) / 3.0).abs() < 1e-15);
        assert!(!f.pass);
        let empty = GridField::from_fn(2, 2, Boundary::InteriorOnly, |_, _| None);
        assert!(FieldStat::from_grid("e", &empty, None).is_err());
    }

    #[test]
    fn json_is_parseable_and_uses_seventeen_digits() {
        let mut r = CheckReport::new("duality", "horosphere", vec![("d".into(), 0.1)], (64, 64), true);
        r.push_grid("D", grid(), Some(2.0)).unwrap();
        r.push_meta("H", 1.0);
        r.audit.ar_sign = Some(-1.0);
        let s = r.to_json();
        assert!(s.contains("\"d\": 1.0000000000000001e-1"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["verdict"], "pass");
        assert_eq!(back["fields"][0]["argmax"], serde_json::json!([1, 0]));
        assert_eq!(back["audit"]["s_fit"], Value::Null);
        assert_eq!(r.to_json(), s);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut r = CheckReport::new("x", "y", vec![], (3, 3), false);
        r.push_grid("g", grid(), None).unwrap();
        r.domain = Some(Domain {
            u: (0.0, 1.0),
            v: (0.0, 1.0),
            periodic_u: false,
            periodic_v: false,
            nu: 3,
            nv: 3,
        });
        let csv = r.csv("g").unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "u,v,value");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("5.0000000000000000e-1,0.0000000000000000e0,"));
    }
}
