//! One checked inequality instance, and its JSON-lines / CSV encodings.

use std::cmp::Ordering;
use std::fmt::Write as _;

/// A parameter value attached to a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Num(f64),
    Text(String),
}

impl ParamValue {
    fn rank(&self) -> u8 {
        match self {
            ParamValue::Int(_) | ParamValue::Num(_) => 0,
            ParamValue::Text(_) => 1,
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Num(x) => Some(*x),
            ParamValue::Text(_) => None,
        }
    }

    pub fn total_cmp(&self, other: &ParamValue) -> Ordering {
        match (self.as_f64(), other.as_f64()) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            _ => match (self, other) {
                (ParamValue::Text(a), ParamValue::Text(b)) => a.cmp(b),
                _ => self.rank().cmp(&other.rank()),
            },
        }
    }

    fn json(&self) -> String {
        match self {
            ParamValue::Int(i) => i.to_string(),
            ParamValue::Num(x) => json_float(*x),
            ParamValue::Text(s) => json_str(s),
        }
    }

    fn plain(&self) -> String {
        match self {
            ParamValue::Int(i) => i.to_string(),
            ParamValue::Num(x) => float_17(*x),
            ParamValue::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Num(x)
    }
}

impl From<usize> for ParamValue {
    fn from(x: usize) -> Self {
        ParamValue::Int(x as i64)
    }
}

impl From<u32> for ParamValue {
    fn from(x: u32) -> Self {
        ParamValue::Int(x as i64)
    }
}

impl From<u64> for ParamValue {
    fn from(x: u64) -> Self {
        ParamValue::Int(x as i64)
    }
}

impl From<&str> for ParamValue {
    fn from(x: &str) -> Self {
        ParamValue::Text(x.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(x: String) -> Self {
        ParamValue::Text(x)
    }
}

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Free-constant comparison: only the ratio is meaningful.
    ReportOnly,
    /// One side is infinite.
    Diverged,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ReportOnly => "report-only",
            Verdict::Diverged => "diverged",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub params: Vec<(String, ParamValue)>,
    pub lhs: f64,
    pub rhs: f64,
    /// Explicit constant of the inequality, `None` when it is free.
    pub constant: Option<f64>,
    /// `rhs - lhs`.
    pub margin: f64,
    /// `lhs / rhs`, with `0/0 = 0`.
    pub ratio: f64,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub notes: String,
}

fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

impl CheckReport {
    /// A known-constant comparison `lhs <= rhs` accepted when
    /// `lhs <= rhs + rel_tol * |rhs|`.
    pub fn bound(check: &str, lhs: f64, rhs: f64, constant: f64, rel_tol: f64) -> Self {
        let verdict = if lhs.is_infinite() || rhs.is_infinite() {
            if rhs.is_infinite() && lhs.is_finite() {
                Verdict::Pass
            } else {
                Verdict::Diverged
            }
        } else if lhs - rhs <= rel_tol * rhs.abs() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            check: check.to_string(),
            params: Vec::new(),
            lhs,
            rhs,
            constant: Some(constant),
            margin: rhs - lhs,
            ratio: ratio_of(lhs, rhs),
            verdict,
            seed: None,
            notes: String::new(),
        }
    }

    /// A free-constant comparison; only the ratio is reported.
    pub fn ratio_only(check: &str, lhs: f64, rhs: f64) -> Self {
        let verdict = if lhs.is_infinite() || rhs.is_infinite() {
            Verdict::Diverged
        } else {
            Verdict::ReportOnly
        };
        CheckReport {
            check: check.to_string(),
            params: Vec::new(),
            lhs,
            rhs,
            constant: None,
            margin: rhs - lhs,
            ratio: ratio_of(lhs, rhs),
            verdict,
            seed: None,
            notes: String::new(),
        }
    }

    /// A report for an instance where one side cannot be evaluated.
    pub fn diverged(check: &str, diagnosis: impl Into<String>) -> Self {
        CheckReport {
            check: check.to_string(),
            params: Vec::new(),
            lhs: f64::NAN,
            rhs: f64::INFINITY,
            constant: None,
            margin: f64::NAN,
            ratio: f64::NAN,
            verdict: Verdict::Diverged,
            seed: None,
            notes: diagnosis.into(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Order by check name, then by the parameter tuple.
    pub fn sort_key_cmp(&self, other: &CheckReport) -> Ordering {
        self.check.cmp(&other.check).then_with(|| {
            for ((ka, va), (kb, vb)) in self.params.iter().zip(&other.params) {
                let o = ka.cmp(kb).then_with(|| va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.params
                .len()
                .cmp(&other.params.len())
                .then_with(|| self.seed.cmp(&other.seed))
                .then_with(|| self.notes.cmp(&other.notes))
        })
    }

    /// One JSON object, keys in fixed order.
    pub fn to_json_line(&self) -> String {
        let mut s = String::from("{");
        let _ = write!(s, "\"check\":{}", json_str(&self.check));
        s.push_str(",\"params\":{");
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}:{}", json_str(k), v.json());
        }
        s.push('}');
        let _ = write!(s, ",\"lhs\":{}", json_float(self.lhs));
        let _ = write!(s, ",\"rhs\":{}", json_float(self.rhs));
        match self.constant {
            Some(c) => {
                let _ = write!(s, ",\"constant\":{}", json_float(c));
            }
            None => s.push_str(",\"constant\":\"free\""),
        }
        let _ = write!(s, ",\"margin\":{}", json_float(self.margin));
        let _ = write!(s, ",\"ratio\":{}", json_float(self.ratio));
        let _ = write!(s, ",\"verdict\":{}", json_str(self.verdict.as_str()));
        match self.seed {
            Some(seed) => {
                let _ = write!(s, ",\"seed\":{seed}");
            }
            None => s.push_str(",\"seed\":null"),
        }
        let _ = write!(s, ",\"notes\":{}", json_str(&self.notes));
        s.push('}');
        s
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "check", "params", "lhs", "rhs", "constant", "margin", "ratio", "verdict", "seed", "notes",
    ];

    pub fn csv_record(&self) -> [String; 10] {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", v.plain()))
            .collect::<Vec<_>>()
            .join(";");
        [
            self.check.clone(),
            params,
            float_17(self.lhs),
            float_17(self.rhs),
            self.constant.map_or_else(|| "free".to_string(), float_17),
            float_17(self.margin),
            float_17(self.ratio),
            self.verdict.as_str().to_string(),
            self.seed.map_or_else(String::new, |s| s.to_string()),
            self.notes.clone(),
        ]
    }
}

/// 17 significant digits; `inf`, `-inf`, `nan` spelled out.
pub fn float_17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn json_float(x: f64) -> String {
    if x.is_finite() {
        float_17(x)
    } else {
        json_str(&float_17(x))
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Serialize reports as JSON lines.
pub fn write_jsonl<W: std::io::Write>(mut w: W, reports: &[CheckReport]) -> std::io::Result<()> {
    for r in reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Serialize reports as CSV with a header row.
pub fn write_csv<W: std::io::Write>(w: W, reports: &[CheckReport]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CheckReport::CSV_HEADER)?;
    for r in reports {
        out.write_record(r.csv_record())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_verdicts() {
        assert!(CheckReport::bound("x", 1.0, 2.0, 1.0, 0.0).passed());
        assert!(CheckReport::bound("x", 2.0, 2.0, 1.0, 0.0).passed());
        assert_eq!(CheckReport::bound("x", 2.0 + 1e-9, 2.0, 1.0, 1e-12).verdict, Verdict::Fail);
        assert!(CheckReport::bound("x", 0.0, 0.0, 1.0, 0.0).passed());
        assert!(CheckReport::bound("x", 1.0, f64::INFINITY, 1.0, 0.0).passed());
        assert_eq!(CheckReport::ratio_only("x", 0.0, 0.0).ratio, 0.0);
    }

    #[test]
    fn json_line_layout() {
        let r = CheckReport::bound("demo", 0.5, 1.0, 1.0, 0.0)
            .param("q", 4.0)
            .param("n", 3usize)
            .param("system", "walsh")
            .with_seed(7)
            .note("a \"quoted\" note");
        let line = r.to_json_line();
        assert_eq!(
            line,
            "{\"check\":\"demo\",\"params\":{\"q\":4.0000000000000000e0,\"n\":3,\"system\":\"walsh\"},\
             \"lhs\":5.0000000000000000e-1,\"rhs\":1.0000000000000000e0,\"constant\":1.0000000000000000e0,\
             \"margin\":5.0000000000000000e-1,\"ratio\":5.0000000000000000e-1,\"verdict\":\"pass\",\
             \"seed\":7,\"notes\":\"a \\\"quoted\\\" note\"}"
        );
        let parsed: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed["params"]["n"], 3);
        let inf = CheckReport::ratio_only("d", f64::INFINITY, 1.0).to_json_line();
        assert!(serde_json::from_str::<serde_json::Value>(&inf).is_ok());
    }

    #[test]
    fn csv_quotes_fields() {
        let r = CheckReport::ratio_only("c", 1.0, 2.0).note("x, y");
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check,params,lhs"));
        assert!(text.contains("\"x, y\""));
    }

    #[test]
    fn ordering_is_numeric_in_params() {
        let a = CheckReport::ratio_only("c", 1.0, 1.0).param("n", 2usize);
        let b = CheckReport::ratio_only("c", 1.0, 1.0).param("n", 10usize);
        assert_eq!(a.sort_key_cmp(&b), Ordering::Less);
    }
}
