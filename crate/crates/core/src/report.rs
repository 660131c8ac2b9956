//! Check records and deterministic report serialization.

use serde::Serialize;

/// One `lhs <= rhs` comparison, with `rhs = constant * base`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub pass: bool,
    /// Names the inequality or identity the constant comes from.
    pub tag: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckRecord {
    /// `lhs <= constant * base` up to a relative slack of `1e-10`.
    pub fn le(check: &str, lhs: f64, constant: f64, base: f64, tag: &str) -> Self {
        let rhs = constant * base;
        CheckRecord {
            check: check.to_string(),
            lhs,
            rhs,
            constant,
            pass: lhs <= rhs * (1.0 + 1e-10) + 1e-10,
            tag: tag.to_string(),
            detail: String::new(),
        }
    }

    /// `|lhs - rhs| <= tol`.
    pub fn close(check: &str, lhs: f64, rhs: f64, tol: f64, tag: &str) -> Self {
        CheckRecord {
            check: check.to_string(),
            lhs,
            rhs,
            constant: tol,
            pass: (lhs - rhs).abs() <= tol,
            tag: tag.to_string(),
            detail: String::new(),
        }
    }

    /// An error measurement `lhs <= tol`.
    pub fn small(check: &str, err: f64, tol: f64, tag: &str) -> Self {
        CheckRecord {
            check: check.to_string(),
            lhs: err,
            rhs: tol,
            constant: tol,
            pass: err <= tol,
            tag: tag.to_string(),
            detail: String::new(),
        }
    }

    pub fn flag(check: &str, pass: bool, tag: &str, detail: impl Into<String>) -> Self {
        CheckRecord {
            check: check.to_string(),
            lhs: f64::from(u8::from(!pass)),
            rhs: 0.0,
            constant: 0.0,
            pass,
            tag: tag.to_string(),
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Output of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: Option<u64>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn new(seed: Option<u64>, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        VerifyReport {
            seed,
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,lhs,rhs,constant,pass,tag,detail\n");
        for c in &self.checks {
            out.push_str(&csv_row(&[
                c.check.clone(),
                fmt_f64(c.lhs),
                fmt_f64(c.rhs),
                fmt_f64(c.constant),
                c.pass.to_string(),
                c.tag.clone(),
                c.detail.clone(),
            ]));
        }
        out
    }
}

/// Shortest round-trip representation, as serde_json writes it.
pub fn fmt_f64(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

/// Joins fields with commas, quoting any that contain a comma, quote or newline.
pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_row(&["a".into(), "b,c".into(), "d\"e".into()]), "a,\"b,c\",\"d\"\"e\"\n");
    }

    #[test]
    fn counts() {
        let r = VerifyReport::new(
            Some(1),
            vec![CheckRecord::le("x", 1.0, 2.0, 1.0, "t"), CheckRecord::le("y", 3.0, 1.0, 1.0, "t")],
        );
        assert_eq!((r.passed, r.failed), (1, 1));
        assert!(r.to_json().contains("\"tag\": \"t\""));
    }
}
