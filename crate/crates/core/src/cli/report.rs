use std::io::Write;

use serde::Serialize;

use crate::units::ParamsProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Counts towards the exit status.
    Check,
    /// Compares against a known misprint; informational only.
    Erratum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value <= bound`; NaN never passes.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Check,
            value,
            bound,
            pass: value <= bound,
            detail: None,
        }
    }

    /// Whether a printed form holds, as `value <= bound`.
    pub fn erratum(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            kind: CheckKind::Erratum,
            ..Self::at_most(name, value, bound)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Machine-readable suite outcome. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: ParamsProfile,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl Report {
    pub fn new(suite: &str, params: ParamsProfile, checks: Vec<Check>) -> Self {
        let all_passed = checks
            .iter()
            .filter(|c| c.kind == CheckKind::Check)
            .all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            params,
            checks,
            all_passed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Check && !c.pass)
    }

    pub fn write_summary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let counted = self
            .checks
            .iter()
            .filter(|c| c.kind == CheckKind::Check)
            .count();
        let failed = self.failures().count();
        writeln!(
            w,
            "{}: {}/{} checks passed",
            self.suite,
            counted - failed,
            counted
        )?;
        for c in self.failures() {
            writeln!(
                w,
                "  FAIL {} value={:e} bound={:e}",
                c.name, c.value, c.bound
            )?;
        }
        for c in self.checks.iter().filter(|c| c.kind == CheckKind::Erratum) {
            let verdict = if c.pass { "holds" } else { "does not hold" };
            writeln!(
                w,
                "  erratum {}: printed form {verdict} (mismatch {:e})",
                c.name, c.value
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order_and_errata() {
        let checks = vec![
            Check::at_most("a", 1e-13, 1e-12),
            Check::erratum("b", 2.0, 1e-10),
            Check::at_most("c", f64::NAN, 1.0),
        ];
        let r = Report::new("demo", ParamsProfile::default(), checks);
        assert!(!r.all_passed);
        assert_eq!(r.failures().count(), 1);
        let json = r.to_json();
        let keys: Vec<usize> = ["\"suite\"", "\"params\"", "\"checks\"", "\"all_passed\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"kind\": \"erratum\""));
        assert!(json.contains("\"value\": null"));
    }

    #[test]
    fn errata_do_not_fail() {
        let r = Report::new(
            "demo",
            ParamsProfile::default(),
            vec![Check::erratum("b", 2.0, 1e-10)],
        );
        assert!(r.all_passed);
    }
}
