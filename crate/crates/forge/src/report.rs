//! Verification reports and their JSON and CSV forms.

use std::io::Write;

use anyhow::Result;
use forge_core::AbelianInvariants;
use serde::Serialize;

use crate::catalog::Basis;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub basis: Basis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Orders {
    pub xp: Option<usize>,
    pub nu: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<usize>,
    pub w: Option<usize>,
    pub r: Option<usize>,
    pub delta: Option<usize>,
    pub tensor: Option<usize>,
}

/// The Schur multiplier by each route that was computed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct H2Routes {
    pub w_over_r: Option<Vec<u64>>,
    pub ker_mu: Option<Vec<u64>>,
    pub bar: Option<Vec<u64>>,
    pub expected: Option<Vec<u64>>,
    pub expected_basis: Option<Basis>,
}

pub fn factors(a: &AbelianInvariants) -> Vec<u64> {
    a.factors().to_vec()
}

#[derive(Clone, Debug, Serialize)]
pub struct Observation {
    pub name: String,
    pub value: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub p: Option<u64>,
    pub order: Option<usize>,
    pub status: Status,
    pub orders: Orders,
    pub h2: H2Routes,
    pub checks: Vec<CheckResult>,
    pub observations: Vec<Observation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl EntryReport {
    pub fn new(name: &str) -> Self {
        EntryReport {
            name: name.to_string(),
            p: None,
            order: None,
            status: Status::Pass,
            orders: Orders::default(),
            h2: H2Routes::default(),
            checks: Vec::new(),
            observations: Vec::new(),
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, basis: Basis) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            basis,
            detail: None,
        });
    }

    pub fn check_with(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        basis: Basis,
        detail: String,
    ) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            basis,
            detail: Some(detail),
        });
    }

    pub fn observe(&mut self, name: impl Into<String>, value: impl Serialize) {
        self.observations.push(Observation {
            name: name.into(),
            value: serde_json::to_value(value).expect("observation serializes"),
        });
    }

    pub fn finish(&mut self) {
        self.status = if self.error.is_some() {
            Status::Error
        } else if self.checks.iter().all(|c| c.passed) {
            Status::Pass
        } else {
            Status::Fail
        };
    }

    pub fn find(&self, check: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == check)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub status: Status,
    pub entries: Vec<EntryReport>,
}

impl VerificationReport {
    /// Entries are sorted by name.
    pub fn new(suite: &str, mut entries: Vec<EntryReport>) -> Self {
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        let status = if entries.iter().any(|e| e.status == Status::Error) {
            Status::Error
        } else if entries.iter().any(|e| e.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite: suite.to_string(),
            status,
            entries,
        }
    }

    /// 0 pass, 1 check failure, 2 resource or input error.
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn entry(&self, name: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One summary row per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "name",
            "p",
            "order",
            "status",
            "xp",
            "nu",
            "L",
            "D",
            "W",
            "R",
            "delta",
            "tensor",
            "h2_w_over_r",
            "h2_ker_mu",
            "h2_bar",
            "checks",
            "failed",
        ])?;
        let num = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let inv = |v: &Option<Vec<u64>>| {
            v.as_ref()
                .map(|f| {
                    let parts: Vec<String> = f.iter().map(u64::to_string).collect();
                    format!("[{}]", parts.join(" "))
                })
                .unwrap_or_default()
        };
        for e in &self.entries {
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Error => "error",
            };
            w.write_record([
                e.name.clone(),
                e.p.map(|p| p.to_string()).unwrap_or_default(),
                num(e.order),
                status.to_string(),
                num(e.orders.xp),
                num(e.orders.nu),
                num(e.orders.l),
                num(e.orders.d),
                num(e.orders.w),
                num(e.orders.r),
                num(e.orders.delta),
                num(e.orders.tensor),
                inv(&e.h2.w_over_r),
                inv(&e.h2.ker_mu),
                inv(&e.h2.bar),
                e.checks.len().to_string(),
                e.failed_checks().join(";"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
