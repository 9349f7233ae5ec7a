//! Serializable verification results.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundKind, BoundValue};
use crate::instance::InstanceFile;

/// JSON has no infinities or NaN: write them as `null`, read `null` back
/// as NaN.
mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// One evaluated bound at one circle point (and one `λ`, where relevant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub instance_id: usize,
    pub kind: BoundKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
    #[serde(with = "nullable")]
    pub theta: f64,
    #[serde(with = "nullable")]
    pub lhs: f64,
    #[serde(with = "nullable")]
    pub rhs: f64,
    #[serde(with = "nullable")]
    pub margin: f64,
    pub pass: bool,
}

impl Record {
    pub fn new(instance_id: usize, v: &BoundValue<f64>, theta: f64, lambda: Option<[f64; 2]>) -> Self {
        Self {
            instance_id,
            kind: v.kind,
            lambda,
            theta,
            lhs: v.lhs,
            rhs: v.rhs,
            margin: v.margin,
            pass: v.pass,
        }
    }

    pub fn relative_margin(&self) -> f64 {
        self.margin / 1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: BoundKind,
    pub records: usize,
    pub failures: usize,
    #[serde(with = "nullable")]
    pub min_margin: f64,
    #[serde(with = "nullable")]
    pub min_relative_margin: f64,
    #[serde(with = "nullable")]
    pub mean_margin: f64,
    /// `(instance_id, theta)` of the smallest margin.
    pub argmin: Option<(usize, f64)>,
}

impl KindSummary {
    pub fn empty(kind: BoundKind) -> Self {
        Self {
            kind,
            records: 0,
            failures: 0,
            min_margin: f64::INFINITY,
            min_relative_margin: f64::INFINITY,
            mean_margin: 0.0,
            argmin: None,
        }
    }

    pub fn push(&mut self, r: &Record) {
        let n = self.records as f64;
        self.mean_margin = (self.mean_margin * n + r.margin) / (n + 1.0);
        self.records += 1;
        if !r.pass {
            self.failures += 1;
        }
        if r.margin < self.min_margin {
            self.min_margin = r.margin;
            self.argmin = Some((r.instance_id, r.theta));
        }
        self.min_relative_margin = self.min_relative_margin.min(r.relative_margin());
    }

    /// Combines two summaries; `other` comes later in instance order.
    pub fn merge(&mut self, other: &KindSummary) {
        let total = self.records + other.records;
        if total > 0 {
            self.mean_margin =
                (self.mean_margin * self.records as f64 + other.mean_margin * other.records as f64) / total as f64;
        }
        self.records = total;
        self.failures += other.failures;
        if other.min_margin < self.min_margin {
            self.min_margin = other.min_margin;
            self.argmin = other.argmin;
        }
        self.min_relative_margin = self.min_relative_margin.min(other.min_relative_margin);
    }
}

/// A scalar check repeated over many points: a check fails when its value
/// exceeds `tolerance`.
///
/// For identities the value is a residual. For orderings it is the relative
/// amount by which the refined bound is looser than its baseline, so
/// negative values mean a strict improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub checks: usize,
    pub violations: usize,
    #[serde(with = "nullable")]
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckSummary {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            violations: 0,
            worst: f64::NEG_INFINITY,
            tolerance,
        }
    }

    /// Records one value; returns whether it is within tolerance.
    pub fn push(&mut self, value: f64) -> bool {
        self.checks += 1;
        self.worst = self.worst.max(value);
        let ok = value <= self.tolerance;
        if !ok {
            self.violations += 1;
        }
        ok
    }

    pub fn merge(&mut self, other: &CheckSummary) {
        self.checks += other.checks;
        self.violations += other.violations;
        self.worst = self.worst.max(other.worst);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub instance_id: usize,
    /// Bound tag, ordering or identity name.
    pub check: String,
    pub detail: String,
    /// The check could not be evaluated (bad hypothesis, engine failure),
    /// as opposed to being evaluated and violated.
    #[serde(default)]
    pub error: bool,
    pub instance: InstanceFile,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub kinds: Vec<KindSummary>,
    pub orderings: Vec<CheckSummary>,
    pub identities: Vec<CheckSummary>,
    /// Equality checks, as `|lhs - rhs|/max(1, rhs)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equalities: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
}

impl Summary {
    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }

    pub fn has_errors(&self) -> bool {
        self.failures.iter().any(|f| f.error)
    }

    pub fn kind(&self, kind: BoundKind) -> Option<&KindSummary> {
        self.kinds.iter().find(|s| s.kind == kind)
    }

    pub fn ordering(&self, name: &str) -> Option<&CheckSummary> {
        self.orderings.iter().find(|s| s.name == name)
    }

    pub fn identity(&self, name: &str) -> Option<&CheckSummary> {
        self.identities.iter().find(|s| s.name == name)
    }
}

/// Echo of the configuration that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub kinds: Vec<BoundKind>,
    pub points: usize,
    pub lambda_sweep: bool,
    pub identities: bool,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: ConfigEcho,
    pub summary: Summary,
    pub records: Vec<Record>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub runtime_seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-clock field zeroed, for byte comparisons.
    pub fn payload_json(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_seconds = 0.0;
        copy.to_json()
    }
}
