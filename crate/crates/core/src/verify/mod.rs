//! Numerical oracles: normalization by quadrature and Monte Carlo,
//! Jacobian checks, goodness-of-fit tests, and the acceptance suite.

mod jacobian;
mod mc;
pub mod quad;
pub mod stats;
pub mod suite;

pub use jacobian::{jacobian_check_cholesky, jacobian_check_linear, ln_linear_map_determinant};
pub use mc::{mc_normalize, McTarget};

use serde::Serialize;

use quad::{integrate, QuadOptions};
use stats::TestOutcome;

/// How `pass` was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|estimate - target| <= 3 error`, `error` being a standard error.
    MonteCarlo,
    /// `|estimate - target| <= error`, `error` being a tolerance.
    Tolerance,
    /// `relative error <= tolerance`.
    Relative,
    /// `estimate` is a p-value and passes above `target`.
    PValue,
}

/// One verification outcome, emitted as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    pub estimate: f64,
    pub target: f64,
    pub error: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: usize,
    /// Set when the check could not reach a verdict (non-convergence,
    /// degenerate importance weights, domain failure).
    pub inconclusive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn base(name: &str, kind: CheckKind, estimate: f64, target: f64, error: f64, pass: bool, samples: usize) -> Self {
        CheckReport {
            name: name.to_string(),
            kind,
            estimate,
            target,
            error,
            pass,
            seed: None,
            samples,
            inconclusive: false,
            note: None,
        }
    }

    pub fn monte_carlo(name: &str, estimate: f64, target: f64, stderr: f64, samples: usize, seed: u64) -> Self {
        let pass = (estimate - target).abs() <= 3.0 * stderr;
        CheckReport {
            seed: Some(seed),
            ..Self::base(name, CheckKind::MonteCarlo, estimate, target, stderr, pass, samples)
        }
    }

    pub fn tolerance(name: &str, estimate: f64, target: f64, tol: f64, nodes: usize) -> Self {
        let pass = (estimate - target).abs() <= tol;
        Self::base(name, CheckKind::Tolerance, estimate, target, tol, pass, nodes)
    }

    /// `error` holds the observed relative error.
    pub fn relative(name: &str, estimate: f64, target: f64, rel_err: f64, tol: f64, nodes: usize) -> Self {
        let pass = rel_err <= tol;
        CheckReport {
            note: Some(format!("relative tolerance {tol:e}")),
            ..Self::base(name, CheckKind::Relative, estimate, target, rel_err, pass, nodes)
        }
    }

    pub fn pvalue(name: &str, outcome: TestOutcome, alpha: f64, seed: u64) -> Self {
        CheckReport {
            seed: Some(seed),
            note: Some(format!("statistic {:.6e}", outcome.statistic)),
            ..Self::base(name, CheckKind::PValue, outcome.pvalue, alpha, 0.0, outcome.pvalue > alpha, outcome.samples)
        }
    }

    /// A check that could not be carried out.
    pub fn failed(name: &str, kind: CheckKind, reason: String) -> Self {
        CheckReport {
            inconclusive: true,
            note: Some(reason),
            ..Self::base(name, kind, f64::NAN, f64::NAN, f64::NAN, false, 0)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Turns a check that is expected to fail into a passing negative
    /// control (and vice versa).
    pub fn expect_failure(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self.pass = !self.pass;
        let prior = self.note.take().map(|n| format!("; {n}")).unwrap_or_default();
        self.note = Some(format!("negative control: underlying check must fail{prior}"));
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Integrates `exp(logpdf)` over `(a, b)` and compares with 1. Errors from
/// the callback (points outside the support) count as zero density.
pub fn quad_normalize_1d(
    name: &str,
    logpdf: impl Fn(f64) -> crate::Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> CheckReport {
    let opts = QuadOptions {
        abs_tol: tol * 0.01,
        rel_tol: tol * 0.01,
        ..QuadOptions::default()
    };
    let r = integrate(|x| logpdf(x).map(f64::exp).unwrap_or(0.0), a, b, opts);
    finish_quadrature(name, r, tol)
}

/// Same as [`quad_normalize_1d`] over `{a < x < b, lo(x) < y < hi(x)}`.
pub fn quad_normalize_2d(
    name: &str,
    logpdf: impl Fn(f64, f64) -> crate::Result<f64>,
    a: f64,
    b: f64,
    lo: impl Fn(f64) -> f64,
    hi: impl Fn(f64) -> f64,
    tol: f64,
) -> CheckReport {
    let opts = QuadOptions {
        abs_tol: tol * 0.01,
        rel_tol: tol * 0.01,
        ..QuadOptions::default()
    };
    let r = quad::integrate_2d(|x, y| logpdf(x, y).map(f64::exp).unwrap_or(0.0), a, b, lo, hi, opts);
    finish_quadrature(name, r, tol)
}

fn finish_quadrature(name: &str, r: quad::Quadrature, tol: f64) -> CheckReport {
    let mut report = CheckReport::tolerance(name, r.value, 1.0, tol, r.evaluations);
    if !r.converged {
        report.pass = false;
        report.inconclusive = true;
        report.note = Some(format!("quadrature did not converge (error estimate {:.3e})", r.error));
    }
    report
}
