//! Sentiment update kernels.

use serde::{Deserialize, Serialize};

/// Smooth bounded-confidence update of `s1` toward `s2`.
///
/// The gate `1 / (1 + exp(gamma ((s2 - s1)^2 - eps^2)))` opens fully for
/// differences well below `eps`, halves exactly at `|s2 - s1| = eps`, and
/// closes beyond it; larger `gamma` sharpens the transition.
pub fn bc_kernel(s1: f64, s2: f64, alpha: f64, eps: f64, gamma: f64) -> f64 {
    let d = s2 - s1;
    s1 + alpha * d / (1.0 + (gamma * (d * d - eps * eps)).exp())
}

/// Linear consensus update: `s1 + alpha (s2 - s1)`.
pub fn linear_kernel(s1: f64, s2: f64, alpha: f64) -> f64 {
    s1 + alpha * (s2 - s1)
}

/// Which update rule drives the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Bounded,
    Linear,
}

impl KernelKind {
    pub fn apply(self, s1: f64, s2: f64, alpha: f64, eps: f64, gamma: f64) -> f64 {
        match self {
            KernelKind::Bounded => bc_kernel(s1, s2, alpha, eps, gamma),
            KernelKind::Linear => linear_kernel(s1, s2, alpha),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Bounded => "bounded",
            KernelKind::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bounded" => Some(KernelKind::Bounded),
            "linear" => Some(KernelKind::Linear),
            _ => None,
        }
    }
}
