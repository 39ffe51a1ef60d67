//! Initial and boundary data of the experiments.

use serde::{Deserialize, Serialize};

use crate::qtensor::{ModelParams, Q2};

/// `Q = n n^T - |n|^2/2 I` as planar coefficients.
fn from_director(n: [f64; 2]) -> Q2 {
    Q2::new([0.5 * (n[0] * n[0] - n[1] * n[1]), n[0] * n[1]])
}

/// Smooth data on `[0, 2]^2` used by the convergence and CFL studies.
pub fn ic_convtest(x: [f64; 2]) -> Q2 {
    use std::f64::consts::PI;
    let n = [x[0] * (2.0 - x[0]) * x[1] * (2.0 - x[1]), (PI * x[0]).sin() * (PI * x[1] / 2.0).sin()];
    from_director(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TactoidKind {
    Deg1,
    Degm1,
    Deg0,
}

impl TactoidKind {
    pub const ALL: [TactoidKind; 3] = [TactoidKind::Deg1, TactoidKind::Degm1, TactoidKind::Deg0];

    pub fn name(self) -> &'static str {
        match self {
            TactoidKind::Deg1 => "deg1",
            TactoidKind::Degm1 => "degm1",
            TactoidKind::Deg0 => "deg0",
        }
    }

    pub fn director(self, theta: f64) -> [f64; 2] {
        match self {
            TactoidKind::Deg1 => [-theta.sin(), theta.cos()],
            TactoidKind::Degm1 => [-theta.cos(), theta.sin()],
            TactoidKind::Deg0 => [1.0, 0.0],
        }
    }

    /// Snapshot times used when the config gives none.
    pub fn default_snapshot_times(self) -> Vec<f64> {
        match self {
            TactoidKind::Deg1 => vec![0.01, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0, 180.0, 270.0],
            TactoidKind::Degm1 => vec![0.01, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 60.0, 90.0],
            TactoidKind::Deg0 => vec![0.01, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
        }
    }
}

/// Isotropic core of radius `sqrt(0.3)` inside a nematic of bulk amplitude
/// `sqrt(-2a/c)` with the director field of `kind`.
pub fn ic_tactoid(kind: TactoidKind, p: &ModelParams, x: [f64; 2]) -> Q2 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 < 0.3 {
        return Q2::zero();
    }
    from_director(kind.director(x[1].atan2(x[0]))).scaled(p.planar_nematic_amplitude())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Convtest,
    TactoidDeg1,
    TactoidDegm1,
    TactoidDeg0,
}

impl Condition {
    pub fn tactoid_kind(self) -> Option<TactoidKind> {
        match self {
            Condition::Convtest => None,
            Condition::TactoidDeg1 => Some(TactoidKind::Deg1),
            Condition::TactoidDegm1 => Some(TactoidKind::Degm1),
            Condition::TactoidDeg0 => Some(TactoidKind::Deg0),
        }
    }

    pub fn eval(self, p: &ModelParams, x: [f64; 2]) -> Q2 {
        match self.tactoid_kind() {
            None => ic_convtest(x),
            Some(k) => ic_tactoid(k, p, x),
        }
    }
}
