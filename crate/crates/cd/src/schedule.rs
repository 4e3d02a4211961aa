use std::f64::consts::PI;

use crate::{CdError, Result};

/// `λ(t) = sin²[(π/2) sin²(πt/2T)]` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    total: f64,
}

impl Schedule {
    pub fn new(total: f64) -> Result<Self> {
        if !(total.is_finite() && total > 0.0) {
            return Err(CdError::InvalidTotalTime(total));
        }
        Ok(Schedule { total })
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `(λ, λ̇)` at time `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let slack = 1e-12 * self.total;
        if !(t >= -slack && t <= self.total + slack) {
            return Err(CdError::TimeOutOfRange { t, total: self.total });
        }
        let t = t.clamp(0.0, self.total);
        let phase = PI * t / (2.0 * self.total);
        let s = phase.sin().powi(2);
        let lambda = (PI / 2.0 * s).sin().powi(2);
        let dot = PI * PI / (4.0 * self.total) * (PI * s).sin() * (2.0 * phase).sin();
        Ok((lambda, dot))
    }
}
