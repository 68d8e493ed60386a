use serde::{Deserialize, Serialize};

/// Check-node update `ln((1 + e^{a+b}) / (e^a + e^b))`, evaluated as
/// `sign(a)sign(b)[min(|a|,|b|) + ln(1 + e^{-(|a|+|b|)}) − ln(1 + e^{-||a|-|b||})]`.
#[inline]
pub fn f_func(a: f64, b: f64) -> f64 {
    let (aa, ab) = (a.abs(), b.abs());
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * (aa.min(ab) + (-(aa + ab)).exp().ln_1p() - (-(aa - ab).abs()).exp().ln_1p())
}

#[inline]
pub fn f_min_sum(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs())
}

/// Bit-node update `b + (−1)^c a`.
#[inline]
pub fn g_func(a: f64, b: f64, c: u8) -> f64 {
    if c & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Path-metric penalty `ln(1 + exp(−(1 − 2β)α))` for deciding `β` on LLR `α`.
#[inline]
pub fn pm_increment(alpha: f64, beta: u8) -> f64 {
    if beta & 1 == 0 {
        softplus(-alpha)
    } else {
        softplus(alpha)
    }
}

/// Which `f` the decoders use. Exact is the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FRule {
    #[default]
    Exact,
    MinSum,
}

impl FRule {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            FRule::Exact => f_func(a, b),
            FRule::MinSum => f_min_sum(a, b),
        }
    }
}
