//! Analytical FER bounds for PSC decoding. Each decoding leaf's vector
//! channel is split into independent component channels; the worst one
//! gives union upper bounds (GA and Bhattacharyya), the best one a
//! second-order Bonferroni lower bound.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::construction::f_mean;
use crate::error::{Error, Result};
use crate::psc::DecodingSubTree;

const PSI_TOL: f64 = 1e-10;
const PSI_MAX_DEPTH: u32 = 50;

/// Standard Gaussian tail `Q(x) = P(X > x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `P(X > x, Y > y)` for standard bivariate Gaussians with correlation `ρ`,
/// via the single-integral (angular) form. `x, y ≥ 0`.
pub fn psi_func(rho: f64, x: f64, y: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("|rho| must be below 1, got {rho}")));
    }
    if !(x >= 0.0 && y >= 0.0) {
        return Err(Error::InvalidParameter(format!("psi needs x, y >= 0, got ({x}, {y})")));
    }
    if x == 0.0 && y == 0.0 {
        return Ok(0.25 + rho.asin() / (2.0 * PI));
    }
    let s = (1.0 - rho * rho).sqrt();
    let integrand = |t: f64, theta: f64| -> f64 {
        let sin = theta.sin();
        if sin == 0.0 {
            return 0.0;
        }
        let d = 1.0 - rho * (2.0 * theta).sin();
        s / d * (-0.5 * t * t * d / ((1.0 - rho * rho) * sin * sin)).exp()
    };
    let split = (y / x).atan();
    let first = adaptive_simpson(&|th| integrand(x, th), 0.0, PI / 2.0 - split, PSI_TOL);
    let second = adaptive_simpson(&|th| integrand(y, th), 0.0, split, PSI_TOL);
    Ok(((first + second) / (2.0 * PI)).max(0.0))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // fixed first split so a narrow peak cannot hide between the initial nodes
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + h * i as f64, a + h * (i + 1) as f64);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            rec(f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / pieces as f64, PSI_MAX_DEPTH)
        })
        .sum()
}

/// Correlation between the pairwise error events of two nonzero codewords.
pub fn pairwise_correlation(w_i: usize, w_j: usize, w_ij: usize) -> Result<f64> {
    if w_i == 0 || w_j == 0 {
        return Err(Error::InvalidParameter("codeword weights must be positive".into()));
    }
    Ok((w_i as f64 + w_j as f64 - w_ij as f64) / (2.0 * ((w_i * w_j) as f64).sqrt()))
}

/// Component-channel statistics of one decoding leaf.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentStats {
    pub means: Vec<f64>,
    pub sigma_worst: f64,
    pub sigma_best: f64,
    pub z: Vec<f64>,
    pub z_worst: f64,
}

/// Equivalent noise deviation of a consistent-Gaussian LLR with mean `m`.
fn component_sigma(m: f64) -> f64 {
    if m > 0.0 {
        (2.0 / m).sqrt()
    } else {
        f64::INFINITY
    }
}

pub fn component_stats(subtree: &DecodingSubTree, sigma: f64) -> Result<Vec<ComponentStats>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let tree = subtree.tree();
    let n = tree.len();
    let means = tree.propagate(vec![2.0 / (sigma * sigma); n], f_mean, |a, b| a + b);
    let z0 = (-1.0 / (2.0 * sigma * sigma)).exp();
    let zs = tree.propagate(vec![z0; n], |a, b| a + b - a * b, |a, b| a * b);
    Ok(subtree
        .leaves()
        .iter()
        .map(|leaf| {
            let m = means[leaf.node].clone();
            let z = zs[leaf.node].clone();
            let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let z_worst = z.iter().copied().fold(0.0, f64::max);
            ComponentStats { means: m, sigma_worst: component_sigma(lo), sigma_best: component_sigma(hi), z, z_worst }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeafBounds {
    pub g_ub: f64,
    pub b_ub: f64,
    pub lb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub leaves: Vec<LeafBounds>,
    pub g_ub: f64,
    pub b_ub: f64,
    pub lb: f64,
}

fn tail_ratio(w: usize, sigma: f64) -> f64 {
    if sigma.is_infinite() {
        0.0
    } else {
        (w as f64).sqrt() / sigma
    }
}

pub fn fer_bounds(subtree: &DecodingSubTree, sigma: f64) -> Result<BoundReport> {
    let stats = component_stats(subtree, sigma)?;
    let leaves: Vec<LeafBounds> =
        stats.par_iter().enumerate().map(|(t, st)| leaf_bounds(subtree, t, st)).collect::<Result<_>>()?;
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    Ok(BoundReport {
        g_ub: clamp(leaves.iter().map(|l| l.g_ub).sum()),
        b_ub: clamp(leaves.iter().map(|l| l.b_ub).sum()),
        lb: clamp(leaves.iter().map(|l| l.lb).fold(0.0, f64::max)),
        leaves,
    })
}

fn leaf_bounds(subtree: &DecodingSubTree, t: usize, st: &ComponentStats) -> Result<LeafBounds> {
    let cb = subtree.codebook(t);
    let nonzero: Vec<usize> = (1..cb.size()).collect();
    let g_ub = nonzero.iter().map(|&i| q_func(tail_ratio(cb.weights[i], st.sigma_worst))).sum();
    let b_ub = nonzero.iter().map(|&i| st.z_worst.powi(cb.weights[i] as i32)).sum();
    let mut lb: f64 = nonzero.iter().map(|&i| q_func(tail_ratio(cb.weights[i], st.sigma_best))).sum();
    for (a, &i) in nonzero.iter().enumerate() {
        for &j in &nonzero[a + 1..] {
            let w_ij = cb.codewords[i].iter().zip(&cb.codewords[j]).filter(|(x, y)| x != y).count();
            let rho = pairwise_correlation(cb.weights[i], cb.weights[j], w_ij)?;
            lb -= psi_func(rho, tail_ratio(cb.weights[i], st.sigma_best), tail_ratio(cb.weights[j], st.sigma_best))?;
        }
    }
    Ok(LeafBounds { g_ub, b_ub, lb: lb.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::PolarCode;
    use crate::construction::{construct_pw, Method, RateProfile};
    use crate::sim::sigma_from_ebn0;

    #[test]
    fn q_examples() {
        assert_eq!(q_func(0.0), 0.5);
        // high-precision erfc: Q(1) = 0.15865525393145705...
        assert!((q_func(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        for x in [0.1, 1.3, 4.0, 9.0] {
            assert!((q_func(-x) - (1.0 - q_func(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn psi_independent_case() {
        for i in 0..20 {
            for j in 0..20 {
                let x = 0.05 + 0.25 * i as f64;
                let y = 0.05 + 0.25 * j as f64;
                let v = psi_func(0.0, x, y).unwrap();
                assert!((v - q_func(x) * q_func(y)).abs() < 1e-9, "{x} {y}");
            }
        }
    }

    #[test]
    fn psi_properties() {
        let v = psi_func(0.5, 1.0, 1.0).unwrap();
        // bivariate-normal CDF reference value
        assert!((v - 0.062_514_094_709_663_83).abs() < 1e-9, "{v}");
        assert!((psi_func(0.3, 0.0, 0.0).unwrap() - (0.25 + 0.3f64.asin() / (2.0 * PI))).abs() < 1e-15);
        for &(r, x, y) in &[(0.2, 0.5, 2.0), (0.7, 1.5, 0.3), (0.9, 2.0, 2.5)] {
            let a = psi_func(r, x, y).unwrap();
            let b = psi_func(r, y, x).unwrap();
            assert!((a - b).abs() < 1e-9);
            assert!(a <= q_func(x).min(q_func(y)) + 1e-12);
        }
        assert!(psi_func(1.0, 1.0, 1.0).is_err());
        assert!(psi_func(-1.2, 1.0, 1.0).is_err());
    }

    #[test]
    fn correlation_examples() {
        assert_eq!(pairwise_correlation(2, 3, 5).unwrap(), 0.0);
        assert_eq!(pairwise_correlation(2, 2, 4).unwrap(), 0.0);
        assert!((pairwise_correlation(1, 2, 1).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(pairwise_correlation(0, 2, 2).is_err());
    }

    fn pw(n: usize, k: usize) -> PolarCode {
        PolarCode::new(construct_pw(n, k).unwrap()).unwrap()
    }

    #[test]
    fn root_only_stats_are_the_channel() {
        let code = pw(10, 3);
        let sub = DecodingSubTree::new(&code, 3).unwrap();
        let st = component_stats(&sub, 0.8).unwrap();
        assert_eq!(st.len(), 1);
        assert!((st[0].sigma_worst - 0.8).abs() < 1e-12);
        assert!((st[0].sigma_best - 0.8).abs() < 1e-12);
        assert!((st[0].z_worst - (-1.0f64 / (2.0 * 0.64)).exp()).abs() < 1e-15);
    }

    #[test]
    fn two_leaf_right_child() {
        let code = PolarCode::new(RateProfile::new(2, [0, 1], Method::Custom).unwrap()).unwrap();
        let sub = DecodingSubTree::new(&code, 1).unwrap();
        let st = component_stats(&sub, 1.0).unwrap();
        assert!((st[1].sigma_worst - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((st[1].z_worst - (-1.0f64).exp()).abs() < 1e-15);
        assert!(st[0].z_worst >= st[1].z_worst);
    }

    #[test]
    fn frozen_code_has_zero_bounds() {
        let code = PolarCode::new(RateProfile::new(16, [], Method::Custom).unwrap()).unwrap();
        let r = fer_bounds(&DecodingSubTree::new(&code, 1).unwrap(), 0.9).unwrap();
        assert_eq!((r.g_ub, r.b_ub, r.lb), (0.0, 0.0, 0.0));
    }

    #[test]
    fn single_dimension_leaf() {
        let code = PolarCode::new(RateProfile::new(4, [3], Method::Custom).unwrap()).unwrap();
        let sub = DecodingSubTree::new(&code, 1).unwrap();
        assert_eq!(sub.leaves().len(), 1);
        let sigma = 0.9;
        let r = fer_bounds(&sub, sigma).unwrap();
        // codebook {0000, 1111}
        assert!((r.g_ub - q_func(2.0 / sigma)).abs() < 1e-15);
        assert!((r.lb - q_func(2.0 / sigma)).abs() < 1e-15);
        assert!((r.b_ub - (-1.0 / (2.0 * sigma * sigma)).exp().powi(4)).abs() < 1e-15);
    }

    #[test]
    fn ordering_and_monotonicity() {
        for (n, k, tau) in [(64, 32, 1), (96, 48, 2), (100, 30, 3)] {
            let sub = DecodingSubTree::new(&pw(n, k), tau).unwrap();
            let mut prev: Option<BoundReport> = None;
            for db in [0.0, 1.0, 2.0, 3.0, 4.0, 5.0] {
                let r = fer_bounds(&sub, sigma_from_ebn0(db, k as f64 / n as f64).unwrap()).unwrap();
                assert!(r.lb <= r.g_ub);
                for v in [r.lb, r.g_ub, r.b_ub] {
                    assert!((0.0..=1.0).contains(&v));
                }
                for st in component_stats(&sub, 0.7).unwrap() {
                    assert!(st.sigma_worst >= st.sigma_best);
                    assert!(st.z.iter().all(|&z| z > 0.0 && z <= 1.0));
                }
                if let Some(p) = prev {
                    assert!(r.g_ub <= p.g_ub + 1e-15);
                    assert!(r.b_ub <= p.b_ub + 1e-15);
                }
                prev = Some(r);
            }
        }
    }
}
