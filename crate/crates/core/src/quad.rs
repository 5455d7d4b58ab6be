//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! The interval is cut at the caller's breakpoints; each segment is covered
//! by `n` equal panels, `n` doubling until two successive estimates agree.
//! Panels are evaluated in parallel and summed in index order, so results
//! do not depend on the thread count.

use num::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Nodes per panel.
    pub order: usize,
    /// Absolute tolerance on the change between successive doublings,
    /// shared across segments in proportion to their length.
    pub tol: f64,
    /// Panel cap per segment; reaching it ends refinement unconverged.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { order: 15, tol: 1e-10, max_panels: 4096 }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig { tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.order < 2 || self.order > 200 {
            return input(format!("quadrature order {} outside 2..=200", self.order));
        }
        if !(self.tol > 0.0) {
            return input("quadrature tolerance must be positive");
        }
        if self.max_panels == 0 {
            return input("panel cap must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    /// Sum over segments of the last doubling difference.
    pub error: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes by Newton iteration on `P_n`, ascending.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let one = T::one();
        let two = T::lit(2.0);
        let nf = T::from_usize(n).unwrap();
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let guess = T::PI() * (T::from_usize(i).unwrap() + T::lit(0.75)) / (nf + T::lit(0.5));
            let mut x = guess.cos();
            let mut dp = one;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = two / ((one - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for j in 2..=n {
        let jf = T::from_usize(j).unwrap();
        let p2 = ((T::lit(2.0) * jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

fn panels_sum<T: Real, F>(f: &F, rule: &GaussLegendre<T>, a: T, b: T, n: usize) -> Result<Complex<T>>
where
    F: Fn(T) -> Result<Complex<T>> + Sync,
{
    let h = (b - a) / T::from_usize(n).unwrap();
    let half = h / T::lit(2.0);
    let parts: Vec<Result<Complex<T>>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mid = a + h * (T::from_usize(p).unwrap() + T::lit(0.5));
            let mut acc = Complex::new(T::zero(), T::zero());
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                acc = acc + f(mid + half * *x)? * *w;
            }
            Ok(acc * half)
        })
        .collect();
    let mut total = Complex::new(T::zero(), T::zero());
    for part in parts {
        total = total + part?;
    }
    Ok(total)
}

/// Integrates `f` over `[a, b]` with panel boundaries at `breakpoints`.
///
/// Errors from `f` abort the integration and are returned unchanged.
pub fn integrate<T: Real, F>(f: F, a: T, b: T, breakpoints: &[T], cfg: &QuadConfig) -> Result<QuadResult<T>>
where
    F: Fn(T) -> Result<Complex<T>> + Sync,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return input("integration bounds must be finite with a ≤ b");
    }
    let zero = Complex::new(T::zero(), T::zero());
    if a == b {
        return Ok(QuadResult { value: zero, error: T::zero(), evaluations: 0, converged: true });
    }
    let mut cuts: Vec<T> = breakpoints.iter().cloned().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut edges = vec![a];
    edges.extend(cuts);
    edges.push(b);

    let rule = GaussLegendre::<T>::new(cfg.order);
    let tol = T::lit(cfg.tol);
    let width = b - a;
    let mut value = zero;
    let mut error = T::zero();
    let mut evaluations = 0;
    let mut converged = true;
    for seg in edges.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let seg_tol = tol * (hi - lo) / width;
        let mut n = 1;
        let mut prev = panels_sum(&f, &rule, lo, hi, n)?;
        evaluations += cfg.order;
        loop {
            n *= 2;
            let next = panels_sum(&f, &rule, lo, hi, n)?;
            evaluations += n * cfg.order;
            let diff = (next - prev).norm();
            let floor = T::epsilon() * T::lit(64.0) * next.norm();
            prev = next;
            if diff <= seg_tol.max(floor) {
                error = error + diff;
                break;
            }
            if 2 * n > cfg.max_panels {
                error = error + diff;
                converged = false;
                break;
            }
        }
        value = value + prev;
    }
    Ok(QuadResult { value, error, evaluations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real<T: Real>(g: impl Fn(T) -> T + Sync) -> impl Fn(T) -> Result<Complex<T>> + Sync {
        move |x| Ok(Complex::new(g(x), T::zero()))
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::<f64>::new(5);
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let x8: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(8)).sum();
        assert!((x8 - 2.0 / 9.0).abs() < 1e-14);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn smooth_and_kinked_integrands() {
        let cfg = QuadConfig::default();
        let r = integrate(real(|x: f64| x.exp()), 0.0, 1.0, &[], &cfg).unwrap();
        assert!((r.value.re - (1f64.exp() - 1.0)).abs() < 1e-13 && r.converged);
        let r = integrate(real(|x: f64| x.abs()), -1.0, 2.0, &[0.0], &cfg).unwrap();
        assert!((r.value.re - 2.5).abs() < 1e-13);
    }

    #[test]
    fn single_precision() {
        let cfg = QuadConfig { tol: 1e-5, ..QuadConfig::default() };
        let r = integrate(real(|x: f32| x.sin()), 0.0, std::f32::consts::PI, &[], &cfg).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-5);
    }

    #[test]
    fn complex_and_errors() {
        let cfg = QuadConfig::default();
        let r = integrate(|t: f64| Ok(Complex::new(t.cos(), t.sin())), 0.0, std::f64::consts::PI, &[], &cfg).unwrap();
        assert!((r.value - Complex::new(0.0, 2.0)).norm() < 1e-13);
        assert!(integrate(real(|x: f64| x), 1.0, 0.0, &[], &cfg).is_err());
        let failing = integrate(
            |x: f64| if x > 0.5 { Err(crate::error::Error::Pole("x".into())) } else { Ok(Complex::new(x, 0.0)) },
            0.0,
            1.0,
            &[],
            &cfg,
        );
        assert!(failing.is_err());
    }
}
