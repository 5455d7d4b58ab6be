//! Connes–Moscovici style seminorms and the trace-continuity constant.
//!
//! The seminorm `‖A‖_n = Σ_{m≤n} (1/m!) ‖∂̃^m(A) ∘ (I⊗Δ)²‖` involves an
//! operator norm on `ℓ²(Γ) ⊗ ℓ²(ℕ)` that cannot be computed exactly. Two
//! certified bounds are offered instead: a Schur-type upper bound built from
//! `‖∂̃^m(δ_g ⊗ M)‖ ≤ |g|^m ‖M‖`, and a lower bound from compressing the
//! operator to the ball of radius `R`.

use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgElem;
use crate::error::{input, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::growth::{growth_fit, GrowthVerdict};
use crate::regular::operator_norm;
use crate::scalar::Coeff;

/// Seminorm order and the diagonal weight acting on matrix slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormContext {
    pub order: u32,
    /// Weight of slot `j` (zero-based); the default is `j + 1`. The seminorm
    /// multiplies column `j` by `weight²`.
    pub weights: Vec<f64>,
}

impl SeminormContext {
    /// Order `n` with the index weight `Δ δ_j = j δ_j` on slots `1..=k`.
    pub fn new(order: u32, k: usize) -> Self {
        SeminormContext { order, weights: (1..=k).map(|j| j as f64).collect() }
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.weights.len() != k {
            return input(format!("{} slot weights for matrix size {k}", self.weights.len()));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) {
            return input("slot weights must be strictly positive");
        }
        Ok(())
    }

    fn max_weight(&self) -> f64 {
        self.weights.iter().cloned().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SeminormMode {
    UpperBound,
    Truncated { radius: u32 },
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Evaluates the seminorm bound selected by `mode`.
///
/// `UpperBound` returns `Σ_{m≤n} (1/m!) Σ_g |g|^m ‖A_g‖_F · k · w_max²` with
/// the unit part contributing `|λ| w_max²` at `m = 0`. `Truncated` returns
/// the same sum with each operator norm replaced by that of the compression
/// to `ball(R) ⊗ ℂ^k`; it never exceeds the true seminorm.
pub fn cm_seminorm<S: Coeff>(a: &AlgElem<S>, ctx: &SeminormContext, mode: SeminormMode) -> Result<f64> {
    let k = a.k();
    ctx.validate(k)?;
    let w2 = ctx.max_weight().powi(2);
    match mode {
        SeminormMode::UpperBound => {
            let mut total = a.unit_part().modulus() * w2;
            for m in 0..=ctx.order {
                let mut term = 0.0;
                for (g, coeff) in a.coefficients() {
                    let len = f64::from(a.group().word_length(g)?);
                    term += len.powi(m as i32) * coeff.frobenius();
                }
                total += term * k as f64 * w2 / factorial(m);
            }
            Ok(total)
        }
        SeminormMode::Truncated { radius } => {
            let ball = a.group().ball(radius)?;
            let lengths: Vec<u32> = ball.iter().map(|g| a.group().word_length(g)).collect::<Result<_>>()?;
            let index: std::collections::HashMap<&GroupElement, usize> =
                ball.iter().enumerate().map(|(i, g)| (g, i)).collect();
            let n = ball.len() * k;
            let unit = a.unit_part().to_c64();
            let mut total = 0.0;
            for m in 0..=ctx.order {
                let mut mat = DMatrix::<Complex64>::zeros(n, n);
                if m == 0 {
                    for yi in 0..ball.len() {
                        for j in 0..k {
                            mat[(yi * k + j, yi * k + j)] += unit * ctx.weights[j].powi(2);
                        }
                    }
                }
                for (yi, y) in ball.iter().enumerate() {
                    for (g, coeff) in a.coefficients() {
                        let x = a.group().mul(g, y);
                        let Some(&xi) = index.get(&x) else { continue };
                        let shift = f64::from(lengths[xi]) - f64::from(lengths[yi]);
                        let factor = if m == 0 { 1.0 } else { shift.powi(m as i32) };
                        if factor == 0.0 {
                            continue;
                        }
                        for i in 0..k {
                            for j in 0..k {
                                mat[(xi * k + i, yi * k + j)] +=
                                    coeff.get(i, j).to_c64() * factor * ctx.weights[j].powi(2);
                            }
                        }
                    }
                }
                total += operator_norm(&mat) / factorial(m);
            }
            Ok(total)
        }
    }
}

/// Configuration for [`weighted_class_constant`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConstantConfig {
    /// Number of matrix slots summed in `Σ j⁻²`; `None` uses `π²/6`.
    pub slot_cap: Option<usize>,
}

impl Default for TraceConstantConfig {
    fn default() -> Self {
        TraceConstantConfig { slot_cap: None }
    }
}

/// The constant `C = (Σ_j j⁻²) · (Σ_{g ∈ ⟨h⟩} (1+|g|)^{-2k})` behind
/// `|tr_h(A)| ≤ √C · (Σ_j Σ_g j²(1+|g|)^{2k} |a_jj(g)|²)^{1/2}`.
///
/// The class sum runs over the radius-`R` truncation. For infinite classes a
/// tail bound `2kC₀ R^{d-2k} / (2k-d)` is added from the fitted growth
/// `N(r) ≤ C₀ r^d`, which requires a polynomial verdict and `2k > d`.
pub fn weighted_class_constant(
    group: &GroupSpec,
    h: &GroupElement,
    k: u32,
    radius: u32,
    cfg: TraceConstantConfig,
) -> Result<f64> {
    if k == 0 {
        return input("order k must be at least 1");
    }
    if *h == group.identity() {
        return input("h must not be the identity");
    }
    let slot_sum = match cfg.slot_cap {
        None => std::f64::consts::PI.powi(2) / 6.0,
        Some(j) => (1..=j).map(|j| 1.0 / (j * j) as f64).sum(),
    };
    let class = group.class_with_lengths(h, radius)?;
    let class_sum: f64 = class
        .iter()
        .map(|(l, _)| (1.0 + f64::from(*l)).powi(-2 * k as i32))
        .sum();
    let mut tail = 0.0;
    if !group.class_is_finite(h) {
        let counts = group.class_growth_counts(h, radius)?;
        let report = growth_fit(&counts)?;
        match report.verdict {
            GrowthVerdict::Polynomial { degree } => {
                let two_k = f64::from(2 * k);
                if two_k <= degree {
                    return Err(Error::NotCertified(format!(
                        "order k = {k} too small for growth degree {degree:.3}"
                    )));
                }
                let r = f64::from(radius.max(1));
                tail = two_k * report.constant * r.powf(degree - two_k) / (two_k - degree);
            }
            GrowthVerdict::Exponential => {
                return Err(Error::NotCertified("class growth is exponential".into()))
            }
            GrowthVerdict::Inconclusive => {
                return Err(Error::NotCertified("class growth fit is inconclusive".into()))
            }
        }
    }
    Ok(slot_sum * (class_sum + tail))
}

/// The constant `C' = (k!)² · C` for which
/// `|tr_h(A)| ≤ √C' · cm_seminorm(A, k, UpperBound)` holds, with `C` from
/// [`weighted_class_constant`] at a radius covering the support of `A`.
///
/// Chain: `Σ_j j²|a_jj|² ≤ k_slots² ‖A_g‖_F²`, then
/// `(Σ_g x_g²)^{1/2} ≤ Σ_g x_g`, then `(1+|g|)^k ≤ k! Σ_{m≤k} |g|^m/m!`.
pub fn seminorm_trace_constant(
    group: &GroupSpec,
    h: &GroupElement,
    k: u32,
    radius: u32,
    cfg: TraceConstantConfig,
) -> Result<f64> {
    Ok(factorial(k).powi(2) * weighted_class_constant(group, h, k, radius, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement::*;
    use crate::matrix::Mat;
    use std::f64::consts::PI;

    type C = Complex64;

    #[test]
    fn identity_delta_both_modes() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let a = AlgElem::delta(&c3, c3.identity(), Mat::<C>::unit(1, 0, 0)).unwrap();
        let ctx = SeminormContext::new(0, 1);
        assert!((cm_seminorm(&a, &ctx, SeminormMode::UpperBound).unwrap() - 1.0).abs() < 1e-14);
        assert!((cm_seminorm(&a, &ctx, SeminormMode::Truncated { radius: 1 }).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schur_bound_formula() {
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let g = FreeAbelian(vec![2, 1]);
        let a = AlgElem::delta(&z2, g, Mat::<C>::unit(1, 0, 0)).unwrap();
        let ctx = SeminormContext::new(2, 1);
        let len = 3.0;
        let expect = 1.0 + len + len * len / 2.0;
        assert!((cm_seminorm(&a, &ctx, SeminormMode::UpperBound).unwrap() - expect).abs() < 1e-12);
        let lower = cm_seminorm(&a, &ctx, SeminormMode::Truncated { radius: 4 }).unwrap();
        assert!(lower <= expect + 1e-12);
        assert!(lower > 0.0);
    }

    #[test]
    fn bad_context() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let a = AlgElem::<C>::one(&c3, 2);
        let ctx = SeminormContext { order: 1, weights: vec![1.0, 0.0] };
        assert!(cm_seminorm(&a, &ctx, SeminormMode::UpperBound).is_err());
        assert!(cm_seminorm(&a, &SeminormContext::new(1, 3), SeminormMode::UpperBound).is_err());
    }

    #[test]
    fn trace_constant_examples() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        let v = weighted_class_constant(&c2, &Cyclic(1), 1, 3, TraceConstantConfig::default()).unwrap();
        assert!((v - PI * PI / 24.0).abs() < 1e-14);
        let z = GroupSpec::free_abelian(1).unwrap();
        let v = weighted_class_constant(&z, &FreeAbelian(vec![3]), 1, 5, TraceConstantConfig::default()).unwrap();
        assert!((v - PI * PI / 6.0 / 16.0).abs() < 1e-14);
        let v = weighted_class_constant(&z, &FreeAbelian(vec![3]), 1, 2, TraceConstantConfig::default()).unwrap();
        assert_eq!(v, 0.0);
        let v = weighted_class_constant(&c2, &Cyclic(1), 1, 3, TraceConstantConfig { slot_cap: Some(2) }).unwrap();
        assert!((v - 1.25 / 4.0).abs() < 1e-14);
    }
}
