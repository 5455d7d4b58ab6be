//! Delocalized eta invariants.
//!
//! On finite groups the operator is diagonalized in the regular
//! representation and every eigenvalue is weighted by `tr_h` of its spectral
//! projection. The flat circle with deck group `ℤ` has closed-form heat
//! kernels and is handled separately.

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgElem;
use crate::detmap::{rho_path, self_adjoint_eigen, tau_h, RhoConfig, TauResult};
use crate::error::{input, Error, Result};
use crate::group::GroupElement;
use crate::quad::{integrate, QuadConfig};
use crate::regular::{HermitianEigen, RegularRep};

type C64 = Complex64;

/// Eigenvalues closer than this (relative to `max(1, |λ|)`) are merged.
pub const CLUSTER_TOL: f64 = 1e-9;
/// Distinct clusters must be at least this far apart, relatively.
pub const CLUSTER_REL_GAP: f64 = 1e-6;
/// Bound on each of the two truncation errors of the heat integral.
pub const HEAT_TRUNCATION: f64 = 1e-12;
/// Orientation of the deck trace: `+1` samples kernels at `(x, x + n)`,
/// `-1` at `(x + n, x)`. Flipping it negates every circle eta value.
pub const DECK_ORIENTATION: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    ExactDiagonalization,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    /// `tr_h(P_λ)`.
    pub multiplicity: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
    pub class_label: String,
    pub source: SpectrumSource,
}

impl SpectrumTable {
    /// Wraps externally computed spectral data.
    pub fn user_supplied(entries: Vec<SpectrumEntry>, class_label: impl Into<String>) -> Result<Self> {
        let table = SpectrumTable { entries, class_label: class_label.into(), source: SpectrumSource::UserSupplied };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.iter().any(|e| !e.eigenvalue.is_finite()) {
            return input("eigenvalues must be finite");
        }
        if self.entries.windows(2).any(|w| !(w[1].eigenvalue > w[0].eigenvalue)) {
            return input("eigenvalues must be strictly increasing");
        }
        Ok(())
    }

    /// `Σ_λ m_h(λ)`, which is `tr_h(1) = 0` for a complete table.
    pub fn multiplicity_sum(&self) -> C64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// Groups sorted eigenvalues into clusters, returning index ranges.
fn cluster(values: &[f64]) -> Result<Vec<std::ops::Range<usize>>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() {
            out.push(start..i);
            break;
        }
        let (a, b) = (values[i - 1], values[i]);
        let scale = a.abs().max(b.abs()).max(1.0);
        let gap = b - a;
        if gap <= CLUSTER_TOL * scale {
            continue;
        }
        if gap < CLUSTER_REL_GAP * scale {
            return Err(Error::Clustering(format!(
                "eigenvalues {a:.12e} and {b:.12e} differ by {gap:.3e}, above the merge tolerance {:.1e} but below the required gap {:.1e}",
                CLUSTER_TOL * scale,
                CLUSTER_REL_GAP * scale
            )));
        }
        out.push(start..i);
        start = i;
    }
    Ok(out)
}

fn class_label(class: &[GroupElement]) -> String {
    match class.first() {
        Some(h) => format!("<{h}> ({} elements)", class.len()),
        None => "empty".into(),
    }
}

/// Diagonalizes `D` in the regular representation and evaluates `tr_h` on
/// each spectral projection.
pub fn delocalized_spectrum(d: &AlgElem<C64>, class: &[GroupElement]) -> Result<SpectrumTable> {
    let rep = RegularRep::for_elem(d)?;
    let eig = self_adjoint_eigen(&rep, d, 0.0)?;
    spectrum_from_eigen(&rep, &eig, class)
}

fn spectrum_from_eigen(rep: &RegularRep, eig: &HermitianEigen, class: &[GroupElement]) -> Result<SpectrumTable> {
    let mut entries = Vec::new();
    for range in cluster(&eig.values)? {
        let lambda = eig.values[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let projection = eig.projection(range);
        entries.push(SpectrumEntry { eigenvalue: lambda, multiplicity: rep.class_trace(&projection, class)? });
    }
    Ok(SpectrumTable { entries, class_label: class_label(class), source: SpectrumSource::ExactDiagonalization })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum EtaMode {
    SignSum,
    HeatIntegral { quad: QuadConfig },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaResult {
    pub value: C64,
    /// Certified bound for the heat integral (quadrature plus truncation);
    /// 0 for the sign sum, which is exact up to rounding.
    pub error: f64,
    /// Integration window `[t_min, t_max]` of the heat integral.
    pub window: Option<(f64, f64)>,
    pub mode: String,
}

/// `η_h = (2/√π) ∫₀^∞ Σ_λ λ e^{−t²λ²} m_h(λ) dt = Σ_λ sign(λ) m_h(λ)`.
pub fn eta_delocalized(table: &SpectrumTable, mode: EtaMode) -> Result<EtaResult> {
    table.validate()?;
    if let Some(e) = table.entries.iter().find(|e| e.eigenvalue.abs() <= CLUSTER_TOL) {
        return Err(Error::NotInvertible(format!("zero eigenvalue {:.3e} in the spectrum", e.eigenvalue)));
    }
    match mode {
        EtaMode::SignSum => {
            let value = table.entries.iter().map(|e| e.multiplicity * e.eigenvalue.signum()).sum();
            Ok(EtaResult { value, error: 0.0, window: None, mode: "sign-sum".into() })
        }
        EtaMode::HeatIntegral { quad } => heat_integral(table, &quad),
    }
}

fn heat_integral(table: &SpectrumTable, quad: &QuadConfig) -> Result<EtaResult> {
    let live: Vec<&SpectrumEntry> = table.entries.iter().filter(|e| e.multiplicity.norm() > 0.0).collect();
    if live.is_empty() {
        return Ok(EtaResult { value: C64::new(0.0, 0.0), error: 0.0, window: None, mode: "heat-integral".into() });
    }
    let weight: f64 = live.iter().map(|e| e.multiplicity.norm() * e.eigenvalue.abs()).sum();
    let mass: f64 = live.iter().map(|e| e.multiplicity.norm()).sum();
    let lambda_min = live.iter().map(|e| e.eigenvalue.abs()).fold(f64::INFINITY, f64::min);
    // (2/√π)·t_min·Σ|m λ| bounds the head; Σ|m| erfc(λ_min t_max) ≤ Σ|m| e^{−(λ_min t_max)²} the tail.
    let t_min = HEAT_TRUNCATION * PI.sqrt() / (2.0 * weight);
    let t_max = (mass / HEAT_TRUNCATION).ln().max(1.0).sqrt() / lambda_min;
    let c = 2.0 / PI.sqrt();
    let integrand = |t: f64| -> Result<C64> {
        Ok(live.iter().map(|e| e.multiplicity * (c * e.eigenvalue * (-(t * e.eigenvalue).powi(2)).exp())).sum())
    };
    let breakpoints: Vec<f64> = live
        .iter()
        .flat_map(|e| [0.5, 1.0, 2.0, 4.0].map(|s| s / e.eigenvalue.abs()))
        .collect();
    let r = integrate(integrand, t_min, t_max, &breakpoints, quad)?;
    Ok(EtaResult {
        value: r.value,
        error: r.error + 2.0 * HEAT_TRUNCATION,
        window: Some((t_min, t_max)),
        mode: "heat-integral".into(),
    })
}

/// `tr_h(D e^{−t²D²})` by spectral calculus in the regular representation.
pub fn heat_trace(d: &AlgElem<C64>, class: &[GroupElement], t: f64) -> Result<C64> {
    if !(t > 0.0) {
        return input("heat time must be positive");
    }
    let rep = RegularRep::for_elem(d)?;
    let eig = self_adjoint_eigen(&rep, d, 0.0)?;
    let m = eig.apply(|l| C64::new(l * (-(t * l).powi(2)).exp(), 0.0));
    rep.class_trace(&m, class)
}

/// `D̃ = −i d/dx` on `ℝ` covering the circle, traced against the deck
/// translation `x ↦ x + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckKernelModel {
    n: i64,
}

impl DeckKernelModel {
    pub fn new(n: i64) -> Result<Self> {
        if n == 0 {
            return input("deck element must be nonzero; the identity class is excluded");
        }
        Ok(DeckKernelModel { n })
    }

    pub fn deck_element(&self) -> i64 {
        self.n
    }
}

/// Kernel of `D̃ e^{−t²D̃²}`: `i(x−y)/(2t²) · (4πt²)^{−1/2} e^{−(x−y)²/4t²}`.
fn circle_kernel(x: f64, y: f64, t: f64) -> C64 {
    let r = x - y;
    let gauss = (-(r * r) / (4.0 * t * t)).exp() / (4.0 * PI * t * t).sqrt();
    C64::new(0.0, r / (2.0 * t * t) * gauss)
}

/// `∫₀¹ K_t(x, x + n) dx`. The integrand is constant in `x`.
pub fn circle_deck_heat_trace(model: &DeckKernelModel, t: f64) -> Result<C64> {
    if !(t > 0.0) {
        return input("heat time must be positive");
    }
    let shift = DECK_ORIENTATION * model.n as f64;
    let (x, y) = if DECK_ORIENTATION > 0.0 { (0.0, shift) } else { (-shift, 0.0) };
    Ok(circle_kernel(x, y, t))
}

/// `(2/√π) ∫₀^∞` of the deck heat trace: quadrature on `[0, 8|n|]` plus the
/// exact tail `∫_T^∞ t⁻³ e^{−a/t²} dt = (1 − e^{−a/T²}) / 2a`.
pub fn circle_deck_eta(model: &DeckKernelModel, quad: &QuadConfig) -> Result<EtaResult> {
    let n = model.n.unsigned_abs() as f64;
    let horizon = 8.0 * n;
    let c = 2.0 / PI.sqrt();
    let integrand = |t: f64| -> Result<C64> {
        if t == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(circle_deck_heat_trace(model, t)? * c)
    };
    let breakpoints: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|s| s * n).collect();
    let r = integrate(integrand, 0.0, horizon, &breakpoints, quad)?;
    // heat trace = prefactor · t⁻³ e^{−a/t²}
    let a = n * n / 4.0;
    let prefactor = circle_deck_heat_trace(model, 1.0)? * a.exp();
    let tail = prefactor * c * (1.0 - (-a / (horizon * horizon)).exp()) / (2.0 * a);
    Ok(EtaResult { value: r.value + tail, error: r.error, window: Some((0.0, horizon)), mode: "deck-heat-integral".into() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoEtaReport {
    pub tau: TauResult,
    pub eta: C64,
    pub minus_half_eta: C64,
    pub difference: f64,
}

/// Computes `τ_h(ρ(D))` along the erf path and `−½ η_h(D)` from the
/// spectrum, by independent routes.
pub fn rho_eta_check(
    d: &AlgElem<C64>,
    class: &[GroupElement],
    quad: &QuadConfig,
    rho: &RhoConfig,
) -> Result<RhoEtaReport> {
    let tau = tau_h(&rho_path(d, rho)?, class, quad)?;
    let rep = RegularRep::for_elem(d)?;
    let eig = self_adjoint_eigen(&rep, d, rho.spectral_gap)?;
    let table = spectrum_from_eigen(&rep, &eig, class)?;
    let eta = eta_delocalized(&table, EtaMode::SignSum)?.value;
    let minus_half_eta = -0.5 * eta;
    Ok(RhoEtaReport { difference: (tau.value - minus_half_eta).norm(), tau, eta, minus_half_eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement::*;
    use crate::group::GroupSpec;
    use crate::matrix::Mat;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn delta_g() -> AlgElem<C64> {
        let z2 = GroupSpec::cyclic(2).unwrap();
        AlgElem::delta(&z2, Cyclic(1), Mat::identity(1)).unwrap()
    }

    #[test]
    fn z2_spectrum_and_eta() {
        let t = delocalized_spectrum(&delta_g(), &[Cyclic(1)]).unwrap();
        assert_eq!(t.entries.len(), 2);
        assert!((t.entries[0].eigenvalue + 1.0).abs() < 1e-14);
        assert!((t.entries[0].multiplicity + c(0.5)).norm() < 1e-14);
        assert!((t.entries[1].multiplicity - c(0.5)).norm() < 1e-14);
        let s = eta_delocalized(&t, EtaMode::SignSum).unwrap();
        assert!((s.value - c(1.0)).norm() < 1e-14);
        let h = eta_delocalized(&t, EtaMode::HeatIntegral { quad: QuadConfig::with_tol(1e-12) }).unwrap();
        assert!((h.value - s.value).norm() < 1e-10, "{:?}", h);
        assert!((h.value - s.value).norm() <= h.error);
    }

    #[test]
    fn scalar_operator_has_no_delocalized_weight() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let d = AlgElem::delta(&z3, Cyclic(0), Mat::identity(2).scale(&c(1.5))).unwrap();
        let t = delocalized_spectrum(&d, &[Cyclic(1)]).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert!(t.entries[0].multiplicity.norm() < 1e-14);
        assert!(heat_trace(&d, &[Cyclic(1)], 0.7).unwrap().norm() < 1e-14);
    }

    #[test]
    fn heat_trace_on_z2() {
        for t in [0.1, 0.5, 1.0, 2.0] {
            let v = heat_trace(&delta_g(), &[Cyclic(1)], t).unwrap();
            assert!((v - c((-t * t).exp())).norm() < 1e-14);
        }
        assert!(heat_trace(&delta_g(), &[Cyclic(1)], 6.0).unwrap().norm() < 1e-12);
    }

    #[test]
    fn zero_eigenvalue_rejected() {
        let table = SpectrumTable::user_supplied(
            vec![SpectrumEntry { eigenvalue: 0.0, multiplicity: c(0.5) }],
            "test",
        )
        .unwrap();
        assert!(matches!(eta_delocalized(&table, EtaMode::SignSum), Err(Error::NotInvertible(_))));
        assert!(SpectrumTable::user_supplied(
            vec![SpectrumEntry { eigenvalue: 1.0, multiplicity: c(0.5) }, SpectrumEntry { eigenvalue: 1.0, multiplicity: c(0.5) }],
            "dup"
        )
        .is_err());
    }

    #[test]
    fn ambiguous_clusters_rejected() {
        assert_eq!(cluster(&[1.0, 1.0 + 1e-12, 2.0]).unwrap(), vec![0..2, 2..3]);
        assert!(matches!(cluster(&[1.0, 1.0 + 1e-8]), Err(Error::Clustering(_))));
    }

    #[test]
    fn circle_model() {
        let m = DeckKernelModel::new(1).unwrap();
        let v = circle_deck_heat_trace(&m, 1.0).unwrap();
        let oracle = C64::new(0.0, -(-0.25f64).exp() / (4.0 * PI.sqrt()));
        assert!((v - oracle).norm() < 1e-15);
        let eta = circle_deck_eta(&m, &QuadConfig::default()).unwrap();
        assert!((eta.value - C64::new(0.0, -1.0 / PI)).norm() < 1e-8);
        assert!(DeckKernelModel::new(0).is_err());
    }

    #[test]
    fn rho_eta_on_z2() {
        let r = rho_eta_check(&delta_g(), &[Cyclic(1)], &QuadConfig::default(), &RhoConfig::default()).unwrap();
        assert!((r.minus_half_eta + c(0.5)).norm() < 1e-14);
        assert!(r.difference < 1e-6);
    }
}
