//! The determinant map `τ_h(u) = (1/2πi) ∫ tr_h(u̇ u⁻¹) dt` on paths of
//! invertible elements that start at the identity.
//!
//! Paths are either sampled or given by evaluators. Inverses are taken in
//! the regular representation, so paths live over finite groups. Built-in
//! constructors cover the boundary of an idempotent, the winding loop of an
//! idempotent, and the erf rho path of an invertible self-adjoint operator.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgElem;
use crate::error::{input, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::quad::{integrate, QuadConfig};
use crate::regular::{condition_number, hermitian_defect, HermitianEigen, RegularRep};
use crate::scalar::{Coeff, GaussianRational};

type C64 = Complex64;
pub type Elem = AlgElem<C64>;

/// Largest admissible condition number of `u(t)` in the regular
/// representation.
pub const CONDITION_CAP: f64 = 1e8;
/// Allowed deviation of `u(0)` from the identity.
pub const START_TOL: f64 = 1e-12;
/// Allowed entrywise defect `‖p² − p‖` for floating idempotents.
pub const IDEMPOTENT_TOL: f64 = 1e-12;
/// Allowed relative Hermitian defect for operators fed to functional calculus.
pub const HERMITIAN_TOL: f64 = 1e-10;

const I: C64 = C64 { re: 0.0, im: 1.0 };

pub type EvalFn = Arc<dyn Fn(f64) -> Result<Elem> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Evaluators for a path given in closed form.
#[derive(Clone)]
pub struct AnalyticPath {
    pub value: EvalFn,
    pub derivative: EvalFn,
    /// `u̇ u⁻¹` when known in closed form; skips the linear solve.
    pub log_derivative: Option<EvalFn>,
    /// Condition number of `u(t)` when known in closed form.
    pub condition: Option<ScalarFn>,
}

#[derive(Clone)]
pub enum PathSource {
    Samples(Vec<(f64, Elem)>),
    Analytic(AnalyticPath),
}

/// Behavior after the horizon.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail {
    /// The path is constant after the horizon.
    None,
    /// `u(t) = exp(πi(F(t) + 1))` for a commuting family with `F(∞) = 0`;
    /// holds `F` at the horizon.
    CommutingFamily { f_at_horizon: Elem },
}

#[derive(Clone)]
pub struct InvertiblePath {
    rep: Arc<RegularRep>,
    source: PathSource,
    horizon: f64,
    tail: Tail,
    breakpoints: Vec<f64>,
    condition_cap: f64,
}

impl fmt::Debug for InvertiblePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let source = match &self.source {
            PathSource::Samples(s) => format!("{} samples", s.len()),
            PathSource::Analytic(a) => format!("analytic(log-derivative: {})", a.log_derivative.is_some()),
        };
        f.debug_struct("InvertiblePath")
            .field("group", self.rep.group().kind())
            .field("k", &self.rep.k())
            .field("source", &source)
            .field("horizon", &self.horizon)
            .field("tail", &self.tail)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

fn identity_defect(u: &Elem) -> f64 {
    let unit = (*u.unit_part() - C64::new(1.0, 0.0)).norm();
    u.coefficients().values().map(|m| m.max_abs()).fold(unit, f64::max)
}

impl InvertiblePath {
    /// A sampled path. Times must start at 0 and increase strictly; the
    /// horizon is the last sample time.
    pub fn from_samples(samples: Vec<(f64, Elem)>, tail: Tail) -> Result<Self> {
        let Some((t0, u0)) = samples.first() else {
            return input("a sampled path needs at least one sample");
        };
        if *t0 != 0.0 {
            return input(format!("first sample time is {t0}, expected 0"));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return input("sample times must be strictly increasing");
        }
        let rep = Arc::new(RegularRep::for_elem(u0)?);
        for (_, u) in &samples {
            if u.group() != rep.group() || u.k() != rep.k() {
                return input("samples mix groups or matrix sizes");
            }
        }
        check_start(u0)?;
        let path = InvertiblePath {
            rep,
            horizon: samples.last().unwrap().0,
            source: PathSource::Samples(samples),
            tail,
            breakpoints: Vec::new(),
            condition_cap: CONDITION_CAP,
        };
        path.check_tail()?;
        if let PathSource::Samples(s) = &path.source {
            for (t, u) in s {
                path.check_condition(*t, &path.rep.matrix(u))?;
            }
        }
        Ok(path)
    }

    /// A path given by evaluators on `[0, horizon]`.
    pub fn analytic(
        group: &GroupSpec,
        k: usize,
        eval: AnalyticPath,
        horizon: f64,
        tail: Tail,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return input(format!("horizon must be positive and finite, got {horizon}"));
        }
        let rep = Arc::new(RegularRep::new(group, k)?);
        let u0 = (eval.value)(0.0)?;
        if u0.group() != group || u0.k() != k {
            return input("evaluator returns elements over a different group or matrix size");
        }
        check_start(&u0)?;
        let mut breakpoints: Vec<f64> = breakpoints.into_iter().filter(|&b| b > 0.0 && b < horizon).collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let path = InvertiblePath {
            rep,
            source: PathSource::Analytic(eval),
            horizon,
            tail,
            breakpoints,
            condition_cap: CONDITION_CAP,
        };
        path.check_tail()?;
        Ok(path)
    }

    pub fn with_condition_cap(mut self, cap: f64) -> Self {
        self.condition_cap = cap;
        self
    }

    fn check_tail(&self) -> Result<()> {
        if let Tail::CommutingFamily { f_at_horizon } = &self.tail {
            if f_at_horizon.group() != self.rep.group() || f_at_horizon.k() != self.rep.k() {
                return input("tail family lives over a different group or matrix size");
            }
        }
        Ok(())
    }

    fn check_condition(&self, t: f64, u: &DMatrix<C64>) -> Result<()> {
        let condition = condition_number(u);
        self.check_condition_value(t, condition)
    }

    fn check_condition_value(&self, t: f64, condition: f64) -> Result<()> {
        if condition < self.condition_cap {
            Ok(())
        } else {
            Err(Error::SingularPath { t, condition, cap: self.condition_cap })
        }
    }

    pub fn group(&self) -> &GroupSpec {
        self.rep.group()
    }

    pub fn k(&self) -> usize {
        self.rep.k()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn source(&self) -> &PathSource {
        &self.source
    }

    /// `u(t)` for analytic paths, or the sample at exactly `t`.
    pub fn value_at(&self, t: f64) -> Result<Elem> {
        match &self.source {
            PathSource::Analytic(a) => (a.value)(t),
            PathSource::Samples(s) => s
                .iter()
                .find(|(ts, _)| *ts == t)
                .map(|(_, u)| u.clone())
                .ok_or_else(|| Error::Input(format!("no sample at t = {t}"))),
        }
    }

    fn end_value(&self) -> Result<Elem> {
        match &self.source {
            PathSource::Analytic(a) => (a.value)(self.horizon),
            PathSource::Samples(s) => Ok(s.last().unwrap().1.clone()),
        }
    }

    /// `tr_h(u̇ u⁻¹)` from values, by an LU solve against the identity
    /// block column.
    fn log_derivative_trace(&self, t: f64, u: &Elem, du: &Elem, class: &[GroupElement]) -> Result<C64> {
        let um = self.rep.matrix(u);
        self.check_condition(t, &um)?;
        let lu = um.lu();
        let y = lu
            .solve(&self.rep.identity_column())
            .ok_or_else(|| Error::SingularPath { t, condition: f64::INFINITY, cap: self.condition_cap })?;
        let col = self.rep.matrix(du) * y;
        self.rep.class_trace(&col, class)
    }
}

fn check_start(u0: &Elem) -> Result<()> {
    let defect = identity_defect(u0);
    if defect > START_TOL {
        return input(format!("path must start at the identity; u(0) deviates by {defect:.3e}"));
    }
    Ok(())
}

/// Result of a `τ_h` evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauResult {
    pub value: C64,
    /// Quadrature error estimate; the tail term is exact.
    pub error: f64,
    /// Contribution of the tail descriptor.
    pub tail: C64,
    pub evaluations: usize,
    pub converged: bool,
    /// `"gauss-legendre"` for analytic paths, `"simpson"` for samples.
    pub method: String,
}

/// `τ_h(u) = (1/2πi) ∫₀^T tr_h(u̇ u⁻¹) dt`, plus `−½ tr_h(F(T))` for a
/// commuting-family tail.
pub fn tau_h(path: &InvertiblePath, class: &[GroupElement], quad: &QuadConfig) -> Result<TauResult> {
    for g in class {
        path.rep.index_of(g)?;
        if *g == path.group().identity() {
            return input("class contains the identity; tr_h needs h ≠ e");
        }
    }
    let two_pi_i = 2.0 * PI * I;
    let tail = match &path.tail {
        Tail::None => C64::new(0.0, 0.0),
        Tail::CommutingFamily { f_at_horizon } => -0.5 * f_at_horizon.tr_h(class)?,
    };
    match &path.source {
        PathSource::Analytic(a) => {
            let integrand = |t: f64| -> Result<C64> {
                let trace = match &a.log_derivative {
                    Some(ld) => {
                        match &a.condition {
                            Some(c) => path.check_condition_value(t, c(t))?,
                            None => path.check_condition(t, &path.rep.matrix(&(a.value)(t)?))?,
                        }
                        ld(t)?.tr_h(class)?
                    }
                    None => path.log_derivative_trace(t, &(a.value)(t)?, &(a.derivative)(t)?, class)?,
                };
                Ok(trace / two_pi_i)
            };
            let r = integrate(integrand, 0.0, path.horizon, &path.breakpoints, quad)?;
            Ok(TauResult {
                value: r.value + tail,
                error: r.error,
                tail,
                evaluations: r.evaluations,
                converged: r.converged,
                method: "gauss-legendre".into(),
            })
        }
        PathSource::Samples(s) => {
            let times: Vec<f64> = s.iter().map(|(t, _)| *t).collect();
            let mut values = Vec::with_capacity(s.len());
            for i in 0..s.len() {
                if s.len() == 1 {
                    values.push(C64::new(0.0, 0.0));
                    break;
                }
                let weights = derivative_weights(&times, i);
                let mut du = Elem::zero(path.group(), path.k());
                for (j, w) in weights {
                    du = du.add(&s[j].1.scale(&C64::new(w, 0.0)))?;
                }
                values.push(path.log_derivative_trace(times[i], &s[i].1, &du, class)? / two_pi_i);
            }
            let (value, error) = simpson(&times, &values);
            Ok(TauResult {
                value: value + tail,
                error,
                tail,
                evaluations: s.len(),
                converged: true,
                method: "simpson".into(),
            })
        }
    }
}

/// Weights of the derivative at `times[i]` of the Lagrange interpolant
/// through up to five neighbouring samples.
fn derivative_weights(times: &[f64], i: usize) -> Vec<(usize, f64)> {
    let n = times.len();
    let width = n.min(5);
    let start = i.saturating_sub(width / 2).min(n - width);
    let idx: Vec<usize> = (start..start + width).collect();
    let x = times[i];
    idx.iter()
        .map(|&j| {
            let w = if j == i {
                idx.iter().filter(|&&m| m != i).map(|&m| 1.0 / (x - times[m])).sum()
            } else {
                let num: f64 = idx.iter().filter(|&&m| m != i && m != j).map(|&m| x - times[m]).product();
                let den: f64 = idx.iter().filter(|&&m| m != j).map(|&m| times[j] - times[m]).product();
                num / den
            };
            (j, w)
        })
        .collect()
}

/// Composite Simpson on a nonuniform grid; an odd trailing interval uses
/// the quadratic through the last three points. The error estimate is the
/// gap to the trapezoid rule.
fn simpson(x: &[f64], f: &[C64]) -> (C64, f64) {
    let n = x.len();
    if n < 2 {
        return (C64::new(0.0, 0.0), 0.0);
    }
    let trap: C64 = (0..n - 1).map(|i| (f[i] + f[i + 1]) * (0.5 * (x[i + 1] - x[i]))).sum();
    if n == 2 {
        return (trap, 0.0);
    }
    let mut total = C64::new(0.0, 0.0);
    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        total += (f[i] * (2.0 - h1 / h0) + f[i + 1] * ((h0 + h1).powi(2) / (h0 * h1)) + f[i + 2] * (2.0 - h0 / h1))
            * ((h0 + h1) / 6.0);
        i += 2;
    }
    if i + 1 < n {
        let (a, b, c) = (n - 3, n - 2, n - 1);
        let h0 = x[b] - x[a];
        let h1 = x[c] - x[b];
        total += (f[c] * ((2.0 * h1 + 3.0 * h0) / (h0 + h1)) + f[b] * ((h1 + 3.0 * h0) / h0)
            - f[a] * (h1 * h1 / (h0 * (h0 + h1))))
            * (h1 / 6.0);
    }
    (total, (total - trap).norm())
}

/// An idempotent `p = p²` of the group algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Idempotent(Elem);

impl Idempotent {
    pub fn new(p: Elem) -> Result<Self> {
        let defect = p.convolve(&p)?.sub(&p)?.max_abs();
        let scale = p.max_abs().max(1.0);
        if defect > IDEMPOTENT_TOL * scale {
            return input(format!("not idempotent: ‖p² − p‖ = {defect:.3e}"));
        }
        Ok(Idempotent(p))
    }

    /// Checks `p² = p` exactly before converting to floating point.
    pub fn from_exact(p: &AlgElem<GaussianRational>) -> Result<Self> {
        if p.convolve(p)? != *p {
            return input("not idempotent in exact arithmetic");
        }
        Ok(Idempotent(p.map_scalar(|x| x.to_c64())))
    }

    pub fn elem(&self) -> &Elem {
        &self.0
    }
}

/// `1 + (e^{iα} − 1) p`, the exponential `exp(iα p)` of an idempotent.
fn idempotent_exp(p: &Elem, alpha: f64) -> Elem {
    let z = C64::from_polar(1.0, alpha) - 1.0;
    Elem::one(p.group(), p.k()).add(&p.scale(&z)).expect("same group")
}

/// `u(t) = exp(2πi(1 − t)p)` on `[0, 1]`, constant 1 afterwards.
pub fn boundary_path(p: &Idempotent) -> Result<InvertiblePath> {
    let p = p.elem().clone();
    let (group, k) = (p.group().clone(), p.k());
    let pv = p.clone();
    let value: EvalFn = Arc::new(move |t| Ok(idempotent_exp(&pv, 2.0 * PI * (1.0 - t.min(1.0)))));
    let pd = p.clone();
    let derivative: EvalFn = Arc::new(move |t| {
        if t > 1.0 {
            return Ok(Elem::zero(pd.group(), pd.k()));
        }
        Ok(pd.scale(&(-2.0 * PI * I * C64::from_polar(1.0, 2.0 * PI * (1.0 - t)))))
    });
    InvertiblePath::analytic(
        &group,
        k,
        AnalyticPath { value, derivative, log_derivative: None, condition: None },
        1.0,
        Tail::None,
        Vec::new(),
    )
}

/// The loop `θ ↦ e^{2πiθ} p + (1 − p)` on `[0, 1]`, with the closed-form
/// log-derivative `2πi p`.
pub fn winding_loop(p: &Idempotent) -> Result<InvertiblePath> {
    let p = p.elem().clone();
    let (group, k) = (p.group().clone(), p.k());
    let pv = p.clone();
    let value: EvalFn = Arc::new(move |t| Ok(idempotent_exp(&pv, 2.0 * PI * t)));
    let pd = p.clone();
    let derivative: EvalFn = Arc::new(move |t| Ok(pd.scale(&(2.0 * PI * I * C64::from_polar(1.0, 2.0 * PI * t)))));
    let log = p.scale(&(2.0 * PI * I));
    let log_derivative: EvalFn = Arc::new(move |_| Ok(log.clone()));
    InvertiblePath::analytic(
        &group,
        k,
        AnalyticPath { value, derivative, log_derivative: Some(log_derivative), condition: None },
        1.0,
        Tail::None,
        Vec::new(),
    )
}

/// The normalizing function `erf`.
pub fn normalizing(x: f64) -> f64 {
    libm::erf(x)
}

fn normalizing_derivative(x: f64) -> f64 {
    2.0 / PI.sqrt() * (-x * x).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoConfig {
    /// Smallest admissible `|λ|` of the operator.
    pub spectral_gap: f64,
    /// Integration horizon; defaults to twice the spectral radius.
    pub horizon: Option<f64>,
    /// Panel boundaries; defaults to the distinct `|λ|` below the horizon.
    pub grid: Option<Vec<f64>>,
}

impl Default for RhoConfig {
    fn default() -> Self {
        RhoConfig { spectral_gap: 1e-6, horizon: None, grid: None }
    }
}

/// Diagonalizes a self-adjoint operator in the regular representation,
/// enforcing the spectral gap.
pub(crate) fn self_adjoint_eigen(rep: &RegularRep, d: &Elem, gap: f64) -> Result<HermitianEigen> {
    let m = rep.matrix(d);
    let defect = hermitian_defect(&m);
    if defect > HERMITIAN_TOL {
        return input(format!("operator is not self-adjoint (relative defect {defect:.3e})"));
    }
    let eig = HermitianEigen::new(&m);
    if let Some(l) = eig.values.iter().find(|l| l.abs() < gap) {
        return input(format!("singular value {:.3e} below the spectral gap {gap:.3e}", l.abs()));
    }
    Ok(eig)
}

/// `u(t) = exp(πi(φ(D/t) + 1))` with `φ = erf` and `u(0) = exp(πi(sign D + 1)) = 1`.
/// The tail is the commuting family `F(T) = φ(D/T)`.
pub fn rho_path(d: &Elem, cfg: &RhoConfig) -> Result<InvertiblePath> {
    if !(cfg.spectral_gap > 0.0) {
        return input("spectral gap must be positive");
    }
    let rep = Arc::new(RegularRep::for_elem(d)?);
    let eig = Arc::new(self_adjoint_eigen(&rep, d, cfg.spectral_gap)?);
    let radius = eig.values.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let horizon = cfg.horizon.unwrap_or(2.0 * radius);
    if !(horizon > 0.0) {
        return input("horizon must be positive");
    }
    let phi = |l: f64, t: f64| if t == 0.0 { l.signum() } else { normalizing(l / t) };
    let dphi = |l: f64, t: f64| if t == 0.0 { 0.0 } else { normalizing_derivative(l / t) * (-l / (t * t)) };

    let (r, e) = (rep.clone(), eig.clone());
    let value: EvalFn = Arc::new(move |t| {
        let m = e.apply(|l| C64::from_polar(1.0, PI * (phi(l, t) + 1.0)));
        Ok(r.pull_back(&m, C64::new(1.0, 0.0)))
    });
    let (r, e) = (rep.clone(), eig.clone());
    let derivative: EvalFn = Arc::new(move |t| {
        let m = e.apply(|l| C64::from_polar(1.0, PI * (phi(l, t) + 1.0)) * PI * I * dphi(l, t));
        Ok(r.pull_back(&m, C64::new(0.0, 0.0)))
    });
    let (r, e) = (rep.clone(), eig.clone());
    let log_derivative: EvalFn = Arc::new(move |t| {
        let m = e.apply(|l| PI * I * dphi(l, t));
        Ok(r.pull_back(&m, C64::new(0.0, 0.0)))
    });
    // u(t) has unimodular eigenvalues on a common orthonormal basis.
    let condition: ScalarFn = Arc::new(|_| 1.0);
    let f_at_horizon = rep.pull_back(&eig.apply(|l| C64::new(phi(l, horizon), 0.0)), C64::new(0.0, 0.0));
    let grid = cfg.grid.clone().unwrap_or_else(|| eig.values.iter().map(|l| l.abs()).collect());
    InvertiblePath::analytic(
        d.group(),
        d.k(),
        AnalyticPath { value, derivative, log_derivative: Some(log_derivative), condition: Some(condition) },
        horizon,
        Tail::CommutingFamily { f_at_horizon },
        grid,
    )
}

/// A strictly increasing time change `t = φ(s)` with `φ(0) = 0`.
#[derive(Clone)]
pub enum TimeMap {
    Identity,
    /// `φ(s) = scale · s`.
    Linear { scale: f64 },
    /// `φ(s) = s^exponent`, exponent ≥ 1.
    Power { exponent: f64 },
    Custom { forward: ScalarFn, derivative: ScalarFn, inverse: ScalarFn },
}

impl fmt::Debug for TimeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeMap::Identity => write!(f, "Identity"),
            TimeMap::Linear { scale } => write!(f, "Linear({scale})"),
            TimeMap::Power { exponent } => write!(f, "Power({exponent})"),
            TimeMap::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl TimeMap {
    fn parts(&self) -> Result<(ScalarFn, ScalarFn, ScalarFn)> {
        Ok(match *self {
            TimeMap::Identity => (Arc::new(|s| s), Arc::new(|_| 1.0), Arc::new(|t| t)),
            TimeMap::Linear { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return input("linear time map needs a positive finite scale");
                }
                (Arc::new(move |s| scale * s), Arc::new(move |_| scale), Arc::new(move |t| t / scale))
            }
            TimeMap::Power { exponent: p } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return input("power time map needs a finite exponent ≥ 1");
                }
                (Arc::new(move |s: f64| s.powf(p)), Arc::new(move |s: f64| p * s.powf(p - 1.0)), Arc::new(move |t: f64| t.powf(1.0 / p)))
            }
            TimeMap::Custom { ref forward, ref derivative, ref inverse } => {
                (forward.clone(), derivative.clone(), inverse.clone())
            }
        })
    }
}

/// Number of grid points on which custom time maps are checked.
const MONOTONE_CHECK_POINTS: usize = 1024;

/// `v(s) = u(φ(s))`. `τ_h` is unchanged.
pub fn reparametrize(path: &InvertiblePath, map: &TimeMap) -> Result<InvertiblePath> {
    let (fwd, dfwd, inv) = map.parts()?;
    let new_horizon = inv(path.horizon);
    if !(new_horizon > 0.0 && new_horizon.is_finite()) && path.horizon > 0.0 {
        return input("time map does not reach the horizon");
    }
    if fwd(0.0) != 0.0 {
        return input("time map must fix 0");
    }
    let grid: Vec<f64> = (0..=MONOTONE_CHECK_POINTS)
        .map(|i| fwd(new_horizon * i as f64 / MONOTONE_CHECK_POINTS as f64))
        .collect();
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return input("time map is not strictly increasing");
    }
    let mut out = path.clone();
    out.horizon = new_horizon;
    out.breakpoints = path.breakpoints.iter().map(|&b| inv(b)).collect();
    match &path.source {
        PathSource::Samples(s) => {
            let mut samples: Vec<(f64, Elem)> = s.iter().map(|(t, u)| (inv(*t), u.clone())).collect();
            samples[0].0 = 0.0;
            if let Some(last) = samples.last_mut() {
                last.0 = new_horizon;
            }
            out.source = PathSource::Samples(samples);
        }
        PathSource::Analytic(a) => {
            let (v, f1) = (a.value.clone(), fwd.clone());
            let value: EvalFn = Arc::new(move |s| v(f1(s)));
            let (d, f1, df) = (a.derivative.clone(), fwd.clone(), dfwd.clone());
            let derivative: EvalFn = Arc::new(move |s| Ok(d(f1(s))?.scale(&C64::new(df(s), 0.0))));
            let log_derivative = a.log_derivative.clone().map(|ld| {
                let (f1, df) = (fwd.clone(), dfwd.clone());
                Arc::new(move |s: f64| Ok(ld(f1(s))?.scale(&C64::new(df(s), 0.0)))) as EvalFn
            });
            let condition = a.condition.clone().map(|c| {
                let f1 = fwd.clone();
                Arc::new(move |s: f64| c(f1(s))) as ScalarFn
            });
            out.source = PathSource::Analytic(AnalyticPath { value, derivative, log_derivative, condition });
        }
    }
    Ok(out)
}

/// `path1` followed by `path2 · u₁(T₁)`. When `path1` ends at the identity
/// this is plain juxtaposition; in general the right factor is constant, so
/// `τ_h` is additive.
pub fn concat(path1: &InvertiblePath, path2: &InvertiblePath) -> Result<InvertiblePath> {
    if path1.group() != path2.group() || path1.k() != path2.k() {
        return input("paths live over different groups or matrix sizes");
    }
    if path1.tail != Tail::None {
        return input("the first path of a concatenation must have no tail");
    }
    let t1 = path1.horizon;
    let end = path1.end_value()?;
    let mut breakpoints = path1.breakpoints.clone();
    breakpoints.push(t1);
    breakpoints.extend(path2.breakpoints.iter().map(|b| b + t1));
    let source = match (&path1.source, &path2.source) {
        (PathSource::Samples(s1), PathSource::Samples(s2)) => {
            let mut samples = s1.clone();
            for (t, u) in s2.iter().skip(1) {
                samples.push((t + t1, u.convolve(&end)?));
            }
            PathSource::Samples(samples)
        }
        (PathSource::Analytic(a1), PathSource::Analytic(a2)) => {
            let (v1, v2, e) = (a1.value.clone(), a2.value.clone(), end.clone());
            let value: EvalFn = Arc::new(move |t| if t <= t1 { v1(t) } else { v2(t - t1)?.convolve(&e) });
            let (d1, d2, e) = (a1.derivative.clone(), a2.derivative.clone(), end.clone());
            let derivative: EvalFn = Arc::new(move |t| if t <= t1 { d1(t) } else { d2(t - t1)?.convolve(&e) });
            let log_derivative = match (&a1.log_derivative, &a2.log_derivative) {
                (Some(l1), Some(l2)) => {
                    let (l1, l2) = (l1.clone(), l2.clone());
                    Some(Arc::new(move |t: f64| if t <= t1 { l1(t) } else { l2(t - t1) }) as EvalFn)
                }
                _ => None,
            };
            let condition = match (&a1.condition, &a2.condition) {
                (Some(c1), Some(c2)) if identity_defect(&end) <= START_TOL => {
                    let (c1, c2) = (c1.clone(), c2.clone());
                    Some(Arc::new(move |t: f64| if t <= t1 { c1(t) } else { c2(t - t1) }) as ScalarFn)
                }
                _ => None,
            };
            PathSource::Analytic(AnalyticPath { value, derivative, log_derivative, condition })
        }
        _ => return input("cannot concatenate a sampled path with an analytic one"),
    };
    let mut out = InvertiblePath {
        rep: path1.rep.clone(),
        source,
        horizon: t1 + path2.horizon,
        tail: path2.tail.clone(),
        breakpoints,
        condition_cap: path1.condition_cap.min(path2.condition_cap),
    };
    out.breakpoints.retain(|&b| b > 0.0 && b < out.horizon);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement::*;
    use crate::matrix::Mat;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn half_sum_z2() -> (GroupSpec, Idempotent) {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let p = AlgElem::from_terms(&z2, 1, c(0.0), [(Cyclic(0), Mat::identity(1).scale(&c(0.5))), (Cyclic(1), Mat::identity(1).scale(&c(0.5)))]).unwrap();
        (z2, Idempotent::new(p).unwrap())
    }

    #[test]
    fn constant_path_has_zero_tau() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let one = Elem::one(&z2, 1);
        let path = InvertiblePath::from_samples(vec![(0.0, one.clone()), (0.5, one.clone()), (1.0, one)], Tail::None).unwrap();
        let r = tau_h(&path, &[Cyclic(1)], &QuadConfig::default()).unwrap();
        assert_eq!(r.value, c(0.0));
    }

    #[test]
    fn winding_and_boundary_on_z2() {
        let (_, p) = half_sum_z2();
        let quad = QuadConfig::default();
        let w = tau_h(&winding_loop(&p).unwrap(), &[Cyclic(1)], &quad).unwrap();
        assert!((w.value - c(0.5)).norm() < 1e-8);
        let b = tau_h(&boundary_path(&p).unwrap(), &[Cyclic(1)], &quad).unwrap();
        assert!((b.value + c(0.5)).norm() < 1e-8);
    }

    #[test]
    fn identity_supported_projection_winds_trivially() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let p = Idempotent::new(Elem::delta(&z3, Cyclic(0), Mat::unit(2, 0, 0)).unwrap()).unwrap();
        let w = tau_h(&winding_loop(&p).unwrap(), &[Cyclic(1)], &QuadConfig::default()).unwrap();
        assert_eq!(w.value, c(0.0));
    }

    #[test]
    fn rho_path_on_z2() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let d = Elem::delta(&z2, Cyclic(1), Mat::identity(1)).unwrap();
        let path = rho_path(&d, &RhoConfig::default()).unwrap();
        assert!(identity_defect(&path.value_at(0.0).unwrap()) < 1e-15);
        let r = tau_h(&path, &[Cyclic(1)], &QuadConfig::default()).unwrap();
        assert!((r.value + c(0.5)).norm() < 1e-6, "{:?}", r);
        let scalar = Elem::delta(&z2, Cyclic(0), Mat::identity(1).scale(&c(2.0))).unwrap();
        let r = tau_h(&rho_path(&scalar, &RhoConfig::default()).unwrap(), &[Cyclic(1)], &QuadConfig::default()).unwrap();
        assert!(r.value.norm() < 1e-14);
    }

    #[test]
    fn rho_path_rejects_bad_operators() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let skew = Elem::delta(&z2, Cyclic(1), Mat::identity(1).scale(&C64::new(0.0, 1.0))).unwrap();
        assert!(rho_path(&skew, &RhoConfig::default()).is_err());
        let singular = Elem::from_terms(&z2, 1, c(0.0), [(Cyclic(0), Mat::identity(1)), (Cyclic(1), Mat::identity(1))]).unwrap();
        let err = rho_path(&singular, &RhoConfig::default()).unwrap_err();
        assert!(err.to_string().contains("singular value"));
    }

    #[test]
    fn reparametrization_invariance() {
        let (_, p) = half_sum_z2();
        let quad = QuadConfig::default();
        let loop_ = winding_loop(&p).unwrap();
        let base = tau_h(&loop_, &[Cyclic(1)], &quad).unwrap().value;
        let fast = reparametrize(&loop_, &TimeMap::Linear { scale: 2.0 }).unwrap();
        assert!((fast.horizon() - 0.5).abs() < 1e-15);
        assert!((tau_h(&fast, &[Cyclic(1)], &quad).unwrap().value - base).norm() < 1e-10);
        let bd = boundary_path(&p).unwrap();
        let sq = reparametrize(&bd, &TimeMap::Power { exponent: 2.0 }).unwrap();
        assert!((tau_h(&sq, &[Cyclic(1)], &quad).unwrap().value + c(0.5)).norm() < 1e-8);
        let backwards = TimeMap::Custom { forward: Arc::new(|s| -s), derivative: Arc::new(|_| -1.0), inverse: Arc::new(|t| -t) };
        assert!(reparametrize(&bd, &backwards).is_err());
    }

    #[test]
    fn concatenation_adds() {
        let (_, p) = half_sum_z2();
        let quad = QuadConfig::default();
        let a = winding_loop(&p).unwrap();
        let b = boundary_path(&p).unwrap();
        let ab = concat(&a, &b).unwrap();
        let total = tau_h(&ab, &[Cyclic(1)], &quad).unwrap().value;
        assert!(total.norm() < 1e-8);
    }

    #[test]
    fn sampled_paths_use_finite_differences() {
        let (z2, p) = half_sum_z2();
        let n = 201;
        let samples: Vec<(f64, Elem)> = (0..n)
            .map(|i| {
                let t = (i as f64 / (n - 1) as f64).powf(1.3);
                (t, idempotent_exp(p.elem(), 2.0 * PI * t))
            })
            .collect();
        let path = InvertiblePath::from_samples(samples, Tail::None).unwrap();
        assert_eq!(path.group(), &z2);
        let r = tau_h(&path, &[Cyclic(1)], &QuadConfig::default()).unwrap();
        assert!((r.value - c(0.5)).norm() < 1e-6, "{:?}", r.value);
    }

    #[test]
    fn simpson_is_exact_on_quadratics() {
        let x = [0.0, 0.1, 0.35, 0.5, 0.9, 1.0];
        let f: Vec<C64> = x.iter().map(|t| c(3.0 * t * t - t + 2.0)).collect();
        let (v, _) = simpson(&x, &f);
        assert!((v.re - (1.0 - 0.5 + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn invariants_enforced() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let one = Elem::one(&z2, 1);
        let two = Elem::scalar(&z2, 1, c(2.0));
        assert!(InvertiblePath::from_samples(vec![(0.0, two.clone())], Tail::None).is_err());
        assert!(InvertiblePath::from_samples(vec![(0.0, one.clone()), (0.0, one.clone())], Tail::None).is_err());
        let singular = Elem::from_terms(&z2, 1, c(0.0), [(Cyclic(0), Mat::identity(1)), (Cyclic(1), Mat::identity(1))]).unwrap();
        let err = InvertiblePath::from_samples(vec![(0.0, one), (1.0, singular)], Tail::None).unwrap_err();
        assert!(matches!(err, Error::SingularPath { .. }));
        let not_idem = Elem::scalar(&z2, 1, c(2.0));
        assert!(Idempotent::new(not_idem).is_err());
    }
}
