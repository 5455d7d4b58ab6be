//! Truncated graded series in formal Chern roots, the twisted Â classes,
//! and the fixed-point index formula over user-described fixed components.
//!
//! Every root has degree 2. A ring truncated at `cap` keeps monomials of
//! total degree at most `cap`, so a component of dimension `d` needs
//! `cap = d`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::scalar::Coeff;

type C64 = Complex64;

/// Names of the formal roots and the degree cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    vars: Arc<Vec<String>>,
    cap: u32,
}

impl GradedRing {
    pub fn new(vars: Vec<String>, cap: u32) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v) {
                return input(format!("root names must be nonempty and distinct, got {v:?}"));
            }
        }
        Ok(GradedRing { vars: Arc::new(vars), cap })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Input(format!("unknown root {name:?}")))
    }

    pub fn zero<S: Coeff>(&self) -> GradedPoly<S> {
        GradedPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn constant<S: Coeff>(&self, c: S) -> GradedPoly<S> {
        let mut p = self.zero();
        p.insert(vec![0; self.vars.len()], c);
        p
    }

    pub fn one<S: Coeff>(&self) -> GradedPoly<S> {
        self.constant(S::one())
    }

    pub fn var<S: Coeff>(&self, name: &str) -> Result<GradedPoly<S>> {
        self.univariate(name, &[S::zero(), S::one()])
    }

    /// `Σ_n coeffs[n] · x^n` for the root `x = name`.
    pub fn univariate<S: Coeff>(&self, name: &str, coeffs: &[S]) -> Result<GradedPoly<S>> {
        let j = self.var_index(name)?;
        let mut p = self.zero();
        for (n, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; self.vars.len()];
            e[j] = n as u32;
            p.insert(e, c.clone());
        }
        Ok(p)
    }

    /// Largest power of a single root that survives truncation.
    fn max_power(&self) -> usize {
        (self.cap / 2) as usize
    }
}

/// A truncated polynomial in the ring's roots.
#[derive(Clone, PartialEq)]
pub struct GradedPoly<S> {
    ring: GradedRing,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Coeff> fmt::Debug for GradedPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (v, p) in self.ring.vars.iter().zip(e) {
                match p {
                    0 => {}
                    1 => write!(f, "·{v}")?,
                    _ => write!(f, "·{v}^{p}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [deg ≤ {}]", self.ring.cap)
    }
}

fn graded_degree(e: &[u32]) -> u32 {
    2 * e.iter().sum::<u32>()
}

impl<S: Coeff> GradedPoly<S> {
    fn insert(&mut self, e: Vec<u32>, c: S) {
        if graded_degree(&e) > self.ring.cap || c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, S> {
        &self.terms
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exponents: &[u32]) -> S {
        self.terms.get(exponents).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coefficient(&vec![0; self.ring.vars.len()])
    }

    /// The homogeneous part of graded degree `d`.
    pub fn degree_part(&self, d: u32) -> GradedPoly<S> {
        let mut p = self.ring.zero();
        for (e, c) in &self.terms {
            if graded_degree(e) == d {
                p.insert(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return input("graded polynomials live in different rings");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.ring.zero();
        for (e, x) in &self.terms {
            out.insert(e.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.ring.zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if graded_degree(&e) <= self.ring.cap {
                    out.insert(e, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    /// `Σ_n c_n · self^n`, enough terms for the truncation.
    fn compose(&self, coeffs: impl Fn(usize) -> S) -> Result<Self> {
        let mut out = self.ring.constant(coeffs(0));
        let mut power = self.ring.one();
        for n in 1..=self.ring.max_power() {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&coeffs(n)))?;
        }
        Ok(out)
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return input("exp needs a vanishing constant term");
        }
        let mut inv_fact = vec![S::one()];
        for n in 1..=self.ring.max_power() {
            let prev = inv_fact[n - 1].clone();
            inv_fact.push(prev / S::from_i64(n as i64));
        }
        self.compose(|n| inv_fact[n].clone())
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return input("inverse needs a nonzero constant term");
        }
        let inv_c = S::one() / c;
        let nilpotent = self.scale(&inv_c).sub(&self.ring.one())?;
        let sign = |n: usize| if n % 2 == 0 { S::one() } else { -S::one() };
        Ok(nilpotent.compose(sign)?.scale(&inv_c))
    }
}

/// Truncated univariate power series helpers (coefficients of `x^n`).
fn series_mul<S: Coeff>(a: &[S], b: &[S], len: usize) -> Vec<S> {
    (0..len)
        .map(|n| (0..=n).fold(S::zero(), |acc, i| acc + a[i].clone() * b[n - i].clone()))
        .collect()
}

fn series_inv<S: Coeff>(a: &[S], len: usize) -> Vec<S> {
    let inv0 = S::one() / a[0].clone();
    let mut b = vec![inv0.clone()];
    for n in 1..len {
        let s = (1..=n).fold(S::zero(), |acc, k| acc + a[k].clone() * b[n - k].clone());
        b.push(-(s * inv0.clone()));
    }
    b
}

/// `Σ (scale·x)^n / n!`.
fn exp_series<S: Coeff>(scale: S, len: usize) -> Vec<S> {
    let mut out = vec![S::one()];
    for n in 1..len {
        let prev = out[n - 1].clone();
        out.push(prev * scale.clone() / S::from_i64(n as i64));
    }
    out
}

fn product_over<S: Coeff>(ring: &GradedRing, roots: &[&str], coeffs: &[S]) -> Result<GradedPoly<S>> {
    let mut out = ring.one();
    for r in roots {
        out = out.mul(&ring.univariate(r, coeffs)?)?;
    }
    Ok(out)
}

/// `Â_θ(V) = ∏_j e^{(x_j+iθ)/2} / (e^{x_j+iθ} − 1) = ∏_j 1 / (2 sinh((x_j+iθ)/2))`.
pub fn a_hat_theta(ring: &GradedRing, roots: &[&str], theta: f64) -> Result<GradedPoly<C64>> {
    if roots.is_empty() {
        return input("Â_θ needs at least one root");
    }
    let rot = C64::from_polar(1.0, theta);
    if (rot - 1.0).norm() < 1e-12 {
        return Err(Error::Pole(format!("Â_θ degenerates at θ = {theta}; use the ordinary Â genus")));
    }
    let len = ring.max_power() + 1;
    let num: Vec<C64> = exp_series(C64::new(0.5, 0.0), len).into_iter().map(|c| c * C64::from_polar(1.0, theta / 2.0)).collect();
    let mut den: Vec<C64> = exp_series(C64::new(1.0, 0.0), len).into_iter().map(|c| c * rot).collect();
    den[0] -= 1.0;
    let f = series_mul(&num, &series_inv(&den, len), len);
    product_over(ring, roots, &f)
}

/// `Â_π(V) = (2i)^{−k} ∏_j 1 / cosh(x_j/2)` for an oriented real bundle of
/// rank `2k` with Euler roots `x_j`.
pub fn a_hat_pi<S: Coeff>(ring: &GradedRing, euler_roots: &[&str]) -> Result<GradedPoly<S>> {
    if euler_roots.is_empty() {
        return input("Â_π needs at least one root");
    }
    let len = ring.max_power() + 1;
    // cosh(x/2) = Σ x^{2n} / (4^n (2n)!)
    let mut cosh = vec![S::zero(); len];
    let mut c = S::one();
    for n in 0..len {
        if 2 * n < len {
            cosh[2 * n] = c.clone();
        }
        c = c / S::from_i64(4 * ((2 * n + 1) * (2 * n + 2)) as i64);
    }
    let half_inv_i = S::one() / (S::from_i64(2) * S::i());
    let f: Vec<S> = series_inv(&cosh, len).into_iter().map(|x| x * half_inv_i.clone()).collect();
    product_over(ring, euler_roots, &f)
}

/// `Â = ∏_j (x_j/2) / sinh(x_j/2)`.
pub fn a_hat_genus<S: Coeff>(ring: &GradedRing, roots: &[&str]) -> Result<GradedPoly<S>> {
    let len = ring.max_power() + 1;
    // sinh(x/2)/(x/2) = Σ x^{2n} / (4^n (2n+1)!)
    let mut s = vec![S::zero(); len];
    let mut c = S::one();
    for n in 0..len {
        if 2 * n < len {
            s[2 * n] = c.clone();
        }
        c = c / S::from_i64(4 * ((2 * n + 2) * (2 * n + 3)) as i64);
    }
    product_over(ring, roots, &series_inv(&s, len))
}

/// `ch(E) = Σ_i e^{x_i}`.
pub fn chern_character<S: Coeff>(ring: &GradedRing, roots: &[&str]) -> Result<GradedPoly<S>> {
    let e = exp_series(S::one(), ring.max_power() + 1);
    let mut out = ring.zero();
    for r in roots {
        out = out.add(&ring.univariate(r, &e)?)?;
    }
    Ok(out)
}

/// `ch_h(E) = Σ_i e^{iγ_i} e^{x_i}` for roots on which `h` acts by `e^{iγ_i}`.
pub fn equivariant_chern_character(ring: &GradedRing, roots: &[(&str, f64)]) -> Result<GradedPoly<C64>> {
    let e = exp_series(C64::new(1.0, 0.0), ring.max_power() + 1);
    let mut out = ring.zero();
    for (r, gamma) in roots {
        out = out.add(&ring.univariate(r, &e)?.scale(&C64::from_polar(1.0, *gamma)))?;
    }
    Ok(out)
}

/// A normal summand on which `h` rotates by `angle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalSummand {
    /// In `(0, π]`; `π` marks the real summand with Euler roots.
    pub angle: f64,
    pub roots: Vec<String>,
}

/// One monomial of the integration functional, as root → exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionNumber {
    pub monomial: BTreeMap<String, u32>,
    pub value: C64,
}

/// A component of the fixed-point set of `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedComponent {
    pub dimension: u32,
    pub ambient_dimension: u32,
    pub normal: Vec<NormalSummand>,
    /// Chern roots of the tangent bundle, for `Â(X^h)`.
    #[serde(default)]
    pub tangent_roots: Vec<String>,
    /// Rotation of `h` on the spin^c line bundle, in `[0, 2π)`.
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub c1_root: Option<String>,
    /// Chern roots of `E` with the angle by which `h` acts on each.
    pub e_roots: Vec<(String, f64)>,
    pub integration: Vec<IntersectionNumber>,
    /// Orientation toggle, `+1` or `-1`.
    #[serde(default = "default_sign")]
    pub sign: i8,
}

fn default_sign() -> i8 {
    1
}

impl FixedComponent {
    /// An isolated fixed point with rotation angles `angles` on its normal
    /// lines, line-bundle rotation `beta` and `E` rotations `e_angles`.
    pub fn point(angles: &[f64], beta: f64, e_angles: &[f64], sign: i8) -> Self {
        FixedComponent {
            dimension: 0,
            ambient_dimension: 2 * angles.len() as u32,
            normal: angles
                .iter()
                .enumerate()
                .map(|(i, &angle)| NormalSummand { angle, roots: vec![format!("n{i}")] })
                .collect(),
            tangent_roots: Vec::new(),
            beta,
            c1_root: None,
            e_roots: e_angles.iter().enumerate().map(|(i, &g)| (format!("e{i}"), g)).collect(),
            integration: vec![IntersectionNumber { monomial: BTreeMap::new(), value: C64::new(1.0, 0.0) }],
            sign,
        }
    }

    fn ring(&self) -> Result<GradedRing> {
        let mut names: Vec<String> = Vec::new();
        let mut push = |n: &String| {
            if !names.contains(n) {
                names.push(n.clone());
            }
        };
        self.normal.iter().flat_map(|s| &s.roots).for_each(&mut push);
        self.tangent_roots.iter().for_each(&mut push);
        self.c1_root.iter().for_each(&mut push);
        self.e_roots.iter().map(|(r, _)| r).for_each(&mut push);
        GradedRing::new(names, self.dimension)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension % 2 != 0 {
            return input(format!("fixed component dimension {} is odd", self.dimension));
        }
        let normal_rank: u32 = self.normal.iter().map(|s| 2 * s.roots.len() as u32).sum();
        if normal_rank + self.dimension != self.ambient_dimension {
            return input(format!(
                "normal data of real rank {normal_rank} plus dimension {} does not match ambient dimension {}",
                self.dimension, self.ambient_dimension
            ));
        }
        for s in &self.normal {
            if !(s.angle > 0.0 && s.angle <= PI) {
                return input(format!("normal angle {} outside (0, π]", s.angle));
            }
            if s.roots.is_empty() {
                return input("normal summand without roots");
            }
        }
        if !(0.0..2.0 * PI).contains(&self.beta) {
            return input(format!("β = {} outside [0, 2π)", self.beta));
        }
        if self.sign != 1 && self.sign != -1 {
            return input("orientation sign must be ±1");
        }
        if 2 * self.tangent_roots.len() as u32 > self.dimension {
            return input("more tangent roots than half the component dimension");
        }
        for n in &self.integration {
            let deg: u32 = 2 * n.monomial.values().sum::<u32>();
            if deg != self.dimension {
                return input(format!("integration functional has a monomial of degree {deg} off top degree {}", self.dimension));
            }
        }
        Ok(())
    }

    /// The product class `∏ Â_θ(N(θ)) · Â(X^h) · e^{(c₁+iβ)/2} · ch_h(E)`.
    pub fn integrand(&self) -> Result<GradedPoly<C64>> {
        self.validate()?;
        let ring = self.ring()?;
        let mut class = ring.one();
        for s in &self.normal {
            let roots: Vec<&str> = s.roots.iter().map(String::as_str).collect();
            let factor = if s.angle == PI { a_hat_pi(&ring, &roots)? } else { a_hat_theta(&ring, &roots, s.angle)? };
            class = class.mul(&factor)?;
        }
        let tangent: Vec<&str> = self.tangent_roots.iter().map(String::as_str).collect();
        class = class.mul(&a_hat_genus(&ring, &tangent)?)?;
        let mut line = ring.constant(C64::from_polar(1.0, self.beta / 2.0));
        if let Some(c1) = &self.c1_root {
            line = line.mul(&ring.var::<C64>(c1)?.scale(&C64::new(0.5, 0.0)).exp()?)?;
        }
        class = class.mul(&line)?;
        let e: Vec<(&str, f64)> = self.e_roots.iter().map(|(r, g)| (r.as_str(), *g)).collect();
        class.mul(&equivariant_chern_character(&ring, &e)?)
    }

    /// Applies the integration functional to the product class.
    pub fn contribution(&self) -> Result<C64> {
        let class = self.integrand()?;
        let ring = class.ring().clone();
        let mut total = C64::new(0.0, 0.0);
        for n in &self.integration {
            let mut e = vec![0; ring.vars().len()];
            for (name, p) in &n.monomial {
                e[ring.var_index(name)?] = *p;
            }
            total += class.coefficient(&e) * n.value;
        }
        Ok(total * f64::from(self.sign))
    }
}

/// `Σ_components ∫_𝓕 ∏ Â_θ(N(θ)) · Â(X^h) · e^{(c₁+iβ)/2} · ch_h(E)`;
/// zero for an empty fixed set.
pub fn lefschetz_fixed_point_index(components: &[FixedComponent]) -> Result<C64> {
    Ok(lefschetz_terms(components)?.into_iter().sum())
}

/// The per-component contributions, in input order.
pub fn lefschetz_terms(components: &[FixedComponent]) -> Result<Vec<C64>> {
    components.iter().map(FixedComponent::contribution).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian, GaussianRational};

    fn ring(vars: &[&str], cap: u32) -> GradedRing {
        GradedRing::new(vars.iter().map(|s| s.to_string()).collect(), cap).unwrap()
    }

    #[test]
    fn ring_operations() {
        let r = ring(&["x"], 8);
        let x = r.var::<GaussianRational>("x").unwrap();
        assert_eq!(r.zero::<GaussianRational>().exp().unwrap(), r.one());
        let inv = r.one().add(&x).unwrap().inv().unwrap();
        for n in 0..=4u32 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coefficient(&[n]), gaussian((sign, 1), (0, 1)));
        }
        let r4 = ring(&["x"], 4);
        let x = r4.var::<GaussianRational>("x").unwrap();
        assert!(x.mul(&x).unwrap().mul(&x).unwrap().is_zero());
        assert!(r4.constant(gaussian((1, 1), (0, 1))).exp().is_err());
        assert!(r4.zero::<GaussianRational>().inv().is_err());
    }

    #[test]
    fn a_hat_theta_point_values() {
        let r = ring(&["x"], 0);
        let v = a_hat_theta(&r, &["x"], PI / 2.0).unwrap().constant_term();
        assert!((v - C64::new(0.0, -1.0 / 2f64.sqrt())).norm() < 1e-15);
        assert!(matches!(a_hat_theta(&r, &["x"], 0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn a_hat_pi_values() {
        let r = ring(&["x", "y"], 4);
        assert_eq!(a_hat_pi::<GaussianRational>(&r, &["x"]).unwrap().constant_term(), gaussian((0, 1), (-1, 2)));
        assert_eq!(a_hat_pi::<GaussianRational>(&r, &["x", "y"]).unwrap().constant_term(), gaussian((-1, 4), (0, 1)));
        let single = a_hat_pi::<GaussianRational>(&r, &["x"]).unwrap();
        assert_eq!(single.coefficient(&[1, 0]), gaussian((0, 1), (0, 1)));
        assert_eq!(single.coefficient(&[2, 0]), gaussian((0, 1), (-1, 2)) * gaussian((-1, 8), (0, 1)));
    }

    #[test]
    fn genus_and_character() {
        let r = ring(&["x"], 4);
        let a = a_hat_genus::<GaussianRational>(&r, &["x"]).unwrap();
        assert_eq!(a.constant_term(), gaussian((1, 1), (0, 1)));
        assert_eq!(a.coefficient(&[1]), gaussian((0, 1), (0, 1)));
        assert_eq!(a.coefficient(&[2]), gaussian((-1, 24), (0, 1)));
        let ch = chern_character::<GaussianRational>(&r, &["x"]).unwrap();
        assert_eq!(ch.coefficient(&[2]), gaussian((1, 2), (0, 1)));
        assert_eq!(ch.terms().len(), 3);
    }

    #[test]
    fn isolated_point_formula() {
        let (theta, beta) = (2.0 * PI / 3.0, 0.7);
        let v = lefschetz_fixed_point_index(&[FixedComponent::point(&[theta], beta, &[0.0], 1)]).unwrap();
        let expect = C64::from_polar(1.0, beta / 2.0) / (C64::new(0.0, 2.0) * (theta / 2.0).sin());
        assert!((v - expect).norm() < 1e-12);
        assert_eq!(lefschetz_fixed_point_index(&[]).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn malformed_components() {
        let mut c = FixedComponent::point(&[1.0], 0.0, &[0.0], 1);
        c.ambient_dimension = 4;
        assert!(c.contribution().unwrap_err().to_string().contains("ambient dimension"));
        let mut c = FixedComponent::point(&[1.0], 0.0, &[0.0], 1);
        c.normal[0].angle = 4.0;
        assert!(c.contribution().is_err());
    }

    #[test]
    fn surface_component_integrates_top_degree() {
        // A fixed 2-dimensional component with trivial normal rotation data
        // absent: ∫ Â · e^{c₁/2} · ch = ∫ (c₁/2 + x_E) for E a line bundle.
        let comp = FixedComponent {
            dimension: 2,
            ambient_dimension: 4,
            normal: vec![NormalSummand { angle: PI, roots: vec!["n".into()] }],
            tangent_roots: vec!["t".into()],
            beta: 0.0,
            c1_root: Some("c".into()),
            e_roots: vec![("e".into(), 0.0)],
            integration: vec![
                IntersectionNumber { monomial: BTreeMap::from([("c".into(), 1)]), value: C64::new(2.0, 0.0) },
                IntersectionNumber { monomial: BTreeMap::from([("e".into(), 1)]), value: C64::new(3.0, 0.0) },
            ],
            sign: 1,
        };
        let v = comp.contribution().unwrap();
        let expect = C64::new(0.0, -0.5) * (0.5 * 2.0 + 3.0);
        assert!((v - expect).norm() < 1e-14, "{v}");
    }
}
