//! Exact arithmetic in cyclotomic fields `ℚ(ζ_m)` and recognition of
//! floating-point values as field elements by integer-relation search.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)−1}` reduced
//! modulo the cyclotomic polynomial `Φ_m`. Operands of different conductors
//! are coerced to the lcm.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

type C64 = Complex64;

/// Largest conductor any operation may produce.
pub const CONDUCTOR_CAP: u64 = 1024;
/// Scale applied to real and imaginary parts in the relation lattice.
pub const LATTICE_SCALE: f64 = 1e12;
/// Lovász constant of the reduction.
pub const LLL_DELTA: (i64, i64) = (3, 4);

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_m`, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m % d == 0) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    let p = Arc::new(num);
    phi_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// Quotient of `a` by the monic `b`, assuming exact division.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    q
}

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn check_conductor(m: u64) -> Result<()> {
    if m == 0 {
        return input("conductor must be positive");
    }
    if m > CONDUCTOR_CAP {
        return Err(Error::Capacity { what: format!("cyclotomic conductor {m}"), limit: CONDUCTOR_CAP as usize });
    }
    Ok(())
}

/// An element of `ℚ(ζ_m)`.
#[derive(Clone)]
pub struct CycloNumber {
    conductor: u64,
    coords: Vec<BigRational>,
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.conductor)?,
                _ => write!(f, "({c})·ζ{}^{j}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let l = self.conductor.lcm(&other.conductor);
        match (self.coerce(l), other.coerce(l)) {
            (Ok(a), Ok(b)) => a.coords == b.coords,
            _ => false,
        }
    }
}

impl CycloNumber {
    pub fn zero(m: u64) -> Result<Self> {
        check_conductor(m)?;
        Ok(CycloNumber { conductor: m, coords: vec![BigRational::zero(); euler_phi(m) as usize] })
    }

    pub fn rational(m: u64, q: BigRational) -> Result<Self> {
        let mut z = Self::zero(m)?;
        z.coords[0] = q;
        Ok(z)
    }

    pub fn from_ratio(m: u64, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return input("zero denominator");
        }
        Self::rational(m, BigRational::new(num.into(), den.into()))
    }

    /// `ζ_m^j`.
    pub fn zeta_pow(m: u64, j: i64) -> Result<Self> {
        check_conductor(m)?;
        let e = j.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Ok(Self::reduce(m, poly))
    }

    pub fn zeta(m: u64) -> Result<Self> {
        Self::zeta_pow(m, 1)
    }

    /// From power-basis coordinates; extra coordinates are reduced.
    pub fn from_coords(m: u64, coords: Vec<BigRational>) -> Result<Self> {
        check_conductor(m)?;
        Ok(Self::reduce(m, coords))
    }

    fn reduce(m: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let d = phi.len() - 1;
        for i in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(d) {
                poly[i - d + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
        poly.resize(d, BigRational::zero());
        CycloNumber { conductor: m, coords: poly }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Rewrites the element over `ℚ(ζ_l)` for a multiple `l` of the
    /// conductor.
    pub fn coerce(&self, l: u64) -> Result<Self> {
        if l % self.conductor != 0 {
            return input(format!("conductor {} does not divide {l}", self.conductor));
        }
        check_conductor(l)?;
        let step = (l / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (j, c) in self.coords.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Ok(Self::reduce(l, poly))
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        let l = self.conductor.lcm(&other.conductor);
        Ok((self.coerce(l)?, other.coerce(l)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(CycloNumber { conductor: a.conductor, coords })
    }

    pub fn neg(&self) -> Self {
        CycloNumber { conductor: self.conductor, coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let n = a.coords.len();
        let mut poly = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Ok(Self::reduce(a.conductor, poly))
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let m = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); m.max(1)];
        for (j, c) in self.coords.iter().enumerate() {
            poly[(m - j) % m] += c;
        }
        Self::reduce(self.conductor, poly)
    }

    /// The embedding with `ζ_m ↦ e^{2πi/m}`.
    pub fn embed(&self) -> C64 {
        self.coords
            .iter()
            .enumerate()
            .map(|(j, c)| C64::from_polar(c.to_f64().unwrap_or(f64::NAN), 2.0 * PI * j as f64 / self.conductor as f64))
            .sum()
    }

    /// `max(|d|, |d·c_j|)` with `d` the least common denominator.
    pub fn height(&self) -> BigInt {
        let d = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coords
            .iter()
            .map(|c| (c * BigRational::from_integer(d.clone())).to_integer().abs())
            .fold(d.clone(), |a, b| a.max(b))
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u64,
    coordinates: Vec<String>,
}

impl Serialize for CycloNumber {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        CycloRepr { conductor: self.conductor, coordinates: self.coords.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        let coords = repr
            .coordinates
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycloNumber::from_coords(repr.conductor, coords).map_err(serde::de::Error::custom)
    }
}

/// `ℚ(ζ_m)` with `m = 2·lcm(orders)`, which adjoins every `e^{πi/n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloField {
    pub conductor: u64,
    pub degree: u64,
    pub orders: BTreeSet<u64>,
}

pub fn q_gamma_field(orders: &BTreeSet<u64>) -> Result<CycloField> {
    if orders.contains(&0) {
        return input("element orders must be at least 1");
    }
    let conductor = if orders.is_empty() { 1 } else { 2 * orders.iter().fold(1u64, |a, &n| a.lcm(&n)) };
    check_conductor(conductor)?;
    Ok(CycloField { conductor, degree: euler_phi(conductor), orders: orders.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecognizeConfig {
    /// Largest admissible coefficient of the integer relation.
    pub height: u64,
    /// Largest admissible `|a₀·v − Σ c_j ζ^j|` for the relation found.
    pub tol: f64,
    pub scale: f64,
}

impl RecognizeConfig {
    pub fn new(height: u64, tol: f64) -> Self {
        RecognizeConfig { height, tol, scale: LATTICE_SCALE }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Recognition {
    Recognized {
        number: CycloNumber,
        /// `|a₀·v − Σ c_j ζ^j|` for the primitive relation.
        relation_residual: f64,
        /// `|embed(number) − v|`.
        value_residual: f64,
        height: u64,
    },
    NotRecognized {
        /// Smallest relation residual among candidates within the height
        /// bound, if any.
        best_relation_residual: Option<f64>,
    },
}

impl Recognition {
    pub fn number(&self) -> Option<&CycloNumber> {
        match self {
            Recognition::Recognized { number, .. } => Some(number),
            Recognition::NotRecognized { .. } => None,
        }
    }
}

fn round_scaled(x: f64, scale: f64) -> BigInt {
    let y = (x * scale).round();
    BigInt::from(y as i128)
}

/// Searches for `a₀·v = Σ_{j<φ(m)} c_j ζ^j` with small integers by lattice
/// reduction, real and imaginary parts jointly. Deterministic for fixed
/// inputs; never returns a candidate whose residuals exceed the tolerance.
pub fn recognize(value: C64, field: &CycloField, cfg: &RecognizeConfig) -> Result<Recognition> {
    if cfg.height < 1 || !(cfg.tol > 0.0) || !(cfg.scale > 0.0) {
        return input("recognition needs height ≥ 1 and positive tolerance and scale");
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return input("value must be finite");
    }
    let m = field.conductor;
    let phi = euler_phi(m) as usize;
    let n = phi + 1;
    let basis_vals: Vec<C64> = (0..phi).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect();
    let mut targets = vec![value];
    targets.extend(basis_vals.iter().map(|z| -z));
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n + 2];
            r[i] = BigInt::one();
            r[n] = round_scaled(targets[i].re, cfg.scale);
            r[n + 1] = round_scaled(targets[i].im, cfg.scale);
            r
        })
        .collect();
    lll(&mut rows);

    let mut best: Option<(u64, f64, Vec<BigInt>)> = None;
    let mut best_residual: Option<f64> = None;
    for r in &rows {
        let mut rel: Vec<BigInt> = r[..n].to_vec();
        if rel[0].is_zero() {
            continue;
        }
        let g = rel.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if rel[0].is_negative() { -BigInt::one() } else { BigInt::one() };
        for x in rel.iter_mut() {
            *x = &*x / &g * &sign;
        }
        let Some(height) = rel.iter().map(|x| x.abs()).max().and_then(|h| h.to_u64()) else { continue };
        if height > cfg.height {
            continue;
        }
        let a0 = rel[0].to_f64().unwrap();
        let combo: C64 = rel[1..].iter().zip(&basis_vals).map(|(c, z)| z * c.to_f64().unwrap()).sum();
        let residual = (value * a0 - combo).norm();
        best_residual = Some(best_residual.map_or(residual, |b: f64| b.min(residual)));
        if residual <= cfg.tol {
            let better = match &best {
                None => true,
                Some((h, res, _)) => (height, residual) < (*h, *res),
            };
            if better {
                best = Some((height, residual, rel));
            }
        }
    }
    let Some((height, relation_residual, rel)) = best else {
        return Ok(Recognition::NotRecognized { best_relation_residual: best_residual });
    };
    let a0 = BigRational::from_integer(rel[0].clone());
    let coords = rel[1..].iter().map(|c| BigRational::from_integer(c.clone()) / &a0).collect();
    let number = CycloNumber::from_coords(m, coords)?;
    let value_residual = (number.embed() - value).norm();
    if value_residual > cfg.tol {
        return Ok(Recognition::NotRecognized { best_relation_residual: Some(relation_residual) });
    }
    Ok(Recognition::Recognized { number, relation_residual, value_residual, height })
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// LLL reduction of integer row vectors with exact rational Gram–Schmidt
/// data, swap updates in the usual incremental form.
fn lll(rows: &mut [Vec<BigInt>]) {
    let n = rows.len();
    if n < 2 {
        return;
    }
    let to_q = |r: &Vec<BigInt>| -> Vec<BigRational> { r.iter().map(|x| BigRational::from_integer(x.clone())).collect() };
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = vec![BigRational::zero(); n];
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_q(&rows[i]);
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = if norms[j].is_zero() { BigRational::zero() } else { dot(&bi, &star[j]) / &norms[j] };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    let delta = BigRational::new(LLL_DELTA.0.into(), LLL_DELTA.1.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round();
                let qi = q.to_integer();
                let (head, tail) = rows.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &qi * y;
                }
                for i in 0..j {
                    let t = &q * &mu[j][i];
                    mu[k][i] -= t;
                }
                mu[k][j] -= &q;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
            continue;
        }
        rows.swap(k, k - 1);
        let m = mu[k][k - 1].clone();
        let b = &norms[k] + &m * &m * &norms[k - 1];
        if b.is_zero() {
            // Both vectors dependent on earlier ones; nothing to update.
            k = (k - 1).max(1);
            continue;
        }
        mu[k][k - 1] = &m * &norms[k - 1] / &b;
        norms[k] = &norms[k - 1] * &norms[k] / &b;
        norms[k - 1] = b;
        for j in 0..k - 1 {
            let t = mu[k][j].clone();
            mu[k][j] = mu[k - 1][j].clone();
            mu[k - 1][j] = t;
        }
        for i in k + 1..n {
            let t = mu[i][k].clone();
            mu[i][k] = &mu[i][k - 1] - &m * &t;
            mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
        }
        k = (k - 1).max(1);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "order", content = "n", rename_all = "kebab-case")]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

/// Hypotheses under which infinite-order classes must have vanishing eta.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingHypotheses {
    /// The operator is invertible (positive scalar curvature).
    pub invertible: bool,
    /// The class has polynomial growth.
    pub polynomial_growth: bool,
}

/// Height bound used when a finite-order check delegates to recognition.
pub const VANISHING_HEIGHT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum VanishingVerdict {
    Pass { modulus: f64 },
    Fail { modulus: f64 },
    NotApplicable { reason: String },
    Finite { field: CycloField, recognition: Recognition },
}

/// For infinite order, passes iff `|value| < tol` when the hypotheses hold;
/// for finite order `n`, recognizes `value` in `ℚ_⟨n⟩`.
pub fn vanishing_check(order: ElementOrder, value: C64, tol: f64, hypotheses: VanishingHypotheses) -> Result<VanishingVerdict> {
    match order {
        ElementOrder::Infinite => {
            let mut missing = Vec::new();
            if !hypotheses.invertible {
                missing.push("operator not invertible");
            }
            if !hypotheses.polynomial_growth {
                missing.push("class growth not polynomial");
            }
            if !missing.is_empty() {
                return Ok(VanishingVerdict::NotApplicable { reason: missing.join("; ") });
            }
            let modulus = value.norm();
            Ok(if modulus < tol { VanishingVerdict::Pass { modulus } } else { VanishingVerdict::Fail { modulus } })
        }
        ElementOrder::Finite(n) => {
            let field = q_gamma_field(&BTreeSet::from([n]))?;
            let recognition = recognize(value, &field, &RecognizeConfig::new(VANISHING_HEIGHT, tol))?;
            Ok(VanishingVerdict::Finite { field, recognition })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        let p = |m| cyclotomic_polynomial(m).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(p(1), vec![-1, 1]);
        assert_eq!(p(4), vec![1, 0, 1]);
        assert_eq!(p(6), vec![1, -1, 1]);
        assert_eq!(p(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(24), 8);
    }

    #[test]
    fn field_arithmetic_examples() {
        let i = CycloNumber::zeta(4).unwrap();
        assert_eq!(i.mul(&i).unwrap(), CycloNumber::from_ratio(4, -1, 1).unwrap());
        let z6 = CycloNumber::zeta(6).unwrap();
        assert_eq!(z6.add(&z6.conj()).unwrap(), CycloNumber::from_ratio(6, 1, 1).unwrap());
        let z8 = CycloNumber::zeta(8).unwrap().embed();
        assert!((z8 - C64::new(0.5f64.sqrt(), 0.5f64.sqrt())).norm() < 1e-15);
        let mixed = i.add(&z6).unwrap();
        assert_eq!(mixed.conductor(), 12);
        assert!((mixed.embed() - (C64::new(0.0, 1.0) + C64::from_polar(1.0, PI / 3.0))).norm() < 1e-14);
        assert!(matches!(CycloNumber::zeta(2048), Err(Error::Capacity { .. })));
    }

    #[test]
    fn fields_from_orders() {
        assert_eq!(q_gamma_field(&BTreeSet::from([1])).unwrap().degree, 1);
        assert_eq!(q_gamma_field(&BTreeSet::from([2])).unwrap().conductor, 4);
        assert_eq!(q_gamma_field(&BTreeSet::from([3])).unwrap().conductor, 6);
        assert_eq!(q_gamma_field(&BTreeSet::new()).unwrap().degree, 1);
    }

    #[test]
    fn recognition_examples() {
        let cfg = RecognizeConfig::new(1_000_000, 1e-9);
        let rat = q_gamma_field(&BTreeSet::from([1])).unwrap();
        let r = recognize(C64::new(0.5, 0.0), &rat, &cfg).unwrap();
        assert_eq!(r.number().unwrap().coords()[0], q(1, 2));
        let f6 = q_gamma_field(&BTreeSet::from([3])).unwrap();
        let r = recognize(C64::from_polar(1.0, PI / 3.0), &f6, &cfg).unwrap();
        assert_eq!(r.number().unwrap(), &CycloNumber::zeta(6).unwrap());
        for orders in [BTreeSet::from([1]), BTreeSet::from([2]), BTreeSet::from([3])] {
            let f = q_gamma_field(&orders).unwrap();
            assert!(recognize(C64::new(PI, 0.0), &f, &cfg).unwrap().number().is_none());
        }
    }

    #[test]
    fn height_and_serde() {
        let a = CycloNumber::from_coords(4, vec![q(1, 2), q(-3, 4)]).unwrap();
        assert_eq!(a.height(), BigInt::from(4));
        let json = serde_json::to_string(&a).unwrap();
        let back: CycloNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn vanishing_verdicts() {
        let ok = VanishingHypotheses { invertible: true, polynomial_growth: true };
        assert!(matches!(vanishing_check(ElementOrder::Infinite, C64::new(1e-12, 0.0), 1e-9, ok).unwrap(), VanishingVerdict::Pass { .. }));
        assert!(matches!(vanishing_check(ElementOrder::Infinite, C64::new(0.3, 0.0), 1e-9, ok).unwrap(), VanishingVerdict::Fail { .. }));
        let circle = VanishingHypotheses { invertible: false, polynomial_growth: true };
        assert!(matches!(vanishing_check(ElementOrder::Infinite, C64::new(0.3, 0.0), 1e-9, circle).unwrap(), VanishingVerdict::NotApplicable { .. }));
        match vanishing_check(ElementOrder::Finite(2), C64::new(1.0, 0.0), 1e-9, ok).unwrap() {
            VanishingVerdict::Finite { recognition, .. } => {
                assert_eq!(recognition.number().unwrap(), &CycloNumber::from_ratio(4, 1, 1).unwrap())
            }
            v => panic!("{v:?}"),
        }
    }
}
