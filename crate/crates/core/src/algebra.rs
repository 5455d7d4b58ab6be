//! Finitely supported elements of `ℂΓ ⊗ M_k` with an optional unit part.
//!
//! An [`AlgElem`] is `λ·1 + Σ_g δ_g ⊗ A_g` where `1` is the adjoined unit of
//! the unitization. Coefficients are generic over [`Coeff`], so the same code
//! serves the exact Gaussian-rational backend and the float backends.

use std::collections::BTreeMap;

use crate::error::{input, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::matrix::Mat;
use crate::scalar::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem<S> {
    group: GroupSpec,
    k: usize,
    unit: S,
    coeffs: BTreeMap<GroupElement, Mat<S>>,
}

impl<S: Coeff> AlgElem<S> {
    pub fn zero(group: &GroupSpec, k: usize) -> Self {
        assert!(k >= 1, "matrix size must be at least 1");
        AlgElem { group: group.clone(), k, unit: S::zero(), coeffs: BTreeMap::new() }
    }

    /// `c · 1` in the unitization.
    pub fn scalar(group: &GroupSpec, k: usize, c: S) -> Self {
        let mut a = Self::zero(group, k);
        a.unit = c;
        a
    }

    pub fn one(group: &GroupSpec, k: usize) -> Self {
        Self::scalar(group, k, S::one())
    }

    /// `δ_g ⊗ m`.
    pub fn delta(group: &GroupSpec, g: GroupElement, m: Mat<S>) -> Result<Self> {
        let k = m.dim();
        Self::from_terms(group, k, S::zero(), [(g, m)])
    }

    /// Builds an element from terms; repeated group elements are summed and
    /// zero coefficients dropped.
    pub fn from_terms(
        group: &GroupSpec,
        k: usize,
        unit: S,
        terms: impl IntoIterator<Item = (GroupElement, Mat<S>)>,
    ) -> Result<Self> {
        if k == 0 {
            return input("matrix size must be at least 1");
        }
        let mut out = Self::scalar(group, k, unit);
        for (g, m) in terms {
            group.validate(&g)?;
            if m.dim() != k {
                return input(format!("coefficient at {g} is {}x{}, expected {k}x{k}", m.dim(), m.dim()));
            }
            out.add_term(g, m);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: GroupElement, m: Mat<S>) {
        let sum = match self.coeffs.remove(&g) {
            Some(prev) => prev.add(&m),
            None => m,
        };
        if !sum.is_zero() {
            self.coeffs.insert(g, sum);
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn unit_part(&self) -> &S {
        &self.unit
    }

    /// Coefficient part in canonical element order.
    pub fn coefficients(&self) -> &BTreeMap<GroupElement, Mat<S>> {
        &self.coeffs
    }

    pub fn coefficient(&self, g: &GroupElement) -> Option<&Mat<S>> {
        self.coeffs.get(g)
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return input("operands live over different groups");
        }
        if self.k != other.k {
            return input(format!("matrix sizes differ: {} vs {}", self.k, other.k));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.unit = out.unit + other.unit.clone();
        for (g, m) in &other.coeffs {
            out.add_term(g.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::scalar(&self.group, self.k, self.unit.clone() * c.clone());
        for (g, m) in &self.coeffs {
            out.add_term(g.clone(), m.scale(c));
        }
        out
    }

    /// Left-multiplies every coefficient by a fixed matrix: `(δ_e ⊗ m) · A`
    /// on the coefficient part, with the unit part becoming `δ_e ⊗ λm`.
    pub fn mat_left(&self, m: &Mat<S>) -> Result<Self> {
        let lhs = Self::delta(&self.group, self.group.identity(), m.clone())?;
        lhs.convolve(self)
    }

    /// Convolution product `(AB)_g = Σ_{uv = g} A_u B_v`, extended to the
    /// unit parts.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::scalar(&self.group, self.k, self.unit.clone() * other.unit.clone());
        if !self.unit.is_zero() {
            for (g, m) in &other.coeffs {
                out.add_term(g.clone(), m.scale(&self.unit));
            }
        }
        if !other.unit.is_zero() {
            for (g, m) in &self.coeffs {
                out.add_term(g.clone(), m.scale(&other.unit));
            }
        }
        for (u, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                out.add_term(self.group.mul(u, v), a.mul(b));
            }
        }
        Ok(out)
    }

    /// `(A*)_g = (A_{g⁻¹})^†`, unit part conjugated.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::scalar(&self.group, self.k, self.unit.conj());
        for (g, m) in &self.coeffs {
            out.add_term(self.group.inverse(g), m.conj_transpose());
        }
        out
    }

    /// Delocalized trace over an explicit truncated class:
    /// `Σ_{g ∈ class} trace(A_g)`. The unit part never contributes since the
    /// class must not contain the identity.
    pub fn tr_h(&self, class: &[GroupElement]) -> Result<S> {
        let id = self.group.identity();
        let mut acc = S::zero();
        for g in class {
            self.group.validate(g)?;
            if *g == id {
                return input("class contains the identity; tr_h needs h ≠ e");
            }
            if let Some(m) = self.coeffs.get(g) {
                acc = acc + m.trace();
            }
        }
        Ok(acc)
    }

    /// Largest word length in the support; 0 for multiples of the unit.
    pub fn propagation(&self) -> Result<u32> {
        let mut p = 0;
        for g in self.coeffs.keys() {
            p = p.max(self.group.word_length(g)?);
        }
        Ok(p)
    }

    pub fn map_scalar<T: Coeff>(&self, f: impl Fn(&S) -> T) -> AlgElem<T> {
        let mut out = AlgElem::<T>::scalar(&self.group, self.k, f(&self.unit));
        for (g, m) in &self.coeffs {
            out.add_term(g.clone(), m.map(&f));
        }
        out
    }

    /// Largest coefficient-entry modulus, unit part included.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|m| m.max_abs()).fold(self.unit.modulus(), f64::max)
    }

    /// Drops coefficients whose entries are all below `tol` in modulus.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = Self::scalar(&self.group, self.k, self.unit.clone());
        for (g, m) in &self.coeffs {
            if m.max_abs() > tol {
                out.coeffs.insert(g.clone(), m.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement::*;
    use crate::scalar::{gaussian, GaussianRational};
    use num::complex::Complex64;
    use num::One;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_products() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        let u = Perm(vec![1, 0, 2]);
        let v = Perm(vec![1, 2, 0]);
        let a = AlgElem::delta(&s3, u.clone(), Mat::<Complex64>::identity(2)).unwrap();
        let b = AlgElem::delta(&s3, v.clone(), Mat::identity(2)).unwrap();
        let ab = a.convolve(&b).unwrap();
        assert_eq!(ab, AlgElem::delta(&s3, s3.mul(&u, &v), Mat::identity(2)).unwrap());
        let one = AlgElem::one(&s3, 2);
        assert_eq!(a.convolve(&one).unwrap(), a);
        assert_eq!(one.convolve(&a).unwrap(), a);
    }

    #[test]
    fn mismatched_operands() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let c4 = GroupSpec::cyclic(4).unwrap();
        let a = AlgElem::<Complex64>::one(&c3, 1);
        assert!(a.convolve(&AlgElem::one(&c4, 1)).is_err());
        assert!(a.convolve(&AlgElem::one(&c3, 2)).is_err());
        assert!(AlgElem::delta(&c3, Cyclic(5), Mat::<Complex64>::identity(1)).is_err());
    }

    #[test]
    fn trace_examples() {
        let c5 = GroupSpec::cyclic(5).unwrap();
        let class = c5.conjugacy_class_ball(&Cyclic(2), 10).unwrap();
        let inside = AlgElem::delta(&c5, Cyclic(2), Mat::<GaussianRational>::unit(2, 0, 0)).unwrap();
        assert_eq!(inside.tr_h(&class).unwrap(), GaussianRational::one());
        let outside = AlgElem::delta(&c5, Cyclic(3), Mat::<GaussianRational>::unit(2, 0, 0)).unwrap();
        assert!(outside.tr_h(&class).unwrap().re == num::BigRational::from_integer(0.into()));
        let at_e = AlgElem::delta(&c5, Cyclic(0), Mat::from_fn(2, |i, j| gaussian((i as i64 + 1, 1), (j as i64, 1)))).unwrap();
        assert_eq!(at_e.tr_h(&class).unwrap(), gaussian((0, 1), (0, 1)));
        assert_eq!(at_e.tr_h(&[]).unwrap(), gaussian((0, 1), (0, 1)));
        assert!(at_e.tr_h(&[Cyclic(0)]).is_err());
    }

    #[test]
    fn propagation_examples() {
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let m = Mat::<Complex64>::from_fn(2, |i, j| c(i as f64, j as f64 + 1.0));
        assert_eq!(AlgElem::delta(&z2, z2.identity(), m.clone()).unwrap().propagation().unwrap(), 0);
        let g = FreeAbelian(vec![2, -1]);
        let a = AlgElem::delta(&z2, g, m.clone()).unwrap();
        assert_eq!(a.propagation().unwrap(), 3);
        let b = AlgElem::delta(&z2, FreeAbelian(vec![0, 5]), m).unwrap();
        assert_eq!(a.add(&b).unwrap().propagation().unwrap(), 5);
        assert_eq!(AlgElem::<Complex64>::scalar(&z2, 1, c(3.0, 0.0)).propagation().unwrap(), 0);
    }

    #[test]
    fn adjoint_rule() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let m = Mat::from_fn(2, |i, j| gaussian((i as i64 + 2 * j as i64, 3), (1, 1 + i as i64)));
        let a = AlgElem::from_terms(&c3, 2, gaussian((1, 2), (1, 1)), [(Cyclic(1), m.clone())]).unwrap();
        let adj = a.adjoint();
        assert_eq!(adj.coefficient(&Cyclic(2)), Some(&m.conj_transpose()));
        assert_eq!(adj.unit_part(), &gaussian((1, 2), (-1, 1)));
        assert_eq!(adj.adjoint(), a);
    }
}
