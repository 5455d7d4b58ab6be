//! The left regular representation of `ℂΓ ⊗ M_k` for finite `Γ`, and the
//! dense linear algebra (spectral calculus, solves, conditioning) performed
//! there.
//!
//! An element `A` acts on `ℓ²(Γ) ⊗ ℂ^k` with block `(x, y)` equal to
//! `A_{x y⁻¹}`. Pulling a matrix back to coefficients reads off the block
//! column of the identity.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use num::Zero;

use crate::algebra::AlgElem;
use crate::error::{input, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::matrix::Mat;

type C64 = Complex64;

/// Indexing data for the regular representation of a finite group.
#[derive(Clone, Debug)]
pub struct RegularRep {
    group: GroupSpec,
    k: usize,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    identity: usize,
}

impl RegularRep {
    pub fn new(group: &GroupSpec, k: usize) -> Result<Self> {
        if !group.is_finite() {
            return input("the regular representation is only realized for finite groups");
        }
        let elements = group.elements()?;
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let identity = index[&group.identity()];
        Ok(RegularRep { group: group.clone(), k, elements, index, identity })
    }

    pub fn for_elem(a: &AlgElem<C64>) -> Result<Self> {
        Self::new(a.group(), a.k())
    }

    pub fn dim(&self) -> usize {
        self.elements.len() * self.k
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self, a: &AlgElem<C64>) -> DMatrix<C64> {
        assert_eq!(a.k(), self.k);
        let n = self.dim();
        let k = self.k;
        let mut out = DMatrix::from_diagonal_element(n, n, *a.unit_part());
        for (yi, y) in self.elements.iter().enumerate() {
            for (g, m) in a.coefficients() {
                let x = self.group.mul(g, y);
                let xi = self.index[&x];
                for i in 0..k {
                    for j in 0..k {
                        out[(xi * k + i, yi * k + j)] += *m.get(i, j);
                    }
                }
            }
        }
        out
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.index
            .get(g)
            .copied()
            .ok_or_else(|| Error::Input(format!("{g} is not an element of the group")))
    }

    /// `tr_h` of the operator `m`, read from the identity block column
    /// without pulling back. `m` may also be just that column (`dim × k`).
    pub fn class_trace(&self, m: &DMatrix<C64>, class: &[GroupElement]) -> Result<C64> {
        let k = self.k;
        let col = if m.ncols() == k { 0 } else { self.identity * k };
        let mut acc = C64::zero();
        for g in class {
            let gi = self.index_of(g)?;
            if gi == self.identity {
                return input("class contains the identity; tr_h needs h ≠ e");
            }
            for i in 0..k {
                acc += m[(gi * k + i, col + i)];
            }
        }
        Ok(acc)
    }

    /// The `dim × k` block column of the identity element.
    pub fn identity_column(&self) -> DMatrix<C64> {
        let k = self.k;
        let e = self.identity;
        DMatrix::from_fn(self.dim(), k, |r, c| if r == e * k + c { C64::new(1.0, 0.0) } else { C64::zero() })
    }

    /// Reads coefficients off the identity block column, treating `unit·I`
    /// as the unit part. Blocks that are exactly zero are dropped.
    pub fn pull_back(&self, m: &DMatrix<C64>, unit: C64) -> AlgElem<C64> {
        let k = self.k;
        let e = self.identity;
        let terms = self.elements.iter().enumerate().map(|(gi, g)| {
            let mut coeff = Mat::from_fn(k, |i, j| m[(gi * k + i, e * k + j)]);
            if gi == e {
                coeff = coeff.sub(&Mat::identity(k).scale(&unit));
            }
            (g.clone(), coeff)
        });
        AlgElem::from_terms(&self.group, k, unit, terms).expect("regular representation indices are valid")
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(m: &DMatrix<C64>) -> Self {
        let eig = nalgebra::SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_columns(
            &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        HermitianEigen { values, vectors }
    }

    /// `f(M) = V diag(f(λ)) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let d = DVector::from_iterator(self.values.len(), self.values.iter().map(|&l| f(l)));
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * d[j]
        });
        scaled * self.vectors.adjoint()
    }

    /// Orthogonal projection onto the span of eigenvectors `range`.
    pub fn projection(&self, range: std::ops::Range<usize>) -> DMatrix<C64> {
        let cols = self.vectors.columns(range.start, range.len());
        &cols * cols.adjoint()
    }
}

/// Largest deviation from Hermitian symmetry, relative to the matrix scale.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max) / scale
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Solves `X · A = B` for `X` (right division), used to form `u̇ u⁻¹`.
pub fn right_divide(b: &DMatrix<C64>, a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    // X A = B  ⇔  A† X† = B†
    let lu = a.adjoint().lu();
    let xt = lu
        .solve(&b.adjoint())
        .ok_or_else(|| Error::NotInvertible("LU solve hit a zero pivot".into()))?;
    Ok(xt.adjoint())
}

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.clone().exp()
}

pub fn is_zero_matrix(m: &DMatrix<C64>) -> bool {
    m.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(g: &GroupSpec, k: usize, rng: &mut ChaCha8Rng) -> AlgElem<C64> {
        let terms: Vec<_> = g
            .elements()
            .unwrap()
            .into_iter()
            .map(|x| (x, Mat::from_fn(k, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))))
            .collect();
        AlgElem::from_terms(g, k, C64::new(rng.gen_range(-1.0..1.0), 0.0), terms).unwrap()
    }

    #[test]
    fn convolution_matches_regular_representation() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        let rep = RegularRep::new(&s3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_elem(&s3, 2, &mut rng);
            let b = random_elem(&s3, 2, &mut rng);
            let direct = a.convolve(&b).unwrap();
            let via_rep = rep.pull_back(&(rep.matrix(&a) * rep.matrix(&b)), *direct.unit_part());
            assert!(direct.sub(&via_rep).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let c4 = GroupSpec::cyclic(4).unwrap();
        let rep = RegularRep::new(&c4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_elem(&c4, 3, &mut rng);
        let lhs = rep.matrix(&a.adjoint());
        let rhs = rep.matrix(&a).adjoint();
        assert!((lhs - rhs).iter().all(|x| x.norm() < 1e-14));
    }

    #[test]
    fn pull_back_round_trip() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        let rep = RegularRep::new(&c2, 1).unwrap();
        let a = AlgElem::delta(&c2, Cyclic(1), Mat::identity(1)).unwrap();
        let m = rep.matrix(&a);
        assert_eq!(rep.pull_back(&m, C64::new(0.0, 0.0)), a);
        let one = AlgElem::one(&c2, 1);
        assert!(rep.pull_back(&rep.matrix(&one), C64::new(1.0, 0.0)).coefficients().is_empty());
    }

    #[test]
    fn infinite_groups_rejected() {
        assert!(RegularRep::new(&GroupSpec::heisenberg().unwrap(), 1).is_err());
    }

    #[test]
    fn spectral_calculus_and_solves() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        let rep = RegularRep::new(&c2, 1).unwrap();
        let d = rep.matrix(&AlgElem::delta(&c2, Cyclic(1), Mat::identity(1)).unwrap());
        let eig = HermitianEigen::new(&d);
        assert!((eig.values[0] + 1.0).abs() < 1e-14 && (eig.values[1] - 1.0).abs() < 1e-14);
        let sq = eig.apply(|l| C64::new(l * l, 0.0));
        assert!((sq - DMatrix::<C64>::identity(2, 2)).iter().all(|x| x.norm() < 1e-14));
        let x = right_divide(&d, &d).unwrap();
        assert!((x - DMatrix::<C64>::identity(2, 2)).iter().all(|x| x.norm() < 1e-14));
        assert!((condition_number(&d) - 1.0).abs() < 1e-12);
    }
}
