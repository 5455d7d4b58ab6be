//! JSON representations of groups, elements, scalars and algebra elements,
//! and their conversion to core types.

use std::str::FromStr;

use deloc_core::group::GroupKind;
use deloc_core::{AlgElem, Coeff, GaussianRational, GroupElement, GroupSpec, Mat, C64};
use num::{BigInt, BigRational, FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::report::Failure;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupDesc {
    Cyclic { order: u64 },
    Symmetric { degree: usize },
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
    FreeAbelian { rank: usize },
    Heisenberg,
}

impl GroupDesc {
    pub fn build(&self, pointer: &str) -> Result<GroupSpec, Failure> {
        let g = match self {
            GroupDesc::Cyclic { order } => GroupSpec::cyclic(*order),
            GroupDesc::Symmetric { degree } => GroupSpec::symmetric(*degree),
            GroupDesc::Permutation { degree, generators } => GroupSpec::permutation(*degree, generators.clone()),
            GroupDesc::FreeAbelian { rank } => GroupSpec::free_abelian(*rank),
            GroupDesc::Heisenberg => GroupSpec::heisenberg(),
        };
        g.map_err(|e| Failure::at(pointer, e.to_string()))
    }
}

/// An integer for cyclic groups, otherwise a list: permutation images,
/// an integer vector, or `[a, b, c]` for `x^a y^b z^c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Int(i64),
    List(Vec<i64>),
}

pub fn element(group: &GroupSpec, repr: &ElementRepr, pointer: &str) -> Result<GroupElement, Failure> {
    let bad = |what: &str| Failure::at(pointer, format!("expected {what} for {:?}", group.kind()));
    let g = match (group.kind(), repr) {
        (GroupKind::Cyclic { order }, ElementRepr::Int(n)) => GroupElement::Cyclic(n.rem_euclid(*order as i64) as u64),
        (GroupKind::Cyclic { .. }, _) => return Err(bad("an integer")),
        (GroupKind::FinitePermutation { .. }, ElementRepr::List(v)) => {
            let p = v.iter().map(|&i| usize::try_from(i)).collect::<Result<Vec<_>, _>>().map_err(|_| bad("a permutation"))?;
            GroupElement::Perm(p)
        }
        (GroupKind::FreeAbelian { .. }, ElementRepr::List(v)) => GroupElement::FreeAbelian(v.clone()),
        (GroupKind::Heisenberg, ElementRepr::List(v)) if v.len() == 3 => GroupElement::Heisenberg(v[0], v[1], v[2]),
        _ => return Err(bad("a list")),
    };
    group.validate(&g).map_err(|e| Failure::at(pointer, e.to_string()))?;
    Ok(g)
}

pub fn element_repr(g: &GroupElement) -> ElementRepr {
    match g {
        GroupElement::Cyclic(n) => ElementRepr::Int(*n as i64),
        GroupElement::Perm(p) => ElementRepr::List(p.iter().map(|&i| i as i64).collect()),
        GroupElement::FreeAbelian(v) => ElementRepr::List(v.clone()),
        GroupElement::Heisenberg(a, b, c) => ElementRepr::List(vec![*a, *b, *c]),
    }
}

/// A real number: JSON integer, JSON float, or a rational string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealRepr {
    Int(i64),
    Float(f64),
    Str(String),
}

impl RealRepr {
    fn rational(&self) -> Result<BigRational, String> {
        match self {
            RealRepr::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            RealRepr::Float(x) => BigRational::from_f64(*x).ok_or_else(|| format!("{x} is not finite")),
            RealRepr::Str(s) => BigRational::from_str(s.trim()).map_err(|_| format!("{s:?} is not a rational p/q")),
        }
    }

    fn float(&self) -> Result<f64, String> {
        match self {
            RealRepr::Int(n) => Ok(*n as f64),
            RealRepr::Float(x) => Ok(*x),
            RealRepr::Str(_) => self.rational().map(|q| q.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

/// `[re, im]` or a bare real.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRepr {
    Pair([RealRepr; 2]),
    Real(RealRepr),
}

impl ComplexRepr {
    fn parts(&self) -> (&RealRepr, Option<&RealRepr>) {
        match self {
            ComplexRepr::Pair([re, im]) => (re, Some(im)),
            ComplexRepr::Real(re) => (re, None),
        }
    }

    pub fn from_c64(z: C64) -> Self {
        ComplexRepr::Pair([RealRepr::Float(z.re), RealRepr::Float(z.im)])
    }
}

/// Scalars parseable from [`ComplexRepr`].
pub trait ParseScalar: Coeff {
    fn parse(c: &ComplexRepr) -> Result<Self, String>;
    fn repr(&self) -> ComplexRepr;
}

impl ParseScalar for C64 {
    fn parse(c: &ComplexRepr) -> Result<Self, String> {
        let (re, im) = c.parts();
        Ok(C64::new(re.float()?, im.map(RealRepr::float).transpose()?.unwrap_or(0.0)))
    }

    fn repr(&self) -> ComplexRepr {
        ComplexRepr::from_c64(*self)
    }
}

impl ParseScalar for GaussianRational {
    fn parse(c: &ComplexRepr) -> Result<Self, String> {
        let (re, im) = c.parts();
        let im = im.map(RealRepr::rational).transpose()?.unwrap_or_else(BigRational::zero);
        Ok(GaussianRational::new(re.rational()?, im))
    }

    fn repr(&self) -> ComplexRepr {
        ComplexRepr::Pair([RealRepr::Str(self.re.to_string()), RealRepr::Str(self.im.to_string())])
    }
}

pub fn scalar<S: ParseScalar>(c: &ComplexRepr, pointer: &str) -> Result<S, Failure> {
    S::parse(c).map_err(|m| Failure::at(pointer, m))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRepr {
    pub element: ElementRepr,
    /// `k × k` rows of complex entries.
    pub matrix: Vec<Vec<ComplexRepr>>,
}

/// `unit·1 + Σ δ_g ⊗ matrix`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgElemRepr {
    pub k: usize,
    #[serde(default)]
    pub unit: Option<ComplexRepr>,
    #[serde(default)]
    pub terms: Vec<TermRepr>,
}

pub fn alg_elem<S: ParseScalar>(group: &GroupSpec, repr: &AlgElemRepr, pointer: &str) -> Result<AlgElem<S>, Failure> {
    let k = repr.k;
    if k == 0 {
        return Err(Failure::at(&format!("{pointer}.k"), "matrix size must be at least 1"));
    }
    let unit = match &repr.unit {
        Some(u) => scalar(u, &format!("{pointer}.unit"))?,
        None => S::zero(),
    };
    let mut terms = Vec::with_capacity(repr.terms.len());
    for (i, t) in repr.terms.iter().enumerate() {
        let at = format!("{pointer}.terms[{i}]");
        let g = element(group, &t.element, &format!("{at}.element"))?;
        if t.matrix.len() != k || t.matrix.iter().any(|r| r.len() != k) {
            return Err(Failure::at(&format!("{at}.matrix"), format!("expected a {k}x{k} matrix")));
        }
        let mut rows = Vec::with_capacity(k);
        for (r, row) in t.matrix.iter().enumerate() {
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(c, z)| scalar(z, &format!("{at}.matrix[{r}][{c}]")))
                    .collect::<Result<Vec<S>, _>>()?,
            );
        }
        terms.push((g, Mat::from_rows(rows).expect("square by construction")));
    }
    AlgElem::from_terms(group, k, unit, terms).map_err(|e| Failure::at(pointer, e.to_string()))
}

#[cfg(test)]
pub fn alg_elem_repr<S: ParseScalar>(a: &AlgElem<S>) -> AlgElemRepr {
    AlgElemRepr {
        k: a.k(),
        unit: Some(a.unit_part().repr()),
        terms: a
            .coefficients()
            .iter()
            .map(|(g, m)| TermRepr {
                element: element_repr(g),
                matrix: m.rows().iter().map(|r| r.iter().map(ParseScalar::repr).collect()).collect(),
            })
            .collect(),
    }
}

/// An angle in radians, or `{"pi": "p/q"}` for `(p/q)·π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleRepr {
    Radians(f64),
    PiMultiple { pi: RealRepr },
}

impl AngleRepr {
    pub fn radians(&self, pointer: &str) -> Result<f64, Failure> {
        match self {
            AngleRepr::Radians(x) => Ok(*x),
            AngleRepr::PiMultiple { pi } => {
                pi.float().map(|q| q * std::f64::consts::PI).map_err(|m| Failure::at(pointer, m))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_float_scalars() {
        let c: ComplexRepr = serde_json::from_str(r#"["1/2", -3]"#).unwrap();
        let q: GaussianRational = scalar(&c, "x").unwrap();
        assert_eq!(q, deloc_core::scalar::gaussian((1, 2), (-3, 1)));
        let f: C64 = scalar(&c, "x").unwrap();
        assert_eq!(f, C64::new(0.5, -3.0));
        let bare: ComplexRepr = serde_json::from_str("0.25").unwrap();
        assert_eq!(scalar::<C64>(&bare, "x").unwrap(), C64::new(0.25, 0.0));
    }

    #[test]
    fn elements_by_group_kind() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(element(&z5, &ElementRepr::Int(-1), "e").unwrap(), GroupElement::Cyclic(4));
        let h = GroupSpec::heisenberg().unwrap();
        assert!(element(&h, &ElementRepr::List(vec![1, 2]), "e").is_err());
        let g = element(&h, &ElementRepr::List(vec![1, 0, 2]), "e").unwrap();
        assert_eq!(element_repr(&g), ElementRepr::List(vec![1, 0, 2]));
    }

    #[test]
    fn algebra_round_trip() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let repr: AlgElemRepr =
            serde_json::from_str(r#"{"k": 1, "terms": [{"element": 1, "matrix": [[["1/2", 0]]]}]}"#).unwrap();
        let a: AlgElem<GaussianRational> = alg_elem(&z2, &repr, "p").unwrap();
        let back: AlgElem<GaussianRational> = alg_elem(&z2, &alg_elem_repr(&a), "p").unwrap();
        assert_eq!(a, back);
    }
}
