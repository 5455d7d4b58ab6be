//! Concrete finitely generated groups with word metrics.
//!
//! Every [`GroupSpec`] carries a declared symmetric generating set and all
//! lengths are measured against it. Balls are enumerated by breadth-first
//! search over the Cayley graph; the search state is cached inside the spec
//! and grown on demand, so repeated length queries are cheap.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Default cap on the number of elements a single enumeration may visit.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// Extra radius explored when closing a class under conjugation, so that
/// conjugation chains may leave the target ball briefly before returning.
pub const CLASS_EXPLORATION_SLACK: u32 = 4;

/// Canonical form of a group element. Equality of canonical forms is
/// equality of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupElement {
    /// Residue in `0..n`.
    Cyclic(u64),
    /// Image array of a permutation of `0..degree`.
    Perm(Vec<usize>),
    /// Integer vector.
    FreeAbelian(Vec<i64>),
    /// `x^a y^b z^c` with `z = [x, y]` central.
    Heisenberg(i64, i64, i64),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Cyclic(r) => write!(f, "{r}"),
            GroupElement::Perm(p) => write!(f, "{p:?}"),
            GroupElement::FreeAbelian(v) => write!(f, "{v:?}"),
            GroupElement::Heisenberg(a, b, c) => write!(f, "x^{a} y^{b} z^{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    Cyclic { order: u64 },
    FinitePermutation { degree: usize },
    FreeAbelian { rank: usize },
    Heisenberg,
}

#[derive(Debug, Default)]
struct BfsState {
    lengths: HashMap<GroupElement, u32>,
    frontier: Vec<GroupElement>,
    radius: u32,
    started: bool,
}

impl BfsState {
    fn complete(&self) -> bool {
        self.started && self.frontier.is_empty()
    }
}

#[derive(Debug)]
struct Inner {
    kind: GroupKind,
    generators: Vec<GroupElement>,
    cap: usize,
    bfs: Mutex<BfsState>,
}

/// A realized finitely generated group together with its generating set.
///
/// Cloning is cheap; clones share the Cayley-graph cache.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    inner: Arc<Inner>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.kind == other.inner.kind
                && self.inner.generators == other.inner.generators)
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        out[pi] = i;
    }
    out
}

impl GroupSpec {
    fn build(kind: GroupKind, gens: Vec<GroupElement>) -> Result<Self> {
        let spec = GroupSpec {
            inner: Arc::new(Inner {
                kind,
                generators: Vec::new(),
                cap: DEFAULT_BALL_CAP,
                bfs: Mutex::new(BfsState::default()),
            }),
        };
        let id = spec.identity();
        let mut set = BTreeSet::new();
        for g in gens {
            spec.validate(&g)?;
            if g == id {
                continue;
            }
            set.insert(spec.inverse(&g));
            set.insert(g);
        }
        if set.is_empty() && !matches!(spec.inner.kind, GroupKind::Cyclic { order: 1 }) {
            return input("generating set is empty");
        }
        Ok(GroupSpec {
            inner: Arc::new(Inner {
                kind: spec.inner.kind.clone(),
                generators: set.into_iter().collect(),
                cap: DEFAULT_BALL_CAP,
                bfs: Mutex::new(BfsState::default()),
            }),
        })
    }

    /// `ℤ/n` with generators `{±1}`.
    pub fn cyclic(order: u64) -> Result<Self> {
        if order == 0 {
            return input("cyclic group order must be positive");
        }
        let gens = if order > 1 { vec![GroupElement::Cyclic(1)] } else { vec![] };
        Self::build(GroupKind::Cyclic { order }, gens)
    }

    /// Subgroup of `S_degree` generated by the given image arrays (closed under
    /// inversion automatically).
    pub fn permutation(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return input("permutation degree must be positive");
        }
        Self::build(
            GroupKind::FinitePermutation { degree },
            generators.into_iter().map(GroupElement::Perm).collect(),
        )
    }

    /// `S_n` generated by the transposition `(0 1)` and the cycle `(0 1 … n-1)`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n < 2 {
            return input("symmetric group needs degree at least 2");
        }
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::permutation(n, vec![t, c])
    }

    /// `ℤ^rank` with the standard basis and its negatives.
    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return input("free abelian rank must be positive");
        }
        let gens = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                GroupElement::FreeAbelian(v)
            })
            .collect();
        Self::build(GroupKind::FreeAbelian { rank }, gens)
    }

    /// Discrete Heisenberg group generated by `x, y` and their inverses.
    pub fn heisenberg() -> Result<Self> {
        Self::build(
            GroupKind::Heisenberg,
            vec![GroupElement::Heisenberg(1, 0, 0), GroupElement::Heisenberg(0, 1, 0)],
        )
    }

    /// Returns a copy of this spec with a different enumeration cap and a fresh cache.
    pub fn with_capacity(&self, cap: usize) -> Self {
        GroupSpec {
            inner: Arc::new(Inner {
                kind: self.inner.kind.clone(),
                generators: self.inner.generators.clone(),
                cap,
                bfs: Mutex::new(BfsState::default()),
            }),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.inner.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.inner.generators
    }

    pub fn capacity(&self) -> usize {
        self.inner.cap
    }

    pub fn identity(&self) -> GroupElement {
        match &self.inner.kind {
            GroupKind::Cyclic { .. } => GroupElement::Cyclic(0),
            GroupKind::FinitePermutation { degree } => GroupElement::Perm((0..*degree).collect()),
            GroupKind::FreeAbelian { rank } => GroupElement::FreeAbelian(vec![0; *rank]),
            GroupKind::Heisenberg => GroupElement::Heisenberg(0, 0, 0),
        }
    }

    /// Checks that `g` has the canonical form expected by this group.
    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        let ok = match (&self.inner.kind, g) {
            (GroupKind::Cyclic { order }, GroupElement::Cyclic(r)) => r < order,
            (GroupKind::FinitePermutation { degree }, GroupElement::Perm(p)) => {
                p.len() == *degree && {
                    let mut seen = vec![false; *degree];
                    p.iter().all(|&i| i < *degree && !std::mem::replace(&mut seen[i], true))
                }
            }
            (GroupKind::FreeAbelian { rank }, GroupElement::FreeAbelian(v)) => v.len() == *rank,
            (GroupKind::Heisenberg, GroupElement::Heisenberg(..)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            input(format!("element {g} is not valid for group {:?}", self.inner.kind))
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.inner.kind, a, b) {
            (GroupKind::Cyclic { order }, Cyclic(x), Cyclic(y)) => Cyclic((x + y) % order),
            (_, Perm(p), Perm(q)) => Perm(compose(p, q)),
            (_, FreeAbelian(u), FreeAbelian(v)) => {
                FreeAbelian(u.iter().zip(v).map(|(x, y)| x + y).collect())
            }
            // y^b x^a' = x^a' y^b z^(-a' b)
            (_, Heisenberg(a1, b1, c1), Heisenberg(a2, b2, c2)) => {
                Heisenberg(a1 + a2, b1 + b2, c1 + c2 - a2 * b1)
            }
            _ => panic!("mixed element kinds {a} and {b}"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.inner.kind, g) {
            (GroupKind::Cyclic { order }, Cyclic(x)) => Cyclic((order - x) % order),
            (_, Perm(p)) => Perm(invert_perm(p)),
            (_, FreeAbelian(v)) => FreeAbelian(v.iter().map(|x| -x).collect()),
            (_, Heisenberg(a, b, c)) => Heisenberg(-a, -b, -c - a * b),
            _ => panic!("element {g} does not belong to {:?}", self.inner.kind),
        }
    }

    /// `w g w⁻¹`.
    pub fn conjugate(&self, w: &GroupElement, g: &GroupElement) -> GroupElement {
        self.mul(&self.mul(w, g), &self.inverse(w))
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self.inner.kind,
            GroupKind::Cyclic { .. } | GroupKind::FinitePermutation { .. }
        )
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Result<Option<usize>> {
        if !self.is_finite() {
            return Ok(None);
        }
        Ok(Some(self.elements()?.len()))
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return input("element enumeration requires a finite group");
        }
        if let GroupKind::Cyclic { order } = self.inner.kind {
            return Ok((0..order).map(GroupElement::Cyclic).collect());
        }
        let mut st = self.inner.bfs.lock().unwrap();
        self.extend_bfs(&mut st, u32::MAX)?;
        let mut all: Vec<_> = st.lengths.keys().cloned().collect();
        all.sort();
        Ok(all)
    }

    /// Order of an element, `None` for infinite order.
    pub fn element_order(&self, g: &GroupElement) -> Result<Option<u64>> {
        self.validate(g)?;
        let id = self.identity();
        match &self.inner.kind {
            GroupKind::FreeAbelian { .. } | GroupKind::Heisenberg => {
                Ok(if *g == id { Some(1) } else { None })
            }
            _ => {
                let mut acc = g.clone();
                let mut n = 1u64;
                while acc != id {
                    acc = self.mul(&acc, g);
                    n += 1;
                }
                Ok(Some(n))
            }
        }
    }

    /// Orders of all elements of a finite group.
    pub fn element_orders(&self) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for g in self.elements()? {
            if let Some(n) = self.element_order(&g)? {
                out.insert(n);
            }
        }
        Ok(out)
    }

    /// Whether the full conjugacy class of `h` is finite, so that a large
    /// enough truncation radius captures all of it.
    pub fn class_is_finite(&self, h: &GroupElement) -> bool {
        match (&self.inner.kind, h) {
            (GroupKind::Heisenberg, GroupElement::Heisenberg(a, b, _)) => *a == 0 && *b == 0,
            _ => true,
        }
    }

    fn extend_bfs(&self, st: &mut BfsState, radius: u32) -> Result<()> {
        if !st.started {
            let id = self.identity();
            st.lengths.insert(id.clone(), 0);
            st.frontier = vec![id];
            st.started = true;
        }
        while st.radius < radius && !st.frontier.is_empty() {
            let mut next = Vec::new();
            for g in &st.frontier {
                for s in &self.inner.generators {
                    let h = self.mul(g, s);
                    if !st.lengths.contains_key(&h) {
                        st.lengths.insert(h.clone(), st.radius + 1);
                        next.push(h);
                    }
                }
            }
            if st.lengths.len() > self.inner.cap {
                // Leave the cache consistent: drop the partial layer.
                for h in &next {
                    st.lengths.remove(h);
                }
                return Err(Error::Capacity {
                    what: format!("ball of radius {}", st.radius + 1),
                    limit: self.inner.cap,
                });
            }
            next.sort();
            st.frontier = next;
            st.radius += 1;
        }
        Ok(())
    }

    /// Word length of `g` with respect to the declared generators.
    pub fn word_length(&self, g: &GroupElement) -> Result<u32> {
        self.validate(g)?;
        match (&self.inner.kind, g) {
            (GroupKind::Cyclic { order }, GroupElement::Cyclic(r)) => {
                return Ok((*r).min(order - r) as u32)
            }
            (GroupKind::FreeAbelian { .. }, GroupElement::FreeAbelian(v)) => {
                return Ok(v.iter().map(|x| x.unsigned_abs() as u32).sum())
            }
            _ => {}
        }
        let mut st = self.inner.bfs.lock().unwrap();
        loop {
            if let Some(&l) = st.lengths.get(g) {
                return Ok(l);
            }
            if st.complete() {
                return input(format!("element {g} is not reachable from the generators"));
            }
            let r = st.radius + 1;
            self.extend_bfs(&mut st, r)?;
        }
    }

    /// Elements of word length at most `radius`, sorted by (length, canonical form).
    pub fn ball(&self, radius: u32) -> Result<Vec<GroupElement>> {
        let mut out: Vec<(u32, GroupElement)> = match &self.inner.kind {
            GroupKind::Cyclic { order } => (0..*order)
                .map(GroupElement::Cyclic)
                .map(|g| (self.word_length(&g).unwrap(), g))
                .filter(|(l, _)| *l <= radius)
                .collect(),
            GroupKind::FreeAbelian { rank } => {
                let count = l1_ball_size(*rank, radius);
                if count > self.inner.cap as u128 {
                    return Err(Error::Capacity {
                        what: format!("ball of radius {radius}"),
                        limit: self.inner.cap,
                    });
                }
                let mut acc = Vec::new();
                l1_ball(*rank, radius as i64, &mut vec![], &mut acc);
                acc.into_iter()
                    .map(|v| {
                        let l = v.iter().map(|x| x.unsigned_abs() as u32).sum();
                        (l, GroupElement::FreeAbelian(v))
                    })
                    .collect()
            }
            _ => {
                let mut st = self.inner.bfs.lock().unwrap();
                self.extend_bfs(&mut st, radius)?;
                st.lengths
                    .iter()
                    .filter(|(_, &l)| l <= radius)
                    .map(|(g, &l)| (l, g.clone()))
                    .collect()
            }
        };
        out.sort();
        Ok(out.into_iter().map(|(_, g)| g).collect())
    }

    /// `{g ∈ ⟨h⟩ : |g| ≤ radius}`, found by closing `{h}` under conjugation
    /// by generators. Returned sorted by (length, canonical form).
    pub fn conjugacy_class_ball(&self, h: &GroupElement, radius: u32) -> Result<Vec<GroupElement>> {
        Ok(self
            .class_with_lengths(h, radius)?
            .into_iter()
            .map(|(_, g)| g)
            .collect())
    }

    /// Like [`conjugacy_class_ball`](Self::conjugacy_class_ball) but keeps the lengths.
    pub fn class_with_lengths(&self, h: &GroupElement, radius: u32) -> Result<Vec<(u32, GroupElement)>> {
        self.validate(h)?;
        let explore = radius.saturating_add(CLASS_EXPLORATION_SLACK);
        let mut seen: HashMap<GroupElement, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let lh = self.word_length(h)?;
        if lh <= explore {
            seen.insert(h.clone(), lh);
            queue.push_back(h.clone());
        }
        while let Some(g) = queue.pop_front() {
            for s in self.generators() {
                let c = self.conjugate(s, &g);
                if seen.contains_key(&c) {
                    continue;
                }
                let l = self.word_length(&c)?;
                if l <= explore {
                    if seen.len() >= self.inner.cap {
                        return Err(Error::Capacity {
                            what: format!("conjugacy class ball of radius {radius}"),
                            limit: self.inner.cap,
                        });
                    }
                    seen.insert(c.clone(), l);
                    queue.push_back(c);
                }
            }
        }
        let mut out: Vec<_> = seen
            .into_iter()
            .filter(|(_, l)| *l <= radius)
            .map(|(g, l)| (l, g))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Shortest element of the class of `h` within `radius`, if any.
    pub fn min_class_length(&self, h: &GroupElement, radius: u32) -> Result<Option<u32>> {
        Ok(self.class_with_lengths(h, radius)?.first().map(|(l, _)| *l))
    }

    /// Class-ball counts `N(r) = #{g ∈ ⟨h⟩ : |g| ≤ r}` for `r = 1..=radius`.
    pub fn class_growth_counts(&self, h: &GroupElement, radius: u32) -> Result<Vec<u64>> {
        let class = self.class_with_lengths(h, radius)?;
        Ok((1..=radius)
            .map(|r| class.iter().filter(|(l, _)| *l <= r).count() as u64)
            .collect())
    }

    /// One representative per non-identity conjugacy class of a finite group.
    pub fn nontrivial_class_representatives(&self) -> Result<Vec<GroupElement>> {
        let all = self.elements()?;
        let id = self.identity();
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for g in all {
            if g == id || covered.contains(&g) {
                continue;
            }
            for c in self.conjugacy_class_ball(&g, u32::MAX - CLASS_EXPLORATION_SLACK)? {
                covered.insert(c);
            }
            reps.push(g);
        }
        Ok(reps)
    }
}

fn l1_ball_size(rank: usize, radius: u32) -> u128 {
    // Σ_i 2^i C(rank, i) C(radius, i)
    let mut total: u128 = 0;
    for i in 0..=rank.min(radius as usize) {
        let mut term: u128 = 1u128 << i;
        term = term.saturating_mul(binom(rank as u128, i as u128));
        term = term.saturating_mul(binom(radius as u128, i as u128));
        total = total.saturating_add(term);
    }
    total
}

fn binom(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn l1_ball(rank: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == rank {
        out.push(prefix.clone());
        return;
    }
    for x in -budget..=budget {
        prefix.push(x);
        l1_ball(rank, budget - x.abs(), prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupElement::*;

    fn heis(a: i64, b: i64, c: i64) -> GroupElement {
        Heisenberg(a, b, c)
    }

    /// Exhaustive word enumeration: the shortest word over the generators
    /// that evaluates to `target`, searching all words up to `max_len`.
    fn brute_force_length(g: &GroupSpec, target: &GroupElement, max_len: usize) -> Option<usize> {
        let gens = g.generators().to_vec();
        let mut layer = vec![g.identity()];
        for len in 0..=max_len {
            if layer.contains(target) {
                return Some(len);
            }
            layer = layer
                .iter()
                .flat_map(|w| gens.iter().map(move |s| (w.clone(), s.clone())))
                .map(|(w, s)| g.mul(&w, &s))
                .collect();
        }
        None
    }

    #[test]
    fn word_length_examples() {
        let z2 = GroupSpec::free_abelian(2).unwrap();
        assert_eq!(z2.word_length(&FreeAbelian(vec![3, -4])).unwrap(), 7);
        let c5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(c5.word_length(&Cyclic(3)).unwrap(), 2);
        let h = GroupSpec::heisenberg().unwrap();
        let z = heis(0, 0, 1);
        assert_eq!(brute_force_length(&h, &z, 4), Some(4));
        assert_eq!(h.word_length(&z).unwrap(), 4);
        assert_eq!(h.word_length(&h.identity()).unwrap(), 0);
    }

    #[test]
    fn commutator_is_z() {
        let h = GroupSpec::heisenberg().unwrap();
        let x = heis(1, 0, 0);
        let y = heis(0, 1, 0);
        let comm = h.mul(&h.mul(&x, &y), &h.mul(&h.inverse(&x), &h.inverse(&y)));
        assert_eq!(comm, heis(0, 0, 1));
        // yx = xyz⁻¹
        assert_eq!(h.mul(&y, &x), h.mul(&h.mul(&x, &y), &heis(0, 0, -1)));
    }

    #[test]
    fn invalid_elements_rejected() {
        let c5 = GroupSpec::cyclic(5).unwrap();
        assert!(matches!(c5.word_length(&Cyclic(7)), Err(Error::Input(_))));
        assert!(c5.word_length(&heis(0, 0, 0)).is_err());
        let s3 = GroupSpec::symmetric(3).unwrap();
        assert!(s3.validate(&Perm(vec![0, 0, 1])).is_err());
    }

    #[test]
    fn ball_examples() {
        for g in [
            GroupSpec::cyclic(7).unwrap(),
            GroupSpec::symmetric(3).unwrap(),
            GroupSpec::free_abelian(2).unwrap(),
            GroupSpec::heisenberg().unwrap(),
        ] {
            assert_eq!(g.ball(0).unwrap(), vec![g.identity()]);
        }
        let z = GroupSpec::free_abelian(1).unwrap();
        let b = z.ball(3).unwrap();
        assert_eq!(b.len(), 7);
        let vals: BTreeSet<i64> = b
            .iter()
            .map(|g| match g {
                FreeAbelian(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(vals, (-3..=3).collect());
        let h = GroupSpec::heisenberg().unwrap();
        let b4 = h.ball(4).unwrap();
        assert!(b4.contains(&heis(0, 0, 1)));
        assert!(b4.contains(&heis(0, 0, -1)));
        assert!(!h.ball(3).unwrap().contains(&heis(0, 0, 1)));
    }

    #[test]
    fn heisenberg_ball_matches_brute_force() {
        let h = GroupSpec::heisenberg().unwrap();
        let mut brute = BTreeSet::new();
        let mut layer = vec![h.identity()];
        brute.insert(h.identity());
        for _ in 0..4 {
            layer = layer
                .iter()
                .flat_map(|w| h.generators().iter().map(|s| h.mul(w, s)).collect::<Vec<_>>())
                .collect();
            brute.extend(layer.iter().cloned());
        }
        let ball: BTreeSet<_> = h.ball(4).unwrap().into_iter().collect();
        assert_eq!(ball, brute);
    }

    #[test]
    fn capacity_error() {
        let h = GroupSpec::heisenberg().unwrap().with_capacity(100);
        assert!(matches!(h.ball(10), Err(Error::Capacity { .. })));
        let z3 = GroupSpec::free_abelian(3).unwrap().with_capacity(10);
        assert!(matches!(z3.ball(5), Err(Error::Capacity { .. })));
    }

    #[test]
    fn class_examples() {
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let h = FreeAbelian(vec![1, -2]);
        assert_eq!(z2.conjugacy_class_ball(&h, 5).unwrap(), vec![h.clone()]);
        assert_eq!(z2.conjugacy_class_ball(&h, 2).unwrap(), vec![]);

        let s3 = GroupSpec::symmetric(3).unwrap();
        let t = Perm(vec![1, 0, 2]);
        let class = s3.conjugacy_class_ball(&t, 10).unwrap();
        assert_eq!(class.len(), 3);
        for p in &class {
            let fixed = match p {
                Perm(v) => v.iter().enumerate().filter(|(i, &x)| *i == x).count(),
                _ => unreachable!(),
            };
            assert_eq!(fixed, 1);
        }

        let he = GroupSpec::heisenberg().unwrap();
        let x = heis(1, 0, 0);
        let class = he.conjugacy_class_ball(&x, 8).unwrap();
        // Oracle: class of x is {x z^m}; keep those with length ≤ 8.
        let ball8 = he.ball(8).unwrap();
        let expected: BTreeSet<_> = ball8
            .into_iter()
            .filter(|g| matches!(g, Heisenberg(1, 0, _)))
            .collect();
        assert_eq!(class.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert!(class.len() > 3);
    }

    #[test]
    fn min_class_length_examples() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(c2.min_class_length(&Cyclic(1), 3).unwrap(), Some(1));
        let he = GroupSpec::heisenberg().unwrap();
        assert_eq!(he.min_class_length(&heis(1, 0, 0), 4).unwrap(), Some(1));
        let z2 = GroupSpec::free_abelian(2).unwrap();
        assert_eq!(z2.min_class_length(&FreeAbelian(vec![2, 0]), 4).unwrap(), Some(2));
        assert_eq!(z2.min_class_length(&FreeAbelian(vec![2, 0]), 1).unwrap(), None);
    }

    #[test]
    fn finite_group_data() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        assert_eq!(s3.order().unwrap(), Some(6));
        assert_eq!(s3.element_orders().unwrap(), [1, 2, 3].into_iter().collect());
        assert_eq!(s3.nontrivial_class_representatives().unwrap().len(), 2);
        let c5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(c5.nontrivial_class_representatives().unwrap().len(), 4);
    }

    #[test]
    fn generators_symmetric_without_identity() {
        let p = GroupSpec::permutation(3, vec![vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        assert_eq!(p.generators().len(), 2);
        for s in p.generators() {
            assert!(p.generators().contains(&p.inverse(s)));
            assert_ne!(*s, p.identity());
        }
    }
}
