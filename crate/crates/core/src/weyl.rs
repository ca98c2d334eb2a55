//! Root systems of types A, B, C, D in the usual coordinates, and their Weyl
//! groups acting on half-integer weights by signed permutations.
//!
//! Type A with rank `r` acts on `r + 1` coordinates (the `GL(r + 1)` picture);
//! the other families act on `rank` coordinates. Type D carries an `extended`
//! flag: when set, the acting group is the full signed-permutation group, i.e.
//! the Weyl group together with the outer automorphism of the orthogonal group.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    family: Family,
    rank: usize,
    extended: bool,
}

impl GroupType {
    pub fn new(family: Family, rank: usize, extended: bool) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroupType("rank must be at least 1".into()));
        }
        if extended && family != Family::D {
            return Err(Error::InvalidGroupType(format!(
                "only type D can be extended, got {family:?}"
            )));
        }
        Ok(GroupType {
            family,
            rank,
            extended,
        })
    }

    pub fn a(rank: usize) -> Result<Self> {
        Self::new(Family::A, rank, false)
    }

    pub fn b(rank: usize) -> Result<Self> {
        Self::new(Family::B, rank, false)
    }

    pub fn c(rank: usize) -> Result<Self> {
        Self::new(Family::C, rank, false)
    }

    pub fn d(rank: usize, extended: bool) -> Result<Self> {
        Self::new(Family::D, rank, extended)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn extended(&self) -> bool {
        self.extended
    }

    /// Number of coordinates the group acts on.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }

    /// True when every sign pattern is allowed (B, C, extended D).
    fn all_signs(&self) -> bool {
        matches!(self.family, Family::B | Family::C) || self.extended
    }

    pub fn weyl_order(&self) -> u64 {
        let n = self.dim() as u64;
        let fact: u64 = (1..=n).product();
        match self.family {
            Family::A => fact,
            _ if self.all_signs() => fact << n,
            _ => fact << (n - 1),
        }
    }

    fn check(&self, w: &Weight) -> Result<()> {
        if w.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.dim(),
                found: w.len(),
            })
        }
    }

    /// Simple roots in the standard order: `e₁−e₂, …` followed by the
    /// family-specific last root. D₁ has none.
    pub fn simple_roots(&self) -> Vec<Weight> {
        let n = self.dim();
        let unit = |i: usize, c: i64| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let diff = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            Weight::from_ints(&v)
        };
        let mut roots: Vec<Weight> = (0..n.saturating_sub(1)).map(diff).collect();
        match self.family {
            Family::A => {}
            Family::B => roots.push(Weight::from_ints(&unit(n - 1, 1))),
            Family::C => roots.push(Weight::from_ints(&unit(n - 1, 2))),
            Family::D => {
                if n >= 2 {
                    let mut v = vec![0; n];
                    v[n - 2] = 1;
                    v[n - 1] = 1;
                    roots.push(Weight::from_ints(&v));
                }
            }
        }
        roots
    }

    /// Positive roots for the standard positive system (lexicographically positive roots).
    pub fn positive_roots(&self) -> Vec<Weight> {
        let n = self.dim();
        let mut roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = -1;
                roots.push(Weight::from_ints(&v));
                if self.family != Family::A {
                    v[j] = 1;
                    roots.push(Weight::from_ints(&v));
                }
            }
            match self.family {
                Family::B | Family::C => {
                    let mut v = vec![0; n];
                    v[i] = if self.family == Family::B { 1 } else { 2 };
                    roots.push(Weight::from_ints(&v));
                }
                _ => {}
            }
        }
        roots
    }

    /// Half the sum of the positive roots.
    pub fn half_sum_positive_roots(&self) -> Weight {
        let n = self.dim() as i64;
        // Doubled coordinates of the standard closed forms.
        let doubled: Vec<i64> = (0..n)
            .map(|i| match self.family {
                Family::A => n - 1 - 2 * i,
                Family::B => 2 * (n - i) - 1,
                Family::C => 2 * (n - i),
                Family::D => 2 * (n - 1 - i),
            })
            .collect();
        Weight::from_doubled(&doubled)
    }

    /// Generators used for orbit closure: the simple reflections, plus the
    /// last-coordinate sign change for extended D.
    pub fn generators(&self) -> Vec<WeylElement> {
        let mut gens: Vec<WeylElement> = (0..self.simple_roots().len())
            .map(|i| self.simple_reflection(i))
            .collect();
        if self.extended {
            let n = self.dim();
            let mut signs = vec![1; n];
            signs[n - 1] = -1;
            gens.push(WeylElement {
                perm: (0..n).collect(),
                signs,
            });
        }
        gens
    }

    /// The reflection in the `i`-th simple root.
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        let n = self.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut signs = vec![1i8; n];
        if i + 1 < n {
            perm.swap(i, i + 1);
        } else {
            match self.family {
                Family::B | Family::C => signs[n - 1] = -1,
                Family::D => {
                    perm.swap(n - 2, n - 1);
                    signs[n - 2] = -1;
                    signs[n - 1] = -1;
                }
                Family::A => unreachable!("type A has no root beyond e_(n-1) - e_n"),
            }
        }
        WeylElement { perm, signs }
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        if w.perm.len() != self.dim() {
            return false;
        }
        match self.family {
            Family::A => w.signs.iter().all(|&s| s == 1),
            _ if self.all_signs() => true,
            _ => w.negative_count().is_multiple_of(2),
        }
    }

    /// Every element of the group, in a fixed order.
    pub fn elements(&self) -> Vec<WeylElement> {
        let n = self.dim();
        let perms = permutations(n);
        let sign_masks: Vec<u32> = if self.family == Family::A {
            vec![0]
        } else {
            (0..1u32 << n)
                .filter(|m| self.all_signs() || m.count_ones() % 2 == 0)
                .collect()
        };
        let mut out = Vec::with_capacity(perms.len() * sign_masks.len());
        for perm in &perms {
            for &mask in &sign_masks {
                let signs = (0..n)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                out.push(WeylElement {
                    perm: perm.clone(),
                    signs,
                });
            }
        }
        out
    }

    /// The canonical orbit representative.
    ///
    /// Coordinates are sorted non-increasing; for B, C and extended D they are
    /// made non-negative. For plain D the sign parity of the nonzero entries is
    /// an invariant, so when it is odd and no coordinate vanishes the last
    /// entry keeps a minus sign.
    pub fn dominant_rep(&self, w: &Weight) -> Result<Weight> {
        self.check(w)?;
        Ok(self.dominant_unchecked(w))
    }

    pub(crate) fn dominant_unchecked(&self, w: &Weight) -> Weight {
        match self.family {
            Family::A => w.sorted_desc(),
            _ => {
                let mut abs: Vec<HalfInt> = w.iter().map(|c| c.abs()).collect();
                abs.sort_unstable_by(|a, b| b.cmp(a));
                if !self.all_signs() {
                    let negatives = w.iter().filter(|c| c.signum() < 0).count();
                    let has_zero = abs.last().is_some_and(|c| *c == HalfInt::ZERO);
                    if negatives % 2 == 1 && !has_zero {
                        let last = abs.len() - 1;
                        abs[last] = -abs[last];
                    }
                }
                Weight(abs)
            }
        }
    }

    pub fn is_dominant(&self, w: &Weight) -> Result<bool> {
        Ok(self.dominant_rep(w)? == *w)
    }

    /// The full orbit of `w`, sorted, together with the order of its stabilizer.
    ///
    /// The orbit is closed up by breadth-first search under [`Self::generators`]
    /// starting at the dominant representative; it never walks the whole group.
    pub fn orbit(&self, w: &Weight) -> Result<Orbit> {
        self.check(w)?;
        let start = self.dominant_unchecked(w);
        let gens = self.generators();
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.apply_unchecked(&x);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut weights: Vec<Weight> = seen.into_iter().collect();
        weights.sort();
        let stabilizer_order = self.weyl_order() / weights.len() as u64;
        Ok(Orbit {
            weights,
            stabilizer_order,
        })
    }

    fn check_levi(&self, levi: &BTreeSet<usize>) -> Result<()> {
        let count = self.simple_roots().len();
        match levi.iter().find(|&&i| i >= count) {
            Some(i) => Err(Error::InvalidRootSubset(format!(
                "simple root index {i} out of range for {self} ({count} simple roots)"
            ))),
            None => Ok(()),
        }
    }

    /// The subgroup generated by the simple reflections indexed by `levi`.
    pub fn levi_subgroup(&self, levi: &BTreeSet<usize>) -> Result<Vec<WeylElement>> {
        self.check_levi(levi)?;
        let gens: Vec<WeylElement> = levi.iter().map(|&i| self.simple_reflection(i)).collect();
        let identity = WeylElement::identity(self.dim());
        let mut seen: HashSet<WeylElement> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<WeylElement> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Minimal-length representatives of the cosets `w·W_L`.
    ///
    /// These are the `w` sending every positive root of the Levi to a
    /// positive root; each `w ∈ W` factors uniquely as `rep · u` with `u ∈ W_L`.
    pub fn kostant_reps(&self, levi: &BTreeSet<usize>) -> Result<Vec<WeylElement>> {
        self.check_levi(levi)?;
        let simple = self.simple_roots();
        let levi_roots: Vec<&Weight> = levi.iter().map(|&i| &simple[i]).collect();
        let mut reps: Vec<WeylElement> = self
            .elements()
            .into_iter()
            .filter(|w| {
                levi_roots
                    .iter()
                    .all(|alpha| is_positive_root(&w.apply_unchecked(alpha)))
            })
            .collect();
        reps.sort();
        Ok(reps)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)?;
        if self.extended {
            write!(f, "+")?;
        }
        Ok(())
    }
}

/// A lexicographically positive root (first nonzero coordinate positive).
pub fn is_positive_root(alpha: &Weight) -> bool {
    alpha
        .iter()
        .find(|c| **c != HalfInt::ZERO)
        .is_some_and(|c| c.signum() > 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub weights: Vec<Weight>,
    pub stabilizer_order: u64,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.weights.binary_search(w).is_ok()
    }
}

/// A signed permutation: `(w·x)[perm[i]] = signs[i] · x[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: signs.len(),
            });
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if p >= n || hit[p] {
                return Err(Error::InvalidGroupType(format!("{perm:?} is not a permutation")));
            }
            hit[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidGroupType(format!("signs must be ±1: {signs:?}")));
        }
        Ok(WeylElement { perm, signs })
    }

    /// A plain permutation (all signs positive).
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![1; n])
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn apply(&self, w: &Weight) -> Result<Weight> {
        if w.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: w.len(),
            });
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Weight) -> Weight {
        let mut out = vec![HalfInt::ZERO; w.len()];
        for (i, c) in w.iter().enumerate() {
            out[self.perm[i]] = *c * i64::from(self.signs[i]);
        }
        Weight(out)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.len(), other.len(), "Weyl element size mismatch");
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&j, &s)| s * self.signs[j])
            .collect();
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if self.signs[i] < 0 { "-" } else { "" };
            write!(f, "{sign}{}", self.perm[i] + 1)?;
        }
        write!(f, "]")
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

/// Advances `v` to the next lexicographic arrangement; false once it wraps.
/// Repeated entries are handled, so this walks distinct rearrangements only.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levi(ix: &[usize]) -> BTreeSet<usize> {
        ix.iter().copied().collect()
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(GroupType::c(2).unwrap().weyl_order(), 8);
        assert_eq!(GroupType::a(2).unwrap().weyl_order(), 6);
        assert_eq!(GroupType::d(4, false).unwrap().weyl_order(), 192);
        assert_eq!(GroupType::d(4, true).unwrap().weyl_order(), 384);
        assert_eq!(GroupType::b(3).unwrap().weyl_order(), 48);
        for t in [
            GroupType::a(3).unwrap(),
            GroupType::b(3).unwrap(),
            GroupType::d(3, false).unwrap(),
            GroupType::d(3, true).unwrap(),
        ] {
            assert_eq!(t.elements().len() as u64, t.weyl_order(), "{t}");
        }
    }

    #[test]
    fn invalid_types() {
        assert!(GroupType::c(0).is_err());
        assert!(GroupType::new(Family::B, 2, true).is_err());
    }

    #[test]
    fn orbit_examples() {
        let b2 = GroupType::b(2).unwrap();
        let o = b2.orbit(&Weight::from_ints(&[1, 0])).unwrap();
        let expected: BTreeSet<Weight> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|c| Weight::from_ints(c))
            .collect();
        assert_eq!(o.weights.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(o.stabilizer_order, 2);

        let c2 = GroupType::c(2).unwrap();
        assert_eq!(c2.orbit(&Weight::from_ints(&[2, 1])).unwrap().len(), 8);

        for t in [GroupType::a(3).unwrap(), GroupType::d(3, false).unwrap()] {
            let o = t.orbit(&Weight::zero(t.dim())).unwrap();
            assert_eq!(o.weights, vec![Weight::zero(t.dim())]);
            assert_eq!(o.stabilizer_order, t.weyl_order());
        }
        assert!(c2.orbit(&Weight::zero(3)).is_err());
    }

    #[test]
    fn dominant_examples() {
        let c2 = GroupType::c(2).unwrap();
        assert_eq!(
            c2.dominant_rep(&Weight::from_ints(&[-1, 3])).unwrap(),
            Weight::from_ints(&[3, 1])
        );
        let d3 = GroupType::d(3, false).unwrap();
        let d3e = GroupType::d(3, true).unwrap();
        // Two sign changes are available in D3, so (-2,1,-1) reaches (2,1,1).
        assert_eq!(
            d3.dominant_rep(&Weight::from_ints(&[-2, 1, -1])).unwrap(),
            Weight::from_ints(&[2, 1, 1])
        );
        assert_eq!(
            d3.dominant_rep(&Weight::from_ints(&[-2, 1, 1])).unwrap(),
            Weight::from_ints(&[2, 1, -1])
        );
        assert_eq!(
            d3e.dominant_rep(&Weight::from_ints(&[-2, 1, -1])).unwrap(),
            Weight::from_ints(&[2, 1, 1])
        );
        // A zero coordinate absorbs the residual sign.
        assert_eq!(
            d3.dominant_rep(&Weight::from_ints(&[-2, 0, 1])).unwrap(),
            Weight::from_ints(&[2, 1, 0])
        );
    }

    #[test]
    fn dominant_rep_is_the_orbit_minimum_under_the_tie_break() {
        // Oracle: among all orbit elements that are sorted non-increasing with
        // non-negative entries except possibly the last, pick the one with the
        // fewest negative entries.
        let d3 = GroupType::d(3, false).unwrap();
        for c in [[-2, 1, -1], [-2, 1, 1], [3, -3, 1], [1, 1, -1]] {
            let w = Weight::from_ints(&c);
            let candidates: Vec<Weight> = d3
                .elements()
                .iter()
                .map(|g| g.apply(&w).unwrap())
                .filter(|x| {
                    x.0.windows(2).all(|p| p[0] >= p[1])
                        && x.0[..x.len() - 1].iter().all(|c| c.signum() >= 0)
                })
                .collect();
            let best = candidates
                .iter()
                .min_by_key(|x| (x.iter().filter(|c| c.signum() < 0).count(), std::cmp::Reverse((*x).clone())))
                .unwrap();
            assert_eq!(&d3.dominant_rep(&w).unwrap(), best, "{w}");
        }
    }

    #[test]
    fn half_sums() {
        assert_eq!(
            GroupType::c(2).unwrap().half_sum_positive_roots(),
            Weight::from_ints(&[2, 1])
        );
        assert_eq!(
            GroupType::b(2).unwrap().half_sum_positive_roots(),
            Weight::from_doubled(&[3, 1])
        );
        assert_eq!(
            GroupType::d(4, false).unwrap().half_sum_positive_roots(),
            Weight::from_ints(&[3, 2, 1, 0])
        );
        assert_eq!(
            GroupType::a(2).unwrap().half_sum_positive_roots(),
            Weight::from_ints(&[1, 0, -1])
        );
    }

    #[test]
    fn half_sum_matches_root_sum() {
        for t in [
            GroupType::a(4).unwrap(),
            GroupType::b(4).unwrap(),
            GroupType::c(3).unwrap(),
            GroupType::d(4, false).unwrap(),
        ] {
            let mut sum = Weight::zero(t.dim());
            for r in t.positive_roots() {
                sum = &sum + &r;
            }
            let doubled: Weight = t.half_sum_positive_roots().iter().map(|c| *c * 2).collect();
            assert_eq!(sum, doubled, "{t}");
        }
    }

    #[test]
    fn kostant_examples() {
        let c2 = GroupType::c(2).unwrap();
        assert_eq!(c2.kostant_reps(&levi(&[0])).unwrap().len(), 4);
        assert_eq!(
            c2.kostant_reps(&levi(&[0, 1])).unwrap(),
            vec![WeylElement::identity(2)]
        );
        let a2 = GroupType::a(2).unwrap();
        assert_eq!(a2.kostant_reps(&levi(&[])).unwrap().len(), 6);
        assert!(a2.kostant_reps(&levi(&[2])).is_err());
    }

    #[test]
    fn kostant_reps_factor_the_group() {
        for t in [
            GroupType::b(3).unwrap(),
            GroupType::d(4, false).unwrap(),
            GroupType::a(3).unwrap(),
        ] {
            let count = t.simple_roots().len();
            for mask in 0..1u32 << count {
                let l: BTreeSet<usize> = (0..count).filter(|i| mask >> i & 1 == 1).collect();
                let reps = t.kostant_reps(&l).unwrap();
                let wl = t.levi_subgroup(&l).unwrap();
                assert_eq!(reps.len() * wl.len(), t.weyl_order() as usize);
                let mut products: Vec<WeylElement> = reps
                    .iter()
                    .flat_map(|r| wl.iter().map(move |u| r.compose(u)))
                    .collect();
                products.sort();
                let mut all = t.elements();
                all.sort();
                assert_eq!(products, all, "{t} levi {l:?}");
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let b3 = GroupType::b(3).unwrap();
        let els = b3.elements();
        let w = Weight::from_doubled(&[5, -1, 2]);
        for a in els.iter().step_by(7) {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in els.iter().step_by(11) {
                assert_eq!(
                    a.compose(b).apply(&w).unwrap(),
                    a.apply(&b.apply(&w).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn next_permutation_handles_repeats() {
        let mut v = vec![1, 1, 2];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 3);
        assert_eq!(v, vec![1, 1, 2]);
    }
}
