//! Weyl-invariant combinations of torus characters, infinitesimal-character
//! supports of tensor products, and the translation weight `λ(ψ₊, ψ)`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Weight};
use crate::param::{ArthurParameter, ClassicalGroup, DominationPair, InfChar, Side};
use crate::weyl::GroupType;

/// `Σ mult · (sum over the W-orbit of a dominant weight)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterCombination {
    group_type: GroupType,
    terms: BTreeMap<Weight, i64>,
}

impl CharacterCombination {
    pub fn zero(group_type: GroupType) -> Self {
        CharacterCombination {
            group_type,
            terms: BTreeMap::new(),
        }
    }

    /// The trivial character `e^0`.
    pub fn trivial(group_type: GroupType) -> Self {
        let mut c = Self::zero(group_type);
        c.terms.insert(Weight::zero(group_type.dim()), 1);
        c
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    /// Adds `mult` copies of the orbit through `w`.
    pub fn add_orbit(&mut self, w: &Weight, mult: i64) -> Result<()> {
        let dom = self.group_type.dominant_rep(w)?;
        let total = self.terms.get(&dom).copied().unwrap_or(0) + mult;
        if total == 0 {
            self.terms.remove(&dom);
        } else {
            self.terms.insert(dom, total);
        }
        Ok(())
    }

    /// Dominant representatives with their per-element multiplicities.
    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    /// Every weight with its multiplicity, orbits expanded.
    pub fn weights(&self) -> Vec<(Weight, i64)> {
        let mut out = Vec::new();
        for (dom, &m) in &self.terms {
            let orbit = self.group_type.orbit(dom).expect("stored weights have the right length");
            out.extend(orbit.weights.into_iter().map(|w| (w, m)));
        }
        out.sort();
        out
    }

    /// `Σ` of all multiplicities over all weights.
    pub fn total_count(&self) -> i64 {
        self.terms
            .iter()
            .map(|(dom, &m)| {
                let orbit = self.group_type.orbit(dom).expect("valid weight");
                m * orbit.len() as i64
            })
            .sum()
    }
}

/// `Σ_{w ∈ W} e^{−wλ}`: the orbit of `−λ`, each weight counted `|Stab(λ)|` times.
pub fn symmetrize(group_type: GroupType, lam: &Weight) -> Result<CharacterCombination> {
    let orbit = group_type.orbit(lam)?;
    let mut c = CharacterCombination::zero(group_type);
    c.add_orbit(&-lam, orbit.stabilizer_order as i64)?;
    Ok(c)
}

/// Dominant representatives of `ν + μ` over the weights `μ` of `e`.
pub fn tensor_infchar_support(nu: &Weight, e: &CharacterCombination) -> Result<BTreeSet<Weight>> {
    let gt = e.group_type();
    if nu.len() != gt.dim() {
        return Err(Error::LengthMismatch {
            expected: gt.dim(),
            found: nu.len(),
        });
    }
    e.weights()
        .iter()
        .map(|(mu, _)| gt.dominant_rep(&(nu + mu)))
        .collect()
}

/// Restricts a support set to the orbit of `target`.
pub fn project(
    support: &BTreeSet<Weight>,
    gt: GroupType,
    target: &Weight,
) -> Result<BTreeSet<Weight>> {
    let dom = gt.dominant_rep(target)?;
    Ok(support.iter().filter(|w| **w == dom).cloned().collect())
}

/// The weight `λ` along which translation moves `ν_ψ` to `ν₊`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationDatum {
    /// `(T₁^{a₁}, …, T_v^{a_v}, 0, …, 0, −T_v^{a_v}, …, −T₁^{a₁})`.
    pub lambda_gl: Weight,
    /// The first `n` coordinates of `lambda_gl`.
    pub lambda_g: Weight,
    pub offsets: Vec<i64>,
}

pub fn translation_weight(psi: &ArthurParameter, psi_plus: &ArthurParameter) -> Result<TranslationDatum> {
    let pair = DominationPair::new(psi, psi_plus)?;
    let n_star = psi.group().dual_dim();
    let mut head = Vec::new();
    for (c, &o) in pair.copies.iter().zip(&pair.offsets) {
        head.extend(std::iter::repeat_n(HalfInt::from_int(o), c.a as usize));
    }
    let lambda_gl = mirror(&head, n_star);
    let lambda_g = lambda_gl.iter().take(psi.group().rank()).copied().collect();
    Ok(TranslationDatum {
        lambda_gl,
        lambda_g,
        offsets: pair.offsets,
    })
}

/// `head ++ zeros ++ reverse(−head)`, of total length `len`.
fn mirror(head: &[HalfInt], len: usize) -> Weight {
    let mut v = head.to_vec();
    v.resize(len - head.len(), HalfInt::ZERO);
    v.extend(head.iter().rev().map(|c| -*c));
    Weight(v)
}

/// `ν₊` written in the layout matching [`TranslationDatum::lambda_gl`]: the
/// strings of the discrete copies, then `ν_{ψ_u}`, then the negated strings.
pub fn aligned_infchar(psi: &ArthurParameter) -> Result<Weight> {
    let mut head = Vec::new();
    for c in psi.discrete_copies() {
        let top = c.t + HalfInt::from_doubled(c.a as i64 - 1);
        head.extend((0..c.a as i64).map(|k| top - HalfInt::from_int(k)));
    }
    let mut unip: Vec<HalfInt> = Vec::new();
    for b in psi.unipotent_blocks() {
        for _ in 0..b.mult {
            unip.extend(b.string());
        }
    }
    unip.sort_unstable_by(|a, b| b.cmp(a));
    let n_star = psi.group().dual_dim();
    if 2 * head.len() + unip.len() != n_star {
        return Err(Error::DimensionMismatch {
            expected: n_star,
            found: 2 * head.len() + unip.len(),
        });
    }
    let mut v = head.clone();
    v.extend(unip);
    v.extend(head.iter().rev().map(|c| -*c));
    Ok(Weight(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub nu_plus: Weight,
    pub nu_psi: InfChar,
    pub translation: TranslationDatum,
    /// The aligned subtraction `−λ′`.
    pub expected: Weight,
    /// Every rearrangement `μ` of `λ` with `ν₊ + μ ∈ W·ν_ψ`, lexicographically sorted.
    pub matches: Vec<Weight>,
    /// Number of distinct rearrangements of `λ` (the search space).
    pub rearrangements: u128,
    pub unique: bool,
}

/// Searches all distinct rearrangements `μ` of the coordinates of `λ` for
/// those moving `ν₊` into the orbit of `ν_ψ`.
pub fn uniqueness_check(psi: &ArthurParameter, psi_plus: &ArthurParameter) -> Result<UniquenessReport> {
    if !psi.is_good_parity() || !psi_plus.is_good_parity() {
        return Err(Error::BadParity("uniqueness check needs good parity".into()));
    }
    let translation = translation_weight(psi, psi_plus)?;
    let nu_plus = aligned_infchar(psi_plus)?;
    let nu_psi = psi.inf_char(Side::GL)?;
    let expected = -&translation.lambda_gl;

    let mut pool: BTreeMap<HalfInt, usize> = BTreeMap::new();
    for &c in translation.lambda_gl.iter() {
        *pool.entry(c).or_default() += 1;
    }
    let rearrangements = multinomial(pool.values().copied());
    let mut target: BTreeMap<HalfInt, usize> = BTreeMap::new();
    for &c in nu_psi.coords().iter() {
        *target.entry(c).or_default() += 1;
    }
    let mut matches = Vec::new();
    let mut current = Vec::with_capacity(nu_plus.len());
    search(&nu_plus.0, &mut pool, &mut target, &mut current, &mut matches);

    let unique = matches.len() == 1 && matches[0] == expected;
    Ok(UniquenessReport {
        nu_plus,
        nu_psi,
        translation,
        expected,
        matches,
        rearrangements,
        unique,
    })
}

/// Depth-first assignment of pool values to positions, consuming the target
/// multiset as we go. Values are tried in increasing order, so matches come
/// out sorted.
fn search(
    nu_plus: &[HalfInt],
    pool: &mut BTreeMap<HalfInt, usize>,
    target: &mut BTreeMap<HalfInt, usize>,
    current: &mut Vec<HalfInt>,
    out: &mut Vec<Weight>,
) {
    let j = current.len();
    if j == nu_plus.len() {
        out.push(Weight(current.clone()));
        return;
    }
    let values: Vec<HalfInt> = pool.iter().filter(|(_, &k)| k > 0).map(|(&v, _)| v).collect();
    for v in values {
        let sum = nu_plus[j] + v;
        match target.get_mut(&sum) {
            Some(k) if *k > 0 => *k -= 1,
            _ => continue,
        }
        *pool.get_mut(&v).unwrap() -= 1;
        current.push(v);
        search(nu_plus, pool, target, current, out);
        current.pop();
        *pool.get_mut(&v).unwrap() += 1;
        *target.get_mut(&sum).unwrap() += 1;
    }
}

fn multinomial(counts: impl Iterator<Item = usize>) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for k in counts {
        for i in 1..=k as u128 {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

/// `ν ↦ (ν, [0], −ν)` as a `GL(n*)` infinitesimal character.
pub fn transfer_infchar(nu: &Weight, group: &ClassicalGroup) -> Result<InfChar> {
    if nu.len() != group.rank() {
        return Err(Error::LengthMismatch {
            expected: group.rank(),
            found: nu.len(),
        });
    }
    let mut v = nu.0.clone();
    if group.dual_dim() % 2 == 1 {
        v.push(HalfInt::ZERO);
    }
    v.extend(nu.iter().map(|c| -*c));
    Ok(InfChar::gl(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormReport {
    pub nu_pi: Weight,
    pub norm_sq: Rational64,
    /// Support points of strictly smaller norm, sorted.
    pub forbidden: Vec<(Weight, Rational64)>,
}

impl NormReport {
    pub fn passes(&self) -> bool {
        self.forbidden.is_empty()
    }
}

/// Infinitesimal characters reachable from `ν_π` through `E` that have smaller norm.
pub fn weak_unipotence_norm_test(nu_pi: &Weight, e: &CharacterCombination) -> Result<NormReport> {
    let base = nu_pi.norm_sq();
    let forbidden = tensor_infchar_support(nu_pi, e)?
        .into_iter()
        .map(|w| {
            let n = w.norm_sq();
            (w, n)
        })
        .filter(|(_, n)| *n < base)
        .collect();
    Ok(NormReport {
        nu_pi: nu_pi.clone(),
        norm_sq: base,
        forbidden,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{Block, Eta, GroupKind};
    use crate::weyl::next_permutation;

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    fn ex1() -> ArthurParameter {
        ArthurParameter::new(
            ClassicalGroup::sp(2),
            vec![Block::discrete(h(3), 2), Block::unipotent(Eta::Plus, 1)],
        )
        .unwrap()
    }

    /// Sp(6): I_1⊗R[1] ⊕ I_{1/2}⊗R[2] ⊕ triv⊗R[1].
    fn two_block() -> ArthurParameter {
        ArthurParameter::new(
            ClassicalGroup::sp(3),
            vec![
                Block::discrete(h(2), 1),
                Block::discrete(h(1), 2),
                Block::unipotent(Eta::Plus, 1),
            ],
        )
        .unwrap()
    }

    /// Every distinct rearrangement, by brute force.
    fn oracle_matches(nu_plus: &Weight, lambda: &Weight, nu_psi: &InfChar) -> Vec<Weight> {
        let mut perm = lambda.0.clone();
        perm.sort();
        let mut out = Vec::new();
        loop {
            let mu = Weight(perm.clone());
            let moved: Vec<HalfInt> = (nu_plus + &mu).0;
            if InfChar::gl(moved) == *nu_psi {
                out.push(mu);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }

    #[test]
    fn symmetrize_examples() {
        let b2 = GroupType::b(2).unwrap();
        let e = symmetrize(b2, &Weight::from_ints(&[1, 0])).unwrap();
        let w = e.weights();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|(_, m)| *m == 2));
        let c2 = GroupType::c(2).unwrap();
        let e = symmetrize(c2, &Weight::from_ints(&[2, 1])).unwrap();
        assert_eq!(e.weights().len(), 8);
        assert!(e.weights().iter().all(|(_, m)| *m == 1));
        let e = symmetrize(c2, &Weight::zero(2)).unwrap();
        assert_eq!(e.weights(), vec![(Weight::zero(2), 8)]);
        assert_eq!(e.total_count(), 8);
    }

    #[test]
    fn support_examples() {
        let c2 = GroupType::c(2).unwrap();
        let nu = Weight::from_ints(&[2, 1]);
        let s = tensor_infchar_support(&nu, &CharacterCombination::trivial(c2)).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![nu.clone()]);
        let e = symmetrize(c2, &Weight::from_ints(&[1, 0])).unwrap();
        let s = tensor_infchar_support(&nu, &e).unwrap();
        let expected: BTreeSet<Weight> = [[3, 1], [1, 1], [2, 2], [2, 0]]
            .iter()
            .map(|w| Weight::from_ints(w))
            .collect();
        assert_eq!(s, expected);
        assert!(project(&s, c2, &Weight::from_ints(&[5, 0])).unwrap().is_empty());
        assert_eq!(project(&s, c2, &Weight::from_ints(&[0, -2])).unwrap().len(), 1);
    }

    #[test]
    fn translation_weight_examples() {
        let plus = ex1().dominate(&[HalfInt::from_int(5)], None).unwrap();
        let t = translation_weight(&ex1(), &plus).unwrap();
        assert_eq!(t.lambda_gl, Weight::from_ints(&[5, 5, 0, -5, -5]));
        assert_eq!(t.lambda_g, Weight::from_ints(&[5, 5]));

        let psi = two_block();
        let plus = psi
            .dominate(&[HalfInt::from_int(7), HalfInt::from_int(3)], Some(HalfInt::ZERO))
            .unwrap();
        let t = translation_weight(&psi, &plus).unwrap();
        assert_eq!(t.lambda_gl, Weight::from_ints(&[7, 3, 3, 0, -3, -3, -7]));

        let t = translation_weight(&psi, &psi).unwrap();
        assert!(t.lambda_gl.is_zero());
    }

    #[test]
    fn aligned_subtraction_reproduces_nu_psi() {
        let psi = two_block();
        let plus = psi
            .dominate(&[HalfInt::from_int(7), HalfInt::from_int(3)], Some(HalfInt::ZERO))
            .unwrap();
        let t = translation_weight(&psi, &plus).unwrap();
        let diff = &aligned_infchar(&plus).unwrap() - &t.lambda_gl;
        assert_eq!(diff, aligned_infchar(&psi).unwrap());
    }

    #[test]
    fn uniqueness_examples() {
        let plus = ex1().dominate(&[HalfInt::from_int(5)], None).unwrap();
        let r = uniqueness_check(&ex1(), &plus).unwrap();
        assert_eq!(r.nu_plus, Weight::from_ints(&[7, 6, 0, -6, -7]));
        assert_eq!(r.rearrangements, 30);
        assert_eq!(r.matches, vec![Weight::from_ints(&[-5, -5, 0, 5, 5])]);
        assert!(r.unique);
        let lambda = r.translation.lambda_gl.clone();
        assert_eq!(oracle_matches(&r.nu_plus, &lambda, &r.nu_psi), r.matches);

        let u = ArthurParameter::new(ClassicalGroup::sp(2), vec![Block::unipotent(Eta::Plus, 5)]).unwrap();
        let r = uniqueness_check(&u, &u).unwrap();
        assert!(r.unique);
        assert_eq!(r.rearrangements, 1);

        let psi = two_block();
        let plus = psi
            .dominate(&[HalfInt::from_int(7), HalfInt::from_int(3)], Some(HalfInt::ZERO))
            .unwrap();
        let r = uniqueness_check(&psi, &plus).unwrap();
        assert!(r.unique, "{:?}", r.matches);
        assert_eq!(
            oracle_matches(&r.nu_plus, &r.translation.lambda_gl, &r.nu_psi),
            r.matches
        );
    }

    #[test]
    fn search_agrees_with_oracle_when_offsets_are_small() {
        // Below the threshold the match set can grow; the search must still find all of it.
        let psi = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOeven, 3),
            vec![Block::discrete(HalfInt::from_int(1), 1).with_mult(2), Block::unipotent(Eta::Plus, 1), Block::unipotent(Eta::Minus, 1)],
        )
        .unwrap();
        for offsets in [[1, 0], [1, 1], [2, 1], [3, 0]] {
            let off: Vec<HalfInt> = offsets.iter().map(|&o| HalfInt::from_int(o)).collect();
            let plus = psi.dominate(&off, Some(HalfInt::ZERO)).unwrap();
            let r = uniqueness_check(&psi, &plus).unwrap();
            assert_eq!(
                oracle_matches(&r.nu_plus, &r.translation.lambda_gl, &r.nu_psi),
                r.matches,
                "offsets {offsets:?}"
            );
            assert!(r.matches.contains(&r.expected));
        }
    }

    #[test]
    fn transfer_examples() {
        let gl = transfer_infchar(&Weight::from_ints(&[2, 1]), &ClassicalGroup::sp(2)).unwrap();
        assert_eq!(gl.coords(), &Weight::from_ints(&[2, 1, 0, -1, -2]));
        let so = ClassicalGroup::quasi_split(GroupKind::SOodd, 2);
        let gl = transfer_infchar(&Weight::zero(2), &so).unwrap();
        assert_eq!(gl.coords(), &Weight::zero(4));
        let nu = Weight::from_doubled(&[5, 1]);
        let gl = transfer_infchar(&nu, &ClassicalGroup::sp(2)).unwrap();
        assert_eq!(gl.coords().norm_sq(), nu.norm_sq() * 2);
        assert!(transfer_infchar(&nu, &ClassicalGroup::sp(3)).is_err());
    }

    #[test]
    fn norm_test_examples() {
        let b1 = GroupType::b(1).unwrap();
        let r = weak_unipotence_norm_test(&Weight::from_doubled(&[1]), &CharacterCombination::trivial(b1))
            .unwrap();
        assert!(r.passes());
        let c2 = GroupType::c(2).unwrap();
        let e = symmetrize(c2, &Weight::from_ints(&[1, 0])).unwrap();
        let r = weak_unipotence_norm_test(&Weight::from_ints(&[2, 1]), &e).unwrap();
        let forbidden: Vec<Weight> = r.forbidden.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(forbidden, vec![Weight::from_ints(&[1, 1]), Weight::from_ints(&[2, 0])]);
        let r = weak_unipotence_norm_test(&Weight::zero(2), &e).unwrap();
        assert!(r.passes());
    }
}
