//! Arthur parameters of real classical groups, encoded as multisets of
//! blocks `ρ ⊗ R[a]`, together with their infinitesimal characters, the
//! dominating very-regular parameters, component groups and elliptic
//! endoscopic splittings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Weight};
use crate::weyl::GroupType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    Sp,
    SOodd,
    SOeven,
}

/// A real classical group: `Sp(2n, ℝ)` or `SO(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassicalGroup {
    kind: GroupKind,
    rank: usize,
    signature: Option<(usize, usize)>,
}

impl ClassicalGroup {
    pub fn sp(rank: usize) -> Self {
        ClassicalGroup {
            kind: GroupKind::Sp,
            rank,
            signature: None,
        }
    }

    /// `SO(p, q)`; the kind follows the parity of `p + q`.
    pub fn so(p: usize, q: usize) -> Self {
        let kind = if (p + q) % 2 == 1 {
            GroupKind::SOodd
        } else {
            GroupKind::SOeven
        };
        ClassicalGroup {
            kind,
            rank: (p + q) / 2,
            signature: Some((p, q)),
        }
    }

    pub fn new(kind: GroupKind, rank: usize, signature: Option<(usize, usize)>) -> Result<Self> {
        match (kind, signature) {
            (GroupKind::Sp, None) => Ok(Self::sp(rank)),
            (GroupKind::Sp, Some(_)) => Err(Error::InvalidGroupType(
                "Sp takes no signature".into(),
            )),
            (_, Some((p, q))) => {
                let g = Self::so(p, q);
                if g.kind != kind || g.rank != rank {
                    Err(Error::InvalidGroupType(format!(
                        "signature ({p},{q}) does not give {kind:?} of rank {rank}"
                    )))
                } else {
                    Ok(g)
                }
            }
            (_, None) => Ok(Self::quasi_split(kind, rank)),
        }
    }

    /// The quasi-split real form of the given kind and rank.
    pub fn quasi_split(kind: GroupKind, rank: usize) -> Self {
        match kind {
            GroupKind::Sp => Self::sp(rank),
            GroupKind::SOodd => Self::so(rank + 1, rank),
            GroupKind::SOeven => Self::so(rank, rank),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn signature(&self) -> Option<(usize, usize)> {
        self.signature
    }

    pub fn is_quasi_split(&self) -> bool {
        match self.signature {
            None => true,
            Some((p, q)) => p.abs_diff(q) <= 2,
        }
    }

    /// `n*`: dimension of the standard representation of the dual group.
    pub fn dual_dim(&self) -> usize {
        match self.kind {
            GroupKind::Sp => 2 * self.rank + 1,
            GroupKind::SOodd | GroupKind::SOeven => 2 * self.rank,
        }
    }

    pub fn dual_is_symplectic(&self) -> bool {
        self.kind == GroupKind::SOodd
    }

    /// The dual group is `SO(n*, ℂ)`, so component groups carry a determinant relation.
    pub fn dual_is_special_orthogonal(&self) -> bool {
        !self.dual_is_symplectic()
    }

    /// The shift `ε_G` entering the unitary character exponents: 0 for even
    /// orthogonal, ½ for odd orthogonal, 1 for symplectic groups.
    pub fn epsilon(&self) -> HalfInt {
        match self.kind {
            GroupKind::SOeven => HalfInt::ZERO,
            GroupKind::SOodd => HalfInt::HALF,
            GroupKind::Sp => HalfInt::ONE,
        }
    }

    /// The Weyl group acting on infinitesimal characters. Even orthogonal
    /// groups use the extended D convention (conjugation by `O(2n)` allowed).
    pub fn weyl_type(&self) -> Result<GroupType> {
        match self.kind {
            GroupKind::Sp => GroupType::c(self.rank),
            GroupKind::SOodd => GroupType::b(self.rank),
            GroupKind::SOeven => GroupType::d(self.rank, true),
        }
    }

    /// Same kind and rank, ignoring the real form.
    pub fn same_complex_group(&self, other: &ClassicalGroup) -> bool {
        self.kind == other.kind && self.rank == other.rank
    }
}

impl fmt::Display for ClassicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.signature) {
            (GroupKind::Sp, _) => write!(f, "Sp({},R)", 2 * self.rank),
            (_, Some((p, q))) => write!(f, "SO({p},{q})"),
            (_, None) => write!(f, "SO({})", self.dual_dim()),
        }
    }
}

/// The sign `η` of a `t = 0` block: trivial or sign character of `W_ℝ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Eta {
    #[default]
    Plus,
    Minus,
}

/// One isotypic piece `(ρ ⊗ R[a])^{⊕ mult}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub t: HalfInt,
    pub eta: Eta,
    pub a: u32,
    pub mult: u32,
}

impl Block {
    pub fn new(t: HalfInt, eta: Eta, a: u32, mult: u32) -> Result<Self> {
        if t < HalfInt::ZERO {
            return Err(Error::InvalidBlock(format!("t = {t} is negative")));
        }
        if a == 0 || mult == 0 {
            return Err(Error::InvalidBlock("a and mult must be positive".into()));
        }
        // η only distinguishes blocks with t = 0.
        let eta = if t == HalfInt::ZERO { eta } else { Eta::Plus };
        Ok(Block { t, eta, a, mult })
    }

    /// `I_t ⊗ R[a]` with multiplicity one.
    pub fn discrete(t: HalfInt, a: u32) -> Self {
        Block::new(t, Eta::Plus, a, 1).expect("valid discrete block")
    }

    /// A character of `W_ℝ` tensored with `R[a]`.
    pub fn unipotent(eta: Eta, a: u32) -> Self {
        Block::new(HalfInt::ZERO, eta, a, 1).expect("valid unipotent block")
    }

    pub fn with_mult(mut self, mult: u32) -> Self {
        assert!(mult > 0);
        self.mult = mult;
        self
    }

    pub fn is_discrete(&self) -> bool {
        self.t > HalfInt::ZERO
    }

    pub fn dim_rho(&self) -> usize {
        if self.is_discrete() {
            2
        } else {
            1
        }
    }

    /// Dimension of one copy `ρ ⊗ R[a]`.
    pub fn copy_dim(&self) -> usize {
        self.dim_rho() * self.a as usize
    }

    pub fn dim(&self) -> usize {
        self.copy_dim() * self.mult as usize
    }

    /// The identity of the block, ignoring multiplicity.
    pub fn key(&self) -> (HalfInt, Eta, u32) {
        (self.t, self.eta, self.a)
    }

    /// The string `t + (a−1)/2, …, t − (a−1)/2` of one copy.
    pub fn string(&self) -> impl Iterator<Item = HalfInt> {
        let top = self.t + HalfInt::from_doubled(self.a as i64 - 1);
        (0..self.a as i64).map(move |k| top - HalfInt::from_int(k))
    }

    /// `t + (a − 1)/2`.
    pub fn top(&self) -> HalfInt {
        self.t + HalfInt::from_doubled(self.a as i64 - 1)
    }

    /// Canonical order: `t` descending, then `a` descending, then `η`.
    fn canonical_cmp(&self, other: &Block) -> Ordering {
        other
            .t
            .cmp(&self.t)
            .then(other.a.cmp(&self.a))
            .then(self.eta.cmp(&other.eta))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_discrete() {
            write!(f, "I_{}⊗R[{}]", self.t, self.a)?;
        } else {
            let rho = match self.eta {
                Eta::Plus => "triv",
                Eta::Minus => "sgn",
            };
            write!(f, "{rho}⊗R[{}]", self.a)?;
        }
        if self.mult > 1 {
            write!(f, "^{}", self.mult)?;
        }
        Ok(())
    }
}

/// A single copy of a discrete block, in the order used for offsets and Levi data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscreteCopy {
    pub t: HalfInt,
    pub a: u32,
}

/// An Arthur parameter: blocks merged by identity and kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArthurParameter {
    group: ClassicalGroup,
    blocks: Vec<Block>,
}

impl ArthurParameter {
    /// Validates the total dimension against `n*` of the group.
    pub fn new(group: ClassicalGroup, blocks: Vec<Block>) -> Result<Self> {
        let psi = Self::unchecked(group, blocks);
        let found = psi.dimension();
        if found != group.dual_dim() {
            return Err(Error::DimensionMismatch {
                expected: group.dual_dim(),
                found,
            });
        }
        Ok(psi)
    }

    fn unchecked(group: ClassicalGroup, blocks: Vec<Block>) -> Self {
        let mut merged: Vec<Block> = Vec::new();
        for b in blocks {
            match merged.iter_mut().find(|m| m.key() == b.key()) {
                Some(m) => m.mult += b.mult,
                None => merged.push(b),
            }
        }
        merged.sort_by(Block::canonical_cmp);
        ArthurParameter {
            group,
            blocks: merged,
        }
    }

    pub fn group(&self) -> &ClassicalGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `Σ dim(ρ)·a·mult`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// The discrete (`t > 0`) copies, expanded by multiplicity, `t` descending.
    pub fn discrete_copies(&self) -> Vec<DiscreteCopy> {
        self.blocks
            .iter()
            .filter(|b| b.is_discrete())
            .flat_map(|b| std::iter::repeat_n(DiscreteCopy { t: b.t, a: b.a }, b.mult as usize))
            .collect()
    }

    /// The `t = 0` part `ψ_u`.
    pub fn unipotent_blocks(&self) -> Vec<Block> {
        self.blocks.iter().filter(|b| !b.is_discrete()).copied().collect()
    }

    pub fn unipotent_dim(&self) -> usize {
        self.unipotent_blocks().iter().map(Block::dim).sum()
    }

    /// `Σ aᵢ` over discrete copies: the total size of the unitary Levi factors.
    pub fn discrete_size(&self) -> usize {
        self.discrete_copies().iter().map(|c| c.a as usize).sum()
    }

    /// Rank `n₀` of the classical factor left over after the unitary factors.
    pub fn residual_rank(&self) -> usize {
        self.group.rank().saturating_sub(self.discrete_size())
    }

    pub fn good_parity(&self) -> ParityReport {
        let blocks: Vec<BlockParity> = self
            .blocks
            .iter()
            .map(|b| block_parity(&self.group, b))
            .collect();
        ParityReport {
            good: blocks.iter().all(|b| b.good),
            blocks,
        }
    }

    pub fn is_good_parity(&self) -> bool {
        self.blocks.iter().all(|b| block_parity(&self.group, b).good)
    }

    fn require_good_parity(&self) -> Result<()> {
        let report = self.good_parity();
        match report.blocks.iter().find(|b| !b.good) {
            None => Ok(()),
            Some(b) => Err(Error::BadParity(format!("block {} ({})", b.block, b.rule))),
        }
    }

    /// The infinitesimal character on either side of the twisted endoscopic transfer.
    pub fn inf_char(&self, side: Side) -> Result<InfChar> {
        let found = self.dimension();
        if found != self.group.dual_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.group.dual_dim(),
                found,
            });
        }
        let mut gl: Vec<HalfInt> = Vec::with_capacity(found);
        for b in &self.blocks {
            for _ in 0..b.mult {
                gl.extend(b.string());
                if b.is_discrete() {
                    gl.extend(b.string().map(|c| -c));
                }
            }
        }
        let gl = InfChar::gl(gl);
        match side {
            Side::GL => Ok(gl),
            Side::G => {
                let half: Weight = gl.coords().iter().take(self.group.rank()).copied().collect();
                InfChar::g(&self.group, half)
            }
        }
    }

    /// True when the discrete parts are spread by at least `threshold`:
    /// `t₁ − t₂ ≥ thr, …, t_v ≥ thr` on the copies.
    pub fn is_very_regular(&self, threshold: HalfInt) -> bool {
        let copies = self.discrete_copies();
        copies.windows(2).all(|w| w[0].t - w[1].t >= threshold)
            && copies.last().is_none_or(|c| c.t >= threshold)
    }

    /// The default very-regular threshold `n*`.
    pub fn default_threshold(&self) -> HalfInt {
        HalfInt::from_int(self.group.dual_dim() as i64 * THRESHOLD_DUAL_DIM_FACTOR)
    }

    /// The smallest non-increasing integer offsets pushing the discrete copies
    /// into the very-regular regime for `threshold`.
    pub fn canonical_offsets(&self, threshold: Option<HalfInt>) -> Vec<i64> {
        let thr = threshold.unwrap_or_else(|| self.default_threshold());
        let copies = self.discrete_copies();
        let mut offsets = vec![0i64; copies.len()];
        let mut floor = thr; // lower bound on the next t′
        let mut prev_offset = 0i64;
        for (i, c) in copies.iter().enumerate().rev() {
            let needed = (floor - c.t).ceil().max(prev_offset).max(0);
            offsets[i] = needed;
            prev_offset = needed;
            floor = c.t + HalfInt::from_int(needed) + thr;
        }
        offsets
    }

    /// The parameter `ψ₊`: each discrete copy moved to `t + Tᵢ`, everything else kept.
    pub fn dominate(&self, offsets: &[HalfInt], threshold: Option<HalfInt>) -> Result<ArthurParameter> {
        self.require_good_parity()?;
        let copies = self.discrete_copies();
        if offsets.len() != copies.len() {
            return Err(Error::InvalidOffsets(format!(
                "expected {} offsets (one per discrete copy), got {}",
                copies.len(),
                offsets.len()
            )));
        }
        let mut ints = Vec::with_capacity(offsets.len());
        for &o in offsets {
            let v = o.to_integer().ok_or(Error::NonIntegerOffset(o))?;
            if v < 0 {
                return Err(Error::InvalidOffsets(format!("offset {o} is negative")));
            }
            ints.push(v);
        }
        if ints.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidOffsets(format!(
                "offsets must be non-increasing: {ints:?}"
            )));
        }
        let mut blocks = self.unipotent_blocks();
        for (c, &o) in copies.iter().zip(&ints) {
            blocks.push(Block::discrete(c.t + HalfInt::from_int(o), c.a));
        }
        let plus = ArthurParameter::unchecked(self.group, blocks);
        let thr = threshold.unwrap_or_else(|| self.default_threshold());
        if !copies.is_empty() && !plus.is_very_regular(thr) {
            let identity = ints.iter().all(|&o| o == 0);
            if !identity {
                return Err(Error::ThresholdViolated(format!(
                    "shifted parameters {} are not spread by {thr}",
                    plus.discrete_copies()
                        .iter()
                        .map(|c| c.t.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )));
            }
            // T = 0 leaves ψ alone; only a genuine move must land in the very-regular regime.
        }
        Ok(plus)
    }

    pub fn component_group(&self) -> Result<ComponentGroup> {
        self.require_good_parity()?;
        Ok(ComponentGroup::for_parameter(self))
    }

    /// Splits ψ along the eigenspaces of `s`.
    pub fn endoscopic_split(&self, s: &SignVector) -> Result<EndoscopicSplit> {
        let group = self.component_group()?;
        if !group.contains(s) {
            return Err(Error::NotInGroup(s.to_string()));
        }
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for (b, &e) in group.basis.iter().zip(&s.0) {
            if e < 0 {
                minus.push(*b);
            } else {
                plus.push(*b);
            }
        }
        let dual_symplectic = self.group.dual_is_symplectic();
        let factor = |blocks: Vec<Block>| {
            let dual_dim: usize = blocks.iter().map(Block::dim).sum();
            let group = factor_group(dual_symplectic, dual_dim);
            SplitFactor {
                group,
                dual_dim,
                blocks,
            }
        };
        Ok(EndoscopicSplit {
            s: s.clone(),
            minus: factor(minus),
            plus: factor(plus),
        })
    }
}

/// The default threshold is this multiple of `n*`.
pub const THRESHOLD_DUAL_DIM_FACTOR: i64 = 1;

fn factor_group(dual_symplectic: bool, dual_dim: usize) -> ClassicalGroup {
    if dual_symplectic {
        ClassicalGroup::quasi_split(GroupKind::SOodd, dual_dim / 2)
    } else if dual_dim % 2 == 1 {
        ClassicalGroup::quasi_split(GroupKind::Sp, dual_dim / 2)
    } else {
        ClassicalGroup::quasi_split(GroupKind::SOeven, dual_dim / 2)
    }
}

impl fmt::Display for ArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(Block::to_string).collect();
        write!(f, "{}: {}", self.group, parts.join(" ⊕ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockParity {
    pub block: Block,
    pub good: bool,
    /// `t + (a−1)/2` for discrete blocks, `(a−1)/2` otherwise.
    pub value: HalfInt,
    pub rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub good: bool,
    pub blocks: Vec<BlockParity>,
}

/// Parity of a single block relative to the dual group of `group`.
pub fn block_parity(group: &ClassicalGroup, b: &Block) -> BlockParity {
    let value = b.top();
    if b.is_discrete() {
        let (good, rule) = if group.kind() == GroupKind::SOodd {
            (!value.is_integer(), "t+(a-1)/2 must be a half-odd integer")
        } else {
            (value.is_integer(), "t+(a-1)/2 must be an integer")
        };
        BlockParity {
            block: *b,
            good,
            value,
            rule,
        }
    } else {
        let (good, rule) = if group.dual_is_symplectic() {
            (b.a.is_multiple_of(2), "a must be even (symplectic dual)")
        } else {
            (b.a % 2 == 1, "a must be odd (orthogonal dual)")
        };
        BlockParity {
            block: *b,
            good,
            value,
            rule,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Weyl orbit for G, stored as its dominant representative (length n).
    G,
    /// Negation-symmetric multiset for `GL(n*)`, stored sorted descending.
    GL,
}

/// An infinitesimal character in normalized form, so that equality is
/// orbit equality (G side) or multiset equality (GL side).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InfChar {
    side: Side,
    coords: Weight,
}

impl InfChar {
    pub fn gl(mut values: Vec<HalfInt>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        InfChar {
            side: Side::GL,
            coords: Weight(values),
        }
    }

    pub fn g(group: &ClassicalGroup, w: Weight) -> Result<Self> {
        if w.len() != group.rank() {
            return Err(Error::LengthMismatch {
                expected: group.rank(),
                found: w.len(),
            });
        }
        let coords = if group.rank() == 0 {
            w
        } else {
            group.weyl_type()?.dominant_rep(&w)?
        };
        Ok(InfChar {
            side: Side::G,
            coords,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coords(&self) -> &Weight {
        &self.coords
    }

    pub fn is_negation_symmetric(&self) -> bool {
        let neg: Weight = self.coords.0.iter().rev().map(|c| -*c).collect();
        neg == self.coords
    }
}

impl fmt::Display for InfChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::G => write!(f, "{}", self.coords),
            Side::GL => {
                let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// A vector of signs, one per basis block of a component group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn identity(len: usize) -> Self {
        SignVector(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 1)
    }

    pub fn mul(&self, other: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn negate(&self) -> SignVector {
        SignVector(self.0.iter().map(|e| -e).collect())
    }

    fn from_mask(mask: u64, len: usize) -> Self {
        SignVector((0..len).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&e| if e < 0 { "-1" } else { "+1" }).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A character of a sign-vector group, given by its values on the basis
/// generators of the ambient `(ℤ/2)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i8>);

impl Character {
    pub fn trivial(len: usize) -> Self {
        Character(vec![1; len])
    }

    pub fn eval(&self, s: &SignVector) -> i8 {
        self.0
            .iter()
            .zip(&s.0)
            .filter(|(_, &e)| e < 0)
            .map(|(&c, _)| c)
            .product()
    }
}

/// The component group `A(ψ)`: sign vectors on the distinct blocks, cut
/// down by the determinant relation when the dual group is special orthogonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentGroup {
    pub basis: Vec<Block>,
    /// Basis positions entering the determinant relation (odd `dim·mult`);
    /// `None` when the dual group is symplectic.
    pub relation: Option<Vec<bool>>,
    pub elements: Vec<SignVector>,
    pub s_psi: SignVector,
}

impl ComponentGroup {
    fn for_parameter(psi: &ArthurParameter) -> Self {
        let basis: Vec<Block> = psi.blocks().to_vec();
        let relation = psi
            .group()
            .dual_is_special_orthogonal()
            .then(|| basis.iter().map(|b| b.dim() % 2 == 1).collect::<Vec<bool>>());
        let k = basis.len();
        let elements: Vec<SignVector> = (0..1u64 << k)
            .map(|m| SignVector::from_mask(m, k))
            .filter(|s| satisfies_relation(relation.as_deref(), s))
            .collect();
        let s_psi = SignVector(
            basis
                .iter()
                .map(|b| if b.a % 2 == 0 { -1 } else { 1 })
                .collect(),
        );
        let mut elements = elements;
        elements.sort();
        ComponentGroup {
            basis,
            relation,
            elements,
            s_psi,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, s: &SignVector) -> bool {
        s.len() == self.rank()
            && s.0.iter().all(|&e| e == 1 || e == -1)
            && satisfies_relation(self.relation.as_deref(), s)
    }

    /// The image of the center `{±1}` of the dual group, when `−1` lies in it.
    pub fn central_element(&self) -> Option<SignVector> {
        let z = SignVector::identity(self.rank()).negate();
        self.contains(&z).then_some(z)
    }

    /// Whether `χ` restricts trivially to the center of the dual group.
    pub fn trivial_on_center(&self, chi: &Character) -> bool {
        self.central_element().is_none_or(|z| chi.eval(&z) == 1)
    }

    /// Two ambient characters agree on this group.
    pub fn same_character(&self, a: &Character, b: &Character) -> bool {
        self.elements.iter().all(|s| a.eval(s) == b.eval(s))
    }

    /// One representative per distinct character of the group (the ambient
    /// vector with the most leading `+1`s in each class), sorted.
    pub fn characters(&self) -> Vec<Character> {
        let k = self.rank();
        let mut seen: BTreeMap<Vec<i8>, Character> = BTreeMap::new();
        for m in 0..1u64 << k {
            let chi = Character(SignVector::from_mask(m, k).0);
            let table: Vec<i8> = self.elements.iter().map(|s| chi.eval(s)).collect();
            seen.entry(table)
                .and_modify(|c| {
                    if chi > *c {
                        *c = chi.clone()
                    }
                })
                .or_insert(chi);
        }
        let mut out: Vec<Character> = seen.into_values().collect();
        out.sort();
        out
    }

    /// Canonical representative of the class of `chi`.
    pub fn normalize(&self, chi: &Character) -> Character {
        self.characters()
            .into_iter()
            .find(|c| self.same_character(c, chi))
            .expect("every ambient character restricts to some class")
    }
}

fn satisfies_relation(relation: Option<&[bool]>, s: &SignVector) -> bool {
    match relation {
        None => true,
        Some(mask) => {
            mask.iter()
                .zip(&s.0)
                .filter(|(&odd, &e)| odd && e < 0)
                .count()
                % 2
                == 0
        }
    }
}

/// The surjection `A(ψ₊) → A(ψ)` induced by `Cent(ψ₊) ⊂ Cent(ψ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMap {
    pub source: ComponentGroup,
    pub target: ComponentGroup,
    /// For each source basis block, the target basis block it lands in.
    pub assignment: Vec<usize>,
    pub kernel: Vec<SignVector>,
}

impl QuotientMap {
    pub fn new(psi_plus: &ArthurParameter, psi: &ArthurParameter) -> Result<Self> {
        let pair = DominationPair::new(psi, psi_plus)?;
        let source = psi_plus.component_group()?;
        let target = psi.component_group()?;
        let copies = psi.discrete_copies();
        let plus_copies = psi_plus.discrete_copies();
        let find_target = |key: (HalfInt, Eta, u32)| {
            target
                .basis
                .iter()
                .position(|b| b.key() == key)
                .ok_or_else(|| Error::NotDominating(format!("no block of ψ matches {key:?}")))
        };
        let mut assignment = Vec::with_capacity(source.rank());
        for b in &source.basis {
            let j = if b.is_discrete() {
                // All copies of a ψ₊ block sit at consecutive positions with the same offset.
                let k = plus_copies
                    .iter()
                    .position(|c| c.t == b.t && c.a == b.a)
                    .expect("block occurs among its own copies");
                let images: Vec<(HalfInt, u32)> = (k..k + b.mult as usize)
                    .map(|i| (copies[i].t, copies[i].a))
                    .collect();
                if images.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::NotDominating(format!(
                        "copies of {b} come from different blocks of ψ"
                    )));
                }
                find_target((images[0].0, Eta::Plus, images[0].1))?
            } else {
                find_target(b.key())?
            };
            assignment.push(j);
        }
        debug_assert_eq!(pair.offsets.len(), copies.len());
        let mut map = QuotientMap {
            source,
            target,
            assignment,
            kernel: Vec::new(),
        };
        map.kernel = map
            .source
            .elements
            .iter()
            .filter(|s| map.apply(s).is_identity())
            .cloned()
            .collect();
        Ok(map)
    }

    pub fn apply(&self, s: &SignVector) -> SignVector {
        let mut out = vec![1i8; self.target.rank()];
        for (&j, &e) in self.assignment.iter().zip(&s.0) {
            out[j] *= e;
        }
        SignVector(out)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.kernel.len() == 1 && self.is_surjective()
    }

    pub fn is_surjective(&self) -> bool {
        let mut image: Vec<SignVector> = self.source.elements.iter().map(|s| self.apply(s)).collect();
        image.sort();
        image.dedup();
        image == self.target.elements
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    /// A character of `A(ψ₊)` that is nontrivial on the kernel contributes nothing after translation.
    pub fn character_vanishes(&self, chi_plus: &Character) -> bool {
        self.kernel.iter().any(|k| chi_plus.eval(k) != 1)
    }

    /// The character of `A(ψ)` through which `chi_plus` factors, if any.
    pub fn transport(&self, chi_plus: &Character) -> Option<Character> {
        if self.character_vanishes(chi_plus) {
            return None;
        }
        self.target
            .characters()
            .into_iter()
            .find(|c| self.pullback(c).eval_all_eq(chi_plus, &self.source))
    }

    /// `χ ∘ q`, as an ambient character on the source basis.
    pub fn pullback(&self, chi: &Character) -> Character {
        Character(self.assignment.iter().map(|&j| chi.0[j]).collect())
    }
}

impl Character {
    fn eval_all_eq(&self, other: &Character, group: &ComponentGroup) -> bool {
        group.same_character(self, other)
    }
}

/// A recognized pair `(ψ, ψ₊)` with `ψ₊` obtained from `ψ` by integral,
/// non-increasing offsets on the discrete copies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationPair {
    pub offsets: Vec<i64>,
    pub copies: Vec<DiscreteCopy>,
    pub plus_copies: Vec<DiscreteCopy>,
}

impl DominationPair {
    pub fn new(psi: &ArthurParameter, psi_plus: &ArthurParameter) -> Result<Self> {
        if !psi.group().same_complex_group(psi_plus.group()) {
            return Err(Error::NotDominating(format!(
                "groups differ: {} vs {}",
                psi.group(),
                psi_plus.group()
            )));
        }
        if psi.unipotent_blocks() != psi_plus.unipotent_blocks() {
            return Err(Error::NotDominating("t = 0 parts differ".into()));
        }
        let copies = psi.discrete_copies();
        let plus_copies = psi_plus.discrete_copies();
        if copies.len() != plus_copies.len() {
            return Err(Error::NotDominating(format!(
                "{} discrete copies vs {}",
                copies.len(),
                plus_copies.len()
            )));
        }
        let mut offsets = Vec::with_capacity(copies.len());
        for (c, p) in copies.iter().zip(&plus_copies) {
            if c.a != p.a {
                return Err(Error::NotDominating(format!("R[{}] vs R[{}]", c.a, p.a)));
            }
            let diff = p.t - c.t;
            match diff.to_integer() {
                Some(o) if o >= 0 => offsets.push(o),
                _ => {
                    return Err(Error::NotDominating(format!(
                        "offset {diff} between t = {} and t' = {} is not a non-negative integer",
                        c.t, p.t
                    )))
                }
            }
        }
        if offsets.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominating(format!(
                "offsets {offsets:?} are not non-increasing"
            )));
        }
        Ok(DominationPair {
            offsets,
            copies,
            plus_copies,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.offsets.iter().all(|&o| o == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitFactor {
    /// Quasi-split group whose dual has dimension `dual_dim`.
    pub group: ClassicalGroup,
    pub dual_dim: usize,
    pub blocks: Vec<Block>,
}

impl SplitFactor {
    /// The restricted parameter `ψ_s` on this factor.
    pub fn parameter(&self) -> Result<ArthurParameter> {
        ArthurParameter::new(self.group, self.blocks.clone())
    }
}

/// The splitting of ψ along the `−1` and `+1` eigenspaces of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoscopicSplit {
    pub s: SignVector,
    pub minus: SplitFactor,
    pub plus: SplitFactor,
}

impl EndoscopicSplit {
    /// `(n′, n″)`: dual dimensions of the `−1` and `+1` parts.
    pub fn dims(&self) -> (usize, usize) {
        (self.minus.dual_dim, self.plus.dual_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    /// Sp(4,ℝ), I_{3/2}⊗R[2] ⊕ triv⊗R[1].
    pub(crate) fn ex1() -> ArthurParameter {
        ArthurParameter::new(
            ClassicalGroup::sp(2),
            vec![Block::discrete(h(3), 2), Block::unipotent(Eta::Plus, 1)],
        )
        .unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(ex1().dimension(), 5);
        let err = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 3),
            vec![Block::unipotent(Eta::Plus, 7)],
        )
        .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 6, found: 7 });
        let psi = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 2),
            vec![Block::discrete(h(1), 1), Block::discrete(h(3), 1)],
        )
        .unwrap();
        assert_eq!(psi.dimension(), 4);
    }

    #[test]
    fn parity_examples() {
        assert!(ex1().good_parity().good);
        let bad = ArthurParameter::new(
            ClassicalGroup::sp(2),
            vec![Block::discrete(h(2), 2), Block::unipotent(Eta::Plus, 1)],
        )
        .unwrap();
        let report = bad.good_parity();
        assert!(!report.good);
        assert!(!report.blocks[0].good);
        assert!(report.blocks[1].good);
        let so = ArthurParameter::new(
            ClassicalGroup::so(3, 2),
            vec![Block::unipotent(Eta::Plus, 2), Block::unipotent(Eta::Minus, 2)],
        )
        .unwrap();
        assert!(so.good_parity().good);
        assert_eq!(so.blocks().len(), 2);
    }

    #[test]
    fn inf_char_examples() {
        let gl = ex1().inf_char(Side::GL).unwrap();
        assert_eq!(gl.coords(), &Weight::from_ints(&[2, 1, 0, -1, -2]));
        assert!(gl.is_negation_symmetric());
        let g = ex1().inf_char(Side::G).unwrap();
        assert_eq!(g.coords(), &Weight::from_ints(&[2, 1]));
        let single = ArthurParameter::new(ClassicalGroup::sp(2), vec![Block::unipotent(Eta::Plus, 5)])
            .unwrap();
        assert_eq!(single.inf_char(Side::GL).unwrap(), gl);
    }

    #[test]
    fn dominate_examples() {
        let plus = ex1().dominate(&[HalfInt::from_int(5)], None).unwrap();
        let expected = ArthurParameter::new(
            ClassicalGroup::sp(2),
            vec![Block::discrete(h(13), 2), Block::unipotent(Eta::Plus, 1)],
        )
        .unwrap();
        assert_eq!(plus, expected);
        assert_eq!(plus.dominate(&[HalfInt::ZERO], None).unwrap(), plus);
        assert_eq!(
            ex1().dominate(&[h(1)], None).unwrap_err(),
            Error::NonIntegerOffset(h(1))
        );
        // 3/2 + 1 < 5 = n*.
        assert!(matches!(
            ex1().dominate(&[HalfInt::from_int(1)], None),
            Err(Error::ThresholdViolated(_))
        ));
        assert!(ex1().dominate(&[HalfInt::from_int(1)], Some(h(5))).is_ok());
        assert!(matches!(
            ex1().dominate(&[], None),
            Err(Error::InvalidOffsets(_))
        ));
    }

    #[test]
    fn canonical_offsets_are_minimal() {
        assert_eq!(ex1().canonical_offsets(None), vec![4]);
        let psi = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 2),
            vec![Block::discrete(h(1), 1).with_mult(2)],
        )
        .unwrap();
        // n* = 4: t'₂ = 1/2 + 4 ≥ 4, t'₁ ≥ 9/2 + 4.
        assert_eq!(psi.canonical_offsets(None), vec![8, 4]);
        let plus = psi
            .dominate(&[HalfInt::from_int(8), HalfInt::from_int(4)], None)
            .unwrap();
        assert!(plus.is_very_regular(HalfInt::from_int(4)));
        assert!(psi
            .dominate(&[HalfInt::from_int(7), HalfInt::from_int(4)], None)
            .is_err());
    }

    #[test]
    fn component_group_examples() {
        let a = ex1().component_group().unwrap();
        assert_eq!(a.order(), 2);
        assert_eq!(a.s_psi, SignVector(vec![-1, 1]));
        assert!(a.contains(&a.s_psi));

        let single = ArthurParameter::new(ClassicalGroup::sp(2), vec![Block::unipotent(Eta::Plus, 5)])
            .unwrap();
        assert_eq!(single.component_group().unwrap().order(), 1);

        let so = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 2),
            vec![Block::discrete(h(1), 1), Block::discrete(h(3), 1)],
        )
        .unwrap();
        let g = so.component_group().unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.relation.is_none());
    }

    #[test]
    fn even_blocks_leave_the_determinant_relation_vacuous() {
        // SO(4): two 2-dimensional blocks, every sign vector has determinant 1.
        let psi = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOeven, 2),
            vec![Block::discrete(HalfInt::from_int(3), 1), Block::discrete(HalfInt::from_int(1), 1)],
        )
        .unwrap();
        assert!(psi.is_good_parity());
        assert_eq!(psi.component_group().unwrap().order(), 4);
    }

    #[test]
    fn quotient_map_examples() {
        let plus = ex1().dominate(&[HalfInt::from_int(5)], None).unwrap();
        let q = QuotientMap::new(&plus, &ex1()).unwrap();
        assert!(q.is_isomorphism());

        let psi = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 2),
            vec![Block::discrete(h(1), 1).with_mult(2)],
        )
        .unwrap();
        let plus = psi
            .dominate(&[HalfInt::from_int(8), HalfInt::from_int(4)], None)
            .unwrap();
        let q = QuotientMap::new(&plus, &psi).unwrap();
        assert!(q.is_surjective());
        assert_eq!(q.kernel_order(), 2);
        assert_eq!(q.source.order() / q.target.order(), 2);
        // The character nontrivial on (-1,-1) vanishes.
        let chi = Character(vec![-1, 1]);
        assert!(q.character_vanishes(&chi));
        assert_eq!(q.transport(&chi), None);
        let chi = Character(vec![-1, -1]);
        assert_eq!(q.transport(&chi), Some(Character(vec![-1])));
    }

    #[test]
    fn quotient_map_rejects_mismatched_shapes() {
        let other = ArthurParameter::new(ClassicalGroup::sp(2), vec![Block::unipotent(Eta::Plus, 5)])
            .unwrap();
        assert!(QuotientMap::new(&other, &ex1()).is_err());
    }

    #[test]
    fn endoscopic_split_examples() {
        let split = ex1().endoscopic_split(&SignVector(vec![-1, 1])).unwrap();
        assert_eq!(split.dims(), (4, 1));
        assert_eq!(split.minus.group.kind(), GroupKind::SOeven);
        assert_eq!(split.plus.group, ClassicalGroup::sp(0));
        assert_eq!(split.minus.parameter().unwrap().dimension(), 4);

        let id = ex1().endoscopic_split(&SignVector(vec![1, 1])).unwrap();
        assert_eq!(id.dims(), (0, 5));
        assert!(id.minus.blocks.is_empty());

        let so = ArthurParameter::new(
            ClassicalGroup::quasi_split(GroupKind::SOodd, 2),
            vec![Block::discrete(h(1), 1), Block::discrete(h(3), 1)],
        )
        .unwrap();
        let split = so.endoscopic_split(&SignVector(vec![-1, 1])).unwrap();
        assert_eq!(split.dims(), (2, 2));
        assert_eq!(split.minus.group, ClassicalGroup::quasi_split(GroupKind::SOodd, 1));
        assert_eq!(split.plus.group, ClassicalGroup::quasi_split(GroupKind::SOodd, 1));

        // (+1,-1) violates the determinant relation on EX1.
        assert!(matches!(
            ex1().endoscopic_split(&SignVector(vec![1, -1])),
            Err(Error::NotInGroup(_))
        ));
    }
}
