//! Bookkeeping for cohomologically induced modules `A_q(χ × σ)` attached to
//! good-parity parameters: θ-stable Levi data `U(p₁,q₁) × … × U(p_v,q_v) × G₀`,
//! the exponents `t̃ᵢ`, range conditions, the filtration estimate used to
//! translate packets, and the translation of packets itself.
//!
//! Coordinates are laid out with the unitary factors first, in the order of
//! the discrete copies, followed by the `n₀` coordinates of `G₀`. The nilradical
//! `𝔲` consists of the positive roots of `G` that are not roots of `L`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Weight};
use crate::param::{
    ArthurParameter, Character, ClassicalGroup, DominationPair, GroupKind, QuotientMap, SignVector,
};

/// A θ-stable Levi subgroup `∏ U(pᵢ, qᵢ) × G₀` of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviDatum {
    pub group: ClassicalGroup,
    pub unitary: Vec<(usize, usize)>,
    pub g0: ClassicalGroup,
}

impl LeviDatum {
    /// Checks the signature constraints and builds `G₀`.
    pub fn new(group: ClassicalGroup, unitary: Vec<(usize, usize)>) -> Result<Self> {
        let size: usize = unitary.iter().map(|(p, q)| p + q).sum();
        if size > group.rank() {
            return Err(Error::SignatureInfeasible(format!(
                "unitary factors of total size {size} exceed rank {}",
                group.rank()
            )));
        }
        let n0 = group.rank() - size;
        let g0 = match group.signature() {
            None => ClassicalGroup::sp(n0),
            Some((p_total, q_total)) => {
                let sp: usize = unitary.iter().map(|(p, _)| p).sum();
                let sq: usize = unitary.iter().map(|(_, q)| q).sum();
                if 2 * sp > p_total || 2 * sq > q_total {
                    return Err(Error::SignatureInfeasible(format!(
                        "{group} has no Levi with unitary factors {unitary:?}"
                    )));
                }
                ClassicalGroup::so(p_total - 2 * sp, q_total - 2 * sq)
            }
        };
        Ok(LeviDatum { group, unitary, g0 })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.unitary.iter().map(|(p, q)| p + q).collect()
    }

    pub fn n0(&self) -> usize {
        self.g0.rank()
    }

    pub fn shape(&self) -> LeviShape {
        LeviShape {
            kind: self.group.kind(),
            sizes: self.sizes(),
            n0: self.n0(),
        }
    }
}

impl fmt::Display for LeviDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, q) in &self.unitary {
            write!(f, "U({p},{q})×")?;
        }
        write!(f, "{}", self.g0)
    }
}

/// The complexified Levi: what root computations depend on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LeviShape {
    pub kind: GroupKind,
    pub sizes: Vec<usize>,
    pub n0: usize,
}

impl LeviShape {
    pub fn rank(&self) -> usize {
        self.sizes.iter().sum::<usize>() + self.n0
    }

    pub fn unitary_dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Index of the unitary factor holding each unitary coordinate.
    fn block_of(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i, a))
            .collect()
    }

    pub fn positive_roots(&self) -> Vec<Weight> {
        positive_roots(self.kind, self.rank())
    }

    fn is_levi_root(&self, alpha: &Weight) -> bool {
        let u = self.unitary_dim();
        let blocks = self.block_of();
        let support: Vec<usize> = (0..alpha.len()).filter(|&k| alpha[k] != HalfInt::ZERO).collect();
        if support.iter().all(|&k| k >= u) {
            return true;
        }
        // eₖ − eₗ inside one unitary factor.
        support.len() == 2
            && support.iter().all(|&k| k < u)
            && blocks[support[0]] == blocks[support[1]]
            && alpha[support[0]] == -alpha[support[1]]
    }

    /// `Δ(𝔲)`.
    pub fn nilradical_roots(&self) -> Vec<Weight> {
        self.positive_roots()
            .into_iter()
            .filter(|a| !self.is_levi_root(a))
            .collect()
    }

    /// `δ(𝔲)`: half the sum of `Δ(𝔲)`.
    pub fn delta_u(&self) -> Weight {
        half_sum(&self.nilradical_roots(), self.rank())
    }

    /// Half-sum of positive roots of the unitary factors, zero on `G₀`.
    pub fn delta_l1(&self) -> Weight {
        let mut v = Vec::with_capacity(self.rank());
        for &a in &self.sizes {
            let top = HalfInt::from_doubled(a as i64 - 1);
            v.extend((0..a as i64).map(|k| top - HalfInt::from_int(k)));
        }
        v.resize(self.rank(), HalfInt::ZERO);
        Weight(v)
    }

    /// Dominant for `L`: non-increasing inside each unitary factor and
    /// dominant for `G₀`.
    pub fn is_l_dominant(&self, mu: &[i32]) -> bool {
        let mut start = 0;
        for &a in &self.sizes {
            if mu[start..start + a].windows(2).any(|w| w[0] < w[1]) {
                return false;
            }
            start += a;
        }
        let g0 = &mu[start..];
        if g0.windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        match (self.kind, g0.len()) {
            (_, 0) => true,
            (GroupKind::SOeven, 1) => true,
            (GroupKind::SOeven, k) => g0[k - 2] >= g0[k - 1].abs(),
            (_, k) => g0[k - 1] >= 0,
        }
    }

    /// Height with respect to the simple roots of `G`.
    pub fn height(&self, mu: &[i32]) -> i64 {
        height(self.kind, mu)
    }
}

fn half_sum(roots: &[Weight], len: usize) -> Weight {
    let mut doubled = vec![0i64; len];
    for r in roots {
        for (d, c) in doubled.iter_mut().zip(r.iter()) {
            *d += c.doubled();
        }
    }
    // Each coordinate of the sum is an integer; halve it.
    Weight(doubled.into_iter().map(|d| HalfInt::from_doubled(d / 2)).collect())
}

/// Positive roots of the root system of `G` (type C, B or D) in rank `n`.
pub fn positive_roots(kind: GroupKind, n: usize) -> Vec<Weight> {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            roots.push(Weight::from_ints(&v));
            v[j] = 1;
            roots.push(Weight::from_ints(&v));
        }
        match kind {
            GroupKind::Sp => {
                let mut v = vec![0; n];
                v[i] = 2;
                roots.push(Weight::from_ints(&v));
            }
            GroupKind::SOodd => {
                let mut v = vec![0; n];
                v[i] = 1;
                roots.push(Weight::from_ints(&v));
            }
            GroupKind::SOeven => {}
        }
    }
    roots
}

/// Sum of the simple-root coefficients of `μ`, from partial sums `Pₖ = μ₁+…+μₖ`.
fn height(kind: GroupKind, mu: &[i32]) -> i64 {
    let n = mu.len();
    if n == 0 {
        return 0;
    }
    let partial: Vec<i64> = mu
        .iter()
        .scan(0i64, |s, &x| {
            *s += x as i64;
            Some(*s)
        })
        .collect();
    match kind {
        GroupKind::SOodd => partial.iter().sum(),
        // The coefficient of 2eₙ is Pₙ/2; roots have even Pₙ.
        GroupKind::Sp => partial[..n - 1].iter().sum::<i64>() + partial[n - 1] / 2,
        GroupKind::SOeven if n == 1 => 0,
        GroupKind::SOeven => partial[..n - 2].iter().sum::<i64>() + partial[n - 2],
    }
}

/// The exponents `t̃ᵢ = tᵢ + (aᵢ−1)/2 + ε_G + Σ_{j>i} aⱼ + n₀` over the
/// discrete copies, as half-integers (no parity check).
pub fn lambda_tilde_raw(psi: &ArthurParameter) -> Vec<HalfInt> {
    let copies = psi.discrete_copies();
    let n0 = HalfInt::from_int(psi.residual_rank() as i64);
    let eps = psi.group().epsilon();
    let mut later = 0i64;
    let mut out = vec![HalfInt::ZERO; copies.len()];
    for (i, c) in copies.iter().enumerate().rev() {
        out[i] = c.t + HalfInt::from_doubled(c.a as i64 - 1) + eps + HalfInt::from_int(later) + n0;
        later += c.a as i64;
    }
    out
}

/// `t̃ᵢ` as integers; a half-odd value signals bad parity.
pub fn lambda_tilde(psi: &ArthurParameter) -> Result<Vec<i64>> {
    lambda_tilde_raw(psi)
        .into_iter()
        .map(|x| {
            x.to_integer()
                .ok_or_else(|| Error::BadParity(format!("t̃ = {x} is not an integer")))
        })
        .collect()
}

/// Real forms of `L` compatible with the signature of `G`, in descending
/// lexicographic order of `(p₁, p₂, …)`.
pub fn enumerate_levis(psi: &ArthurParameter) -> Result<Vec<LeviDatum>> {
    if !psi.is_good_parity() {
        return Err(Error::BadParity(psi.to_string()));
    }
    let sizes: Vec<usize> = psi.discrete_copies().iter().map(|c| c.a as usize).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(sizes.len());
    levi_rec(psi.group(), &sizes, &mut current, &mut out);
    if out.is_empty() {
        return Err(Error::SignatureInfeasible(format!(
            "{} has no θ-stable Levi of shape {sizes:?}",
            psi.group()
        )));
    }
    Ok(out)
}

fn levi_rec(
    group: &ClassicalGroup,
    sizes: &[usize],
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<LeviDatum>,
) {
    if current.len() == sizes.len() {
        if let Ok(d) = LeviDatum::new(*group, current.clone()) {
            out.push(d);
        }
        return;
    }
    let a = sizes[current.len()];
    for p in (0..=a).rev() {
        current.push((p, a - p));
        levi_rec(group, sizes, current, out);
        current.pop();
    }
}

/// The inducing representation on `G₀`, carried only through its
/// infinitesimal character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sigma {
    pub label: String,
    pub nu: Weight,
    /// Input contract, echoed in reports.
    pub weakly_unipotent: bool,
}

impl Sigma {
    /// `σ` attached to `ψ_u` on `G₀`: the top `n₀` entries of its strings.
    pub fn from_unipotent_part(psi: &ArthurParameter) -> Self {
        let n0 = psi.residual_rank();
        let mut values: Vec<HalfInt> = psi
            .unipotent_blocks()
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.string().collect::<Vec<_>>(), b.mult as usize))
            .flatten()
            .collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.truncate(n0);
        let blocks: Vec<String> = psi.unipotent_blocks().iter().map(|b| b.to_string()).collect();
        Sigma {
            label: format!("σ[{}]", blocks.join("⊕")),
            nu: Weight(values),
            weakly_unipotent: true,
        }
    }
}

/// `A_q(χ × σ)` recorded by its Levi, the exponents `t̃ᵢ` and `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AqDatum {
    pub levi: LeviDatum,
    pub t_tilde: Vec<i64>,
    pub sigma: Sigma,
}

impl AqDatum {
    pub fn new(psi: &ArthurParameter, levi: LeviDatum) -> Result<Self> {
        let sizes: Vec<usize> = psi.discrete_copies().iter().map(|c| c.a as usize).collect();
        if levi.sizes() != sizes || !levi.group.same_complex_group(psi.group()) {
            return Err(Error::IndexMismatch(format!("{levi} does not fit {psi}")));
        }
        Ok(AqDatum {
            t_tilde: lambda_tilde(psi)?,
            sigma: Sigma::from_unipotent_part(psi),
            levi,
        })
    }

    pub fn from_parts(levi: LeviDatum, t_tilde: Vec<i64>, sigma: Sigma) -> Result<Self> {
        if t_tilde.len() != levi.unitary.len() {
            return Err(Error::LengthMismatch {
                expected: levi.unitary.len(),
                found: t_tilde.len(),
            });
        }
        if sigma.nu.len() != levi.n0() {
            return Err(Error::LengthMismatch {
                expected: levi.n0(),
                found: sigma.nu.len(),
            });
        }
        Ok(AqDatum {
            levi,
            t_tilde,
            sigma,
        })
    }

    /// `λ_L`: `t̃ᵢ` on every coordinate of the `i`-th unitary factor, 0 on `G₀`.
    pub fn lambda_l(&self) -> Weight {
        let mut v = Vec::new();
        for (&t, a) in self.t_tilde.iter().zip(self.levi.sizes()) {
            v.extend(std::iter::repeat_n(HalfInt::from_int(t), a));
        }
        v.resize(self.levi.group.rank(), HalfInt::ZERO);
        Weight(v)
    }

    /// `λ_L − δ(𝔲)`: the character shifted to the fair-range normalization.
    pub fn fair_vector(&self) -> Weight {
        &self.lambda_l() - &self.levi.shape().delta_u()
    }

    /// The infinitesimal character `(λ_L − δ(𝔲) + δ_{L₁}, ν_σ)`.
    pub fn infinitesimal_character(&self) -> Weight {
        let shape = self.levi.shape();
        let mut v = &self.fair_vector() + &shape.delta_l1();
        let u = shape.unitary_dim();
        for (k, c) in self.sigma.nu.iter().enumerate() {
            v[u + k] = *c;
        }
        v
    }

    pub fn label(&self) -> String {
        let t: Vec<String> = self.t_tilde.iter().map(|t| t.to_string()).collect();
        format!("{}[{}]", self.levi, t.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeClass {
    Good,
    WeaklyFair,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeReport {
    pub class: RangeClass,
    /// `min ⟨infinitesimal character, α⟩` over `Δ(𝔲)`.
    pub good_margin: Option<Rational64>,
    /// `min ⟨λ_L − δ(𝔲), α⟩` over `Δ(𝔲)`.
    pub fair_margin: Option<Rational64>,
}

pub fn range_check(d: &AqDatum) -> RangeReport {
    let roots = d.levi.shape().nilradical_roots();
    let gamma = d.infinitesimal_character();
    let fair = d.fair_vector();
    let min_pairing = |v: &Weight| {
        roots
            .iter()
            .map(|a| v.pairing(a).expect("roots have full length"))
            .min()
    };
    let good_margin = min_pairing(&gamma);
    let fair_margin = min_pairing(&fair);
    let zero = Rational64::from_integer(0);
    let class = if good_margin.is_none_or(|m| m > zero) {
        RangeClass::Good
    } else if fair_margin.is_none_or(|m| m >= zero) {
        RangeClass::WeaklyFair
    } else {
        RangeClass::Neither
    };
    RangeReport {
        class,
        good_margin,
        fair_margin,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationViolation {
    pub mu: Vec<i32>,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub levi: LeviShape,
    /// `λ` on the unitary coordinates.
    pub lambda: Weight,
    pub delta_l1: Weight,
    pub height_bound: i64,
    /// L-dominant `μ ∈ ℕ·Δ(𝔲)` of height at most the bound, zero included.
    pub enumerated: usize,
    /// Those with `μ₁ ≠ 0`.
    pub checked: usize,
    /// Smallest `|μ₁|² + 2⟨λ + δ_{L₁}, μ₁⟩` among the checked `μ`.
    pub min_gain: Option<Rational64>,
    pub violations: Vec<FiltrationViolation>,
}

impl FiltrationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

type ConeCache = Mutex<HashMap<(LeviShape, i64), Arc<Vec<Vec<i32>>>>>;

fn cone_cache() -> &'static ConeCache {
    static CACHE: OnceLock<ConeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// L-dominant elements of `ℕ·Δ(𝔲)` with height at most `bound`, sorted.
pub fn nilradical_cone(shape: &LeviShape, bound: i64) -> Arc<Vec<Vec<i32>>> {
    let key = (shape.clone(), bound);
    if let Some(hit) = cone_cache().lock().expect("cache lock").get(&key) {
        return hit.clone();
    }
    let roots: Vec<(Vec<i32>, i64)> = shape
        .nilradical_roots()
        .iter()
        .map(|r| {
            let v: Vec<i32> = r.iter().map(|c| c.to_integer().expect("integral root") as i32).collect();
            let h = shape.height(&v);
            (v, h)
        })
        .collect();
    let zero = vec![0i32; shape.rank()];
    let mut seen: HashSet<Vec<i32>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([(zero, 0i64)]);
    while let Some((mu, h)) = queue.pop_front() {
        for (r, hr) in &roots {
            if h + hr > bound {
                continue;
            }
            let next: Vec<i32> = mu.iter().zip(r).map(|(a, b)| a + b).collect();
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back((next, h + hr));
            }
        }
    }
    let mut out: Vec<Vec<i32>> = seen.into_iter().filter(|m| shape.is_l_dominant(m)).collect();
    out.sort();
    let out = Arc::new(out);
    cone_cache()
        .lock()
        .expect("cache lock")
        .insert(key, out.clone());
    out
}

/// Checks, for every L-dominant `μ = μ₁ × μ₀` in `ℕ·Δ(𝔲)` up to the height
/// bound, that `|λ + μ₁ + δ_{L₁}|² > |λ + δ_{L₁}|²` with `⟨λ, μ₁⟩ ≥ 0` and
/// `⟨δ_{L₁}, μ₁⟩ ≥ 0`, and that `μ₁ = 0` forces `μ = 0`. Here `λ` is the
/// character of the datum for `ψ`.
pub fn filtration_vanishing(
    d_plus: &AqDatum,
    psi: &ArthurParameter,
    height_bound: i64,
) -> Result<FiltrationReport> {
    if range_check(d_plus).class != RangeClass::Good {
        return Err(Error::RangeViolation(format!("{} is not in the good range", d_plus.label())));
    }
    let d = AqDatum::new(psi, d_plus.levi.clone())?;
    let shape = d.levi.shape();
    let u = shape.unitary_dim();
    let lambda: Weight = d.lambda_l().iter().take(u).copied().collect();
    let delta: Weight = shape.delta_l1().iter().take(u).copied().collect();
    // Doubled coordinates keep everything in i64.
    let l2: Vec<i64> = lambda.iter().map(|c| c.doubled()).collect();
    let d2: Vec<i64> = delta.iter().map(|c| c.doubled()).collect();
    let base: Weight = &lambda + &delta;

    let cone = nilradical_cone(&shape, height_bound);
    let mut checked = 0;
    let mut min_gain: Option<i64> = None; // doubled
    let mut violations = Vec::new();
    for mu in cone.iter() {
        let mu1 = &mu[..u];
        if mu1.iter().all(|&x| x == 0) {
            if mu.iter().any(|&x| x != 0) {
                violations.push(FiltrationViolation {
                    mu: mu.clone(),
                    reason: "mu_1 = 0 but mu != 0",
                });
            }
            continue;
        }
        checked += 1;
        let p_lambda: i64 = mu1.iter().zip(&l2).map(|(&m, &l)| m as i64 * l).sum();
        let p_delta: i64 = mu1.iter().zip(&d2).map(|(&m, &d)| m as i64 * d).sum();
        let sq: i64 = mu1.iter().map(|&m| (m as i64) * (m as i64)).sum();
        // 2·(|μ₁|² + 2⟨λ+δ, μ₁⟩), using doubled λ and δ.
        let gain2 = 2 * sq + 2 * (p_lambda + p_delta);
        let shifted: Weight = base
            .iter()
            .zip(mu1)
            .map(|(c, &m)| *c + HalfInt::from_int(m as i64))
            .collect();
        let direct = shifted.norm_sq() - base.norm_sq();
        debug_assert_eq!(direct, Rational64::new(gain2, 2));
        if p_lambda < 0 {
            violations.push(FiltrationViolation {
                mu: mu.clone(),
                reason: "<lambda, mu_1> < 0",
            });
        }
        if p_delta < 0 {
            violations.push(FiltrationViolation {
                mu: mu.clone(),
                reason: "<delta_L1, mu_1> < 0",
            });
        }
        if direct <= Rational64::from_integer(0) {
            violations.push(FiltrationViolation {
                mu: mu.clone(),
                reason: "norm does not increase",
            });
        }
        min_gain = Some(min_gain.map_or(gain2, |g| g.min(gain2)));
    }
    Ok(FiltrationReport {
        levi: shape,
        lambda,
        delta_l1: delta,
        height_bound,
        enumerated: cone.len(),
        checked,
        min_gain: min_gain.map(|g| Rational64::new(g, 2)),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketEntry {
    pub datum: AqDatum,
    pub character: Character,
}

/// Index data of `Σ_ε π(ψ, ε) ⊗ ε`: one entry per `A_q` datum with its character of `A(ψ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketData {
    pub psi: ArthurParameter,
    pub entries: Vec<PacketEntry>,
}

impl PacketData {
    /// Every Levi datum paired with every character of `A(ψ)`. This is only a
    /// test vehicle: the true coefficients are external input.
    pub fn grid(psi: &ArthurParameter) -> Result<Self> {
        let chars = psi.component_group()?.characters();
        let mut entries = Vec::new();
        for levi in enumerate_levis(psi)? {
            let datum = AqDatum::new(psi, levi)?;
            for chi in &chars {
                entries.push(PacketEntry {
                    datum: datum.clone(),
                    character: chi.clone(),
                });
            }
        }
        Ok(PacketData {
            psi: psi.clone(),
            entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslatedPacket {
    pub packet: PacketData,
    /// Entries of the source packet whose character is nontrivial on the kernel of `A(ψ₊) → A(ψ)`.
    pub vanished: Vec<PacketEntry>,
}

/// Moves every entry from `ψ₊` to `ψ` (`t̃ᵢ ↦ t̃ᵢ − Tᵢ`) and pushes its
/// character through `A(ψ₊) → A(ψ)`.
pub fn translate_packet(packet_plus: &PacketData, psi: &ArthurParameter) -> Result<TranslatedPacket> {
    let psi_plus = &packet_plus.psi;
    let pair = DominationPair::new(psi, psi_plus)?;
    let q = QuotientMap::new(psi_plus, psi)?;
    let expected = lambda_tilde(psi_plus)?;
    let mut entries = Vec::new();
    let mut vanished = Vec::new();
    for e in &packet_plus.entries {
        check_entry(e, psi_plus, &expected, q.source.rank())?;
        if range_check(&e.datum).class != RangeClass::Good {
            return Err(Error::RangeViolation(format!(
                "{} is not in the good range",
                e.datum.label()
            )));
        }
        match q.transport(&e.character) {
            None => vanished.push(e.clone()),
            Some(chi) => {
                let t_tilde = e
                    .datum
                    .t_tilde
                    .iter()
                    .zip(&pair.offsets)
                    .map(|(t, o)| t - o)
                    .collect();
                let datum = AqDatum::from_parts(e.datum.levi.clone(), t_tilde, e.datum.sigma.clone())?;
                entries.push(PacketEntry {
                    datum,
                    character: chi,
                });
            }
        }
    }
    Ok(TranslatedPacket {
        packet: PacketData {
            psi: psi.clone(),
            entries,
        },
        vanished,
    })
}

/// The inverse direction: `t̃ᵢ ↦ t̃ᵢ + Tᵢ`, characters pulled back along `A(ψ₊) → A(ψ)`.
pub fn lift_packet(packet: &PacketData, psi_plus: &ArthurParameter) -> Result<PacketData> {
    let psi = &packet.psi;
    let pair = DominationPair::new(psi, psi_plus)?;
    let q = QuotientMap::new(psi_plus, psi)?;
    let expected = lambda_tilde(psi)?;
    let mut entries = Vec::with_capacity(packet.entries.len());
    for e in &packet.entries {
        check_entry(e, psi, &expected, q.target.rank())?;
        let t_tilde = e
            .datum
            .t_tilde
            .iter()
            .zip(&pair.offsets)
            .map(|(t, o)| t + o)
            .collect();
        entries.push(PacketEntry {
            datum: AqDatum::from_parts(e.datum.levi.clone(), t_tilde, e.datum.sigma.clone())?,
            character: q.source.normalize(&q.pullback(&e.character)),
        });
    }
    Ok(PacketData {
        psi: psi_plus.clone(),
        entries,
    })
}

fn check_entry(e: &PacketEntry, psi: &ArthurParameter, t_tilde: &[i64], rank: usize) -> Result<()> {
    if e.datum.t_tilde != t_tilde {
        return Err(Error::IndexMismatch(format!(
            "{} carries t̃ = {:?}, expected {:?}",
            e.datum.levi, e.datum.t_tilde, t_tilde
        )));
    }
    let sizes: Vec<usize> = psi.discrete_copies().iter().map(|c| c.a as usize).collect();
    if e.datum.levi.sizes() != sizes || !e.datum.levi.group.same_complex_group(psi.group()) {
        return Err(Error::IndexMismatch(format!("{} does not fit {psi}", e.datum.levi)));
    }
    if e.character.0.len() != rank || e.character.0.iter().any(|&c| c != 1 && c != -1) {
        return Err(Error::IndexMismatch(format!(
            "character {:?} is not a sign vector of length {rank}",
            e.character.0
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluatedTerm {
    pub label: String,
    pub coefficient: i8,
}

/// `Σ ε(s) · label` over the entries of the packet.
pub fn evaluate_at(packet: &PacketData, s: &SignVector) -> Result<Vec<EvaluatedTerm>> {
    let group = packet.psi.component_group()?;
    if !group.contains(s) {
        return Err(Error::NotInGroup(s.to_string()));
    }
    Ok(packet
        .entries
        .iter()
        .map(|e| EvaluatedTerm {
            label: e.datum.label(),
            coefficient: e.character.eval(s),
        })
        .collect())
}
