//! The twisted torus `T ⋊ θ` of `GL(n)`, its norm map, and the trace of
//! `t ⋊ θ` on the extremal weight lines of a θ-stable representation.
//!
//! Conventions: `θ(t)ᵢ = t_{n+1−i}⁻¹` on the torus and `(θμ)ᵢ = −μ_{n+1−i}`
//! on weights. Permutations act by `(σ·x)[σ(i)] = x[i]`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Weight};
use crate::weyl::{next_permutation, permutations, GroupType, WeylElement};

/// Entries closer than this are treated as colliding by the regularity test.
const REGULARITY_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedTorusElement {
    entries: Vec<Complex64>,
}

impl TwistedTorusElement {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| z.norm() == 0.0) {
            return Err(Error::ZeroEntry);
        }
        Ok(TwistedTorusElement { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `θ(t)ᵢ = t_{n+1−i}⁻¹`.
    pub fn theta(&self) -> Self {
        TwistedTorusElement {
            entries: self.entries.iter().rev().map(|z| z.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &TwistedTorusElement) -> Self {
        TwistedTorusElement {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect(),
        }
    }

    /// `(σ·t)[σ(i)] = t[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut entries = self.entries.clone();
        for (i, &p) in perm.iter().enumerate() {
            entries[p] = self.entries[i];
        }
        TwistedTorusElement { entries }
    }

    /// The norm coordinates `tᵢ/t_{n+1−i}` are pairwise distinct and avoid `±1`.
    pub fn is_regular(&self) -> bool {
        let norm = norm_map(self);
        let m = norm.len();
        for i in 0..m {
            if (norm[i] - 1.0).norm() < REGULARITY_GAP || (norm[i] + 1.0).norm() < REGULARITY_GAP {
                return false;
            }
            for j in i + 1..m {
                if (norm[i] - norm[j]).norm() < REGULARITY_GAP
                    || (norm[i] * norm[j] - 1.0).norm() < REGULARITY_GAP
                {
                    return false;
                }
            }
        }
        true
    }

    /// Evaluates the character `e^μ`; `μ` must be integral.
    pub fn eval(&self, mu: &Weight) -> Complex64 {
        monomial(&self.entries, mu)
    }
}

fn monomial(z: &[Complex64], mu: &Weight) -> Complex64 {
    z.iter()
        .zip(mu.iter())
        .map(|(z, e)| z.powi(e.to_integer().expect("integral weight") as i32))
        .product()
}

/// `(θμ)ᵢ = −μ_{n+1−i}`.
pub fn theta_weight(mu: &Weight) -> Weight {
    mu.iter().rev().map(|c| -*c).collect()
}

pub fn is_theta_invariant(mu: &Weight) -> bool {
    theta_weight(mu) == *mu
}

/// `N(t)ᵢ = tᵢ / t_{n+1−i}` for `i ≤ ⌊n/2⌋`.
pub fn norm_map(t: &TwistedTorusElement) -> Vec<Complex64> {
    let n = t.len();
    (0..n / 2).map(|i| t.entries[i] / t.entries[n - 1 - i]).collect()
}

/// `σ ↦ w₀σw₀` on permutations of `0..n`.
pub fn theta_perm(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut out = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        out[n - 1 - i] = n - 1 - p;
    }
    out
}

/// The fixed points of `θ` on `S_n` and their identification with `W(B_m)`, `m = ⌊n/2⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaFixedWeyl {
    pub n: usize,
    pub elements: Vec<Vec<usize>>,
    /// Image of each element in signed permutations of `m` letters.
    pub signed: Vec<WeylElement>,
}

impl ThetaFixedWeyl {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.n / 2
    }
}

pub fn theta_fixed_weyl(n: usize) -> ThetaFixedWeyl {
    let elements: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| theta_perm(p) == *p)
        .collect();
    let signed = elements.iter().map(|p| to_signed(p)).collect();
    ThetaFixedWeyl { n, elements, signed }
}

/// The pair `{i, n−1−i}` goes to the pair `{j, n−1−j}`; the sign records whether
/// the smaller index goes to the smaller one.
fn to_signed(perm: &[usize]) -> WeylElement {
    let n = perm.len();
    let m = n / 2;
    let mut target = vec![0; m];
    let mut signs = vec![1i8; m];
    for i in 0..m {
        let p = perm[i];
        if p < m {
            target[i] = p;
        } else {
            target[i] = n - 1 - p;
            signs[i] = -1;
        }
    }
    WeylElement::new(target, signs).expect("θ-fixed permutations permute the pairs")
}

/// A θ-invariant dominant weight `μ` of `GL(n)` and the θ-fixed extremal lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalRep {
    mu: Weight,
    /// The weights `wμ` of the θ-stable cosets in `W/W_μ`, sorted.
    extremal: Vec<Weight>,
}

impl ExtremalRep {
    pub fn new(mu: Weight) -> Result<Self> {
        let dominant = mu.0.windows(2).all(|w| w[0] >= w[1]);
        if !dominant || !is_theta_invariant(&mu) || !mu.is_integral() {
            return Err(Error::NotThetaInvariant(mu.to_string()));
        }
        let mut arrangement = mu.0.clone();
        arrangement.sort();
        let mut extremal = Vec::new();
        loop {
            let w = Weight(arrangement.clone());
            if is_theta_invariant(&w) {
                extremal.push(w);
            }
            if !next_permutation(&mut arrangement) {
                break;
            }
        }
        Ok(ExtremalRep { mu, extremal })
    }

    pub fn mu(&self) -> &Weight {
        &self.mu
    }

    pub fn extremal_weights(&self) -> &[Weight] {
        &self.extremal
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }
}

/// `Σ (wμ)(t)` over the θ-fixed extremal lines; θ fixes each of them and
/// the others are permuted without fixed points.
pub fn twisted_trace_extremal(rep: &ExtremalRep, t: &TwistedTorusElement) -> Result<Complex64> {
    if t.len() != rep.n() {
        return Err(Error::LengthMismatch {
            expected: rep.n(),
            found: t.len(),
        });
    }
    Ok(rep.extremal.iter().map(|w| t.eval(w)).sum())
}

/// The right-hand side: the `W(B_m)`-orbit of `ν = (μ₁,…,μ_m)` grouped into
/// orbits of `W(B_k) × W(B_{m−k})`, each group summed at `N(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoscopicSide {
    pub nu: Weight,
    pub endo_rank: usize,
    /// One entry per `W_G`-orbit: its weights, sorted.
    pub orbits: Vec<Vec<Weight>>,
}

impl EndoscopicSide {
    pub fn new(mu: &Weight, endo_rank: usize) -> Result<Self> {
        let m = mu.len() / 2;
        if endo_rank > m {
            return Err(Error::InvalidGroupType(format!(
                "endoscopic rank {endo_rank} exceeds {m}"
            )));
        }
        let nu: Weight = mu.iter().take(m).copied().collect();
        if m == 0 {
            return Ok(EndoscopicSide {
                nu,
                endo_rank,
                orbits: vec![vec![Weight::default()]],
            });
        }
        let full = GroupType::b(m)?.orbit(&nu)?;
        let mut remaining: BTreeSet<Weight> = full.weights.into_iter().collect();
        let mut orbits = Vec::new();
        while let Some(first) = remaining.pop_first() {
            let orbit = split_orbit(&first, endo_rank)?;
            for w in &orbit {
                remaining.remove(w);
            }
            orbits.push(orbit);
        }
        Ok(EndoscopicSide {
            nu,
            endo_rank,
            orbits,
        })
    }

    pub fn eval(&self, norm: &[Complex64]) -> Complex64 {
        self.orbits
            .iter()
            .flatten()
            .map(|w| monomial(norm, w))
            .sum()
    }

    pub fn weight_count(&self) -> usize {
        self.orbits.iter().map(Vec::len).sum()
    }
}

/// Orbit of `w` under `W(B_k) × W(B_{m−k})` acting on the two coordinate blocks.
fn split_orbit(w: &Weight, k: usize) -> Result<Vec<Weight>> {
    let m = w.len();
    let part = |range: std::ops::Range<usize>| -> Result<Vec<Weight>> {
        let v: Weight = w.0[range].iter().copied().collect();
        if v.is_empty() {
            Ok(vec![v])
        } else {
            Ok(GroupType::b(v.len())?.orbit(&v)?.weights)
        }
    };
    let left = part(0..k)?;
    let right = part(k..m)?;
    let mut out: Vec<Weight> = left
        .iter()
        .flat_map(|l| right.iter().map(move |r| l.concat(r)))
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub mu: Weight,
    pub endo_rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub extremal_lines: usize,
    pub endoscopic_weights: usize,
    pub max_residual: f64,
}

/// `trials` regular unit-circle elements drawn from a seeded stream.
pub fn random_regular_elements(n: usize, trials: usize, seed: u64) -> Vec<TwistedTorusElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let entries: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let t = TwistedTorusElement { entries };
        if t.is_regular() {
            out.push(t);
        }
    }
    out
}

/// Largest relative gap between the twisted trace and its endoscopic counterpart.
pub fn verify_transfer_identity(
    mu: &Weight,
    endo_rank: usize,
    trials: usize,
    seed: u64,
) -> Result<TransferReport> {
    let rep = ExtremalRep::new(mu.clone())?;
    let side = EndoscopicSide::new(mu, endo_rank)?;
    let samples = random_regular_elements(mu.len(), trials, seed);
    let residuals: Vec<f64> = samples
        .par_iter()
        .map(|t| {
            let lhs = twisted_trace_extremal(&rep, t).expect("lengths agree");
            let rhs = side.eval(&norm_map(t));
            (lhs - rhs).norm() / lhs.norm().max(1.0)
        })
        .collect();
    // Reduce in input order so the result does not depend on scheduling.
    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    Ok(TransferReport {
        mu: mu.clone(),
        endo_rank,
        trials,
        seed,
        extremal_lines: rep.extremal.len(),
        endoscopic_weights: side.weight_count(),
        max_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KostantReport {
    pub n: usize,
    pub mu: Weight,
    pub stable_cosets: usize,
    /// Stable cosets whose minimal representative is moved by θ.
    pub failures: Vec<Vec<usize>>,
}

impl KostantReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every θ-stable coset of `S_n/W_μ`, checks that its Kostant
/// representative is fixed by `θ`.
pub fn kostant_theta_invariance(n: usize, mu: &Weight) -> Result<KostantReport> {
    if mu.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: mu.len(),
        });
    }
    ExtremalRep::new(mu.clone())?;
    if n <= 1 {
        return Ok(KostantReport {
            n,
            mu: mu.clone(),
            stable_cosets: n,
            failures: Vec::new(),
        });
    }
    let levi = (0..n - 1).filter(|&i| mu[i] == mu[i + 1]).collect();
    let reps = GroupType::a(n - 1)?.kostant_reps(&levi)?;
    let mut stable = 0;
    let mut failures = Vec::new();
    for w in reps {
        let image = w.apply(mu)?;
        if !is_theta_invariant(&image) {
            continue;
        }
        stable += 1;
        if theta_perm(w.perm()) != w.perm() {
            failures.push(w.perm().to_vec());
        }
    }
    Ok(KostantReport {
        n,
        mu: mu.clone(),
        stable_cosets: stable,
        failures,
    })
}

/// All θ-invariant dominant integral weights of `GL(n)` with entries in `[−bound, bound]`.
pub fn theta_invariant_dominant(n: usize, bound: i64) -> Vec<Weight> {
    let m = n / 2;
    let mut out = Vec::new();
    let mut head = vec![0i64; m];
    fn rec(i: usize, max: i64, head: &mut Vec<i64>, n: usize, out: &mut Vec<Weight>) {
        if i == head.len() {
            let mut v: Vec<HalfInt> = head.iter().map(|&x| HalfInt::from_int(x)).collect();
            if n % 2 == 1 {
                v.push(HalfInt::ZERO);
            }
            v.extend(head.iter().rev().map(|&x| HalfInt::from_int(-x)));
            out.push(Weight(v));
            return;
        }
        for x in (0..=max).rev() {
            head[i] = x;
            rec(i + 1, x, head, n, out);
        }
    }
    rec(0, bound, &mut head, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn theta_fixed_examples() {
        let w = theta_fixed_weyl(3);
        assert_eq!(w.elements, vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert_eq!(theta_fixed_weyl(2).order(), 2);
        let w4 = theta_fixed_weyl(4);
        assert_eq!(w4.order(), 8);
        let b2: BTreeSet<WeylElement> = GroupType::b(2).unwrap().elements().into_iter().collect();
        let image: BTreeSet<WeylElement> = w4.signed.iter().cloned().collect();
        assert_eq!(image, b2);
    }

    #[test]
    fn signed_image_is_a_homomorphism() {
        for n in 2..=6 {
            let w = theta_fixed_weyl(n);
            assert_eq!(w.order() as u64, GroupType::b(n / 2).unwrap().weyl_order());
            for (i, a) in w.elements.iter().enumerate() {
                for (j, b) in w.elements.iter().enumerate() {
                    let ab: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                    let k = w.elements.iter().position(|e| *e == ab).unwrap();
                    assert_eq!(w.signed[k], w.signed[i].compose(&w.signed[j]));
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let t = TwistedTorusElement::from_real(&[2.0, 1.0, 3.0]).unwrap();
        let n = norm_map(&t);
        assert_eq!(n.len(), 1);
        assert!(close(n[0], Complex64::new(2.0 / 3.0, 0.0), 1e-15));
        let s = TwistedTorusElement::from_real(&[5.0, 2.0, 2.0, 5.0]).unwrap();
        assert!(norm_map(&s).iter().all(|z| close(*z, Complex64::new(1.0, 0.0), 1e-15)));
        assert_eq!(
            TwistedTorusElement::from_real(&[1.0, 0.0]).unwrap_err(),
            Error::ZeroEntry
        );
    }

    #[test]
    fn norm_is_theta_coinvariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let mut draw = || {
                    let entries = (0..n)
                        .map(|_| Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..6.3)))
                        .collect();
                    TwistedTorusElement::new(entries).unwrap()
                };
                let x = draw();
                let t = draw();
                let moved = x.mul(&x.theta().theta_inverse()).mul(&t);
                for (a, b) in norm_map(&moved).iter().zip(norm_map(&t)) {
                    assert!(close(*a, b, 1e-12));
                }
            }
        }
    }

    impl TwistedTorusElement {
        fn theta_inverse(&self) -> Self {
            TwistedTorusElement {
                entries: self.entries.iter().map(|z| z.inv()).collect(),
            }
        }
    }

    #[test]
    fn trace_examples() {
        let rep = ExtremalRep::new(Weight::from_ints(&[1, 0, -1])).unwrap();
        let t = TwistedTorusElement::from_real(&[2.0, 1.0, 3.0]).unwrap();
        let tr = twisted_trace_extremal(&rep, &t).unwrap();
        assert!(close(tr, Complex64::new(13.0 / 6.0, 0.0), 1e-12));

        let zero = ExtremalRep::new(Weight::zero(4)).unwrap();
        assert_eq!(twisted_trace_extremal(&zero, &random_regular_elements(4, 1, 3)[0]).unwrap(), Complex64::new(1.0, 0.0));

        let rep = ExtremalRep::new(Weight::from_ints(&[1, -1])).unwrap();
        let t = TwistedTorusElement::from_real(&[3.0, 5.0]).unwrap();
        let tr = twisted_trace_extremal(&rep, &t).unwrap();
        assert!(close(tr, Complex64::new(3.0 / 5.0 + 5.0 / 3.0, 0.0), 1e-12));

        assert!(ExtremalRep::new(Weight::from_ints(&[1, 0, 0])).is_err());
        assert!(ExtremalRep::new(Weight::from_ints(&[-1, 1])).is_err());
    }

    #[test]
    fn transfer_examples() {
        let r = verify_transfer_identity(&Weight::from_ints(&[1, 0, -1]), 1, 100, 7).unwrap();
        assert!(r.max_residual <= 1e-9);
        let r = verify_transfer_identity(&Weight::from_ints(&[2, 1, -1, -2]), 2, 100, 7).unwrap();
        assert!(r.max_residual <= 1e-9);
        assert_eq!(r.extremal_lines, r.endoscopic_weights);
        let r = verify_transfer_identity(&Weight::zero(5), 2, 10, 7).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(verify_transfer_identity(&Weight::from_ints(&[1, 0]), 1, 1, 0).is_err());
    }

    #[test]
    fn non_principal_ranks_split_the_orbit() {
        let mu = Weight::from_ints(&[3, 1, 0, -1, -3]);
        let principal = EndoscopicSide::new(&mu, 2).unwrap();
        assert_eq!(principal.orbits.len(), 1);
        let split = EndoscopicSide::new(&mu, 1).unwrap();
        // (±3,±1) and (±1,±3).
        assert_eq!(split.orbits.len(), 2);
        assert_eq!(split.weight_count(), principal.weight_count());
        for k in 0..=2 {
            let r = verify_transfer_identity(&mu, k, 50, 1).unwrap();
            assert!(r.max_residual <= 1e-9);
        }
    }

    #[test]
    fn kostant_examples() {
        assert!(kostant_theta_invariance(3, &Weight::from_ints(&[1, 0, -1])).unwrap().passes());
        let r = kostant_theta_invariance(4, &Weight::from_ints(&[1, 1, -1, -1])).unwrap();
        assert!(r.passes());
        // (±1,±1,∓1,∓1): the W(B₂)-orbit of (1,1).
        assert_eq!(r.stable_cosets, 4);
        let r = kostant_theta_invariance(2, &Weight::from_ints(&[1, -1])).unwrap();
        assert!(r.passes());
        assert_eq!(r.stable_cosets, 2);
    }

    #[test]
    fn kostant_reps_have_minimal_length() {
        let inversions = |p: &[usize]| {
            (0..p.len())
                .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count()
        };
        let mu = Weight::from_ints(&[2, 1, 1, 0, -1, -1, -2]);
        let levi = (0..6).filter(|&i| mu[i] == mu[i + 1]).collect();
        let reps = GroupType::a(6).unwrap().kostant_reps(&levi).unwrap();
        for w in reps {
            let image = w.apply(&mu).unwrap();
            let best = permutations(7)
                .into_iter()
                .filter(|p| WeylElement::from_perm(p.clone()).unwrap().apply(&mu).unwrap() == image)
                .map(|p| inversions(&p))
                .min()
                .unwrap();
            assert_eq!(inversions(w.perm()), best);
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(theta_invariant_dominant(1, 3), vec![Weight::zero(1)]);
        assert_eq!(theta_invariant_dominant(2, 3).len(), 4);
        // Non-increasing triples from {0..3}: C(6,3).
        assert_eq!(theta_invariant_dominant(6, 3).len(), 20);
    }
}
