//! Verification sweeps. Each returns a [`Section`]; an empty violation list is a pass.

use std::collections::BTreeMap;

use apack_core::corpus::{good_parity_corpus, levis_over_real_forms, CorpusBounds};
use apack_core::twisted::theta_invariant_dominant;
use apack_core::{
    filtration_vanishing, range_check, kostant_theta_invariance, lambda_tilde_raw,
    transfer_infchar, uniqueness_check, verify_transfer_identity, ArthurParameter, AqDatum, Block,
    ClassicalGroup, Eta, FiltrationReport, GroupKind, HalfInt, LeviShape, RangeClass, Side, Weight,
};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{opt_rat, rat, sci, strs, Section};
use crate::CliError;

/// Largest residual accepted by the twisted trace sweep.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Entry bound of the θ-invariant dominant grid.
pub const GRID_BOUND: i64 = 3;
pub const MAX_GL_RANK: usize = 6;

/// Offsets from the flag, the spec options, or the canonical choice, in that order.
pub fn resolve_offsets(
    psi: &ArthurParameter,
    explicit: Option<&[HalfInt]>,
    threshold: Option<HalfInt>,
) -> Vec<HalfInt> {
    match explicit {
        Some(o) => o.to_vec(),
        None => psi
            .canonical_offsets(threshold)
            .into_iter()
            .map(HalfInt::from_int)
            .collect(),
    }
}

/// Reports bad-parity blocks; an empty violation list means `ψ` is of good parity.
pub fn parity(psi: &ArthurParameter) -> Section {
    let report = psi.good_parity();
    let blocks: Vec<Value> = report
        .blocks
        .iter()
        .map(|b| {
            json!({
                "block": b.block.to_string(),
                "good": b.good,
                "value": b.value.to_string(),
                "rule": b.rule,
            })
        })
        .collect();
    let t_tilde = lambda_tilde_raw(psi);
    let integral = t_tilde.iter().all(|t| t.is_integer());
    let mut s = Section::new(json!({
        "blocks": blocks,
        "good_parity": report.good,
        "t_tilde": strs(&t_tilde),
        "t_tilde_integral": integral,
    }));
    for b in report.blocks.iter().filter(|b| !b.good) {
        s.violations.push(format!("{}: {} fails ({})", b.block, b.value, b.rule));
    }
    if integral != report.good {
        s.violations.push(format!("t̃ integrality {integral} disagrees with parity {}", report.good));
    }
    s
}

/// A random good-or-bad discrete part padded with good-parity unipotent filler.
fn random_parity_case(kind: GroupKind, rng: &mut ChaCha8Rng) -> ArthurParameter {
    loop {
        let k = rng.random_range(1..=3);
        let mut blocks: Vec<Block> = (0..k)
            .map(|_| {
                let t = HalfInt::from_doubled(rng.random_range(1..=15));
                let a = rng.random_range(1..=6);
                Block::discrete(t, a).with_mult(rng.random_range(1..=2))
            })
            .collect();
        let d: usize = blocks.iter().map(Block::dim).sum();
        let group = ClassicalGroup::quasi_split(kind, d.div_ceil(2).max(1));
        // Unipotent filler of good parity: R[2] against a symplectic dual, R[1] otherwise.
        let filler_a = if group.dual_is_symplectic() { 2 } else { 1 };
        let spare = group.dual_dim() - d;
        if spare > 0 {
            let count = spare / filler_a as usize;
            blocks.push(Block::unipotent(Eta::Plus, filler_a).with_mult(count as u32));
        }
        if let Ok(psi) = ArthurParameter::new(group, blocks) {
            return psi;
        }
    }
}

/// `good_parity(ψ) ⇔ all t̃ᵢ ∈ ℤ` on `per_kind` random parameters of each kind.
pub fn parity_sweep(per_kind: usize, seed: u64) -> Section {
    let mut results = serde_json::Map::new();
    let mut violations = Vec::new();
    for (i, kind) in [GroupKind::Sp, GroupKind::SOodd, GroupKind::SOeven].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let (mut good, mut bad, mut mismatches) = (0usize, 0usize, 0usize);
        for _ in 0..per_kind {
            let psi = random_parity_case(kind, &mut rng);
            let p = psi.is_good_parity();
            let integral = lambda_tilde_raw(&psi).iter().all(|t| t.is_integer());
            if p {
                good += 1;
            } else {
                bad += 1;
            }
            if p != integral {
                mismatches += 1;
                if violations.len() < 20 {
                    violations.push(format!("{psi}: parity {p}, t̃ integral {integral}"));
                }
            }
        }
        results.insert(
            format!("{kind:?}"),
            json!({ "samples": per_kind, "good": good, "bad": bad, "mismatches": mismatches }),
        );
    }
    Section {
        results: Value::Object(results),
        violations,
    }
}

/// `|ν_GL|² = 2|ν|²` on random `ν`, cycling through the group kinds.
pub fn norm_sweep(trials: usize, seed: u64) -> Section {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [GroupKind::Sp, GroupKind::SOodd, GroupKind::SOeven];
    let mut violations = Vec::new();
    let mut max_norm = Rational64::from_integer(0);
    for i in 0..trials {
        let rank = rng.random_range(1..=MAX_GL_RANK);
        let group = ClassicalGroup::quasi_split(kinds[i % 3], rank);
        let nu: Weight = (0..rank)
            .map(|_| HalfInt::from_doubled(rng.random_range(-24..=24)))
            .collect();
        let g = nu.norm_sq();
        max_norm = max_norm.max(g);
        match transfer_infchar(&nu, &group) {
            Ok(gl) if gl.coords().norm_sq() == g * 2 => {}
            Ok(gl) => violations.push(format!(
                "{group} ν = {nu}: |ν_GL|² = {}, 2|ν|² = {}",
                gl.coords().norm_sq(),
                g * 2
            )),
            Err(e) => violations.push(format!("{group} ν = {nu}: {e}")),
        }
    }
    Section {
        results: json!({ "trials": trials, "max_norm_sq": rat(max_norm) }),
        violations,
    }
}

/// Norm doubling and the GL/G agreement on the infinitesimal character of `ψ`.
pub fn norms_for(psi: &ArthurParameter) -> Result<Section, CliError> {
    let g = psi.inf_char(Side::G).map_err(CliError::core)?;
    let gl = psi.inf_char(Side::GL).map_err(CliError::core)?;
    let image = transfer_infchar(g.coords(), psi.group()).map_err(CliError::core)?;
    let mut s = Section::new(json!({
        "g": strs(g.coords().iter()),
        "gl": strs(gl.coords().iter()),
        "norm_sq_g": rat(g.coords().norm_sq()),
        "norm_sq_gl": rat(gl.coords().norm_sq()),
    }));
    if image != gl {
        s.violations.push(format!("transfer of {} is {}, not {}", g.coords(), image.coords(), gl.coords()));
    }
    if gl.coords().norm_sq() != g.coords().norm_sq() * 2 {
        s.violations.push("norm is not doubled".into());
    }
    Ok(s)
}

fn uniqueness_json(r: &apack_core::UniquenessReport) -> Value {
    json!({
        "nu_plus": strs(r.nu_plus.iter()),
        "nu_psi": strs(r.nu_psi.coords().iter()),
        "lambda_gl": strs(r.translation.lambda_gl.iter()),
        "lambda_g": strs(r.translation.lambda_g.iter()),
        "offsets": r.translation.offsets,
        "expected": strs(r.expected.iter()),
        "matches": r.matches.iter().map(|m| strs(m.iter())).collect::<Vec<_>>(),
        "rearrangements": u64::try_from(r.rearrangements).unwrap_or(u64::MAX),
        "unique": r.unique,
    })
}

pub fn uniqueness(
    psi: &ArthurParameter,
    offsets: &[HalfInt],
    threshold: Option<HalfInt>,
) -> Result<Section, CliError> {
    let plus = psi.dominate(offsets, threshold).map_err(CliError::core)?;
    let r = uniqueness_check(psi, &plus).map_err(CliError::core)?;
    let mut s = Section::new(json!({
        "psi": psi.to_string(),
        "psi_plus": plus.to_string(),
        "check": uniqueness_json(&r),
    }));
    if !r.unique {
        s.violations.push(format!("{psi}: {} matches", r.matches.len()));
    }
    Ok(s)
}

/// The exhaustive corpus with canonical offsets.
pub fn corpus(bounds: &CorpusBounds) -> Vec<ArthurParameter> {
    good_parity_corpus(bounds)
}

pub fn uniqueness_corpus(bounds: &CorpusBounds) -> Section {
    let psis = corpus(bounds);
    let outcomes: Vec<Result<apack_core::UniquenessReport, String>> = psis
        .par_iter()
        .map(|psi| {
            let offsets = resolve_offsets(psi, None, None);
            let plus = psi.dominate(&offsets, None).map_err(|e| format!("{psi}: {e}"))?;
            uniqueness_check(psi, &plus).map_err(|e| format!("{psi}: {e}"))
        })
        .collect();
    let mut violations = Vec::new();
    let (mut unique, mut max_r, mut total_r) = (0usize, 0u128, 0u128);
    for (psi, o) in psis.iter().zip(outcomes) {
        match o {
            Ok(r) if r.unique => {
                unique += 1;
                max_r = max_r.max(r.rearrangements);
                total_r += r.rearrangements;
            }
            Ok(r) => violations.push(format!("{psi}: {} matches", r.matches.len())),
            Err(e) => violations.push(e),
        }
    }
    Section {
        results: json!({
            "parameters": psis.len(),
            "unique": unique,
            "max_rearrangements": u64::try_from(max_r).unwrap_or(u64::MAX),
            "total_rearrangements": u64::try_from(total_r).unwrap_or(u64::MAX),
        }),
        violations,
    }
}

/// One run of the filtration estimate and the Levi data it stands for.
pub struct FiltrationRun {
    pub label: String,
    pub covers: usize,
    pub report: Result<FiltrationReport, String>,
}

/// The filtration check at height `h` (default `2·max Tᵢ`) for the Levi data of
/// `ψ₊` over every real form of the group. Each datum is range-checked on its
/// own; the estimate itself only sees the complex Levi, so it runs once per
/// distinct shape and its label lists every datum it covers.
pub fn filtration_reports(
    psi: &ArthurParameter,
    offsets: &[HalfInt],
    threshold: Option<HalfInt>,
    h: Option<i64>,
) -> Result<(i64, Vec<FiltrationRun>), CliError> {
    let plus = psi.dominate(offsets, threshold).map_err(CliError::core)?;
    let max_t = offsets.iter().filter_map(|o| o.to_integer()).max().unwrap_or(0);
    let h = h.unwrap_or(2 * max_t);
    if h < 0 {
        return Err(CliError::Input(format!("height bound {h} is negative")));
    }
    let mut out = Vec::new();
    let mut shapes: BTreeMap<LeviShape, (Vec<String>, AqDatum, ArthurParameter)> = BTreeMap::new();
    for levi in levis_over_real_forms(psi) {
        let label = levi.to_string();
        let prepare = || -> apack_core::Result<(AqDatum, ArthurParameter)> {
            let form = levi.group;
            let psi_f = ArthurParameter::new(form, psi.blocks().to_vec())?;
            let plus_f = ArthurParameter::new(form, plus.blocks().to_vec())?;
            Ok((AqDatum::new(&plus_f, levi.clone())?, psi_f))
        };
        match prepare() {
            Err(e) => out.push(FiltrationRun {
                label,
                covers: 1,
                report: Err(e.to_string()),
            }),
            Ok((d, _)) if range_check(&d).class != RangeClass::Good => out.push(FiltrationRun {
                label,
                covers: 1,
                report: Err(format!("{} is not in the good range", d.label())),
            }),
            Ok((d, psi_f)) => {
                shapes
                    .entry(levi.shape())
                    .or_insert_with(|| (Vec::new(), d, psi_f))
                    .0
                    .push(label);
            }
        }
    }
    for (labels, d, psi_f) in shapes.into_values() {
        out.push(FiltrationRun {
            covers: labels.len(),
            label: labels.join(", "),
            report: filtration_vanishing(&d, &psi_f, h).map_err(|e| e.to_string()),
        });
    }
    Ok((h, out))
}

fn violation_lines(label: &str, r: &Result<FiltrationReport, String>) -> Vec<String> {
    match r {
        Ok(r) => r
            .violations
            .iter()
            .map(|v| format!("{label}: μ = {:?}: {}", v.mu, v.reason))
            .collect(),
        Err(e) => vec![format!("{label}: {e}")],
    }
}

pub fn filtration(
    psi: &ArthurParameter,
    offsets: &[HalfInt],
    threshold: Option<HalfInt>,
    h: Option<i64>,
) -> Result<Section, CliError> {
    let (h, reports) = filtration_reports(psi, offsets, threshold, h)?;
    let mut violations = Vec::new();
    let levis: Vec<Value> = reports
        .iter()
        .map(|run| {
            let (label, r) = (&run.label, &run.report);
            violations.extend(violation_lines(label, r));
            match r {
                Ok(r) => json!({
                    "levi": label,
                    "covers": run.covers,
                    "lambda": strs(r.lambda.iter()),
                    "enumerated": r.enumerated,
                    "checked": r.checked,
                    "min_gain": opt_rat(r.min_gain),
                    "violations": r.violations.len(),
                }),
                Err(e) => json!({ "levi": label, "error": e }),
            }
        })
        .collect();
    if reports.is_empty() {
        violations.push(format!("{psi}: no θ-stable Levi on any real form"));
    }
    Ok(Section {
        results: json!({ "psi": psi.to_string(), "height_bound": h, "levis": levis }),
        violations,
    })
}

pub fn filtration_corpus(bounds: &CorpusBounds) -> Section {
    let psis = corpus(bounds);
    let outcomes: Vec<Result<(i64, Vec<FiltrationRun>), String>> = psis
        .par_iter()
        .map(|psi| {
            let offsets = resolve_offsets(psi, None, None);
            filtration_reports(psi, &offsets, None, None).map_err(|e| format!("{psi}: {e}"))
        })
        .collect();
    let mut violations = Vec::new();
    let (mut runs, mut data, mut enumerated, mut checked, mut max_h) = (0usize, 0usize, 0usize, 0usize, 0i64);
    let mut min_gain: Option<Rational64> = None;
    for (psi, o) in psis.iter().zip(outcomes) {
        match o {
            Err(e) => violations.push(e),
            Ok((h, reports)) => {
                max_h = max_h.max(h);
                if reports.is_empty() {
                    violations.push(format!("{psi}: no θ-stable Levi on any real form"));
                }
                for FiltrationRun { label, covers, report: r } in &reports {
                    runs += 1;
                    data += covers;
                    let label = format!("{psi} on {label}");
                    violations.extend(violation_lines(&label, r));
                    if let Ok(r) = r {
                        enumerated += r.enumerated;
                        checked += r.checked;
                        if let Some(g) = r.min_gain {
                            min_gain = Some(min_gain.map_or(g, |m| m.min(g)));
                        }
                    }
                }
            }
        }
    }
    Section {
        results: json!({
            "parameters": psis.len(),
            "levi_data": data,
            "runs": runs,
            "enumerated": enumerated,
            "checked": checked,
            "max_height_bound": max_h,
            "min_gain": opt_rat(min_gain),
        }),
        violations,
    }
}

/// `(μ, k)` pairs: the given weight or the θ-invariant dominant grid, and the
/// given endoscopic rank or all of them.
pub fn trace_cases(
    n: Option<usize>,
    mu: Option<&Weight>,
    endo_rank: Option<usize>,
) -> Result<Vec<(Weight, usize)>, CliError> {
    let weights: Vec<Weight> = match (mu, n) {
        (Some(mu), n) => {
            if n.is_some_and(|n| n != mu.len()) {
                return Err(CliError::Input(format!("--mu has {} entries, --n is {}", mu.len(), n.unwrap_or(0))));
            }
            if mu.is_empty() || mu.len() > MAX_GL_RANK + 2 {
                return Err(CliError::Input(format!("n = {} is out of range", mu.len())));
            }
            vec![mu.clone()]
        }
        (None, Some(n)) => {
            if n == 0 || n > MAX_GL_RANK + 2 {
                return Err(CliError::Input(format!("n = {n} is out of range")));
            }
            theta_invariant_dominant(n, GRID_BOUND)
        }
        (None, None) => (1..=MAX_GL_RANK)
            .flat_map(|n| theta_invariant_dominant(n, GRID_BOUND))
            .collect(),
    };
    let mut cases = Vec::new();
    for w in weights {
        let m = w.len() / 2;
        match endo_rank {
            Some(k) if k > m => {
                return Err(CliError::Input(format!("endoscopic rank {k} exceeds {m}")));
            }
            Some(k) => cases.push((w, k)),
            None => cases.extend((0..=m).map(|k| (w.clone(), k))),
        }
    }
    Ok(cases)
}

pub fn twisted_trace(cases: &[(Weight, usize)], trials: usize, seed: u64) -> Result<Section, CliError> {
    let mut lines = Vec::with_capacity(cases.len());
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for (mu, k) in cases {
        let r = verify_transfer_identity(mu, *k, trials, seed).map_err(CliError::core)?;
        worst = worst.max(r.max_residual);
        // NaN must fail too.
        let within = r.max_residual <= TRACE_TOLERANCE;
        if !within {
            violations.push(format!("μ = {mu}, k = {k}: residual {:.2e}", r.max_residual));
        }
        lines.push(json!({
            "mu": strs(mu.iter()),
            "endo_rank": k,
            "extremal_lines": r.extremal_lines,
            "endoscopic_weights": r.endoscopic_weights,
            "max_residual": sci(r.max_residual),
        }));
    }
    Ok(Section {
        results: json!({
            "cases": lines,
            "trials": trials,
            "tolerance": sci(TRACE_TOLERANCE),
            "max_residual": sci(worst),
        }),
        violations,
    })
}

pub fn kostant(cases: &[Weight]) -> Result<Section, CliError> {
    let mut violations = Vec::new();
    let mut stable = 0usize;
    let mut lines = Vec::with_capacity(cases.len());
    for mu in cases {
        let r = kostant_theta_invariance(mu.len(), mu).map_err(CliError::core)?;
        stable += r.stable_cosets;
        for f in &r.failures {
            violations.push(format!("μ = {mu}: representative {f:?} is not θ-fixed"));
        }
        lines.push(json!({
            "mu": strs(mu.iter()),
            "stable_cosets": r.stable_cosets,
            "failures": r.failures.len(),
        }));
    }
    Ok(Section {
        results: json!({ "weights": lines, "stable_cosets": stable }),
        violations,
    })
}
