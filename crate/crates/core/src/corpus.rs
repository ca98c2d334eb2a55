//! Exhaustive generation of small good-parity parameters.

use crate::halfint::HalfInt;
use crate::param::{block_parity, ArthurParameter, Block, ClassicalGroup, Eta, GroupKind};

/// Bounds for [`good_parity_corpus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusBounds {
    pub max_dual_dim: usize,
    /// Largest `t`, doubled.
    pub max_t_doubled: i64,
    pub max_a: u32,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds {
            max_dual_dim: 8,
            max_t_doubled: 7,
            max_a: 4,
        }
    }
}

/// Quasi-split groups of positive rank with `n* ≤ max_dual_dim`.
pub fn groups(max_dual_dim: usize) -> Vec<ClassicalGroup> {
    let mut out = Vec::new();
    for kind in [GroupKind::Sp, GroupKind::SOodd, GroupKind::SOeven] {
        let mut rank = 1;
        loop {
            let g = ClassicalGroup::quasi_split(kind, rank);
            if g.dual_dim() > max_dual_dim {
                break;
            }
            out.push(g);
            rank += 1;
        }
    }
    out
}

/// All real forms sharing the complex group: every signature for `SO`, and
/// `Sp(2n, ℝ)` itself.
pub fn real_forms(group: &ClassicalGroup) -> Vec<ClassicalGroup> {
    match group.signature() {
        None => vec![*group],
        Some((p, q)) => {
            let total = p + q;
            (0..=total).rev().map(|p| ClassicalGroup::so(p, total - p)).collect()
        }
    }
}

/// Levi data of `psi` transplanted to every real form of its group.
pub fn levis_over_real_forms(psi: &ArthurParameter) -> Vec<crate::aq::LeviDatum> {
    real_forms(psi.group())
        .into_iter()
        .filter_map(|g| ArthurParameter::new(g, psi.blocks().to_vec()).ok())
        .filter_map(|p| crate::aq::enumerate_levis(&p).ok())
        .flatten()
        .collect()
}

/// Good-parity blocks of multiplicity one with dimension at most `n*`.
fn candidate_blocks(group: &ClassicalGroup, bounds: &CorpusBounds) -> Vec<Block> {
    let mut out = Vec::new();
    for a in 1..=bounds.max_a {
        for eta in [Eta::Plus, Eta::Minus] {
            out.push(Block::unipotent(eta, a));
        }
        for t in 1..=bounds.max_t_doubled {
            out.push(Block::discrete(HalfInt::from_doubled(t), a));
        }
    }
    out.retain(|b| b.dim() <= group.dual_dim() && block_parity(group, b).good);
    out
}

/// Every good-parity parameter of the quasi-split group with blocks inside the bounds.
pub fn parameters_for(group: &ClassicalGroup, bounds: &CorpusBounds) -> Vec<ArthurParameter> {
    let candidates = candidate_blocks(group, bounds);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fill(group, &candidates, 0, group.dual_dim(), &mut chosen, &mut out);
    out
}

fn fill(
    group: &ClassicalGroup,
    candidates: &[Block],
    from: usize,
    remaining: usize,
    chosen: &mut Vec<Block>,
    out: &mut Vec<ArthurParameter>,
) {
    if remaining == 0 {
        let psi = ArthurParameter::new(*group, chosen.clone()).expect("dimension matches by construction");
        debug_assert!(psi.is_good_parity());
        out.push(psi);
        return;
    }
    for i in from..candidates.len() {
        let b = candidates[i];
        let d = b.dim();
        let mut mult = 1;
        while mult * d <= remaining {
            chosen.push(b.with_mult(mult as u32));
            fill(group, candidates, i + 1, remaining - mult * d, chosen, out);
            chosen.pop();
            mult += 1;
        }
    }
}

/// The full corpus over [`groups`].
pub fn good_parity_corpus(bounds: &CorpusBounds) -> Vec<ArthurParameter> {
    groups(bounds.max_dual_dim)
        .iter()
        .flat_map(|g| parameters_for(g, bounds))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn groups_cover_the_small_ranks() {
        let g = groups(8);
        let names: Vec<String> = g.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            names,
            vec![
                "Sp(2,R)", "Sp(4,R)", "Sp(6,R)", "SO(2,1)", "SO(3,2)", "SO(4,3)", "SO(5,4)",
                "SO(1,1)", "SO(2,2)", "SO(3,3)", "SO(4,4)"
            ]
        );
    }

    #[test]
    fn corpus_is_good_and_distinct() {
        let corpus = good_parity_corpus(&CorpusBounds::default());
        assert!(corpus.len() > 100);
        assert!(corpus.iter().all(|p| p.is_good_parity()));
        let distinct: HashSet<&ArthurParameter> = corpus.iter().collect();
        assert_eq!(distinct.len(), corpus.len());
    }

    #[test]
    fn real_forms_of_so4() {
        let forms = real_forms(&ClassicalGroup::so(2, 2));
        assert_eq!(forms.len(), 5);
        assert_eq!(forms[0], ClassicalGroup::so(4, 0));
        let psi = ArthurParameter::new(
            ClassicalGroup::so(1, 1),
            vec![Block::discrete(HalfInt::from_int(1), 1)],
        )
        .unwrap();
        assert!(crate::aq::enumerate_levis(&psi).is_err());
        let ls = levis_over_real_forms(&psi);
        assert_eq!(ls.len(), 2);
        assert_eq!(ls[0].group, ClassicalGroup::so(2, 0));
    }

    #[test]
    fn sp2_parameters() {
        // n* = 3: triv/sgn R[3]; R[1]^3 sign patterns; I_t⊗R[1] ⊕ R[1] with t ∈ {1,2,3}.
        let ps = parameters_for(&ClassicalGroup::sp(1), &CorpusBounds::default());
        let expected = 2 + 4 + 3 * 2;
        assert_eq!(ps.len(), expected, "{:#?}", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
}
