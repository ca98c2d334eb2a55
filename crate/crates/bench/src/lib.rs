//! Fixtures shared by the benches in `benches/`.

use apack_core::corpus::{good_parity_corpus, CorpusBounds};
use apack_core::{ArthurParameter, Block, ClassicalGroup, Eta, HalfInt};

/// `Sp(4,ℝ)`, `I_{3/2} ⊗ R[2] ⊕ triv ⊗ R[1]`.
pub fn ex1() -> ArthurParameter {
    ArthurParameter::new(
        ClassicalGroup::sp(2),
        vec![Block::discrete(HalfInt::from_doubled(3), 2), Block::unipotent(Eta::Plus, 1)],
    )
    .expect("valid parameter")
}

/// The default corpus paired with its canonical dominating parameters.
pub fn corpus_pairs() -> Vec<(ArthurParameter, ArthurParameter)> {
    good_parity_corpus(&CorpusBounds::default())
        .into_iter()
        .map(|psi| {
            let offsets: Vec<HalfInt> = psi.canonical_offsets(None).into_iter().map(HalfInt::from_int).collect();
            let plus = psi.dominate(&offsets, None).expect("canonical offsets dominate");
            (psi, plus)
        })
        .collect()
}
