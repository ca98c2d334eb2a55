//! Combinatorics of translating Arthur packets for real classical groups:
//! Weyl group orbits, Arthur parameters and their component groups,
//! translation on the torus, the twisted character identity for `GL(N)`,
//! and cohomologically induced `A_q(λ)` data.

pub mod aq;
pub mod corpus;
pub mod error;
pub mod halfint;
pub mod param;
pub mod torus;
pub mod twisted;
pub mod weyl;

pub use aq::{
    enumerate_levis, evaluate_at, filtration_vanishing, lambda_tilde, lambda_tilde_raw, lift_packet,
    range_check, translate_packet, AqDatum, FiltrationReport, LeviDatum, LeviShape, PacketData,
    PacketEntry, RangeClass, RangeReport, Sigma, TranslatedPacket,
};
pub use error::{Error, Result};
pub use halfint::{HalfInt, Weight};
pub use param::{
    block_parity,
    ArthurParameter, Block, BlockParity, Character, ClassicalGroup, ComponentGroup, DiscreteCopy,
    DominationPair, EndoscopicSplit, Eta, GroupKind, InfChar, ParityReport, QuotientMap, Side,
    SignVector, SplitFactor,
};
pub use torus::{
    symmetrize, tensor_infchar_support, transfer_infchar, translation_weight, uniqueness_check,
    weak_unipotence_norm_test, CharacterCombination, NormReport, TranslationDatum, UniquenessReport,
};
pub use twisted::{
    kostant_theta_invariance, norm_map, theta_fixed_weyl, twisted_trace_extremal,
    verify_transfer_identity, ExtremalRep, KostantReport, TransferReport, TwistedTorusElement,
};
pub use weyl::{Family, GroupType, Orbit, WeylElement};
