//! JSON input files.

use std::path::Path;

use apack_core::{
    ArthurParameter, Block, Character, ClassicalGroup, Eta, GroupKind, HalfInt, LeviDatum,
    PacketData, PacketEntry,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: KindSpec,
    pub rank: usize,
    #[serde(default)]
    pub signature: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub enum KindSpec {
    #[serde(alias = "sp")]
    Sp,
    #[serde(alias = "so_odd", alias = "SO_odd")]
    SOodd,
    #[serde(alias = "so_even", alias = "SO_even")]
    SOeven,
}

impl From<KindSpec> for GroupKind {
    fn from(k: KindSpec) -> Self {
        match k {
            KindSpec::Sp => GroupKind::Sp,
            KindSpec::SOodd => GroupKind::SOodd,
            KindSpec::SOeven => GroupKind::SOeven,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub t: HalfInt,
    pub a: u32,
    #[serde(default)]
    pub eta: Option<String>,
    #[serde(default)]
    pub mult: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub offsets: Option<Vec<HalfInt>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub height_bound: Option<i64>,
    #[serde(default)]
    pub threshold: Option<HalfInt>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub group: GroupSpec,
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrySpec {
    levi: Vec<(usize, usize)>,
    character: Vec<i8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacketFile {
    group: GroupSpec,
    blocks: Vec<BlockSpec>,
    entries: Vec<EntrySpec>,
}

/// A parsed spec file with the raw bytes kept for hashing.
#[derive(Clone, Debug)]
pub struct Input {
    pub psi: ArthurParameter,
    pub options: Options,
    pub bytes: Vec<u8>,
}

fn parse_eta(s: &str) -> Result<Eta, CliError> {
    match s {
        "+" | "+1" | "plus" => Ok(Eta::Plus),
        "-" | "−" | "-1" | "minus" => Ok(Eta::Minus),
        _ => Err(CliError::Input(format!("eta must be \"+\" or \"-\", got {s:?}"))),
    }
}

fn group(g: &GroupSpec) -> Result<ClassicalGroup, CliError> {
    ClassicalGroup::new(g.kind.into(), g.rank, g.signature).map_err(CliError::core)
}

fn parameter(g: &GroupSpec, blocks: &[BlockSpec]) -> Result<ArthurParameter, CliError> {
    let group = group(g)?;
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let eta = match &b.eta {
            Some(s) => parse_eta(s)?,
            None => Eta::Plus,
        };
        out.push(Block::new(b.t, eta, b.a, b.mult.unwrap_or(1)).map_err(CliError::core)?);
    }
    ArthurParameter::new(group, out).map_err(CliError::core)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_spec_bytes(bytes: Vec<u8>) -> Result<Input, CliError> {
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("not UTF-8: {e}")))?;
    let file: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    let psi = parameter(&file.group, &file.blocks)?;
    Ok(Input {
        psi,
        options: file.options,
        bytes,
    })
}

pub fn parse_spec(path: &Path) -> Result<Input, CliError> {
    parse_spec_bytes(read(path)?)
}

/// A packet of `ψ₊`: its parameter plus `(Levi, character)` index pairs.
pub fn parse_packet(path: &Path) -> Result<(PacketData, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("not UTF-8: {e}")))?;
    let file: PacketFile = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    let psi = parameter(&file.group, &file.blocks)?;
    let mut entries = Vec::with_capacity(file.entries.len());
    for e in file.entries {
        let levi = LeviDatum::new(*psi.group(), e.levi).map_err(CliError::core)?;
        let datum = apack_core::AqDatum::new(&psi, levi).map_err(CliError::core)?;
        entries.push(PacketEntry {
            datum,
            character: Character(e.character),
        });
    }
    Ok((PacketData { psi, entries }, bytes))
}

pub fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// Comma-separated half-integers, e.g. `1,0,-1` or `5,3/2`.
pub fn parse_halfints(s: &str) -> Result<Vec<HalfInt>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.parse::<HalfInt>().map_err(CliError::core))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{
        "group": {"kind": "Sp", "rank": 2},
        "blocks": [{"t": "3/2", "a": 2}, {"t": "0", "a": 1, "eta": "+"}]
    }"#;

    #[test]
    fn ex1_round_trip() {
        let input = parse_spec_bytes(EX1.as_bytes().to_vec()).unwrap();
        assert_eq!(input.psi.group(), &ClassicalGroup::sp(2));
        assert_eq!(input.psi.blocks().len(), 2);
        assert_eq!(input.psi.blocks()[0].t, HalfInt::from_doubled(3));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = EX1.replacen("\"rank\": 2", "\"rank\": 2, \"foo\": 1", 1);
        assert!(matches!(parse_spec_bytes(bad.into_bytes()), Err(CliError::Input(_))));
        let bad = EX1.replacen("\"a\": 2", "\"a\": 2, \"foo\": 1", 1);
        assert!(parse_spec_bytes(bad.into_bytes()).is_err());
    }

    #[test]
    fn dimension_is_checked_eagerly() {
        let bad = EX1.replacen("\"a\": 1", "\"a\": 3", 1);
        let err = parse_spec_bytes(bad.into_bytes()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn halfint_lists() {
        let v = parse_halfints("1,0,-1").unwrap();
        assert_eq!(v, vec![HalfInt::from_int(1), HalfInt::ZERO, HalfInt::from_int(-1)]);
        assert_eq!(parse_halfints("5/2").unwrap(), vec![HalfInt::from_doubled(5)]);
        assert!(parse_halfints("1/3").is_err());
    }
}
