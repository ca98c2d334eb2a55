//! Payloads of the non-sweep subcommands.

use apack_core::{
    enumerate_levis, range_check, translate_packet, ArthurParameter, ComponentGroup, DominationPair,
    HalfInt, PacketData, PacketEntry, QuotientMap,
};
use serde_json::{json, Value};

use crate::report::{strs, Section};
use crate::verify::resolve_offsets;
use crate::CliError;

fn component_json(a: &ComponentGroup) -> Value {
    json!({
        "order": a.order(),
        "rank": a.rank(),
        "basis": strs(&a.basis),
        "determinant_relation": a.relation.is_some(),
        "s_psi": a.s_psi.to_string(),
        "elements": strs(&a.elements),
    })
}

pub fn info(psi: &ArthurParameter, threshold: Option<HalfInt>) -> Section {
    let g = psi.group();
    let copies: Vec<Value> = psi
        .discrete_copies()
        .iter()
        .map(|c| json!({ "t": c.t.to_string(), "a": c.a }))
        .collect();
    let thr = threshold.unwrap_or_else(|| psi.default_threshold());
    let mut out = json!({
        "group": g.to_string(),
        "kind": format!("{:?}", g.kind()),
        "rank": g.rank(),
        "dual_dim": g.dual_dim(),
        "dual": if g.dual_is_symplectic() { "Sp" } else { "SO" },
        "blocks": strs(psi.blocks()),
        "dimension": psi.dimension(),
        "discrete_copies": copies,
        "good_parity": psi.is_good_parity(),
        "threshold": thr.to_string(),
        "very_regular": psi.is_very_regular(thr),
        "canonical_offsets": psi.canonical_offsets(Some(thr)),
    });
    if let Ok(a) = psi.component_group() {
        out["component_group"] = component_json(&a);
    }
    match enumerate_levis(psi) {
        Ok(levis) => out["levis"] = strs(&levis),
        Err(e) => out["levis_error"] = Value::String(e.to_string()),
    }
    Section::new(out)
}

pub fn dominate(
    psi: &ArthurParameter,
    offsets: Option<&[HalfInt]>,
    threshold: Option<HalfInt>,
) -> Result<Section, CliError> {
    let offsets = resolve_offsets(psi, offsets, threshold);
    let plus = psi.dominate(&offsets, threshold).map_err(CliError::core)?;
    let pair = DominationPair::new(psi, &plus).map_err(CliError::core)?;
    let q = QuotientMap::new(&plus, psi).map_err(CliError::core)?;
    let thr = threshold.unwrap_or_else(|| psi.default_threshold());
    Ok(Section::new(json!({
        "psi": psi.to_string(),
        "psi_plus": plus.to_string(),
        "blocks": strs(plus.blocks()),
        "offsets": pair.offsets,
        "threshold": thr.to_string(),
        "very_regular": plus.is_very_regular(thr),
        "quotient_map": {
            "source": component_json(&q.source),
            "target": component_json(&q.target),
            "isomorphism": q.is_isomorphism(),
            "surjective": q.is_surjective(),
            "kernel": strs(&q.kernel),
        },
    })))
}

fn entry_json(e: &PacketEntry) -> Value {
    let r = range_check(&e.datum);
    json!({
        "label": e.datum.label(),
        "levi": e.datum.levi.to_string(),
        "t_tilde": e.datum.t_tilde,
        "character": e.character.0,
        "range": serde_json::to_value(r.class).expect("enum serializes"),
    })
}

pub fn packet(packet_plus: &PacketData, psi: &ArthurParameter) -> Result<Section, CliError> {
    let t = translate_packet(packet_plus, psi).map_err(CliError::core)?;
    let mut s = Section::new(json!({
        "psi": psi.to_string(),
        "psi_plus": packet_plus.psi.to_string(),
        "source_entries": packet_plus.entries.len(),
        "entries": t.packet.entries.iter().map(entry_json).collect::<Vec<_>>(),
        "vanished": t.vanished.iter().map(entry_json).collect::<Vec<_>>(),
    }));
    if t.packet.entries.len() + t.vanished.len() != packet_plus.entries.len() {
        s.violations.push("entries lost in translation".into());
    }
    Ok(s)
}
