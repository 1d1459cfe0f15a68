//! Text and machine (JSON) renderings of a [`SpectrumReport`].

use std::fmt::Write as _;

use dessin_core::spectrum::{CheckStatus, SpectrumReport};
use dessin_core::subfield::Subfield;
use dessin_core::RatPoly;
use serde_json::{json, Map, Value};

/// Coefficients in ascending degree, each an exact rational as a string so
/// that integers of any size survive the round trip.
pub fn poly_coefficients(p: &RatPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn subfield_json(f: &Subfield) -> Value {
    json!({
        "conductor": f.conductor(),
        "subgroup": f.subgroup(),
        "degree": f.degree(),
    })
}

fn subfield_text(f: &Subfield) -> String {
    let h: Vec<String> = f.subgroup().iter().map(u64::to_string).collect();
    format!(
        "conductor {}, subgroup {{{}}}, degree {} ({f})",
        f.conductor(),
        h.join(", "),
        f.degree()
    )
}

fn galois_text(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "trivial".to_string();
    }
    let parts: Vec<String> = factors.iter().map(|n| format!("Z/{n}")).collect();
    parts.join(" x ")
}

/// The machine document. Key names and order are fixed.
pub fn machine(r: &SpectrumReport) -> Value {
    let mut doc = Map::new();
    doc.insert("dessin".into(), json!(r.dessin.to_string()));
    doc.insert("group_order".into(), json!(r.group_order));
    doc.insert("exponent".into(), json!(r.exponent));
    doc.insert("genus".into(), json!(r.genus));
    doc.insert(
        "passport".into(),
        json!({ "a": r.passport.a, "b": r.passport.b, "c": r.passport.c }),
    );
    doc.insert("strategy".into(), json!(r.strategy.to_string()));
    doc.insert("min_poly".into(), json!(poly_coefficients(&r.min_poly)));
    doc.insert(
        "squarefree_min_poly".into(),
        json!(poly_coefficients(&r.squarefree_min_poly)),
    );
    doc.insert("semisimple".into(), json!(r.semisimple));
    doc.insert("field_k".into(), subfield_json(&r.field_k));
    doc.insert("field_L".into(), subfield_json(&r.field_l));
    doc.insert("field_K".into(), subfield_json(&r.field_k_exp));
    doc.insert("field_K_order".into(), subfield_json(&r.field_k_ord));
    doc.insert("galois_group_L".into(), json!(r.galois_group_l));
    doc.insert("character_degrees".into(), json!(r.character_degrees));
    let predicted = r.predicted_eigenvalues.as_ref().map(|ps| {
        ps.iter()
            .map(|p| {
                let sources: Vec<Value> = p
                    .sources
                    .iter()
                    .map(|(row, side)| json!({ "row": row, "at": side.to_string() }))
                    .collect();
                json!({ "value": p.value.to_string(), "conductor": p.value.conductor(), "sources": sources })
            })
            .collect::<Vec<_>>()
    });
    doc.insert("predicted_eigenvalues".into(), json!(predicted));
    let multiplicities = r.multiplicities.as_ref().map(|ms| {
        ms.iter()
            .map(|m| json!({ "factor": poly_coefficients(&m.factor), "multiplicity": m.multiplicity }))
            .collect::<Vec<_>>()
    });
    doc.insert("multiplicities".into(), json!(multiplicities));
    let mut checks = Map::new();
    for c in &r.checks {
        checks.insert(
            c.name.to_string(),
            json!({ "status": c.status.to_string(), "detail": c.detail }),
        );
    }
    doc.insert("checks".into(), Value::Object(checks));
    let mut timings = Map::new();
    for (name, d) in &r.timings {
        timings.insert(name.to_string(), json!(d.as_secs_f64()));
    }
    doc.insert("timings".into(), Value::Object(timings));
    Value::Object(doc)
}

/// `key: value` lines, one per field, with nested lists indented.
pub fn text(r: &SpectrumReport) -> String {
    let mut s = String::new();
    write_text(r, &mut s).expect("formatting into a String");
    s
}

fn write_text(r: &SpectrumReport, s: &mut String) -> std::fmt::Result {
    let poly_line = |p: &RatPoly| format!("{p} [{}]", poly_coefficients(p).join(", "));
    writeln!(s, "dessin: {}", r.dessin)?;
    writeln!(s, "group_order: {}", r.group_order)?;
    writeln!(s, "exponent: {}", r.exponent)?;
    writeln!(s, "genus: {}", r.genus)?;
    writeln!(s, "passport: {}", r.passport)?;
    writeln!(s, "strategy: {}", r.strategy)?;
    writeln!(s, "min_poly: {}", poly_line(&r.min_poly))?;
    writeln!(
        s,
        "squarefree_min_poly: {}",
        poly_line(&r.squarefree_min_poly)
    )?;
    writeln!(s, "semisimple: {}", r.semisimple)?;
    writeln!(s, "field_k: {}", subfield_text(&r.field_k))?;
    writeln!(s, "field_L: {}", subfield_text(&r.field_l))?;
    writeln!(s, "field_K: {}", subfield_text(&r.field_k_exp))?;
    writeln!(s, "field_K_order: {}", subfield_text(&r.field_k_ord))?;
    writeln!(s, "galois_group_L: {}", galois_text(&r.galois_group_l))?;
    match &r.character_degrees {
        Some(d) => {
            let d: Vec<String> = d.iter().map(u64::to_string).collect();
            writeln!(s, "character_degrees: {}", d.join(", "))?;
        }
        None => writeln!(s, "character_degrees: none")?,
    }
    match &r.predicted_eigenvalues {
        Some(ps) => {
            writeln!(s, "predicted_eigenvalues:")?;
            for p in ps {
                let src: Vec<String> = p
                    .sources
                    .iter()
                    .map(|(row, side)| format!("row {row} at {side}"))
                    .collect();
                writeln!(s, "  {}  (from {})", p.value, src.join(", "))?;
            }
        }
        None => writeln!(s, "predicted_eigenvalues: none")?,
    }
    if let Some(ms) = &r.multiplicities {
        writeln!(s, "multiplicities:")?;
        for m in ms {
            writeln!(s, "  {}: {}", m.factor, m.multiplicity)?;
        }
    }
    writeln!(s, "checks:")?;
    for c in &r.checks {
        if c.status == CheckStatus::Pass {
            writeln!(s, "  {}: {}", c.name, c.status)?;
        } else {
            writeln!(s, "  {}: {} ({})", c.name, c.status, c.detail)?;
        }
    }
    writeln!(s, "timings:")?;
    for (name, d) in &r.timings {
        writeln!(s, "  {name}: {:.3} ms", d.as_secs_f64() * 1e3)?;
    }
    Ok(())
}
