//! Fabrication hand-off: polygon JSON and SVG.
//!
//! SVG coordinates are `px = s·x`, `py = -s·y` with `s` stored in the root
//! element's `data-scale-px-per-m` attribute, so `y` points up in physical
//! units and down on screen as usual.

use std::fmt::Write;

use serde::Serialize;

use sawfocus_core::layout::{ElectrodeKind, ElectrodeSet};

use crate::error::{Error, Result};

#[derive(Serialize)]
struct PolygonOut<'a> {
    kind: &'a str,
    index: usize,
    vertices: &'a [[f64; 2]],
}

#[derive(Serialize)]
struct MetadataOut {
    wavelength_m: f64,
    waist_m: f64,
    pitch_m: f64,
    electrode_width_m: f64,
    electrode_gap_m: f64,
    aperture_rule: &'static str,
    idt_pairs: u32,
    mirror_strips: u32,
    samples_per_edge: usize,
    physical_gap_m: f64,
    counts: Counts,
}

#[derive(Serialize)]
struct Counts {
    idt_finger_port1: usize,
    idt_finger_port2: usize,
    mirror_strip: usize,
}

#[derive(Serialize)]
struct LayoutOut<'a> {
    polygons: Vec<PolygonOut<'a>>,
    metadata: MetadataOut,
}

/// `{polygons:[{kind,index,vertices}],metadata:{..}}`, vertices in metres.
pub fn layout_json(set: &ElectrodeSet) -> String {
    let m = &set.metadata;
    let doc = LayoutOut {
        polygons: set
            .electrodes
            .iter()
            .map(|e| PolygonOut {
                kind: e.kind.as_str(),
                index: e.index,
                vertices: &e.vertices,
            })
            .collect(),
        metadata: MetadataOut {
            wavelength_m: m.wavelength,
            waist_m: m.waist,
            pitch_m: m.pitch,
            electrode_width_m: m.electrode_width,
            electrode_gap_m: m.electrode_gap,
            aperture_rule: m.aperture_rule,
            idt_pairs: m.idt_pairs,
            mirror_strips: m.mirror_fingers,
            samples_per_edge: m.samples_per_edge,
            physical_gap_m: m.physical_gap,
            counts: Counts {
                idt_finger_port1: set.count(ElectrodeKind::IdtFingerPort1),
                idt_finger_port2: set.count(ElectrodeKind::IdtFingerPort2),
                mirror_strip: set.count(ElectrodeKind::MirrorStrip),
            },
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("layout serializes");
    s.push('\n');
    s
}

/// One `<path>` per polygon with the kind as its class.
pub fn export_svg(set: &ElectrodeSet, scale: f64) -> Result<String> {
    if set.electrodes.is_empty() {
        return Err(Error::Config("cannot export an empty electrode set".into()));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Config(format!("svg scale must be positive, got {scale}")));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for e in &set.electrodes {
        let (a, b) = e.bounds();
        for k in 0..2 {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(b[k]);
        }
    }
    let (w, h) = (scale * (hi[0] - lo[0]), scale * (hi[1] - lo[1]));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.4}" height="{h:.4}" viewBox="{:.4} {:.4} {w:.4} {h:.4}" data-scale-px-per-m="{scale:e}">"#,
        scale * lo[0],
        -scale * hi[1],
    );
    out.push_str(
        "<style>.idt_finger_port1{fill:#c0392b}.idt_finger_port2{fill:#2471a3}.mirror_strip{fill:#7f8c8d}</style>\n",
    );
    for e in &set.electrodes {
        let _ = write!(out, r#"<path class="{}" id="{}" d=""#, e.kind.as_str(), e.label());
        for (i, p) in e.vertices.iter().enumerate() {
            let _ = write!(out, "{}{:.4},{:.4} ", if i == 0 { "M" } else { "L" }, scale * p[0], -scale * p[1]);
        }
        out.push_str("Z\"/>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
