//! Curved IDT-finger and Bragg-mirror geometry following the beam's
//! iso-phase wavefronts.
//!
//! The origin is the resonator center (beam waist) with `x` along
//! propagation. Port 1 sits at negative `x`, port 2 at positive `x`, and each
//! port is backed by a mirror on its outer side. Finger centers lie on
//! antinode wavefronts, mirror inner edges on node wavefronts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::beam::BeamParams;
use crate::material::AnisotropyProfile;
use crate::resonator::{ApertureRule, ResonatorSpec};
use crate::{Error, Result};

/// A planar point `[x, y]` in metres.
pub type Point = [f64; 2];

/// Role of an electrode polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElectrodeKind {
    /// Finger of the port-1 transducer.
    IdtFingerPort1,
    /// Finger of the port-2 transducer.
    IdtFingerPort2,
    /// Shorted Bragg-mirror strip.
    MirrorStrip,
}

impl ElectrodeKind {
    /// Stable snake-case name used in exported files.
    pub fn as_str(&self) -> &'static str {
        match self {
            ElectrodeKind::IdtFingerPort1 => "idt_finger_port1",
            ElectrodeKind::IdtFingerPort2 => "idt_finger_port2",
            ElectrodeKind::MirrorStrip => "mirror_strip",
        }
    }

    /// Inverse of [`ElectrodeKind::as_str`].
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "idt_finger_port1" => Some(ElectrodeKind::IdtFingerPort1),
            "idt_finger_port2" => Some(ElectrodeKind::IdtFingerPort2),
            "mirror_strip" => Some(ElectrodeKind::MirrorStrip),
            _ => None,
        }
    }
}

/// One closed electrode polygon, counter-clockwise, first vertex not repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct Electrode {
    /// Role.
    pub kind: ElectrodeKind,
    /// Position within its group, counted outward from the center.
    pub index: usize,
    /// Vertices (m).
    pub vertices: Vec<Point>,
}

impl Electrode {
    /// Signed shoelace area (positive for counter-clockwise).
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let [x0, y0] = self.vertices[i];
                let [x1, y1] = self.vertices[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        0.5 * twice
    }

    /// `(min, max)` of the `x` coordinates where the outline crosses `y = 0`.
    pub fn axis_crossings(&self) -> Option<(f64, f64)> {
        let n = self.vertices.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let [x0, y0] = self.vertices[i];
            let [x1, y1] = self.vertices[(i + 1) % n];
            let x = if y0 == 0.0 {
                x0
            } else if (y0 < 0.0) != (y1 < 0.0) && y1 != 0.0 {
                x0 + (x1 - x0) * (-y0) / (y1 - y0)
            } else {
                continue;
            };
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                min[k] = min[k].min(v[k]);
                max[k] = max[k].max(v[k]);
            }
        }
        (min, max)
    }

    /// `kind#index`, used in diagnostics.
    pub fn label(&self) -> String {
        format!("{}#{}", self.kind.as_str(), self.index)
    }
}

/// Design values recorded alongside the polygons.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutMetadata {
    /// `λ` (m).
    pub wavelength: f64,
    /// `w0` (m).
    pub waist: f64,
    /// Electrode period (m).
    pub pitch: f64,
    /// Electrode width (m).
    pub electrode_width: f64,
    /// Gap between neighbouring electrodes (m).
    pub electrode_gap: f64,
    /// Aperture rule name (`full_2w`, `apodized_const_w0`, `custom`).
    pub aperture_rule: &'static str,
    /// Finger pairs per port.
    pub idt_pairs: u32,
    /// Strips per mirror.
    pub mirror_fingers: u32,
    /// Samples per polygon edge.
    pub samples_per_edge: usize,
    /// On-axis distance between the two mirrors' inner edges (m).
    pub physical_gap: f64,
}

/// Electrode polygons of a device.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectrodeSet {
    /// All polygons.
    pub electrodes: Vec<Electrode>,
    /// Design values.
    pub metadata: LayoutMetadata,
}

impl ElectrodeSet {
    /// Number of polygons of one kind.
    pub fn count(&self, kind: ElectrodeKind) -> usize {
        self.electrodes.iter().filter(|e| e.kind == kind).count()
    }

    /// Polygons of one kind.
    pub fn of_kind(&self, kind: ElectrodeKind) -> impl Iterator<Item = &Electrode> {
        self.electrodes.iter().filter(move |e| e.kind == kind)
    }
}

/// Generation knobs. `None` fields take wavelength-derived defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutOptions {
    /// Samples along each long polygon edge.
    pub samples_per_edge: usize,
    /// Minimum electrode width and gap; default `λ/4`.
    pub resolution: Option<f64>,
    /// `|x|` of the innermost finger centers; default `λ/2` (first antinode
    /// off center).
    pub inner_finger_offset: Option<f64>,
    /// Distance from the outermost finger center to the mirror's inner
    /// edge; must be an odd multiple of `λ/4`, default `3λ/4`.
    pub idt_mirror_spacing: Option<f64>,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        Self {
            samples_per_edge: 64,
            resolution: None,
            inner_finger_offset: None,
            idt_mirror_spacing: None,
        }
    }
}

/// Paraxial sag `y² / (2 R_SAW(x0, y))` of the wavefront through `(x0, 0)`.
pub fn wavefront_sag(beam: &BeamParams, profile: &AnisotropyProfile, x0: f64, y: f64) -> Result<f64> {
    if x0 == 0.0 || y == 0.0 {
        return Ok(0.0);
    }
    Ok(y * y / (2.0 * beam.anisotropic_curvature(profile, x0, y)?))
}

fn symmetric_samples(half_extent: f64, samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| half_extent * (2.0 * i as f64 - last) / last)
}

/// Iso-phase polyline `x(y) = x0 - y² / (2 R_SAW(x0, θ))` for
/// `y ∈ [-y_half_span, y_half_span]`. A straight segment at `x0 = 0`.
pub fn isophase_curve(
    beam: &BeamParams,
    profile: &AnisotropyProfile,
    x0: f64,
    y_half_span: f64,
    samples: usize,
) -> Result<Vec<Point>> {
    if samples < 3 {
        return Err(Error::invalid("an iso-phase curve needs at least three samples"));
    }
    if !(y_half_span > 0.0 && y_half_span.is_finite()) {
        return Err(Error::invalid("transverse span must be positive"));
    }
    symmetric_samples(y_half_span, samples)
        .map(|y| Ok([x0 - wavefront_sag(beam, profile, x0, y)?, y]))
        .collect()
}

/// Odd multiple of a quarter wavelength, within `1e-9` relative.
fn is_odd_quarter(distance: f64, wavelength: f64) -> bool {
    let q = distance / (0.25 * wavelength);
    let r = libm::round(q);
    libm::fabs(q - r) < 1e-9 * q.max(1.0) && (r as i64) % 2 == 1
}

struct Strip<'a> {
    beam: &'a BeamParams,
    profile: &'a AnisotropyProfile,
    samples: usize,
    width: f64,
}

impl Strip<'_> {
    /// Polygon whose reference curve is the wavefront through `(x_ref, 0)`,
    /// offset by `left` and `right` horizontally.
    fn polygon(&self, x_ref: f64, half_height: f64, left: f64, right: f64) -> Result<Vec<Point>> {
        let curve: Vec<Point> = isophase_curve(self.beam, self.profile, x_ref, half_height, self.samples)?;
        let mut vertices = Vec::with_capacity(2 * curve.len());
        vertices.extend(curve.iter().rev().map(|[x, y]| [x + left, *y]));
        vertices.extend(curve.iter().map(|[x, y]| [x + right, *y]));
        Ok(vertices)
    }

    fn finger(&self, center: f64, half_height: f64) -> Result<Vec<Point>> {
        self.polygon(center, half_height, -0.5 * self.width, 0.5 * self.width)
    }

    fn mirror(&self, inner_edge: f64, half_height: f64) -> Result<Vec<Point>> {
        if inner_edge > 0.0 {
            self.polygon(inner_edge, half_height, 0.0, self.width)
        } else {
            self.polygon(inner_edge, half_height, -self.width, 0.0)
        }
    }
}

/// Generates the full two-port device.
pub fn generate_device(
    spec: &ResonatorSpec,
    beam: &BeamParams,
    profile: &AnisotropyProfile,
    options: &LayoutOptions,
) -> Result<ElectrodeSet> {
    let lambda = beam.wavelength();
    let pitch = spec.pitch();
    if libm::fabs(pitch - 0.5 * lambda) > 1e-9 * lambda {
        return Err(Error::invalid(format!(
            "electrode period {pitch:e} m is inconsistent with wavelength {lambda:e} m (expected lambda/2)"
        )));
    }
    if options.samples_per_edge < 3 {
        return Err(Error::invalid("samples per edge must be at least 3"));
    }
    let width = 0.5 * pitch;
    let gap = pitch - width;
    let resolution = options.resolution.unwrap_or(0.25 * lambda);
    let slack = 1e-12 * lambda;
    if width + slack < resolution || gap + slack < resolution {
        return Err(Error::Geometry(format!(
            "electrode width {width:e} m / gap {gap:e} m below resolution {resolution:e} m"
        )));
    }
    let inner = options.inner_finger_offset.unwrap_or(0.5 * lambda);
    if !(inner > 0.0) {
        return Err(Error::invalid("inner finger offset must be positive"));
    }
    let spacing = options.idt_mirror_spacing.unwrap_or(0.75 * lambda);
    if !is_odd_quarter(spacing, lambda) {
        return Err(Error::Geometry(format!(
            "IDT-to-mirror spacing {spacing:e} m is not an odd multiple of lambda/4"
        )));
    }

    let strip = Strip {
        beam,
        profile,
        samples: options.samples_per_edge,
        width,
    };
    let fingers = 2 * spec.idt_pairs() as usize;
    let mirrors = spec.mirror_fingers() as usize;
    let mut electrodes = Vec::with_capacity(2 * (fingers + mirrors));

    let centers: Vec<f64> = (0..fingers).map(|j| inner + j as f64 * pitch).collect();
    let outermost = centers[fingers - 1];
    for (side, kind) in [(-1.0, ElectrodeKind::IdtFingerPort1), (1.0, ElectrodeKind::IdtFingerPort2)] {
        for (index, &c) in centers.iter().enumerate() {
            let x0 = side * c;
            let half_height = spec.aperture_rule().half_aperture(beam, x0);
            electrodes.push(Electrode {
                kind,
                index,
                vertices: strip.finger(x0, half_height)?,
            });
        }
    }
    let first_edge = outermost + spacing;
    let mut mirror_index = 0;
    for side in [-1.0, 1.0] {
        for k in 0..mirrors {
            let edge = side * (first_edge + k as f64 * pitch);
            let half_height = ApertureRule::Full2w.half_aperture(beam, edge);
            electrodes.push(Electrode {
                kind: ElectrodeKind::MirrorStrip,
                index: mirror_index,
                vertices: strip.mirror(edge, half_height)?,
            });
            mirror_index += 1;
        }
    }

    check_conflicts(&electrodes)?;

    let aperture_rule = match spec.aperture_rule() {
        ApertureRule::Full2w => "full_2w",
        ApertureRule::ApodizedConstW0 => "apodized_const_w0",
        ApertureRule::Custom(_) => "custom",
    };
    Ok(ElectrodeSet {
        electrodes,
        metadata: LayoutMetadata {
            wavelength: lambda,
            waist: beam.waist(),
            pitch,
            electrode_width: width,
            electrode_gap: gap,
            aperture_rule,
            idt_pairs: spec.idt_pairs(),
            mirror_fingers: spec.mirror_fingers(),
            samples_per_edge: options.samples_per_edge,
            physical_gap: 2.0 * first_edge,
        },
    })
}

fn boxes_overlap(a: &(Point, Point), b: &(Point, Point)) -> bool {
    a.0[0] < b.1[0] && b.0[0] < a.1[0] && a.0[1] < b.1[1] && b.0[1] < a.1[1]
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Even-odd point-in-polygon test.
pub fn contains_point(polygon: &[Point], p: Point) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for i in 0..n {
        let [xi, yi] = polygon[i];
        let [xj, yj] = polygon[(i + n - 1) % n];
        if (yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi {
            inside = !inside;
        }
    }
    inside
}

/// True when two simple polygons share interior points.
pub fn polygons_overlap(a: &[Point], b: &[Point]) -> bool {
    let (na, nb) = (a.len(), b.len());
    for i in 0..na {
        for j in 0..nb {
            if segments_cross(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]) {
                return true;
            }
        }
    }
    a.iter().any(|p| contains_point(b, *p))
        || b.iter().any(|p| contains_point(a, *p))
        || contains_point(b, centroid(a))
        || contains_point(a, centroid(b))
}

fn centroid(polygon: &[Point]) -> Point {
    let n = polygon.len() as f64;
    let (sx, sy) = polygon.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
    [sx / n, sy / n]
}

/// True when any two non-adjacent edges of the polygon cross.
pub fn is_self_intersecting(polygon: &[Point]) -> bool {
    let n = polygon.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

fn check_conflicts(electrodes: &[Electrode]) -> Result<()> {
    let bounds: Vec<_> = electrodes.iter().map(Electrode::bounds).collect();
    for i in 0..electrodes.len() {
        for j in i + 1..electrodes.len() {
            if electrodes[i].kind == electrodes[j].kind || !boxes_overlap(&bounds[i], &bounds[j]) {
                continue;
            }
            if polygons_overlap(&electrodes[i].vertices, &electrodes[j].vertices) {
                return Err(Error::Geometry(format!(
                    "{} overlaps {}",
                    electrodes[i].label(),
                    electrodes[j].label()
                )));
            }
        }
    }
    Ok(())
}
