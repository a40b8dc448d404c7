//! Exit criteria. Each criterion prints one `PASS`/`FAIL` line; the process
//! exits non-zero when any fails.

use std::f64::consts::{FRAC_2_PI, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use sawfocus_core::beam::BeamParams;
use sawfocus_core::imaging::{fit_waist, ScanImage};
use sawfocus_core::layout::{generate_device, Electrode, ElectrodeKind, LayoutOptions};
use sawfocus_core::material::{reference, AnisotropyProfile, IsotropicProfile};
use sawfocus_core::resonator::{
    diffraction_q, resonance_frequency, round_trip_phase_solve, synthesize_s21, thickness_shift,
    transverse_splitting, ApertureRule, ModeId, ResonanceSet, ResonatorSpec,
};
use sawfocus_core::transducer::conversion_efficiency;

const LAMBDA: f64 = 2e-6;
const D: f64 = 33.6e-6;
const PITCH: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spec() -> ResonatorSpec {
    ResonatorSpec::new(D, PITCH, 5, 200, ApertureRule::Full2w).unwrap()
}

fn waists(step: f64) -> Vec<f64> {
    let n = ((10e-6 - 2e-6) / step).round() as usize;
    (0..=n).map(|i| 2e-6 + i as f64 * step).collect()
}

fn closed_form_vs_round_trip() -> Outcome {
    let start = Instant::now();
    let vp = 4300.0;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for w0 in waists(0.5e-6) {
        let beam = BeamParams::new(LAMBDA, w0).unwrap();
        for n in 50..=100 {
            for l in [0, 1, 2, 4, 8, 12] {
                let mode = ModeId::new(n, l).unwrap();
                let closed = resonance_frequency(&spec(), &beam, vp, mode);
                let solved = round_trip_phase_solve(&spec(), &beam, vp, mode).unwrap();
                worst = worst.max((closed - solved).abs() / solved);
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && elapsed < 10.0,
        format!("{count} modes, max rel diff {worst:.3e} (<= 1e-9), {elapsed:.3} s (< 10 s)"),
    )
}

fn splitting_is_n_independent() -> Outcome {
    let vp = 4420.0;
    let mut worst: f64 = 0.0;
    for w0 in waists(0.5e-6) {
        let beam = BeamParams::new(LAMBDA, w0).unwrap();
        for l in [1, 2, 4, 8, 12] {
            let split = |n| {
                resonance_frequency(&spec(), &beam, vp, ModeId::new(n, l).unwrap())
                    - resonance_frequency(&spec(), &beam, vp, ModeId::new(n, 0).unwrap())
            };
            let base = split(50);
            for n in 51..=100 {
                worst = worst.max((split(n) - base).abs() / base);
            }
        }
    }
    outcome(worst <= 1e-12, format!("max |df(n) - df(50)|/df(50) = {worst:.3e} (<= 1e-12)"))
}

fn splitting_overlay() -> Outcome {
    let vp = 4420.0;
    let ls = [2u32, 4, 8, 12];
    let grid = waists(0.01e-6);
    let mut decreasing = true;
    let mut increasing = true;
    let mut identical = true;
    let mut previous: Option<Vec<f64>> = None;
    for &w0 in &grid {
        let beam = BeamParams::new(LAMBDA, w0).unwrap();
        let row: Vec<f64> = ls.iter().map(|&l| transverse_splitting(&spec(), &beam, vp, l)).collect();
        for (&l, &v) in ls.iter().zip(&row) {
            let direct = vp / (2.0 * D) * (FRAC_2_PI * l as f64) * libm::atan(D / (2.0 * (PI * w0 * w0 / LAMBDA)));
            identical &= v == direct;
        }
        increasing &= row.windows(2).all(|p| p[1] > p[0]);
        if let Some(prev) = &previous {
            decreasing &= row.iter().zip(prev).all(|(now, before)| now < before);
        }
        previous = Some(row);
    }
    outcome(
        decreasing && increasing && identical,
        format!(
            "{} waists: decreasing in w0 {decreasing}, increasing in l {increasing}, identity {identical}",
            grid.len()
        ),
    )
}

fn parity_law() -> Outcome {
    let beam = BeamParams::new(LAMBDA, 2e-6).unwrap();
    let mut worst: f64 = 0.0;
    for factor in [0.5, 1.0, 2.0, 4.0] {
        for l in (1..=15).step_by(2) {
            let e = conversion_efficiency(&beam, l, factor * beam.waist(), 1.0).unwrap();
            worst = worst.max(e.abs());
        }
    }
    outcome(worst < 1e-12, format!("max |E_odd| = {worst:.3e} (< 1e-12)"))
}

fn apodization_suppression() -> Outcome {
    let w0 = 2e-6;
    let beam = BeamParams::new(LAMBDA, w0).unwrap();
    let mut agree = true;
    let mut worst: f64 = 0.0;
    let mut ratio = |half: f64| {
        let e0 = conversion_efficiency(&beam, 0, half, 1.0).unwrap();
        let e2 = conversion_efficiency(&beam, 2, half, 1.0).unwrap();
        for (l, e) in [(0, e0), (2, e2)] {
            let oracle = sawfocus_oracles::efficiency_oracle(l, half, w0, 1.0);
            let rel = (e - oracle).abs() / oracle;
            worst = worst.max(rel);
            agree &= rel <= 1e-10;
        }
        e2 / e0
    };
    let apodized = ratio(w0);
    let full = ratio(2.0 * w0);
    let suppressed = apodized <= 0.1 * full;
    let comparable = (0.8..=1.2).contains(&full);
    outcome(
        agree && suppressed && comparable,
        format!(
            "E2/E0: {apodized:.5e} at L=w0, {full:.5} at L=2w0; suppression {suppressed}, \
             L=2w0 ratio in [0.8, 1.2] {comparable}, oracle agreement {worst:.2e} (<= 1e-10)"
        ),
    )
}

fn diffraction_limited_q() -> Outcome {
    let q = diffraction_q(-0.45, 4e-6, LAMBDA).unwrap();
    let expected = 5.0 * PI / 0.55 * 4.0;
    let rel = (q - expected).abs() / expected;
    let iso = diffraction_q(0.0, LAMBDA, LAMBDA).unwrap();
    outcome(
        rel <= 1e-6 && iso == 5.0 * PI,
        format!("Q_d = {q:.4} (rel {rel:.1e} <= 1e-6), isotropic W=lambda {iso} == 5pi"),
    )
}

fn hermite_gauss_orthogonality() -> Outcome {
    let beam = BeamParams::new(LAMBDA, 2e-6).unwrap();
    let profile: AnisotropyProfile = IsotropicProfile::new(4420.0).unwrap().into();
    let mut worst: f64 = 0.0;
    for x in [0.0, beam.rayleigh_length()] {
        let span = 12.0 * beam.beam_radius(x);
        let field = |l: u32, y: f64| beam.displacement(&profile, l, x, y).unwrap();
        let integrate = |f: &dyn Fn(f64) -> Complex64| {
            let panels = 8;
            let h = 2.0 * span / panels as f64;
            (0..panels)
                .map(|p| {
                    let a = -span + p as f64 * h;
                    let re = sawfocus_oracles::gl_integrate(|y| f(y).re, a, a + h, 256);
                    let im = sawfocus_oracles::gl_integrate(|y| f(y).im, a, a + h, 256);
                    Complex64::new(re, im)
                })
                .sum::<Complex64>()
        };
        let norms: Vec<f64> = (0..=6).map(|l| integrate(&|y| Complex64::from(field(l, y).norm_sqr())).re.sqrt()).collect();
        for l in 0..=6u32 {
            for m in 0..=6u32 {
                if l != m {
                    let overlap = integrate(&|y| field(l, y) * field(m, y).conj());
                    worst = worst.max(overlap.norm() / (norms[l as usize] * norms[m as usize]));
                }
            }
        }
    }
    outcome(worst < 1e-8, format!("max normalized cross overlap {worst:.3e} (< 1e-8) at x = 0, x_R"))
}

/// Detector floor under the synthetic signal; keeps noisy amplitudes
/// non-negative.
const FLOOR: f64 = 1.0;

fn synthetic_column(beam: &BeamParams, y: &[f64]) -> Vec<f64> {
    y.iter().map(|&v| beam.envelope(0, 0.0, v).abs() + FLOOR).collect()
}

fn waist_fit_recovery() -> Outcome {
    let start = Instant::now();
    let w0 = 2e-6;
    let beam = BeamParams::new(LAMBDA, w0).unwrap();
    let y: Vec<f64> = (0..=80).map(|i| -10e-6 + 0.25e-6 * i as f64).collect();
    let scan = |amp: Vec<f64>| ScanImage::new(vec![0.0], y.clone(), amp, vec![0.0; y.len()], None).unwrap();

    let clean = fit_waist(&scan(synthetic_column(&beam, &y)), 0.0).unwrap();
    let clean_rel = (clean.w0_est - w0).abs() / w0;

    let noise = Normal::new(0.0, 0.1).unwrap();
    let mut estimates = Vec::new();
    let mut errors = Vec::new();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amp: Vec<f64> = synthetic_column(&beam, &y)
            .into_iter()
            .map(|a| (a + noise.sample(&mut rng)).max(0.0))
            .collect();
        let fit = fit_waist(&scan(amp), 0.0).unwrap();
        estimates.push(fit.w0_est);
        errors.push(fit.w0_err);
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let std = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mean_err = errors.iter().sum::<f64>() / n;
    let mean_rel = (mean - w0).abs() / w0;
    // 1.9 +/- 0.1 um: the fit must deliver that precision and its interval
    // must reach the band.
    let band = mean_err <= 0.1e-6 && mean - mean_err <= 2.0e-6 && mean + mean_err >= 1.8e-6;
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        clean_rel < 1e-3 && mean_rel < 0.05 && band && elapsed < 30.0,
        format!(
            "noiseless rel {clean_rel:.2e} (< 1e-3); SNR 10: mean {:.4} um (rel {mean_rel:.3} < 0.05), \
             spread {:.4} um, mean 1-sigma {:.4} um, band 1.9 +/- 0.1 um reachable {band}; {elapsed:.2} s",
            mean * 1e6,
            std * 1e6,
            mean_err * 1e6
        ),
    )
}

fn axis(e: &Electrode) -> (f64, f64) {
    e.axis_crossings().expect("electrode crosses the axis")
}

fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let directed = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        p.iter()
            .map(|u| q.iter().map(|v| (u[0] - v[0]).hypot(u[1] - v[1])).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

fn demo_device_layout() -> Outcome {
    let tol = 1e-9;
    let beam = BeamParams::new(LAMBDA, 2e-6).unwrap();
    let profile = reference::love().unwrap();
    let set = generate_device(&spec(), &beam, &profile, &LayoutOptions::default()).unwrap();
    let mut problems = Vec::new();

    let fingers1 = set.count(ElectrodeKind::IdtFingerPort1);
    let fingers2 = set.count(ElectrodeKind::IdtFingerPort2);
    let strips = set.count(ElectrodeKind::MirrorStrip);
    if fingers1 != 10 || fingers2 != 10 || strips != 400 {
        problems.push(format!("counts {fingers1}/{fingers2}/{strips}"));
    }

    let mut max_dev: f64 = 0.0;
    let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
    for kind in [ElectrodeKind::IdtFingerPort2, ElectrodeKind::MirrorStrip] {
        let mut spans: Vec<(f64, f64)> = set.of_kind(kind).map(axis).filter(|s| s.0 > 0.0).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        segments.push(spans);
    }
    for spans in &segments {
        for s in spans {
            max_dev = max_dev.max((s.1 - s.0 - 0.5e-6).abs());
        }
        for w in spans.windows(2) {
            max_dev = max_dev.max((w[1].0 - w[0].1 - 0.5e-6).abs());
            max_dev = max_dev.max((0.5 * (w[1].0 + w[1].1) - 0.5 * (w[0].0 + w[0].1) - PITCH).abs());
        }
    }
    if max_dev > tol {
        problems.push(format!("width/gap/pitch deviation {max_dev:.2e} m"));
    }

    let last_finger = segments[0].last().unwrap();
    let first_strip = segments[1].first().unwrap();
    let offset = first_strip.0 - 0.5 * (last_finger.0 + last_finger.1);
    let quarters = offset / (0.25 * LAMBDA);
    let odd = (2.0 * ((quarters - 1.0) / 2.0).round() + 1.0).max(1.0);
    let offset_dev = (offset - odd * 0.25 * LAMBDA).abs();
    if offset_dev > tol {
        problems.push(format!("antinode/node offset {offset:.4e} m"));
    }

    let mut sym: f64 = 0.0;
    for e in &set.electrodes {
        let reflected: Vec<[f64; 2]> = e.vertices.iter().map(|v| [v[0], -v[1]]).collect();
        sym = sym.max(hausdorff(&reflected, &e.vertices));
    }
    if sym > tol {
        problems.push(format!("x-axis symmetry {sym:.2e} m"));
    }
    outcome(
        problems.is_empty(),
        format!(
            "fingers {fingers1}+{fingers2}, strips {strips}; width/gap/pitch dev {max_dev:.1e} m; \
             offset {:.4} quarter-waves (dev {offset_dev:.1e} m); symmetry {sym:.1e} m{}",
            quarters,
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join(", ")) }
        ),
    )
}

fn thickness_sensitivity() -> Outcome {
    let slope = -0.45e6 / 1e-9;
    let shift = thickness_shift(slope, 20e-9);
    outcome(shift == -9e6, format!("-0.45 MHz/nm x 20 nm = {shift} Hz (== -9e6)"))
}

fn device_resonances(half_aperture: f64) -> ResonanceSet {
    let w0 = 2e-6;
    let beam = BeamParams::new(LAMBDA, w0).unwrap();
    let e0 = conversion_efficiency(&beam, 0, half_aperture, 1.0).unwrap();
    let modes: Vec<ModeId> = (33..=34)
        .flat_map(|n| (0..=12).map(move |l| ModeId::new(n, l).unwrap()))
        .collect();
    ResonanceSet::for_modes(&spec(), &beam, reference::LOVE_VP0, &modes, 3000.0, [3000.0, 3000.0], |l| {
        conversion_efficiency(&beam, l, half_aperture, 1.0).unwrap() / e0
    })
    .unwrap()
}

fn spectrum_structure() -> Outcome {
    let w0 = 2e-6;
    let full = device_resonances(2.0 * w0);
    let apodized = device_resonances(w0);

    let level = |set: &ResonanceSet, f: f64| synthesize_s21(set, &[f])[0].norm();
    let fundamental_peak = |set: &ResonanceSet| {
        set.entries()
            .iter()
            .filter(|r| r.mode.l() == 0)
            .map(|r| level(set, r.frequency))
            .fold(0.0, f64::max)
    };

    let apo_ref = fundamental_peak(&apodized);
    let mut worst_db = f64::NEG_INFINITY;
    let mut worst_mode = (0, 0);
    for r in apodized.entries().iter().filter(|r| r.mode.l() > 0) {
        let db = 20.0 * (level(&apodized, r.frequency) / apo_ref).log10();
        if db > worst_db {
            worst_db = db;
            worst_mode = (r.mode.n(), r.mode.l());
        }
    }
    let suppressed = worst_db <= -30.0;

    let full_ref = fundamental_peak(&full);
    let mut ladder = true;
    let mut ladder_levels = Vec::new();
    for r in full.entries().iter().filter(|r| [2, 4, 8, 12].contains(&r.mode.l())) {
        let linewidth = r.frequency / 3000.0 * 3.0;
        let peak = level(&full, r.frequency);
        let shoulders = level(&full, r.frequency - 3.0 * linewidth).max(level(&full, r.frequency + 3.0 * linewidth));
        let db = 20.0 * (peak / full_ref).log10();
        ladder &= peak > 2.0 * shoulders;
        ladder_levels.push(format!("({},{}) {db:.1} dB", r.mode.n(), r.mode.l()));
    }

    let lo = full.entries().first().unwrap().frequency - 200e6;
    let hi = full.entries().last().unwrap().frequency + 200e6;
    let steps = 20_000;
    let mut grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    grid.extend(full.entries().iter().map(|r| r.frequency));
    let peak_mag = synthesize_s21(&full, &grid)
        .into_iter()
        .chain(synthesize_s21(&apodized, &grid))
        .map(|s| s.norm())
        .fold(0.0, f64::max);
    let passive = peak_mag <= 1.0;

    outcome(
        suppressed && ladder && passive,
        format!(
            "apodized worst transverse peak {worst_db:.2} dB at (n,l)={worst_mode:?} (<= -30 dB) {suppressed}; \
             full-aperture ladder {ladder} [{}]; max |S21| {peak_mag:.4} (<= 1) {passive}",
            ladder_levels.join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("closed-form resonance vs round-trip phase solver", closed_form_vs_round_trip),
        ("transverse splitting independent of n", splitting_is_n_independent),
        ("splitting curves monotone and identical to direct evaluation", splitting_overlay),
        ("odd transverse modes do not couple", parity_law),
        ("apodization suppresses l=2 coupling", apodization_suppression),
        ("diffraction-limited Q", diffraction_limited_q),
        ("Hermite-Gauss orthogonality", hermite_gauss_orthogonality),
        ("waist fit recovery", waist_fit_recovery),
        ("device layout geometry", demo_device_layout),
        ("film thickness sensitivity", thickness_sensitivity),
        ("transmission spectrum structure", spectrum_structure),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
