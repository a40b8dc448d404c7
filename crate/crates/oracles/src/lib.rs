//! Independent reference computations for checking `sawfocus-core`:
//! fixed Gauss-Legendre quadrature, explicit-sum Hermite functions, finite
//! differences and frozen high-precision efficiency tables. The crate does
//! not depend on the code it checks.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

/// `n`-point Gauss-Legendre nodes and weights on `[-1, 1]` by Newton
/// iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed `n`-point Gauss-Legendre integral over `[a, b]`.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>() * half
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Physicists' Hermite polynomial from the explicit sum.
pub fn hermite_explicit(l: u32, t: f64) -> f64 {
    let nf = factorial(l);
    (0..=l / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * (2.0 * t).powi((l - 2 * m) as i32) / (factorial(m) * factorial(l - 2 * m))
        })
        .sum::<f64>()
        * nf
}

/// Orthonormal Hermite function built from [`hermite_explicit`].
pub fn hermite_function_explicit(l: u32, t: f64) -> f64 {
    hermite_explicit(l, t) * (-0.5 * t * t).exp() / (2f64.powi(l as i32) * factorial(l) * PI.sqrt()).sqrt()
}

/// `E_l(L) = η I_l² / (2T)` with `T = sqrt(2) L / w0` from 256-node
/// Gauss-Legendre, split at the origin.
pub fn efficiency_oracle(l: u32, half_aperture: f64, waist: f64, eta: f64) -> f64 {
    let t = 2f64.sqrt() * half_aperture / waist;
    let f = |s: f64| hermite_function_explicit(l, s);
    let i = gl_integrate(f, -t, 0.0, 256) + gl_integrate(f, 0.0, t, 256);
    eta * i * i / (2.0 * t)
}

/// Fourth-order central difference.
pub fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// `E_l(L=w0)/E_0` and `E_l(L=2w0)/E_0` for even `l = 0..=16`, evaluated to
/// 40 significant digits with arbitrary-precision quadrature.
pub const LADDER_W0: [f64; 9] = [
    1.0,
    0.000_109_762_961_376_467_909_62,
    0.036_874_214_876_922_673_82,
    0.024_070_008_988_263_938_958,
    0.004_335_865_756_810_169_026_6,
    0.000_177_870_549_460_324_228_69,
    0.003_899_947_070_758_457_565_5,
    0.006_500_576_742_822_030_836_8,
    0.005_600_014_365_752_552_622_4,
];

/// See [`LADDER_W0`].
pub const LADDER_2W0: [f64; 9] = [
    1.0,
    0.420_392_730_054_231_938_34,
    0.116_356_838_050_317_543_93,
    0.001_036_280_189_164_945_157,
    0.023_144_562_888_709_270_786,
    0.002_123_106_286_625_287_133_4,
    0.005_625_383_408_665_398_385_2,
    0.006_222_076_320_227_373_851,
    0.000_062_357_447_780_473_582_349,
];

/// `E_0` at `η = 1` for `L = w0` and `L = 2w0`.
pub const E0_W0: f64 = 0.890_034_299_853_478_183_79;
/// See [`E0_W0`].
pub const E0_2W0: f64 = 0.620_808_109_286_892_162_94;
