//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

/// `j_l(x)` by its power series for `x < 10` and by the finite trigonometric
/// (Rayleigh) expansion otherwise.
pub fn bessel_j(l: usize, x: f64) -> f64 {
    if x < 10.0 {
        bessel_j_series(l, x)
    } else {
        bessel_j_trig(l, x)
    }
}

fn bessel_j_series(l: usize, x: f64) -> f64 {
    // j_l(x) = x^l Σ_n (−x²/2)^n / (n! (2l+2n+1)!!)
    let mut lead = 1.0;
    for n in 0..=l {
        lead *= x / (2 * n + 1) as f64;
    }
    lead /= x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..200 {
        term *= -x * x / (2.0 * n as f64 * (2 * l + 2 * n + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn bessel_j_trig(l: usize, x: f64) -> f64 {
    let factorial = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let mut p = 0.0;
    let mut q = 0.0;
    for k in 0..=l / 2 {
        let c = factorial(l + 2 * k) / (factorial(2 * k) * factorial(l - 2 * k));
        p += if k % 2 == 0 { c } else { -c } * (2.0 * x).powi(-(2 * k as i32));
    }
    if l >= 1 {
        for k in 0..=(l - 1) / 2 {
            let c = factorial(l + 2 * k + 1) / (factorial(2 * k + 1) * factorial(l - 2 * k - 1));
            q += if k % 2 == 0 { c } else { -c } * (2.0 * x).powi(-(2 * k as i32 + 1));
        }
    }
    let a = x - l as f64 * FRAC_PI_2;
    (p * a.sin() + q * a.cos()) / x
}

/// `P_l(x)` from its explicit monomial expansion
/// `2^{−l} Σ_k (−1)^k C(l,k) C(2l−2k,l) x^{l−2k}`, evaluated by Horner's rule.
pub fn legendre_explicit(l: usize, x: f64) -> f64 {
    let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) };
    let mut coeffs = vec![0.0; l + 1];
    for k in 0..=l / 2 {
        let c = (binom(l as u64, k as u64) * binom((2 * l - 2 * k) as u64, l as u64)) as f64
            / 2f64.powi(l as i32);
        coeffs[l - 2 * k] = if k % 2 == 0 { c } else { -c };
    }
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            (lo.ln() + t * (hi.ln() - lo.ln())).exp()
        })
        .collect()
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn minscat() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_minscat"))
}

/// Golden cases: (config file, command, expected output file).
pub const GOLDEN_CASES: &[(&str, &str, &str)] = &[
    (
        "coulomb_spot.conf",
        "dispersion",
        "coulomb_spot.dispersion.csv",
    ),
    ("coulomb_spot.conf", "dcs", "coulomb_spot.dcs.csv"),
    (
        "coulomb_limit.conf",
        "dispersion",
        "coulomb_limit.dispersion.csv",
    ),
    ("coulomb_limit.conf", "dcs", "coulomb_limit.dcs.csv"),
    (
        "yukawa_swave.conf",
        "dispersion",
        "yukawa_swave.dispersion.csv",
    ),
    ("yukawa_swave.conf", "dcs", "yukawa_swave.dcs.csv"),
    ("yukawa_swave.conf", "phases", "yukawa_swave.phases.csv"),
    ("yukawa_swave.conf", "sigma", "yukawa_swave.sigma.csv"),
    (
        "yukawa_deformed.conf",
        "phases",
        "yukawa_deformed.phases.json",
    ),
    (
        "yukawa_deformed.conf",
        "sigma",
        "yukawa_deformed.sigma.json",
    ),
];

/// Runs one golden case; returns (expected, actual).
pub fn run_golden(config: &str, command: &str, expected: &str) -> (String, String) {
    let dir = golden_dir();
    let output = minscat()
        .arg(command)
        .arg("--config")
        .arg(dir.join(config))
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "{command} {config}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let actual = String::from_utf8(output.stdout).unwrap();
    let expected = std::fs::read_to_string(dir.join(expected)).unwrap_or_default();
    (expected, actual)
}
