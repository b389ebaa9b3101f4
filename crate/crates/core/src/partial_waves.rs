//! Partial-wave analysis.
//!
//! For a central potential each orbital quantum number `l` scatters
//! independently. The amplitude and the total cross-section take their
//! ordinary forms,
//!
//! ```text
//! f(θ) = (i/2k) Σ (2l+1)(1 − e^{2iδ_l}) P_l(cos θ)
//! σ    = (4π/k²) Σ (2l+1) sin²δ_l = (4π/k) Im f(0)
//! ```
//!
//! while the deformation enters through `k` and the phase shifts. At first
//! order the phase shift is
//!
//! ```text
//! sin δ_l = −1/(k(1 + 2β′ℏ²k²)) ∫₀^∞ u_l(kr)² · 2mU(r)/ℏ² dr
//! ```
//!
//! where `u_l` is the free radial solution `χ_kl = r R_kl` up to
//! normalization. [`PhaseKernel`] selects between the Riccati–Bessel function
//! `kr j_l(kr)` and its large-distance form `sin(kr − lπ/2)`. The two agree
//! for `l = 0`; for `l ≥ 1` only the Riccati–Bessel kernel stays finite at
//! the origin for Coulomb-like singularities and falls off with `l`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{require_positive, Result, ScatterError};
use crate::physical_context::{green_prefactor, DeformationParams, PhysicalContext};
use crate::potentials::{PotentialKind, RadialPotential};
use crate::quadrature::{
    integrate_angular, integrate_compact_oscillatory, integrate_radial_oscillatory_from,
    DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
use crate::special::{legendre_table, riccati_j, riccati_jy, spherical_jn};

pub use crate::special::legendre_polynomial;

/// Hard cap for [`select_lmax`].
pub const LMAX_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    Born,
    SelfConsistent,
}

impl fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMethod::Born => "born",
            PhaseMethod::SelfConsistent => "self_consistent",
        })
    }
}

/// Free radial function used inside the phase-shift integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseKernel {
    /// `kr j_l(kr)`.
    #[default]
    RiccatiBessel,
    /// `sin(kr − lπ/2)`.
    AsymptoticSine,
}

impl fmt::Display for PhaseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseKernel::RiccatiBessel => "riccati",
            PhaseKernel::AsymptoticSine => "asymptotic-sine",
        })
    }
}

impl FromStr for PhaseKernel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "riccati" => Ok(PhaseKernel::RiccatiBessel),
            "asymptotic-sine" => Ok(PhaseKernel::AsymptoticSine),
            other => Err(format!(
                "expected riccati or asymptotic-sine, got {other:?}"
            )),
        }
    }
}

impl PhaseKernel {
    /// Regular kernel `u_l(x)`.
    fn regular(self, l: usize, x: f64) -> f64 {
        match self {
            PhaseKernel::RiccatiBessel => riccati_j(l, x),
            PhaseKernel::AsymptoticSine => (x - l as f64 * FRAC_PI_2).sin(),
        }
    }

    /// `u_l(x) · v_l(x)` with `v_l` the companion tending to `cos(x − lπ/2)`,
    /// so that `u cos δ + v sin δ → sin(x − lπ/2 + δ)`.
    fn cross(self, l: usize, x: f64) -> f64 {
        match self {
            PhaseKernel::RiccatiBessel => -riccati_jy(l, x),
            PhaseKernel::AsymptoticSine => {
                let a = x - l as f64 * FRAC_PI_2;
                a.sin() * a.cos()
            }
        }
    }
}

/// Phase shifts `δ_0 … δ_lmax` at one wave number.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftSet {
    k: f64,
    deltas: Vec<f64>,
    method: PhaseMethod,
}

impl PhaseShiftSet {
    pub fn new(k: f64, deltas: Vec<f64>, method: PhaseMethod) -> Result<Self> {
        let k = require_positive("k", k)?;
        if deltas.is_empty() {
            return Err(ScatterError::Domain(
                "phase shift set needs at least l = 0".into(),
            ));
        }
        if let Some(&bad) = deltas.iter().find(|d| !d.is_finite()) {
            return Err(ScatterError::InvalidParameter {
                name: "delta",
                value: bad,
                reason: "phase shifts must be finite",
            });
        }
        Ok(Self { k, deltas, method })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn l_max(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn method(&self) -> PhaseMethod {
        self.method
    }

    /// `|sin δ_lmax| < tail_tol`.
    pub fn tail_converged(&self, tail_tol: f64) -> bool {
        self.deltas[self.l_max()].sin().abs() < tail_tol
    }
}

/// One value of the free radial function `R_kl(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWaveSample {
    pub l: usize,
    pub k: f64,
    pub r: f64,
    pub value: f64,
}

/// Regular free radial solution normalized as `√(2/π) k j_l(kr)`, which
/// behaves as `√(2/π) sin(kr − lπ/2)/r` at large `r`.
pub fn free_radial_wave(l: usize, k: f64, r: f64) -> Result<RadialWaveSample> {
    let k = require_positive("k", k)?;
    let r = require_positive("r", r)?;
    Ok(RadialWaveSample {
        l,
        k,
        r,
        value: (2.0 / PI).sqrt() * k * spherical_jn(l, k * r),
    })
}

/// `∫₀^∞ g(r) U_red(r) dr` over the range of `pot`.
fn radial_potential_integral<G: Fn(f64) -> f64>(
    kernel: G,
    l: usize,
    k: f64,
    pot: &RadialPotential,
    ctx: &PhysicalContext,
) -> Result<f64> {
    let scale = ctx.reduction_factor();
    let integrand = |r: f64| kernel(r) * scale * pot.value_at(r);
    let onset = (l as f64 + 1.0) / k;
    let result = match pot.kind() {
        PotentialKind::Coulomb => {
            return Err(ScatterError::Domain(
                "partial-wave integrals need a screened potential; Coulomb diverges".into(),
            ))
        }
        PotentialKind::Yukawa { lambda } => integrate_radial_oscillatory_from(
            integrand,
            k,
            1.0 / lambda,
            onset,
            DEFAULT_REL_TOL,
            DEFAULT_ABS_TOL,
        )?,
        PotentialKind::Custom { range, .. } => {
            integrate_compact_oscillatory(integrand, k, *range, DEFAULT_REL_TOL, DEFAULT_ABS_TOL)?
        }
    };
    Ok(result.value)
}

/// `1/(k(1 + 2β′ℏ²k²))`.
fn phase_prefactor(k: f64, params: &DeformationParams, ctx: &PhysicalContext) -> f64 {
    green_prefactor(k, params, ctx) / k
}

/// First-order `sin δ_l` before any range check.
pub fn born_sin_delta(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    kernel: PhaseKernel,
) -> Result<f64> {
    let k = require_positive("k", k)?;
    let integral = radial_potential_integral(|r| kernel.regular(l, k * r).powi(2), l, k, pot, ctx)?;
    Ok(-phase_prefactor(k, params, ctx) * integral)
}

fn checked_arcsin(l: usize, sin_delta: f64) -> Result<f64> {
    if sin_delta.abs() > 1.0 {
        Err(ScatterError::BornValidityExceeded { l, sin_delta })
    } else {
        Ok(sin_delta.asin())
    }
}

/// First-Born phase shift with the default Riccati–Bessel kernel, in
/// `[−π/2, π/2]`.
pub fn born_phase_shift(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<f64> {
    born_phase_shift_with(l, k, pot, params, ctx, PhaseKernel::default())
}

pub fn born_phase_shift_with(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    kernel: PhaseKernel,
) -> Result<f64> {
    checked_arcsin(l, born_sin_delta(l, k, pot, params, ctx, kernel)?)
}

/// Born phase shift under both kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpread {
    pub riccati: f64,
    /// `Err` when the asymptotic kernel's integral does not exist.
    pub asymptotic: Result<f64>,
}

impl KernelSpread {
    pub fn spread(&self) -> Option<f64> {
        self.asymptotic
            .as_ref()
            .ok()
            .map(|a| (a - self.riccati).abs())
    }
}

/// Diagnostic comparing the two phase-shift kernels for one partial wave.
pub fn kernel_spread(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<KernelSpread> {
    Ok(KernelSpread {
        riccati: born_phase_shift_with(l, k, pot, params, ctx, PhaseKernel::RiccatiBessel)?,
        asymptotic: born_phase_shift_with(l, k, pot, params, ctx, PhaseKernel::AsymptoticSine),
    })
}

/// Self-consistent phase shift with the default kernel.
pub fn self_consistent_phase_shift(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    max_iter: usize,
    tol: f64,
) -> Result<f64> {
    self_consistent_phase_shift_with(
        l,
        k,
        pot,
        params,
        ctx,
        max_iter,
        tol,
        PhaseKernel::default(),
    )
}

/// Solves
///
/// ```text
/// sin δ = −1/(k(1 + 2β′ℏ²k²)) ∫₀^∞ u_l(kr) U_red(r) [u_l(kr) cos δ + v_l(kr) sin δ] dr
/// ```
///
/// by fixed-point iteration seeded with the Born phase. The two radial
/// integrals do not depend on δ and are computed once. Successive iterates
/// are averaged once the iteration starts to oscillate.
#[allow(clippy::too_many_arguments)]
pub fn self_consistent_phase_shift_with(
    l: usize,
    k: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    max_iter: usize,
    tol: f64,
    kernel: PhaseKernel,
) -> Result<f64> {
    let k = require_positive("k", k)?;
    let tol = require_positive("tol", tol)?;
    let pref = phase_prefactor(k, params, ctx);
    let direct = radial_potential_integral(|r| kernel.regular(l, k * r).powi(2), l, k, pot, ctx)?;
    let cross = radial_potential_integral(|r| kernel.cross(l, k * r), l, k, pot, ctx)?;
    let update =
        |delta: f64| checked_arcsin(l, -pref * (direct * delta.cos() + cross * delta.sin()));

    let mut delta = checked_arcsin(l, -pref * direct)?;
    let mut last_step = 0.0;
    let mut damped = false;
    for _ in 0..max_iter {
        let mut next = update(delta)?;
        let step = next - delta;
        if step * last_step < 0.0 {
            damped = true;
        }
        if damped {
            next = 0.5 * (delta + next);
        }
        if (next - delta).abs() < tol {
            return Ok(next);
        }
        last_step = step;
        delta = next;
    }
    Err(ScatterError::FixedPointNotConverged {
        l,
        previous: delta - last_step,
        last: delta,
    })
}

/// `|sin δ + 1/(k(1 + 2β′ℏ²k²)) ∫ u_l U_red [u_l cos δ + v_l sin δ] dr|`,
/// evaluated with a single quadrature of the full integrand.
#[allow(clippy::too_many_arguments)]
pub fn self_consistent_residual(
    l: usize,
    k: f64,
    delta: f64,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    kernel: PhaseKernel,
) -> Result<f64> {
    let k = require_positive("k", k)?;
    let (s, c) = delta.sin_cos();
    let integral = radial_potential_integral(
        |r| {
            let x = k * r;
            match kernel {
                PhaseKernel::AsymptoticSine => {
                    let a = x - l as f64 * FRAC_PI_2;
                    a.sin() * (a + delta).sin()
                }
                PhaseKernel::RiccatiBessel => {
                    kernel.regular(l, x).powi(2) * c + kernel.cross(l, x) * s
                }
            }
        },
        l,
        k,
        pot,
        ctx,
    )?;
    Ok((s + phase_prefactor(k, params, ctx) * integral).abs())
}

/// `(1 − e^{2iδ})` written as `2 sin²δ − i sin 2δ`, free of cancellation for
/// small δ.
fn one_minus_s_matrix(delta: f64) -> Complex64 {
    let (s, c) = delta.sin_cos();
    Complex64::new(2.0 * s * s, -2.0 * s * c)
}

/// `f(θ) = (i/2k) Σ (2l+1)(1 − e^{2iδ_l}) P_l(cos θ)`, θ ∈ [0, π].
pub fn partial_amplitude(phases: &PhaseShiftSet, theta: f64) -> Result<Complex64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(ScatterError::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "angle must lie in [0, pi]",
        });
    }
    let legendre = legendre_table(phases.l_max(), theta.cos().clamp(-1.0, 1.0));
    let sum: Complex64 = phases
        .deltas
        .iter()
        .zip(&legendre)
        .enumerate()
        .map(|(l, (&delta, &p))| (2 * l + 1) as f64 * p * one_minus_s_matrix(delta))
        .sum();
    Ok(Complex64::i() / (2.0 * phases.k) * sum)
}

/// `σ = (4π/k²) Σ (2l+1) sin²δ_l`.
pub fn total_cross_section(phases: &PhaseShiftSet) -> f64 {
    let sum: f64 = phases
        .deltas
        .iter()
        .enumerate()
        .map(|(l, d)| (2 * l + 1) as f64 * d.sin().powi(2))
        .sum();
    4.0 * PI / (phases.k * phases.k) * sum
}

/// `∫ |f(θ)|² dΩ` by Gauss–Legendre quadrature in `cos θ`, exact for the
/// degree-`2 l_max` polynomial `|f|²`.
pub fn total_cross_section_angular(phases: &PhaseShiftSet) -> Result<f64> {
    let n_nodes = phases.l_max() + 4;
    integrate_angular(
        |theta| {
            partial_amplitude(phases, theta)
                .map(|f| f.norm_sqr())
                .unwrap_or(f64::NAN)
        },
        n_nodes,
    )
}

/// `|σ − (4π/k) Im f(0)| / max(σ, ε)`.
pub fn optical_theorem_residual(phases: &PhaseShiftSet) -> f64 {
    let sigma = total_cross_section(phases);
    let forward = partial_amplitude(phases, 0.0).expect("theta = 0 is in range");
    let optical = 4.0 * PI / phases.k * forward.im;
    (sigma - optical).abs() / sigma.max(f64::MIN_POSITIVE)
}

/// Checks the large-distance reduction of the radial phase relation.
///
/// On the asymptotic pair `χ = sin(kr − lπ/2)`, `χ̄ = sin(kr − lπ/2 + δ)` the
/// left-hand side
///
/// ```text
/// W − β′ℏ²(χχ̄‴ − χ̄χ‴ − χ′χ̄″ + χ̄′χ″) + 2β′ℏ² l(l+1)/r² · W,   W = χχ̄′ − χ̄χ′
/// ```
///
/// is compared with `−k(1 + 2β′ℏ²k²) sin δ`. The difference is the
/// centrifugal term, which vanishes as `r⁻²`.
pub fn asymptotic_wronskian_residual(
    l: usize,
    k: f64,
    delta: f64,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    r: f64,
) -> Result<f64> {
    let k = require_positive("k", k)?;
    let r = require_positive("r", r)?;
    if k * r < 100.0 {
        return Err(ScatterError::InvalidParameter {
            name: "r",
            value: r,
            reason: "asymptotic check needs k r >= 100",
        });
    }
    let a = k * r - l as f64 * FRAC_PI_2;
    let b = a + delta;
    let derivatives = |phase: f64| {
        let (s, c) = phase.sin_cos();
        [s, k * c, -k * k * s, -k * k * k * c]
    };
    let free = derivatives(a);
    let scat = derivatives(b);

    let wronskian = free[0] * scat[1] - scat[0] * free[1];
    let third = free[0] * scat[3] - scat[0] * free[3] - free[1] * scat[2] + scat[1] * free[2];
    let bh2 = params.beta_prime() * ctx.hbar() * ctx.hbar();
    let lf = l as f64;
    let lhs = wronskian - bh2 * third + 2.0 * bh2 * lf * (lf + 1.0) / (r * r) * wronskian;
    let target = -k * (1.0 + 2.0 * bh2 * k * k) * delta.sin();
    Ok((lhs - target).abs())
}

/// Smallest `l` whose first-Born `|sin δ_l|` drops below `tail_tol`.
pub fn select_lmax(
    pot: &RadialPotential,
    k: f64,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    tail_tol: f64,
) -> Result<usize> {
    let tail_tol = require_positive("tail_tol", tail_tol)?;
    let mut last = f64::NAN;
    for l in 0..=LMAX_CAP {
        last = born_sin_delta(l, k, pot, params, ctx, PhaseKernel::default())?;
        if last.abs() < tail_tol {
            return Ok(l);
        }
    }
    Err(ScatterError::LmaxCapReached {
        cap: LMAX_CAP,
        last_sin_delta: last,
    })
}

/// First-Born phase shifts for `l = 0 … lmax`.
pub fn born_phase_shifts(
    pot: &RadialPotential,
    k: f64,
    lmax: usize,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<PhaseShiftSet> {
    let deltas = (0..=lmax)
        .map(|l| born_phase_shift(l, k, pot, params, ctx))
        .collect::<Result<Vec<_>>>()?;
    PhaseShiftSet::new(k, deltas, PhaseMethod::Born)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Sign;

    fn ctx() -> PhysicalContext {
        PhysicalContext::reduced()
    }

    fn deform(beta_prime: f64) -> DeformationParams {
        DeformationParams::new(0.0, beta_prime).unwrap()
    }

    fn yukawa(e2: f64, lambda: f64) -> RadialPotential {
        RadialPotential::yukawa(e2, lambda, Sign::Attractive).unwrap()
    }

    // sin δ_l = Q_l(1 + λ²/2k²) for attractive Yukawa, e² = m = ℏ = k = 1,
    // evaluated with mpmath's legenq
    #[allow(clippy::excessive_precision)]
    const Q_LAMBDA_2: [f64; 8] = [
        0.346_573_590_279_972_65,
        0.039_720_770_839_917_964,
        0.005_456_673_639_644_511_2,
        0.000_802_854_304_943_913_31,
        0.000_122_479_871_222_161_47,
        1.910_786_064_454_126_7e-5,
        3.026_674_193_175_749_8e-6,
        4.847_328_095_152_337_2e-7,
    ];

    #[test]
    fn zero_potential_has_zero_phases() {
        let zero = RadialPotential::zero();
        for l in 0..4 {
            assert_eq!(
                born_phase_shift(l, 1.3, &zero, &deform(0.0), &ctx()).unwrap(),
                0.0
            );
        }
        let sc = self_consistent_phase_shift(0, 1.0, &zero, &deform(0.0), &ctx(), 1, 1e-12);
        assert_eq!(sc.unwrap(), 0.0);
        assert_eq!(
            select_lmax(&zero, 1.0, &deform(0.0), &ctx(), 1e-6).unwrap(),
            0
        );
    }

    #[test]
    fn s_wave_closed_form() {
        let s = born_sin_delta(
            0,
            1.0,
            &yukawa(1.0, 2.0),
            &deform(0.0),
            &ctx(),
            PhaseKernel::default(),
        )
        .unwrap();
        assert!((s - 0.5 * 2f64.ln()).abs() < 1e-12);
        let d = born_phase_shift(0, 1.0, &yukawa(1.0, 2.0), &deform(0.1), &ctx()).unwrap();
        assert!((d.sin() - 0.288_811_325_233_310_5).abs() < 1e-12);
    }

    #[test]
    fn higher_waves_match_legendre_q() {
        for (l, &expected) in Q_LAMBDA_2.iter().enumerate() {
            let s = born_sin_delta(
                l,
                1.0,
                &yukawa(1.0, 2.0),
                &deform(0.0),
                &ctx(),
                PhaseKernel::RiccatiBessel,
            )
            .unwrap();
            assert!(
                (s - expected).abs() < 1e-10 * expected.max(1e-3),
                "l = {l}: {s}"
            );
        }
    }

    #[test]
    fn kernels_agree_for_s_wave_only() {
        let pot = yukawa(1.0, 2.0);
        let spread = kernel_spread(0, 1.0, &pot, &deform(0.0), &ctx()).unwrap();
        assert!(spread.spread().unwrap() < 1e-12);
        // even l: the shifted sine squares to sin²(kr), no decay with l
        let spread = kernel_spread(2, 1.0, &pot, &deform(0.0), &ctx()).unwrap();
        assert!(spread.spread().unwrap() > 0.1);
        // odd l: cos²(kr)/r is not integrable at the origin
        let spread = kernel_spread(1, 1.0, &pot, &deform(0.0), &ctx()).unwrap();
        assert!(spread.asymptotic.is_err());
    }

    #[test]
    fn born_validity_error() {
        let err = born_phase_shift(0, 0.2, &yukawa(5.0, 0.1), &deform(0.0), &ctx()).unwrap_err();
        match err {
            ScatterError::BornValidityExceeded { l, sin_delta } => {
                assert_eq!(l, 0);
                assert!(sin_delta > 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coulomb_rejected() {
        let c = RadialPotential::coulomb(1.0, Sign::Attractive).unwrap();
        assert!(born_phase_shift(0, 1.0, &c, &deform(0.0), &ctx()).is_err());
    }

    #[test]
    fn self_consistent_weak_coupling() {
        // the fixed point differs from Born at second order in e²
        let p = deform(0.0);
        let pot = yukawa(1e-4, 2.0);
        let born = born_phase_shift(0, 1.0, &pot, &p, &ctx()).unwrap();
        let sc = self_consistent_phase_shift(0, 1.0, &pot, &p, &ctx(), 50, 1e-14).unwrap();
        assert!((sc - born).abs() < 1e-8);
        assert!((sc - 3.466_008_121_053_165e-5).abs() < 1e-14);

        let pot = yukawa(1e-3, 2.0);
        let born = born_phase_shift(0, 1.0, &pot, &p, &ctx()).unwrap();
        let sc = self_consistent_phase_shift(0, 1.0, &pot, &p, &ctx(), 50, 1e-14).unwrap();
        assert!((sc - born - 2.723_913_665_538_315e-7).abs() < 1e-12);
    }

    #[test]
    fn self_consistent_moderate_coupling() {
        let pot = yukawa(0.5, 2.0);
        let p = deform(0.0);
        let sc = self_consistent_phase_shift(0, 1.0, &pot, &p, &ctx(), 200, 1e-12).unwrap();
        assert!((sc - 0.277_952_903_564_895_2).abs() < 1e-10);
        let res =
            self_consistent_residual(0, 1.0, sc, &pot, &p, &ctx(), PhaseKernel::default()).unwrap();
        assert!(res < 1e-12, "{res}");
        for l in 1..4 {
            let sc = self_consistent_phase_shift(l, 1.0, &pot, &p, &ctx(), 200, 1e-13).unwrap();
            let res =
                self_consistent_residual(l, 1.0, sc, &pot, &p, &ctx(), PhaseKernel::default())
                    .unwrap();
            assert!(res < 1e-12, "l = {l}: {res}");
        }
    }

    #[test]
    fn self_consistent_strong_coupling() {
        let pot = yukawa(1.0, 2.0);
        let sc =
            self_consistent_phase_shift(0, 1.0, &pot, &deform(0.0), &ctx(), 500, 1e-12).unwrap();
        assert!((sc - 1.016_371_437_828_638_7).abs() < 1e-10);
    }

    #[test]
    fn self_consistent_reports_non_convergence() {
        let pot = yukawa(0.5, 2.0);
        let err =
            self_consistent_phase_shift(0, 1.0, &pot, &deform(0.0), &ctx(), 2, 1e-15).unwrap_err();
        assert!(matches!(
            err,
            ScatterError::FixedPointNotConverged { l: 0, .. }
        ));
    }

    #[test]
    fn amplitude_examples() {
        let zero = PhaseShiftSet::new(1.0, vec![0.0; 4], PhaseMethod::Born).unwrap();
        assert_eq!(
            partial_amplitude(&zero, 0.7).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(total_cross_section(&zero), 0.0);
        assert_eq!(optical_theorem_residual(&zero), 0.0);

        let unitary =
            PhaseShiftSet::new(2.0, vec![FRAC_PI_2, 0.0, 0.0], PhaseMethod::Born).unwrap();
        for &theta in &[0.0, 1.0, PI] {
            let f = partial_amplitude(&unitary, theta).unwrap();
            assert!((f - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        }
        let s_wave = PhaseShiftSet::new(1.0, vec![FRAC_PI_2], PhaseMethod::Born).unwrap();
        assert!((total_cross_section(&s_wave) - 4.0 * PI).abs() < 1e-14);
        assert!(optical_theorem_residual(&s_wave) <= 1e-12);
        assert!(partial_amplitude(&s_wave, -0.1).is_err());
    }

    #[test]
    fn forward_amplitude_identity() {
        let set =
            PhaseShiftSet::new(1.7, vec![0.3, -0.2, 0.11, 0.05, -0.01], PhaseMethod::Born).unwrap();
        let f0 = partial_amplitude(&set, 0.0).unwrap();
        let sum: f64 = set
            .deltas()
            .iter()
            .enumerate()
            .map(|(l, d)| (2 * l + 1) as f64 * d.sin().powi(2))
            .sum();
        assert!((f0.im - sum / 1.7).abs() < 1e-15);
        let angular = total_cross_section_angular(&set).unwrap();
        assert!(((angular - total_cross_section(&set)) / angular).abs() < 1e-12);
    }

    #[test]
    fn phase_set_validation() {
        assert!(PhaseShiftSet::new(0.0, vec![0.1], PhaseMethod::Born).is_err());
        assert!(PhaseShiftSet::new(1.0, vec![], PhaseMethod::Born).is_err());
        assert!(PhaseShiftSet::new(1.0, vec![f64::NAN], PhaseMethod::Born).is_err());
        let s = PhaseShiftSet::new(1.0, vec![0.3, 1e-9], PhaseMethod::SelfConsistent).unwrap();
        assert!(s.tail_converged(1e-6));
        assert_eq!(s.method().to_string(), "self_consistent");
    }

    #[test]
    fn free_wave_examples() {
        let k = 1.3;
        let r = 0.9;
        let w = free_radial_wave(0, k, r).unwrap();
        assert!((w.value - (2.0 / PI).sqrt() * (k * r).sin() / r).abs() < 1e-15);
        let w = free_radial_wave(1, 1.0, PI).unwrap();
        // j_1(π) = 1/π
        assert!((w.value - (2.0 / PI).sqrt() / PI).abs() < 1e-15);
        assert!(free_radial_wave(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn free_wave_approaches_asymptote() {
        // deviation from √(2/π) sin(kr − lπ/2)/r is O(l(l+1)/(2kr)) in units of
        // the envelope √(2/π)/r
        for l in 0..=5usize {
            for &kr in &[1e2, 1e3, 1e4] {
                let w = free_radial_wave(l, 1.0, kr).unwrap();
                let envelope = (2.0 / PI).sqrt() / kr;
                let asym = envelope * (kr - l as f64 * FRAC_PI_2).sin();
                let deviation = (w.value - asym).abs() / envelope;
                let bound = (l * (l + 1)) as f64 / (2.0 * kr) + 1e-12;
                assert!(deviation <= bound * 1.01, "l={l} kr={kr}: {deviation}");
            }
        }
    }

    #[test]
    fn wronskian_examples() {
        let c = ctx();
        assert_eq!(
            asymptotic_wronskian_residual(3, 1.0, 0.0, &deform(0.1), &c, 1e3).unwrap(),
            0.0
        );
        for &delta in &[0.1, 0.5, 1.0] {
            let r = asymptotic_wronskian_residual(0, 1.0, delta, &deform(0.1), &c, 1e3).unwrap();
            assert!(r <= 1e-12);
        }
        assert!(asymptotic_wronskian_residual(0, 1.0, 0.1, &deform(0.0), &c, 10.0).is_err());
    }

    #[test]
    fn lmax_examples() {
        let p = deform(0.0);
        let strong = yukawa(1.0, 10.0);
        assert!(select_lmax(&strong, 1.0, &p, &ctx(), 1e-3).unwrap() <= 2);
        let pot = yukawa(1.0, 2.0);
        let mut last = 0;
        for tol in [1e-2, 1e-4, 1e-6, 1e-8] {
            let l = select_lmax(&pot, 1.0, &p, &ctx(), tol).unwrap();
            assert!(l >= last);
            last = l;
        }
        let weak_screen = yukawa(1.0, 0.05);
        assert!(matches!(
            select_lmax(&weak_screen, 3.0, &p, &ctx(), 1e-12),
            Err(ScatterError::LmaxCapReached { .. })
        ));
    }
}
