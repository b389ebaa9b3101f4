//! First-order Born amplitudes and differential cross-sections.
//!
//! With the plane wave substituted into the amplitude integral, a central
//! potential scatters with
//!
//! ```text
//! f(θ) = −m/(2πℏ²) · 1/(1 + 2β′ℏ²k²) · Ũ(q),   q = 2k sin(θ/2)
//! ```
//!
//! where `Ũ` is the three-dimensional Fourier transform of `U`. The only
//! trace of the deformation at this order is the Green's-function factor.
//! The differential cross-section is `|f|²` exactly as in ordinary quantum
//! mechanics.
//!
//! The Coulomb potential has no Born amplitude of its own. It is reached
//! either through [`coulomb_limit_extrapolate`], which takes the screening of
//! a Yukawa potential to zero, or through the closed-form deformed Coulomb
//! cross-section [`deformed_coulomb_dcs`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{require_positive, Result, ScatterError};
use crate::physical_context::{green_prefactor, DeformationParams, PhysicalContext};
use crate::potentials::{PotentialKind, RadialPotential, Sign};
use crate::quadrature::{
    integrate_compact_oscillatory, integrate_radial_oscillatory, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};

/// Fraction of the Rutherford term above which the deformed Coulomb
/// correction is flagged as outside perturbative validity.
pub const VALIDITY_THRESHOLD: f64 = 0.5;

/// Elastic scattering geometry: wave number, angle and momentum transfer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringGeometry {
    theta: f64,
    k: f64,
    q: f64,
}

impl ScatteringGeometry {
    /// `theta` must lie in (0, π].
    pub fn new(k: f64, theta: f64) -> Result<Self> {
        let k = require_positive("k", k)?;
        if !(theta > 0.0 && theta <= PI) {
            return Err(ScatterError::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "scattering angle must lie in (0, pi]",
            });
        }
        Ok(Self {
            theta,
            k,
            q: 2.0 * k * (theta / 2.0).sin(),
        })
    }

    /// Geometry with a prescribed momentum transfer `0 < q ≤ 2k`.
    pub fn from_momentum_transfer(k: f64, q: f64) -> Result<Self> {
        let k = require_positive("k", k)?;
        let q = require_positive("q", q)?;
        if q > 2.0 * k {
            return Err(ScatterError::InvalidParameter {
                name: "q",
                value: q,
                reason: "momentum transfer cannot exceed 2k",
            });
        }
        let theta = 2.0 * (q / (2.0 * k)).asin();
        Ok(Self { theta, k, q })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn sin2_half(&self) -> f64 {
        (self.theta / 2.0).sin().powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSample {
    pub theta: f64,
    pub f: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Ok,
    PerturbativeValidityExceeded,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::Ok => "ok",
            Validity::PerturbativeValidityExceeded => "perturbative_validity_exceeded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionRow {
    pub theta: f64,
    pub dcs: f64,
    pub validity: Validity,
}

/// Differential cross-section over an angle grid, rows in the order the
/// angles were given.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionTable {
    pub k: f64,
    pub params: DeformationParams,
    pub potential: String,
    pub rows: Vec<CrossSectionRow>,
}

fn born_prefactor(k: f64, params: &DeformationParams, ctx: &PhysicalContext) -> f64 {
    ctx.mass() / (2.0 * PI * ctx.hbar() * ctx.hbar()) * green_prefactor(k, params, ctx)
}

/// Closed-form first-Born amplitude of a Yukawa potential. Purely real.
pub fn born_amplitude_yukawa(
    geom: &ScatteringGeometry,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<Complex64> {
    if !matches!(pot.kind(), PotentialKind::Yukawa { .. }) {
        return Err(ScatterError::Domain(
            "closed-form Born amplitude needs a Yukawa potential".into(),
        ));
    }
    let transform = pot.fourier_transform(geom.q)?;
    Ok(Complex64::new(
        -born_prefactor(geom.k, params, ctx) * transform,
        0.0,
    ))
}

/// First-Born amplitude of any short-range potential by radial quadrature,
/// `f = −2m/(ℏ²(1 + 2β′ℏ²k²)) · (1/q) ∫₀^∞ r U(r) sin(qr) dr`.
pub fn born_amplitude_numeric(
    geom: &ScatteringGeometry,
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<Complex64> {
    let q = geom.q;
    let integrand = |r: f64| r * pot.value_at(r) * (q * r).sin();
    let integral = match pot.kind() {
        PotentialKind::Coulomb => {
            return Err(ScatterError::Domain(
                "the Coulomb Born integral diverges; use a screened potential".into(),
            ))
        }
        PotentialKind::Yukawa { lambda } => integrate_radial_oscillatory(
            integrand,
            q,
            1.0 / lambda,
            DEFAULT_REL_TOL,
            DEFAULT_ABS_TOL,
        )?,
        PotentialKind::Custom { range, .. } => {
            integrate_compact_oscillatory(integrand, q, *range, DEFAULT_REL_TOL, DEFAULT_ABS_TOL)?
        }
    };
    let f = -ctx.reduction_factor() * green_prefactor(geom.k, params, ctx) * integral.value / q;
    Ok(Complex64::new(f, 0.0))
}

/// `|f|²`.
pub fn dcs_from_amplitude(f: Complex64) -> f64 {
    f.norm_sqr()
}

/// `m²e⁴ / (4ℏ⁴k⁴ sin⁴(θ/2))`.
pub fn rutherford_dcs(geom: &ScatteringGeometry, ctx: &PhysicalContext) -> f64 {
    let me2 = ctx.mass() * ctx.coupling_e2();
    let hk2 = (ctx.hbar() * geom.k).powi(2);
    me2 * me2 / (4.0 * hk2 * hk2 * geom.sin2_half().powi(2))
}

/// The three pieces of the deformed Coulomb cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombTerms {
    pub rutherford: f64,
    /// The `(2β − β′)` family, including the logarithm.
    pub log_term: f64,
    /// The term proportional to β′ alone.
    pub beta_prime_term: f64,
}

impl CoulombTerms {
    pub fn correction(&self) -> f64 {
        self.log_term + self.beta_prime_term
    }

    pub fn total(&self) -> f64 {
        self.rutherford + self.correction()
    }

    pub fn validity(&self) -> Validity {
        if self.correction().abs() > VALIDITY_THRESHOLD * self.rutherford {
            Validity::PerturbativeValidityExceeded
        } else {
            Validity::Ok
        }
    }
}

/// Coulomb cross-section value with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombDcs {
    pub value: f64,
    pub validity: Validity,
}

/// Evaluates the deformed Coulomb differential cross-section term by term:
///
/// ```text
/// dσ/dΩ = R + me²/(ℏ²k²s²) · { (me²/2)(2β−β′)[ln(ℏ²(2β−β′)k²s²) + 2γ − 1 − 1/(2s²)]
///                              − β′me²/s² }
/// ```
///
/// with `s = sin(θ/2)` and `R` the Rutherford cross-section. When
/// `2β − β′ = 0` the log family is replaced by its limit, zero.
pub fn deformed_coulomb_terms(
    geom: &ScatteringGeometry,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<CoulombTerms> {
    let c = params.two_beta_minus_bp();
    if c < 0.0 {
        return Err(ScatterError::Domain(format!(
            "log argument hbar^2 (2 beta - beta') k^2 sin^2(theta/2) is negative: \
             2 beta - beta' = {c}"
        )));
    }
    let s2 = geom.sin2_half();
    let me2 = ctx.mass() * ctx.coupling_e2();
    let hbar2 = ctx.hbar() * ctx.hbar();
    let k2 = geom.k * geom.k;
    let outer = me2 / (hbar2 * k2 * s2);

    let log_term = if c == 0.0 {
        0.0
    } else {
        let bracket = (hbar2 * c * k2 * s2).ln() + 2.0 * ctx.euler_gamma() - 1.0 - 1.0 / (2.0 * s2);
        outer * (me2 / 2.0) * c * bracket
    };
    let beta_prime_term = -outer * params.beta_prime() * me2 / s2;

    Ok(CoulombTerms {
        rutherford: rutherford_dcs(geom, ctx),
        log_term,
        beta_prime_term,
    })
}

pub fn deformed_coulomb_dcs(
    geom: &ScatteringGeometry,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<CoulombDcs> {
    let terms = deformed_coulomb_terms(geom, params, ctx)?;
    Ok(CoulombDcs {
        value: terms.total(),
        validity: terms.validity(),
    })
}

/// Result of a λ → 0 extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub error_estimate: f64,
    /// `dσ/dΩ` at each screening parameter, in the order given.
    pub samples: Vec<f64>,
}

/// Polynomial (Neville) extrapolation of `values(h)` to `h = 0`. Returns the
/// full-order extrapolant and its difference from the next-lower-order
/// extrapolant built from the points closest to zero.
pub fn richardson_extrapolate(h: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if h.len() != values.len() || h.len() < 2 {
        return Err(ScatterError::Domain(
            "extrapolation needs at least two (h, value) pairs".into(),
        ));
    }
    let n = h.len();
    let mut table = values.to_vec();
    let mut lower = table[n - 1];
    for m in 1..n {
        if m == n - 1 {
            lower = table[1];
        }
        for i in 0..n - m {
            let (hi, hj) = (h[i], h[i + m]);
            table[i] = (hi * table[i + 1] - hj * table[i]) / (hi - hj);
        }
    }
    Ok((table[0], (table[0] - lower).abs()))
}

/// Takes the Yukawa screening parameter through a decreasing sequence and
/// extrapolates `dσ/dΩ` to λ = 0 in powers of λ².
pub fn coulomb_limit_extrapolate(
    geom: &ScatteringGeometry,
    params: &DeformationParams,
    ctx: &PhysicalContext,
    lambdas: &[f64],
) -> Result<Extrapolation> {
    if lambdas.len() < 3 {
        return Err(ScatterError::Domain(format!(
            "need at least 3 screening parameters, got {}",
            lambdas.len()
        )));
    }
    for &lambda in lambdas {
        require_positive("lambda", lambda)?;
    }
    if lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ScatterError::Domain(
            "screening parameters must be strictly decreasing".into(),
        ));
    }

    let samples = lambdas
        .iter()
        .map(|&lambda| {
            let pot = RadialPotential::yukawa(ctx.coupling_e2(), lambda, Sign::Attractive)?;
            Ok(dcs_from_amplitude(born_amplitude_yukawa(
                geom, &pot, params, ctx,
            )?))
        })
        .collect::<Result<Vec<f64>>>()?;

    let steps: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let same_direction = steps.windows(2).all(|d| d[0] * d[1] >= 0.0);
    let shrinking = steps
        .windows(2)
        .all(|d| d[1].abs() <= d[0].abs() * (1.0 + 1e-12));
    if !(same_direction && shrinking) {
        return Err(ScatterError::NonMonotoneConvergence(samples));
    }

    let h: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
    let (value, error_estimate) = richardson_extrapolate(&h, &samples)?;
    Ok(Extrapolation {
        value,
        error_estimate,
        samples,
    })
}

/// First-Born `dσ/dΩ` of a Yukawa potential over an angle grid.
pub fn yukawa_dcs_table(
    k: f64,
    thetas: &[f64],
    pot: &RadialPotential,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<CrossSectionTable> {
    let rows = thetas
        .iter()
        .map(|&theta| {
            let geom = ScatteringGeometry::new(k, theta)?;
            let f = born_amplitude_yukawa(&geom, pot, params, ctx)?;
            Ok(CrossSectionRow {
                theta,
                dcs: dcs_from_amplitude(f),
                validity: Validity::Ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossSectionTable {
        k,
        params: *params,
        potential: format!("{pot:?}"),
        rows,
    })
}

/// Deformed Coulomb `dσ/dΩ` over an angle grid, flagging rows outside
/// perturbative validity.
pub fn coulomb_dcs_table(
    k: f64,
    thetas: &[f64],
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<CrossSectionTable> {
    let rows = thetas
        .iter()
        .map(|&theta| {
            let geom = ScatteringGeometry::new(k, theta)?;
            let dcs = deformed_coulomb_dcs(&geom, params, ctx)?;
            Ok(CrossSectionRow {
                theta,
                dcs: dcs.value,
                validity: dcs.validity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossSectionTable {
        k,
        params: *params,
        potential: "Coulomb".into(),
        rows,
    })
}
