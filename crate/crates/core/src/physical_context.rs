//! Units, deformation parameters and free-particle kinematics.
//!
//! Everything downstream is evaluated in the unit system carried by
//! [`PhysicalContext`]. The default is reduced units, ℏ = m = e² = 1.
//!
//! The deformation enters the free motion of the particle in two places:
//! the dispersion relation
//!
//! ```text
//! E = (ℏ²k²/2m)(1 + β′ℏ²k²),    P = ℏk(1 + β′ℏ²k²/2)
//! ```
//!
//! and the outgoing-wave Green's function, which picks up the factor
//! `1/(1 + 2β′ℏ²k²)`. Only β′ appears in the kinematics; the combination
//! `2β − β′` only shows up in the Coulomb correction.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Result, ScatterError};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The unit system: ℏ, particle mass and the coupling e² of the Coulomb-type
/// potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    hbar: f64,
    mass: f64,
    coupling_e2: f64,
    euler_gamma: f64,
}

impl PhysicalContext {
    pub fn new(hbar: f64, mass: f64, coupling_e2: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
            mass: require_positive("mass", mass)?,
            coupling_e2: require_non_negative("coupling_e2", coupling_e2)?,
            euler_gamma: EULER_GAMMA,
        })
    }

    /// ℏ = m = e² = 1.
    pub fn reduced() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            coupling_e2: 1.0,
            euler_gamma: EULER_GAMMA,
        }
    }

    /// Same units with a different coupling.
    pub fn with_coupling(self, coupling_e2: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, coupling_e2)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn coupling_e2(&self) -> f64 {
        self.coupling_e2
    }

    pub fn euler_gamma(&self) -> f64 {
        self.euler_gamma
    }

    /// 2m/ℏ², the factor converting an energy into an inverse length squared.
    pub fn reduction_factor(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }
}

impl Default for PhysicalContext {
    fn default() -> Self {
        Self::reduced()
    }
}

/// The deformation parameters β and β′, both in units of inverse momentum
/// squared.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeformationParams {
    beta: f64,
    beta_prime: f64,
}

impl DeformationParams {
    pub fn new(beta: f64, beta_prime: f64) -> Result<Self> {
        Ok(Self {
            beta: require_non_negative("beta", beta)?,
            beta_prime: require_non_negative("beta_prime", beta_prime)?,
        })
    }

    /// Ordinary quantum mechanics.
    pub fn undeformed() -> Self {
        Self::default()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta_prime(&self) -> f64 {
        self.beta_prime
    }

    /// 2β − β′. May be negative.
    pub fn two_beta_minus_bp(&self) -> f64 {
        2.0 * self.beta - self.beta_prime
    }

    pub fn is_undeformed(&self) -> bool {
        self.beta == 0.0 && self.beta_prime == 0.0
    }
}

/// ℏ√(β + β′).
pub fn minimal_length(params: &DeformationParams, ctx: &PhysicalContext) -> f64 {
    ctx.hbar * (params.beta + params.beta_prime).sqrt()
}

/// Free-particle energy `(ℏ²k²/2m)(1 + β′ℏ²k²)`.
pub fn kinetic_energy(k: f64, params: &DeformationParams, ctx: &PhysicalContext) -> Result<f64> {
    let k = require_positive("k", k)?;
    let hk2 = (ctx.hbar * k).powi(2);
    Ok(hk2 / (2.0 * ctx.mass) * (1.0 + params.beta_prime * hk2))
}

/// Inverts [`kinetic_energy`].
///
/// With `x = ℏ²k²` the dispersion is the quadratic `β′x² + x − 2mE = 0`. The
/// positive root is written as `x = 4mE / (1 + √(1 + 8mEβ′))`, which stays
/// well conditioned as β′ → 0 and reduces to `2mE` there.
pub fn wavenumber_of_energy(
    energy: f64,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<f64> {
    let energy = require_positive("energy", energy)?;
    let two_m_e = 2.0 * ctx.mass * energy;
    let discriminant = 1.0 + 4.0 * params.beta_prime * two_m_e;
    if !discriminant.is_finite() {
        return Err(ScatterError::Domain(format!(
            "dispersion inversion overflowed for E = {energy}, beta_prime = {}",
            params.beta_prime
        )));
    }
    let x = 2.0 * two_m_e / (1.0 + discriminant.sqrt());
    let k = x.sqrt() / ctx.hbar;
    if !(k > 0.0 && k.is_finite()) {
        return Err(ScatterError::Domain(format!(
            "no positive wave number for E = {energy}, beta_prime = {}",
            params.beta_prime
        )));
    }
    Ok(k)
}

/// `1/(1 + 2β′ℏ²k²)`, the deformation factor of the outgoing Green's function.
pub fn green_prefactor(k: f64, params: &DeformationParams, ctx: &PhysicalContext) -> f64 {
    1.0 / (1.0 + 2.0 * params.beta_prime * (ctx.hbar * k).powi(2))
}

/// Asymptotic outgoing Green's function `−e^{ik|r−r′|} / (4π|r−r′|(1 + 2β′ℏ²k²))`.
///
/// Depends on the positions only through their separation `r_sep`.
pub fn green_function_asymptotic(
    r_sep: f64,
    k: f64,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<Complex64> {
    if r_sep == 0.0 {
        return Err(ScatterError::InvalidParameter {
            name: "r_sep",
            value: r_sep,
            reason: "Green's function is singular at zero separation",
        });
    }
    let r_sep = require_positive("r_sep", r_sep)?;
    let modulus = green_prefactor(k, params, ctx) / (4.0 * PI * r_sep);
    Ok(-Complex64::from_polar(modulus, k * r_sep))
}

/// Free-particle kinematics at a given wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub k: f64,
    pub energy: f64,
    pub momentum: f64,
}

impl Kinematics {
    pub fn from_wavenumber(
        k: f64,
        params: &DeformationParams,
        ctx: &PhysicalContext,
    ) -> Result<Self> {
        let energy = kinetic_energy(k, params, ctx)?;
        let hk = ctx.hbar * k;
        let momentum = hk * (1.0 + params.beta_prime * hk * hk / 2.0);
        Ok(Self {
            k,
            energy,
            momentum,
        })
    }

    pub fn from_energy(
        energy: f64,
        params: &DeformationParams,
        ctx: &PhysicalContext,
    ) -> Result<Self> {
        let k = wavenumber_of_energy(energy, params, ctx)?;
        Self::from_wavenumber(k, params, ctx)
    }
}
