//! Central scattering potentials.
//!
//! Potentials are undeformed functions of the radial distance. The Yukawa
//! potential uses the decaying form `±e² e^{−λr}/r`; its λ → 0 limit is the
//! Coulomb potential.
//!
//! Radial integrals use the reduced potential `2mU/ℏ²`, an inverse length
//! squared.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{require_non_negative, require_positive, Result, ScatterError};
use crate::physical_context::PhysicalContext;

/// `|U|` must stay below this beyond the declared range of a custom potential.
pub const CUSTOM_RANGE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Attractive,
    Repulsive,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Attractive => -1.0,
            Sign::Repulsive => 1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Attractive => "attractive",
            Sign::Repulsive => "repulsive",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "attractive" => Ok(Sign::Attractive),
            "repulsive" => Ok(Sign::Repulsive),
            other => Err(format!("expected attractive or repulsive, got {other:?}")),
        }
    }
}

pub type RadialShape = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PotentialKind {
    Coulomb,
    Yukawa {
        lambda: f64,
    },
    /// `shape` is multiplied by strength and sign; it vanishes beyond `range`.
    Custom {
        shape: RadialShape,
        range: f64,
    },
}

impl fmt::Debug for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Coulomb => f.write_str("Coulomb"),
            PotentialKind::Yukawa { lambda } => {
                f.debug_struct("Yukawa").field("lambda", lambda).finish()
            }
            PotentialKind::Custom { range, .. } => f
                .debug_struct("Custom")
                .field("range", range)
                .finish_non_exhaustive(),
        }
    }
}

/// A central potential `U(r)`.
#[derive(Debug, Clone)]
pub struct RadialPotential {
    kind: PotentialKind,
    strength: f64,
    sign: Sign,
}

impl RadialPotential {
    pub fn coulomb(e2: f64, sign: Sign) -> Result<Self> {
        Ok(Self {
            kind: PotentialKind::Coulomb,
            strength: require_non_negative("e2", e2)?,
            sign,
        })
    }

    pub fn yukawa(e2: f64, lambda: f64, sign: Sign) -> Result<Self> {
        let lambda = require_positive("lambda", lambda)?;
        Ok(Self {
            kind: PotentialKind::Yukawa { lambda },
            strength: require_non_negative("e2", e2)?,
            sign,
        })
    }

    /// A user-supplied radial shape with effective range `range`.
    ///
    /// The shape is sampled at and beyond `range` to confirm that the scaled
    /// potential has dropped below [`CUSTOM_RANGE_TOL`].
    pub fn custom<F>(shape: F, strength: f64, range: f64, sign: Sign) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let strength = require_non_negative("strength", strength)?;
        let range = require_positive("range", range)?;
        for factor in [1.0, 1.5, 2.0, 4.0, 10.0, 100.0] {
            let r = range * factor;
            let u = strength * shape(r);
            if u.is_nan() || u.abs() >= CUSTOM_RANGE_TOL {
                return Err(ScatterError::Domain(format!(
                    "custom potential does not vanish beyond its range: |U({r})| = {}",
                    u.abs()
                )));
            }
        }
        Ok(Self {
            kind: PotentialKind::Custom {
                shape: Arc::new(shape),
                range,
            },
            strength,
            sign,
        })
    }

    /// U ≡ 0.
    pub fn zero() -> Self {
        Self {
            kind: PotentialKind::Custom {
                shape: Arc::new(|_| 0.0),
                range: 1.0,
            },
            strength: 0.0,
            sign: Sign::Repulsive,
        }
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn with_strength(&self, strength: f64) -> Result<Self> {
        Ok(Self {
            strength: require_non_negative("strength", strength)?,
            ..self.clone()
        })
    }

    /// Length scale over which the potential dies off; `None` for Coulomb.
    pub fn decay_scale(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Coulomb => None,
            PotentialKind::Yukawa { lambda } => Some(1.0 / lambda),
            PotentialKind::Custom { range, .. } => Some(range),
        }
    }

    pub fn is_short_range(&self) -> bool {
        !matches!(self.kind, PotentialKind::Coulomb)
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        let r = require_positive("r", r)?;
        Ok(self.value_at(r))
    }

    /// `2mU(r)/ℏ²`.
    pub fn reduced_potential(&self, r: f64, ctx: &PhysicalContext) -> Result<f64> {
        Ok(ctx.reduction_factor() * self.evaluate(r)?)
    }

    /// Unchecked evaluation for `r > 0`, used inside integrands.
    pub(crate) fn value_at(&self, r: f64) -> f64 {
        let magnitude = match &self.kind {
            PotentialKind::Coulomb => 1.0 / r,
            PotentialKind::Yukawa { lambda } => (-lambda * r).exp() / r,
            PotentialKind::Custom { shape, .. } => shape(r),
        };
        self.sign.factor() * self.strength * magnitude
    }

    /// Signed 3D Fourier transform `∫ e^{−iq·r} U(r) d³r`, available in closed
    /// form for the Yukawa potential.
    pub fn fourier_transform(&self, q: f64) -> Result<f64> {
        match self.kind {
            PotentialKind::Yukawa { lambda } => {
                Ok(self.sign.factor() * yukawa_fourier_transform(q, lambda, self.strength)?)
            }
            PotentialKind::Coulomb => Err(ScatterError::Domain(
                "the Coulomb transform diverges; take the Yukawa lambda -> 0 limit".into(),
            )),
            PotentialKind::Custom { .. } => Err(ScatterError::Domain(
                "no closed-form transform for a custom potential".into(),
            )),
        }
    }
}

/// `4πe²/(q² + λ²)`, the magnitude of the Yukawa Fourier transform.
pub fn yukawa_fourier_transform(q: f64, lambda: f64, e2: f64) -> Result<f64> {
    let q = require_non_negative("q", q)?;
    let lambda = require_positive("lambda", lambda)?;
    Ok(4.0 * PI * e2 / (q * q + lambda * lambda))
}
