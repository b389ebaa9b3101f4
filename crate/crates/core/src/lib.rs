//! Elastic scattering observables in quantum mechanics with a minimal length.
//!
//! The deformed commutator `[X_i, P_j] = iħ(δ_ij(1 + βP²) + β′P_iP_j)` implies a
//! minimal position uncertainty `ħ√(β + β′)`. To first order in the
//! deformation parameters the free particle acquires a modified dispersion
//! and Green's function, while the structure of scattering theory survives:
//! `dσ/dΩ = |f|²`, the partial-wave sum and the optical theorem keep their
//! ordinary forms.
//!
//! * [`physical_context`]: units, deformation parameters, kinematics.
//! * [`potentials`]: Coulomb, Yukawa and custom central potentials.
//! * [`born`]: first-Born amplitudes, the deformed Coulomb cross-section and
//!   the screened-Coulomb limit.
//! * [`partial_waves`]: phase shifts, amplitude sums, total cross-sections
//!   and consistency checks.
//! * [`quadrature`]: oscillatory radial and angular integration.
//! * [`special`]: Legendre polynomials and spherical Bessel functions.
//! * [`cli`]: the `minscat` command-line front end.
//!
//! ```
//! use minlen_scatter::born::{deformed_coulomb_dcs, ScatteringGeometry};
//! use minlen_scatter::physical_context::{DeformationParams, PhysicalContext};
//!
//! let ctx = PhysicalContext::reduced();
//! let geom = ScatteringGeometry::new(1.0, std::f64::consts::FRAC_PI_2)?;
//! let params = DeformationParams::new(0.01, 0.01)?;
//! let dcs = deformed_coulomb_dcs(&geom, &params, &ctx)?;
//! assert!((dcs.value - 0.89856).abs() < 1e-4);
//! # Ok::<(), minlen_scatter::ScatterError>(())
//! ```

pub mod born;
pub mod cli;
mod error;
pub mod partial_waves;
pub mod physical_context;
pub mod potentials;
pub mod quadrature;
pub mod special;

pub use error::{Result, ScatterError};

// The guide's and the README's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/kinematics.md")]
    pub struct Kinematics;
    #[doc = include_str!("../../../book/src/potentials.md")]
    pub struct Potentials;
    #[doc = include_str!("../../../book/src/born.md")]
    pub struct Born;
    #[doc = include_str!("../../../book/src/coulomb.md")]
    pub struct Coulomb;
    #[doc = include_str!("../../../book/src/partial-waves.md")]
    pub struct PartialWaves;
    #[doc = include_str!("../../../book/src/quadrature.md")]
    pub struct Quadrature;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
