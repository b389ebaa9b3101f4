//! The four `minscat` subcommands, each producing one [`Table`].

use crate::born::{
    coulomb_dcs_table, coulomb_limit_extrapolate, yukawa_dcs_table, ScatteringGeometry, Validity,
};
use crate::error::ScatterError;
use crate::partial_waves::{
    born_phase_shift_with, born_sin_delta, optical_theorem_residual, partial_amplitude,
    select_lmax, self_consistent_phase_shift_with, total_cross_section,
    total_cross_section_angular, PhaseMethod, PhaseShiftSet,
};
use crate::physical_context::{
    green_prefactor, minimal_length, wavenumber_of_energy, DeformationParams, Kinematics,
    PhysicalContext,
};
use crate::potentials::RadialPotential;

use super::config::{CoulombMode, PotentialChoice, RunConfig, WaveSpec};
use super::output::{format_float, Cell, Table};
use super::CliError;

/// Relative tolerance between the two total cross-section routes.
pub const SIGMA_AGREEMENT_TOL: f64 = 1e-8;

fn context(config: &RunConfig) -> Result<(PhysicalContext, DeformationParams), CliError> {
    let ctx = PhysicalContext::new(config.hbar, config.mass, config.e2)?;
    let params = DeformationParams::new(config.beta, config.beta_prime)?;
    Ok((ctx, params))
}

fn wave_numbers(
    config: &RunConfig,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<Vec<f64>, CliError> {
    match &config.wave {
        WaveSpec::WaveNumber(k) => Ok(k.clone()),
        WaveSpec::Energy(e) => e
            .iter()
            .map(|&e| wavenumber_of_energy(e, params, ctx).map_err(CliError::from))
            .collect(),
    }
}

fn single_wave_number(
    config: &RunConfig,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<f64, CliError> {
    let ks = wave_numbers(config, params, ctx)?;
    match ks.as_slice() {
        [k] => Ok(*k),
        _ => Err(CliError::Config {
            key: match config.wave {
                WaveSpec::WaveNumber(_) => "k".into(),
                WaveSpec::Energy(_) => "energy".into(),
            },
            message: format!("this command takes a single value, got {}", ks.len()),
        }),
    }
}

fn yukawa(config: &RunConfig) -> Result<RadialPotential, CliError> {
    match config.potential {
        PotentialChoice::Yukawa => Ok(RadialPotential::yukawa(
            config.e2,
            config.lambda,
            config.sign,
        )?),
        PotentialChoice::Coulomb => Err(CliError::Config {
            key: "potential".into(),
            message: "partial waves need a short-range potential; use yukawa".into(),
        }),
    }
}

fn lmax(
    config: &RunConfig,
    pot: &RadialPotential,
    k: f64,
    params: &DeformationParams,
    ctx: &PhysicalContext,
) -> Result<usize, CliError> {
    match config.lmax {
        Some(l) => Ok(l),
        None => Ok(select_lmax(pot, k, params, ctx, config.tail_tol)?),
    }
}

fn table(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Table {
    Table {
        meta: Vec::new(),
        columns,
        rows,
    }
}

pub fn cmd_dispersion(config: &RunConfig) -> Result<Table, CliError> {
    let (ctx, params) = context(config)?;
    let length = minimal_length(&params, &ctx);
    let rows = wave_numbers(config, &params, &ctx)?
        .into_iter()
        .map(|k| {
            let kin = Kinematics::from_wavenumber(k, &params, &ctx)?;
            Ok(vec![
                Cell::Float(kin.k),
                Cell::Float(kin.energy),
                Cell::Float(kin.momentum),
                Cell::Float(length),
                Cell::Float(green_prefactor(k, &params, &ctx)),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(table(
        vec![
            "k",
            "energy",
            "momentum",
            "minimal_length",
            "green_prefactor",
        ],
        rows,
    ))
}

pub fn cmd_dcs(config: &RunConfig) -> Result<Table, CliError> {
    let (ctx, params) = context(config)?;
    let k = single_wave_number(config, &params, &ctx)?;
    let thetas = config.angles();
    let rows: Vec<Vec<Cell>> = match (config.potential, config.coulomb_mode) {
        (PotentialChoice::Yukawa, _) => {
            let pot = yukawa(config)?;
            yukawa_dcs_table(k, &thetas, &pot, &params, &ctx)?
                .rows
                .into_iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.theta),
                        Cell::Float(r.dcs),
                        Cell::Text(r.validity.to_string()),
                    ]
                })
                .collect()
        }
        (PotentialChoice::Coulomb, CoulombMode::ClosedForm) => {
            coulomb_dcs_table(k, &thetas, &params, &ctx)?
                .rows
                .into_iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.theta),
                        Cell::Float(r.dcs),
                        Cell::Text(r.validity.to_string()),
                    ]
                })
                .collect()
        }
        (PotentialChoice::Coulomb, CoulombMode::Limit) => thetas
            .iter()
            .map(|&theta| {
                let geom = ScatteringGeometry::new(k, theta)?;
                let ex = coulomb_limit_extrapolate(&geom, &params, &ctx, &config.lambdas)?;
                Ok(vec![
                    Cell::Float(theta),
                    Cell::Float(ex.value),
                    Cell::Text(Validity::Ok.to_string()),
                ])
            })
            .collect::<Result<_, CliError>>()?,
    };
    let mut out = table(vec!["theta", "dcs", "validity_flag"], rows);
    out.meta.push(("k_resolved".into(), format_float(k)));
    Ok(out)
}

fn status_of(err: &ScatterError) -> &'static str {
    match err {
        ScatterError::BornValidityExceeded { .. } => "born_validity_exceeded",
        ScatterError::FixedPointNotConverged { .. } => "fixed_point_not_converged",
        ScatterError::QuadratureNotConverged { .. } => "quadrature_not_converged",
        _ => "error",
    }
}

pub fn cmd_phases(config: &RunConfig) -> Result<Table, CliError> {
    let (ctx, params) = context(config)?;
    let pot = yukawa(config)?;
    let k = single_wave_number(config, &params, &ctx)?;
    let lmax = lmax(config, &pot, k, &params, &ctx)?;
    let mut rows = Vec::with_capacity(lmax + 1);
    for l in 0..=lmax {
        // the raw first-order sin δ is kept even when it leaves [−1, 1]
        let sin_delta = born_sin_delta(l, k, &pot, &params, &ctx, config.kernel)?;
        let born = if sin_delta.abs() <= 1.0 {
            Ok(sin_delta.asin())
        } else {
            Err(ScatterError::BornValidityExceeded { l, sin_delta })
        };
        let sc = self_consistent_phase_shift_with(
            l,
            k,
            &pot,
            &params,
            &ctx,
            config.max_iter,
            config.sc_tol,
            config.kernel,
        );
        let status = match (&born, &sc) {
            (Err(e), _) | (_, Err(e)) => status_of(e),
            _ => "ok",
        };
        rows.push(vec![
            Cell::Int(l as u64),
            Cell::Float(born.unwrap_or(f64::NAN)),
            Cell::Float(sc.unwrap_or(f64::NAN)),
            Cell::Float(sin_delta),
            Cell::Text(status.into()),
        ]);
    }
    let mut out = table(
        vec![
            "l",
            "delta_born",
            "delta_self_consistent",
            "sin_delta",
            "status",
        ],
        rows,
    );
    out.meta.push(("k_resolved".into(), format_float(k)));
    Ok(out)
}

pub fn cmd_sigma(config: &RunConfig) -> Result<Table, CliError> {
    let (ctx, params) = context(config)?;
    let mut rows = Vec::new();
    for k in wave_numbers(config, &params, &ctx)? {
        let phases = match &config.inject_phases {
            Some(deltas) => PhaseShiftSet::new(k, deltas.clone(), PhaseMethod::Born)?,
            None => {
                let pot = yukawa(config)?;
                let lmax = lmax(config, &pot, k, &params, &ctx)?;
                let deltas = (0..=lmax)
                    .map(|l| born_phase_shift_with(l, k, &pot, &params, &ctx, config.kernel))
                    .collect::<Result<Vec<_>, _>>()?;
                PhaseShiftSet::new(k, deltas, PhaseMethod::Born)?
            }
        };
        let sigma = total_cross_section(&phases);
        let angular = total_cross_section_angular(&phases)?;
        let deviation = (sigma - angular).abs() / sigma.abs().max(f64::MIN_POSITIVE);
        if deviation.is_nan() || deviation > SIGMA_AGREEMENT_TOL {
            return Err(CliError::Consistency(format!(
                "k = {k}: phase-sum sigma {sigma:e} and angular sigma {angular:e} differ"
            )));
        }
        let forward = partial_amplitude(&phases, 0.0)?;
        rows.push(vec![
            Cell::Float(k),
            Cell::Int(phases.l_max() as u64),
            Cell::Float(sigma),
            Cell::Float(angular),
            Cell::Float(optical_theorem_residual(&phases)),
            Cell::Float(forward.im),
        ]);
    }
    Ok(table(
        vec![
            "k",
            "lmax",
            "sigma_phase_sum",
            "sigma_angular",
            "optical_residual",
            "im_f0",
        ],
        rows,
    ))
}
