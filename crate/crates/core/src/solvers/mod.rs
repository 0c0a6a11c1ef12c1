//! Time evolution of the master equation and the non-Hermitian
//! wavefunction, plus steady-state extraction.
//!
//! All rates in a model are dimensionless, measured in units of the source
//! linewidth gamma_s. Trajectory times are in units of 2 pi / gamma_s, so
//! the physical generator enters the integrator scaled by 2 pi.

pub mod rk;
pub mod steady;

pub use rk::RkOptions;
pub use steady::{
    steady_state, steady_state_from_superop, SteadySolution, GAP_RTOL, RESIDUAL_TOL,
};

use crate::error::{Error, Result};
use crate::hilbert::Operator;
use crate::liouvillian::{unvectorize, vectorize, SuperOp};
use crate::model::LiouvillianSpec;
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Conversion between trajectory time (2 pi / gamma_s units) and the
/// dimensionless phase the rate constants are written in.
pub const TIME_SCALE: f64 = 2.0 * std::f64::consts::PI;

/// Smallest trustworthy wavefunction norm: ten times the integrator's
/// absolute tolerance. A no-jump state decayed below this is dominated by
/// integration noise, so sampling it reports [`Error::NormUnderflow`]
/// rather than returning numbers that only look meaningful.
pub const NORM_FLOOR: f64 = 1e-9;

/// Time-ordered states from one evolution run.
#[derive(Debug, Clone)]
pub enum TrajectoryStates {
    /// Density matrices from master-equation evolution.
    Density(Vec<Array2<C64>>),
    /// Unnormalized wavefunctions from the no-jump effective evolution.
    Wave(Vec<Array1<C64>>),
}

/// A sampled solution: strictly increasing times plus aligned states.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: TrajectoryStates,
}

impl Trajectory {
    /// Sample times in units of 2 pi / gamma_s.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Density-matrix states, if this is a master-equation trajectory.
    pub fn density_states(&self) -> Option<&[Array2<C64>]> {
        match &self.states {
            TrajectoryStates::Density(v) => Some(v),
            TrajectoryStates::Wave(_) => None,
        }
    }

    /// Unnormalized wavefunctions, if this is an effective trajectory.
    pub fn wave_states(&self) -> Option<&[Array1<C64>]> {
        match &self.states {
            TrajectoryStates::Wave(v) => Some(v),
            TrajectoryStates::Density(_) => None,
        }
    }

    /// Norms of the wavefunction states; None for density trajectories.
    pub fn norms(&self) -> Option<Vec<f64>> {
        self.wave_states().map(|states| {
            states
                .iter()
                .map(|psi| psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
                .collect()
        })
    }

    /// Expectation value of `op` along the trajectory.
    ///
    /// Density states use tr(O rho); wavefunctions are norm-ratio
    /// normalized, <psi|O|psi> / <psi|psi>, so the no-jump mean tracks
    /// the master-equation mean. The real part is returned.
    pub fn expectation(&self, op: &Operator) -> Result<Vec<f64>> {
        match &self.states {
            TrajectoryStates::Density(states) => states
                .iter()
                .map(|rho| {
                    if rho.nrows() != op.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: op.dim(),
                            found: rho.nrows(),
                        });
                    }
                    Ok(op.expectation(rho).re)
                })
                .collect(),
            TrajectoryStates::Wave(states) => states
                .iter()
                .map(|psi| {
                    if psi.len() != op.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: op.dim(),
                            found: psi.len(),
                        });
                    }
                    let opsi = op.matrix().dot(psi);
                    let num: C64 = psi.iter().zip(opsi.iter()).map(|(a, b)| a.conj() * b).sum();
                    let den: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
                    if den <= 0.0 {
                        return Err(Error::Undefined(
                            "expectation of a zero-norm state".into(),
                        ));
                    }
                    Ok((num / C64::new(den, 0.0)).re)
                })
                .collect(),
        }
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParam {
            name: "t_grid",
            message: "time grid is empty".into(),
        });
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidParam {
            name: "t_grid",
            message: format!("time grid must start at 0, got {}", t_grid[0]),
        });
    }
    Ok(())
}

/// Integrate the master equation from `rho0`, sampling at `t_grid`
/// (strictly increasing, starting at 0, in 2 pi / gamma_s units).
pub fn evolve_master(
    spec: &LiouvillianSpec,
    rho0: &Array2<C64>,
    t_grid: &[f64],
) -> Result<Trajectory> {
    check_grid(t_grid)?;
    let d = spec.dim();
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: rho0.nrows().max(rho0.ncols()),
        });
    }
    let trace: C64 = (0..d).map(|i| rho0[[i, i]]).sum();
    if (trace - C64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(Error::InvalidParam {
            name: "rho0",
            message: format!("initial trace {} is not 1", trace.re),
        });
    }
    let herm_err = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (rho0[[i, j]] - rho0[[j, i]].conj()).norm())
        .fold(0.0f64, f64::max);
    if herm_err > 1e-8 {
        return Err(Error::InvalidParam {
            name: "rho0",
            message: format!("initial state is not Hermitian ({herm_err:.2e})"),
        });
    }

    let sup = SuperOp::from_spec(spec)?;
    let v0 = vectorize(rho0);
    let sol = rk::integrate(
        |_t, y| {
            let mut out = sup.csr().matvec(y);
            out.mapv_inplace(|v| v * TIME_SCALE);
            out
        },
        v0,
        t_grid,
        &RkOptions::default(),
    )?;
    let states = sol
        .iter()
        .map(|v| unvectorize(&v.view(), d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states: TrajectoryStates::Density(states),
    })
}

/// Integrate the no-jump evolution d|psi>/dt = -i H_eff |psi| from a
/// normalized `psi0`, sampling at `t_grid`. States are returned
/// unnormalized; their norm decays monotonically.
pub fn evolve_effective(
    h_eff: &Operator,
    psi0: &Array1<C64>,
    t_grid: &[f64],
) -> Result<Trajectory> {
    check_grid(t_grid)?;
    let d = h_eff.dim();
    if psi0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi0.len(),
        });
    }
    let norm0: f64 = psi0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (norm0 - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParam {
            name: "psi0",
            message: format!("initial state norm {norm0} is not 1"),
        });
    }

    let h = h_eff.matrix();
    let phase = C64::new(0.0, -TIME_SCALE);
    let sol = rk::integrate(
        |_t, y| h.dot(y).mapv(|v| phase * v),
        psi0.clone(),
        t_grid,
        &RkOptions::default(),
    )?;
    for (t, psi) in t_grid.iter().zip(&sol) {
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_FLOOR {
            return Err(Error::NormUnderflow { t: *t, norm });
        }
    }
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states: TrajectoryStates::Wave(sol),
    })
}
