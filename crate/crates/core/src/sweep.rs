//! Parameter-sweep orchestration: detuning and coupling scans over steady
//! states, threshold bisection on g2, and the master-vs-effective
//! trajectory comparison. Grid points are independent and evaluated in
//! parallel; rows keep axis order and runs are deterministic.

use crate::error::{Error, Result};
use crate::model::{build_effective_hamiltonian, build_liouvillian_spec, ModelParams};
use crate::observables::{photon_statistics, PhotonStatistics};
use crate::solvers::{evolve_effective, evolve_master, steady_state, RESIDUAL_TOL};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::str::FromStr;

/// Which parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Cavity-drive detuning delta_c; atom detunings follow their offsets.
    DeltaC,
    /// Atom-cavity coupling g.
    G,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::DeltaC => "delta_c",
            SweepAxis::G => "g",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_c" => Ok(SweepAxis::DeltaC),
            "g" => Ok(SweepAxis::G),
            other => Err(Error::InvalidParam {
                name: "axis",
                message: format!("unknown sweep axis '{other}' (expected delta_c or g)"),
            }),
        }
    }
}

/// A full sweep description: base model, axis, and grid values.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: ModelParams,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
}

impl SweepConfig {
    /// Default detuning grid: 161 points spanning [-20, 20], wide enough
    /// to cover every dressed-state feature at couplings of order one.
    pub fn default_grid() -> Vec<f64> {
        (0..161).map(|i| -20.0 + 0.25 * i as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.grid.is_empty() {
            return Err(Error::InvalidParam {
                name: "grid",
                message: "sweep grid is empty".into(),
            });
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParam {
                name: "grid",
                message: "sweep grid must be strictly increasing".into(),
            });
        }
        if self.base.n_max < 3 {
            return Err(Error::InvalidParam {
                name: "n_max",
                message: format!(
                    "three-photon statistics need n_max >= 3, got {}",
                    self.base.n_max
                ),
            });
        }
        Ok(())
    }

    fn params_at(&self, value: f64) -> ModelParams {
        match self.axis {
            SweepAxis::DeltaC => self.base.at_delta_c(value),
            SweepAxis::G => self.base.at_g(value),
        }
    }
}

/// Solve diagnostics attached to each sweep row.
#[derive(Debug, Clone)]
pub struct SweepDiagnostics {
    /// Relative steady-state residual (NaN when the solve failed).
    pub residual: f64,
    /// Gap-probe ratio from the steady solver (NaN when the solve failed).
    pub gap_ratio: f64,
    /// Most negative eigenvalue seen before clipping (NaN when the solve
    /// failed); should stay above -1e-8.
    pub min_eigenvalue: f64,
    /// Undefined observables and failure notes; empty for a clean row.
    pub flags: Vec<String>,
}

/// One grid point: axis value, statistics (when solved) and diagnostics.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_value: f64,
    pub statistics: Option<PhotonStatistics>,
    pub diagnostics: SweepDiagnostics,
}

impl SweepRow {
    pub fn is_flagged(&self) -> bool {
        !self.diagnostics.flags.is_empty()
    }
}

fn solve_point(params: &ModelParams, axis_value: f64) -> SweepRow {
    let mut flags = Vec::new();
    let solved = build_liouvillian_spec(params)
        .and_then(|spec| steady_state(&spec))
        .and_then(|sol| {
            let lay = params.layout()?;
            let stats = photon_statistics(&lay, &sol.rho)?;
            Ok((sol, stats))
        });
    match solved {
        Ok((sol, stats)) => {
            if sol.residual >= RESIDUAL_TOL {
                flags.push(format!("residual {:.3e}", sol.residual));
            }
            if stats.g2.is_none() {
                flags.push("g2 undefined".into());
            }
            if stats.g3.is_none() {
                flags.push("g3 undefined".into());
            }
            if stats.r21.is_none() {
                flags.push("r21 undefined".into());
            }
            SweepRow {
                axis_value,
                statistics: Some(stats),
                diagnostics: SweepDiagnostics {
                    residual: sol.residual,
                    gap_ratio: sol.gap_ratio,
                    min_eigenvalue: sol.min_eigenvalue,
                    flags,
                },
            }
        }
        Err(e) => SweepRow {
            axis_value,
            statistics: None,
            diagnostics: SweepDiagnostics {
                residual: f64::NAN,
                gap_ratio: f64::NAN,
                min_eigenvalue: f64::NAN,
                flags: vec![format!("solver error: {e}")],
            },
        },
    }
}

/// Evaluate the sweep. Points run in parallel; the returned rows keep the
/// grid order, and per-point failures degrade to flagged rows rather than
/// aborting the scan.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let rows: Vec<SweepRow> = config
        .grid
        .par_iter()
        .map(|&v| solve_point(&config.params_at(v), v))
        .collect();
    Ok(rows)
}

fn g2_at(base: &ModelParams, g: f64) -> Result<f64> {
    let params = base.at_delta_c(0.0).at_g(g);
    let spec = build_liouvillian_spec(&params)?;
    let sol = steady_state(&spec)?.checked()?;
    let lay = params.layout()?;
    let stats = photon_statistics(&lay, &sol.rho)?;
    stats.g2.ok_or_else(|| {
        Error::Undefined(format!(
            "g2 undefined at g = {g}: mean photon number below floor"
        ))
    })
}

/// Bisect the coupling at which g2 crosses 1 (at delta_c = 0).
///
/// The bracket must straddle the crossing: g2(g_lo) < 1 < g2(g_hi).
/// Iterates until |g2 - 1| < 1e-6 at the midpoint.
pub fn find_g2_threshold(base: &ModelParams, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::BracketError {
            lo,
            hi,
            f_lo: f64::NAN,
            f_hi: f64::NAN,
        });
    }
    let f_lo = g2_at(base, lo)? - 1.0;
    let f_hi = g2_at(base, hi)? - 1.0;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketError { lo, hi, f_lo, f_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = g2_at(base, mid)? - 1.0;
        if f_mid.abs() < 1e-6 {
            return Ok(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Err(Error::Undefined(
        "threshold bisection did not converge to |g2 - 1| < 1e-6".into(),
    ))
}

/// One row of the master-vs-effective comparison table.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonRow {
    /// Time in 2 pi / gamma_s units.
    pub t: f64,
    pub n_a_master: f64,
    pub n_a_effective: f64,
}

/// The comparison table plus its maximum absolute deviation.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub max_deviation: f64,
}

/// Evolve the cavity photon number from vacuum under both the master
/// equation and the norm-normalized no-jump wavefunction, on a shared
/// grid of `n_points` times in [0, t_max].
pub fn compare_master_effective(
    params: &ModelParams,
    t_max: f64,
    n_points: usize,
) -> Result<Comparison> {
    if !params.variant.has_source() {
        return Err(Error::NotCascaded {
            variant: params.variant.name(),
        });
    }
    if t_max < 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidParam {
            name: "t_max",
            message: format!("t_max must be finite and nonnegative, got {t_max}"),
        });
    }
    if n_points == 0 {
        return Err(Error::InvalidParam {
            name: "n_points",
            message: "need at least one sample point".into(),
        });
    }
    let grid: Vec<f64> = if t_max == 0.0 || n_points == 1 {
        vec![0.0]
    } else {
        (0..n_points)
            .map(|i| t_max * i as f64 / (n_points - 1) as f64)
            .collect()
    };

    let lay = params.layout()?;
    let d = lay.dim();
    let a = lay.cavity_annihilation();
    let number = a.adjoint().mul_op(&a)?;

    let spec = build_liouvillian_spec(params)?;
    let mut rho0 = Array2::<C64>::zeros((d, d));
    rho0[[0, 0]] = C64::new(1.0, 0.0);
    let master = evolve_master(&spec, &rho0, &grid)?;
    let n_master = master.expectation(&number)?;

    let h_eff = build_effective_hamiltonian(params)?;
    let mut psi0 = Array1::<C64>::zeros(d);
    psi0[0] = C64::new(1.0, 0.0);
    let effective = evolve_effective(&h_eff, &psi0, &grid)?;
    let n_effective = effective.expectation(&number)?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut max_dev = 0.0f64;
    for ((t, m), e) in grid.iter().zip(&n_master).zip(&n_effective) {
        max_dev = max_dev.max((m - e).abs());
        rows.push(ComparisonRow {
            t: *t,
            n_a_master: *m,
            n_a_effective: *e,
        });
    }
    Ok(Comparison {
        rows,
        max_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = ModelParams::new(Variant::CascadedEmptyCavity);
        let cfg = SweepConfig {
            base: base.clone(),
            axis: SweepAxis::DeltaC,
            grid: vec![],
        };
        assert!(cfg.validate().is_err());
        let cfg = SweepConfig {
            base,
            axis: SweepAxis::DeltaC,
            grid: vec![0.0, 0.0],
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_grid_has_161_points() {
        let grid = SweepConfig::default_grid();
        assert_eq!(grid.len(), 161);
        assert_eq!(grid[0], -20.0);
        assert_eq!(*grid.last().unwrap(), 20.0);
    }

    #[test]
    fn degenerate_bracket_is_rejected() {
        let base = ModelParams::new(Variant::CascadedTc);
        match find_g2_threshold(&base, (1.0, 1.0)) {
            Err(Error::BracketError { .. }) => {}
            other => panic!("expected bracket error, got {other:?}"),
        }
    }

    #[test]
    fn comparison_at_zero_time_is_vacuum() {
        let mut p = ModelParams::new(Variant::CascadedEmptyCavity);
        p.n_max = 3;
        let cmp = compare_master_effective(&p, 0.0, 5).unwrap();
        assert_eq!(cmp.rows.len(), 1);
        assert_eq!(cmp.rows[0].n_a_master, 0.0);
        assert_eq!(cmp.rows[0].n_a_effective, 0.0);
    }

    #[test]
    fn comparison_requires_a_source() {
        let p = ModelParams::new(Variant::ClassicalTc);
        assert!(compare_master_effective(&p, 1.0, 3).is_err());
    }
}
