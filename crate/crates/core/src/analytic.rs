//! Closed-form oracles for the numerical stack: dressed-state spectra of
//! the two-atom Tavis-Cummings Hamiltonian in the one-, two- and
//! three-excitation manifolds, and the optical-Bloch steady state of a
//! driven, damped two-level system.
//!
//! Spectra are expressed in the laboratory frame with absolute cavity
//! frequency omega_c and atom frequency omega; comparison against the
//! rotating-frame target Hamiltonian substitutes omega_c -> Delta_C and
//! omega -> Delta_j.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Which branch of a dressed multiplet a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Zero,
    Plus,
}

/// One dressed level: its energy plus the amplitude decomposition over
/// the product basis |photons, atom1, atom2> (true = excited).
#[derive(Debug, Clone)]
pub struct DressedLevel {
    pub excitation: usize,
    pub branch: Branch,
    pub energy: f64,
    pub amplitudes: Vec<(usize, bool, bool, f64)>,
}

impl DressedLevel {
    /// Euclidean norm of the amplitude vector; 1 for a normalized state.
    pub fn amplitude_norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|&(_, _, _, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }
}

fn check_excitation(n: usize) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParam {
            name: "n",
            message: format!("excitation manifold must be 1..=3, got {n}"),
        });
    }
    Ok(())
}

/// Dressed levels of the resonant two-atom Tavis-Cummings Hamiltonian
/// (omega = omega_c) in the n-excitation manifold, n = 1..=3.
///
/// Each manifold holds one dark level per excitation-conserving symmetry
/// (energy n omega_c) plus a bright pair split by sqrt(2) g, sqrt(6) g,
/// sqrt(10) g for n = 1, 2, 3. Levels are returned in ascending energy:
/// minus branch, zero branch(es), plus branch.
pub fn tc_resonant_spectrum(g: f64, omega_c: f64, n: usize) -> Result<Vec<DressedLevel>> {
    check_excitation(n)?;
    if g < 0.0 {
        return Err(Error::InvalidParam {
            name: "g",
            message: format!("coupling must be nonnegative, got {g}"),
        });
    }
    let centroid = n as f64 * omega_c;
    let r2 = std::f64::consts::SQRT_2;
    let levels = match n {
        1 => {
            let split = r2 * g;
            vec![
                DressedLevel {
                    excitation: 1,
                    branch: Branch::Minus,
                    energy: centroid - split,
                    amplitudes: vec![
                        (1, false, false, 1.0 / r2),
                        (0, true, false, -0.5),
                        (0, false, true, -0.5),
                    ],
                },
                DressedLevel {
                    excitation: 1,
                    branch: Branch::Zero,
                    energy: centroid,
                    amplitudes: vec![(0, false, true, 1.0 / r2), (0, true, false, -1.0 / r2)],
                },
                DressedLevel {
                    excitation: 1,
                    branch: Branch::Plus,
                    energy: centroid + split,
                    amplitudes: vec![
                        (1, false, false, 1.0 / r2),
                        (0, true, false, 0.5),
                        (0, false, true, 0.5),
                    ],
                },
            ]
        }
        2 => {
            let split = 6f64.sqrt() * g;
            let bright = |sign: f64| {
                vec![
                    (0, true, true, 1.0 / 6f64.sqrt()),
                    (2, false, false, 1.0 / 3f64.sqrt()),
                    (1, true, false, sign * 0.5),
                    (1, false, true, sign * 0.5),
                ]
            };
            vec![
                DressedLevel {
                    excitation: 2,
                    branch: Branch::Minus,
                    energy: centroid - split,
                    amplitudes: bright(-1.0),
                },
                DressedLevel {
                    excitation: 2,
                    branch: Branch::Zero,
                    energy: centroid,
                    amplitudes: vec![(1, false, true, 1.0 / r2), (1, true, false, -1.0 / r2)],
                },
                DressedLevel {
                    excitation: 2,
                    branch: Branch::Zero,
                    energy: centroid,
                    amplitudes: vec![
                        (2, false, false, 1.0 / 3f64.sqrt()),
                        (0, true, true, -2.0 / 6f64.sqrt()),
                    ],
                },
                DressedLevel {
                    excitation: 2,
                    branch: Branch::Plus,
                    energy: centroid + split,
                    amplitudes: bright(1.0),
                },
            ]
        }
        _ => {
            let split = 10f64.sqrt() * g;
            let bright = |sign: f64| {
                vec![
                    (1, true, true, 1.0 / 5f64.sqrt()),
                    (3, false, false, 3f64.sqrt() / 10f64.sqrt()),
                    (2, true, false, sign * 0.5),
                    (2, false, true, sign * 0.5),
                ]
            };
            vec![
                DressedLevel {
                    excitation: 3,
                    branch: Branch::Minus,
                    energy: centroid - split,
                    amplitudes: bright(-1.0),
                },
                DressedLevel {
                    excitation: 3,
                    branch: Branch::Zero,
                    energy: centroid,
                    amplitudes: vec![(2, false, true, 1.0 / r2), (2, true, false, -1.0 / r2)],
                },
                DressedLevel {
                    excitation: 3,
                    branch: Branch::Zero,
                    energy: centroid,
                    amplitudes: vec![
                        (3, false, false, 2f64.sqrt() / 5f64.sqrt()),
                        (1, true, true, -(3f64.sqrt()) / 5f64.sqrt()),
                    ],
                },
                DressedLevel {
                    excitation: 3,
                    branch: Branch::Plus,
                    energy: centroid + split,
                    amplitudes: bright(1.0),
                },
            ]
        }
    };
    Ok(levels)
}

/// Bright-pair energies of the detuned two-atom Tavis-Cummings
/// Hamiltonian, omega_1 = omega_2 = omega != omega_c, in closed form:
///
///   E_1(+-) = (omega + omega_c)/2 +- sqrt(8 g^2 + d^2)/2
///   E_2(+-) =  omega + omega_c    +- sqrt(24 g^2 + d^2)/2
///   E_3(+-) = 3(omega + omega_c)/2 +- sqrt(40 g^2 + d^2)/2
///
/// with d = omega - omega_c. The n = 1 pair is exact. For n = 2 and 3 at
/// nonzero detuning these are compact approximations: the exact
/// symmetric-sector energies solve a cubic characteristic equation (for
/// n = 2, x^3 - (d^2 + 6 g^2) x + 2 d g^2 = 0 with x centered on
/// omega + omega_c) that admits no such radical form. All three pairs
/// reduce to the resonant spectrum at d = 0.
///
/// The amplitude vectors attached here are the zero-detuning limits; the
/// true detuned eigenvectors acquire d-dependent weights.
pub fn tc_detuned_spectrum(g: f64, omega: f64, omega_c: f64, n: usize) -> Result<Vec<DressedLevel>> {
    check_excitation(n)?;
    if g < 0.0 {
        return Err(Error::InvalidParam {
            name: "g",
            message: format!("coupling must be nonnegative, got {g}"),
        });
    }
    let d = omega - omega_c;
    let (centroid, half_split) = match n {
        1 => ((omega + omega_c) / 2.0, (8.0 * g * g + d * d).sqrt() / 2.0),
        2 => (omega + omega_c, (24.0 * g * g + d * d).sqrt() / 2.0),
        _ => (1.5 * (omega + omega_c), (40.0 * g * g + d * d).sqrt() / 2.0),
    };
    let resonant = tc_resonant_spectrum(g, omega_c, n)?;
    let mut out = Vec::with_capacity(2);
    for level in resonant {
        let energy = match level.branch {
            Branch::Minus => centroid - half_split,
            Branch::Plus => centroid + half_split,
            Branch::Zero => continue,
        };
        out.push(DressedLevel { energy, ..level });
    }
    Ok(out)
}

/// Steady state of a classically driven, damped two-level system with
/// drive amplitude xi, detuning delta_s and linewidth gamma_s:
/// returns (excited population, coherence <sigma>),
///
///   population = xi^2 / (delta_s^2 + gamma_s^2/4 + 2 xi^2)
///   <sigma>    = -xi (delta_s + i gamma_s/2) / (delta_s^2 + gamma_s^2/4 + 2 xi^2)
pub fn driven_tls_steady(xi: f64, delta_s: f64, gamma_s: f64) -> Result<(f64, C64)> {
    if gamma_s <= 0.0 {
        return Err(Error::InvalidParam {
            name: "gamma_s",
            message: format!("linewidth must be positive, got {gamma_s}"),
        });
    }
    let denom = delta_s * delta_s + gamma_s * gamma_s / 4.0 + 2.0 * xi * xi;
    let population = xi * xi / denom;
    let coherence = C64::new(-xi * delta_s / denom, -xi * gamma_s / (2.0 * denom));
    Ok((population, coherence))
}
