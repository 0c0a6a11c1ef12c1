//! Photon statistics of cavity states.
//!
//! Correlation functions follow the equal-time definitions
//! g(n)(0) = <a_dag^n a^n> / <a_dag a>^n, and the photon-number
//! distribution P_n is the reduced cavity distribution
//! P_n = tr[(|n><n| x 1) rho], whose cumulative sums give the truncation
//! fidelities F_k = sum_{n<=k} P_n. Because a_dag^n a^n is diagonal in the
//! number basis, the moment and distribution routes must agree; tests hold
//! them to that.

use crate::error::{Error, Result};
use crate::model::Layout;
use ndarray::Array2;
use num_complex::Complex64 as C64;

/// Mean photon number below which correlation functions are reported as
/// undefined instead of dividing by a vanishing denominator.
pub const CORRELATION_FLOOR: f64 = 1e-8;

/// One-photon probability below which R21 is reported as undefined.
pub const P1_FLOOR: f64 = 1e-8;

/// The full statistics record for one cavity state.
///
/// `g2`, `g3` and `r21` are `None` when their denominators fall below the
/// floors; `p_n` has length `n_max + 1` and sums to one; `f_k` is its
/// cumulative sum, non-decreasing with `f_k[n_max] = 1`.
#[derive(Debug, Clone)]
pub struct PhotonStatistics {
    pub n_a: f64,
    pub g2: Option<f64>,
    pub g3: Option<f64>,
    pub p_n: Vec<f64>,
    pub f_k: Vec<f64>,
    pub r21: Option<f64>,
}

fn check_state(lay: &Layout, rho: &Array2<C64>) -> Result<()> {
    if rho.nrows() != lay.dim() || rho.ncols() != lay.dim() {
        return Err(Error::DimensionMismatch {
            expected: lay.dim(),
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// Mean cavity photon number tr(a_dag a rho).
pub fn mean_photon(lay: &Layout, rho: &Array2<C64>) -> Result<f64> {
    check_state(lay, rho)?;
    let a = lay.cavity_annihilation();
    let num = a.adjoint().mul_op(&a)?;
    Ok(num.expectation(rho).re)
}

/// Equal-time correlation g(n)(0) = tr(a_dag^n a^n rho) / tr(a_dag a rho)^n
/// for n = 2 or 3. Returns None when the mean photon number is below
/// [`CORRELATION_FLOOR`].
pub fn gn_zero(lay: &Layout, rho: &Array2<C64>, n: u32) -> Result<Option<f64>> {
    if n != 2 && n != 3 {
        return Err(Error::InvalidParam {
            name: "n",
            message: format!("correlation order must be 2 or 3, got {n}"),
        });
    }
    check_state(lay, rho)?;
    let n_a = mean_photon(lay, rho)?;
    if n_a < CORRELATION_FLOOR {
        return Ok(None);
    }
    let a = lay.cavity_annihilation();
    let mut an = a.clone();
    for _ in 1..n {
        an = an.mul_op(&a)?;
    }
    let num = an.adjoint().mul_op(&an)?.expectation(rho).re;
    Ok(Some(num / n_a.powi(n as i32)))
}

/// Reduced cavity photon-number distribution, length n_max + 1.
pub fn photon_probabilities(lay: &Layout, rho: &Array2<C64>) -> Result<Vec<f64>> {
    check_state(lay, rho)?;
    let mut p = vec![0.0; lay.n_max() + 1];
    let space = lay.space();
    for i in 0..lay.dim() {
        let n_cav = space.unravel(i)[lay.cavity_site()];
        p[n_cav] += rho[[i, i]].re;
    }
    Ok(p)
}

/// Cumulative fidelity F_k = sum_{n=0}^{k} P_n.
pub fn truncation_fidelity(lay: &Layout, rho: &Array2<C64>, k: usize) -> Result<f64> {
    if k > lay.n_max() {
        return Err(Error::InvalidParam {
            name: "k",
            message: format!("fidelity order {k} exceeds n_max {}", lay.n_max()),
        });
    }
    let p = photon_probabilities(lay, rho)?;
    Ok(p[..=k].iter().sum())
}

/// Probability ratio R21 = P2 / P1, or None when P1 is below [`P1_FLOOR`].
pub fn ratio_r21(lay: &Layout, rho: &Array2<C64>) -> Result<Option<f64>> {
    let p = photon_probabilities(lay, rho)?;
    if p[1] < P1_FLOOR {
        return Ok(None);
    }
    let p2 = if lay.n_max() >= 2 { p[2] } else { 0.0 };
    Ok(Some(p2 / p[1]))
}

/// Compute every statistic of [`PhotonStatistics`] for one state.
pub fn photon_statistics(lay: &Layout, rho: &Array2<C64>) -> Result<PhotonStatistics> {
    let n_a = mean_photon(lay, rho)?;
    let g2 = gn_zero(lay, rho, 2)?;
    let g3 = gn_zero(lay, rho, 3)?;
    let p_n = photon_probabilities(lay, rho)?;
    let mut f_k = Vec::with_capacity(p_n.len());
    let mut acc = 0.0;
    for p in &p_n {
        acc += p;
        f_k.push(acc);
    }
    let r21 = ratio_r21(lay, rho)?;
    Ok(PhotonStatistics {
        n_a,
        g2,
        g3,
        p_n,
        f_k,
        r21,
    })
}

/// Density matrix |psi><psi| of a pure state, for tests and oracles.
pub fn pure_density(psi: &[C64]) -> Array2<C64> {
    let d = psi.len();
    let mut rho = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            rho[[i, j]] = psi[i] * psi[j].conj();
        }
    }
    rho
}

/// Embed a pure cavity state (coefficients over Fock levels) with every
/// two-level system in its ground state.
pub fn cavity_state(lay: &Layout, coeffs: &[C64]) -> Result<Array2<C64>> {
    if coeffs.len() != lay.n_max() + 1 {
        return Err(Error::DimensionMismatch {
            expected: lay.n_max() + 1,
            found: coeffs.len(),
        });
    }
    let space = lay.space();
    let mut psi = vec![C64::new(0.0, 0.0); lay.dim()];
    let mut sites = vec![0usize; space.n_sites()];
    for (n, c) in coeffs.iter().enumerate() {
        sites[lay.cavity_site()] = n;
        psi[space.ravel(&sites)] = *c;
    }
    Ok(pure_density(&psi))
}

/// Identity check helper used by property tests: returns g2 computed from
/// the distribution, sum n(n-1) P_n / (sum n P_n)^2, or None at the floor.
pub fn g2_from_distribution(p: &[f64]) -> Option<f64> {
    let mean: f64 = p.iter().enumerate().map(|(n, q)| n as f64 * q).sum();
    if mean < CORRELATION_FLOOR {
        return None;
    }
    let num: f64 = p
        .iter()
        .enumerate()
        .map(|(n, q)| (n * n.saturating_sub(1)) as f64 * q)
        .sum();
    Some(num / (mean * mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Layout, Variant};
    use approx::assert_relative_eq;

    fn fock_state(lay: &Layout, n: usize) -> Array2<C64> {
        let mut coeffs = vec![C64::new(0.0, 0.0); lay.n_max() + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        cavity_state(lay, &coeffs).unwrap()
    }

    #[test]
    fn vacuum_has_no_photons() {
        let lay = Layout::new(Variant::CascadedEmptyCavity, 4).unwrap();
        let rho = fock_state(&lay, 0);
        let stats = photon_statistics(&lay, &rho).unwrap();
        assert_relative_eq!(stats.n_a, 0.0, epsilon = 1e-14);
        assert!(stats.g2.is_none());
        assert!(stats.r21.is_none());
        assert_relative_eq!(stats.p_n[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(stats.f_k[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn fock_two_statistics() {
        let lay = Layout::new(Variant::CascadedTc, 5).unwrap();
        let rho = fock_state(&lay, 2);
        assert_relative_eq!(mean_photon(&lay, &rho).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(
            gn_zero(&lay, &rho, 2).unwrap().unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            gn_zero(&lay, &rho, 3).unwrap().unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let p = photon_probabilities(&lay, &rho).unwrap();
        assert_relative_eq!(p[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_state_is_poissonian() {
        // |alpha|^2 = 0.5 with a deep truncation; statistics should be
        // Poissonian to truncation error.
        let lay = Layout::new(Variant::CascadedEmptyCavity, 14).unwrap();
        let alpha: f64 = 0.5f64.sqrt();
        let mut coeffs = Vec::with_capacity(15);
        let mut amp = (-alpha * alpha / 2.0).exp();
        let mut fact = 1.0;
        for n in 0..=14usize {
            if n > 0 {
                fact *= n as f64;
                amp = (-alpha * alpha / 2.0).exp() * alpha.powi(n as i32);
            }
            coeffs.push(C64::new(amp / fact.sqrt(), 0.0));
        }
        // Renormalize the truncated amplitudes.
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in coeffs.iter_mut() {
            *c /= C64::new(norm, 0.0);
        }
        let rho = cavity_state(&lay, &coeffs).unwrap();
        let stats = photon_statistics(&lay, &rho).unwrap();
        assert_relative_eq!(stats.n_a, 0.5, epsilon = 1e-3);
        assert_relative_eq!(stats.g2.unwrap(), 1.0, epsilon = 1e-3);
        assert_relative_eq!(stats.g3.unwrap(), 1.0, epsilon = 1e-3);
        assert_relative_eq!(stats.r21.unwrap(), 0.25, epsilon = 1e-3);
    }

    #[test]
    fn fidelities_are_cumulative_and_end_at_one() {
        let lay = Layout::new(Variant::CascadedJc, 3).unwrap();
        let rho = fock_state(&lay, 1);
        let stats = photon_statistics(&lay, &rho).unwrap();
        for w in stats.f_k.windows(2) {
            assert!(w[1] >= w[0] - 1e-14);
        }
        assert_relative_eq!(stats.f_k[3], 1.0, epsilon = 1e-8);
        assert!(truncation_fidelity(&lay, &rho, 9).is_err());
    }

    #[test]
    fn moment_and_distribution_g2_agree() {
        let lay = Layout::new(Variant::CascadedEmptyCavity, 6).unwrap();
        // A mixed diagonal state with a spread of photon numbers.
        let mut coeffs = vec![C64::new(0.0, 0.0); 7];
        coeffs[0] = C64::new(0.6f64.sqrt(), 0.0);
        coeffs[1] = C64::new(0.3f64.sqrt(), 0.0);
        coeffs[3] = C64::new(0.1f64.sqrt(), 0.0);
        let rho = cavity_state(&lay, &coeffs).unwrap();
        let g2_mom = gn_zero(&lay, &rho, 2).unwrap().unwrap();
        let p = photon_probabilities(&lay, &rho).unwrap();
        let g2_dist = g2_from_distribution(&p).unwrap();
        assert_relative_eq!(g2_mom, g2_dist, epsilon = 1e-10);
    }
}
