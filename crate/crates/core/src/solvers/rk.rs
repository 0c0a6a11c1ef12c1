//! Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) over complex state
//! vectors, with fourth-order dense output so trajectories can be sampled
//! on arbitrary grids without constraining the step sequence.

use crate::error::{Error, Result};
use ndarray::{Array1, ArrayView1};
use num_complex::Complex64 as C64;

// Butcher tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights equal the last A row (first-same-as-last pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
// Dense-output weights for the quartic interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for RkOptions {
    fn default() -> Self {
        RkOptions {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 10_000_000,
        }
    }
}

fn weighted_err(err: &Array1<C64>, y0: &Array1<C64>, y1: &Array1<C64>, opt: &RkOptions) -> f64 {
    let n = err.len() as f64;
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1.iter()))
        .map(|(e, (a, b))| {
            let sc = opt.atol + opt.rtol * a.norm().max(b.norm());
            (e.norm() / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Integrate dy/dt = f(t, y) and return the solution sampled at `t_grid`.
/// The grid must be strictly increasing; the first entry is the initial
/// time and maps to `y0` unchanged.
pub fn integrate<F>(
    mut f: F,
    y0: Array1<C64>,
    t_grid: &[f64],
    opt: &RkOptions,
) -> Result<Vec<Array1<C64>>>
where
    F: FnMut(f64, &ArrayView1<C64>) -> Array1<C64>,
{
    if t_grid.is_empty() {
        return Err(Error::InvalidParam {
            name: "t_grid",
            message: "time grid is empty".into(),
        });
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParam {
            name: "t_grid",
            message: "time grid must be strictly increasing".into(),
        });
    }
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(y0.clone());
    if t_grid.len() == 1 {
        return Ok(out);
    }

    let t_start = t_grid[0];
    let t_end = *t_grid.last().unwrap();
    let span = t_end - t_start;
    let h_min = span * 1e-14;

    let mut t = t_start;
    let mut y = y0;
    let mut k1 = f(t, &y.view());

    // Startup step size from the local derivative scale.
    let d0 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let d1 = k1.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let mut h = if d1 > 1e-12 {
        (0.01 * (d0.max(1e-6) / d1)).min(span / 10.0)
    } else {
        span / 100.0
    };

    let mut next_grid = 1usize;
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opt.max_steps {
            return Err(Error::StepSizeUnderflow { t });
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }

        // Stage evaluations; k1 carried over from the previous step.
        let mut k = Vec::with_capacity(7);
        k.push(k1.clone());
        for s in 1..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let w = C64::new(h * A[s - 1][j], 0.0);
                ys.zip_mut_with(kj, |a, b| *a += w * b);
            }
            k.push(f(t + C[s] * h, &ys.view()));
        }
        // Sixth row gives the fifth-order solution.
        let mut y5 = y.clone();
        for (j, kj) in k.iter().enumerate() {
            let w = C64::new(h * A[5][j], 0.0);
            y5.zip_mut_with(kj, |a, b| *a += w * b);
        }
        let k7 = f(t + h, &y5.view());
        k.push(k7);

        // Embedded error estimate.
        let mut err: Array1<C64> = Array1::zeros(y.len());
        for (j, kj) in k.iter().enumerate() {
            let w = C64::new(h * (B5[j] - B4[j]), 0.0);
            err.zip_mut_with(kj, |a, b| *a += w * b);
        }
        let err_norm = weighted_err(&err, &y, &y5, opt);

        if err_norm <= 1.0 {
            // Dense output for every grid point inside this step.
            while next_grid < t_grid.len() && t_grid[next_grid] <= t + h + 1e-300 {
                let tg = t_grid[next_grid];
                if (tg - (t + h)).abs() <= 1e-12 * h.max(1e-30) {
                    out.push(y5.clone());
                } else {
                    let theta = (tg - t) / h;
                    out.push(interpolate(&y, &y5, &k, h, theta));
                }
                next_grid += 1;
            }
            t += h;
            y = y5;
            k1 = k.pop().unwrap();
            let fac = (0.9 * err_norm.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
            if h < h_min {
                return Err(Error::StepSizeUnderflow { t });
            }
        }
    }
    Ok(out)
}

/// Quartic interpolant over one accepted step, theta in [0, 1].
fn interpolate(y0: &Array1<C64>, y1: &Array1<C64>, k: &[Array1<C64>], h: f64, theta: f64) -> Array1<C64> {
    let n = y0.len();
    let mut r5: Array1<C64> = Array1::zeros(n);
    for (j, kj) in k.iter().enumerate() {
        if D[j] != 0.0 {
            let w = C64::new(h * D[j], 0.0);
            r5.zip_mut_with(kj, |a, b| *a += w * b);
        }
    }
    let ydiff = y1 - y0; // r2
    let hk1 = k[0].mapv(|v| C64::new(h, 0.0) * v);
    let bspl = &hk1 - &ydiff; // r3
    let r4 = &(&ydiff - &k[6].mapv(|v| C64::new(h, 0.0) * v)) - &bspl;

    let th = C64::new(theta, 0.0);
    let om = C64::new(1.0 - theta, 0.0);
    // y0 + theta*(r2 + (1-theta)*(r3 + theta*(r4 + (1-theta)*r5)))
    let mut acc = r5.mapv(|v| om * v);
    acc.zip_mut_with(&r4, |a, b| *a = (*a + b) * th);
    acc.zip_mut_with(&bspl, |a, b| *a = (*a + b) * om);
    acc.zip_mut_with(&ydiff, |a, b| *a = (*a + b) * th);
    acc.zip_mut_with(y0, |a, b| *a += b);
    acc
}
