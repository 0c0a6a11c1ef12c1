//! Superoperator assembly by density-matrix vectorization.
//!
//! Column-stacking convention: vec(rho)[j*D + i] = rho[i, j], so that
//! vec(A rho B) = (B^T kron A) vec(rho). The generator assembled here is
//!
//!   L = -i (1 kron H - H^T kron 1)
//!     + sum_k r_k [ conj(O_k) kron O_k
//!                   - 1/2 (1 kron O_k^dag O_k) - 1/2 ((O_k^dag O_k)^T kron 1) ]
//!     - c [ 1 kron (a_dag s) - (a_dag)^T kron s
//!           + (s_dag a)^T kron 1 - conj(s) kron a ],
//!
//! the last bracket being the vectorized unidirectional coupling
//! -c { [a_dag, s rho] + [rho s_dag, a] }.

use crate::error::{Error, Result};
use crate::model::LiouvillianSpec;
use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64 as C64;

/// Stack columns: v[j*D + i] = rho[i, j].
pub fn vectorize(rho: &Array2<C64>) -> Array1<C64> {
    let d = rho.nrows();
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[j * d + i] = rho[(i, j)];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &ArrayView1<C64>, d: usize) -> Result<Array2<C64>> {
    if v.len() != d * d {
        return Err(Error::ShapeMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    let mut rho = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            rho[(i, j)] = v[j * d + i];
        }
    }
    Ok(rho)
}

/// Compressed sparse rows over complex doubles.
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<C64>,
}

impl Csr {
    pub fn from_triplets(n: usize, mut trips: Vec<(usize, usize, C64)>) -> Csr {
        trips.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(trips.len());
        let mut values: Vec<C64> = Vec::with_capacity(trips.len());
        row_ptr.push(0);
        let mut row = 0usize;
        for (r, c, v) in trips {
            while row < r {
                row_ptr.push(col_idx.len());
                row += 1;
            }
            if let (Some(&last_c), true) = (col_idx.last(), row_ptr[row] < col_idx.len()) {
                if last_c == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            col_idx.push(c);
            values.push(v);
        }
        while row < n {
            row_ptr.push(col_idx.len());
            row += 1;
        }
        Csr {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, v: &ArrayView1<C64>) -> Array1<C64> {
        let mut out = Array1::zeros(self.n);
        for i in 0..self.n {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * v[self.col_idx[k]];
            }
            out[i] = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude; a cheap stand-in for the operator scale.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Iterate over stored entries as (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }
}

/// The assembled D^2 x D^2 generator in sparse form.
#[derive(Debug, Clone)]
pub struct SuperOp {
    dim_rho: usize,
    csr: Csr,
}

/// Append coeff * (B^T kron A) to the triplet list, skipping exact zeros.
/// Entry ((p*D + q), (r*D + s)) = B[r, p] * A[q, s].
fn add_kron(
    trips: &mut Vec<(usize, usize, C64)>,
    coeff: C64,
    b: &Array2<C64>,
    a: &Array2<C64>,
) {
    let d = a.nrows();
    let zero = C64::new(0.0, 0.0);
    let b_nz: Vec<(usize, usize, C64)> = b
        .indexed_iter()
        .filter(|(_, v)| **v != zero)
        .map(|((r, p), v)| (r, p, *v))
        .collect();
    let a_nz: Vec<(usize, usize, C64)> = a
        .indexed_iter()
        .filter(|(_, v)| **v != zero)
        .map(|((q, s), v)| (q, s, *v))
        .collect();
    for &(r, p, bv) in &b_nz {
        for &(q, s, av) in &a_nz {
            trips.push((p * d + q, r * d + s, coeff * bv * av));
        }
    }
}

impl SuperOp {
    pub fn from_spec(spec: &LiouvillianSpec) -> Result<SuperOp> {
        let d = spec.dim();
        let eye: Array2<C64> = Array2::eye(d);
        let mut trips: Vec<(usize, usize, C64)> = Vec::new();
        let i_unit = C64::new(0.0, 1.0);

        // -i (1 kron H) + i (H^T kron 1): A rho with A=H, rho B with B=H
        let h = spec.hamiltonian.matrix();
        add_kron(&mut trips, -i_unit, &eye, h);
        add_kron(&mut trips, i_unit, h, &eye);

        for (rate, op) in &spec.collapse_terms {
            if *rate == 0.0 {
                continue;
            }
            let o = op.matrix();
            let od = op.adjoint();
            let odo = (&od * op).matrix().clone();
            // O rho O^dag: A=O, B=O^dag
            add_kron(&mut trips, C64::new(*rate, 0.0), od.matrix(), o);
            // -1/2 O^dag O rho and -1/2 rho O^dag O
            add_kron(&mut trips, C64::new(-rate / 2.0, 0.0), &eye, &odo);
            add_kron(&mut trips, C64::new(-rate / 2.0, 0.0), &odo, &eye);
        }

        if let Some((c, s, a)) = &spec.cascade_term {
            if *c != 0.0 {
                let coeff = C64::new(-*c, 0.0);
                let ad = a.adjoint();
                let sd = s.adjoint();
                let ad_s = (&ad * s).matrix().clone();
                let sd_a = (&sd * a).matrix().clone();
                // a_dag s rho
                add_kron(&mut trips, coeff, &eye, &ad_s);
                // - s rho a_dag
                add_kron(&mut trips, -coeff, ad.matrix(), s.matrix());
                // rho s_dag a
                add_kron(&mut trips, coeff, &sd_a, &eye);
                // - a rho s_dag
                add_kron(&mut trips, -coeff, sd.matrix(), a.matrix());
            }
        }

        Ok(SuperOp {
            dim_rho: d,
            csr: Csr::from_triplets(d * d, trips),
        })
    }

    /// Dimension D of the underlying density matrix (the generator is D^2 x D^2).
    pub fn dim_rho(&self) -> usize {
        self.dim_rho
    }

    pub fn csr(&self) -> &Csr {
        &self.csr
    }

    /// L applied to a vectorized state.
    pub fn apply_vec(&self, v: &ArrayView1<C64>) -> Array1<C64> {
        self.csr.matvec(v)
    }

    /// L applied to a density matrix, via vectorize / matvec / unvectorize.
    pub fn apply_matrix(&self, rho: &Array2<C64>) -> Result<Array2<C64>> {
        let v = vectorize(rho);
        let w = self.apply_vec(&v.view());
        unvectorize(&w.view(), self.dim_rho)
    }
}

/// Matrix-free right-hand side of the master equation, computed term by
/// term with dense products: -i[H, rho] + sum_k r_k D[O_k] rho + cascade.
/// Must agree with the assembled path to round-off; used as a cross-check
/// and for small systems.
pub fn apply(spec: &LiouvillianSpec, rho: &Array2<C64>) -> Result<Array2<C64>> {
    let d = spec.dim();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: rho.nrows(),
        });
    }
    let h = spec.hamiltonian.matrix();
    let i_unit = C64::new(0.0, 1.0);
    let mut out = (rho.dot(h) - h.dot(rho)).mapv(|v| i_unit * v);

    for (rate, op) in &spec.collapse_terms {
        if *rate == 0.0 {
            continue;
        }
        let o = op.matrix();
        let od = op.adjoint().matrix().clone();
        let odo = od.dot(o);
        let jump = o.dot(rho).dot(&od);
        let anti = odo.dot(rho) + rho.dot(&odo);
        out = out + jump.mapv(|v| C64::new(*rate, 0.0) * v)
            - anti.mapv(|v| C64::new(rate / 2.0, 0.0) * v);
    }

    if let Some((c, s, a)) = &spec.cascade_term {
        if *c != 0.0 {
            let am = a.matrix();
            let ad = a.adjoint().matrix().clone();
            let sm = s.matrix();
            let sd = s.adjoint().matrix().clone();
            let s_rho = sm.dot(rho);
            let rho_sd = rho.dot(&sd);
            // [a_dag, s rho] + [rho s_dag, a]
            let bracket =
                ad.dot(&s_rho) - s_rho.dot(&ad) + rho_sd.dot(am) - am.dot(&rho_sd);
            out = out - bracket.mapv(|v| C64::new(*c, 0.0) * v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn vectorize_ground_projector() {
        let rho = array![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
        ];
        let v = vectorize(&rho);
        assert_eq!(v[0], C64::new(1.0, 0.0));
        assert!(v.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn vectorize_roundtrip() {
        let rho = array![
            [C64::new(0.3, 0.0), C64::new(0.1, -0.2)],
            [C64::new(0.1, 0.2), C64::new(0.7, 0.0)]
        ];
        let v = vectorize(&rho);
        let back = unvectorize(&v.view(), 2).unwrap();
        assert_eq!(rho, back);
    }

    #[test]
    fn csr_matvec_matches_dense() {
        let trips = vec![
            (0, 0, C64::new(2.0, 0.0)),
            (0, 2, C64::new(0.0, 1.0)),
            (2, 1, C64::new(-1.0, 0.0)),
            (0, 2, C64::new(1.0, 0.0)), // duplicate, must merge
        ];
        let m = Csr::from_triplets(3, trips);
        assert_eq!(m.nnz(), 3);
        let v = Array1::from(vec![
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(0.0, 3.0),
        ]);
        let w = m.matvec(&v.view());
        assert!((w[0] - C64::new(-1.0, 3.0)).norm() < 1e-15);
        assert!((w[1]).norm() == 0.0);
        assert!((w[2] - C64::new(-2.0, 0.0)).norm() < 1e-15);
    }
}
