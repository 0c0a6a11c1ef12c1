//! Truncated tensor-product Hilbert space and the operators living on it.
//!
//! Subsystem ordering is fixed once for the whole crate:
//! `[source TLS, cavity, atom 1, atom 2]`, with absent subsystems dropped
//! without renumbering the rest. Basis indices are mixed-radix with the
//! leftmost subsystem varying slowest.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Sub};

/// Factorized dimension bookkeeping for a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    dims: Vec<usize>,
}

impl Space {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParam {
                name: "dims",
                message: "space needs at least one subsystem".into(),
            });
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidParam {
                name: "dims",
                message: format!("subsystem dimension {d} < 2"),
            });
        }
        Ok(Space { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Decompose a flat basis index into per-site indices.
    pub fn unravel(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, &d) in self.dims.iter().enumerate().rev() {
            out[k] = index % d;
            index /= d;
        }
        out
    }

    /// Flat basis index of a per-site index tuple.
    pub fn ravel(&self, sites: &[usize]) -> usize {
        sites
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

/// Dense complex operator tagged with its space.
///
/// The spaces here top out near dimension 100, so dense storage is fine;
/// only the superoperator level (D^2) needs sparsity.
#[derive(Debug, Clone)]
pub struct Operator {
    space: Space,
    matrix: Array2<C64>,
}

impl Operator {
    pub fn new(space: Space, matrix: Array2<C64>) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::ShapeMismatch {
                expected: d,
                found: matrix.nrows(),
            });
        }
        Ok(Operator { space, matrix })
    }

    pub fn zeros(space: Space) -> Self {
        let d = space.total_dim();
        Operator {
            space,
            matrix: Array2::zeros((d, d)),
        }
    }

    pub fn identity(space: Space) -> Self {
        let d = space.total_dim();
        Operator {
            space,
            matrix: Array2::eye(d),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Array2::zeros(self.matrix.raw_dim());
        for ((i, j), v) in self.matrix.indexed_iter() {
            m[(j, i)] = v.conj();
        }
        Operator {
            space: self.space.clone(),
            matrix: m,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.mapv(|v| c * v),
        }
    }

    pub fn add_op(&self, other: &Operator) -> Result<Self> {
        self.check_space(other)?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn mul_op(&self, other: &Operator) -> Result<Self> {
        self.check_space(other)?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    /// tr(self * rho) for a density matrix given as a raw array.
    pub fn expectation(&self, rho: &Array2<C64>) -> C64 {
        // tr(A rho) = sum_ij A[i,j] rho[j,i]
        let mut acc = C64::new(0.0, 0.0);
        for ((i, j), a) in self.matrix.indexed_iter() {
            acc += a * rho[(j, i)];
        }
        acc
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                if (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    fn check_space(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.add_op(rhs).expect("operator space mismatch")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.add_op(&rhs.scale(C64::new(-1.0, 0.0)))
            .expect("operator space mismatch")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.mul_op(rhs).expect("operator space mismatch")
    }
}

/// Cavity annihilation operator on a single (n_max+1)-level Fock space:
/// A[n-1, n] = sqrt(n).
pub fn fock_annihilation(n_max: usize) -> Result<Operator> {
    if n_max < 1 {
        return Err(Error::InvalidParam {
            name: "n_max",
            message: format!("need n_max >= 1, got {n_max}"),
        });
    }
    let d = n_max + 1;
    let mut m = Array2::zeros((d, d));
    for n in 1..=n_max {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator {
        space: Space::new(vec![d])?,
        matrix: m,
    })
}

/// Two-level lowering operator, ground = index 0, excited = index 1.
pub fn tls_lowering() -> Operator {
    let mut m = Array2::zeros((2, 2));
    m[(0, 1)] = C64::new(1.0, 0.0);
    Operator {
        space: Space::new(vec![2]).unwrap(),
        matrix: m,
    }
}

/// Kronecker product of raw matrices (row-major block convention).
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    ndarray::linalg::kron(a, b)
}

/// Embed a single-site operator into the full space: identity everywhere
/// except `site`.
pub fn embed(local: &Operator, site: usize, space: &Space) -> Result<Operator> {
    if site >= space.n_sites() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: space.n_sites(),
        });
    }
    if local.dim() != space.dims()[site] {
        return Err(Error::DimensionMismatch {
            expected: space.dims()[site],
            found: local.dim(),
        });
    }
    let mut m = Array2::eye(1);
    for (k, &d) in space.dims().iter().enumerate() {
        if k == site {
            m = kron(&m, local.matrix());
        } else {
            m = kron(&m, &Array2::eye(d));
        }
    }
    Operator::new(space.clone(), m)
}
