//! Symmetric tridiagonal matrices and the Thomas solver.

use crate::error::{QuenchError, Result};

/// Symmetric tridiagonal matrix stored as main diagonal plus one
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn zeros(n: usize) -> Self {
        SymTridiag {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// out = M x
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            out[i] = v;
        }
    }

    /// self + s * other
    pub fn add_scaled(&self, s: f64, other: &SymTridiag) -> SymTridiag {
        debug_assert_eq!(self.dim(), other.dim());
        SymTridiag {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a + s * b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    /// x' M x (energy norm squared for SPD M).
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut out = vec![0.0; x.len()];
        self.matvec(x, &mut out);
        x.iter().zip(&out).map(|(a, b)| a * b).sum()
    }
}

/// LU factorisation of a symmetric tridiagonal matrix for repeated solves
/// (Thomas algorithm).
#[derive(Debug, Clone)]
pub struct TridiagFactor {
    inv_pivot: Vec<f64>,
    lower: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagFactor {
    pub fn new(m: &SymTridiag) -> Result<Self> {
        let n = m.dim();
        let mut inv_pivot = vec![0.0; n];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        let mut pivot = m.diag[0];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(QuenchError::SingularSystem { row: 0 });
        }
        inv_pivot[0] = 1.0 / pivot;
        for i in 1..n {
            let l = m.off[i - 1] * inv_pivot[i - 1];
            lower[i - 1] = l;
            pivot = m.diag[i] - l * m.off[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(QuenchError::SingularSystem { row: i });
            }
            inv_pivot[i] = 1.0 / pivot;
        }
        Ok(TridiagFactor {
            inv_pivot,
            lower,
            off: m.off.clone(),
        })
    }

    /// Solve M x = b in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        debug_assert_eq!(n, self.inv_pivot.len());
        for i in 1..n {
            b[i] -= self.lower[i - 1] * b[i - 1];
        }
        b[n - 1] *= self.inv_pivot[n - 1];
        for i in (0..n - 1).rev() {
            b[i] = (b[i] - self.off[i] * b[i + 1]) * self.inv_pivot[i];
        }
    }
}
