//! Uniform grid on the unit interval.

use crate::error::{QuenchError, Result};

/// `M` equal intervals on [0, 1] with nodes x_j = j/M, j = 0..=M.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    intervals: usize,
}

impl Grid1D {
    pub fn new(intervals: usize) -> Result<Self> {
        if intervals < 3 {
            return Err(QuenchError::invalid(format!(
                "grid needs at least 3 intervals, got {intervals}"
            )));
        }
        Ok(Grid1D { intervals })
    }

    #[inline]
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of nodes, M + 1.
    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.intervals + 1
    }

    /// Number of interior nodes, M - 1.
    #[inline]
    pub fn num_interior(&self) -> usize {
        self.intervals - 1
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        1.0 / self.intervals as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.intervals as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_nodes()).map(move |j| self.node(j))
    }
}
