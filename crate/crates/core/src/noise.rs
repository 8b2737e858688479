//! Q-Wiener space-time noise and scalar Brownian paths.
//!
//! The noise is the truncated expansion
//!
//! ```text
//! W_h(x, t) = Σ_{j=1}^{J} √q_j · χ_j(x) · β_j(t),    χ_j(x) = √2 sin(jπx),
//! ```
//!
//! with i.i.d. Brownian motions β_j and trace-class weights q_j.  Increments
//! are generated on a reference time grid of step δt_r = T/(N·m); a coarse
//! increment over one of the N solver steps is the sum of its m reference
//! increments, accumulated in a fixed order.  Reference draws are indexed by
//! (mode, absolute reference step), so the same seed yields the same
//! underlying path no matter how the coarse grid is chosen.

use crate::error::{QuenchError, Result};
use crate::grid::Grid1D;
use crate::rng::{derive_key, mix, NormalStream, DOMAIN_QWIENER, DOMAIN_SCALAR_BM};
use std::io::Write;

/// Spectral description of the noise: mode count, decay exponents and the
/// eigenvalues q_j of the covariance operator.
#[derive(Debug, Clone, PartialEq)]
pub struct QWienerSpec {
    mode_count: usize,
    regularity: f64,
    epsilon: f64,
    eigenvalues: Vec<f64>,
}

impl QWienerSpec {
    /// Eigenvalue rule: q_1 = 0 and q_{2l} = q_{2l+1} = l^-(2r+1+ε) for l ≥ 1.
    pub fn new(mode_count: usize, regularity: f64, epsilon: f64) -> Result<Self> {
        if mode_count < 1 {
            return Err(QuenchError::invalid("mode count must be at least 1"));
        }
        if regularity <= 0.0 {
            return Err(QuenchError::invalid(format!(
                "regularity must be positive, got {regularity}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(QuenchError::invalid(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        let exponent = 2.0 * regularity + 1.0 + epsilon;
        let eigenvalues = (1..=mode_count)
            .map(|j| {
                if j == 1 {
                    0.0
                } else {
                    let l = (j / 2) as f64;
                    l.powf(-exponent)
                }
            })
            .collect();
        Ok(QWienerSpec {
            mode_count,
            regularity,
            epsilon,
            eigenvalues,
        })
    }

    #[inline]
    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn regularity(&self) -> f64 {
        self.regularity
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// q_j for mode j = 1..=J.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Tr Q = Σ_j q_j of the retained modes.
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Pointwise increment variance rate Σ_j q_j χ_j²(x); the variance of a
    /// coarse increment at x is δt times this.
    pub fn variance_rate_at(&self, x: f64) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(idx, q)| {
                let j = (idx + 1) as f64;
                let chi = (2.0_f64).sqrt() * (j * std::f64::consts::PI * x).sin();
                q * chi * chi
            })
            .sum()
    }
}

/// χ_j evaluated at the interior nodes of `grid`, scaled by √q_j.
fn mode_shapes(spec: &QWienerSpec, grid: &Grid1D) -> Vec<f64> {
    let interior = grid.num_interior();
    let mut scale = vec![0.0; spec.mode_count() * interior];
    for (idx, &q) in spec.eigenvalues().iter().enumerate() {
        let j = (idx + 1) as f64;
        let sq = q.sqrt();
        for i in 0..interior {
            let x = grid.node(i + 1);
            scale[idx * interior + i] =
                sq * (2.0_f64).sqrt() * (j * std::f64::consts::PI * x).sin();
        }
    }
    scale
}

/// Streaming generator of nodal Q-Wiener increments for one realization.
///
/// Reference draws for mode j live in ChaCha stream j of a key derived from
/// the path seed; draw k of that stream is the step-k standard normal.  The
/// generator buffers draws in chunks but the produced increments depend only
/// on (seed, mode, step).
pub struct QWienerSampler {
    scale: Vec<f64>, // [mode][interior node], row-major
    modes: usize,
    interior: usize,
    refinement: usize,
    sqrt_dt_ref: f64,
}

const CHUNK_STEPS: usize = 256;

impl QWienerSampler {
    pub fn new(
        spec: &QWienerSpec,
        grid: &Grid1D,
        n_steps: usize,
        refinement: usize,
        horizon: f64,
    ) -> Result<Self> {
        if spec.mode_count() > grid.num_interior() {
            return Err(QuenchError::invalid(format!(
                "mode count {} exceeds interior node count {}",
                spec.mode_count(),
                grid.num_interior()
            )));
        }
        if n_steps == 0 || refinement == 0 {
            return Err(QuenchError::invalid("steps and refinement must be positive"));
        }
        if horizon <= 0.0 {
            return Err(QuenchError::invalid("horizon must be positive"));
        }
        let dt_ref = horizon / (n_steps as f64 * refinement as f64);
        Ok(QWienerSampler {
            scale: mode_shapes(spec, grid),
            modes: spec.mode_count(),
            interior: grid.num_interior(),
            refinement,
            sqrt_dt_ref: dt_ref.sqrt(),
        })
    }

    pub fn stream(&self, seed: u64) -> QWienerStream<'_> {
        QWienerStream {
            sampler: self,
            rng: NormalStream::new(derive_key(seed, DOMAIN_QWIENER), 0),
            chunk: vec![0.0; CHUNK_STEPS * self.modes],
            chunk_start: u64::MAX,
            next_ref_step: 0,
        }
    }
}

pub struct QWienerStream<'a> {
    sampler: &'a QWienerSampler,
    rng: NormalStream,
    chunk: Vec<f64>, // [step within chunk][mode]
    chunk_start: u64,
    next_ref_step: u64,
}

impl QWienerStream<'_> {
    fn refill(&mut self, start: u64) {
        let modes = self.sampler.modes;
        for j in 0..modes {
            self.rng.select(j as u64, start);
            for k in 0..CHUNK_STEPS {
                self.chunk[k * modes + j] = self.rng.next_normal();
            }
        }
        self.chunk_start = start;
    }

    #[inline]
    fn draws_for(&mut self, ref_step: u64) -> &[f64] {
        if self.chunk_start == u64::MAX
            || ref_step < self.chunk_start
            || ref_step >= self.chunk_start + CHUNK_STEPS as u64
        {
            let aligned = ref_step - (ref_step % CHUNK_STEPS as u64);
            self.refill(aligned);
        }
        let k = (ref_step - self.chunk_start) as usize;
        &self.chunk[k * self.sampler.modes..(k + 1) * self.sampler.modes]
    }

    /// Write the reference increment for `ref_step` at the interior nodes.
    pub fn reference_increment(&mut self, ref_step: u64, out: &mut [f64]) {
        let modes = self.sampler.modes;
        let interior = self.sampler.interior;
        let sqrt_dt = self.sampler.sqrt_dt_ref;
        debug_assert_eq!(out.len(), interior);
        // borrow dance: copy the draws out of the chunk buffer
        let mut xi = vec![0.0; modes];
        xi.copy_from_slice(self.draws_for(ref_step));
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &x) in xi.iter().enumerate() {
                acc += self.sampler.scale[j * interior + i] * x;
            }
            *o = sqrt_dt * acc;
        }
    }

    /// Accumulate the next coarse increment (sum of `refinement` reference
    /// increments, in reference order) into `out`.
    pub fn next_coarse_increment(&mut self, out: &mut [f64]) {
        out.fill(0.0);
        let mut row = vec![0.0; self.sampler.interior];
        for _ in 0..self.sampler.refinement {
            self.reference_increment(self.next_ref_step, &mut row);
            for (o, r) in out.iter_mut().zip(row.iter()) {
                *o += r;
            }
            self.next_ref_step += 1;
        }
    }
}

/// A fully materialised noise path: reference increments plus their coarse
/// sums, as used by the solver.  Rows hold values at all grid nodes (the sine
/// modes vanish at the boundary nodes).
#[derive(Debug, Clone)]
pub struct NoisePath {
    pub coarse_dt: f64,
    pub refinement: usize,
    pub reference_dt: f64,
    pub seed: u64,
    /// [N·m][num_nodes] reference increments.
    pub reference: Vec<Vec<f64>>,
    /// [N][num_nodes] coarse increments; row n is the ordered sum of
    /// reference rows n·m .. (n+1)·m.
    pub coarse: Vec<Vec<f64>>,
}

/// Sample the nodal increments of the truncated Q-Wiener expansion.
pub fn sample_increments(
    spec: &QWienerSpec,
    grid: &Grid1D,
    n_steps: usize,
    refinement: usize,
    horizon: f64,
    seed: u64,
) -> Result<NoisePath> {
    let sampler = QWienerSampler::new(spec, grid, n_steps, refinement, horizon)?;
    let mut stream = sampler.stream(seed);
    let nodes = grid.num_nodes();
    let interior = grid.num_interior();
    let dt = horizon / n_steps as f64;

    let mut reference = Vec::with_capacity(n_steps * refinement);
    let mut coarse = Vec::with_capacity(n_steps);
    let mut row = vec![0.0; interior];
    for n in 0..n_steps {
        let mut coarse_row = vec![0.0; nodes];
        for k in 0..refinement {
            stream.reference_increment((n * refinement + k) as u64, &mut row);
            let mut ref_row = vec![0.0; nodes];
            ref_row[1..1 + interior].copy_from_slice(&row);
            for (c, r) in coarse_row[1..1 + interior].iter_mut().zip(row.iter()) {
                *c += r;
            }
            reference.push(ref_row);
        }
        coarse.push(coarse_row);
    }
    Ok(NoisePath {
        coarse_dt: dt,
        refinement,
        reference_dt: dt / refinement as f64,
        seed,
        reference,
        coarse,
    })
}

impl NoisePath {
    /// Re-sum the stored reference increments onto a coarser grid whose step
    /// is `factor` times the current coarse step.  Summation runs over the
    /// reference rows in order, so the result is bitwise identical to
    /// sampling the path with refinement `m·factor` directly.
    pub fn aggregate(&self, factor: usize) -> Result<NoisePath> {
        if factor == 0 || self.coarse.len() % factor != 0 {
            return Err(QuenchError::invalid(format!(
                "cannot aggregate {} coarse steps by factor {factor}",
                self.coarse.len()
            )));
        }
        let m = self.refinement * factor;
        let n_steps = self.coarse.len() / factor;
        let nodes = self.reference[0].len();
        let mut coarse = Vec::with_capacity(n_steps);
        for n in 0..n_steps {
            let mut row = vec![0.0; nodes];
            for k in 0..m {
                for (o, r) in row.iter_mut().zip(self.reference[n * m + k].iter()) {
                    *o += r;
                }
            }
            coarse.push(row);
        }
        Ok(NoisePath {
            coarse_dt: self.coarse_dt * factor as f64,
            refinement: m,
            reference_dt: self.reference_dt,
            seed: self.seed,
            reference: self.reference.clone(),
            coarse,
        })
    }

    /// CSV dump, one row per (coarse step, node): `n,t,x,index,dW`.
    pub fn write_csv<W: Write>(&self, grid: &Grid1D, mut out: W) -> Result<()> {
        writeln!(out, "n,t,x,index,dW")?;
        for (n, row) in self.coarse.iter().enumerate() {
            let t = n as f64 * self.coarse_dt;
            for (j, dw) in row.iter().enumerate() {
                writeln!(out, "{},{},{},{},{}", n, t, grid.node(j), j, dw)?;
            }
        }
        Ok(())
    }
}

/// A scalar Brownian path W(t) on a uniform grid with W(0) = 0.
#[derive(Debug, Clone)]
pub struct ScalarBrownianPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

/// Sample a scalar Brownian path with `n_steps` increments over [0, horizon].
pub fn sample_scalar_brownian(n_steps: usize, horizon: f64, seed: u64) -> Result<ScalarBrownianPath> {
    if n_steps == 0 {
        return Err(QuenchError::invalid("need at least one step"));
    }
    if horizon <= 0.0 {
        return Err(QuenchError::invalid("horizon must be positive"));
    }
    let dt = horizon / n_steps as f64;
    let sqrt_dt = dt.sqrt();
    let mut rng = NormalStream::new(derive_key(seed, DOMAIN_SCALAR_BM), 0);
    rng.seek(0);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    values.push(0.0);
    let mut w = 0.0;
    for n in 1..=n_steps {
        w += sqrt_dt * rng.next_normal();
        times.push(n as f64 * dt);
        values.push(w);
    }
    Ok(ScalarBrownianPath { times, values, seed })
}

impl ScalarBrownianPath {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Increment W(t_{n+1}) - W(t_n).
    pub fn increment(&self, n: usize) -> f64 {
        self.values[n + 1] - self.values[n]
    }
}

/// Seed helper for per-mode scalar paths sharing a master seed.
pub fn scalar_seed(master: u64, index: u64) -> u64 {
    mix(master, index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec101() -> QWienerSpec {
        QWienerSpec::new(101, 0.1, 0.01).unwrap()
    }

    #[test]
    fn eigenvalue_rule() {
        // J=4, r=0.1, eps=0.01: exponent 1.21
        let spec = QWienerSpec::new(4, 0.1, 0.01).unwrap();
        let q = spec.eigenvalues();
        assert_eq!(q[0], 0.0);
        assert_eq!(q[1], 1.0);
        assert_eq!(q[2], 1.0);
        assert!((q[3] - 0.4322686156539326).abs() < 1e-15); // 2^-1.21

        // single mode
        let spec1 = QWienerSpec::new(1, 0.5, 0.5).unwrap();
        assert_eq!(spec1.eigenvalues(), &[0.0]);

        // pairs share values, even-index subsequence strictly decreasing
        let spec = spec101();
        let q = spec.eigenvalues();
        for l in 1..=50usize {
            assert_eq!(q[2 * l - 1], q[2 * l], "pair l = {l}");
            if l > 1 {
                assert!(q[2 * l - 1] < q[2 * (l - 1) - 1]);
            }
        }
    }

    #[test]
    fn trace_partial_sum() {
        // direct summation oracle: sum_{l=1}^{50} l^-1.21 = 3.2644769558290308
        let spec = spec101();
        assert!((spec.trace() - 2.0 * 3.2644769558290308).abs() < 1e-12);
        // partial sums monotone increasing
        let mut acc = 0.0;
        for &q in spec.eigenvalues() {
            assert!(q >= 0.0);
            acc += q;
            assert!(acc <= spec.trace() + 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(QWienerSpec::new(0, 0.1, 0.01).is_err());
        assert!(QWienerSpec::new(4, -0.1, 0.01).is_err());
        assert!(QWienerSpec::new(4, 0.1, 0.0).is_err());
        assert!(QWienerSpec::new(4, 0.1, 1.0).is_err());
        let grid = Grid1D::new(8).unwrap();
        let spec = QWienerSpec::new(8, 0.1, 0.01).unwrap(); // J > M-1
        assert!(QWienerSampler::new(&spec, &grid, 10, 1, 1.0).is_err());
    }

    #[test]
    fn determinism_and_first_mode() {
        let grid = Grid1D::new(12).unwrap();
        let spec = QWienerSpec::new(11, 0.1, 0.01).unwrap();
        let a = sample_increments(&spec, &grid, 16, 2, 1.0, 99).unwrap();
        let b = sample_increments(&spec, &grid, 16, 2, 1.0, 99).unwrap();
        assert_eq!(a.coarse, b.coarse);
        assert_eq!(a.reference, b.reference);

        // J = 1 has q_1 = 0: all increments vanish
        let spec1 = QWienerSpec::new(1, 0.1, 0.01).unwrap();
        let z = sample_increments(&spec1, &grid, 8, 1, 1.0, 5).unwrap();
        assert!(z.coarse.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn coarse_equals_ordered_reference_sum() {
        let grid = Grid1D::new(16).unwrap();
        let spec = QWienerSpec::new(15, 0.1, 0.01).unwrap();
        let path = sample_increments(&spec, &grid, 10, 4, 2.0, 7).unwrap();
        for (n, coarse) in path.coarse.iter().enumerate() {
            let mut acc = vec![0.0; coarse.len()];
            for k in 0..path.refinement {
                for (a, r) in acc.iter_mut().zip(path.reference[n * 4 + k].iter()) {
                    *a += r;
                }
            }
            assert_eq!(&acc, coarse, "coarse step {n}");
        }
    }

    #[test]
    fn refinement_consistency_across_m() {
        // same seed, (N, m) = (20, 2) vs (10, 4): identical reference path,
        // and aggregating the finer coarse grid reproduces the coarser one
        let grid = Grid1D::new(16).unwrap();
        let spec = QWienerSpec::new(15, 0.1, 0.01).unwrap();
        let fine = sample_increments(&spec, &grid, 20, 2, 2.0, 7).unwrap();
        let coarse = sample_increments(&spec, &grid, 10, 4, 2.0, 7).unwrap();
        assert_eq!(fine.reference, coarse.reference);
        let aggregated = fine.aggregate(2).unwrap();
        assert_eq!(aggregated.coarse, coarse.coarse);
    }

    #[test]
    fn scalar_brownian_basics() {
        let p = sample_scalar_brownian(1, 1.0, 3).unwrap();
        assert_eq!(p.values[0], 0.0);
        assert_eq!(p.values.len(), 2);
        let q = sample_scalar_brownian(1, 1.0, 3).unwrap();
        assert_eq!(p.values, q.values);

        assert!(sample_scalar_brownian(0, 1.0, 3).is_err());
        assert!(sample_scalar_brownian(10, -1.0, 3).is_err());
    }

    #[test]
    fn scalar_brownian_variance_and_quadratic_variation() {
        // Var[W(1)] over an ensemble
        let n_paths = 4000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for s in 0..n_paths {
            let p = sample_scalar_brownian(64, 1.0, 1000 + s).unwrap();
            let w1 = *p.values.last().unwrap();
            sum += w1;
            sumsq += w1 * w1;
        }
        let mean = sum / n_paths as f64;
        let var = sumsq / n_paths as f64 - mean * mean;
        assert!((var - 1.0).abs() < 0.05 * 1.0 + 4.0 / (n_paths as f64).sqrt());

        // quadratic variation of a single fine path
        let p = sample_scalar_brownian(10_000, 1.0, 42).unwrap();
        let qv: f64 = (0..10_000).map(|n| p.increment(n).powi(2)).sum();
        assert!((qv - 1.0).abs() < 0.05, "qv = {qv}");
    }

    #[test]
    fn increment_moments_match_expansion() {
        // sample variance of the step-0 coarse increment at a fixed node over
        // many realizations approaches dt * sum_j q_j chi_j^2(x)
        let grid = Grid1D::new(32).unwrap();
        let spec = QWienerSpec::new(31, 0.1, 0.01).unwrap();
        let sampler = QWienerSampler::new(&spec, &grid, 10, 1, 1.0).unwrap();
        let dt = 0.1;
        let k = 10_000;
        let node = 13; // interior index 12
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut row = vec![0.0; grid.num_interior()];
        for seed in 0..k {
            let mut stream = sampler.stream(seed as u64);
            stream.next_coarse_increment(&mut row);
            let v = row[node - 1];
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / k as f64;
        let var = sumsq / k as f64 - mean * mean;
        let expected = dt * spec.variance_rate_at(grid.node(node));
        let se = (expected * (2.0 / k as f64).sqrt()).max(1e-12);
        assert!(mean.abs() < 4.0 * (expected / k as f64).sqrt(), "mean {mean}");
        assert!(
            (var - expected).abs() < 0.05 * expected + 4.0 * se,
            "var {var} vs {expected}"
        );
    }

    #[test]
    fn sine_modes_discretely_orthonormal() {
        let grid = Grid1D::new(32).unwrap();
        let dx = grid.dx();
        let m = grid.intervals();
        for j in 1..=m / 4 {
            for k in 1..=m / 4 {
                let mut ip = 0.0;
                for i in 1..m {
                    let x = grid.node(i);
                    let cj = (2.0_f64).sqrt() * (j as f64 * std::f64::consts::PI * x).sin();
                    let ck = (2.0_f64).sqrt() * (k as f64 * std::f64::consts::PI * x).sin();
                    ip += cj * ck * dx;
                }
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-10, "({j},{k}) -> {ip}");
            }
        }
    }
}
