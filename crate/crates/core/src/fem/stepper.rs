//! Semi-implicit Euler time stepping and path simulation.

use super::assembly::{
    assemble_mass, assemble_noise_load_into, assemble_reaction_into, assemble_stiffness,
    full_nodal,
};
use super::tridiag::{SymTridiag, TridiagFactor};
use super::{BoundaryCondition, Discretization, ModelSpec, NoiseModel};
use crate::error::{QuenchError, Result};
use crate::grid::Grid1D;
use crate::noise::{sample_scalar_brownian, QWienerSampler, QWienerStream};
use std::io::Write;

/// Coefficient vector of the Galerkin solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// Interior nodal values under Dirichlet conditions, all nodal values
    /// under Robin conditions.
    pub values: Vec<f64>,
    pub time: f64,
    pub step_index: usize,
}

impl SolverState {
    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// One realization of the discrete dynamics.
#[derive(Debug, Clone)]
pub struct PathRealization {
    pub quenched: bool,
    /// First time the maximal nodal value reached 1 - δ_q (set iff quenched).
    pub quench_time: Option<f64>,
    /// Largest nodal value recorded over the run.
    pub max_value: f64,
    pub seed: u64,
    /// Optional (t, nodal values at all grid nodes) records.
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

impl PathRealization {
    /// CSV dump of the recorded snapshots: `t,x,u`.
    pub fn write_snapshots_csv<W: Write>(&self, grid: &Grid1D, mut out: W) -> Result<()> {
        writeln!(out, "t,x,u")?;
        for (t, row) in &self.snapshots {
            for (j, u) in row.iter().enumerate() {
                writeln!(out, "{},{},{}", t, grid.node(j), u)?;
            }
        }
        Ok(())
    }
}

/// Reusable machinery for advancing one realization: assembled matrices, a
/// cached factorisation of A + δt·g·B and scratch buffers.  Confined to one
/// worker; the assembled matrices themselves are immutable.
pub struct Stepper {
    model: ModelSpec,
    grid: Grid1D,
    dt: f64,
    mass: SymTridiag,
    stiffness: SymTridiag,
    factor: TridiagFactor,
    factored_g: f64,
    full: Vec<f64>,
    reaction: Vec<f64>,
    noise_load: Vec<f64>,
    rhs: Vec<f64>,
}

impl Stepper {
    pub fn new(model: &ModelSpec, grid: &Grid1D, dt: f64) -> Result<Self> {
        model.validate(grid)?;
        if dt <= 0.0 {
            return Err(QuenchError::invalid("time step must be positive"));
        }
        let mass = assemble_mass(grid, &model.bc)?;
        let stiffness = assemble_stiffness(grid, &model.bc)?;
        let g0 = model.diffusion.value(0.0);
        let factor = TridiagFactor::new(&mass.add_scaled(dt * g0, &stiffness))?;
        let n_dof = model.bc.dof_count(grid);
        Ok(Stepper {
            model: model.clone(),
            grid: *grid,
            dt,
            mass,
            stiffness,
            factor,
            factored_g: g0,
            full: vec![0.0; grid.num_nodes()],
            reaction: vec![0.0; n_dof],
            noise_load: vec![0.0; n_dof],
            rhs: vec![0.0; n_dof],
        })
    }

    pub fn initial_state(&self) -> Result<SolverState> {
        let nodal = self.model.initial.nodal_values(&self.grid)?;
        let values = match self.model.bc {
            BoundaryCondition::Dirichlet => nodal[1..nodal.len() - 1].to_vec(),
            BoundaryCondition::Robin { .. } => nodal,
        };
        Ok(SolverState {
            values,
            time: 0.0,
            step_index: 0,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Nodal values at all grid nodes for the current state.
    pub fn nodal(&self, state: &SolverState, out: &mut [f64]) {
        full_nodal(&state.values, &self.model.bc, &self.grid, out);
    }

    /// Advance the state by one step of size `dt_frac · δt` driven by the
    /// nodal increment row `dw`.  Returns the new maximal nodal value; the
    /// caller decides whether the threshold was crossed.
    pub fn advance_scaled(
        &mut self,
        state: &mut SolverState,
        dw: &[f64],
        dt_frac: f64,
    ) -> Result<f64> {
        let dt = self.dt * dt_frac;
        let t = state.time;
        full_nodal(&state.values, &self.model.bc, &self.grid, &mut self.full);
        assemble_reaction_into(&self.full, &self.model, t, &self.grid, &mut self.reaction)?;
        assemble_noise_load_into(&self.full, &self.model, t, dw, &self.grid, &mut self.noise_load);

        let g = self.model.diffusion.value(t);
        if g != self.factored_g || dt_frac != 1.0 {
            self.factor = TridiagFactor::new(&self.mass.add_scaled(dt * g, &self.stiffness))?;
            self.factored_g = if dt_frac == 1.0 { g } else { f64::NAN };
        }

        self.mass.matvec(&state.values, &mut self.rhs);
        for ((r, b), bs) in self
            .rhs
            .iter_mut()
            .zip(self.reaction.iter())
            .zip(self.noise_load.iter())
        {
            // the Itô increment already carries its dt scaling
            *r += dt * b + bs;
        }
        if let BoundaryCondition::Robin { beta_c, .. } = self.model.bc {
            if beta_c != 0.0 {
                // boundary term of the weak form: beta_c * Φ_i on ∂D
                let n = self.rhs.len();
                self.rhs[0] += dt * g * beta_c;
                self.rhs[n - 1] += dt * g * beta_c;
            }
        }
        self.factor.solve(&mut self.rhs);
        std::mem::swap(&mut state.values, &mut self.rhs);
        state.time = t + dt;
        Ok(state.max_value())
    }

    pub fn advance(&mut self, state: &mut SolverState, dw: &[f64]) -> Result<f64> {
        let max = self.advance_scaled(state, dw, 1.0)?;
        state.step_index += 1;
        Ok(max)
    }
}

/// One semi-implicit Euler update
///
/// ```text
/// (A + δt g(t_n) B) a^{n+1} = A a^n + δt b(a^n, t_n) + b_s(a^n, ΔW^n)
/// ```
///
/// solved by direct tridiagonal elimination.  The noise load enters with the
/// increment itself; its δt lives inside ΔW.
pub fn step(
    state: &SolverState,
    mass: &SymTridiag,
    stiffness: &SymTridiag,
    model: &ModelSpec,
    grid: &Grid1D,
    dw: &[f64],
    dt: f64,
) -> Result<SolverState> {
    let threshold = 1.0 - model.quench_threshold;
    if state.max_value() >= threshold {
        return Err(QuenchError::Quenched { t: state.time });
    }
    let _ = (mass, stiffness); // assembled fresh inside the stepper
    let mut stepper = Stepper::new(model, grid, dt)?;
    let mut next = state.clone();
    stepper.advance(&mut next, dw)?;
    Ok(next)
}

enum NoiseDriver<'a> {
    QWiener(QWienerStream<'a>, Vec<f64>),
    Scalar(crate::noise::ScalarBrownianPath, usize),
    Off,
}

impl NoiseDriver<'_> {
    fn fill_coarse(&mut self, n: usize, dw: &mut [f64]) {
        match self {
            NoiseDriver::QWiener(stream, interior) => {
                stream.next_coarse_increment(interior);
                dw.fill(0.0);
                let len = interior.len();
                dw[1..1 + len].copy_from_slice(interior);
            }
            NoiseDriver::Scalar(path, m) => {
                let inc = path.values[(n + 1) * *m] - path.values[n * *m];
                dw.fill(inc);
            }
            NoiseDriver::Off => dw.fill(0.0),
        }
    }
}

fn make_driver<'a>(
    noise: &NoiseModel,
    sampler: &'a Option<QWienerSampler>,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
) -> Result<NoiseDriver<'a>> {
    Ok(match noise {
        NoiseModel::QWiener(_) => {
            let sampler = sampler.as_ref().expect("sampler built for QWiener noise");
            NoiseDriver::QWiener(sampler.stream(seed), vec![0.0; grid.num_interior()])
        }
        NoiseModel::Scalar => NoiseDriver::Scalar(
            sample_scalar_brownian(disc.n_steps * disc.refinement, disc.horizon, seed)?,
            disc.refinement,
        ),
        NoiseModel::Off => NoiseDriver::Off,
    })
}

/// Extended simulation controls.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    /// Record every k-th state (plus the initial and final ones).
    pub snapshot_every: Option<usize>,
    /// Split each step into this many substeps once max u exceeds
    /// 1 - 10·δ_q.  1 disables the refinement (the default: fixed-step
    /// scheme guarded by the threshold).  Substeps share the coarse noise
    /// increment in equal parts, refining only the drift; σ(u) is O(δ_q)
    /// there so the noise split is immaterial.
    pub pre_quench_substeps: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            snapshot_every: None,
            pre_quench_substeps: 1,
        }
    }
}

/// Advance one realization from u₀; quenching is declared at the first step
/// whose new state has max nodal value ≥ 1 - δ_q, with T_q = t_{n+1}.
/// Deterministic in (model, noise, grid, disc, seed).
pub fn simulate_path(
    model: &ModelSpec,
    noise: &NoiseModel,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
) -> Result<PathRealization> {
    simulate_path_with(model, noise, grid, disc, seed, SimOptions::default())
}

/// `simulate_path` recording every `every`-th snapshot.
pub fn simulate_path_with_snapshots(
    model: &ModelSpec,
    noise: &NoiseModel,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
    every: usize,
) -> Result<PathRealization> {
    simulate_path_with(
        model,
        noise,
        grid,
        disc,
        seed,
        SimOptions {
            snapshot_every: Some(every.max(1)),
            ..SimOptions::default()
        },
    )
}

pub fn simulate_path_with(
    model: &ModelSpec,
    noise: &NoiseModel,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
    opts: SimOptions,
) -> Result<PathRealization> {
    let (path, _) = simulate_core(model, noise, grid, disc, seed, opts, &[])?;
    Ok(path)
}

/// `simulate_path` that additionally records, for each probe threshold
/// δ in `probe_deltas`, the first time max u reached 1 - δ.  The run
/// continues until the deepest probe threshold is crossed (or the horizon is
/// reached), which is how the δ_q sensitivity of quench statistics is
/// measured in a single pass.
pub fn simulate_path_probed(
    model: &ModelSpec,
    noise: &NoiseModel,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
    probe_deltas: &[f64],
) -> Result<(PathRealization, Vec<Option<f64>>)> {
    simulate_core(model, noise, grid, disc, seed, SimOptions::default(), probe_deltas)
}

fn simulate_core(
    model: &ModelSpec,
    noise: &NoiseModel,
    grid: &Grid1D,
    disc: &Discretization,
    seed: u64,
    opts: SimOptions,
    probe_deltas: &[f64],
) -> Result<(PathRealization, Vec<Option<f64>>)> {
    if opts.pre_quench_substeps == 0 {
        return Err(QuenchError::invalid("pre-quench substep count must be positive"));
    }
    let sampler = match noise {
        NoiseModel::QWiener(spec) => Some(QWienerSampler::new(
            spec,
            grid,
            disc.n_steps,
            disc.refinement,
            disc.horizon,
        )?),
        _ => None,
    };
    let mut stepper = Stepper::new(model, grid, disc.dt())?;
    let mut driver = make_driver(noise, &sampler, grid, disc, seed)?;
    let mut state = stepper.initial_state()?;

    let threshold = 1.0 - model.quench_threshold;
    let refine_arm = 1.0 - 10.0 * model.quench_threshold;
    // run past the declared threshold when deeper probes were requested
    let stop_value = probe_deltas
        .iter()
        .fold(threshold, |acc, d| acc.max(1.0 - d));
    let mut probes: Vec<Option<f64>> = vec![None; probe_deltas.len()];

    let mut dw = vec![0.0; grid.num_nodes()];
    let mut snapshots = Vec::new();
    let mut record = |stepper: &Stepper, st: &SolverState, snaps: &mut Vec<(f64, Vec<f64>)>| {
        let mut row = vec![0.0; grid.num_nodes()];
        stepper.nodal(st, &mut row);
        snaps.push((st.time, row));
    };
    if opts.snapshot_every.is_some() {
        record(&stepper, &state, &mut snapshots);
    }

    let mut max_seen = state.max_value();
    let mut quench_time: Option<f64> = None;
    let mut last_valid_t = 0.0;

    'outer: for n in 0..disc.n_steps {
        driver.fill_coarse(n, &mut dw);
        let prev_max = state.max_value();
        let substeps = if opts.pre_quench_substeps > 1 && prev_max >= refine_arm {
            opts.pre_quench_substeps
        } else {
            1
        };

        let new_max = if substeps == 1 {
            stepper.advance(&mut state, &dw)?
        } else {
            let frac = 1.0 / substeps as f64;
            let mut sub_dw: Vec<f64> = dw.iter().map(|v| v * frac).collect();
            let mut m = prev_max;
            for _ in 0..substeps {
                m = stepper.advance_scaled(&mut state, &sub_dw, frac)?;
                if !m.is_finite() || m >= stop_value {
                    break;
                }
                sub_dw.copy_from_slice(&dw);
                for v in sub_dw.iter_mut() {
                    *v *= frac;
                }
            }
            state.step_index += 1;
            m
        };

        if !new_max.is_finite() {
            // overflow in the singular source is the quench signature when
            // the previous state was already near touchdown
            if prev_max >= 1.0 - 2.0 * model.quench_threshold {
                if quench_time.is_none() {
                    quench_time = Some(last_valid_t);
                }
                // the state blew past every remaining probe threshold
                for p in probes.iter_mut() {
                    if p.is_none() {
                        *p = Some(last_valid_t);
                    }
                }
                break 'outer;
            }
            return Err(QuenchError::NonFiniteState { t: state.time });
        }

        max_seen = max_seen.max(new_max);
        last_valid_t = state.time;
        for (p, d) in probes.iter_mut().zip(probe_deltas) {
            if p.is_none() && new_max >= 1.0 - d {
                *p = Some(state.time);
            }
        }
        if quench_time.is_none() && new_max >= threshold {
            quench_time = Some(state.time);
        }
        if let Some(every) = opts.snapshot_every {
            if state.step_index % every == 0 {
                record(&stepper, &state, &mut snapshots);
            }
        }
        if new_max >= stop_value {
            break;
        }
    }

    if let Some(every) = opts.snapshot_every {
        if state.step_index % every != 0 || snapshots.is_empty() {
            record(&stepper, &state, &mut snapshots);
        }
    }

    Ok((
        PathRealization {
            quenched: quench_time.is_some(),
            quench_time,
            max_value: max_seen,
            seed,
            snapshots,
        },
        probes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{Diffusion, InitialProfile, NoiseAmplitude, Potential};
    use crate::noise::QWienerSpec;
    use std::f64::consts::PI;

    fn grid(m: usize) -> Grid1D {
        Grid1D::new(m).unwrap()
    }

    #[test]
    fn unforced_equilibrium() {
        let g = grid(8);
        let model = ModelSpec::baseline(0.0, 0.0);
        let mass = assemble_mass(&g, &model.bc).unwrap();
        let stiff = assemble_stiffness(&g, &model.bc).unwrap();
        let state = SolverState {
            values: vec![0.0; g.num_interior()],
            time: 0.0,
            step_index: 0,
        };
        let dw = vec![0.0; g.num_nodes()];
        let next = step(&state, &mass, &stiff, &model, &g, &dw, 1e-3).unwrap();
        assert!(next.values.iter().all(|v| v.abs() < 1e-15));
    }

    /// Dense LU oracle: one step of the scheme recomputed with full
    /// Gaussian elimination must agree to 12 significant digits.
    #[test]
    fn step_matches_dense_solver_oracle() {
        let g = grid(8);
        let model = ModelSpec::baseline(1.2, 0.5);
        let dt = 1e-3;
        let mass = assemble_mass(&g, &model.bc).unwrap();
        let stiff = assemble_stiffness(&g, &model.bc).unwrap();
        let values: Vec<f64> = (1..g.num_nodes() - 1)
            .map(|j| 0.4 * (PI * g.node(j)).sin())
            .collect();
        let state = SolverState {
            values: values.clone(),
            time: 0.0,
            step_index: 0,
        };
        let dw: Vec<f64> = (0..g.num_nodes()).map(|j| 0.01 * ((j * 13 % 7) as f64 - 3.0)).collect();
        let next = step(&state, &mass, &stiff, &model, &g, &dw, dt).unwrap();

        // oracle: dense assembly and solve of the same linear system
        let b = crate::fem::assemble_reaction(&values, &model, 0.0, &g).unwrap();
        let bs = crate::fem::assemble_noise_load(&values, &model, 0.0, &dw, &g).unwrap();
        let n = g.num_interior();
        let mut rhs = vec![0.0; n];
        mass.matvec(&values, &mut rhs);
        for i in 0..n {
            rhs[i] += dt * b[i] + bs[i];
        }
        let sys = mass.add_scaled(dt, &stiff);
        let mut dense = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            dense[i][i] = sys.diag[i];
            if i > 0 {
                dense[i][i - 1] = sys.off[i - 1];
            }
            if i + 1 < n {
                dense[i][i + 1] = sys.off[i];
            }
            dense[i][n] = rhs[i];
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&p, &q| dense[p][col].abs().total_cmp(&dense[q][col].abs()))
                .unwrap();
            dense.swap(col, piv);
            for row in col + 1..n {
                let f = dense[row][col] / dense[col][col];
                for k in col..=n {
                    dense[row][k] -= f * dense[col][k];
                }
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = dense[i][n];
            for k in i + 1..n {
                acc -= dense[i][k] * x[k];
            }
            x[i] = acc / dense[i][i];
        }
        for (a, b) in next.values.iter().zip(&x) {
            assert!(
                (a - b).abs() <= 1e-12 * b.abs().max(1e-3),
                "{a} vs {b}"
            );
        }
    }

    #[test]
    fn heat_kernel_decay() {
        // lambda = kappa = 0, u0 = sin(pi x): u(t) = e^{-pi^2 t} sin(pi x)
        let g = grid(32);
        let nodal: Vec<f64> = g.nodes().map(|x| (PI * x).sin()).collect();
        let model = ModelSpec {
            initial: InitialProfile::Tabulated(nodal),
            ..ModelSpec::baseline(0.0, 0.0)
        };
        let disc = Discretization::new(1000, 1, 0.1).unwrap();
        let path = simulate_path_with_snapshots(&model, &NoiseModel::Off, &g, &disc, 1, 1000)
            .unwrap();
        assert!(!path.quenched);
        let (t_end, last) = path.snapshots.last().unwrap();
        assert!((t_end - 0.1).abs() < 1e-12);
        let decay = (-PI * PI * 0.1).exp();
        let tol = 10.0 * (disc.dt() + g.dx() * g.dx());
        for (j, v) in last.iter().enumerate() {
            let expected = decay * (PI * g.node(j)).sin();
            assert!(
                (v - expected).abs() < tol,
                "node {j}: {v} vs {expected}"
            );
        }
    }

    #[test]
    fn l2_norm_nonincreasing_without_forcing() {
        let g = grid(24);
        let model = ModelSpec {
            initial: InitialProfile::Parabola { amplitude: 0.8 },
            ..ModelSpec::baseline(0.0, 0.0)
        };
        let mass = assemble_mass(&g, &model.bc).unwrap();
        let mut stepper = Stepper::new(&model, &g, 1e-3).unwrap();
        let mut state = stepper.initial_state().unwrap();
        let dw = vec![0.0; g.num_nodes()];
        let mut prev = mass.quadratic_form(&state.values);
        for _ in 0..200 {
            stepper.advance(&mut state, &dw).unwrap();
            let cur = mass.quadratic_form(&state.values);
            assert!(cur <= prev * (1.0 + 1e-14));
            prev = cur;
        }
    }

    #[test]
    fn deterministic_comparison_in_lambda() {
        // kappa = 0: larger lambda dominates pointwise in time
        let g = grid(24);
        let disc = Discretization::new(400, 1, 0.4).unwrap();
        let run = |lambda: f64| -> Vec<f64> {
            let model = ModelSpec::baseline(lambda, 0.0);
            let mut stepper = Stepper::new(&model, &g, disc.dt()).unwrap();
            let mut state = stepper.initial_state().unwrap();
            let dw = vec![0.0; g.num_nodes()];
            let mut maxima = Vec::new();
            for _ in 0..disc.n_steps {
                let m = stepper.advance(&mut state, &dw).unwrap();
                maxima.push(m);
            }
            maxima
        };
        let low = run(0.5);
        let high = run(1.0);
        for (a, b) in low.iter().zip(&high) {
            assert!(a <= b);
        }
    }

    #[test]
    fn quench_threshold_records_time() {
        let g = grid(32);
        let model = ModelSpec::baseline(3.0, 0.0);
        let disc = Discretization::new(4000, 1, 1.0).unwrap();
        let path = simulate_path(&model, &NoiseModel::Off, &g, &disc, 0).unwrap();
        assert!(path.quenched);
        let tq = path.quench_time.unwrap();
        assert!(tq > 0.0 && tq <= 1.0);
        assert!(path.max_value >= 1.0 - model.quench_threshold);

        // deterministic run is reproducible
        let again = simulate_path(&model, &NoiseModel::Off, &g, &disc, 0).unwrap();
        assert_eq!(path.quench_time, again.quench_time);
    }

    #[test]
    fn qwiener_paths_deterministic_in_seed() {
        let g = grid(16);
        let spec = QWienerSpec::new(15, 0.1, 0.01).unwrap();
        let model = ModelSpec::baseline(1.0, 0.5);
        let disc = Discretization::new(200, 2, 0.2).unwrap();
        let a = simulate_path(&model, &NoiseModel::QWiener(spec.clone()), &g, &disc, 7).unwrap();
        let b = simulate_path(&model, &NoiseModel::QWiener(spec.clone()), &g, &disc, 7).unwrap();
        assert_eq!(a.quench_time, b.quench_time);
        assert_eq!(a.max_value, b.max_value);
        let c = simulate_path(&model, &NoiseModel::QWiener(spec), &g, &disc, 8).unwrap();
        assert!(a.max_value != c.max_value || a.quench_time != c.quench_time);
    }

    #[test]
    fn probed_thresholds_are_ordered() {
        let g = grid(32);
        let model = ModelSpec::baseline(2.5, 0.0);
        let disc = Discretization::new(8000, 1, 2.0).unwrap();
        let deltas = [5e-2, 1e-2, 1e-3];
        let (path, probes) =
            simulate_path_probed(&model, &NoiseModel::Off, &g, &disc, 0, &deltas).unwrap();
        assert!(path.quenched);
        // smaller delta (deeper threshold) is crossed no earlier
        let times: Vec<f64> = probes.iter().map(|p| p.unwrap()).collect();
        assert!(times[0] <= times[1] && times[1] <= times[2]);
        assert_eq!(Some(times[1]), path.quench_time); // delta = 1e-2 is the default
    }

    #[test]
    fn time_dependent_coefficients_run() {
        let g = grid(24);
        let model = ModelSpec {
            lambda: 0.9,
            kappa: NoiseAmplitude::constant(0.0),
            gamma: 0.0,
            diffusion: Diffusion {
                base: 1.0,
                amplitude: 0.1,
                frequency: 10.0,
            },
            potential: Potential { exponent: 0.5 },
            initial: InitialProfile::Parabola { amplitude: 0.1 },
            bc: BoundaryCondition::Robin {
                beta: 1.0,
                beta_c: 1.0,
            },
            quench_threshold: 1e-2,
        };
        let disc = Discretization::new(500, 1, 0.25).unwrap();
        let path = simulate_path(&model, &NoiseModel::Off, &g, &disc, 0).unwrap();
        assert!(path.max_value.is_finite());
    }

    #[test]
    fn rejects_bad_horizon() {
        assert!(Discretization::new(10, 1, 0.0).is_err());
        assert!(Discretization::new(0, 1, 1.0).is_err());
    }
}
