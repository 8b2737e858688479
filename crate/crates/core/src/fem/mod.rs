//! Linear-B-spline Galerkin discretisation of the stochastic membrane
//! equation
//!
//! ```text
//! du = [ g(t) u_xx + λ e^{-3γt} h(x,t) / (1-u)² ] dt + κ₁(t) (1-u) dW
//! ```
//!
//! on the unit interval with homogeneous Dirichlet or Robin boundary
//! conditions, advanced by a semi-implicit Euler scheme: diffusion implicit,
//! reaction and noise explicit.  Quenching (touchdown) is declared when the
//! maximal nodal value reaches 1 - δ_q.

mod assembly;
mod stepper;
mod tridiag;

pub use assembly::{assemble_mass, assemble_noise_load, assemble_reaction, assemble_stiffness};
pub use stepper::{
    simulate_path, simulate_path_probed, simulate_path_with_snapshots, step, PathRealization,
    SolverState, Stepper,
};
pub use tridiag::{SymTridiag, TridiagFactor};

use crate::error::{QuenchError, Result};
use crate::grid::Grid1D;
use crate::noise::QWienerSpec;

/// Boundary operator for the u-equation.  `Robin { beta, beta_c }` imposes
/// ∂u/∂ν + βu = β_c at both ends; β_c = β realises ∂u/∂ν = β(1-u), the
/// condition under which z = 1-u satisfies a homogeneous Robin condition.
/// Dirichlet is the formal β → ∞, β_c = 0 limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin { beta: f64, beta_c: f64 },
}

impl BoundaryCondition {
    pub fn validate(&self) -> Result<()> {
        if let BoundaryCondition::Robin { beta, beta_c } = self {
            if *beta < 0.0 || *beta_c < 0.0 {
                return Err(QuenchError::invalid(format!(
                    "Robin coefficients must be nonnegative, got beta = {beta}, beta_c = {beta_c}"
                )));
            }
        }
        Ok(())
    }

    /// Number of unknowns: interior nodes under Dirichlet, all nodes under
    /// Robin.
    pub fn dof_count(&self, grid: &Grid1D) -> usize {
        match self {
            BoundaryCondition::Dirichlet => grid.num_interior(),
            BoundaryCondition::Robin { .. } => grid.num_nodes(),
        }
    }

    /// Node index of the first degree of freedom.
    pub fn first_node(&self) -> usize {
        match self {
            BoundaryCondition::Dirichlet => 1,
            BoundaryCondition::Robin { .. } => 0,
        }
    }
}

/// Diffusion coefficient family g(t) = base + amplitude·cos(frequency·t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffusion {
    pub base: f64,
    pub amplitude: f64,
    pub frequency: f64,
}

impl Diffusion {
    pub const fn constant(g: f64) -> Self {
        Diffusion {
            base: g,
            amplitude: 0.0,
            frequency: 0.0,
        }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            self.base
        } else {
            self.base + self.amplitude * (self.frequency * t).cos()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.base - self.amplitude.abs() <= 0.0 {
            return Err(QuenchError::invalid(format!(
                "diffusion coefficient must stay positive, got base {} amplitude {}",
                self.base, self.amplitude
            )));
        }
        Ok(())
    }
}

/// Source potential family h(x) = x^b; b = 0 gives the constant h ≡ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub exponent: f64,
}

impl Potential {
    pub const ONE: Potential = Potential { exponent: 0.0 };

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        if self.exponent == 0.0 {
            1.0
        } else {
            x.powf(self.exponent)
        }
    }

    /// ω = max of h over the domain (h = x^b with b ≥ 0 peaks at x = 1).
    pub fn max(&self) -> f64 {
        1.0
    }

    fn validate(&self) -> Result<()> {
        if self.exponent < 0.0 {
            return Err(QuenchError::invalid(
                "potential exponent must be nonnegative",
            ));
        }
        Ok(())
    }
}

/// Noise amplitude family κ₁(t) = base + amplitude·cos(frequency·t); the
/// default is the constant κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseAmplitude {
    pub base: f64,
    pub amplitude: f64,
    pub frequency: f64,
}

impl NoiseAmplitude {
    pub const fn constant(kappa: f64) -> Self {
        NoiseAmplitude {
            base: kappa,
            amplitude: 0.0,
            frequency: 0.0,
        }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            self.base
        } else {
            self.base + self.amplitude * (self.frequency * t).cos()
        }
    }

    /// Supremum L of κ₁; the bound constant C = 1/L² applies when κ₁ is
    /// bounded by L.
    pub fn sup(&self) -> f64 {
        self.base + self.amplitude.abs()
    }

    fn validate(&self) -> Result<()> {
        if self.base - self.amplitude.abs() < 0.0 {
            return Err(QuenchError::invalid("noise amplitude must stay nonnegative"));
        }
        Ok(())
    }
}

/// Initial deflection profile.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    /// u₀(x) = c·x(1-x)
    Parabola { amplitude: f64 },
    /// Nodal values on the solver grid (all nodes, 0..=M).
    Tabulated(Vec<f64>),
}

impl InitialProfile {
    pub fn nodal_values(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        match self {
            InitialProfile::Parabola { amplitude } => Ok(grid
                .nodes()
                .map(|x| amplitude * x * (1.0 - x))
                .collect()),
            InitialProfile::Tabulated(values) => {
                if values.len() != grid.num_nodes() {
                    return Err(QuenchError::invalid(format!(
                        "tabulated profile has {} values, grid has {} nodes",
                        values.len(),
                        grid.num_nodes()
                    )));
                }
                Ok(values.clone())
            }
        }
    }
}

/// Full coefficient set of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    /// Tuning parameter multiplying the singular source.
    pub lambda: f64,
    /// Noise amplitude κ₁(t).
    pub kappa: NoiseAmplitude,
    /// Regularising exponent: the source carries e^{-3γt}.
    pub gamma: f64,
    /// Diffusion coefficient g(t).
    pub diffusion: Diffusion,
    /// Source potential h(x).
    pub potential: Potential,
    pub initial: InitialProfile,
    pub bc: BoundaryCondition,
    /// Quench threshold δ_q: touchdown is declared at max u ≥ 1 - δ_q.
    pub quench_threshold: f64,
}

impl ModelSpec {
    /// Baseline configuration: constant coefficients, Dirichlet boundary,
    /// u₀ = 0.1·x(1-x), δ_q = 1e-2.
    pub fn baseline(lambda: f64, kappa: f64) -> Self {
        ModelSpec {
            lambda,
            kappa: NoiseAmplitude::constant(kappa),
            gamma: 0.0,
            diffusion: Diffusion::constant(1.0),
            potential: Potential::ONE,
            initial: InitialProfile::Parabola { amplitude: 0.1 },
            bc: BoundaryCondition::Dirichlet,
            quench_threshold: 1e-2,
        }
    }

    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        if self.lambda < 0.0 {
            return Err(QuenchError::invalid("lambda must be nonnegative"));
        }
        if self.gamma < 0.0 {
            return Err(QuenchError::invalid("gamma must be nonnegative"));
        }
        if !(self.quench_threshold > 0.0 && self.quench_threshold < 1.0) {
            return Err(QuenchError::invalid("quench threshold must lie in (0, 1)"));
        }
        self.bc.validate()?;
        self.diffusion.validate()?;
        self.potential.validate()?;
        self.kappa.validate()?;
        let u0 = self.initial.nodal_values(grid)?;
        if u0.iter().any(|&v| !(0.0..1.0).contains(&v)) {
            return Err(QuenchError::invalid("initial profile must satisfy 0 <= u0 < 1"));
        }
        Ok(())
    }
}

/// Noise driving the simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Truncated Karhunen-Loève space-time noise.
    QWiener(QWienerSpec),
    /// A single scalar Brownian motion, spatially constant; the setting of
    /// the pathwise bound analysis.
    Scalar,
    /// No stochastic forcing.
    Off,
}

/// Time discretisation: N coarse steps of a reference grid refined m-fold
/// over the horizon T, so δt = T/N and δt_r = δt/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    pub n_steps: usize,
    pub refinement: usize,
    pub horizon: f64,
}

impl Discretization {
    pub fn new(n_steps: usize, refinement: usize, horizon: f64) -> Result<Self> {
        if n_steps == 0 || refinement == 0 {
            return Err(QuenchError::invalid("steps and refinement must be positive"));
        }
        if horizon <= 0.0 {
            return Err(QuenchError::invalid("horizon must be positive"));
        }
        Ok(Discretization {
            n_steps,
            refinement,
            horizon,
        })
    }

    #[inline]
    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    #[inline]
    pub fn dt_ref(&self) -> f64 {
        self.dt() / self.refinement as f64
    }
}
