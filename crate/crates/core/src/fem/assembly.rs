//! Mass, stiffness and load assembly for the linear B-spline basis.

use super::tridiag::SymTridiag;
use super::{BoundaryCondition, ModelSpec};
use crate::error::{QuenchError, Result};
use crate::grid::Grid1D;

// 3-point Gauss-Legendre on the reference element [0, 1]
const GAUSS_XI: [f64; 3] = [
    0.5 - 0.387_298_334_620_741_7,
    0.5,
    0.5 + 0.387_298_334_620_741_7,
];
const GAUSS_W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

fn check_grid(grid: &Grid1D) -> Result<()> {
    if grid.intervals() < 3 {
        return Err(QuenchError::invalid("degenerate grid"));
    }
    Ok(())
}

/// Mass matrix <Φ_j, Φ_i>.  Interior rows are δx·[1/6, 2/3, 1/6]; under
/// Robin conditions the boundary nodes are retained with diagonal δx/3.
pub fn assemble_mass(grid: &Grid1D, bc: &BoundaryCondition) -> Result<SymTridiag> {
    check_grid(grid)?;
    bc.validate()?;
    let dx = grid.dx();
    let n = bc.dof_count(grid);
    let mut m = SymTridiag::zeros(n);
    for d in m.diag.iter_mut() {
        *d = 2.0 * dx / 3.0;
    }
    for o in m.off.iter_mut() {
        *o = dx / 6.0;
    }
    if let BoundaryCondition::Robin { .. } = bc {
        m.diag[0] = dx / 3.0;
        m.diag[n - 1] = dx / 3.0;
    }
    Ok(m)
}

/// Stiffness matrix <Φ_j', Φ_i'>.  Interior rows are (1/δx)·[-1, 2, -1];
/// Dirichlet eliminates the boundary unknowns, Robin keeps them with
/// diagonal 1/δx and adds β at the two corner entries (the boundary term of
/// the weak form).
pub fn assemble_stiffness(grid: &Grid1D, bc: &BoundaryCondition) -> Result<SymTridiag> {
    check_grid(grid)?;
    bc.validate()?;
    let dx = grid.dx();
    let n = bc.dof_count(grid);
    let mut b = SymTridiag::zeros(n);
    for d in b.diag.iter_mut() {
        *d = 2.0 / dx;
    }
    for o in b.off.iter_mut() {
        *o = -1.0 / dx;
    }
    if let BoundaryCondition::Robin { beta, .. } = bc {
        b.diag[0] = 1.0 / dx + beta;
        b.diag[n - 1] = 1.0 / dx + beta;
    }
    Ok(b)
}

/// Expand a DOF vector to nodal values at all grid nodes, inserting the
/// homogeneous boundary values under Dirichlet conditions.
pub fn full_nodal(dofs: &[f64], bc: &BoundaryCondition, grid: &Grid1D, out: &mut [f64]) {
    debug_assert_eq!(out.len(), grid.num_nodes());
    match bc {
        BoundaryCondition::Dirichlet => {
            out[0] = 0.0;
            out[grid.num_nodes() - 1] = 0.0;
            out[1..grid.num_nodes() - 1].copy_from_slice(dofs);
        }
        BoundaryCondition::Robin { .. } => out.copy_from_slice(dofs),
    }
}

/// Nonlinear reaction load b_i = ∫ λ e^{-3γt} h(x) F(u_h) Φ_i dx with
/// F(s) = 1/(1-s)², where u_h is the nodal interpolant of `dofs`.
/// Integration uses 3-point Gauss per element (exact for the polynomial
/// part; validated elsewhere against an adaptive oracle).
pub fn assemble_reaction(
    dofs: &[f64],
    spec: &ModelSpec,
    t: f64,
    grid: &Grid1D,
) -> Result<Vec<f64>> {
    let mut full = vec![0.0; grid.num_nodes()];
    full_nodal(dofs, &spec.bc, grid, &mut full);
    let mut out = vec![0.0; dofs.len()];
    assemble_reaction_into(&full, spec, t, grid, &mut out)?;
    Ok(out)
}

pub(super) fn assemble_reaction_into(
    full: &[f64],
    spec: &ModelSpec,
    t: f64,
    grid: &Grid1D,
    out: &mut [f64],
) -> Result<()> {
    let threshold = 1.0 - spec.quench_threshold;
    if let Some(&bad) = full.iter().find(|v| **v >= threshold) {
        let _ = bad;
        return Err(QuenchError::Quenched { t });
    }
    let dx = grid.dx();
    let amp = spec.lambda * (-3.0 * spec.gamma * t).exp();
    let first = spec.bc.first_node();
    let n_dof = out.len();
    out.fill(0.0);
    for e in 0..grid.intervals() {
        let ua = full[e];
        let ub = full[e + 1];
        let xa = grid.node(e);
        let mut left = 0.0;
        let mut right = 0.0;
        for (xi, w) in GAUSS_XI.iter().zip(GAUSS_W.iter()) {
            let u = ua + (ub - ua) * xi;
            let x = xa + dx * xi;
            let f = amp * spec.potential.value(x) / ((1.0 - u) * (1.0 - u));
            left += w * f * (1.0 - xi);
            right += w * f * xi;
        }
        // element endpoints e and e+1 map to DOF indices e-first, e+1-first
        if e >= first && e - first < n_dof {
            out[e - first] += dx * left;
        }
        if e + 1 >= first && e + 1 - first < n_dof {
            out[e + 1 - first] += dx * right;
        }
    }
    Ok(())
}

/// Stochastic load b_s,i = ∫ σ(u_h) ΔW_h Φ_i dx with σ(s) = κ₁(t)(1-s) and
/// ΔW_h the nodal interpolant of one coarse increment (`dw`, all nodes).
pub fn assemble_noise_load(
    dofs: &[f64],
    spec: &ModelSpec,
    t: f64,
    dw: &[f64],
    grid: &Grid1D,
) -> Result<Vec<f64>> {
    if dw.len() != grid.num_nodes() {
        return Err(QuenchError::invalid(format!(
            "increment row has {} entries, grid has {} nodes",
            dw.len(),
            grid.num_nodes()
        )));
    }
    let mut full = vec![0.0; grid.num_nodes()];
    full_nodal(dofs, &spec.bc, grid, &mut full);
    let mut out = vec![0.0; dofs.len()];
    assemble_noise_load_into(&full, spec, t, dw, grid, &mut out);
    Ok(out)
}

pub(super) fn assemble_noise_load_into(
    full: &[f64],
    spec: &ModelSpec,
    t: f64,
    dw: &[f64],
    grid: &Grid1D,
    out: &mut [f64],
) {
    let dx = grid.dx();
    let kappa = spec.kappa.value(t);
    let first = spec.bc.first_node();
    let n_dof = out.len();
    out.fill(0.0);
    if kappa == 0.0 {
        return;
    }
    for e in 0..grid.intervals() {
        let ua = full[e];
        let ub = full[e + 1];
        let wa = dw[e];
        let wb = dw[e + 1];
        let mut left = 0.0;
        let mut right = 0.0;
        for (xi, w) in GAUSS_XI.iter().zip(GAUSS_W.iter()) {
            let u = ua + (ub - ua) * xi;
            let dwx = wa + (wb - wa) * xi;
            let s = kappa * (1.0 - u) * dwx;
            left += w * s * (1.0 - xi);
            right += w * s * xi;
        }
        if e >= first && e - first < n_dof {
            out[e - first] += dx * left;
        }
        if e + 1 >= first && e + 1 - first < n_dof {
            out[e + 1 - first] += dx * right;
        }
    }
}
