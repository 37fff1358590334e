//! Algorithm drivers and the convex inner solver they share.
//!
//! Four drivers live here: plain conditional-gradient descent over geometric
//! or epigraph-lifted feasible sets, its cutting-plane variant for concave
//! (or convex) side constraints, and the two convex-concave-procedure drivers
//! that linearize the subtracted part of a DC objective. Every `argmin` the
//! drivers need funnels through [`inner_convex_solve`], which dispatches on
//! problem shape: closed form, projected gradient, or a log-barrier interior
//! method.

mod drivers;
mod inner;

pub use drivers::{cccp_plus_solve, cccp_solve, fw_plus_solve, fw_solve, FwFeasible};
pub(crate) use drivers::linearized_argmin;
pub use inner::{inner_convex_solve, ConvexConstraintFn};

use crate::error::DcError;
use crate::linalg;
use crate::problems::{Convexity, SmoothFn};

/// Step-size schedule for the conditional-gradient drivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// Always step fully onto the subproblem solution.
    Unit,
    /// eta_k = 2/(k+1); the classic schedule for convex objectives.
    Harmonic,
    /// Minimize the objective along the segment. Concave objectives take the
    /// full step exactly; quadratic ones use the analytic minimizer; anything
    /// else falls back to golden-section search.
    GreedyLinesearch,
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub max_outer_iters: usize,
    /// Outer convergence threshold on the (clamped) gap. Zero disables the
    /// early stop so runs always use the full iteration budget.
    pub gap_tol: f64,
    pub eps_inner: f64,
    pub inner_max_iters: usize,
    pub step_rule: StepRule,
    pub barrier_mu0: f64,
    pub barrier_shrink: f64,
    pub unbounded_norm_threshold: f64,
    /// Record wall-clock per iteration. Off by default so traces are
    /// byte-for-byte reproducible.
    pub record_timing: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_outer_iters: 500,
            gap_tol: 1e-8,
            eps_inner: 1e-10,
            inner_max_iters: 10_000,
            step_rule: StepRule::Unit,
            barrier_mu0: 1.0,
            barrier_shrink: 0.2,
            unbounded_norm_threshold: 1e8,
            record_timing: false,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), DcError> {
        if self.max_outer_iters == 0 || self.inner_max_iters == 0 {
            return Err(DcError::Config("iteration budgets must be positive".into()));
        }
        if !(self.gap_tol >= 0.0) || !(self.eps_inner >= 0.0) {
            return Err(DcError::Config("tolerances must be nonnegative".into()));
        }
        if !(self.barrier_mu0 > 0.0) {
            return Err(DcError::Config("barrier_mu0 must be positive".into()));
        }
        if !(self.barrier_shrink > 0.0 && self.barrier_shrink < 1.0) {
            return Err(DcError::Config("barrier_shrink must lie in (0,1)".into()));
        }
        if !(self.unbounded_norm_threshold > 0.0) {
            return Err(DcError::Config("unbounded_norm_threshold must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerStatus {
    Converged,
    MaxIters,
    Unbounded,
}

/// Result of one inner convex solve. `residual` is the subproblem
/// stationarity measure: gradient norm (unconstrained), projected-gradient
/// step norm (domain-constrained), or a KKT residual (barrier path).
#[derive(Debug, Clone)]
pub struct InnerSolveReport {
    pub x_star: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub status: InnerStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Stopped because the gap fell to the configured tolerance.
    Converged,
    /// Stopped by the outer iteration budget.
    MaxIters,
}

/// One outer iteration as recorded in a trace (and in trace.csv).
#[derive(Debug, Clone)]
pub struct IterateRow {
    pub k: usize,
    pub objective: f64,
    pub fw_gap: Option<f64>,
    pub dc_gap: Option<f64>,
    pub step_size: f64,
    pub inner_iters: usize,
    pub kkt_residual: Option<f64>,
    pub feas_max: f64,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct IterateTrace {
    pub rows: Vec<IterateRow>,
    /// Iterate k for each row (x for the CCCP family, the lifted or geometric
    /// point for conditional-gradient runs).
    pub iterates: Vec<Vec<f64>>,
    pub status: RunStatus,
}

impl IterateTrace {
    pub fn final_point(&self) -> &[f64] {
        self.iterates.last().expect("traces always hold the starting point")
    }

    /// Smallest recorded gap and its (1-based) iteration index. The running
    /// best is the quantity the gap-rate bounds speak about.
    pub fn best_gap(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for row in &self.rows {
            let Some(gap) = row.fw_gap.or(row.dc_gap) else { continue };
            if best.map_or(true, |(_, b)| gap < b) {
                best = Some((row.k, gap));
            }
        }
        best
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.objective).collect()
    }
}

/// Step size for moving from `omega` along `direction` (toward the
/// subproblem solution) at outer iteration k (1-based).
pub fn step_size(
    rule: StepRule,
    k: usize,
    phi: &SmoothFn,
    omega: &[f64],
    direction: &[f64],
) -> f64 {
    match rule {
        StepRule::Unit => 1.0,
        StepRule::Harmonic => (2.0 / (k as f64 + 1.0)).min(1.0),
        StepRule::GreedyLinesearch => {
            if phi.convexity() == Convexity::Concave {
                // A concave restriction is minimized at an endpoint, and the
                // direction points at the linearization minimizer.
                return 1.0;
            }
            if let Some(q) = phi.quadratic_form() {
                let qd = linalg::mat_vec(&q.q, phi.dim(), direction);
                let curv = linalg::dot(direction, &qd);
                let slope = linalg::dot(&phi.grad(omega), direction);
                if curv > 0.0 {
                    return (-slope / curv).clamp(0.0, 1.0);
                }
                // Flat or concave restriction of an untagged quadratic:
                // endpoint with the smaller value.
                let full = linalg::add(omega, direction);
                return if phi.value(&full) <= phi.value(omega) { 1.0 } else { 0.0 };
            }
            let h = |eta: f64| phi.value(&linalg::add_scaled(omega, eta, direction));
            golden_section_min(h, 0.0, 1.0, 60)
        }
    }
}

/// Golden-section minimization of a unimodal function on [a, b].
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(h: F, a: f64, b: f64, iters: usize) -> f64 {
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut hc, mut hd) = (h(c), h(d));
    for _ in 0..iters {
        if hc <= hd {
            hi = d;
            d = c;
            hd = hc;
            c = hi - inv_phi * (hi - lo);
            hc = h(c);
        } else {
            lo = c;
            c = d;
            hc = hd;
            d = lo + inv_phi * (hi - lo);
            hd = h(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    // Prefer exact endpoints when they are at least as good: unimodal
    // restrictions attained at 0 or 1 should be reported exactly.
    let (h0, h1, hm) = (h(a), h(b), h(mid));
    if h0 <= hm && h0 <= h1 {
        a
    } else if h1 <= hm {
        b
    } else {
        mid
    }
}
