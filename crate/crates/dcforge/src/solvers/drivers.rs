//! Outer-loop drivers.
//!
//! All four drivers produce an [`IterateTrace`] with one row per outer
//! iteration k (1-based). Rows record the objective and gap at the CURRENT
//! iterate, and the step and inner-solve effort spent moving to the next one;
//! the row that triggers convergence records step_size 0 and the iterate does
//! not move. Traces are deterministic unless `record_timing` is on.

use std::time::Instant;

use crate::error::DcError;
use crate::linalg;
use crate::problems::{Convexity, DcProblem, Domain, SmoothFn, FEAS_TOL};
use crate::transforms::EpigraphLift;

use super::inner::{inner_convex_solve, ConvexConstraintFn};
use super::{step_size, InnerStatus, IterateRow, IterateTrace, RunStatus, SolveConfig, StepRule};

/// The feasible set a conditional-gradient driver works over: either a
/// geometric domain with its own linear minimization oracle, or an epigraph
/// lift whose linearized subproblems collapse to base-space convex programs.
#[derive(Debug, Clone, Copy)]
pub enum FwFeasible<'a> {
    Geometric(&'a Domain),
    Lift(&'a EpigraphLift),
}

impl<'a> FwFeasible<'a> {
    fn dim(&self) -> usize {
        match self {
            FwFeasible::Geometric(d) => d.dim(),
            FwFeasible::Lift(l) => l.lifted_dim(),
        }
    }

    fn violation(&self, omega: &[f64]) -> f64 {
        match self {
            FwFeasible::Geometric(d) => {
                if d.contains(omega, 0.0) {
                    0.0
                } else {
                    linalg::max_abs_diff(&d.project(omega), omega)
                }
            }
            FwFeasible::Lift(l) => l.membership_violation(omega),
        }
    }
}

fn elapsed_ms(t0: Option<Instant>) -> Option<f64> {
    t0.map(|t| t.elapsed().as_secs_f64() * 1e3)
}

/// Maps an inner report to a hard error when the subproblem solution cannot
/// be trusted.
fn require_inner_convergence(
    status: InnerStatus,
    iterations: usize,
    residual: f64,
    config: &SolveConfig,
) -> Result<(), DcError> {
    match status {
        InnerStatus::Converged => Ok(()),
        InnerStatus::Unbounded => {
            Err(DcError::Unbounded { threshold: config.unbounded_norm_threshold })
        }
        InnerStatus::MaxIters => Err(DcError::MaxIters { iterations, residual }),
    }
}

/// Solves the linearized subproblem of a conditional-gradient step; returns
/// the minimizer (in the driver's ambient space) and inner iteration count.
/// Shared with the analysis layer, which uses single solves of the same
/// subproblem for gap evaluation and stationarity checks.
pub(crate) fn linearized_argmin(
    feasible: &FwFeasible,
    grad: &[f64],
    omega: &[f64],
    extra_halfspaces: &[ConvexConstraintFn],
    config: &SolveConfig,
) -> Result<(Vec<f64>, usize), DcError> {
    match feasible {
        FwFeasible::Geometric(d) => {
            if extra_halfspaces.is_empty() {
                return Ok((d.lmo(grad)?, 0));
            }
            let objective = SmoothFn::linear(grad.to_vec(), 0.0);
            let rep = inner_convex_solve(&objective, d, extra_halfspaces, omega, config)?;
            require_inner_convergence(rep.status, rep.iterations, rep.residual, config)?;
            Ok((rep.x_star, rep.iterations))
        }
        FwFeasible::Lift(l) => {
            let sub = l.linearized_subproblem(grad, omega)?;
            let constraints: Vec<ConvexConstraintFn> =
                sub.constraints.iter().map(ConvexConstraintFn::from_smooth).collect();
            let rep =
                inner_convex_solve(&sub.objective, &sub.domain, &constraints, &sub.start, config)?;
            require_inner_convergence(rep.status, rep.iterations, rep.residual, config)?;
            Ok((l.recover(&rep.x_star), rep.iterations))
        }
    }
}

/// Conditional-gradient descent: repeatedly minimize the linearization over
/// the feasible set and step toward its solution.
pub fn fw_solve(
    phi: &SmoothFn,
    feasible: &FwFeasible,
    omega1: &[f64],
    config: &SolveConfig,
) -> Result<IterateTrace, DcError> {
    config.validate()?;
    if phi.dim() != feasible.dim() || omega1.len() != phi.dim() {
        return Err(DcError::DimensionMismatch { expected: phi.dim(), got: omega1.len() });
    }
    let v0 = feasible.violation(omega1);
    if v0 > FEAS_TOL {
        return Err(DcError::InfeasiblePoint { violation: v0 });
    }

    let mut omega = omega1.to_vec();
    let mut rows = Vec::new();
    let mut iterates = Vec::new();
    let mut status = RunStatus::MaxIters;
    for k in 1..=config.max_outer_iters {
        let t0 = config.record_timing.then(Instant::now);
        let value = phi.value(&omega);
        let grad = phi.grad(&omega);
        let (s, inner_iters) = linearized_argmin(feasible, &grad, &omega, &[], config)?;
        let gap = linalg::dot(&grad, &linalg::sub(&omega, &s));
        let feas_max = feasible.violation(&omega);
        iterates.push(omega.clone());
        // The gap is nonnegative by construction; a negative computed value is
        // cancellation noise, so the stop test clamps it. Strict `<` makes a
        // zero tolerance mean "run the full budget".
        let converged = gap.max(0.0) < config.gap_tol;
        let eta = if converged {
            0.0
        } else {
            step_size(config.step_rule, k, phi, &omega, &linalg::sub(&s, &omega))
        };
        rows.push(IterateRow {
            k,
            objective: value,
            fw_gap: Some(gap),
            dc_gap: None,
            step_size: eta,
            inner_iters,
            kkt_residual: None,
            feas_max,
            wall_ms: elapsed_ms(t0),
        });
        if converged {
            status = RunStatus::Converged;
            break;
        }
        omega = linalg::lerp(&omega, &s, eta);
    }
    Ok(IterateTrace { rows, iterates, status })
}

/// Conditional-gradient descent with side constraints handled by cutting
/// planes: each step minimizes the linearized objective over the feasible set
/// intersected with the linearizations of every psi_i at the current point.
///
/// Curvature dictates the schedule. With concave phi and psis the driver
/// takes unit steps and iterates from k >= 2 on satisfy the original psis;
/// with convex phi and psis it takes harmonic steps from a start that may
/// violate the psis, and the violation decays at the same rate as the
/// suboptimality. Mixed tags are rejected.
pub fn fw_plus_solve(
    phi: &SmoothFn,
    feasible: &FwFeasible,
    psis: &[SmoothFn],
    omega1: &[f64],
    config: &SolveConfig,
) -> Result<IterateTrace, DcError> {
    config.validate()?;
    let n = phi.dim();
    if n != feasible.dim() || omega1.len() != n || psis.iter().any(|p| p.dim() != n) {
        return Err(DcError::DimensionMismatch { expected: n, got: omega1.len() });
    }
    if let FwFeasible::Lift(l) = feasible {
        if psis.len() != l.psis().len() {
            return Err(DcError::Config(
                "lifted runs must pass the lift's own side constraints".into(),
            ));
        }
    }
    let concave_ok = |f: &SmoothFn| f.convexity() == Convexity::Concave || f.is_affine();
    let convex_ok = |f: &SmoothFn| f.convexity() == Convexity::Convex || f.is_affine();
    let concave_mode = concave_ok(phi) && psis.iter().all(concave_ok);
    let convex_mode = convex_ok(phi) && psis.iter().all(convex_ok);
    if !concave_mode && !convex_mode {
        return Err(DcError::MixedCurvature);
    }

    let v0 = feasible.violation(omega1);
    if v0 > FEAS_TOL {
        return Err(DcError::InfeasiblePoint { violation: v0 });
    }
    if concave_mode {
        // The unit-step feasibility argument needs a start inside the psis.
        let worst = psis.iter().map(|p| p.value(omega1)).fold(f64::NEG_INFINITY, f64::max);
        if worst > FEAS_TOL {
            return Err(DcError::InfeasiblePoint { violation: worst });
        }
    }

    let mut omega = omega1.to_vec();
    let mut rows = Vec::new();
    let mut iterates = Vec::new();
    let mut status = RunStatus::MaxIters;
    for k in 1..=config.max_outer_iters {
        let t0 = config.record_timing.then(Instant::now);
        let value = phi.value(&omega);
        let grad = phi.grad(&omega);
        let cuts: Vec<ConvexConstraintFn> = match feasible {
            // The lift reduction folds its own side constraints.
            FwFeasible::Lift(_) => Vec::new(),
            FwFeasible::Geometric(_) => psis
                .iter()
                .map(|p| {
                    let pg = p.grad(&omega);
                    let offset = linalg::dot(&pg, &omega) - p.value(&omega);
                    ConvexConstraintFn::Halfspace { normal: pg, offset }
                })
                .collect(),
        };
        let (s, inner_iters) = linearized_argmin(feasible, &grad, &omega, &cuts, config)?;
        let gap = linalg::dot(&grad, &linalg::sub(&omega, &s));
        let psi_worst = psis.iter().map(|p| p.value(&omega)).fold(0.0f64, f64::max);
        let feas_max = feasible.violation(&omega).max(psi_worst);
        iterates.push(omega.clone());
        // Clamped: a negative computed gap is noise; zero tolerance disables
        // the early stop.
        let converged = gap.max(0.0) < config.gap_tol;
        let eta = if converged {
            0.0
        } else if concave_mode {
            1.0
        } else {
            step_size(StepRule::Harmonic, k, phi, &omega, &linalg::sub(&s, &omega))
        };
        rows.push(IterateRow {
            k,
            objective: value,
            fw_gap: Some(gap),
            dc_gap: None,
            step_size: eta,
            inner_iters,
            kkt_residual: None,
            feas_max,
            wall_ms: elapsed_ms(t0),
        });
        if converged {
            status = RunStatus::Converged;
            break;
        }
        omega = linalg::lerp(&omega, &s, eta);
    }
    Ok(IterateTrace { rows, iterates, status })
}

/// The convex-concave procedure: linearize the subtracted part at the current
/// point and minimize the remaining convex surrogate, repeating until the
/// per-step decrease bound (the DC gap) falls below the tolerance.
pub fn cccp_solve(p: &DcProblem, config: &SolveConfig) -> Result<IterateTrace, DcError> {
    config.validate()?;
    if !p.dc_constraints.is_empty() {
        return Err(DcError::HasConstraints);
    }
    let mut x = p.x_init.clone();
    let mut rows = Vec::new();
    let mut iterates = Vec::new();
    let mut status = RunStatus::MaxIters;
    for k in 1..=config.max_outer_iters {
        let t0 = config.record_timing.then(Instant::now);
        let value = p.objective(&x);
        let gk = p.g.grad(&x);
        let surrogate = p.f.add_affine(&linalg::scale(&gk, -1.0), 0.0);
        let rep = inner_convex_solve(&surrogate, &p.domain, &[], &x, config)?;
        require_inner_convergence(rep.status, rep.iterations, rep.residual, config)?;
        let x_next = rep.x_star;
        let dc_gap =
            p.f.value(&x) - p.f.value(&x_next) - linalg::dot(&gk, &linalg::sub(&x, &x_next));
        let kkt = if p.domain.is_whole_space() {
            Some(linalg::norm(&linalg::sub(&p.f.grad(&x_next), &gk)))
        } else {
            None
        };
        iterates.push(x.clone());
        // Clamped: the surrogate gap is nonnegative by convexity, so a
        // negative computed value is noise; zero tolerance disables the
        // early stop.
        let converged = dc_gap.max(0.0) < config.gap_tol;
        rows.push(IterateRow {
            k,
            objective: value,
            fw_gap: None,
            dc_gap: Some(dc_gap),
            step_size: if converged { 0.0 } else { 1.0 },
            inner_iters: rep.iterations,
            kkt_residual: kkt,
            feas_max: p.max_violation(&x),
            wall_ms: elapsed_ms(t0),
        });
        if converged {
            status = RunStatus::Converged;
            break;
        }
        x = x_next;
    }
    Ok(IterateTrace { rows, iterates, status })
}

/// The constrained convex-concave procedure: linearize the subtracted parts
/// of the objective AND of every DC constraint, then solve the resulting
/// convex subproblem. With no DC constraints this is exactly [`cccp_solve`].
pub fn cccp_plus_solve(p: &DcProblem, config: &SolveConfig) -> Result<IterateTrace, DcError> {
    if p.dc_constraints.is_empty() {
        return cccp_solve(p, config);
    }
    config.validate()?;
    let v0 = p.max_violation(&p.x_init);
    if v0 > FEAS_TOL {
        return Err(DcError::InfeasiblePoint { violation: v0 });
    }
    let mut x = p.x_init.clone();
    let mut rows = Vec::new();
    let mut iterates = Vec::new();
    let mut status = RunStatus::MaxIters;
    for k in 1..=config.max_outer_iters {
        let t0 = config.record_timing.then(Instant::now);
        let value = p.objective(&x);
        let gk = p.g.grad(&x);
        let surrogate = p.f.add_affine(&linalg::scale(&gk, -1.0), 0.0);
        let constraints: Vec<ConvexConstraintFn> = p
            .dc_constraints
            .iter()
            .map(|c| {
                let cg = c.g.grad(&x);
                let shift = linalg::dot(&cg, &x) - c.g.value(&x);
                ConvexConstraintFn::from_smooth(&c.f.add_affine(&linalg::scale(&cg, -1.0), shift))
            })
            .collect();
        let rep = inner_convex_solve(&surrogate, &p.domain, &constraints, &x, config)?;
        require_inner_convergence(rep.status, rep.iterations, rep.residual, config)?;
        let x_next = rep.x_star;
        let dc_gap =
            p.f.value(&x) - p.f.value(&x_next) - linalg::dot(&gk, &linalg::sub(&x, &x_next));
        iterates.push(x.clone());
        // Same clamped stop test as the unconstrained procedure.
        let converged = dc_gap.max(0.0) < config.gap_tol;
        rows.push(IterateRow {
            k,
            objective: value,
            fw_gap: None,
            dc_gap: Some(dc_gap),
            step_size: if converged { 0.0 } else { 1.0 },
            inner_iters: rep.iterations,
            kkt_residual: Some(rep.residual),
            feas_max: p.max_violation(&x),
            wall_ms: elapsed_ms(t0),
        });
        if converged {
            status = RunStatus::Converged;
            break;
        }
        x = x_next;
    }
    Ok(IterateTrace { rows, iterates, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::zoo;
    use crate::transforms;

    fn cfg() -> SolveConfig {
        SolveConfig::default()
    }

    #[test]
    fn fw_on_a_simplex_moves_to_the_cheapest_vertex() {
        let phi = SmoothFn::linear(vec![3.0, 1.0, 2.0], 0.0);
        let d = Domain::simplex(3, 1.0);
        let trace = fw_solve(
            &phi,
            &FwFeasible::Geometric(&d),
            &[1.0, 0.0, 0.0],
            &SolveConfig { step_rule: StepRule::Unit, ..cfg() },
        )
        .unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        assert!((trace.rows[0].fw_gap.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(trace.iterates[1], vec![0.0, 1.0, 0.0]);
        assert!(trace.rows[1].fw_gap.unwrap().abs() < 1e-12);
    }

    #[test]
    fn fw_rejects_infeasible_starts() {
        let phi = SmoothFn::linear(vec![1.0, 1.0], 0.0);
        let d = Domain::boxed(vec![0.0, 0.0], vec![1.0, 1.0]);
        let err = fw_solve(&phi, &FwFeasible::Geometric(&d), &[2.0, 0.0], &cfg());
        assert!(matches!(err, Err(DcError::InfeasiblePoint { .. })));
    }

    #[test]
    fn fw_needs_an_lmo_on_geometric_domains() {
        let phi = SmoothFn::linear(vec![1.0], 0.0);
        let d = Domain::whole_space(1);
        let err = fw_solve(&phi, &FwFeasible::Geometric(&d), &[0.0], &cfg());
        assert!(matches!(err, Err(DcError::LmoUnavailable)));
    }

    #[test]
    fn concave_unit_step_traces_are_monotone() {
        // phi = -0.5||w - (2,2)||^2 over [-1,1]^2.
        let inst = &zoo::fwplus_concave_instances()[0];
        let trace = fw_solve(
            &inst.phi,
            &FwFeasible::Geometric(&inst.domain),
            &inst.omega1,
            &SolveConfig { step_rule: StepRule::Unit, ..cfg() },
        )
        .unwrap();
        for w in trace.rows.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-12);
        }
        assert_eq!(trace.status, RunStatus::Converged);
    }

    #[test]
    fn cccp_follows_the_quartic_iteration_map() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        // The per-step decrease scales with the SQUARED distance to the
        // limit here, so a tight gap tolerance buys the accuracy asserted on
        // the final point.
        let trace =
            cccp_solve(&inst.problem, &SolveConfig { gap_tol: 1e-12, ..cfg() }).unwrap();
        let x2 = trace.iterates[1][0];
        assert!((x2 - zoo::quartic_cccp_map(1.0)).abs() < 1e-9);
        let x3 = trace.iterates[2][0];
        assert!((x3 - zoo::quartic_cccp_map(x2)).abs() < 1e-9);
        assert_eq!(trace.status, RunStatus::Converged);
        let last = trace.final_point();
        assert!((last[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn cccp_linear_recurrence_matches_hand_solution() {
        // f = x^2, g = 0.5 (x-1)^2: update 2 x_{k+1} = x_k - 1 from 0.
        let inst =
            zoo::make_quadratic_dc(vec![2.0], vec![0.0], vec![1.0], vec![-1.0], vec![0.0]).unwrap();
        // Closed-form inner solves are exact, so the gap tolerance can sit
        // just above the floating-point noise floor of the value differences.
        let trace =
            cccp_solve(&inst.problem, &SolveConfig { gap_tol: 1e-14, ..cfg() }).unwrap();
        assert!((trace.iterates[1][0] + 0.5).abs() < 1e-10);
        assert_eq!(trace.status, RunStatus::Converged);
        assert!((trace.final_point()[0] + 1.0).abs() < 1e-6);
        // Stationarity of the difference at the limit.
        let x = trace.final_point();
        assert!(linalg::norm(&inst.problem.objective_grad(x)) < 1e-6);
    }

    #[test]
    fn cccp_with_identical_parts_stops_immediately() {
        let q = crate::problems::QuadraticForm::new(1, vec![2.0], vec![0.0], 0.0);
        let p = DcProblem::new(
            SmoothFn::quadratic(q.clone()),
            SmoothFn::quadratic(q),
            Domain::whole_space(1),
            Vec::new(),
            vec![0.7],
        )
        .unwrap();
        let trace = cccp_solve(&p, &cfg()).unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        assert_eq!(trace.rows.len(), 1);
        assert!((trace.final_point()[0] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn cccp_rejects_constrained_problems() {
        let inst = zoo::make_ring_constrained_dc_2d(1).unwrap();
        assert!(matches!(cccp_solve(&inst.problem, &cfg()), Err(DcError::HasConstraints)));
    }

    #[test]
    fn fw_on_the_basic_lift_reproduces_cccp_iterates() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        let lift = transforms::lift_basic(&inst.problem).unwrap();
        let omega1 = lift.embed(&inst.problem.x_init);
        let fw = fw_solve(
            lift.phi(),
            &FwFeasible::Lift(&lift),
            &omega1,
            &SolveConfig { step_rule: StepRule::Unit, ..cfg() },
        )
        .unwrap();
        let cc = cccp_solve(&inst.problem, &cfg()).unwrap();
        let n = inst.problem.dim();
        assert_eq!(fw.iterates.len(), cc.iterates.len());
        for (wf, xc) in fw.iterates.iter().zip(&cc.iterates) {
            assert!(linalg::max_abs_diff(&wf[..n], xc) <= 10.0 * cfg().eps_inner);
        }
        for (rf, rc) in fw.rows.iter().zip(&cc.rows) {
            let fg = rf.fw_gap.unwrap();
            let dg = rc.dc_gap.unwrap();
            assert!((fg - dg).abs() <= 10.0 * cfg().eps_inner);
        }
    }

    #[test]
    fn cccp_plus_reaches_the_halfplane_optimum() {
        let inst = zoo::make_ring_constrained_dc_2d(1).unwrap();
        let trace =
            cccp_plus_solve(&inst.problem, &SolveConfig { gap_tol: 1e-11, ..cfg() }).unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        let (x_star, f_star) = inst.known_optimum.clone().unwrap();
        assert!(linalg::max_abs_diff(trace.final_point(), &x_star) < 1e-4);
        assert!((inst.problem.objective(trace.final_point()) - f_star).abs() < 1e-8);
    }

    #[test]
    fn cccp_plus_keeps_iterates_feasible_on_the_disk_instance() {
        let inst = zoo::make_ring_constrained_dc_2d(2).unwrap();
        let trace = cccp_plus_solve(&inst.problem, &cfg()).unwrap();
        for x in &trace.iterates {
            let worst = inst
                .problem
                .constraint_residuals(x)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(worst <= 1e-6, "iterate {x:?} violates by {worst}");
        }
        assert_eq!(trace.status, RunStatus::Converged);
        assert!(linalg::max_abs_diff(trace.final_point(), &[1.0, 1.0]) < 1e-5);
    }

    #[test]
    fn cccp_plus_without_constraints_delegates_to_cccp() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        let a = cccp_plus_solve(&inst.problem, &cfg()).unwrap();
        let b = cccp_solve(&inst.problem, &cfg()).unwrap();
        assert_eq!(a.iterates, b.iterates);
    }

    #[test]
    fn fw_plus_concave_instances_end_at_their_optima() {
        for inst in zoo::fwplus_concave_instances() {
            let trace = fw_plus_solve(
                &inst.phi,
                &FwFeasible::Geometric(&inst.domain),
                &inst.psis,
                &inst.omega1,
                &cfg(),
            )
            .unwrap();
            let end = trace.final_point();
            let phi_end = inst.phi.value(end);
            assert!(
                (phi_end - inst.phi_star.unwrap()).abs() < 1e-6,
                "{}: ended at {end:?} with phi {phi_end}",
                inst.name
            );
            // Iterates from k >= 2 satisfy the original side constraints.
            for w in trace.iterates.iter().skip(1) {
                for psi in &inst.psis {
                    assert!(psi.value(w) <= 1e-7, "{}: psi violated at {w:?}", inst.name);
                }
            }
        }
    }

    #[test]
    fn fw_plus_convex_mode_decays_objective_and_violation() {
        let inst = zoo::fwplus_convex_box_instance();
        let trace = fw_plus_solve(
            &inst.phi,
            &FwFeasible::Geometric(&inst.domain),
            &inst.psis,
            &inst.omega1,
            &SolveConfig { max_outer_iters: 400, ..cfg() },
        )
        .unwrap();
        // Frozen first steps: the first cut sends the iterate to (-2,-2),
        // the harmonic step then lands on (2/3, 2/3). Subproblems go through
        // the interior-point path, so corners are hit to ~1e-9, not exactly.
        assert!(linalg::max_abs_diff(&trace.iterates[1], &[-2.0, -2.0]) < 1e-8);
        assert!(linalg::max_abs_diff(&trace.iterates[2], &[2.0 / 3.0, 2.0 / 3.0]) < 1e-6);
        let last = trace.rows.last().unwrap();
        let k = last.k as f64;
        // Curvature-based 2C/(k+1) rates with C <= L D^2: L_phi=1, L_psi=2, D^2=32.
        assert!(last.objective - inst.phi_star.unwrap() <= 2.0 * 32.0 / (k + 1.0) + 1e-9);
        assert!(inst.psis[0].value(trace.final_point()) <= 2.0 * 64.0 / (k + 1.0) + 1e-9);
    }

    #[test]
    fn fw_plus_rejects_mixed_curvature() {
        let phi = SmoothFn::quadratic(crate::problems::QuadraticForm::new(
            1,
            vec![1.0],
            vec![0.0],
            0.0,
        ));
        let psi = SmoothFn::quadratic(crate::problems::QuadraticForm::new(
            1,
            vec![-1.0],
            vec![0.0],
            0.0,
        ));
        let d = Domain::boxed(vec![-1.0], vec![1.0]);
        let err = fw_plus_solve(&phi, &FwFeasible::Geometric(&d), &[psi], &[0.0], &cfg());
        assert!(matches!(err, Err(DcError::MixedCurvature)));
    }

    #[test]
    fn fw_plus_with_affine_psis_matches_fw_on_the_cut_domain() {
        // psi(w) = w1 - 0.5 <= 0 carves the box to [−1, 0.5] x [−1, 1]; an
        // affine psi equals its own linearization, so FW+ must match FW run
        // directly on the smaller box.
        let phi = SmoothFn::quadratic(crate::problems::QuadraticForm::new(
            2,
            vec![-1.0, 0.0, 0.0, -1.0],
            vec![2.0, 2.0],
            0.0,
        ));
        let psi = SmoothFn::linear(vec![1.0, 0.0], -0.5).with_convexity(Convexity::Concave);
        let big = Domain::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]);
        let cut = Domain::boxed(vec![-1.0, -1.0], vec![0.5, 1.0]);
        let start = vec![0.0, 0.0];
        let plus =
            fw_plus_solve(&phi, &FwFeasible::Geometric(&big), &[psi], &start, &cfg()).unwrap();
        let plain = fw_solve(
            &phi,
            &FwFeasible::Geometric(&cut),
            &start,
            &SolveConfig { step_rule: StepRule::Unit, ..cfg() },
        )
        .unwrap();
        assert_eq!(plus.status, plain.status);
        for (a, b) in plus.iterates.iter().zip(&plain.iterates) {
            assert!(linalg::max_abs_diff(a, b) <= 1e-6, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cccp_plus_equals_fw_plus_on_the_lift() {
        for variant in [1u8, 2] {
            let inst = zoo::make_ring_constrained_dc_2d(variant).unwrap();
            let lift = transforms::lift_dc_constrained(&inst.problem).unwrap();
            let omega1 = lift.embed(&inst.problem.x_init);
            let fw = fw_plus_solve(
                lift.phi(),
                &FwFeasible::Lift(&lift),
                lift.psis(),
                &omega1,
                &cfg(),
            )
            .unwrap();
            let cc = cccp_plus_solve(&inst.problem, &cfg()).unwrap();
            let n = inst.problem.dim();
            let upto = fw.iterates.len().min(cc.iterates.len());
            for i in 0..upto {
                assert!(
                    linalg::max_abs_diff(&fw.iterates[i][..n], &cc.iterates[i])
                        <= 10.0 * cfg().eps_inner,
                    "variant {variant} diverges at iterate {i}"
                );
            }
        }
    }
}
