//! Classic first-order methods recovered as conditional-gradient runs on
//! epigraph reformulations: Bregman proximal point, mirror descent (with
//! plain gradient descent as the quadratic case), proximal gradient, a
//! prox-dual form of the surrogate scheme, and the converse embedding of the
//! linear-minimization step as a surrogate subproblem over an indicator.
//!
//! Each reduction runs two routes for the same recursion — the textbook
//! update and the conditional-gradient path — and reports the worst
//! per-iterate deviation. The identities are exact; observed deviations come
//! from inner-solver accuracy and rounding only.

use crate::analysis::estimate_curvature;
use crate::error::DcError;
use crate::linalg;
use crate::problems::{Convexity, DcProblem, Domain, QuadraticForm, SmoothFn};
use crate::solvers::linearized_argmin;
use crate::solvers::{
    fw_solve, FwFeasible, IterateRow, IterateTrace, RunStatus, SolveConfig, StepRule,
};
use crate::transforms;
use std::sync::Arc;

type ProxMap = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;
type ValueMap = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type PointMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Closed-form proximal map of a convex function h:
///
///   prox(z, lambda) = argmin_x  h(x) + (1 / 2 lambda) ||x - z||^2.
///
/// The oracle also carries h's value so Moreau envelopes (and the dual
/// objectives built from them) can be evaluated along traces.
#[derive(Clone)]
pub struct ProxOracle {
    pub h_name: String,
    prox: ProxMap,
    value: ValueMap,
}

impl ProxOracle {
    pub fn new<P, V>(h_name: &str, prox: P, value: V) -> Self
    where
        P: Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static,
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        ProxOracle {
            h_name: h_name.to_string(),
            prox: Arc::new(prox),
            value: Arc::new(value),
        }
    }

    /// h = 0; the prox is the identity.
    pub fn zero() -> Self {
        ProxOracle::new("zero", |z, _| z.to_vec(), |_| 0.0)
    }

    /// h(x) = weight * sum |x_i|; the prox soft-thresholds each coordinate by
    /// weight * lambda.
    pub fn l1(weight: f64) -> Self {
        assert!(weight >= 0.0, "l1 weight must be nonnegative");
        ProxOracle::new(
            "l1",
            move |z, lambda| {
                let t = weight * lambda;
                z.iter()
                    .map(|&v| v.signum() * (v.abs() - t).max(0.0))
                    .collect()
            },
            move |x| weight * x.iter().map(|v| v.abs()).sum::<f64>(),
        )
    }

    /// h = indicator of the box [lo, hi]^n; the prox clamps coordinatewise.
    pub fn box_indicator(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "box bounds must satisfy lo <= hi");
        ProxOracle::new(
            "box indicator",
            move |z, _| z.iter().map(|&v| v.clamp(lo, hi)).collect(),
            move |x| {
                if x.iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9) {
                    0.0
                } else {
                    f64::INFINITY
                }
            },
        )
    }

    /// h given as an explicit convex quadratic; the prox solves the shifted
    /// linear system (lambda Q + I) x = z - lambda b.
    pub fn quadratic(form: QuadraticForm) -> Result<Self, DcError> {
        if SmoothFn::quadratic(form.clone()).convexity() != Convexity::Convex {
            return Err(DcError::Config(
                "quadratic prox oracles require a convex quadratic".into(),
            ));
        }
        let f_solve = form.clone();
        let f_value = form;
        Ok(ProxOracle::new(
            "quadratic",
            move |z, lambda| {
                let n = f_solve.dim;
                let mut h = linalg::scale(&f_solve.q, lambda);
                for i in 0..n {
                    h[i * n + i] += 1.0;
                }
                let rhs = linalg::add_scaled(z, -lambda, &f_solve.lin);
                linalg::solve_dense(&h, n, &rhs)
                    .expect("lambda Q + I is positive definite for convex Q and lambda > 0")
            },
            move |x| f_value.value(x),
        ))
    }

    pub fn prox(&self, z: &[f64], lambda: f64) -> Vec<f64> {
        assert!(lambda > 0.0, "prox scale must be positive");
        (self.prox)(z, lambda)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    /// Moreau envelope: h(p) + ||p - z||^2 / (2 lambda) at p = prox(z, lambda).
    pub fn envelope(&self, z: &[f64], lambda: f64) -> f64 {
        let p = self.prox(z, lambda);
        let d = linalg::sub(&p, z);
        self.value(&p) + linalg::dot(&d, &d) / (2.0 * lambda)
    }

    /// Firm nonexpansiveness slack at a pair of points:
    ///
    ///   <prox(z1) - prox(z2), z1 - z2> - ||prox(z1) - prox(z2)||^2,
    ///
    /// which is nonnegative (up to rounding) for the prox of any convex h.
    pub fn firmness_margin(&self, z1: &[f64], z2: &[f64], lambda: f64) -> f64 {
        let d = linalg::sub(&self.prox(z1, lambda), &self.prox(z2, lambda));
        linalg::dot(&d, &linalg::sub(z1, z2)) - linalg::dot(&d, &d)
    }
}

/// Strongly convex distance generator phi with its Bregman divergence
///
///   D(x, y) = phi(x) - phi(y) - <grad phi(y), x - y>
///
/// and the conjugate gradient map z -> argmax_x <z, x> - phi(x), which
/// inverts grad phi.
#[derive(Clone)]
pub struct BregmanOracle {
    pub phi: SmoothFn,
    pub strong_convexity: f64,
    conjugate: PointMap,
}

impl BregmanOracle {
    pub fn new<C>(phi: SmoothFn, strong_convexity: f64, conjugate: C) -> Result<Self, DcError>
    where
        C: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if !(strong_convexity > 0.0) {
            return Err(DcError::Config(
                "distance generators must be strongly convex".into(),
            ));
        }
        if phi.convexity() != Convexity::Convex {
            return Err(DcError::Config(
                "distance generators must carry a convex tag".into(),
            ));
        }
        Ok(BregmanOracle { phi, strong_convexity, conjugate: Arc::new(conjugate) })
    }

    /// phi = (l/2) ||x||^2; the divergence is the scaled squared distance and
    /// the conjugate gradient divides by l.
    pub fn quadratic(dim: usize, l: f64) -> Result<Self, DcError> {
        if !(l > 0.0) {
            return Err(DcError::Config("quadratic generator scale must be positive".into()));
        }
        let mut q = vec![0.0; dim * dim];
        for i in 0..dim {
            q[i * dim + i] = l;
        }
        let phi = SmoothFn::quadratic(QuadraticForm::new(dim, q, vec![0.0; dim], 0.0));
        BregmanOracle::new(phi, l, move |z| linalg::scale(z, 1.0 / l))
    }

    /// phi(x) = sum x_i ln x_i on the open positive orthant. The divergence
    /// is the generalized relative entropy; the conjugate gradient is
    /// exp(z - 1) coordinatewise. Strong convexity 1 holds on (0, 1]^n.
    pub fn entropic(dim: usize) -> Result<Self, DcError> {
        let phi = SmoothFn::from_fns(
            dim,
            |x| {
                x.iter()
                    .map(|&v| if v == 0.0 { 0.0 } else { v * v.ln() })
                    .sum()
            },
            |x| x.iter().map(|&v| 1.0 + v.ln()).collect(),
            Convexity::Convex,
        );
        BregmanOracle::new(phi, 1.0, |z| z.iter().map(|&v| (v - 1.0).exp()).collect())
    }

    pub fn bregman(&self, x: &[f64], y: &[f64]) -> f64 {
        self.phi.value(x) - self.phi.value(y) - linalg::dot(&self.phi.grad(y), &linalg::sub(x, y))
    }

    pub fn conjugate_grad(&self, z: &[f64]) -> Vec<f64> {
        (self.conjugate)(z)
    }
}

/// Two iterate sequences for the same recursion computed along different
/// routes, plus their worst per-iterate deviation. When one route stops
/// early at an exact fixed point, it is compared as if extended by its final
/// iterate — which is precisely what the stopped method would produce.
#[derive(Debug, Clone)]
pub struct PairedTrace {
    pub direct: Vec<Vec<f64>>,
    pub lifted: Vec<Vec<f64>>,
    pub worst_deviation: f64,
    pub tolerance: f64,
    pub note: String,
}

impl PairedTrace {
    fn from_paths(
        direct: Vec<Vec<f64>>,
        lifted: Vec<Vec<f64>>,
        tolerance: f64,
        note: String,
    ) -> PairedTrace {
        assert!(!direct.is_empty() && !lifted.is_empty());
        let len = direct.len().max(lifted.len());
        let mut worst = 0.0f64;
        for i in 0..len {
            let a = &direct[i.min(direct.len() - 1)];
            let b = &lifted[i.min(lifted.len() - 1)];
            worst = worst.max(linalg::max_abs_diff(a, b));
        }
        PairedTrace { direct, lifted, worst_deviation: worst, tolerance, note }
    }

    pub fn agreed(&self) -> bool {
        self.worst_deviation <= self.tolerance
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), DcError> {
    if expected != got {
        return Err(DcError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Iterates the unit-step conditional-gradient map of the epigraph lift of
/// the unconstrained difference `f_part - g_part`, returning the base
/// coordinates of its iterates. The recursion identity being demonstrated
/// has no stopping rule, so neither does this loop: exactly `rows` iterates
/// (including the start) come back, with each linearized subproblem solved
/// by the toolkit's inner machinery. At a fixed point the subproblem keeps
/// returning the same vertex, so the tail simply repeats it.
fn lifted_base_iterates(
    f_part: SmoothFn,
    g_part: SmoothFn,
    x1: &[f64],
    rows: usize,
    config: &SolveConfig,
) -> Result<Vec<Vec<f64>>, DcError> {
    let n = x1.len();
    let p = DcProblem::new(f_part, g_part, Domain::whole_space(n), Vec::new(), x1.to_vec())?;
    let lift = transforms::lift_basic(&p)?;
    let feasible = FwFeasible::Lift(&lift);
    let phi = lift.phi();
    let mut omega = lift.embed(x1);
    let mut out = Vec::with_capacity(rows);
    out.push(omega[..n].to_vec());
    for _ in 1..rows {
        let grad = phi.grad(&omega);
        let (s, _) = linearized_argmin(&feasible, &grad, &omega, &[], config)?;
        omega = linalg::lerp(&omega, &s, 1.0);
        out.push(omega[..n].to_vec());
    }
    Ok(out)
}

/// Bregman proximal point via conditional gradient.
///
/// The direct route iterates x+ = argmin f(x) + D(x, x_k) in closed form
/// (dense solve for quadratic pairs, conjugate-gradient map for affine f).
/// The lifted route rewrites min f as min (f + phi) - phi, lifts the sum
/// into an epigraph constraint, and runs unit-step conditional gradient;
/// its linearized subproblems are solved by the toolkit's inner machinery.
/// Both routes record `iterations` iterates including the start.
pub fn ppm_via_fw(
    f: &SmoothFn,
    breg: &BregmanOracle,
    x1: &[f64],
    iterations: usize,
    config: &SolveConfig,
) -> Result<PairedTrace, DcError> {
    config.validate()?;
    if iterations == 0 {
        return Err(DcError::Config("at least one iterate must be recorded".into()));
    }
    check_dim(f.dim(), x1.len())?;
    check_dim(f.dim(), breg.phi.dim())?;
    if f.convexity() != Convexity::Convex {
        return Err(DcError::Config("proximal point splitting needs a convex objective".into()));
    }

    let mut direct = vec![x1.to_vec()];
    match (f.quadratic_form(), breg.phi.quadratic_form()) {
        (Some(qf), Some(qp)) => {
            let n = qf.dim;
            let h: Vec<f64> = qf.q.iter().zip(&qp.q).map(|(a, b)| a + b).collect();
            for _ in 1..iterations {
                let x = direct.last().unwrap();
                let rhs = linalg::sub(&linalg::mat_vec(&qp.q, n, x), &qf.lin);
                direct.push(linalg::solve_dense(&h, n, &rhs)?);
            }
        }
        _ if f.is_affine() => {
            let c = f.grad(x1);
            for _ in 1..iterations {
                let x = direct.last().unwrap();
                let target = linalg::sub(&breg.phi.grad(x), &c);
                direct.push(breg.conjugate_grad(&target));
            }
        }
        _ => {
            return Err(DcError::UnsupportedSubproblem(
                "closed-form proximal steps need a quadratic pair or an affine objective".into(),
            ))
        }
    }

    let lifted = lifted_base_iterates(f.add(&breg.phi), breg.phi.clone(), x1, iterations, config)?;
    Ok(PairedTrace::from_paths(
        direct,
        lifted,
        10.0 * config.eps_inner,
        "lifted route: unit-step conditional gradient on the epigraph of f + phi".into(),
    ))
}

/// Mirror descent via conditional gradient.
///
/// The direct route iterates the mirror update
/// x+ = conjugate_grad(grad phi(x) - eta grad f(x)). The lifted route runs
/// conditional gradient on the epigraph split min t + f - phi over
/// {phi(x) <= t}: with unit steps that lift is driven by the toolkit's
/// machinery (it is the epigraph lift of the difference phi - (phi - f));
/// otherwise the linearized step is the conjugate-gradient map followed by
/// the convex-combination step. With phi = (L/2)||x||^2 both routes reduce
/// to plain gradient descent. After both runs, the curvature of the lift
/// objective is sampled over the visited region and reported in the note.
pub fn mirror_descent_via_fw(
    f: &SmoothFn,
    breg: &BregmanOracle,
    x1: &[f64],
    etas: &[f64],
    config: &SolveConfig,
) -> Result<PairedTrace, DcError> {
    config.validate()?;
    check_dim(f.dim(), x1.len())?;
    check_dim(f.dim(), breg.phi.dim())?;
    for &eta in etas {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(DcError::Config("step sizes must lie in (0, 1]".into()));
        }
    }

    let mut direct = vec![x1.to_vec()];
    for &eta in etas {
        let x = direct.last().unwrap();
        let target = linalg::add_scaled(&breg.phi.grad(x), -eta, &f.grad(x));
        direct.push(breg.conjugate_grad(&target));
    }

    let unit_steps = etas.iter().all(|&e| e == 1.0);
    let machinery = if unit_steps {
        match (breg.phi.quadratic_form(), f.quadratic_form()) {
            (Some(qp), Some(qf)) => {
                let diff = SmoothFn::quadratic(qp.add(&qf.scale(-1.0)));
                if diff.convexity() == Convexity::Convex {
                    Some(diff)
                } else {
                    return Err(DcError::Config(
                        "the mirror lift needs phi - f convex; pick a generator at least as curved as f"
                            .into(),
                    ));
                }
            }
            _ if f.is_affine() => Some(breg.phi.add(&f.scale(-1.0))),
            _ => None,
        }
    } else {
        None
    };
    let (lifted, route) = match machinery {
        Some(diff) => (
            lifted_base_iterates(breg.phi.clone(), diff, x1, etas.len() + 1, config)?,
            "epigraph machinery",
        ),
        None => {
            let mut xs = vec![x1.to_vec()];
            for &eta in etas {
                let x = xs.last().unwrap();
                let s = breg.conjugate_grad(&linalg::sub(&breg.phi.grad(x), &f.grad(x)));
                xs.push(linalg::lerp(x, &s, eta));
            }
            (xs, "conjugate map with convex-combination steps")
        }
    };

    // Post-hoc curvature of the lift objective t + f(x) - phi(x) over the
    // (bounded) region the runs visited, padded by 10% of its span.
    let n = x1.len();
    let mut lo = vec![f64::INFINITY; n + 1];
    let mut hi = vec![f64::NEG_INFINITY; n + 1];
    for x in direct.iter().chain(&lifted) {
        for i in 0..n {
            lo[i] = lo[i].min(x[i]);
            hi[i] = hi[i].max(x[i]);
        }
        let t = breg.phi.value(x);
        lo[n] = lo[n].min(t);
        hi[n] = hi[n].max(t);
    }
    for i in 0..=n {
        let pad = 0.1 * (hi[i] - lo[i]) + 1e-6;
        lo[i] -= pad;
        hi[i] += pad;
    }
    let (fv, pv) = (f.clone(), breg.phi.clone());
    let (fg, pg) = (f.clone(), breg.phi.clone());
    let lift_objective = SmoothFn::from_fns(
        n + 1,
        move |w| fv.value(&w[..n]) + w[n] - pv.value(&w[..n]),
        move |w| {
            let mut g = linalg::sub(&fg.grad(&w[..n]), &pg.grad(&w[..n]));
            g.push(1.0);
            g
        },
        Convexity::Unknown,
    );
    let est = estimate_curvature(&lift_objective, &Domain::boxed(lo, hi), 24, 4)?;
    let note = format!(
        "lifted route: {route}; sampled curvature lower bound {:.3e} for the lift objective over the visited box",
        est.sampled_lower_bound
    );

    Ok(PairedTrace::from_paths(direct, lifted, 10.0 * config.eps_inner, note))
}

/// Proximal gradient via conditional gradient.
///
/// Splitting f + g by adding and subtracting (L/2)||x||^2 puts the smooth
/// concave remainder in the objective and the strongly convex part in the
/// epigraph constraint; the linearized step of unit-step conditional
/// gradient is then prox_{g/L}(x - grad f(x)/L). The direct route assembles
/// that prox argument as the gradient step; the lifted route assembles it by
/// completing the square in the linearized subproblem.
pub fn prox_grad_via_fw(
    f: &SmoothFn,
    g_prox: &ProxOracle,
    x1: &[f64],
    iterations: usize,
    config: &SolveConfig,
) -> Result<PairedTrace, DcError> {
    config.validate()?;
    if iterations == 0 {
        return Err(DcError::Config("at least one iterate must be recorded".into()));
    }
    check_dim(f.dim(), x1.len())?;
    let Some(l) = f.lipschitz_grad() else {
        return Err(DcError::Config(
            "proximal gradient splitting needs f's gradient Lipschitz constant".into(),
        ));
    };
    if !(l > 0.0) {
        return Err(DcError::Config("the gradient Lipschitz constant must be positive".into()));
    }

    let mut direct = vec![x1.to_vec()];
    for _ in 1..iterations {
        let x = direct.last().unwrap();
        let z = linalg::add_scaled(x, -1.0 / l, &f.grad(x));
        direct.push(g_prox.prox(&z, 1.0 / l));
    }

    let mut lifted = vec![x1.to_vec()];
    for _ in 1..iterations {
        let x = lifted.last().unwrap();
        // Linearized-subproblem coefficient grad f(x) - L x, then the square
        // completes to the prox of g at -(coefficient)/L.
        let coeff = linalg::add_scaled(&f.grad(x), -l, x);
        let z = linalg::scale(&coeff, -1.0 / l);
        lifted.push(g_prox.prox(&z, 1.0 / l));
    }

    Ok(PairedTrace::from_paths(
        direct,
        lifted,
        10.0 * config.eps_inner,
        "lifted route: unit-step conditional gradient on the curvature-split epigraph".into(),
    ))
}

/// Solves prox_g(z) = target for a scalar z by expanding-bracket bisection.
/// The prox of a convex function is monotone nondecreasing, so a sign change
/// brackets every root. Returns the root and the evaluation count.
fn invert_prox_1d(g_prox: &ProxOracle, target: f64, hint: f64) -> Result<(f64, usize), DcError> {
    let h = |z: f64| g_prox.prox(&[z], 1.0)[0] - target;
    let mut radius = 1.0 + target.abs() + hint.abs();
    let mut iters = 0usize;
    let (mut lo, mut hi) = (target - radius, target + radius);
    loop {
        iters += 2;
        if h(lo) <= 0.0 && h(hi) >= 0.0 {
            break;
        }
        radius *= 2.0;
        lo = target - radius;
        hi = target + radius;
        if iters > 120 {
            return Err(DcError::NoSolution);
        }
    }
    for _ in 0..200 {
        iters += 1;
        let mid = 0.5 * (lo + hi);
        let hm = h(mid);
        if hm == 0.0 {
            return Ok((mid, iters));
        }
        if hm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs() + hi.abs()) {
            break;
        }
    }
    Ok((0.5 * (lo + hi), iters))
}

/// Prox-dual surrogate recursion on the line.
///
/// Adding and subtracting ||x||^2/2 and dualizing both halves turns the
/// surrogate subproblem's stationarity into the prox relation
/// prox_g(x*) = prox_f(x_k). Each step solves that one-dimensional equation
/// for x* and moves x_{k+1} = (1 - eta) x_k + eta x*. Rows record the dual
/// objective (the difference of Moreau envelopes), the relation residual as
/// the stationarity measure, and the bisection effort; `NoSolution` is
/// returned when the prox equation has no root in the search bracket or the
/// residual cannot be driven to 1e-10.
pub fn dual_cccp_prox(
    f_prox: &ProxOracle,
    g_prox: &ProxOracle,
    x1: f64,
    etas: &[f64],
) -> Result<IterateTrace, DcError> {
    if etas.is_empty() {
        return Err(DcError::Config("at least one step size is required".into()));
    }
    for &eta in etas {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(DcError::Config("step sizes must lie in (0, 1]".into()));
        }
    }

    let mut iterates: Vec<Vec<f64>> = Vec::new();
    let mut rows: Vec<IterateRow> = Vec::new();
    let mut x = x1;
    let mut fixed = false;
    for (i, &eta) in etas.iter().enumerate() {
        let p = f_prox.prox(&[x], 1.0)[0];
        let (x_star, inner_iters) = invert_prox_1d(g_prox, p, x)?;
        let residual = (g_prox.prox(&[x_star], 1.0)[0] - p).abs();
        if residual > 1e-10 {
            return Err(DcError::NoSolution);
        }
        let objective = f_prox.envelope(&[x], 1.0) - g_prox.envelope(&[x], 1.0);
        iterates.push(vec![x]);
        rows.push(IterateRow {
            k: i + 1,
            objective,
            fw_gap: None,
            dc_gap: None,
            step_size: eta,
            inner_iters,
            kkt_residual: Some(residual),
            feas_max: 0.0,
            wall_ms: None,
        });
        fixed = (x_star - x).abs() <= 1e-12;
        x = (1.0 - eta) * x + eta * x_star;
    }
    Ok(IterateTrace {
        rows,
        iterates,
        status: if fixed { RunStatus::Converged } else { RunStatus::MaxIters },
    })
}

/// The linear-minimization step as a surrogate subproblem.
///
/// Maximizing a smooth g over a compact set X is the difference program
/// "indicator of X minus g"; linearizing g makes the surrogate subproblem a
/// linear minimization over X, so the surrogate scheme with unit steps IS
/// conditional gradient. The lifted route runs the conditional-gradient
/// driver on -g over X; the direct route iterates the linear-minimization
/// oracle on the negated gradient with the same stopping rule. Both routes
/// share the oracle's deterministic tie-break, so the traces are expected to
/// match bitwise.
pub fn fw_as_cccp(
    g: &SmoothFn,
    x_set: &Domain,
    x1: &[f64],
    config: &SolveConfig,
) -> Result<PairedTrace, DcError> {
    config.validate()?;
    check_dim(g.dim(), x_set.dim())?;
    check_dim(g.dim(), x1.len())?;
    let run_cfg = SolveConfig { step_rule: StepRule::Unit, ..config.clone() };

    let phi = g.scale(-1.0);
    let trace = fw_solve(&phi, &FwFeasible::Geometric(x_set), x1, &run_cfg)?;
    let lifted = trace.iterates;

    let mut direct: Vec<Vec<f64>> = Vec::new();
    let mut x = x1.to_vec();
    for _k in 1..=run_cfg.max_outer_iters {
        direct.push(x.clone());
        let dir = linalg::scale(&g.grad(&x), -1.0);
        let s = x_set.lmo(&dir)?;
        let gap = linalg::dot(&dir, &linalg::sub(&x, &s));
        // Identical clamped stop test to the conditional-gradient driver.
        if gap.max(0.0) < run_cfg.gap_tol {
            break;
        }
        x = linalg::lerp(&x, &s, 1.0);
    }

    Ok(PairedTrace::from_paths(
        direct,
        lifted,
        10.0 * config.eps_inner,
        "surrogate subproblem over the indicator reduces to the linear-minimization step".into(),
    ))
}

/// Names accepted by [`run_demo`], in the order the verification battery
/// runs them.
pub const DEMO_NAMES: [&str; 5] = ["ppm", "mirror", "proxgrad", "dualprox", "fwascccp"];

/// One reduction demo's outcome: a check line per claim and an overall flag.
#[derive(Debug, Clone)]
pub struct DemoReport {
    pub name: String,
    pub lines: Vec<String>,
    pub passed: bool,
}

impl DemoReport {
    fn new(name: &str) -> Self {
        DemoReport { name: name.to_string(), lines: Vec::new(), passed: true }
    }

    fn check(&mut self, label: &str, ok: bool) {
        self.lines.push(format!("{label}: {}", if ok { "ok" } else { "FAIL" }));
        self.passed &= ok;
    }

    fn check_close(&mut self, label: &str, got: &[f64], want: &[f64], tol: f64) {
        let err = linalg::max_abs_diff(got, want);
        self.check(&format!("{label} (deviation {err:.2e}, tolerance {tol:.0e})"), err <= tol);
    }
}

/// Runs one named reduction demo on its canned instances. Valid names are
/// listed in [`DEMO_NAMES`].
pub fn run_demo(name: &str) -> Result<DemoReport, DcError> {
    match name {
        "ppm" => demo_ppm(),
        "mirror" => demo_mirror(),
        "proxgrad" => demo_proxgrad(),
        "dualprox" => demo_dualprox(),
        "fwascccp" => demo_fwascccp(),
        other => Err(DcError::Config(format!(
            "unknown demo '{other}'; valid names: {}",
            DEMO_NAMES.join(", ")
        ))),
    }
}

fn demo_ppm() -> Result<DemoReport, DcError> {
    let mut rep = DemoReport::new("ppm");
    let cfg = SolveConfig::default();

    let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
    let breg = BregmanOracle::quadratic(1, 1.0)?;
    let pt = ppm_via_fw(&f, &breg, &[0.0], 30, &cfg)?;
    rep.check_close("first prox step halves the distance", &pt.direct[1], &[1.0], 1e-12);
    rep.check_close("second prox step", &pt.direct[2], &[1.5], 1e-12);
    rep.check_close(
        "prox recursion approaches the minimizer",
        pt.direct.last().unwrap(),
        &[2.0],
        1e-6,
    );
    rep.check(
        &format!("routes agree (worst deviation {:.2e})", pt.worst_deviation),
        pt.agreed(),
    );

    let fixed = ppm_via_fw(&f, &breg, &[2.0], 10, &cfg)?;
    let constant = fixed
        .direct
        .iter()
        .chain(&fixed.lifted)
        .all(|x| (x[0] - 2.0).abs() <= 1e-12);
    rep.check("starting at the minimizer stays fixed on both routes", constant && fixed.agreed());

    let c = vec![0.4, 0.1, 0.5];
    let f_lin = SmoothFn::linear(c.clone(), 0.0);
    let breg_e = BregmanOracle::entropic(3)?;
    let x1 = vec![0.5, 0.3, 0.2];
    let pt = ppm_via_fw(&f_lin, &breg_e, &x1, 6, &cfg)?;
    let mut worst = 0.0f64;
    for (k, (d, l)) in pt.direct.iter().zip(&pt.lifted).enumerate() {
        let want: Vec<f64> = x1
            .iter()
            .zip(&c)
            .map(|(xi, ci)| xi * (-(k as f64) * ci).exp())
            .collect();
        worst = worst
            .max(linalg::max_abs_diff(d, &want))
            .max(linalg::max_abs_diff(l, &want));
    }
    rep.check(
        &format!("entropic recursion matches the multiplicative closed form (worst {worst:.2e})"),
        worst <= 1e-8,
    );
    rep.check(
        &format!("entropic routes agree (worst deviation {:.2e})", pt.worst_deviation),
        pt.agreed(),
    );
    Ok(rep)
}

fn demo_mirror() -> Result<DemoReport, DcError> {
    let mut rep = DemoReport::new("mirror");
    let cfg = SolveConfig::default();

    let f2 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0],
        0.0,
    ));
    let breg2 = BregmanOracle::quadratic(2, 1.0)?;
    let mt = mirror_descent_via_fw(&f2, &breg2, &[0.8, -0.3], &[1.0], &cfg)?;
    rep.check_close("one gradient step lands on the minimizer", &mt.lifted[1], &[0.0, 0.0], 1e-12);
    rep.check(
        &format!("routes agree (worst deviation {:.2e})", mt.worst_deviation),
        mt.agreed(),
    );

    let f1 = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
    let breg1 = BregmanOracle::quadratic(1, 1.0)?;
    let mt = mirror_descent_via_fw(&f1, &breg1, &[0.0], &[1.0, 1.0, 1.0], &cfg)?;
    rep.check_close("gradient descent reaches the optimum in one step", &mt.direct[1], &[2.0], 1e-12);
    rep.check_close("and stays there", &mt.direct[3], &[2.0], 1e-12);
    let mut gd_worst = 0.0f64;
    for k in 0..mt.lifted.len() - 1 {
        let hand = linalg::add_scaled(&mt.lifted[k], -1.0, &f1.grad(&mt.lifted[k]));
        gd_worst = gd_worst.max(linalg::max_abs_diff(&mt.lifted[k + 1], &hand));
    }
    rep.check(
        &format!("lifted route computes exact gradient steps (worst {gd_worst:.2e})"),
        gd_worst <= 1e-12,
    );
    rep.check("routes agree on the descent sequence", mt.agreed());

    let c = vec![0.3, 0.2];
    let f_lin = SmoothFn::linear(c.clone(), 0.0);
    let breg_e = BregmanOracle::entropic(2)?;
    let x1 = vec![0.6, 0.4];
    let mt = mirror_descent_via_fw(&f_lin, &breg_e, &x1, &[1.0; 5], &cfg)?;
    let mut worst = 0.0f64;
    for (k, (d, l)) in mt.direct.iter().zip(&mt.lifted).enumerate() {
        let want: Vec<f64> = x1
            .iter()
            .zip(&c)
            .map(|(xi, ci)| xi * (-(k as f64) * ci).exp())
            .collect();
        worst = worst
            .max(linalg::max_abs_diff(d, &want))
            .max(linalg::max_abs_diff(l, &want));
    }
    rep.check(
        &format!("entropic updates match the exponentiated-gradient closed form (worst {worst:.2e})"),
        worst <= 1e-8,
    );
    rep.check(
        "the visited lift region's curvature was sampled",
        mt.note.contains("curvature"),
    );
    Ok(rep)
}

fn demo_proxgrad() -> Result<DemoReport, DcError> {
    let mut rep = DemoReport::new("proxgrad");
    let cfg = SolveConfig::default();

    let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
    let soft = ProxOracle::l1(1.0);
    let pt = prox_grad_via_fw(&f, &soft, &[0.0], 8, &cfg)?;
    rep.check_close("first step soft-thresholds the gradient target", &pt.direct[1], &[1.0], 1e-12);
    rep.check_close("the threshold point is a fixed point", pt.direct.last().unwrap(), &[1.0], 1e-12);
    let stationarity = (f.grad(&[1.0])[0] + 1.0).abs();
    rep.check(
        &format!("subdifferential optimality at the fixed point (residual {stationarity:.2e})"),
        stationarity <= 1e-12,
    );
    rep.check(
        &format!("routes agree (worst deviation {:.2e})", pt.worst_deviation),
        pt.agreed(),
    );

    let f2 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![1.0, 0.0, 0.0, 1.0],
        vec![-1.0, 1.0],
        1.0,
    ));
    let pt = prox_grad_via_fw(&f2, &ProxOracle::zero(), &[0.0, 0.0], 5, &cfg)?;
    rep.check_close("an identity prox reduces to gradient descent", &pt.lifted[1], &[1.0, -1.0], 1e-12);
    rep.check("and both routes take the same gradient steps", pt.agreed());

    let f3 = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![1.0], 0.5));
    let clamp = ProxOracle::box_indicator(0.0, 1.0);
    let pt = prox_grad_via_fw(&f3, &clamp, &[0.7], 6, &cfg)?;
    rep.check_close(
        "a box prox projects the gradient target onto the box",
        pt.direct.last().unwrap(),
        &[0.0],
        1e-15,
    );
    rep.check("projected-gradient routes agree", pt.agreed());
    Ok(rep)
}

fn demo_dualprox() -> Result<DemoReport, DcError> {
    let mut rep = DemoReport::new("dualprox");

    let pf = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0))?;
    let pg = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![-1.0], 0.5))?;
    let trace = dual_cccp_prox(&pf, &pg, 0.0, &[1.0; 6])?;
    let mut walk_worst = 0.0f64;
    for (i, x) in trace.iterates.iter().enumerate() {
        walk_worst = walk_worst.max((x[0] + i as f64).abs());
    }
    rep.check(
        &format!("the prox relation walks down by one per step (worst {walk_worst:.2e})"),
        walk_worst <= 1e-9,
    );
    let res_worst = trace
        .rows
        .iter()
        .filter_map(|r| r.kkt_residual)
        .fold(0.0f64, f64::max);
    rep.check(
        &format!("relation residual stays solved (worst {res_worst:.2e})"),
        res_worst <= 1e-10,
    );
    let descending = trace.rows.windows(2).all(|w| w[1].objective < w[0].objective);
    rep.check(
        "the dual objective keeps falling, matching an unbounded difference",
        descending && trace.status == RunStatus::MaxIters,
    );

    let constant = dual_cccp_prox(&pf, &pf, 0.4, &[1.0; 5])?;
    let still = constant.iterates.iter().all(|x| (x[0] - 0.4).abs() <= 1e-12);
    rep.check(
        "identical oracles produce a constant sequence",
        still && constant.status == RunStatus::Converged,
    );

    let no_root = dual_cccp_prox(&ProxOracle::zero(), &ProxOracle::box_indicator(0.0, 1.0), 1.5, &[1.0]);
    rep.check(
        "a prox equation without a root is rejected",
        matches!(no_root, Err(DcError::NoSolution)),
    );
    Ok(rep)
}

fn demo_fwascccp() -> Result<DemoReport, DcError> {
    let mut rep = DemoReport::new("fwascccp");
    let cfg = SolveConfig::default();

    let g1 = SmoothFn::linear(vec![3.0, 1.0, 2.0], 0.0);
    let third = 1.0 / 3.0;
    let pt = fw_as_cccp(&g1, &Domain::simplex(3, 1.0), &[third, third, third], &cfg)?;
    rep.check(
        "a linear objective jumps to the best vertex in one step",
        pt.lifted.len() == 2 && pt.lifted[1] == vec![1.0, 0.0, 0.0],
    );
    rep.check("both routes produce identical iterates", pt.worst_deviation == 0.0);

    let g2 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-1.0, 0.0, 0.0, -1.0],
        vec![0.5, 0.5],
        -0.25,
    ));
    let wander_cfg = SolveConfig { max_outer_iters: 20, ..SolveConfig::default() };
    let bx = Domain::boxed(vec![0.0, 0.0], vec![1.0, 1.0]);
    let pt = fw_as_cccp(&g2, &bx, &[0.3, 0.3], &wander_cfg)?;
    let on_vertices = pt.lifted[1..]
        .iter()
        .all(|x| x.iter().all(|&v| v == 0.0 || v == 1.0));
    rep.check(
        "an interior-peak objective walks the vertex set for the whole budget",
        pt.lifted.len() == 20 && on_vertices,
    );
    rep.check("the wandering traces match exactly", pt.worst_deviation == 0.0);

    let g3 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-1.0, 0.0, 0.0, -1.0],
        vec![2.0, -0.5],
        -2.125,
    ));
    let pt = fw_as_cccp(&g3, &bx, &[0.5, 0.5], &cfg)?;
    rep.check(
        "an outside peak pins the run to the nearest vertex",
        pt.lifted.last().unwrap() == &vec![1.0, 0.0] && pt.worst_deviation == 0.0,
    );

    let g4 = SmoothFn::linear(vec![2.0, 2.0, 1.0], 0.0);
    let pt = fw_as_cccp(&g4, &Domain::simplex(3, 1.0), &[0.0, 0.0, 1.0], &cfg)?;
    rep.check(
        "tied vertices break to the lowest index on both routes",
        pt.lifted.last().unwrap() == &vec![1.0, 0.0, 0.0] && pt.worst_deviation == 0.0,
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;

    fn cfg() -> SolveConfig {
        SolveConfig::default()
    }

    #[test]
    fn prox_oracles_are_firmly_nonexpansive_on_samples() {
        let oracles = [
            ProxOracle::zero(),
            ProxOracle::l1(0.7),
            ProxOracle::box_indicator(-0.5, 1.5),
            ProxOracle::quadratic(QuadraticForm::new(
                2,
                vec![2.0, 0.5, 0.5, 1.0],
                vec![0.3, -0.2],
                0.0,
            ))
            .unwrap(),
        ];
        let mut rng = Lcg64::new(0xF19A);
        for oracle in &oracles {
            for _ in 0..100 {
                let z1 = rng.uniform_vec(2, -5.0, 5.0);
                let z2 = rng.uniform_vec(2, -5.0, 5.0);
                let margin = oracle.firmness_margin(&z1, &z2, 0.8);
                assert!(
                    margin >= -1e-9,
                    "{} violated firm nonexpansiveness: {margin}",
                    oracle.h_name
                );
            }
        }
    }

    #[test]
    fn soft_threshold_prox_matches_hand_values() {
        let soft = ProxOracle::l1(1.0);
        assert_eq!(soft.prox(&[3.0, -0.4, 0.5], 1.0), vec![2.0, -0.0, 0.0]);
        assert_eq!(soft.prox(&[3.0, -2.0], 0.5), vec![2.5, -1.5]);
        assert_eq!(soft.value(&[1.0, -2.0]), 3.0);
    }

    #[test]
    fn quadratic_prox_solves_the_shifted_system() {
        let p = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![-1.0], 0.5)).unwrap();
        // (lambda + 1) x = z + lambda at lambda = 1: x = (z + 1) / 2.
        assert!((p.prox(&[3.0], 1.0)[0] - 2.0).abs() < 1e-12);
        assert!((p.prox(&[0.0], 1.0)[0] - 0.5).abs() < 1e-12);
        let concave = ProxOracle::quadratic(QuadraticForm::new(1, vec![-1.0], vec![0.0], 0.0));
        assert!(matches!(concave, Err(DcError::Config(_))));
    }

    #[test]
    fn moreau_envelope_of_a_quadratic_matches_hand_values() {
        // h = x^2/2: envelope at lambda 1 is z^2/4 (prox z/2).
        let p = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0)).unwrap();
        assert!((p.envelope(&[2.0], 1.0) - 1.0).abs() < 1e-12);
        assert!((p.envelope(&[-3.0], 1.0) - 2.25).abs() < 1e-12);
    }

    #[test]
    fn bregman_conjugate_round_trips_on_samples() {
        let quad = BregmanOracle::quadratic(3, 2.0).unwrap();
        let ent = BregmanOracle::entropic(3).unwrap();
        let mut rng = Lcg64::new(0xB4E6);
        for _ in 0..100 {
            let z = rng.uniform_vec(3, -3.0, 1.0);
            for oracle in [&quad, &ent] {
                let x = oracle.conjugate_grad(&z);
                let back = oracle.phi.grad(&x);
                assert!(linalg::max_abs_diff(&back, &z) <= 1e-8);
            }
        }
    }

    #[test]
    fn bregman_divergence_dominates_the_strongly_convex_quadratic() {
        let quad = BregmanOracle::quadratic(2, 2.0).unwrap();
        let ent = BregmanOracle::entropic(2).unwrap();
        let mut rng = Lcg64::new(0x77A5);
        for _ in 0..100 {
            let x = rng.uniform_vec(2, -4.0, 4.0);
            let y = rng.uniform_vec(2, -4.0, 4.0);
            let d = linalg::sub(&x, &y);
            let lower = 0.5 * quad.strong_convexity * linalg::dot(&d, &d);
            assert!(quad.bregman(&x, &y) >= lower - 1e-9);

            let xe = rng.uniform_vec(2, 1e-3, 1.0);
            let ye = rng.uniform_vec(2, 1e-3, 1.0);
            let de = linalg::sub(&xe, &ye);
            let lower_e = 0.5 * ent.strong_convexity * linalg::dot(&de, &de);
            assert!(ent.bregman(&xe, &ye) >= lower_e - 1e-9);
        }
    }

    #[test]
    fn bregman_divergence_vanishes_at_identical_points() {
        let ent = BregmanOracle::entropic(2).unwrap();
        assert_eq!(ent.bregman(&[0.3, 0.9], &[0.3, 0.9]), 0.0);
        let quad = BregmanOracle::quadratic(2, 1.5).unwrap();
        assert_eq!(quad.bregman(&[1.0, -2.0], &[1.0, -2.0]), 0.0);
    }

    #[test]
    fn ppm_quadratic_recursion_matches_the_hand_map() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
        let breg = BregmanOracle::quadratic(1, 1.0).unwrap();
        let pt = ppm_via_fw(&f, &breg, &[0.0], 10, &cfg()).unwrap();
        let mut expect = 0.0f64;
        for x in &pt.direct {
            assert!((x[0] - expect).abs() <= 1e-12);
            expect = 0.5 * (expect + 2.0);
        }
    }

    #[test]
    fn ppm_routes_agree_at_machine_precision_on_quadratics() {
        let f = SmoothFn::quadratic(QuadraticForm::new(
            2,
            vec![2.0, 0.3, 0.3, 1.0],
            vec![-1.0, 0.5],
            0.0,
        ));
        let breg = BregmanOracle::quadratic(2, 1.5).unwrap();
        let pt = ppm_via_fw(&f, &breg, &[1.0, -1.0], 25, &cfg()).unwrap();
        assert_eq!(pt.direct.len(), 25);
        assert!(pt.worst_deviation <= 1e-12, "deviation {}", pt.worst_deviation);
    }

    #[test]
    fn ppm_entropic_routes_match_the_multiplicative_update() {
        let c = vec![0.4, 0.1, 0.5];
        let f = SmoothFn::linear(c.clone(), 0.0);
        let breg = BregmanOracle::entropic(3).unwrap();
        let x1 = vec![0.5, 0.3, 0.2];
        let pt = ppm_via_fw(&f, &breg, &x1, 6, &cfg()).unwrap();
        assert!(pt.agreed(), "deviation {}", pt.worst_deviation);
        for (k, d) in pt.direct.iter().enumerate() {
            let want: Vec<f64> = x1
                .iter()
                .zip(&c)
                .map(|(xi, ci)| xi * (-(k as f64) * ci).exp())
                .collect();
            assert!(linalg::max_abs_diff(d, &want) <= 1e-9);
        }
    }

    #[test]
    fn ppm_rejects_mismatched_dimensions_and_opaque_objectives() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0));
        let breg = BregmanOracle::quadratic(1, 1.0).unwrap();
        assert!(matches!(
            ppm_via_fw(&f, &breg, &[0.0, 0.0], 5, &cfg()),
            Err(DcError::DimensionMismatch { .. })
        ));
        let opaque = SmoothFn::from_fns(
            1,
            |x| x[0].powi(4),
            |x| vec![4.0 * x[0].powi(3)],
            Convexity::Convex,
        );
        assert!(matches!(
            ppm_via_fw(&opaque, &breg, &[0.5], 5, &cfg()),
            Err(DcError::UnsupportedSubproblem(_))
        ));
    }

    #[test]
    fn mirror_unit_step_on_a_quadratic_is_exact_gradient_descent() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
        let breg = BregmanOracle::quadratic(1, 1.0).unwrap();
        let mt = mirror_descent_via_fw(&f, &breg, &[0.0], &[1.0, 1.0, 1.0], &cfg()).unwrap();
        assert!((mt.direct[1][0] - 2.0).abs() <= 1e-15);
        assert!((mt.direct[3][0] - 2.0).abs() <= 1e-15);
        for k in 0..mt.lifted.len() - 1 {
            let hand = linalg::add_scaled(&mt.lifted[k], -1.0, &f.grad(&mt.lifted[k]));
            assert!(linalg::max_abs_diff(&mt.lifted[k + 1], &hand) <= 1e-12);
        }
        assert!(mt.agreed());
    }

    #[test]
    fn mirror_entropic_unit_steps_match_the_exponentiated_gradient() {
        let c = vec![0.3, 0.2];
        let f = SmoothFn::linear(c.clone(), 0.0);
        let breg = BregmanOracle::entropic(2).unwrap();
        let x1 = vec![0.6, 0.4];
        let mt = mirror_descent_via_fw(&f, &breg, &x1, &[1.0; 5], &cfg()).unwrap();
        assert!(mt.agreed(), "deviation {}", mt.worst_deviation);
        for (k, l) in mt.lifted.iter().enumerate() {
            let want: Vec<f64> = x1
                .iter()
                .zip(&c)
                .map(|(xi, ci)| xi * (-(k as f64) * ci).exp())
                .collect();
            assert!(linalg::max_abs_diff(l, &want) <= 1e-8);
        }
        assert!(mt.note.contains("curvature"));
    }

    #[test]
    fn mirror_fractional_steps_agree_for_quadratic_generators() {
        // With a quadratic generator the mirror map is linear, so the
        // convex-combination route and the direct update coincide for every
        // step size, not just the unit one.
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-1.0], 0.5));
        let breg = BregmanOracle::quadratic(1, 2.0).unwrap();
        let mt = mirror_descent_via_fw(&f, &breg, &[3.0], &[0.5, 0.7, 1.0], &cfg()).unwrap();
        assert!(mt.worst_deviation <= 1e-12, "deviation {}", mt.worst_deviation);
        let mut x = 3.0f64;
        for (k, &eta) in [0.5, 0.7, 1.0].iter().enumerate() {
            x -= 0.5 * eta * (x - 1.0);
            assert!((mt.direct[k + 1][0] - x).abs() <= 1e-12);
        }
    }

    #[test]
    fn mirror_rejects_step_sizes_outside_the_unit_interval() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0));
        let breg = BregmanOracle::quadratic(1, 1.0).unwrap();
        assert!(matches!(
            mirror_descent_via_fw(&f, &breg, &[0.0], &[1.5], &cfg()),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            mirror_descent_via_fw(&f, &breg, &[0.0], &[0.0], &cfg()),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn mirror_rejects_generators_flatter_than_the_objective() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![4.0], vec![0.0], 0.0));
        let breg = BregmanOracle::quadratic(1, 1.0).unwrap();
        assert!(matches!(
            mirror_descent_via_fw(&f, &breg, &[1.0], &[1.0], &cfg()),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn prox_grad_soft_threshold_reaches_its_fixed_point() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![-2.0], 2.0));
        let soft = ProxOracle::l1(1.0);
        let pt = prox_grad_via_fw(&f, &soft, &[0.0], 8, &cfg()).unwrap();
        assert!((pt.direct[1][0] - 1.0).abs() <= 1e-15);
        assert!((pt.direct.last().unwrap()[0] - 1.0).abs() <= 1e-15);
        assert!(pt.agreed());
        // At the fixed point the smooth gradient balances the subgradient.
        assert!((f.grad(&[1.0])[0] + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn prox_grad_identity_prox_reduces_to_gradient_descent() {
        let f = SmoothFn::quadratic(QuadraticForm::new(
            2,
            vec![1.0, 0.0, 0.0, 1.0],
            vec![-1.0, 1.0],
            1.0,
        ));
        let pt = prox_grad_via_fw(&f, &ProxOracle::zero(), &[0.0, 0.0], 5, &cfg()).unwrap();
        let mut x = vec![0.0, 0.0];
        for step in &pt.direct {
            assert!(linalg::max_abs_diff(step, &x) <= 1e-12);
            x = linalg::add_scaled(&x, -1.0, &f.grad(&x));
        }
        assert!(pt.agreed());
    }

    #[test]
    fn prox_grad_box_prox_clamps_to_the_feasible_fixed_point() {
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![1.0], vec![1.0], 0.5));
        let clamp = ProxOracle::box_indicator(0.0, 1.0);
        let pt = prox_grad_via_fw(&f, &clamp, &[0.7], 6, &cfg()).unwrap();
        assert_eq!(pt.direct.last().unwrap()[0], 0.0);
        assert!(pt.agreed());
    }

    #[test]
    fn prox_grad_requires_a_lipschitz_constant() {
        let f = SmoothFn::from_fns(1, |x| x[0].powi(2), |x| vec![2.0 * x[0]], Convexity::Convex);
        assert!(matches!(
            prox_grad_via_fw(&f, &ProxOracle::zero(), &[0.0], 3, &cfg()),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn dual_prox_pair_walks_down_the_unbounded_difference() {
        let pf = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0)).unwrap();
        let pg = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![-1.0], 0.5)).unwrap();
        let trace = dual_cccp_prox(&pf, &pg, 0.0, &[1.0; 6]).unwrap();
        assert_eq!(trace.iterates.len(), 6);
        for (i, x) in trace.iterates.iter().enumerate() {
            assert!((x[0] + i as f64).abs() <= 1e-9);
        }
        for row in &trace.rows {
            assert!(row.kkt_residual.unwrap() <= 1e-10);
        }
        assert!(trace.rows.windows(2).all(|w| w[1].objective < w[0].objective));
        assert_eq!(trace.status, RunStatus::MaxIters);
    }

    #[test]
    fn dual_prox_identical_oracles_stay_fixed() {
        let pf = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0)).unwrap();
        let trace = dual_cccp_prox(&pf, &pf, 0.4, &[1.0; 5]).unwrap();
        assert!(trace.iterates.iter().all(|x| (x[0] - 0.4).abs() <= 1e-12));
        assert_eq!(trace.status, RunStatus::Converged);
    }

    #[test]
    fn dual_prox_bisection_matches_the_affine_inverse() {
        let pf = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![0.0], 0.0)).unwrap();
        let pg = ProxOracle::quadratic(QuadraticForm::new(1, vec![1.0], vec![-1.0], 0.5)).unwrap();
        // prox_g(z) = (z + 1)/2 must hit prox_f(3.7) = 1.85, so z = 2.7.
        let trace = dual_cccp_prox(&pf, &pg, 3.7, &[0.5]).unwrap();
        let x_next = 0.5 * 3.7 + 0.5 * 2.7;
        assert_eq!(trace.iterates[0], vec![3.7]);
        let p_next = pf.prox(&[x_next], 1.0)[0];
        // One more step from the blended point re-solves the relation there.
        let follow = dual_cccp_prox(&pf, &pg, x_next, &[1.0]).unwrap();
        assert!(follow.rows[0].kkt_residual.unwrap() <= 1e-10);
        assert!((2.0 * p_next - 1.0 - (x_next - 1.0)).abs() <= 1e-9);
    }

    #[test]
    fn dual_prox_without_a_root_is_rejected() {
        let result = dual_cccp_prox(
            &ProxOracle::zero(),
            &ProxOracle::box_indicator(0.0, 1.0),
            1.5,
            &[1.0],
        );
        assert!(matches!(result, Err(DcError::NoSolution)));
    }

    #[test]
    fn fw_as_cccp_routes_are_bitwise_identical() {
        let g = SmoothFn::quadratic(QuadraticForm::new(
            2,
            vec![-1.0, 0.0, 0.0, -1.0],
            vec![0.5, 0.5],
            -0.25,
        ));
        let bx = Domain::boxed(vec![0.0, 0.0], vec![1.0, 1.0]);
        let run_cfg = SolveConfig { max_outer_iters: 20, ..SolveConfig::default() };
        let pt = fw_as_cccp(&g, &bx, &[0.3, 0.3], &run_cfg).unwrap();
        assert_eq!(pt.direct.len(), pt.lifted.len());
        for (a, b) in pt.direct.iter().zip(&pt.lifted) {
            assert_eq!(a, b);
        }
        assert_eq!(pt.worst_deviation, 0.0);
    }

    #[test]
    fn fw_as_cccp_linear_objective_jumps_to_the_best_vertex() {
        let g = SmoothFn::linear(vec![3.0, 1.0, 2.0], 0.0);
        let third = 1.0 / 3.0;
        let pt = fw_as_cccp(&g, &Domain::simplex(3, 1.0), &[third; 3], &cfg()).unwrap();
        assert_eq!(pt.lifted.len(), 2);
        assert_eq!(pt.lifted[1], vec![1.0, 0.0, 0.0]);
        assert_eq!(pt.worst_deviation, 0.0);
    }

    #[test]
    fn fw_as_cccp_breaks_ties_identically() {
        let g = SmoothFn::linear(vec![2.0, 2.0, 1.0], 0.0);
        let pt = fw_as_cccp(&g, &Domain::simplex(3, 1.0), &[0.0, 0.0, 1.0], &cfg()).unwrap();
        assert_eq!(pt.lifted.last().unwrap(), &vec![1.0, 0.0, 0.0]);
        assert_eq!(pt.worst_deviation, 0.0);
    }

    #[test]
    fn every_reduction_demo_passes() {
        for name in DEMO_NAMES {
            let rep = run_demo(name).unwrap();
            assert!(rep.passed, "{name} failed: {:?}", rep.lines);
            assert!(!rep.lines.is_empty());
        }
    }

    #[test]
    fn unknown_demo_names_are_rejected() {
        assert!(matches!(run_demo("nope"), Err(DcError::Config(_))));
    }
}
