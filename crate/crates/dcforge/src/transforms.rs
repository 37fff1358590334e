//! Epigraph reformulations of DC programs.
//!
//! A problem `min f0 - g0 s.t. fi - gi <= 0, x in D` lifts to
//!
//! ```text
//!   minimize    phi(w)   = t0 - g0(x)        over w = (x, t0, .., tm)
//!   subject to  psi_i(w) = t_i - g_i(x) <= 0
//!               w in E = { f_i(x) <= t_i for all i } /\ (D x R^{m+1})
//! ```
//!
//! The lifted objective and constraints are concave (negated convex plus
//! linear), so conditional-gradient machinery applies even though E is
//! unbounded: the linearized subproblem always weights t0 positively and
//! therefore collapses back to a convex program in x alone. That reduced
//! subproblem is exactly the convex-concave-procedure step, which is why the
//! two solver families produce matching iterates.

use crate::error::DcError;
use crate::linalg;
use crate::problems::{Convexity, DcProblem, Domain, QuadraticForm, SmoothFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftKind {
    /// Plain epigraph of an unconstrained problem: w = (x, t0).
    Basic,
    /// Epigraph intersected with a convex domain: w = (x, t0), x in D.
    ConvexConstrained,
    /// One epigraph variable per DC constraint: w = (x, t0, .., tm).
    DcConstrained,
}

/// The convex program a linearized lift step reduces to, expressed in the
/// base space. Constraints are smooth convex functions required <= 0; affine
/// ones are detected downstream from their quadratic forms.
#[derive(Debug, Clone)]
pub struct ReducedSubproblem {
    pub objective: SmoothFn,
    pub constraints: Vec<SmoothFn>,
    pub domain: Domain,
    pub start: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EpigraphLift {
    kind: LiftKind,
    base: DcProblem,
    phi: SmoothFn,
    psis: Vec<SmoothFn>,
}

/// Builds the lifted concave objective t_slot - g(x) on a space of
/// `n + extra` coordinates, propagating g's quadratic form when present.
fn lift_minus_g(g: &SmoothFn, n: usize, total: usize, t_slot: usize) -> SmoothFn {
    debug_assert!(t_slot >= n && t_slot < total);
    let gv = g.clone();
    let gg = g.clone();
    let value = move |w: &[f64]| w[t_slot] - gv.value(&w[..n]);
    let grad = move |w: &[f64]| {
        let gx = gg.grad(&w[..n]);
        let mut out = vec![0.0; w.len()];
        for i in 0..n {
            out[i] = -gx[i];
        }
        out[t_slot] = 1.0;
        out
    };
    let mut lifted = SmoothFn::from_fns(total, value, grad, Convexity::Concave);
    if let Some(l) = g.lipschitz_grad() {
        lifted = lifted.with_lipschitz(l);
    }
    if let Some(qf) = g.quadratic_form() {
        let mut q = vec![0.0; total * total];
        for i in 0..n {
            for j in 0..n {
                q[i * total + j] = -qf.q[i * n + j];
            }
        }
        let mut lin = vec![0.0; total];
        for i in 0..n {
            lin[i] = -qf.lin[i];
        }
        lin[t_slot] = 1.0;
        let form = QuadraticForm::new(total, q, lin, -qf.constant);
        // Rebuild from the explicit form so solvers get the analytic
        // line-search path; keep the concave tag.
        lifted = SmoothFn::quadratic(form).with_convexity(Convexity::Concave);
    }
    lifted
}

impl EpigraphLift {
    fn build(p: &DcProblem, kind: LiftKind) -> Self {
        let n = p.dim();
        let m = if kind == LiftKind::DcConstrained {
            p.dc_constraints.len()
        } else {
            0
        };
        let total = n + 1 + m;
        let phi = lift_minus_g(&p.g, n, total, n);
        let psis = (0..m)
            .map(|i| lift_minus_g(&p.dc_constraints[i].g, n, total, n + 1 + i))
            .collect();
        EpigraphLift { kind, base: p.clone(), phi, psis }
    }

    pub fn kind(&self) -> LiftKind {
        self.kind
    }

    pub fn base(&self) -> &DcProblem {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn lifted_dim(&self) -> usize {
        self.base.dim() + 1 + self.psis.len()
    }

    /// Lifted objective phi(w) = t0 - g0(x); concave by construction, with
    /// gradient (-grad g0(x), 1, 0, ..).
    pub fn phi(&self) -> &SmoothFn {
        &self.phi
    }

    /// Lifted DC constraints psi_i(w) = t_i - g_i(x); concave.
    pub fn psis(&self) -> &[SmoothFn] {
        &self.psis
    }

    /// Lifts a base point, setting every epigraph coordinate to its tight
    /// value t_j = f_j(x). Epigraph coordinates are never caller-supplied.
    pub fn embed(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.base.dim());
        let mut w = x.to_vec();
        w.push(self.base.f.value(x));
        if self.kind == LiftKind::DcConstrained {
            for c in &self.base.dc_constraints {
                w.push(c.f.value(x));
            }
        }
        w
    }

    /// Splits a lifted point into its base part and epigraph coordinates.
    pub fn extract(&self, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.base.dim();
        (w[..n].to_vec(), w[n..].to_vec())
    }

    /// Membership in the lifted feasible set E (epigraph inequalities plus
    /// the base domain), up to `tol`.
    pub fn membership(&self, w: &[f64], tol: f64) -> bool {
        self.membership_violation(w) <= tol
    }

    /// Largest violation of the epigraph inequalities and the base domain.
    pub fn membership_violation(&self, w: &[f64]) -> f64 {
        let n = self.base.dim();
        let x = &w[..n];
        let mut v = self.base.f.value(x) - w[n];
        if self.kind == LiftKind::DcConstrained {
            for (i, c) in self.base.dc_constraints.iter().enumerate() {
                v = v.max(c.f.value(x) - w[n + 1 + i]);
            }
        }
        if !self.base.domain.contains(x, 0.0) {
            let p = self.base.domain.project(x);
            v = v.max(linalg::max_abs_diff(&p, x));
        }
        v.max(0.0)
    }

    /// Values of the lifted DC constraints at w.
    pub fn psi_values(&self, w: &[f64]) -> Vec<f64> {
        self.psis.iter().map(|p| p.value(w)).collect()
    }

    /// Reduces the linearized conditional-gradient subproblem at `w` to the
    /// base space.
    ///
    /// The subproblem is: minimize <grad_phi, w'> over w' in E with every
    /// psi_i replaced by its linearization at w. Because grad_phi weights t0
    /// by +1 and the other epigraph coordinates by 0, minimizing over t0
    /// pins t0' = f0(x') and the psi halfspaces combine with the epigraph
    /// rows into f_i(x') <= g_i(x) + <grad g_i(x), x' - x>.
    pub fn linearized_subproblem(
        &self,
        grad_phi: &[f64],
        w: &[f64],
    ) -> Result<ReducedSubproblem, DcError> {
        let n = self.base.dim();
        debug_assert_eq!(grad_phi.len(), self.lifted_dim());
        debug_assert_eq!(w.len(), self.lifted_dim());
        let c_t0 = grad_phi[n];
        if c_t0 < 0.0 {
            return Err(DcError::Unbounded { threshold: f64::INFINITY });
        }
        for (i, &c_ti) in grad_phi[n + 1..].iter().enumerate() {
            if c_ti != 0.0 {
                return Err(DcError::UnsupportedSubproblem(format!(
                    "nonzero weight {c_ti:e} on epigraph coordinate {}",
                    i + 1
                )));
            }
        }
        let x = &w[..n];
        let objective = if c_t0 == 1.0 {
            self.base.f.add_affine(&grad_phi[..n], 0.0)
        } else {
            self.base.f.scale(c_t0).add_affine(&grad_phi[..n], 0.0)
        };
        let mut constraints = Vec::new();
        if self.kind == LiftKind::DcConstrained {
            for c in &self.base.dc_constraints {
                let gx = c.g.grad(x);
                let shift = linalg::dot(&gx, x) - c.g.value(x);
                constraints.push(c.f.add_affine(&linalg::scale(&gx, -1.0), shift));
            }
        }
        Ok(ReducedSubproblem {
            objective,
            constraints,
            domain: self.base.domain.clone(),
            start: x.to_vec(),
        })
    }

    /// Lifts a reduced-subproblem solution back to the lifted space with
    /// tight epigraph coordinates.
    pub fn recover(&self, x_star: &[f64]) -> Vec<f64> {
        self.embed(x_star)
    }
}

/// Plain epigraph lift of an unconstrained problem.
pub fn lift_basic(p: &DcProblem) -> Result<EpigraphLift, DcError> {
    if !p.dc_constraints.is_empty() {
        return Err(DcError::HasConstraints);
    }
    if !p.domain.is_whole_space() {
        return Err(DcError::Config(
            "basic lift expects the whole space; use the convex-constrained lift".into(),
        ));
    }
    Ok(EpigraphLift::build(p, LiftKind::Basic))
}

/// Epigraph lift keeping the (convex) base domain as a constraint on x.
pub fn lift_convex_constrained(p: &DcProblem) -> Result<EpigraphLift, DcError> {
    if !p.dc_constraints.is_empty() {
        return Err(DcError::HasConstraints);
    }
    Ok(EpigraphLift::build(p, LiftKind::ConvexConstrained))
}

/// Epigraph lift with one epigraph coordinate per DC constraint. Problems
/// without DC constraints belong to the other two lifts.
pub fn lift_dc_constrained(p: &DcProblem) -> Result<EpigraphLift, DcError> {
    if p.dc_constraints.is_empty() {
        return Err(DcError::Config(
            "problem has no DC constraints; use the basic or convex-constrained lift".into(),
        ));
    }
    Ok(EpigraphLift::build(p, LiftKind::DcConstrained))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::zoo;

    #[test]
    fn embed_sets_tight_epigraph_coordinates() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        let lift = lift_basic(&inst.problem).unwrap();
        let w = lift.embed(&[1.0]);
        assert_eq!(w, vec![1.0, 1.0]); // f(1) = 1
        assert!(lift.membership(&w, 0.0));
        // phi at the embedded point equals the DC objective.
        assert!((lift.phi().value(&w) - inst.problem.objective(&[1.0])).abs() < 1e-15);
    }

    #[test]
    fn phi_gradient_assembles_from_base_gradients() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        let lift = lift_basic(&inst.problem).unwrap();
        let w = lift.embed(&[2.0]);
        let g = lift.phi().grad(&w);
        assert!((g[0] + 4.0).abs() < 1e-15); // -grad g0 = -2x
        assert!((g[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dc_lift_tracks_constraint_epigraphs() {
        let inst = zoo::make_ring_constrained_dc_2d(1).unwrap();
        let lift = lift_dc_constrained(&inst.problem).unwrap();
        assert_eq!(lift.lifted_dim(), 4);
        let w = lift.embed(&[0.0, 0.0]);
        assert_eq!(w.len(), 4);
        assert!((w[2] - 0.0).abs() < 1e-15); // f0(0) = 0
        assert!((w[3] - 0.0).abs() < 1e-15); // f1(0) = 0
        // psi = t1 - g1(0,0) = 0 - 1 = -1: strictly feasible at the origin.
        let psis = lift.psi_values(&w);
        assert!((psis[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn membership_rejects_points_below_the_epigraph() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        let lift = lift_basic(&inst.problem).unwrap();
        assert!(!lift.membership(&[1.0, 0.5], 1e-9)); // t < f(x)
        assert!(lift.membership(&[1.0, 1.5], 0.0)); // strict epigraph interior
    }

    #[test]
    fn basic_lift_rejects_constrained_problems() {
        let inst = zoo::make_ring_constrained_dc_2d(1).unwrap();
        assert!(matches!(lift_basic(&inst.problem), Err(DcError::HasConstraints)));
    }

    #[test]
    fn dc_lift_rejects_unconstrained_problems() {
        let inst = zoo::make_quartic_dc_1d(1.0);
        assert!(matches!(lift_dc_constrained(&inst.problem), Err(DcError::Config(_))));
    }

    #[test]
    fn reduced_subproblem_matches_hand_built_surrogate() {
        // Box domain [0,1], f = x^2, g = 2x: the linearized subproblem at any
        // x_k is min x^2 - 2x over [0,1].
        let f = SmoothFn::quadratic(QuadraticForm::new(1, vec![2.0], vec![0.0], 0.0));
        let g = SmoothFn::linear(vec![2.0], 0.0);
        let p = DcProblem::new(
            f,
            g,
            Domain::boxed(vec![0.0], vec![1.0]),
            Vec::new(),
            vec![0.25],
        )
        .unwrap();
        let lift = lift_convex_constrained(&p).unwrap();
        let w = lift.embed(&[0.25]);
        let grad_phi = lift.phi().grad(&w);
        let sub = lift.linearized_subproblem(&grad_phi, &w).unwrap();
        assert!(sub.constraints.is_empty());
        // objective(x) = x^2 - 2x up to an additive constant
        let v0 = sub.objective.value(&[0.0]);
        let v1 = sub.objective.value(&[1.0]);
        assert!(((v1 - v0) - (-1.0)).abs() < 1e-14);
        let d = sub.objective.grad(&[0.5]);
        assert!((d[0] - (2.0 * 0.5 - 2.0)).abs() < 1e-14);
    }
}
