//! Problem containers: smooth convex oracles, simple convex domains, and
//! difference-of-convex programs built from both.

pub mod zoo;

use std::fmt;
use std::sync::Arc;

use crate::error::DcError;
use crate::linalg;
use crate::rng::Lcg64;

/// Curvature tag carried by an oracle. `Unknown` disables any dispatch that
/// needs a guarantee (e.g. the exact unit step on concave line restrictions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Unknown,
}

/// Dense quadratic 0.5 x'Qx + b'x + c with symmetric Q. Carrying the explicit
/// form lets solvers take closed-form and Newton paths instead of treating
/// everything as a black box.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub dim: usize,
    pub q: Vec<f64>,
    pub lin: Vec<f64>,
    pub constant: f64,
}

impl QuadraticForm {
    pub fn new(dim: usize, q: Vec<f64>, lin: Vec<f64>, constant: f64) -> Self {
        assert_eq!(q.len(), dim * dim);
        assert_eq!(lin.len(), dim);
        QuadraticForm { dim, q, lin, constant }
    }

    pub fn zero(dim: usize) -> Self {
        QuadraticForm::new(dim, vec![0.0; dim * dim], vec![0.0; dim], 0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let qx = linalg::mat_vec(&self.q, self.dim, x);
        0.5 * linalg::dot(x, &qx) + linalg::dot(&self.lin, x) + self.constant
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = linalg::mat_vec(&self.q, self.dim, x);
        for i in 0..self.dim {
            g[i] += self.lin[i];
        }
        g
    }

    pub fn is_affine(&self) -> bool {
        self.q.iter().all(|&v| v == 0.0)
    }

    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.dim, other.dim);
        QuadraticForm {
            dim: self.dim,
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            lin: linalg::add(&self.lin, &other.lin),
            constant: self.constant + other.constant,
        }
    }

    pub fn add_affine(&self, c: &[f64], c0: f64) -> QuadraticForm {
        assert_eq!(c.len(), self.dim);
        QuadraticForm {
            dim: self.dim,
            q: self.q.clone(),
            lin: linalg::add(&self.lin, c),
            constant: self.constant + c0,
        }
    }

    pub fn scale(&self, s: f64) -> QuadraticForm {
        QuadraticForm {
            dim: self.dim,
            q: linalg::scale(&self.q, s),
            lin: linalg::scale(&self.lin, s),
            constant: self.constant * s,
        }
    }
}

/// Checks symmetry (tolerance 1e-12 on entries) and positive semidefiniteness
/// via 50 random Rayleigh quotients (each must be >= -1e-10). A sampled check
/// keeps this module dependency-free; the matrices involved are desk-scale.
pub fn psd_check(m: &[f64], n: usize) -> Result<(), DcError> {
    let asym = linalg::max_asymmetry(m, n);
    if asym > 1e-12 {
        return Err(DcError::NonSymmetricInput { max_asymmetry: asym });
    }
    let mut rng = Lcg64::new(0xD15C0 ^ n as u64);
    for _ in 0..50 {
        let d = rng.unit_vector(n);
        let md = linalg::mat_vec(m, n, &d);
        let rayleigh = linalg::dot(&d, &md);
        if rayleigh < -1e-10 {
            return Err(DcError::NotPsd { witness: rayleigh });
        }
    }
    Ok(())
}

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Smooth function oracle: value and analytic gradient, plus optional
/// structure (gradient Lipschitz constant, curvature tag, quadratic form).
/// Oracles are immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct SmoothFn {
    dim: usize,
    value: ValueFn,
    grad: GradFn,
    lipschitz_grad: Option<f64>,
    convexity: Convexity,
    quadratic: Option<QuadraticForm>,
}

impl fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFn")
            .field("dim", &self.dim)
            .field("convexity", &self.convexity)
            .field("lipschitz_grad", &self.lipschitz_grad)
            .field("quadratic", &self.quadratic.is_some())
            .finish()
    }
}

impl SmoothFn {
    pub fn from_fns<V, G>(dim: usize, value: V, grad: G, convexity: Convexity) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        SmoothFn {
            dim,
            value: Arc::new(value),
            grad: Arc::new(grad),
            lipschitz_grad: None,
            convexity,
            quadratic: None,
        }
    }

    /// Builds an oracle from an explicit quadratic form. The curvature tag is
    /// derived from sampled Rayleigh quotients of Q (or -Q); the gradient
    /// Lipschitz constant is bounded by the largest row sum of |Q|.
    pub fn quadratic(form: QuadraticForm) -> Self {
        let n = form.dim;
        let convexity = if form.is_affine() {
            Convexity::Convex // affine functions are filed as convex
        } else if psd_check(&form.q, n).is_ok() {
            Convexity::Convex
        } else if psd_check(&linalg::scale(&form.q, -1.0), n).is_ok() {
            Convexity::Concave
        } else {
            Convexity::Unknown
        };
        let lip = (0..n)
            .map(|i| form.q[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let f1 = form.clone();
        let f2 = form.clone();
        SmoothFn {
            dim: n,
            value: Arc::new(move |x| f1.value(x)),
            grad: Arc::new(move |x| f2.grad(x)),
            lipschitz_grad: Some(lip),
            convexity,
            quadratic: Some(form),
        }
    }

    pub fn linear(c: Vec<f64>, c0: f64) -> Self {
        let dim = c.len();
        SmoothFn::quadratic(QuadraticForm::new(dim, vec![0.0; dim * dim], c, c0))
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz_grad = Some(l);
        self
    }

    pub fn with_convexity(mut self, c: Convexity) -> Self {
        self.convexity = c;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.value)(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (self.grad)(x)
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn lipschitz_grad(&self) -> Option<f64> {
        self.lipschitz_grad
    }

    pub fn quadratic_form(&self) -> Option<&QuadraticForm> {
        self.quadratic.as_ref()
    }

    pub fn is_affine(&self) -> bool {
        self.quadratic.as_ref().map_or(false, |q| q.is_affine())
    }

    /// self + <c, x> + c0. Affine shifts preserve the curvature tag.
    pub fn add_affine(&self, c: &[f64], c0: f64) -> SmoothFn {
        assert_eq!(c.len(), self.dim);
        let base_v = self.value.clone();
        let base_g = self.grad.clone();
        let cv = c.to_vec();
        let cg = c.to_vec();
        SmoothFn {
            dim: self.dim,
            value: Arc::new(move |x| base_v(x) + linalg::dot(&cv, x) + c0),
            grad: Arc::new(move |x| linalg::add(&base_g(x), &cg)),
            lipschitz_grad: self.lipschitz_grad,
            convexity: self.convexity,
            quadratic: self.quadratic.as_ref().map(|q| q.add_affine(c, c0)),
        }
    }

    pub fn add(&self, other: &SmoothFn) -> SmoothFn {
        assert_eq!(self.dim, other.dim);
        let (av, ag) = (self.value.clone(), self.grad.clone());
        let (bv, bg) = (other.value.clone(), other.grad.clone());
        let convexity = combine_add(self, other);
        let lip = match (self.lipschitz_grad, other.lipschitz_grad) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let quadratic = match (&self.quadratic, &other.quadratic) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        SmoothFn {
            dim: self.dim,
            value: Arc::new(move |x| av(x) + bv(x)),
            grad: Arc::new(move |x| linalg::add(&ag(x), &bg(x))),
            lipschitz_grad: lip,
            convexity,
            quadratic,
        }
    }

    pub fn scale(&self, s: f64) -> SmoothFn {
        let (av, ag) = (self.value.clone(), self.grad.clone());
        let convexity = if s >= 0.0 {
            self.convexity
        } else {
            match self.convexity {
                Convexity::Convex => Convexity::Concave,
                Convexity::Concave => Convexity::Convex,
                Convexity::Unknown => Convexity::Unknown,
            }
        };
        SmoothFn {
            dim: self.dim,
            value: Arc::new(move |x| s * av(x)),
            grad: Arc::new(move |x| linalg::scale(&ag(x), s)),
            lipschitz_grad: self.lipschitz_grad.map(|l| l * s.abs()),
            convexity,
            quadratic: self.quadratic.as_ref().map(|q| q.scale(s)),
        }
    }
}

fn combine_add(a: &SmoothFn, b: &SmoothFn) -> Convexity {
    // Affine summands are neutral: they never change the other side's tag.
    if a.is_affine() {
        return b.convexity;
    }
    if b.is_affine() {
        return a.convexity;
    }
    match (a.convexity, b.convexity) {
        (Convexity::Convex, Convexity::Convex) => Convexity::Convex,
        (Convexity::Concave, Convexity::Concave) => Convexity::Concave,
        _ => Convexity::Unknown,
    }
}

/// Maximum relative error between the analytic gradient and central finite
/// differences over the given points. Step per coordinate: 1e-5 * (1 + |x_i|).
pub fn fd_gradient_error(f: &SmoothFn, points: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for x in points {
        let g = f.grad(x);
        let mut fd = vec![0.0; f.dim()];
        for i in 0..f.dim() {
            let h = 1e-5 * (1.0 + x[i].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
        }
        let diff: f64 = g
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(diff / (1.0 + linalg::norm(&g)));
    }
    worst
}

/// Simple convex feasible sets with closed-form projection and, where the set
/// is bounded, a linear minimization oracle.
#[derive(Debug, Clone)]
pub enum DomainKind {
    WholeSpace,
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// {x >= 0, sum x = radius}
    Simplex { radius: f64 },
    L2Ball { center: Vec<f64>, radius: f64 },
    /// Convex hull of an explicit vertex list.
    VertexPolytope { vertices: Vec<Vec<f64>> },
}

#[derive(Debug, Clone)]
pub struct Domain {
    dim: usize,
    kind: DomainKind,
}

impl Domain {
    pub fn whole_space(dim: usize) -> Self {
        Domain { dim, kind: DomainKind::WholeSpace }
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "box bounds must satisfy lo <= hi");
        Domain { dim: lo.len(), kind: DomainKind::Box { lo, hi } }
    }

    pub fn simplex(dim: usize, radius: f64) -> Self {
        assert!(radius > 0.0);
        Domain { dim, kind: DomainKind::Simplex { radius } }
    }

    pub fn l2_ball(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0);
        Domain { dim: center.len(), kind: DomainKind::L2Ball { center, radius } }
    }

    pub fn vertex_polytope(vertices: Vec<Vec<f64>>) -> Self {
        assert!(!vertices.is_empty());
        let dim = vertices[0].len();
        assert!(vertices.iter().all(|v| v.len() == dim));
        Domain { dim, kind: DomainKind::VertexPolytope { vertices } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn is_whole_space(&self) -> bool {
        matches!(self.kind, DomainKind::WholeSpace)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            DomainKind::WholeSpace => true,
            DomainKind::Box { lo, hi } => x
                .iter()
                .enumerate()
                .all(|(i, &v)| v >= lo[i] - tol && v <= hi[i] + tol),
            DomainKind::Simplex { radius } => {
                x.iter().all(|&v| v >= -tol) && (x.iter().sum::<f64>() - radius).abs() <= tol
            }
            DomainKind::L2Ball { center, radius } => {
                linalg::norm(&linalg::sub(x, center)) <= radius + tol
            }
            DomainKind::VertexPolytope { .. } => {
                let p = self.project(x);
                linalg::max_abs_diff(&p, x) <= tol
            }
        }
    }

    /// Euclidean projection onto the set. Identity on the whole space.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            DomainKind::WholeSpace => x.to_vec(),
            DomainKind::Box { lo, hi } => x
                .iter()
                .enumerate()
                .map(|(i, &v)| v.clamp(lo[i], hi[i]))
                .collect(),
            DomainKind::Simplex { radius } => project_simplex(x, *radius),
            DomainKind::L2Ball { center, radius } => {
                let d = linalg::sub(x, center);
                let n = linalg::norm(&d);
                if n <= *radius {
                    x.to_vec()
                } else {
                    linalg::add_scaled(center, *radius / n, &d)
                }
            }
            DomainKind::VertexPolytope { vertices } => project_polytope(vertices, x),
        }
    }

    /// argmin over the set of <c, s>. Ties between vertices break toward the
    /// lowest index (for boxes: toward the lower bound), keeping runs
    /// deterministic. The whole space has no such oracle.
    pub fn lmo(&self, c: &[f64]) -> Result<Vec<f64>, DcError> {
        debug_assert_eq!(c.len(), self.dim);
        match &self.kind {
            DomainKind::WholeSpace => Err(DcError::LmoUnavailable),
            DomainKind::Box { lo, hi } => Ok(c
                .iter()
                .enumerate()
                .map(|(i, &ci)| if ci > 0.0 { lo[i] } else if ci < 0.0 { hi[i] } else { lo[i] })
                .collect()),
            DomainKind::Simplex { radius } => {
                let mut best = 0usize;
                for i in 1..self.dim {
                    if c[i] < c[best] {
                        best = i;
                    }
                }
                let mut v = vec![0.0; self.dim];
                v[best] = *radius;
                Ok(v)
            }
            DomainKind::L2Ball { center, radius } => {
                let n = linalg::norm(c);
                if n == 0.0 {
                    Ok(center.clone())
                } else {
                    Ok(linalg::add_scaled(center, -radius / n, c))
                }
            }
            DomainKind::VertexPolytope { vertices } => {
                let mut best = 0usize;
                let mut best_val = linalg::dot(c, &vertices[0]);
                for (i, v) in vertices.iter().enumerate().skip(1) {
                    let val = linalg::dot(c, v);
                    if val < best_val {
                        best_val = val;
                        best = i;
                    }
                }
                Ok(vertices[best].clone())
            }
        }
    }

    /// Euclidean diameter; +inf for the whole space.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            DomainKind::WholeSpace => f64::INFINITY,
            DomainKind::Box { lo, hi } => linalg::norm(&linalg::sub(hi, lo)),
            DomainKind::Simplex { radius } => {
                if self.dim <= 1 {
                    0.0
                } else {
                    radius * 2.0f64.sqrt()
                }
            }
            DomainKind::L2Ball { radius, .. } => 2.0 * radius,
            DomainKind::VertexPolytope { vertices } => {
                let mut worst = 0.0f64;
                for i in 0..vertices.len() {
                    for j in (i + 1)..vertices.len() {
                        worst = worst.max(linalg::norm(&linalg::sub(&vertices[i], &vertices[j])));
                    }
                }
                worst
            }
        }
    }

    /// Random feasible point; `None` for unbounded sets.
    pub fn sample(&self, rng: &mut Lcg64) -> Option<Vec<f64>> {
        match &self.kind {
            DomainKind::WholeSpace => None,
            DomainKind::Box { lo, hi } => Some(
                (0..self.dim).map(|i| rng.uniform(lo[i], hi[i])).collect(),
            ),
            DomainKind::Simplex { radius } => {
                // Exponential spacings normalized to the radius: uniform on the simplex.
                let e: Vec<f64> = (0..self.dim)
                    .map(|_| -(1.0 - rng.next_f64()).ln().max(1e-300))
                    .collect();
                let s: f64 = e.iter().sum();
                Some(linalg::scale(&e, radius / s))
            }
            DomainKind::L2Ball { center, radius } => {
                let dir = rng.unit_vector(self.dim);
                let r = radius * rng.next_f64().powf(1.0 / self.dim as f64);
                Some(linalg::add_scaled(center, r, &dir))
            }
            DomainKind::VertexPolytope { vertices } => {
                let mut w: Vec<f64> = (0..vertices.len()).map(|_| rng.next_f64() + 1e-9).collect();
                let s: f64 = w.iter().sum();
                for v in &mut w {
                    *v /= s;
                }
                let mut x = vec![0.0; self.dim];
                for (wi, v) in w.iter().zip(vertices) {
                    x = linalg::add_scaled(&x, *wi, v);
                }
                Some(x)
            }
        }
    }

    /// Deterministic "far apart" feasible pairs. Curvature estimation mixes
    /// these with random pairs so suprema attained at extreme points are hit
    /// exactly.
    pub fn extreme_pairs(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            DomainKind::WholeSpace => Vec::new(),
            DomainKind::Box { lo, hi } => {
                let mut pairs = vec![(lo.clone(), hi.clone())];
                for k in 0..self.dim.min(8) {
                    let mut a = lo.clone();
                    let mut b = lo.clone();
                    b[k] = hi[k];
                    a[k] = lo[k];
                    pairs.push((a, b));
                }
                pairs
            }
            DomainKind::Simplex { radius } => {
                let mut pairs = Vec::new();
                for i in 0..self.dim.min(5) {
                    for j in (i + 1)..self.dim.min(5) {
                        let mut a = vec![0.0; self.dim];
                        let mut b = vec![0.0; self.dim];
                        a[i] = *radius;
                        b[j] = *radius;
                        pairs.push((a, b));
                    }
                }
                pairs
            }
            DomainKind::L2Ball { center, radius } => (0..self.dim.min(8))
                .map(|i| {
                    let mut a = center.clone();
                    let mut b = center.clone();
                    a[i] -= radius;
                    b[i] += radius;
                    (a, b)
                })
                .collect(),
            DomainKind::VertexPolytope { vertices } => {
                let mut pairs = Vec::new();
                let cap = vertices.len().min(6);
                for i in 0..cap {
                    for j in (i + 1)..cap {
                        pairs.push((vertices[i].clone(), vertices[j].clone()));
                    }
                }
                pairs
            }
        }
    }
}

/// Projection onto {x >= 0, sum x = radius} by the sort-and-threshold rule.
fn project_simplex(x: &[f64], radius: f64) -> Vec<f64> {
    let n = x.len();
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let t = (css - radius) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    let _ = n;
    x.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Projection onto conv(vertices): accelerated projected gradient on the
/// weight simplex for min_w 0.5 || V'w - y ||^2. Desk-scale vertex counts.
fn project_polytope(vertices: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = vertices.len();
    if m == 1 {
        return vertices[0].clone();
    }
    // Gram matrix and linear term of the weight-space quadratic.
    let mut gram = vec![0.0; m * m];
    let mut lin = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            gram[i * m + j] = linalg::dot(&vertices[i], &vertices[j]);
        }
        lin[i] = linalg::dot(&vertices[i], y);
    }
    let lip: f64 = (0..m).map(|i| gram[i * m + i]).sum::<f64>().max(1e-12);
    let step = 1.0 / lip;
    let grad = |w: &[f64]| -> Vec<f64> {
        let gw = linalg::mat_vec(&gram, m, w);
        linalg::sub(&gw, &lin)
    };
    let mut w = vec![1.0 / m as f64; m];
    let mut v = w.clone();
    let mut t_prev = 1.0f64;
    for _ in 0..200_000 {
        let g = grad(&v);
        let w_next = project_simplex(&linalg::add_scaled(&v, -step, &g), 1.0);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_prev * t_prev).sqrt());
        let beta = (t_prev - 1.0) / t_next;
        v = linalg::add_scaled(&w_next, beta, &linalg::sub(&w_next, &w));
        let residual = linalg::max_abs_diff(&w_next, &w);
        w = w_next;
        t_prev = t_next;
        if residual < 1e-14 {
            break;
        }
    }
    let mut x = vec![0.0; y.len()];
    for (wi, vert) in w.iter().zip(vertices) {
        x = linalg::add_scaled(&x, *wi, vert);
    }
    x
}

/// One difference-of-convex constraint f(x) - g(x) <= 0.
#[derive(Debug, Clone)]
pub struct DcConstraint {
    pub f: SmoothFn,
    pub g: SmoothFn,
}

impl DcConstraint {
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.f.value(x) - self.g.value(x)
    }
}

/// A difference-of-convex program: minimize f(x) - g(x) over the domain,
/// subject to optional DC constraints.
#[derive(Debug, Clone)]
pub struct DcProblem {
    pub f: SmoothFn,
    pub g: SmoothFn,
    pub domain: Domain,
    pub dc_constraints: Vec<DcConstraint>,
    pub x_init: Vec<f64>,
}

/// Feasibility slack used when validating initial points.
pub const FEAS_TOL: f64 = 1e-9;

impl DcProblem {
    pub fn new(
        f: SmoothFn,
        g: SmoothFn,
        domain: Domain,
        dc_constraints: Vec<DcConstraint>,
        x_init: Vec<f64>,
    ) -> Result<Self, DcError> {
        let dim = f.dim();
        for (name, d) in [("g", g.dim()), ("domain", domain.dim()), ("x_init", x_init.len())] {
            if d != dim {
                let _ = name;
                return Err(DcError::DimensionMismatch { expected: dim, got: d });
            }
        }
        for c in &dc_constraints {
            if c.f.dim() != dim || c.g.dim() != dim {
                return Err(DcError::DimensionMismatch { expected: dim, got: c.f.dim() });
            }
        }
        if f.convexity() != Convexity::Convex || g.convexity() != Convexity::Convex {
            return Err(DcError::Config(
                "objective parts must both carry a convex tag".into(),
            ));
        }
        for c in &dc_constraints {
            if c.f.convexity() != Convexity::Convex || c.g.convexity() != Convexity::Convex {
                return Err(DcError::Config(
                    "constraint parts must both carry a convex tag".into(),
                ));
            }
        }
        let p = DcProblem { f, g, domain, dc_constraints, x_init };
        let viol = p.max_violation(&p.x_init);
        if viol > FEAS_TOL {
            return Err(DcError::InfeasiblePoint { violation: viol });
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// F(x) = f(x) - g(x).
    pub fn objective(&self, x: &[f64]) -> f64 {
        self.f.value(x) - self.g.value(x)
    }

    pub fn objective_grad(&self, x: &[f64]) -> Vec<f64> {
        linalg::sub(&self.f.grad(x), &self.g.grad(x))
    }

    pub fn constraint_residuals(&self, x: &[f64]) -> Vec<f64> {
        self.dc_constraints.iter().map(|c| c.residual(x)).collect()
    }

    /// Largest violation across the domain and the DC constraints
    /// (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut v = self
            .constraint_residuals(x)
            .into_iter()
            .fold(0.0f64, |acc, r| acc.max(r));
        if !self.domain.contains(x, FEAS_TOL) {
            let p = self.domain.project(x);
            v = v.max(linalg::max_abs_diff(&p, x));
        }
        v
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.max_violation(x) <= tol
    }
}

/// How reference solutions attached to a benchmark instance were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    GridOracle,
}

/// A named problem with optional reference solutions for certificates.
#[derive(Debug, Clone)]
pub struct BenchmarkInstance {
    pub name: String,
    pub problem: DcProblem,
    /// Minimizer and optimal value, when known.
    pub known_optimum: Option<(Vec<f64>, f64)>,
    pub known_stationary_points: Option<Vec<Vec<f64>>>,
    pub provenance: Provenance,
}

/// Exhaustive stationary-point search on a uniform grid, for 1-D and 2-D
/// problems only. Returns every feasible grid point whose objective is <= the
/// objective of all feasible grid neighbors (Moore neighborhood). Used as an
/// independent oracle against solver output.
pub fn grid_stationary_oracle(
    problem: &DcProblem,
    lo: &[f64],
    hi: &[f64],
    step: f64,
) -> Result<Vec<Vec<f64>>, DcError> {
    let dim = problem.dim();
    if dim > 2 {
        return Err(DcError::DimensionTooLarge { dim, limit: 2 });
    }
    if lo.len() != dim || hi.len() != dim {
        return Err(DcError::DimensionMismatch { expected: dim, got: lo.len() });
    }
    assert!(step > 0.0);
    let feas = |x: &[f64]| problem.is_feasible(x, FEAS_TOL);
    let mut found = Vec::new();
    if dim == 1 {
        let n = ((hi[0] - lo[0]) / step).round() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|i| lo[0] + i as f64 * step).collect();
        let vals: Vec<Option<f64>> = xs
            .iter()
            .map(|&x| if feas(&[x]) { Some(problem.objective(&[x])) } else { None })
            .collect();
        for i in 0..n {
            let Some(v) = vals[i] else { continue };
            let mut is_min = true;
            for j in [i.wrapping_sub(1), i + 1] {
                if j < n {
                    if let Some(w) = vals[j] {
                        if v > w {
                            is_min = false;
                            break;
                        }
                    }
                }
            }
            if is_min {
                found.push(vec![xs[i]]);
            }
        }
        return Ok(found);
    }
    // 2-D sweep with a three-row window so the grid never lives in memory whole.
    let nx = ((hi[0] - lo[0]) / step).round() as usize + 1;
    let ny = ((hi[1] - lo[1]) / step).round() as usize + 1;
    let coord = |i: usize, j: usize| [lo[0] + i as f64 * step, lo[1] + j as f64 * step];
    let eval_row = |i: isize| -> Vec<Option<f64>> {
        if i < 0 || i as usize >= nx {
            return vec![None; ny];
        }
        (0..ny)
            .map(|j| {
                let x = coord(i as usize, j);
                if feas(&x) {
                    Some(problem.objective(&x))
                } else {
                    None
                }
            })
            .collect()
    };
    let mut prev = eval_row(-1);
    let mut curr = eval_row(0);
    let mut next = eval_row(1);
    for i in 0..nx {
        for j in 0..ny {
            let Some(v) = curr[j] else { continue };
            let mut is_min = true;
            'nb: for (ri, row) in [&prev, &curr, &next].into_iter().enumerate() {
                for dj in [-1isize, 0, 1] {
                    let jj = j as isize + dj;
                    if jj < 0 || jj as usize >= ny {
                        continue;
                    }
                    if ri == 1 && dj == 0 {
                        continue;
                    }
                    if let Some(w) = row[jj as usize] {
                        if v > w {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
            }
            if is_min {
                found.push(coord(i, j).to_vec());
            }
        }
        prev = std::mem::replace(&mut curr, std::mem::replace(&mut next, eval_row(i as isize + 2)));
    }
    Ok(found)
}
