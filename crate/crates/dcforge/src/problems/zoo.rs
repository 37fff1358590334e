//! Benchmark instances with reference solutions. Everything here is
//! deterministic: seeded instances draw from the crate's LCG, so a name like
//! `quadratic_dc:7` denotes the same problem on every platform.

use crate::error::DcError;
use crate::linalg;
use crate::problems::{
    BenchmarkInstance, Convexity, DcConstraint, DcProblem, Domain, Provenance, QuadraticForm,
    SmoothFn,
};
use crate::rng::Lcg64;

/// One-dimensional x^4 - x^2: two global minima at +-1/sqrt(2) (value -1/4)
/// and a stationary maximum at 0. Small enough to check everything by hand.
pub fn make_quartic_dc_1d(x_init: f64) -> BenchmarkInstance {
    let f = SmoothFn::from_fns(
        1,
        |x: &[f64]| x[0].powi(4),
        |x: &[f64]| vec![4.0 * x[0].powi(3)],
        Convexity::Convex,
    );
    let g = SmoothFn::quadratic(QuadraticForm::new(1, vec![2.0], vec![0.0], 0.0));
    let problem = DcProblem::new(f, g, Domain::whole_space(1), Vec::new(), vec![x_init])
        .expect("quartic instance is always well formed");
    let r = std::f64::consts::FRAC_1_SQRT_2;
    BenchmarkInstance {
        name: "quartic1d".into(),
        problem,
        known_optimum: Some((vec![r], -0.25)),
        known_stationary_points: Some(vec![vec![-r], vec![0.0], vec![r]]),
        provenance: Provenance::Analytic,
    }
}

/// Closed-form fixed-point map for the quartic instance: the convex
/// subproblem min_x x^4 - 2*x_k*x has the unique solution (x_k / 2)^(1/3).
/// Used as an oracle against the numeric inner solver.
pub fn quartic_cccp_map(x: f64) -> f64 {
    (x / 2.0).cbrt()
}

/// Quadratic difference instance from explicit symmetric PSD matrices:
/// minimize 0.5 x'Ax + b'x - (0.5 x'Cx + d'x) over the whole space.
/// When A - C is positive definite the unique minimizer solves
/// (A - C) x = d - b and is attached as the known optimum.
pub fn make_quadratic_dc(
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
    x_init: Vec<f64>,
) -> Result<BenchmarkInstance, DcError> {
    let n = b.len();
    if a.len() != n * n || c.len() != n * n || d.len() != n || x_init.len() != n {
        return Err(DcError::DimensionMismatch { expected: n, got: d.len() });
    }
    crate::problems::psd_check(&a, n)?;
    crate::problems::psd_check(&c, n)?;
    let f = SmoothFn::quadratic(QuadraticForm::new(n, a.clone(), b.clone(), 0.0));
    let g = SmoothFn::quadratic(QuadraticForm::new(n, c.clone(), d.clone(), 0.0));
    let diff: Vec<f64> = a.iter().zip(&c).map(|(x, y)| x - y).collect();
    let known_optimum = if linalg::cholesky(&diff, n, 1e-10).is_some() {
        let rhs = linalg::sub(&d, &b);
        let x_star = linalg::solve_dense(&diff, n, &rhs)?;
        let value = f.value(&x_star) - g.value(&x_star);
        Some((x_star, value))
    } else {
        None
    };
    let problem = DcProblem::new(f, g, Domain::whole_space(n), Vec::new(), x_init)?;
    Ok(BenchmarkInstance {
        name: "quadratic_dc:custom".into(),
        problem,
        known_stationary_points: known_optimum.as_ref().map(|(x, _)| vec![x.clone()]),
        known_optimum,
        provenance: Provenance::Analytic,
    })
}

/// Seeded random quadratic difference instance. A = C + M with M solidly
/// positive definite, so the minimizer is always analytic. Dimensions fall in
/// 2..=8 depending on the seed.
pub fn make_seeded_quadratic_dc(seed: u64) -> BenchmarkInstance {
    let mut rng = Lcg64::new(seed ^ 0x9E3779B97F4A7C15);
    let n = 2 + rng.below(7);
    let c = random_psd(&mut rng, n);
    let mut m = random_psd(&mut rng, n);
    let shift = 0.5 + rng.next_f64();
    for i in 0..n {
        m[i * n + i] += shift;
    }
    let a: Vec<f64> = c.iter().zip(&m).map(|(x, y)| x + y).collect();
    let b = rng.uniform_vec(n, -1.0, 1.0);
    let d = rng.uniform_vec(n, -1.0, 1.0);
    let x_init = rng.uniform_vec(n, -1.0, 1.0);
    let mut inst = make_quadratic_dc(a, b, c, d, x_init)
        .expect("seeded quadratic instances are symmetric PSD by construction");
    inst.name = format!("quadratic_dc:{seed}");
    inst
}

fn random_psd(rng: &mut Lcg64, n: usize) -> Vec<f64> {
    let r: Vec<f64> = (0..n * n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    // R'R / n is symmetric PSD with entries of moderate size.
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += r[k * n + i] * r[k * n + j];
            }
            m[i * n + j] = s / n as f64;
        }
    }
    // Symmetrize exactly so downstream symmetry checks are immune to the
    // accumulation order above.
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = avg;
            m[j * n + i] = avg;
        }
    }
    m
}

/// Two-dimensional constrained instances. Objective: 0.5||x||^2 - (x1 + x2).
///
/// Variant 1 pairs f1 = ||x||^2 with g1 = ||x - (1,0)||^2; the difference is
/// affine and the feasible set is the halfplane x1 <= 1/2. The constrained
/// minimizer is (1/2, 1), objective -7/8.
///
/// Variant 2 pairs f1 = ||x||^2 with g1 = 0.5||x||^2 + 1; the feasible set is
/// the disk ||x||^2 <= 2 and the unconstrained minimizer (1,1) lands exactly
/// on its boundary, objective -1.
pub fn make_ring_constrained_dc_2d(variant: u8) -> Result<BenchmarkInstance, DcError> {
    let f0 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0],
        0.0,
    ));
    let g0 = SmoothFn::linear(vec![1.0, 1.0], 0.0);
    let f1 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![2.0, 0.0, 0.0, 2.0],
        vec![0.0, 0.0],
        0.0,
    ));
    let (name, g1, known) = match variant {
        1 => (
            "ring2d:v1",
            // ||x - (1,0)||^2 = x'Ix*... expanded: 0.5 x'(2I)x - 2 x1 + 1
            SmoothFn::quadratic(QuadraticForm::new(
                2,
                vec![2.0, 0.0, 0.0, 2.0],
                vec![-2.0, 0.0],
                1.0,
            )),
            (vec![0.5, 1.0], -0.875),
        ),
        2 => (
            "ring2d:v2",
            SmoothFn::quadratic(QuadraticForm::new(
                2,
                vec![1.0, 0.0, 0.0, 1.0],
                vec![0.0, 0.0],
                1.0,
            )),
            (vec![1.0, 1.0], -1.0),
        ),
        v => {
            return Err(DcError::Config(format!(
                "ring2d has variants 1 and 2, got {v}"
            )))
        }
    };
    let problem = DcProblem::new(
        f0,
        g0,
        Domain::whole_space(2),
        vec![DcConstraint { f: f1, g: g1 }],
        vec![0.0, 0.0],
    )?;
    Ok(BenchmarkInstance {
        name: name.into(),
        problem,
        known_stationary_points: Some(vec![known.0.clone()]),
        known_optimum: Some(known),
        provenance: Provenance::Analytic,
    })
}

/// Seeded 2-D instances with one DC constraint, used by the equivalence
/// batteries. Even seeds get an affine-difference constraint (halfplane),
/// odd seeds a ball; seeds divisible by 3 additionally run over a box domain.
/// The origin is strictly feasible and is the initial point.
pub fn make_seeded_dc_constrained(seed: u64) -> BenchmarkInstance {
    let mut rng = Lcg64::new(seed ^ 0xC0FFEE);
    let n = 2;
    let mut a0 = random_psd(&mut rng, n);
    let shift = 1.0 + rng.next_f64();
    for i in 0..n {
        a0[i * n + i] += shift;
    }
    let b0 = rng.uniform_vec(n, -1.0, 1.0);
    let d0 = rng.uniform_vec(n, -1.0, 1.0);
    let f0 = SmoothFn::quadratic(QuadraticForm::new(n, a0, b0, 0.0));
    let g0 = SmoothFn::linear(d0, 0.0);
    let f1 = SmoothFn::quadratic(QuadraticForm::new(
        n,
        vec![2.0, 0.0, 0.0, 2.0],
        vec![0.0, 0.0],
        0.0,
    ));
    let g1 = if seed % 2 == 0 {
        // ||x - c||^2 with ||c|| bounded away from zero: the constraint
        // difference is the halfplane 2<c,x> <= ||c||^2.
        let mut c;
        loop {
            c = rng.uniform_vec(n, -1.0, 1.0);
            if linalg::norm(&c) >= 0.3 {
                break;
            }
        }
        let nc2 = linalg::dot(&c, &c);
        SmoothFn::quadratic(QuadraticForm::new(
            n,
            vec![2.0, 0.0, 0.0, 2.0],
            linalg::scale(&c, -2.0),
            nc2,
        ))
    } else {
        // 0.5||x||^2 + r: the constraint is the disk ||x||^2 <= 2r.
        let r = 0.5 + rng.next_f64();
        SmoothFn::quadratic(QuadraticForm::new(
            n,
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0],
            r,
        ))
    };
    let domain = if seed % 3 == 0 {
        Domain::boxed(vec![-2.0, -2.0], vec![2.0, 2.0])
    } else {
        Domain::whole_space(n)
    };
    let problem = DcProblem::new(
        f0,
        g0,
        domain,
        vec![DcConstraint { f: f1, g: g1 }],
        vec![0.0, 0.0],
    )
    .expect("origin is strictly feasible for seeded constrained instances");
    BenchmarkInstance {
        name: format!("dc_constrained:{seed}"),
        problem,
        known_optimum: None,
        known_stationary_points: None,
        provenance: Provenance::Analytic,
    }
}

/// A constrained Frank-Wolfe template instance: minimize phi over
/// `domain` intersected with {psi_i <= 0}. `phi_star` is the optimal value
/// when known (verified against a grid oracle in the test suite).
#[derive(Debug, Clone)]
pub struct FwPlusInstance {
    pub name: String,
    pub phi: SmoothFn,
    pub domain: Domain,
    pub psis: Vec<SmoothFn>,
    pub omega1: Vec<f64>,
    pub phi_star: Option<f64>,
}

/// Concave-objective, concave-constraint template instances over boxes.
/// Feasible sets are box-minus-ball shapes; optima sit at box corners, so
/// they are known exactly.
pub fn fwplus_concave_instances() -> Vec<FwPlusInstance> {
    let mut out = Vec::new();

    // (a) phi = -0.5||w - (2,2)||^2, psi keeps iterates out of a small disk
    // around (1,1). Farthest feasible point from (2,2) is the corner (-1,-1).
    let phi_a = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-1.0, 0.0, 0.0, -1.0],
        vec![2.0, 2.0],
        -4.0,
    ));
    let psi_a = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-2.0, 0.0, 0.0, -2.0],
        vec![2.0, 2.0],
        0.5 - 2.0,
    ));
    out.push(FwPlusInstance {
        name: "fwplus_concave:a".into(),
        phi: phi_a,
        domain: Domain::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]),
        psis: vec![psi_a],
        omega1: vec![0.0, -1.0],
        phi_star: Some(-9.0),
    });

    // (b) linear objective, feasible region outside the unit disk inside
    // [0,2]^2; optimum at the corner (2,2).
    let phi_b = SmoothFn::linear(vec![-1.0, -2.0], 0.0);
    let psi_b = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-2.0, 0.0, 0.0, -2.0],
        vec![0.0, 0.0],
        1.0,
    ));
    out.push(FwPlusInstance {
        name: "fwplus_concave:b".into(),
        phi: phi_b,
        domain: Domain::boxed(vec![0.0, 0.0], vec![2.0, 2.0]),
        psis: vec![psi_b],
        omega1: vec![2.0, 0.0],
        phi_star: Some(-6.0),
    });

    // (c) two constraints: an affine one and a concave ring cut; optimum -4
    // attained at (2, +-2).
    let phi_c = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-0.5, 0.0, 0.0, -0.5],
        vec![-1.0, 0.0],
        0.0,
    ));
    let psi_c1 = SmoothFn::linear(vec![-1.0, -1.0], -1.0).with_convexity(Convexity::Concave);
    let psi_c2 = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![-2.0, 0.0, 0.0, -2.0],
        vec![2.0, 0.0],
        0.25 - 1.0,
    ));
    out.push(FwPlusInstance {
        name: "fwplus_concave:c".into(),
        phi: phi_c,
        domain: Domain::boxed(vec![-2.0, -2.0], vec![2.0, 2.0]),
        psis: vec![psi_c1, psi_c2],
        omega1: vec![0.0, 0.0],
        phi_star: Some(-4.0),
    });
    out
}

/// Convex-mode template instance: phi = 0.5||w||^2 and psi = ||w||^2 - 1 over
/// the box [-2,2]^2, started at the far corner. phi* = 0 at the origin.
pub fn fwplus_convex_box_instance() -> FwPlusInstance {
    let phi = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0],
        0.0,
    ));
    let psi = SmoothFn::quadratic(QuadraticForm::new(
        2,
        vec![2.0, 0.0, 0.0, 2.0],
        vec![0.0, 0.0],
        -1.0,
    ));
    FwPlusInstance {
        name: "fwplus_convex:box".into(),
        phi,
        domain: Domain::boxed(vec![-2.0, -2.0], vec![2.0, 2.0]),
        psis: vec![psi],
        omega1: vec![2.0, 2.0],
        phi_star: Some(0.0),
    }
}

/// Resolves a zoo name: `quartic1d`, `quadratic_dc:<seed>`, `ring2d:v1`,
/// `ring2d:v2`, or `dc_constrained:<seed>`.
pub fn instance_by_name(name: &str) -> Result<BenchmarkInstance, DcError> {
    if name == "quartic1d" {
        return Ok(make_quartic_dc_1d(1.0));
    }
    if let Some(rest) = name.strip_prefix("quadratic_dc:") {
        let seed: u64 = rest
            .parse()
            .map_err(|_| DcError::Config(format!("bad seed in instance name {name:?}")))?;
        return Ok(make_seeded_quadratic_dc(seed));
    }
    if let Some(rest) = name.strip_prefix("ring2d:v") {
        let v: u8 = rest
            .parse()
            .map_err(|_| DcError::Config(format!("bad ring2d variant in {name:?}")))?;
        return make_ring_constrained_dc_2d(v);
    }
    if let Some(rest) = name.strip_prefix("dc_constrained:") {
        let seed: u64 = rest
            .parse()
            .map_err(|_| DcError::Config(format!("bad seed in instance name {name:?}")))?;
        return Ok(make_seeded_dc_constrained(seed));
    }
    Err(DcError::Config(format!("unknown instance {name:?}")))
}
