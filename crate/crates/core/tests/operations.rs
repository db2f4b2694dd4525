use fracjet::fodesolve::{fde_residual, solve_fode2, solve_multiterm, MultiTermFDE, FODE2};
use fracjet::fracops::{frac_deriv, trapezoid};
use fracjet::jet::lift;
use fracjet::specfun::gamma;
use fracjet::varcalc::{builtin, el_residual, interior_norm, CatalogParams, ELVariant, Lagrangian};
use fracjet::{FracOrder, SampledPath, Side};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn norm_rel(approx: &[f64], exact: &[f64], skip: usize) -> f64 {
    let n = approx.len();
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for j in skip..n - skip {
        err = err.max((approx[j] - exact[j]).abs());
        scale = scale.max(exact[j].abs());
    }
    err / scale
}

#[test]
fn power_law_residual_matches_target_expression() {
    let alpha = 0.5;
    let n = 2049;
    let forcing = |t: f64| 1.0 + t;
    let params = CatalogParams {
        a1: 0.8,
        a2: -0.6,
        c: 1.2,
        gamma: 2.0,
        ..CatalogParams::default()
    }
    .with_alpha(alpha)
    .with_forcing(forcing);
    let l = builtin("power-law-example", &params).unwrap();
    let c_prime = params.c * gamma(1.0 + params.gamma).unwrap() / gamma(1.0 + params.gamma - alpha).unwrap();
    let g15 = gamma(3.0).unwrap() / gamma(1.5).unwrap();
    let g25 = gamma(4.0).unwrap() / gamma(2.5).unwrap();
    let mut rng = StdRng::seed_from_u64(66);
    for _ in 0..4 {
        let (c, d) = (rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0));
        let x = SampledPath::from_fn(0.0, 1.0, n, |t| 1.0 + c * t * t + d * t.powi(3)).unwrap();
        let traj = lift(std::slice::from_ref(&x), alpha, 3).unwrap();
        let report = el_residual(&l, &traj, ELVariant::Classical).unwrap();
        let exact: Vec<f64> = x
            .times()
            .map(|t| {
                let xv = 1.0 + c * t * t + d * t.powi(3);
                let d1 = 2.0 * c * t + 3.0 * d * t * t;
                let d15 = c * g15 * t.sqrt() + d * g25 * t.powf(1.5);
                c_prime * forcing(t) * xv.powf(params.gamma - alpha) + params.a1 * d1 + params.a2 * d15
            })
            .collect();
        let err = norm_rel(report.residual[0].values(), &exact, 3);
        assert!(err <= 1e-2, "relative deviation {err}");
    }
}

#[test]
fn solver_is_linear_in_forcing() {
    let f1 = |t: f64| t.sin();
    let f2 = |t: f64| 1.0 + t * t;
    let base = MultiTermFDE::new(&[(1.0, 1.6), (0.5, 0.7)], 2.0, f1, 1.0).unwrap();
    let h = 2f64.powi(-9);
    let s1 = solve_multiterm(&base, h).unwrap().solution;
    let s2 = solve_multiterm(&base.with_forcing(f2), h).unwrap().solution;
    let s12 = solve_multiterm(&base.with_forcing(move |t| f1(t) + f2(t)), h)
        .unwrap()
        .solution;
    let scale = s12.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for j in 0..s12.len() {
        let gap = (s12.values()[j] - s1.values()[j] - s2.values()[j]).abs();
        assert!(gap <= 1e-12 * scale, "node {j}: {gap}");
    }
}

#[test]
fn second_order_term_matches_trapezoid_double_integral() {
    let f = |t: f64| (2.0 * t).cos() + t;
    let fde = MultiTermFDE::new(&[(1.0, 2.0)], 0.0, f, 1.0).unwrap();
    let h = 2f64.powi(-11);
    let sol = solve_multiterm(&fde, h).unwrap().solution;
    // cumulative trapezoid applied twice
    let cumulative = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for j in 1..v.len() {
            out[j] = trapezoid(&v[..=j], h);
        }
        out
    };
    let fv: Vec<f64> = sol.times().map(f).collect();
    let twice = cumulative(&cumulative(&fv));
    let err = norm_rel(sol.values(), &twice, 0);
    assert!(err <= 1e-3, "relative deviation {err}");
}

#[test]
fn fode2_agrees_with_multiterm_on_linear_problem() {
    let alpha = 0.4;
    let c = 1.5;
    let g = |t: f64| 1.0 + t.sin();
    let fde = MultiTermFDE::new(&[(1.0, 2.0 * alpha)], c, g, 1.0).unwrap();
    let system = FODE2::new(alpha, move |t, x, _v| -c * x + g(t), 0.0, 0.0, 1.0).unwrap();
    let h = 2f64.powi(-9);
    let multi = |h: f64| solve_multiterm(&fde, h).unwrap().solution;
    let pair = |h: f64| solve_fode2(&system, h).unwrap().solution;
    let (m1, m2) = (multi(h), multi(h / 2.0));
    let (p1, p2) = (pair(h), pair(h / 2.0));
    // coarse-vs-fine gap as the error estimate of each scheme
    let gap = |a: &SampledPath, b: &SampledPath| {
        (0..a.len()).fold(0.0f64, |m, j| m.max((a.values()[j] - b.values()[2 * j]).abs()))
    };
    let estimate = gap(&m1, &m2) + gap(&p1, &p2);
    let diff = (0..m1.len()).fold(0.0f64, |m, j| m.max((m1.values()[j] - p1.values()[j]).abs()));
    assert!(diff <= 2.0 * estimate, "difference {diff}, estimate {estimate}");
}

#[test]
fn bagley_torvik_residual_of_solution_is_small() {
    let g = gamma(4.0).unwrap() / gamma(2.5).unwrap();
    let fde = MultiTermFDE::new(
        &[(1.0, 2.0), (1.0, 1.5)],
        1.0,
        move |t| 6.0 * t + g * t.powf(1.5) + t.powi(3),
        1.0,
    )
    .unwrap();
    let worst: Vec<f64> = [9, 10, 11]
        .iter()
        .map(|&e| {
            let report = solve_multiterm(&fde, 2f64.powi(-e)).unwrap();
            let r = fde_residual(&fde, &report.solution).unwrap();
            r.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect();
    assert!(worst[2] <= 1e-4, "residuals {worst:?}");
    assert!(worst.windows(2).all(|w| w[1] < w[0]), "residuals {worst:?}");
}

fn harmonic(alpha: f64) -> Lagrangian {
    let w = gamma(1.0 + alpha).unwrap();
    Lagrangian::new(1, 1, alpha, move |p| 0.5 * w * p.y[0][0].powi(2) - 0.5 * p.x[0].powi(2)).unwrap()
}

#[test]
fn classical_limit_of_harmonic_residual() {
    let x = SampledPath::from_fn(0.0, 1.0, 2049, f64::cos).unwrap();
    let mut norms = Vec::new();
    for alpha in [0.9, 0.99, 0.999] {
        let traj = lift(std::slice::from_ref(&x), alpha, 1).unwrap();
        norms.push(
            el_residual(&harmonic(alpha), &traj, ELVariant::Classical)
                .unwrap()
                .norm_inf,
        );
    }
    assert!(norms[2] <= 5e-2, "norms {norms:?}");
    assert!(norms[0] > norms[1] && norms[1] > norms[2], "norms {norms:?}");
}

#[test]
fn jet_levels_are_consistent_with_semigroup() {
    let alpha = 0.3;
    let errs: Vec<f64> = [9, 10, 11]
        .iter()
        .map(|&e| {
            let x = SampledPath::from_fn(0.0, 1.0, (1 << e) + 1, |t| t.powi(2)).unwrap();
            let traj = lift(&[x], alpha, 2).unwrap();
            let y1 = traj.jet(1, 0).scale(gamma(1.0 + alpha).unwrap());
            let again = frac_deriv(&y1, FracOrder::new(alpha).unwrap(), Side::Left).unwrap();
            let stored = traj.jet(2, 0).scale(gamma(1.0 + 2.0 * alpha).unwrap());
            interior_norm(&[again.combine(1.0, &stored, -1.0).unwrap()], 4)
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "errors {errs:?}");
    assert!(errs[2] <= 1e-2, "errors {errs:?}");
}

/// Two paths are in contact to order `k` at the base point when their lifted
/// jet values there agree within 1e-6.
fn in_contact(x1: &SampledPath, x2: &SampledPath, alpha: f64, k: usize) -> bool {
    let (l1, l2) = (
        lift(std::slice::from_ref(x1), alpha, k).unwrap(),
        lift(std::slice::from_ref(x2), alpha, k).unwrap(),
    );
    let (p1, p2) = (l1.point(0), l2.point(0));
    (p1.x[0] - p2.x[0]).abs() <= 1e-6 && (0..k).all(|a| (p1.y[a][0] - p2.y[a][0]).abs() <= 1e-6)
}

#[test]
fn contact_detects_agreement_of_low_order_jets() {
    let alpha = 0.5;
    let n = 2049;
    let base = SampledPath::from_fn(0.0, 1.0, n, |t| 0.3 + t.sqrt()).unwrap();
    let cubic = SampledPath::from_fn(0.0, 1.0, n, |t| 0.3 + t.sqrt() + t.powi(3)).unwrap();
    let root = SampledPath::from_fn(0.0, 1.0, n, |t| 0.3 + 2.0 * t.sqrt()).unwrap();
    assert!(in_contact(&base, &cubic, alpha, 2));
    assert!(!in_contact(&base, &root, alpha, 1));
}
