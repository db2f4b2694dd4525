use fracjet::fodesolve::{solve_multiterm, MultiTermFDE};
use fracjet::fracops::frac_deriv;
use fracjet::jet::{lift, JetPoint};
use fracjet::specfun::{gamma, gen_binomial, mittag_leffler, MLParams};
use fracjet::varcalc::{el_residual, hessian_g, ELVariant, Lagrangian};
use fracjet::{FracOrder, SampledPath, Side};
use proptest::prelude::*;
use statrs::function::gamma::gamma as oracle_gamma;

fn path(n: usize, a: f64, b: f64, s: f64) -> SampledPath {
    SampledPath::from_fn(0.0, 1.0, n, move |t| a + b * t * t + (s * t).sin()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// Roundoff bound for an order-`mu` GL sum over `n` nodes of inputs of size `scale`.
fn roundoff(mu: f64, n: usize, scale: f64) -> f64 {
    1e3 * f64::EPSILON * ((n - 1) as f64).powf(mu.max(1.0)) * scale
}

fn close_abs(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Every fractional derivative of this path is positive, which keeps lifted
/// coordinates above the default terminals.
fn positive_path(n: usize, s: f64) -> SampledPath {
    SampledPath::from_fn(0.0, 1.0, n, move |t| 1.0 + t * t + (s * t).exp()).unwrap()
}

fn sample_lagrangian(alpha: f64) -> Lagrangian {
    Lagrangian::new(1, 2, alpha, |p| {
        let (x, y1, y2) = (p.x[0], p.y[0][0], p.y[1][0]);
        0.7 * y1 * y1 - 0.3 * y2 * y2 + x * y1 + (1.0 + p.t) * x.powi(3) / 3.0
    })
    .unwrap()
}

fn residual(l: &Lagrangian, x: &SampledPath, variant: ELVariant) -> Vec<f64> {
    let traj = lift(std::slice::from_ref(x), l.alpha(), l.order()).unwrap();
    el_residual(l, &traj, variant).unwrap().residual[0].values().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs());
        let oracle = oracle_gamma(x);
        prop_assert!((gamma(x).unwrap() - oracle).abs() <= 1e-12 * oracle.abs());
    }

    #[test]
    fn binomial_matches_integer_coefficients(n in 0usize..=20, k in 0usize..=20) {
        prop_assume!(k <= n);
        let exact = (0..k).fold(1.0f64, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round();
        let got = gen_binomial(n as f64, k);
        prop_assert!((got - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn mittag_leffler_is_monotone(alpha in 0.3f64..=1.0) {
        let params = MLParams::new(alpha).unwrap();
        let values: Vec<f64> = (0..=20).map(|i| mittag_leffler(&params, i as f64 * 0.25).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn frac_deriv_is_linear(
        mu in 0.05f64..2.5,
        c1 in -3.0f64..3.0,
        c2 in -3.0f64..3.0,
        s in 0.5f64..4.0,
        right in any::<bool>(),
    ) {
        let side = if right { Side::Right } else { Side::Left };
        let order = FracOrder::new(mu).unwrap();
        let f1 = path(257, 0.3, 1.0, s);
        let f2 = SampledPath::from_fn(0.0, 1.0, 257, |t| (t * s).exp()).unwrap();
        let lhs = frac_deriv(&f1.combine(c1, &f2, c2).unwrap(), order, side).unwrap();
        let rhs = frac_deriv(&f1, order, side).unwrap()
            .combine(c1, &frac_deriv(&f2, order, side).unwrap(), c2).unwrap();
        let scale = 3.0 * (c1.abs() + c2.abs()) * s.exp();
        prop_assert!(close_abs(lhs.values(), rhs.values(), roundoff(mu, 257, scale)));
    }

    #[test]
    fn lift_is_linear(alpha in 0.1f64..0.9, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let f1 = path(257, 1.0, -0.5, 2.0);
        let f2 = path(257, 0.0, 2.0, 0.7);
        let k = 3;
        let combined = lift(&[f1.combine(c1, &f2, c2).unwrap()], alpha, k).unwrap();
        let (l1, l2) = (lift(&[f1], alpha, k).unwrap(), lift(&[f2], alpha, k).unwrap());
        for a in 1..=k {
            let expect = l1.jet(a, 0).combine(c1, l2.jet(a, 0), c2).unwrap();
            let tol = roundoff(alpha * a as f64, 257, 3.0 * (c1.abs() + c2.abs()));
            prop_assert!(close_abs(combined.jet(a, 0).values(), expect.values(), tol));
        }
    }

    #[test]
    fn el_residual_scales_and_adds(alpha in 0.2f64..0.8, c in -3.0f64..3.0, classical in any::<bool>()) {
        let variant = if classical { ELVariant::Classical } else { ELVariant::Fractional };
        let x = positive_path(129, 1.5);
        let l1 = sample_lagrangian(alpha);
        let l2 = Lagrangian::new(1, 2, alpha, |p| p.x[0] * p.y[1][0] - 0.5 * p.x[0].powi(2)).unwrap();
        let base = residual(&l1, &x, variant);
        let scaled: Vec<f64> = base.iter().map(|v| c * v).collect();
        prop_assert!(close(&residual(&l1.scaled(c), &x, variant), &scaled, 1e-6));
        let other = residual(&l2, &x, variant);
        let sum: Vec<f64> = base.iter().zip(&other).map(|(a, b)| a + b).collect();
        prop_assert!(close(&residual(&l1.sum(&l2).unwrap(), &x, variant), &sum, 1e-6));
    }

    #[test]
    fn time_only_lagrangian_has_zero_residual(alpha in 0.2f64..0.8, s in 0.5f64..3.0, classical in any::<bool>()) {
        let variant = if classical { ELVariant::Classical } else { ELVariant::Fractional };
        let l = Lagrangian::new(1, 2, alpha, move |p| (s * p.t).sin() + p.t * p.t).unwrap();
        let r = residual(&l, &positive_path(129, s), variant);
        prop_assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn hessian_is_symmetric(
        t in 0.0f64..1.0,
        x in -1.0f64..1.0,
        y in proptest::collection::vec(0.05f64..1.0, 4),
        classical in any::<bool>(),
    ) {
        let variant = if classical { ELVariant::Classical } else { ELVariant::Fractional };
        let l = Lagrangian::new(2, 2, 0.5, |p| {
            let (u, v) = (p.y[0][0], p.y[0][1]);
            u * u + 0.5 * v * v + u * v * (p.x[0] + p.t).sin() + (u + 2.0 * v).exp() * p.y[1][1]
        })
        .unwrap();
        let point = JetPoint::new(t, vec![x, 0.3], vec![vec![y[0], y[1]], vec![y[2], y[3]]]).unwrap();
        let g = hessian_g(&l, &point, variant).unwrap();
        prop_assert!(g.asymmetry() <= 1e-8);
    }

    #[test]
    fn solver_is_linear_in_forcing(
        p in 0.0f64..3.0,
        w in 0.5f64..5.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        mu in 0.3f64..2.0,
    ) {
        let fde = MultiTermFDE::new(&[(1.0, mu), (0.4, 0.5 * mu)], 1.3, |_| 0.0, 1.0).unwrap();
        let h = 2f64.powi(-8);
        let solve = |f: Box<dyn Fn(f64) -> f64 + Send + Sync>| {
            solve_multiterm(&fde.with_forcing(f), h).unwrap().solution
        };
        let s1 = solve(Box::new(move |t| t.powf(p)));
        let s2 = solve(Box::new(move |t| (w * t).cos()));
        let both = solve(Box::new(move |t| c1 * t.powf(p) + c2 * (w * t).cos()));
        let expect = s1.combine(c1, &s2, c2).unwrap();
        prop_assert!(close(both.values(), expect.values(), 1e-11));
    }
}

#[test]
fn normalized_gamma_weights_agree_with_oracle() {
    for i in 1..=60 {
        let x = 0.5 * i as f64;
        let rel = (gamma(x).unwrap() - oracle_gamma(x)).abs() / oracle_gamma(x);
        assert!(rel <= 1e-12, "x = {x}: {rel}");
    }
}
