mod common;

use common::{c, gamma, Kernel};
use num_complex::Complex64;
use riesz_sim::profile::*;
use riesz_sim::{Error, Grid1D};

fn fine() -> QuadratureControls {
    QuadratureControls { nodes_per_period: 32, tau_steps: 64, ..Default::default() }
}

/// `(1/pi) int_0^inf w^(-i beta) exp(-i g w^alpha) dw = Gamma(a) (i g)^(-a) / (pi alpha)`
/// with `a = (1 - i beta) / alpha`.
fn slope_at_zero(alpha: f64, epsilon: f64) -> Complex64 {
    let a = c(1.0, -2.0 / epsilon) / alpha;
    let g = epsilon / alpha;
    let log_ig = c(g.ln(), std::f64::consts::FRAC_PI_2);
    gamma(a) * (-a * log_ig).exp() / (std::f64::consts::PI * alpha)
}

#[test]
fn lanczos_gamma_sanity() {
    assert!((gamma(c(5.0, 0.0)) - c(24.0, 0.0)).norm() < 1e-10);
    assert!((gamma(c(0.5, 0.0)).re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    // |Gamma(i y)|^2 = pi / (y sinh(pi y))
    let y = 0.7;
    let expect = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
    assert!((gamma(c(0.0, y)).norm_sqr() - expect).abs() < 1e-12);
}

#[test]
fn slope_at_origin_matches_gamma_closed_form() {
    for (alpha, epsilon) in [(2.0, 2.0), (1.7, 1.2), (1.9, 3.0), (1.5, 10.0)] {
        let spec = ProfileSpec::new(alpha, epsilon).unwrap().with_quad(fine());
        let got = profile_slope_integrand(0.0, &spec).unwrap();
        let exact = slope_at_zero(alpha, epsilon);
        assert!((got - exact).norm() < 1e-6, "alpha {alpha} eps {epsilon}: {got} vs {exact}");
    }
    let reference = c(0.081_147_314_722_773_08, -0.002_814_420_787_465_351);
    assert!((slope_at_zero(2.0, 2.0) - reference).norm() < 1e-13);
}

#[test]
fn slope_error_falls_with_node_density() {
    let exact = slope_at_zero(1.8, 2.0);
    let err = |npp: usize| {
        let q = QuadratureControls { nodes_per_period: npp, ..Default::default() };
        let spec = ProfileSpec::new(1.8, 2.0).unwrap().with_quad(q);
        (profile_slope_integrand(0.0, &spec).unwrap() - exact).norm()
    };
    let (e8, e16, e32) = (err(8), err(16), err(32));
    assert!(e16 < e8 / 8.0 && e32 < e16 / 8.0, "{e8:e} {e16:e} {e32:e}");
}

#[test]
fn slope_matches_contour_rotated_transform() {
    for (alpha, epsilon) in [(1.7, 1.2), (2.0, 2.0), (1.9, 10.0)] {
        let k = Kernel { alpha, epsilon };
        let spec = ProfileSpec::new(alpha, epsilon).unwrap().with_quad(fine());
        for tau in [0.0, 0.5, 2.0, 4.5] {
            let got = profile_slope_integrand(tau, &spec).unwrap();
            let expect = k.slope(tau);
            assert!((got - expect).norm() < 1e-6, "alpha {alpha} eps {epsilon} tau {tau}: {got} vs {expect}");
        }
    }
}

#[test]
fn contour_oracle_agrees_with_closed_form() {
    let k = Kernel { alpha: 1.7, epsilon: 1.2 };
    assert!((k.slope(0.0) - slope_at_zero(1.7, 1.2)).norm() < 1e-11);
}

#[test]
fn profile_matches_sine_transform() {
    let grid = Grid1D::closed(-5.0, 5.0, 201).unwrap();
    for (alpha, epsilon) in [(1.7, 1.2), (2.0, 2.0), (1.9, 10.0)] {
        let spec = ProfileSpec::new(alpha, epsilon).unwrap();
        let p = evaluate_profile(&grid, &spec).unwrap();
        let k = Kernel { alpha, epsilon };
        for i in [110, 126, 150, 190, 40] {
            let v = grid.coordinate(i);
            let expect = k.profile(v);
            let got = p.values()[i];
            assert!((got - expect).norm() < 1e-5, "alpha {alpha} eps {epsilon} v {v}: {got} vs {expect}");
        }
    }
}

#[test]
fn profile_off_the_origin_matches_sine_transform() {
    let grid = Grid1D::closed(0.35, 3.35, 31).unwrap();
    let spec = ProfileSpec::new(1.8, 2.0).unwrap();
    let p = evaluate_profile(&grid, &spec).unwrap();
    let k = Kernel { alpha: 1.8, epsilon: 2.0 };
    for i in [0, 15, 30] {
        let v = grid.coordinate(i);
        assert!((p.values()[i] - k.profile(v)).norm() < 1e-5, "v = {v}");
    }
}

#[test]
fn amplitude_scales_profile() {
    let grid = Grid1D::closed(-1.0, 1.0, 21).unwrap();
    let base = ProfileSpec::new(1.9, 2.0).unwrap();
    let amp = c(0.3, -2.0);
    let a = profile_values(&grid, &base).unwrap();
    let b = profile_values(&grid, &base.with_branch(amp)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x * amp / c(0.0, 1.0) - y).norm() < 1e-15);
    }
}

#[test]
fn fourier_closed_form_solves_transformed_equation() {
    for alpha in [1.1, 1.5, 1.7, 1.9, 2.0] {
        for epsilon in [1.2, 2.0, 3.0, 10.0] {
            let spec = ProfileSpec::new(alpha, epsilon).unwrap();
            for k in 0..100 {
                let w = 10f64.powf(-1.0 + 2.0 * k as f64 / 99.0);
                for omega in [w, -w] {
                    let psi = fourier_profile(omega, &spec).unwrap();
                    let r = fourier_ode_residual(omega, &spec).unwrap();
                    let bound = 1e-10 * (1.0 + omega.abs().powf(alpha)) * psi.norm();
                    assert!(r.norm() < bound, "alpha {alpha} eps {epsilon} omega {omega}");
                }
            }
        }
    }
}

#[test]
fn analytic_derivative_matches_differences() {
    let spec = ProfileSpec::new(1.7, 2.0).unwrap();
    let h = 1e-6;
    for omega in [-3.0, -0.4, 0.25, 1.0, 6.0] {
        let fd = (fourier_profile(omega + h, &spec).unwrap() - fourier_profile(omega - h, &spec).unwrap()) / (2.0 * h);
        let exact = fourier_profile_derivative(omega, &spec).unwrap();
        let fd_residual = fourier_equation(omega, &spec, fourier_profile(omega, &spec).unwrap(), fd);
        assert!((fd - exact).norm() < 1e-6 * exact.norm().max(1.0), "omega {omega}");
        assert!(fd_residual.norm() < 1e-5, "omega {omega}");
    }
}

#[test]
fn chirp_exponent_eps_over_eps_does_not_solve() {
    let spec = ProfileSpec::new(1.7, 2.0).unwrap();
    let printed = fourier_ode_residual_with_chirp(1.0, &spec, 1.0).unwrap();
    assert!(printed.norm() > 1e-2, "{printed}");
    let derived = fourier_ode_residual_with_chirp(1.0, &spec, 2.0 / 1.7).unwrap();
    assert!(derived.norm() < 1e-14);
}

#[test]
fn origin_is_singular() {
    let spec = ProfileSpec::new(1.7, 2.0).unwrap();
    assert!(matches!(fourier_profile(0.0, &spec), Err(Error::Singularity(_))));
    assert!(matches!(fourier_ode_residual(0.0, &spec), Err(Error::Singularity(_))));
}

#[test]
fn refinement_reaches_target() {
    let grid = Grid1D::closed(-2.0, 2.0, 81).unwrap();
    let spec = ProfileSpec::new(1.9, 3.0).unwrap();
    let p = refine_profile(&grid, &spec, 1e-8).unwrap();
    assert!(!p.unconverged);
    assert!(p.convergence_estimate < 1e-8);
    assert!(p.spec.quad != spec.quad);
}

#[test]
fn refinement_cap_flags_unconverged() {
    let grid = Grid1D::closed(-0.5, 0.5, 11).unwrap();
    let spec = ProfileSpec::new(2.0, 2.0).unwrap();
    let p = refine_profile(&grid, &spec, 1e-300).unwrap();
    assert!(p.unconverged);
    assert!(p.convergence_estimate.is_finite());
    assert!(matches!(refine_profile(&grid, &spec, 0.0), Err(Error::Input(_))));
}

#[test]
fn invalid_controls_rejected() {
    let grid = Grid1D::closed(-1.0, 1.0, 11).unwrap();
    let q = QuadratureControls { nodes_per_period: 4, ..Default::default() };
    let spec = ProfileSpec::new(2.0, 2.0).unwrap().with_quad(q);
    assert!(matches!(evaluate_profile(&grid, &spec), Err(Error::Input(_))));
}

#[test]
fn verification_restricts_to_window() {
    let window = Grid1D::closed(-2.0, 2.0, 81).unwrap();
    let spec = ProfileSpec::new(2.0, 2.0).unwrap();
    let v = verify_profile(&window, &spec, &Verification::default(), None).unwrap();
    assert_eq!(v.profile.grid(), &window);
    let direct = profile_values(&window, &spec).unwrap();
    let gap = riesz_sim::grid::max_abs_diff(v.profile.values(), &direct);
    let est = v.profile.convergence_estimate;
    assert!(est < 1e-4 && gap < 4.0 * est, "{gap:e} vs estimate {est:e}");
    assert!(v.residual.relative_linf < 1e-3, "{}", v.residual.relative_linf);
}

#[test]
fn slope_stable_under_wider_truncation() {
    let grid = Grid1D::closed(-5.0, 5.0, 201).unwrap();
    for (alpha, epsilon) in [(2.0, 2.0), (1.7, 1.2), (1.9, 10.0)] {
        let spec = ProfileSpec::new(alpha, epsilon).unwrap();
        let est = evaluate_profile(&grid, &spec).unwrap().convergence_estimate;
        let wide = spec.with_quad(QuadratureControls { omega_max: 2.0 * spec.quad.omega_max, ..spec.quad });
        let a = profile_slopes(&grid, &spec).unwrap();
        let b = profile_slopes(&grid, &wide).unwrap();
        let change = riesz_sim::grid::max_abs_diff(&a, &b);
        assert!(change <= est, "alpha {alpha} eps {epsilon}: {change:e} vs {est:e}");
    }
}

#[test]
fn node_slopes_match_pointwise_slope() {
    let grid = Grid1D::closed(-2.0, 2.0, 9).unwrap();
    let spec = ProfileSpec::new(1.8, 2.0).unwrap().with_quad(fine());
    let slopes = profile_slopes(&grid, &spec).unwrap();
    let k = Kernel { alpha: 1.8, epsilon: 2.0 };
    for (v, s) in grid.coordinates().zip(&slopes) {
        assert!((s - k.slope(v)).norm() < 1e-6, "v = {v}");
    }
}
