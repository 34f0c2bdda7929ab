use std::f64::consts::PI;

use proptest::prelude::*;
use sg_stochastic::*;

/// Mode sum written out over signed wavenumbers.
fn oracle_variance(n: usize, eps: f64) -> f64 {
    let h = n as i64 / 2;
    let mut s = 0.0;
    for kx in (1 - h)..=h {
        for ky in (1 - h)..=h {
            if kx == 0 && ky == 0 {
                continue;
            }
            let k2 = 4.0 * PI * PI * (kx * kx + ky * ky) as f64;
            s += (-eps * eps * k2).exp() / k2;
        }
    }
    s
}

#[test]
fn constant_matches_independent_mode_sum() {
    let lat = TorusLattice::new(64, 1.0).unwrap();
    for eps in [1.0 / 32.0, 0.1, 0.25] {
        let want = (0.5 * 5.0 * PI * oracle_variance(64, eps)).exp();
        let got = renorm_constant(&lat, eps, 5.0).unwrap();
        assert!((got / want - 1.0).abs() < 1e-12);
    }
}

#[test]
fn constant_scaling_on_256() {
    let lat = TorusLattice::new(256, 1.0).unwrap();
    let eps: Vec<f64> = (3..=7).map(|j| 2f64.powi(-j)).collect();
    // frozen from the mode-sum oracle
    for (b2, frozen) in [(2.0, -0.48423), (5.0, -1.21058)] {
        let c: Vec<f64> = eps.iter().map(|&e| (0.5 * b2 * PI * oracle_variance(256, e)).exp()).collect();
        let oracle = fit_power_law(&eps, &c, None).slope;
        assert!((oracle - frozen).abs() < 1e-4, "{oracle}");
        let c: Vec<f64> = eps.iter().map(|&e| renorm_constant(&lat, e, b2).unwrap()).collect();
        let slope = fit_power_law(&eps, &c, None).slope;
        assert!((slope - frozen).abs() < 1e-4);
        assert!((slope / (-b2 / 4.0) - 1.0).abs() < 0.05);
    }
}

proptest! {
    #[test]
    fn constant_grows_as_eps_shrinks(a in 0.0f64..1.0, b in 0.0f64..1.0, b2 in 0.1f64..5.3) {
        let lat = TorusLattice::new(32, 1.0).unwrap();
        let (lo, hi) = (1.0 / 16.0 + 0.4 * a.min(b), 1.0 / 16.0 + 0.4 * a.max(b) + 1e-3);
        prop_assert!(renorm_constant(&lat, lo, b2).unwrap() > renorm_constant(&lat, hi, b2).unwrap());
    }
}

#[test]
fn field_variance_matches_table() {
    let lat = TorusLattice::new(64, 1.0).unwrap();
    let table = VarianceTable::new(&lat, 1.0 / 16.0, Mollifier::Gaussian).unwrap();
    let mut fft = Fft2::new(64);
    let (mut buf, mut phi) = (Vec::new(), Vec::new());
    let per_field: Vec<f64> = (0..256)
        .map(|i| {
            GaussianField::snapshot(&lat, &table, 11, i).values(&mut fft, &mut buf, &mut phi);
            phi.iter().map(|p| p * p).sum::<f64>() / phi.len() as f64
        })
        .collect();
    let (m, se) = mean_se(&per_field);
    assert!((m - table.total).abs() < 3.0 * se, "{m} ± {se} vs {}", table.total);
}

#[test]
fn ou_steps_preserve_mode_variances() {
    let lat = TorusLattice::new(64, 1e-3).unwrap();
    let table = VarianceTable::new(&lat, 1.0 / 16.0, Mollifier::Rational).unwrap();
    let mut f = GaussianField::stationary(&lat, &table, 5);
    let mut noise = Vec::new();
    noise.resize(lat.len(), Default::default());
    for _ in 0..200 {
        f.advance(&lat, &mut noise);
    }
    let ratios: Vec<f64> = (1..lat.len()).map(|i| f.modes()[i].norm_sqr() / table.sigma2[i]).collect();
    let (m, se) = mean_se(&ratios);
    assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn fields_are_reproducible() {
    let lat = TorusLattice::new(32, 1e-3).unwrap();
    let table = VarianceTable::new(&lat, 1.0 / 16.0, Mollifier::Gaussian).unwrap();
    let mut noise = vec![Default::default(); lat.len()];
    let run = |seed: u64, noise: &mut Vec<_>| {
        let mut f = GaussianField::stationary(&lat, &table, seed);
        for _ in 0..10 {
            f.advance(&lat, noise);
        }
        f.modes().to_vec()
    };
    assert_eq!(run(3, &mut noise), run(3, &mut noise));
    assert_ne!(run(3, &mut noise), run(4, &mut noise));
}

fn small_correlations(b2: f64) -> CorrelationReport {
    correlation_slopes(&CorrelationConfig {
        n: 256,
        eps: 1.0 / 128.0,
        beta2_over_pi: b2,
        fields: 32,
        separations: vec![8, 11, 16, 23, 32, 45, 64],
        seed: 2,
    })
    .unwrap()
}

#[test]
fn two_point_function_is_logarithmic() {
    let r = small_correlations(5.0);
    assert!((r.covariance.slope * 2.0 * PI + 1.0).abs() < 0.1, "{:?}", r.covariance);
    for row in &r.rows {
        assert!((row.covariance - row.covariance_exact).abs() < 3.0 * row.covariance_se);
    }
}

#[test]
fn charge_correlation_exponents() {
    let r = small_correlations(5.0);
    assert!((r.opposite_charge.slope / -2.5 - 1.0).abs() < 0.1, "{:?}", r.opposite_charge);
    assert!((r.same_charge.slope / 2.5 - 1.0).abs() < 0.1, "{:?}", r.same_charge);
    assert!(r.product.slope.abs() < 1e-9 + r.product.slope_se);
    // the two estimators agree where the direct one resolves the signal
    let near = &r.rows[0];
    let spread = (near.opposite_direct_se.powi(2) + near.opposite_gaussian_se.powi(2)).sqrt();
    assert!((near.opposite_direct - near.opposite_gaussian).abs() < 3.0 * spread);
    let b2 = 5.0 * PI;
    let log_product = near.product.ln();
    assert!(log_product.abs() < 3.0 * 2.0 * b2 * r.variance_se);
}

#[test]
fn wick_exponential_has_unit_mean() {
    let r = correlation_slopes(&CorrelationConfig {
        n: 128,
        eps: 1.0 / 64.0,
        beta2_over_pi: 5.0,
        fields: 64,
        separations: vec![16],
        seed: 9,
    })
    .unwrap();
    assert!((r.mean_xi.0 - 1.0).abs() < 3.0 * r.mean_xi_se.0, "{:?} {:?}", r.mean_xi, r.mean_xi_se);
    assert!(r.mean_xi.1.abs() < 3.0 * r.mean_xi_se.1);
}

fn small_dipole(seed: u64, flip: bool) -> DipoleReport {
    let eps = 1.0 / 16.0;
    dipole_moment(&DipoleConfig {
        n: 32,
        eps,
        beta2_over_pi: 5.0,
        lambdas: vec![0.25, 0.125],
        blocks: 30,
        burn_in: 0.1,
        window: 0.25,
        dt: eps * eps / 2.0,
        seed,
        flip,
    })
    .unwrap()
}

#[test]
fn dipole_is_centred_and_counterterm_helps() {
    let r = small_dipole(1, false);
    for row in &r.rows {
        assert!(row.mean.0.abs() < 3.0 * row.mean_se.0 && row.mean.1.abs() < 3.0 * row.mean_se.1, "{row:?}");
        assert!(row.raw_second_moment > row.second_moment);
        assert!(row.second_moment > 0.0);
    }
    assert_eq!(r, small_dipole(1, false));
}

#[test]
fn dipole_charge_flip_is_invariant_in_law() {
    let a = small_dipole(3, false);
    let b = small_dipole(3, true);
    for l in 0..a.rows.len() {
        let diff: Vec<f64> = a.block_moments[l].iter().zip(&b.block_moments[l]).map(|(x, y)| x - y).collect();
        let (m, se) = mean_se(&diff);
        assert!(m.abs() < 3.0 * se, "{m} ± {se}");
    }
}

#[test]
fn remainder_equation_is_real_and_forcing_is_bounded() {
    let v0 = smooth_initial(64, 0.3, 0.3);
    let mut last = f64::INFINITY;
    for b2 in [2.0, 0.5, 0.02] {
        let tr = solve_pde(
            &PdeConfig {
                n: 64,
                eps: 1.0 / 32.0,
                beta2_over_pi: b2,
                dt: 1.0 / 4096.0,
                t_end: 0.02,
                seed: 8,
                mollifier: Mollifier::Gaussian,
                record_every: 20,
            },
            &v0,
        )
        .unwrap();
        assert!(tr.max_imag < 1e-12, "{}", tr.max_imag);
        assert!(tr.max_forcing <= tr.constant * (1.0 + 1e-12));
        // |ξ±| = C, which shrinks to 1 with the coupling
        assert!(tr.constant < last);
        last = tr.constant;
    }
    assert!(last < 1.01);
}

#[test]
fn small_cauchy_study_decreases() {
    let cfg = ConvergenceConfig {
        n: 64,
        beta2_over_pi: 2.0,
        eps: vec![0.125, 0.0625],
        t0: 0.0,
        t_end: 0.03,
        dt: 1.0 / 2048.0,
        seeds: vec![0, 1],
        swap: true,
    };
    let r = convergence_study(&cfg).unwrap();
    assert!(r.monotone, "{:?}", r.d_mean);
    assert!(r.max_imag < 1e-12);
    assert!(r.swap_gap.unwrap() > 0.0);
}
