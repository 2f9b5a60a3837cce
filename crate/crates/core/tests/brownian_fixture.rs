//! Statistical behaviour of the whole pipeline on the standard Brownian
//! fixture (sigma = 5e-5 per sqrt-second, dt = 1 s, n = 1e6, p0 = 1,
//! seed 7 unless noted).
//!
//! Expected values and bands here are frozen from this implementation's
//! own Monte Carlo runs (20 paths), not from the continuous-path closed
//! forms alone: a walk observed every second confirms reversals late, so
//! at kappa = delta/(sigma*sqrt(dt)) = 20 the directional-change count
//! sits ~11% below sigma^2*T/delta^2 and the overshoot variability ~12%
//! above delta^2. The bands cover the measured bias plus single-path
//! scatter; the closed forms themselves are exercised where they are
//! exact (`bm_theoretical`, noiseless fits).

use kairos::bridge::{bm_theoretical, bridge_check, c_intrinsic, c_physical};
use kairos::intrinsic::{dissect, exp_ks_distance, overshoot_exp_check, overshoot_stats};
use kairos::physical::sample_returns;
use kairos::scaling::{fit_power_law, log_grid, scaling_suite, LogGrid};
use kairos::series::{synth_brownian, PriceSeries, SynthConfig};
use rand::SeedableRng;
use rand_distr::{Distribution, Exp};

const SIGMA: f64 = 5e-5;
const SIGMA_SQ: f64 = 2.5e-9;
const N_TICKS: usize = 1_000_000;

fn fixture() -> PriceSeries<f64> {
    synth_brownian(&SynthConfig::new(SIGMA, 1.0, N_TICKS, 7)).unwrap()
}

#[test]
fn dc_count_tracks_the_inverse_square_law() {
    let series = fixture();
    let span = series.span().unwrap();
    let d = dissect(&series, 1e-3).unwrap();
    // continuous-path expectation 2500; the dt=1 walk realizes ~89% of it
    let ratio = d.n_dc() as f64 / (SIGMA_SQ * span / 1e-6);
    assert!((0.82..=0.96).contains(&ratio), "N/theory = {ratio:.4}");

    // and quartering behaviour across one octave, up to the kappa drift
    let coarse = dissect(&series, 2e-3).unwrap();
    let fold = d.n_dc() as f64 / coarse.n_dc() as f64;
    assert!((3.2..=4.4).contains(&fold), "N(delta)/N(2 delta) = {fold:.2}");
}

#[test]
fn overshoot_moments_track_delta() {
    let d = dissect(&fixture(), 1e-3).unwrap();
    let stats = overshoot_stats(&d);
    let mean_ratio = stats.mean_os.unwrap() / 1e-3;
    let var_ratio = stats.var_os.unwrap() / 1e-6;
    assert!((0.97..=1.09).contains(&mean_ratio), "mean/delta = {mean_ratio:.4}");
    assert!((0.95..=1.25).contains(&var_ratio), "variability/delta^2 = {var_ratio:.4}");
}

#[test]
fn overshoots_are_near_exponential() {
    let d = dissect(&fixture(), 1e-3).unwrap();
    assert!(d.overshoots().len() > 2000);
    let ks = overshoot_exp_check(&d).unwrap();
    assert!(ks < 0.05, "KS = {ks:.4}");
}

#[test]
fn exact_exponential_samples_pass_the_ks_check() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
    let delta = 1e-3f64;
    let exp = Exp::new(1.0 / delta).unwrap();
    let samples: Vec<f64> = (0..10_000).map(|_| exp.sample(&mut rng)).collect();
    let ks = exp_ks_distance(&samples, delta).unwrap();
    assert!(ks < 0.02, "KS = {ks:.4}");
}

#[test]
fn squared_return_mean_scales_linearly_in_dt() {
    let series = fixture();
    let mean = sample_returns(&series, 60.0).unwrap().squared_return_mean().unwrap();
    assert!((mean / (SIGMA_SQ * 60.0) - 1.0).abs() < 0.05, "ratio {:.4}", mean / 1.5e-7);
}

#[test]
fn both_invariants_approximate_sigma_squared() {
    let series = fixture();
    let ct = c_physical(&series, 60.0).unwrap();
    assert!((ct / SIGMA_SQ - 1.0).abs() < 0.05, "c_physical/sigma^2 = {:.4}", ct / SIGMA_SQ);
    let ctau = c_intrinsic(&series, 1e-3).unwrap();
    assert!((ctau / SIGMA_SQ - 1.0).abs() < 0.10, "c_intrinsic/sigma^2 = {:.4}", ctau / SIGMA_SQ);
}

#[test]
fn bridge_identity_closes_on_brownian_input() {
    let check = bridge_check(&fixture(), 60.0, 1e-3).unwrap();
    assert!(check.rel_gap < 0.1, "rel_gap = {:.4} (lhs {:.3e}, rhs {:.3e})", check.rel_gap, check.lhs, check.rhs);
}

#[test]
fn suite_exponents_land_near_their_targets() {
    // bands cover the dt=1 discretization drift plus single-path scatter
    let report = scaling_suite(
        &fixture(),
        &LogGrid::new(60.0, 4210.0, 21).unwrap(),
        &LogGrid::new(3.5e-4, 5e-3, 21).unwrap(),
    )
    .unwrap();
    let checks = [
        ("squared_returns", report.squared_returns.fit, 1.0, 0.1),
        ("os_variability", report.os_variability.fit, 2.0, 0.25),
        ("dc_count", report.dc_count.fit, -2.0, 0.25),
        ("mean_overshoot", report.mean_overshoot.fit, 1.0, 0.1),
    ];
    for (name, fit, center, tol) in checks {
        assert!(
            (fit.exponent - center).abs() <= tol,
            "{name}: E = {:.4} vs {center} +- {tol}",
            fit.exponent
        );
        assert!(fit.r_squared > 0.95, "{name}: r^2 = {:.4}", fit.r_squared);
        assert_eq!(fit.n_points, 21);
    }
    // the physical-side amplitude recovers sigma^2 directly
    assert!((report.squared_returns.fit.alpha / SIGMA_SQ - 1.0).abs() < 0.2);
}

#[test]
fn fit_on_the_closed_forms_recovers_theory_exactly() {
    // overshoot variability law evaluated from the closed forms is an
    // exact power law with alpha = 1, E = 2
    let points: Vec<(f64, f64)> = log_grid(3.5e-4f64, 5e-3, 21)
        .unwrap()
        .into_iter()
        .map(|delta| (delta, bm_theoretical(delta, SIGMA, 1e6).unwrap().overshoot_variance))
        .collect();
    let fit = fit_power_law(&points).unwrap();
    assert!((fit.alpha - 1.0).abs() < 1e-10);
    assert!((fit.exponent - 2.0).abs() < 1e-10);

    // and the expected-count law recovers alpha = sigma^2 * T, E = -2
    let points: Vec<(f64, f64)> = log_grid(3.5e-4f64, 5e-3, 21)
        .unwrap()
        .into_iter()
        .map(|delta| (delta, bm_theoretical(delta, SIGMA, 1e6).unwrap().expected_dc_count))
        .collect();
    let fit = fit_power_law(&points).unwrap();
    assert!((fit.alpha / (SIGMA_SQ * 1e6) - 1.0).abs() < 1e-10);
    assert!((fit.exponent + 2.0).abs() < 1e-10);
}
