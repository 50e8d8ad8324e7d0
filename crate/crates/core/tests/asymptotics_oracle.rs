use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use twostep::asymptotics::*;
use twostep::classify::{is_aperiodic, is_vertically_unbounded};
use twostep::dp::{endpoint_expectation, half_plane_float, scaling_probe, to_f64, Plane};
use twostep::{Dir, Rule, DIRS};

fn rules(seed: u64, n: usize, keep: impl Fn(Rule) -> bool) -> Vec<Rule> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let r = Rule(rng.gen());
        if keep(r) {
            out.push(r);
        }
    }
    out
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn rho_is_independent_of_theta_and_equals_inverse_mu() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for r in rules(10, 50, is_aperiodic) {
        let an = Analysis::new(r).unwrap();
        for _ in 0..3 {
            let (x, y) = (rng.gen_range(0.4..2.5), rng.gen_range(0.4..2.5));
            let mu = perron(r, x, y).unwrap().mu;
            let rho: Vec<f64> = DIRS.iter().map(|&d| an.rho_theta(d, x, y).unwrap()).collect();
            for &v in &rho {
                assert!((v - rho[0]).abs() <= 1e-10, "{r} ({x},{y}) {rho:?}");
                assert!((v - 1.0 / mu).abs() <= 1e-10, "{r} ({x},{y}) {v} vs {}", 1.0 / mu);
            }
        }
    }
}

#[test]
fn perron_data_invariants() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    for r in rules(13, 100, is_aperiodic) {
        let (x, y) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        let p = perron(r, x, y).unwrap();
        assert!(p.residual <= 1e-12 * p.mu);
        assert!(p.right.iter().chain(&p.left).all(|&e| e > 0.0), "{r}");
        let uv: f64 = (0..4).map(|k| p.left[k] * p.right[k]).sum();
        assert!((uv - 1.0).abs() < 1e-12);
        assert!((p.mu - spectral_radius(r, x, y)).abs() <= 1e-9 * p.mu);
    }
}

#[test]
fn drift_methods_agree() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
    for r in rules(15, 50, is_aperiodic) {
        let an = Analysis::new(r).unwrap();
        for _ in 0..3 {
            let (x, y) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
            let d = an.drift(x, y).unwrap();
            assert!(d.method_agreement <= 1e-6, "{r} ({x},{y}) {d:?}");
            let (gx, gy) = an.perron(x, y).unwrap().log_gradient(r);
            assert!((gx - d.delta_x).abs() <= 1e-9 && (gy - d.delta_y).abs() <= 1e-9);
            let (sx, sy) = d.step_mean();
            assert!(sx.abs() <= 1.0 + 1e-12 && sy.abs() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn drift_examples() {
    for r in [Rule::spiral(), Rule::ALL] {
        let d = drift(r, 1.0, 1.0).unwrap();
        assert!(d.delta_x.abs() < 1e-12 && d.delta_y.abs() < 1e-12, "{d:?}");
    }
    // Simple random walk: mu = x + 1/x + y + 1/y.
    let d = drift(Rule::ALL, 2.0, 1.0).unwrap();
    assert!((d.mu - 4.5).abs() < 1e-12);
    assert!((d.delta_x - 1.0 / 6.0).abs() < 1e-10, "{d:?}");
    assert!((d.step_mean().0 - 1.0 / 3.0).abs() < 1e-10);
    assert!(d.delta_y.abs() < 1e-10);
}

#[test]
fn full_plane_prefactor_at_m_60() {
    for r in rules(16, 20, is_aperiodic) {
        let p = perron(r, 1.0, 1.0).unwrap();
        let pm = to_f64(&r.total_count(60));
        let err = (pm / (p.prefactor() * p.mu.powi(60)) - 1.0).abs();
        assert!(err <= 1e-3, "{r}: {err}");
    }
    let p = perron(Rule::ALL, 1.0, 1.0).unwrap();
    assert!((p.prefactor() * p.mu.powi(9) - 4f64.powi(9)).abs() < 1e-6);
}

#[test]
fn eigenvector_and_block_prefactors_agree() {
    for r in rules(17, 30, is_aperiodic) {
        let an = Analysis::new(r).unwrap();
        let (x, y) = (1.3, 0.7);
        let p = an.perron(x, y).unwrap();
        for th in DIRS {
            let k = an.full_plane_dir_prefactor(th, x, y).unwrap();
            assert!((k - p.dir_prefactor(th.index())).abs() <= 1e-8 * k, "{r} {th}");
        }
    }
}

#[test]
fn endpoint_slope_matches_drift() {
    let m = 400;
    for r in rules(18, 10, is_aperiodic) {
        let d = drift(r, 1.0, 1.0).unwrap();
        let e = endpoint_expectation(r, Plane::Full, m, &q(1, 1), &q(1, 1), None).unwrap();
        let (ex, ey) = (rat_f64(&e.mean_x) / m as f64, rat_f64(&e.mean_y) / m as f64);
        assert!((ex - d.delta_x).abs() <= 0.05 && (ey - d.delta_y).abs() <= 0.05, "{r}: {ex} {ey} {d:?}");
    }
}

#[test]
fn zero_drift_offsets_match_dp_per_direction() {
    let r = Rule::spiral();
    let an = Analysis::new(r).unwrap();
    let (ox, oy) = an.zero_drift_offsets(1.0, 1.0).unwrap();
    for th in DIRS {
        let e = endpoint_expectation(r, Plane::Full, 200, &q(1, 1), &q(1, 1), Some(th)).unwrap();
        assert!((rat_f64(&e.mean_x) - ox[th.index()]).abs() < 1e-9, "{th} {ox:?}");
        assert!((rat_f64(&e.mean_y) - oy[th.index()]).abs() < 1e-9, "{th} {oy:?}");
    }
    // The offsets depend on the final step.
    assert!(ox[Dir::E.index()] > 0.0 && ox[Dir::W.index()] < 0.0);
}

#[test]
fn spiral_tau_and_regimes() {
    let an = Analysis::new(Rule::spiral()).unwrap();
    let tau = an.tau(1.0).unwrap();
    assert!((tau - 1.0).abs() < 1e-12);
    let mu_tau = an.perron(1.0, tau).unwrap().mu;
    for y in [0.2, 0.7, 0.999, 1.001, 1.5, 4.0] {
        assert!(an.perron(1.0, y).unwrap().mu > mu_tau);
    }
    let h = an.half_plane_regime(1.0, tau).unwrap();
    assert_eq!(h.regime, Regime::Zero);
    assert!((h.kappa - an.rho(1.0, tau).unwrap()).abs() < 1e-15);
    assert!((h.lambda * h.kappa - 1.0).abs() < 1e-15);
    for eps in [1e-10, -1e-10] {
        assert_eq!(an.half_plane_regime(1.0, tau + eps).unwrap().regime, Regime::Zero);
    }
    assert_eq!(an.half_plane_regime(1.0, 1.5).unwrap().regime, Regime::Positive);
    assert_eq!(an.half_plane_regime(1.0, 0.6).unwrap().regime, Regime::Negative);
    assert!(an.confirm_zero_drift(&q(1, 1), &q(1, 1)).unwrap());
    assert!(!an.confirm_zero_drift(&q(1, 1), &q(3, 2)).unwrap());
}

/// Fitted exponent, growth rate and amplitude from the float DP.
fn check_against_dp(r: Rule, x: f64, y: f64, amp_tol: f64) -> HalfPlaneRegime {
    let an = Analysis::new(r).unwrap();
    let h = an.half_plane_regime(x, y).unwrap();
    let probe = half_plane_float(r, x, y, 2000);
    let ms: Vec<usize> = (500..=2000).step_by(100).collect();
    let fit = scaling_probe(&probe, &ms, h.growth.ln());
    let tol = if h.regime == Regime::Negative { 0.15 } else { 0.1 };
    assert!((fit.count_exponent - h.exponent()).abs() <= tol, "{r} y={y}: {fit:?} {h:?}");
    let g = (probe.ln_total[2000] - probe.ln_total[1999] - h.exponent() * (2000f64 / 1999f64).ln()).exp();
    assert!((g - h.growth).abs() <= 1e-3, "{r} y={y}: growth {g} vs {}", h.growth);
    let m = 2000f64;
    let ln_pred = h.total_amplitude().ln() + h.exponent() * m.ln() + m * h.growth.ln();
    let ratio = (probe.ln_total[2000] - ln_pred).exp();
    assert!((ratio - 1.0).abs() <= amp_tol, "{r} y={y}: amplitude ratio {ratio}");
    for th in DIRS {
        let k = th.index();
        let lp = h.amplitude[k].ln() + h.exponent() * m.ln() + m * h.growth.ln();
        let rk = (probe.ln_dir[2000][k] - lp).exp();
        assert!((rk - 1.0).abs() <= amp_tol, "{r} y={y} {th}: {rk}");
    }
    h
}

#[test]
fn spiral_half_plane_regimes_match_dp() {
    assert_eq!(check_against_dp(Rule::spiral(), 1.0, 2.0, 1e-6).regime, Regime::Positive);
    assert_eq!(check_against_dp(Rule::spiral(), 1.0, 1.0, 2e-3).regime, Regime::Zero);
    assert_eq!(check_against_dp(Rule::spiral(), 1.0, 0.5, 1e-2).regime, Regime::Negative);
}

#[test]
fn sampled_half_plane_regimes_match_dp() {
    for r in rules(19, 4, |r| is_aperiodic(r) && is_vertically_unbounded(r)) {
        let an = Analysis::new(r).unwrap();
        let tau = an.tau(1.0).unwrap();
        check_against_dp(r, 1.0, 1.6 * tau, 1e-3);
        check_against_dp(r, 1.0, tau, 5e-3);
        check_against_dp(r, 1.0, 0.6 * tau, 3e-2);
    }
}
