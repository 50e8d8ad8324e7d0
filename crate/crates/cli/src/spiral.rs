//! Fitted constants of the quarter-plane spiral counts at `(x, y) = (1, 1)`.

use crate::output::Table;
use serde_json::{json, Value};
use std::f64::consts::PI;
use twostep::dp::{inverse_power_fit, quarter_plane_float};
use twostep::Rule;

#[derive(Clone, Debug)]
pub struct ConstantFit {
    pub series: &'static str,
    pub parity: &'static str,
    /// `v_m = m^power p_m / 2^m`.
    pub power: i32,
    pub constant: f64,
    pub expected_constant: f64,
    /// `c_1 / c_0` in `v_m = c_0 (1 + (c_1/c_0)/m + ...)`.
    pub correction: f64,
    pub expected_correction: f64,
}

impl ConstantFit {
    pub fn constant_error(&self) -> f64 {
        (self.constant / self.expected_constant - 1.0).abs()
    }

    pub fn correction_error(&self) -> f64 {
        (self.correction - self.expected_correction).abs()
    }
}

#[derive(Clone, Debug)]
pub struct SpiralFits {
    pub m_max: usize,
    pub degree: usize,
    pub fits: Vec<ConstantFit>,
    /// Odd lengths `m <= m_max` with a nonzero count of walks ending at the origin.
    pub odd_origin_nonzero: Vec<usize>,
}

pub const CONSTANT_TOL: f64 = 0.02;
pub const CORRECTION_TOL: f64 = 0.1;

impl SpiralFits {
    pub fn get(&self, series: &str, parity: &str) -> Option<&ConstantFit> {
        self.fits.iter().find(|f| f.series == series && f.parity == parity)
    }

    pub fn within_tolerance(&self) -> bool {
        self.odd_origin_nonzero.is_empty()
            && self.fits.iter().all(|f| f.constant_error() <= CONSTANT_TOL && f.correction_error() <= CORRECTION_TOL)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["series", "parity", "power", "constant", "expected_constant", "correction", "expected_correction"]);
        for f in &self.fits {
            t.rows.push(vec![
                f.series.into(),
                f.parity.into(),
                f.power.to_string(),
                f.constant.to_string(),
                f.expected_constant.to_string(),
                f.correction.to_string(),
                f.expected_correction.to_string(),
            ]);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        let fits: Vec<Value> = self
            .fits
            .iter()
            .map(|f| {
                json!({
                    "series": f.series,
                    "parity": f.parity,
                    "power": f.power,
                    "constant": f.constant,
                    "expected_constant": f.expected_constant,
                    "constant_relative_error": f.constant_error(),
                    "correction": f.correction,
                    "expected_correction": f.expected_correction,
                })
            })
            .collect();
        json!({
            "m_max": self.m_max,
            "degree": self.degree,
            "fits": fits,
            "origin_zero_for_odd_m": self.odd_origin_nonzero.is_empty(),
            "within_tolerance": self.within_tolerance(),
        })
    }
}

/// Weighted DP to `m_max`, then for each parity a least-squares fit of
/// `m^power p_m / 2^m` by a polynomial of the given degree in `1/m` over
/// `m_max/4 <= m <= m_max`.
pub fn spiral_asymptotics(m_max: usize, degree: usize) -> SpiralFits {
    let probe = quarter_plane_float(Rule::spiral(), 1.0, 1.0, m_max);
    let cases: [(&str, &Vec<f64>, i32, f64, [Option<f64>; 2]); 4] = [
        ("p", &probe.ln_p, 1, 8.0, [Some(-1.5), Some(-1.5)]),
        ("px", &probe.ln_px, 2, 16.0, [Some(-1.5), Some(-2.5)]),
        ("py", &probe.ln_py, 2, 16.0, [Some(-3.5), Some(-4.5)]),
        ("po", &probe.ln_po, 3, 64.0, [Some(-7.5), None]),
    ];
    let mut fits = Vec::new();
    for (series, ln, power, c, corr) in cases {
        for (par, name) in [(0, "even"), (1, "odd")] {
            let Some(expected_correction) = corr[par] else { continue };
            let ms: Vec<usize> = (m_max / 4..=m_max).filter(|m| m % 2 == par).collect();
            let v: Vec<f64> =
                ms.iter().map(|&m| (ln[m] - m as f64 * 2f64.ln() + power as f64 * (m as f64).ln()).exp()).collect();
            let k = inverse_power_fit(&ms, &v, degree);
            fits.push(ConstantFit {
                series,
                parity: name,
                power,
                constant: k[0],
                expected_constant: c / PI,
                correction: k[1] / k[0],
                expected_correction,
            });
        }
    }
    // Sums of nonnegative terms: a zero is an exact zero.
    let odd_origin_nonzero = (1..=m_max).step_by(2).filter(|&m| probe.ln_po[m] != f64::NEG_INFINITY).collect();
    SpiralFits { m_max, degree, fits, odd_origin_nonzero }
}
