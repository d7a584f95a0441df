//! Initial data concentrated at the convexity change `N/4` of `p_h`, and the
//! growth of the conservative mixed-norm ratio it produces.

use num_complex::Complex64;

use super::check_mode_counts;
use super::fit::{fit_power_law, PowerLawFit};
use crate::error::{Error, Result};
use crate::norms::{l4_mixed_analytic, resonant_quadruple_count};
use crate::schemes::SchemeConfig;
use crate::spectral::{idft, lp_norm, GridSpec, SpectralVector};

/// `{ n : |n| <= N/2, |n - N/4| < N^alpha }`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSet {
    grid: GridSpec,
    alpha: f64,
    members: Vec<i64>,
}

impl LambdaSet {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Members in increasing order.
    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn build_lambda_set(n: usize, alpha: f64) -> Result<LambdaSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::ExperimentGrid { min: 8, got: n });
    }
    let grid = GridSpec::new(n as i64)?;
    let center = n as f64 / 4.0;
    let radius = (n as f64).powf(alpha);
    let members = grid
        .modes()
        .filter(|&k| (k as f64 - center).abs() < radius)
        .collect();
    Ok(LambdaSet {
        grid,
        alpha,
        members,
    })
}

/// `sum_{n in Lambda_N} phi_n`: coefficient one on the set, zero elsewhere.
pub fn blowup_initial(set: &LambdaSet) -> SpectralVector {
    let mut u = SpectralVector::zeros(set.grid);
    for &k in &set.members {
        u.set(k, Complex64::new(1.0, 0.0)).expect("member in range");
    }
    u
}

/// Largest `|q_h(n)|` over quadruples of `modes` with `n1 + n2 = n3 + n4`.
pub fn max_resonant_q(grid: GridSpec, modes: &[i64]) -> f64 {
    let mut max = 0.0f64;
    for &a in modes {
        for &b in modes {
            let lead = grid.symbol(a) + grid.symbol(b);
            for &c in modes {
                let d = a + b - c;
                if modes.binary_search(&d).is_ok() {
                    max = max.max((lead - grid.symbol(c) - grid.symbol(d)).abs());
                }
            }
        }
    }
    max
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupRow {
    pub n: usize,
    pub lambda_size: usize,
    pub l2_initial: f64,
    pub l4_mixed: f64,
    pub ratio: f64,
    pub fourth_power: f64,
    /// Quadruples in `Lambda_N^4` with `n1 + n2 = n3 + n4`.
    pub resonant_count: u64,
    /// Exact max of `|q_h|` over those quadruples.
    pub q_max: f64,
    /// `cos(T q_max) T resonant_count`.
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupReport {
    pub alpha: f64,
    pub t_end: f64,
    pub rows: Vec<BlowupRow>,
    /// Fit of `ln(ratio)` against `ln(N)`; needs at least three rows.
    pub fit: Option<PowerLawFit>,
}

impl BlowupReport {
    /// `alpha / 4`, the predicted growth exponent of the ratio.
    pub fn predicted_slope(&self) -> f64 {
        self.alpha / 4.0
    }

    /// `q_max * N^(1 - 3 alpha)` per row: the constant `K` in `q_max <= K N^(3 alpha - 1)`.
    pub fn mechanism_constants(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.q_max * (r.n as f64).powf(1.0 - 3.0 * self.alpha))
            .collect()
    }

    /// Rows where `|Lambda_N|` strictly increases over the previous kept row.
    pub fn strictly_growing_sets(&self) -> Vec<&BlowupRow> {
        let mut out: Vec<&BlowupRow> = Vec::new();
        for row in &self.rows {
            if out
                .last()
                .is_none_or(|last| row.lambda_size > last.lambda_size)
            {
                out.push(row);
            }
        }
        out
    }
}

pub fn blowup_row(set: &LambdaSet, t_end: f64) -> Result<BlowupRow> {
    let grid = set.grid;
    let u0 = blowup_initial(set);
    let l2_initial = lp_norm(&idft(&u0), 2.0)?;
    let norm = l4_mixed_analytic(&u0, t_end, &SchemeConfig::conservative(grid))?;
    let resonant_count = resonant_quadruple_count(&set.members);
    let q_max = max_resonant_q(grid, &set.members);
    Ok(BlowupRow {
        n: grid.n(),
        lambda_size: set.len(),
        l2_initial,
        l4_mixed: norm.value,
        ratio: norm.value / l2_initial,
        fourth_power: norm.fourth_power,
        resonant_count,
        q_max,
        lower_bound: (t_end * q_max).cos() * t_end * resonant_count as f64,
    })
}

/// Runs the conservative scheme on the `Lambda_N` data for every `N`.
pub fn run_blowup(alpha: f64, ns: &[usize], t_end: f64) -> Result<BlowupReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if alpha >= 1.0 / 3.0 {
        return Err(Error::AlphaTooLarge(alpha));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::NonPositiveHorizon(t_end));
    }
    check_mode_counts(ns, 8)?;
    let rows = ns
        .iter()
        .map(|&n| blowup_row(&build_lambda_set(n, alpha)?, t_end))
        .collect::<Result<Vec<_>>>()?;
    let fit = if rows.len() >= 3 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ratio)).collect();
        Some(fit_power_law(&pts)?)
    } else {
        None
    };
    Ok(BlowupReport {
        alpha,
        t_end,
        rows,
        fit,
    })
}
