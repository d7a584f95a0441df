//! Experiment harnesses built on the analytic mixed norm.

mod blowup;
mod fit;
mod gaps;
mod uniformity;

pub use blowup::{
    blowup_initial, blowup_row, build_lambda_set, max_resonant_q, run_blowup, BlowupReport,
    BlowupRow, LambdaSet,
};
pub use fit::{fit_power_law, PowerLawFit};
pub use gaps::{
    filter_cutoff, gap_report, gap_theoretical, pair_bound_report, GapReport, PairBoundReport,
    PAIR_BOUND_FLOOR,
};
pub use uniformity::{
    gaussian_data, job_rng, mixed_norm_ratio, run_band_filter, run_filter, run_viscous,
    ContrastRow, PerNSummary, Spectrum, UniformityReport, UniformityRow,
};

use crate::error::{Error, Result};

/// Pass/fail thresholds for the experiment checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Bound on `(max - min) / min` of the per-N maxima for filtered data.
    pub spread: f64,
    /// Bound on `max K / min K` for the resonant phase constant across N.
    pub mechanism_spread: f64,
    /// Bound on `global max / max over the two smallest N` for uniform runs.
    pub growth: f64,
    /// Accepted blow-up slope window, as a fraction of `alpha / 4` on each side.
    pub slope_window: f64,
    /// Minimum `ratio(N_max) / ratio(N_min)` on the blow-up data.
    pub blowup_growth: f64,
    /// Relative slack in the gap inequality.
    pub gap_slack: f64,
    /// Absolute slack below [`PAIR_BOUND_FLOOR`].
    pub pair_slack: f64,
    /// Relative slack in the resonant lower bound.
    pub lower_bound_slack: f64,
    /// Allowed growth of the viscous ratio on the blow-up data.
    pub viscous_contrast: f64,
    /// Required growth of the conservative ratio on the same data.
    pub conservative_growth: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            spread: 0.30,
            mechanism_spread: 1.5,
            growth: 1.3,
            slope_window: 0.5,
            blowup_growth: 1.2,
            gap_slack: 1e-9,
            pair_slack: 1e-6,
            lower_bound_slack: 1e-9,
            viscous_contrast: 1.1,
            conservative_growth: 1.15,
        }
    }
}

/// One named assertion outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl BlowupReport {
    pub fn checks(&self, th: &Thresholds) -> Vec<Check> {
        let mut out = Vec::new();
        if let Some(fit) = &self.fit {
            let p = self.predicted_slope();
            let (lo, hi) = (p * (1.0 - th.slope_window), p * (1.0 + th.slope_window));
            out.push(Check::new(
                "slope",
                fit.slope >= lo && fit.slope <= hi,
                format!("slope={:.6} window=[{lo:.6}, {hi:.6}]", fit.slope),
            ));
        }
        if let (Some(first), Some(last)) = (self.rows.first(), self.rows.last()) {
            if self.rows.len() > 1 {
                let g = last.ratio / first.ratio;
                out.push(Check::new(
                    "growth",
                    g >= th.blowup_growth,
                    format!(
                        "ratio(N={})/ratio(N={})={g:.6} required>={}",
                        last.n, first.n, th.blowup_growth
                    ),
                ));
            }
        }
        let ks = self.mechanism_constants();
        if ks.len() > 1 {
            let max = ks.iter().cloned().fold(0.0, f64::max);
            let min = ks.iter().cloned().fold(f64::INFINITY, f64::min);
            out.push(Check::new(
                "mechanism_constant",
                max / min <= th.mechanism_spread,
                format!(
                    "K range=[{min:.6}, {max:.6}] allowed ratio<={}",
                    th.mechanism_spread
                ),
            ));
        }
        let growing = self.strictly_growing_sets();
        out.push(Check::new(
            "monotone_trend",
            growing.windows(2).all(|w| w[1].ratio >= w[0].ratio),
            format!("{} rows with strictly growing Lambda_N", growing.len()),
        ));
        for row in &self.rows {
            let ok =
                row.fourth_power >= row.lower_bound - th.lower_bound_slack * row.lower_bound.abs();
            out.push(Check::new(
                format!("lower_bound N={}", row.n),
                ok,
                format!(
                    "fourth_power={:.6} bound={:.6} T*q_max={:.3}",
                    row.fourth_power,
                    row.lower_bound,
                    self.t_end * row.q_max
                ),
            ));
        }
        out
    }
}

impl UniformityReport {
    pub fn checks(&self, th: &Thresholds) -> Vec<Check> {
        if self.exploratory {
            return Vec::new();
        }
        let mut out = Vec::new();
        if self.per_n.len() > 2 {
            let g = self.growth_over_smallest();
            out.push(Check::new(
                "bounded",
                g <= th.growth,
                format!("growth={g:.6} allowed<={}", th.growth),
            ));
        }
        if self.scheme == "conservative" && self.per_n.len() > 1 {
            let s = self.relative_spread();
            out.push(Check::new(
                "spread",
                s <= th.spread,
                format!("spread={s:.6} allowed<={}", th.spread),
            ));
        }
        if let (Some(first), Some(last)) = (self.contrast.first(), self.contrast.last()) {
            if self.contrast.len() > 1 {
                let v = last.viscous_ratio / first.viscous_ratio;
                let c = last.conservative_ratio / first.conservative_ratio;
                out.push(Check::new(
                    "viscous_contrast",
                    v <= th.viscous_contrast,
                    format!("viscous growth={v:.6} allowed<={}", th.viscous_contrast),
                ));
                out.push(Check::new(
                    "conservative_contrast",
                    c >= th.conservative_growth,
                    format!(
                        "conservative growth={c:.6} required>={}",
                        th.conservative_growth
                    ),
                ));
            }
        }
        out
    }
}

/// Even, at least `min`, strictly increasing.
pub(crate) fn check_mode_counts(ns: &[usize], min: usize) -> Result<()> {
    if let Some(&bad) = ns.iter().find(|&&n| n < min || n % 2 != 0) {
        return Err(Error::ExperimentGrid { min, got: bad });
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedGrid);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_count_validation() {
        assert_eq!(check_mode_counts(&[8, 16], 8), Ok(()));
        assert_eq!(
            check_mode_counts(&[8, 15], 8),
            Err(Error::ExperimentGrid { min: 8, got: 15 })
        );
        assert_eq!(
            check_mode_counts(&[4], 8),
            Err(Error::ExperimentGrid { min: 8, got: 4 })
        );
        assert_eq!(check_mode_counts(&[16, 16], 8), Err(Error::UnsortedGrid));
    }

    #[test]
    fn exploratory_reports_have_no_checks() {
        let rep = run_viscous(
            crate::schemes::ViscosityRule::Power { beta: 1.5 },
            &[8, 16, 32],
            0.1,
            1,
            0,
            None,
        )
        .unwrap();
        assert!(rep.exploratory);
        assert!(rep.checks(&Thresholds::default()).is_empty());
    }
}
