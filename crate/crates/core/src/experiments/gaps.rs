//! Gap diagnostics for the exponent sequences used in the uniform bounds.
//!
//! For a resonance level `r` the filtered-data sum runs over
//! `mu_h(n) = -p_h(n) - p_h(r - n)`, `n = r - L ..= L` with `L = floor(lambda N)`.
//! The sequence rises strictly up to `floor(r/2)` and falls strictly from
//! `floor(r/2) + 1`, and on each side consecutive gaps are at least
//! `8 (N+1)^2 cos(2 lambda pi) sin^2(pi/(N+1))` in magnitude.
//!
//! The viscous low-frequency estimate needs
//! `|mu_h(n, m)| >= c |n - m| |r - n - m|` on `I(r, N) = {r - N/8, ..., floor(r/2)}`;
//! for `r <= N/4` the product form gives `c = 16 sqrt(2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{mu_gap_seq, mu_pair, GridSpec, MuSequence};

/// `8 cos(pi/4) * 4`: the `cos` factor is at least `cos(pi/4)` and each
/// `sin(x)` with `|x| <= pi/2` is at least `2|x|/pi`.
pub const PAIR_BOUND_FLOOR: f64 = 16.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub n: usize,
    pub lambda: f64,
    pub r: i64,
    /// `floor(r / 2)`.
    pub split: i64,
    pub sequence: MuSequence,
    /// Smallest `mu(n+1) - mu(n)` for `n < split`; `None` if that side is empty.
    pub min_increasing_gap: Option<f64>,
    /// Largest (least negative) `mu(n+1) - mu(n)` for `n > split`.
    pub max_decreasing_gap: Option<f64>,
    /// `8 (N+1)^2 cos(2 lambda pi) sin^2(pi/(N+1))`.
    pub theoretical: f64,
}

impl GapReport {
    pub fn increasing_side_holds(&self, rel_slack: f64) -> bool {
        self.min_increasing_gap
            .is_none_or(|g| g >= self.theoretical * (1.0 - rel_slack))
    }

    pub fn decreasing_side_holds(&self, rel_slack: f64) -> bool {
        self.max_decreasing_gap
            .is_none_or(|g| g <= -self.theoretical * (1.0 - rel_slack))
    }

    /// Strict rise to `split`, a non-increasing step to `split + 1` (a tie
    /// for odd `r`), then strict fall.
    pub fn is_unimodal(&self) -> bool {
        let seq = &self.sequence;
        (seq.lo..seq.hi()).all(|n| {
            let d = seq.diff(n).expect("in range");
            match n.cmp(&self.split) {
                std::cmp::Ordering::Less => d > 0.0,
                std::cmp::Ordering::Equal => d <= 0.0,
                std::cmp::Ordering::Greater => d < 0.0,
            }
        })
    }

    /// First index attaining the maximum of the sequence.
    pub fn peak(&self) -> i64 {
        let seq = &self.sequence;
        let (i, _) = seq
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        seq.lo + i as i64
    }
}

pub fn gap_theoretical(grid: GridSpec, lambda: f64) -> f64 {
    let m = grid.nodes() as f64;
    8.0 * m * m * (2.0 * lambda * PI).cos() * (PI / m).sin().powi(2)
}

/// `floor(lambda N)`.
pub fn filter_cutoff(n: usize, lambda: f64) -> i64 {
    (lambda * n as f64).floor() as i64
}

pub fn gap_report(n: usize, lambda: f64, r: i64) -> Result<GapReport> {
    if !(lambda > 0.0 && lambda < 0.25) {
        return Err(Error::InvalidLambda(lambda));
    }
    let grid = GridSpec::new(n as i64)?;
    let cutoff = filter_cutoff(n, lambda);
    if r < 0 || r > 2 * cutoff {
        return Err(Error::LevelOutOfRange { r, max: 2 * cutoff });
    }
    let sequence = mu_gap_seq(grid, r, r - cutoff, cutoff)?;
    let split = r.div_euclid(2);
    let inc = (sequence.lo..split).filter_map(|k| sequence.diff(k));
    let dec = (split + 1..sequence.hi()).filter_map(|k| sequence.diff(k));
    let min_increasing_gap = inc.reduce(f64::min);
    let max_decreasing_gap = dec.reduce(f64::max);
    Ok(GapReport {
        n,
        lambda,
        r,
        split,
        min_increasing_gap,
        max_decreasing_gap,
        theoretical: gap_theoretical(grid, lambda),
        sequence,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairBoundReport {
    pub n: usize,
    pub r: i64,
    /// Inclusive bounds of `I(r, N)`.
    pub interval: (i64, i64),
    /// Number of admissible ordered pairs.
    pub pairs: usize,
    /// `min |mu_h(n, m)| / (|n - m| |r - n - m|)`; `None` without pairs.
    pub min_ratio: Option<f64>,
    pub argmin: Option<(i64, i64)>,
}

pub fn pair_bound_report(n: usize, r: i64) -> Result<PairBoundReport> {
    let grid = GridSpec::new(n as i64)?;
    let quarter = n as i64 / 4;
    if r < 0 || r > quarter {
        return Err(Error::LevelOutOfRange { r, max: quarter });
    }
    let lo = r - n as i64 / 8;
    let hi = r.div_euclid(2);
    let mut pairs = 0;
    let mut best: Option<(f64, (i64, i64))> = None;
    for a in lo..=hi {
        for b in lo..=hi {
            if a == b || a + b == r {
                continue;
            }
            let denom = ((a - b).abs() * (r - a - b).abs()) as f64;
            let ratio = mu_pair(grid, r, a, b)?.abs() / denom;
            pairs += 1;
            if best.is_none_or(|(v, _)| ratio < v) {
                best = Some((ratio, (a, b)));
            }
        }
    }
    Ok(PairBoundReport {
        n,
        r,
        interval: (lo, hi),
        pairs,
        min_ratio: best.map(|b| b.0),
        argmin: best.map(|b| b.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{q_h, Quadruple};

    #[test]
    fn profile_n150_peaks_at_half_level() {
        let rep = gap_report(150, 0.2, 25).unwrap();
        assert_eq!(rep.split, 12);
        assert_eq!(rep.sequence.lo, -5);
        assert_eq!(rep.sequence.hi(), 30);
        assert!(rep.is_unimodal());
        assert_eq!(rep.peak(), 12);
        // odd r: mu(12) = mu(13)
        assert_eq!(rep.sequence.value(12), rep.sequence.value(13));
        assert!(rep.increasing_side_holds(1e-9));
        assert!(rep.decreasing_side_holds(1e-9));
    }

    #[test]
    fn r_zero_peaks_at_origin() {
        let rep = gap_report(64, 0.2, 0).unwrap();
        assert_eq!(rep.peak(), 0);
        assert!(rep.is_unimodal());
        let g = GridSpec::new(64).unwrap();
        for n in rep.sequence.lo..=rep.sequence.hi() {
            assert_eq!(rep.sequence.value(n).unwrap(), -2.0 * g.symbol(n));
        }
    }

    #[test]
    fn gap_inequality_sweep() {
        for n in [64usize, 100, 128, 256] {
            for r in 0..=2 * filter_cutoff(n, 0.2) {
                let rep = gap_report(n, 0.2, r).unwrap();
                assert!(rep.increasing_side_holds(1e-9), "N={n} r={r}");
                assert!(rep.decreasing_side_holds(1e-9), "N={n} r={r}");
                assert!(rep.is_unimodal(), "N={n} r={r}");
            }
        }
    }

    #[test]
    fn gap_rejects_bad_input() {
        assert_eq!(
            gap_report(64, 0.2, 26),
            Err(Error::LevelOutOfRange { r: 26, max: 24 })
        );
        assert!(gap_report(64, 0.2, -1).is_err());
        assert!(gap_report(64, 0.3, 0).is_err());
    }

    #[test]
    fn pair_bound_floor() {
        for n in [64usize, 72, 128] {
            for r in 0..=(n as i64 / 4) {
                let rep = pair_bound_report(n, r).unwrap();
                if let Some(min) = rep.min_ratio {
                    assert!(min >= PAIR_BOUND_FLOOR - 1e-6, "N={n} r={r} min={min}");
                }
            }
        }
    }

    #[test]
    fn pair_bound_spot_check() {
        let g = GridSpec::new(64).unwrap();
        let (r, n, m) = (8, 2, 3);
        let rep = pair_bound_report(64, r).unwrap();
        assert_eq!(rep.interval, (0, 4));
        // 5 * 5 ordered pairs minus the diagonal; n + m = 8 only at (4, 4)
        assert_eq!(rep.pairs, 20);
        let direct = q_h(g, Quadruple::new(n, r - n, m, r - m)).unwrap().abs();
        assert!((mu_pair(g, r, n, m).unwrap().abs() - direct).abs() < 1e-9 * direct);
        let ratio = direct / 3.0;
        assert!(rep.min_ratio.unwrap() <= ratio + 1e-9);
    }

    #[test]
    fn pair_ratio_symmetric() {
        let g = GridSpec::new(128).unwrap();
        let r = 20;
        for a in (r - 16)..=10 {
            for b in (r - 16)..=10 {
                let x = mu_pair(g, r, a, b).unwrap().abs();
                let y = mu_pair(g, r, b, a).unwrap().abs();
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn pair_bound_rejects_large_r() {
        assert_eq!(
            pair_bound_report(64, 17),
            Err(Error::LevelOutOfRange { r: 17, max: 16 })
        );
    }
}
