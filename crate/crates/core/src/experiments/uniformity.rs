//! Random probing of the mixed-norm ratio `||u||_{L^4 L^4} / ||u(0)||_{L^2}`
//! for filtered data under the conservative scheme and for arbitrary data
//! under the viscous scheme.
//!
//! Every `(N, trial)` job draws its own coefficients from a ChaCha stream
//! keyed by `(seed, N, trial)`, so reports do not depend on job order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::blowup::{blowup_initial, build_lambda_set};
use super::check_mode_counts;
use crate::error::{Error, Result};
use crate::norms::l4_mixed_analytic;
use crate::schemes::{SchemeConfig, ViscosityRule};
use crate::spectral::{idft, lp_norm, GridSpec, SpectralVector};

/// Which modes carry random coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spectrum {
    /// `|n| <= floor(lambda N)`.
    Filtered {
        lambda: f64,
    },
    /// `||n| - N/4| >= epsilon N`.
    Band {
        epsilon: f64,
    },
    Full,
}

impl Spectrum {
    pub fn contains(&self, n: usize, k: i64) -> bool {
        match *self {
            Spectrum::Filtered { lambda } => k.abs() <= (lambda * n as f64).floor() as i64,
            Spectrum::Band { epsilon } => {
                ((k.abs() as f64) - n as f64 / 4.0).abs() >= epsilon * n as f64
            }
            Spectrum::Full => true,
        }
    }
}

/// ChaCha stream for one `(N, trial)` job.
pub fn job_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

/// Independent standard complex Gaussian coefficients on `spectrum`,
/// normalized to unit `L^2(T_h)` norm.
pub fn gaussian_data(
    grid: GridSpec,
    spectrum: Spectrum,
    seed: u64,
    trial: usize,
) -> SpectralVector {
    let mut rng = job_rng(seed, grid.n(), trial);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let u = SpectralVector::from_fn(grid, |k| {
        if spectrum.contains(grid.n(), k) {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * scale, im * scale)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let energy = u.energy();
    if energy > 0.0 {
        u.scaled(Complex64::new(energy.sqrt().recip(), 0.0))
    } else {
        u
    }
}

/// `||u||_{L^4(0,T; L^4)} / ||u(0)||_{L^2}` by the analytic sum.
pub fn mixed_norm_ratio(u0: &SpectralVector, t_end: f64, config: &SchemeConfig) -> Result<f64> {
    let l2 = lp_norm(&idft(u0), 2.0)?;
    let l4 = l4_mixed_analytic(u0, t_end, config)?;
    Ok(if l2 > 0.0 { l4.value / l2 } else { 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityRow {
    pub n: usize,
    pub trial: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerNSummary {
    pub n: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// Conservative and viscous ratios on the same `Lambda_N` datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastRow {
    pub n: usize,
    pub lambda_size: usize,
    pub conservative_ratio: f64,
    pub viscous_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    /// `"conservative"` or `"viscous"`.
    pub scheme: &'static str,
    /// Human-readable data/viscosity rule, e.g. `lambda=0.2` or `a=1*h`.
    pub parameter: String,
    pub t_end: f64,
    /// Set for the band filter and for viscosity rules outside `inf a/h > 0`;
    /// such reports carry no checks.
    pub exploratory: bool,
    /// Sorted by `N`, then trial.
    pub rows: Vec<UniformityRow>,
    pub per_n: Vec<PerNSummary>,
    pub contrast: Vec<ContrastRow>,
}

impl UniformityReport {
    fn summarize(&mut self) {
        self.per_n.clear();
        for chunk in self.rows.chunk_by(|a, b| a.n == b.n) {
            let max_ratio = chunk.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let mean_ratio = chunk.iter().map(|r| r.ratio).sum::<f64>() / chunk.len() as f64;
            self.per_n.push(PerNSummary {
                n: chunk[0].n,
                max_ratio,
                mean_ratio,
            });
        }
    }

    pub fn global_max(&self) -> f64 {
        self.per_n.iter().map(|s| s.max_ratio).fold(0.0, f64::max)
    }

    /// `(max - min) / min` over the per-`N` maxima.
    pub fn relative_spread(&self) -> f64 {
        let min = self
            .per_n
            .iter()
            .map(|s| s.max_ratio)
            .fold(f64::INFINITY, f64::min);
        (self.global_max() - min) / min
    }

    /// Global max over the max of the two smallest `N`.
    pub fn growth_over_smallest(&self) -> f64 {
        let base = self
            .per_n
            .iter()
            .take(2)
            .map(|s| s.max_ratio)
            .fold(0.0, f64::max);
        self.global_max() / base
    }
}

fn check_common(ns: &[usize], t_end: f64, trials: usize) -> Result<()> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::NonPositiveHorizon(t_end));
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    check_mode_counts(ns, 8)
}

fn run_grid(
    ns: &[usize],
    trials: usize,
    seed: u64,
    spectrum: Spectrum,
    t_end: f64,
    config: impl Fn(GridSpec) -> Result<SchemeConfig> + Sync,
) -> Result<Vec<UniformityRow>> {
    let jobs: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    jobs.par_iter()
        .map(|&(n, trial)| {
            let grid = GridSpec::new(n as i64)?;
            let u0 = gaussian_data(grid, spectrum, seed, trial);
            let ratio = mixed_norm_ratio(&u0, t_end, &config(grid)?)?;
            Ok(UniformityRow { n, trial, ratio })
        })
        .collect()
}

/// Conservative scheme on data filtered to `|n| <= lambda N`, `lambda < 1/4`.
pub fn run_filter(
    lambda: f64,
    ns: &[usize],
    t_end: f64,
    trials: usize,
    seed: u64,
) -> Result<UniformityReport> {
    if !(lambda > 0.0 && lambda < 0.25) {
        return Err(Error::InvalidLambda(lambda));
    }
    run_conservative(
        Spectrum::Filtered { lambda },
        format!("lambda={lambda}"),
        false,
        ns,
        t_end,
        trials,
        seed,
    )
}

/// Conservative scheme on data kept at distance `>= epsilon N` from `±N/4`.
/// Reported as exploratory: there is no known constant to check against.
pub fn run_band_filter(
    epsilon: f64,
    ns: &[usize],
    t_end: f64,
    trials: usize,
    seed: u64,
) -> Result<UniformityReport> {
    if !(epsilon > 0.0 && epsilon <= 0.25) {
        return Err(Error::InvalidBand(epsilon));
    }
    run_conservative(
        Spectrum::Band { epsilon },
        format!("epsilon={epsilon}"),
        true,
        ns,
        t_end,
        trials,
        seed,
    )
}

fn run_conservative(
    spectrum: Spectrum,
    parameter: String,
    exploratory: bool,
    ns: &[usize],
    t_end: f64,
    trials: usize,
    seed: u64,
) -> Result<UniformityReport> {
    check_common(ns, t_end, trials)?;
    let rows = run_grid(ns, trials, seed, spectrum, t_end, |g| {
        Ok(SchemeConfig::conservative(g))
    })?;
    let mut report = UniformityReport {
        scheme: "conservative",
        parameter,
        t_end,
        exploratory,
        rows,
        per_n: Vec::new(),
        contrast: Vec::new(),
    };
    report.summarize();
    Ok(report)
}

/// Viscous scheme on full-spectrum data.
///
/// With `contrast_alpha`, each `N` also runs the `Lambda_N` blow-up datum
/// through both schemes. A [`ViscosityRule::Power`] rule marks the report
/// exploratory.
pub fn run_viscous(
    rule: ViscosityRule,
    ns: &[usize],
    t_end: f64,
    trials: usize,
    seed: u64,
    contrast_alpha: Option<f64>,
) -> Result<UniformityReport> {
    rule.validate()?;
    check_common(ns, t_end, trials)?;
    let rows = run_grid(ns, trials, seed, Spectrum::Full, t_end, |g| {
        SchemeConfig::with_rule(g, rule)
    })?;
    let contrast = match contrast_alpha {
        Some(alpha) => ns
            .iter()
            .map(|&n| {
                let set = build_lambda_set(n, alpha)?;
                let u0 = blowup_initial(&set);
                let grid = set.grid();
                Ok(ContrastRow {
                    n,
                    lambda_size: set.len(),
                    conservative_ratio: mixed_norm_ratio(
                        &u0,
                        t_end,
                        &SchemeConfig::conservative(grid),
                    )?,
                    viscous_ratio: mixed_norm_ratio(
                        &u0,
                        t_end,
                        &SchemeConfig::with_rule(grid, rule)?,
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let parameter = match rule {
        ViscosityRule::Linear { c } => format!("a={c}*h"),
        ViscosityRule::Power { beta } => format!("a=h^{beta}"),
    };
    let mut report = UniformityReport {
        scheme: "viscous",
        parameter,
        t_end,
        exploratory: matches!(rule, ViscosityRule::Power { .. }),
        rows,
        per_n: Vec::new(),
        contrast,
    };
    report.summarize();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_data_is_unit_and_supported() {
        let g = GridSpec::new(64).unwrap();
        let u = gaussian_data(g, Spectrum::Filtered { lambda: 0.2 }, 9, 3);
        assert!((u.energy() - 1.0).abs() < 1e-14);
        assert_eq!(u.support(), (-12..=12).collect::<Vec<_>>());
        let band = gaussian_data(g, Spectrum::Band { epsilon: 0.1 }, 9, 3);
        assert!(band
            .support()
            .iter()
            .all(|k| (k.abs() as f64 - 16.0).abs() >= 6.4));
    }

    #[test]
    fn gaussian_streams_are_keyed_by_job() {
        let g = GridSpec::new(32).unwrap();
        let a = gaussian_data(g, Spectrum::Full, 1, 0);
        assert_eq!(a, gaussian_data(g, Spectrum::Full, 1, 0));
        assert_ne!(a, gaussian_data(g, Spectrum::Full, 1, 1));
        assert_ne!(a, gaussian_data(g, Spectrum::Full, 2, 0));
    }

    #[test]
    fn single_mode_filter_ratio() {
        // floor(0.05 * 16) = 0: only the mean mode survives
        let t: f64 = 0.7;
        let report = run_filter(0.05, &[16], t, 3, 5).unwrap();
        for row in &report.rows {
            assert!((row.ratio - t.powf(0.25)).abs() < 1e-14);
        }
    }

    #[test]
    fn filter_is_deterministic() {
        let a = run_filter(0.2, &[32, 64], 1.0, 4, 11).unwrap();
        let b = run_filter(0.2, &[32, 64], 1.0, 4, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 8);
        assert_eq!(a.per_n.len(), 2);
        assert!(a.rows.iter().all(|r| r.ratio >= 0.0));
    }

    #[test]
    fn filter_rejects_lambda_quarter() {
        assert_eq!(
            run_filter(0.25, &[32], 1.0, 1, 0),
            Err(Error::InvalidLambda(0.25))
        );
        assert_eq!(run_filter(0.2, &[32], 1.0, 0, 0), Err(Error::NoTrials));
    }

    #[test]
    fn viscous_rejects_bad_rule() {
        assert_eq!(
            run_viscous(ViscosityRule::Linear { c: 0.0 }, &[32], 1.0, 1, 0, None),
            Err(Error::InvalidViscosityRule(0.0))
        );
    }

    #[test]
    fn strong_viscosity_kills_nonmean_data() {
        let g = GridSpec::new(32).unwrap();
        let mut u = gaussian_data(g, Spectrum::Full, 4, 0);
        u.set(0, Complex64::new(0.0, 0.0)).unwrap();
        let mut last = f64::INFINITY;
        for c in [1.0, 1e2, 1e4, 1e6] {
            let cfg = SchemeConfig::with_rule(g, ViscosityRule::Linear { c }).unwrap();
            let r = mixed_norm_ratio(&u, 1.0, &cfg).unwrap();
            assert!(r > 0.0 && r < last);
            last = r;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn viscous_contrast_and_exploratory_flag() {
        let r = run_viscous(
            ViscosityRule::Linear { c: 1.0 },
            &[64, 128],
            1.0,
            2,
            3,
            Some(0.3),
        )
        .unwrap();
        assert!(!r.exploratory);
        assert_eq!(r.contrast.len(), 2);
        for row in &r.contrast {
            assert!(row.viscous_ratio < row.conservative_ratio);
        }
        let r = run_viscous(ViscosityRule::Power { beta: 1.5 }, &[32], 1.0, 1, 3, None).unwrap();
        assert!(r.exploratory);
        assert_eq!(
            r,
            run_viscous(ViscosityRule::Power { beta: 1.5 }, &[32], 1.0, 1, 3, None).unwrap()
        );
    }
}
