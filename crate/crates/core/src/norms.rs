//! The mixed norm `||u||_{L^4(0,T; L^4(T_h))}` computed two ways.
//!
//! The analytic route expands `|u(t, x_j)|^4` over resonant quadruples and
//! integrates every exponential in closed form. Writing
//! `c_r(t) = sum_{n1 + n2 ≡ r} a(n1) a(n2) exp(-(i + a) t (p_h(n1) + p_h(n2)))`,
//! the node sum gives `||u(t)||_4^4 = sum_r |c_r(t)|^2`, so
//!
//! ```text
//! ||u||^4 = sum_r sum_{P, Q in bucket r} w_P conj(w_Q) ∫_0^T exp(-t (s + i q)) dt
//! ```
//!
//! with `q = λ_P - λ_Q`, `s = a (λ_P + λ_Q)`. Pair sums are taken modulo
//! `N + 1` because `phi_k` and `phi_{k+N+1}` coincide on the grid; for data
//! supported in `|k| <= N/4` this is the same as exact resonance.
//!
//! The quadrature route applies composite Simpson to
//! `t -> ||solution_at_nodes(u0, t)||_4^4` and shares nothing with the
//! analytic route beyond the propagator.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schemes::{mode_factor, propagate, SchemeConfig};
use crate::spectral::{idft_into, l4_fourth_power, GridSpec, SpectralVector};

/// Below this `|T (s + i q)|` the integral is summed as a short series.
const SERIES_CUTOFF: f64 = 1e-8;

/// Above this `|T (s + i q)|` the analytic sum forms `exp(-T (s + i q))` as a
/// product of per-pair exponentials; below it the phase is evaluated
/// directly so `1 - exp(..)` keeps its relative accuracy.
const PRODUCT_CUTOFF: f64 = 1.0;

/// Parameters of `∫_0^T exp(-t (s + i q)) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIntegralParams {
    q: f64,
    s: f64,
    t_end: f64,
}

impl PhaseIntegralParams {
    pub fn new(q: f64, s: f64, t_end: f64) -> Result<Self> {
        check_horizon(t_end)?;
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidViscosity(s));
        }
        Ok(Self { q, s, t_end })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveHorizon(t))
    }
}

/// `∫_0^T exp(-t (s + i q)) dt = (1 - exp(-T (s + i q))) / (s + i q)`.
pub fn damped_phase_integral(p: PhaseIntegralParams) -> Complex64 {
    phase_integral(p.q, p.s, p.t_end)
}

fn phase_integral(q: f64, s: f64, t: f64) -> Complex64 {
    let w = Complex64::new(s * t, q * t);
    if w.norm() < SERIES_CUTOFF {
        return t * (1.0 - w / 2.0 + w * w / 6.0);
    }
    let (sin, cos) = (q * t).sin_cos();
    let half = (q * t / 2.0).sin();
    // 1 - e^{-sT} cos(qT) = (1 - cos) - expm1(-sT) cos
    let re = 2.0 * half * half - (-s * t).exp_m1() * cos;
    let im = (-s * t).exp() * sin;
    Complex64::new(re, im) / Complex64::new(s, q)
}

/// Value of the mixed norm together with its fourth power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormResult {
    pub value: f64,
    pub fourth_power: f64,
    /// Imaginary part left over in the analytic quadruple sum; zero for
    /// quadrature.
    pub imag_residual: f64,
}

impl MixedNormResult {
    fn from_sum(sum: Complex64) -> Self {
        Self {
            value: sum.re.max(0.0).sqrt().sqrt(),
            fourth_power: sum.re,
            imag_residual: sum.im,
        }
    }
}

#[derive(Clone, Copy)]
struct Pair {
    weight: Complex64,
    lambda: f64,
    phase: Complex64,
}

/// Analytic mixed norm via closed-form integration of every resonant term.
///
/// Buckets are evaluated in parallel; each bucket sums in a fixed order and
/// bucket totals are combined by index, so the result does not depend on the
/// thread count.
pub fn l4_mixed_analytic(
    u0: &SpectralVector,
    t_end: f64,
    config: &SchemeConfig,
) -> Result<MixedNormResult> {
    check_horizon(t_end)?;
    let grid = config.grid();
    if u0.grid() != grid {
        return Err(Error::GridMismatch {
            data: u0.grid().n(),
            scheme: grid.n(),
        });
    }
    let a = config.viscosity();
    let buckets = pair_buckets(u0, grid, a, t_end);
    let totals: Vec<Complex64> = buckets
        .par_iter()
        .map(|bucket| bucket_integral(bucket, a, t_end))
        .collect();
    Ok(MixedNormResult::from_sum(totals.iter().sum()))
}

/// Unordered pairs grouped by `(n1 + n2) mod (N + 1)`.
fn pair_buckets(u0: &SpectralVector, grid: GridSpec, a: f64, t_end: f64) -> Vec<Vec<Pair>> {
    let support: Vec<(i64, Complex64, f64)> = u0
        .iter()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(k, c)| (k, c, grid.symbol(k)))
        .collect();
    let m = grid.nodes() as i64;
    let mut buckets = vec![Vec::new(); grid.nodes()];
    for (i, &(k1, c1, p1)) in support.iter().enumerate() {
        for &(k2, c2, p2) in &support[i..] {
            let multiplicity = if k1 == k2 { 1.0 } else { 2.0 };
            let lambda = p1 + p2;
            buckets[(k1 + k2).rem_euclid(m) as usize].push(Pair {
                weight: c1 * c2 * multiplicity,
                lambda,
                phase: mode_factor(a, t_end, lambda),
            });
        }
    }
    buckets
}

fn bucket_integral(bucket: &[Pair], a: f64, t_end: f64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for p in bucket {
        let mut row = Complex64::new(0.0, 0.0);
        for q in bucket {
            let freq = p.lambda - q.lambda;
            let damp = a * (p.lambda + q.lambda);
            let z = Complex64::new(damp, freq);
            let integral = if z.norm_sqr() * t_end * t_end >= PRODUCT_CUTOFF * PRODUCT_CUTOFF {
                (1.0 - p.phase * q.phase.conj()) / z
            } else {
                phase_integral(freq, damp, t_end)
            };
            row += q.weight.conj() * integral;
        }
        total += p.weight * row;
    }
    total
}

/// How [`l4_mixed_quadrature`] chooses its panel count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureRule {
    /// One composite Simpson pass with this many (even) panels.
    Fixed { panels: usize },
    /// Start at `max(64, ceil(T q_max / pi))` panels, with `q_max = 8 (N+1)^2`
    /// the fastest beat frequency, and double until two successive values
    /// differ by less than `rel_tol`.
    Adaptive { rel_tol: f64, max_panels: usize },
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::Adaptive {
            rel_tol: 1e-8,
            max_panels: 1 << 24,
        }
    }
}

struct Integrand<'a> {
    u0: &'a SpectralVector,
    config: &'a SchemeConfig,
    h: f64,
}

impl Integrand<'_> {
    fn eval(&self, t: f64) -> f64 {
        let v = propagate(self.u0, t, self.config).expect("validated input");
        let mut buf = vec![Complex64::new(0.0, 0.0); v.grid().nodes()];
        idft_into(&v, &mut buf);
        l4_fourth_power(&buf, self.h)
    }

    /// Sum of the integrand at `t_i = start + i * stride` for `i < count`.
    fn sum_at(&self, start: f64, stride: f64, count: usize) -> f64 {
        let values: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| self.eval(start + i as f64 * stride))
            .collect();
        values.iter().sum()
    }
}

/// Composite Simpson quadrature of `t -> ||u(t)||_{L^4(T_h)}^4` over `[0, T]`.
pub fn l4_mixed_quadrature(
    u0: &SpectralVector,
    t_end: f64,
    config: &SchemeConfig,
    rule: QuadratureRule,
) -> Result<MixedNormResult> {
    check_horizon(t_end)?;
    let grid = config.grid();
    if u0.grid() != grid {
        return Err(Error::GridMismatch {
            data: u0.grid().n(),
            scheme: grid.n(),
        });
    }
    let f = Integrand {
        u0,
        config,
        h: grid.h(),
    };
    let ends = f.eval(0.0) + f.eval(t_end);

    let (mut panels, rel_tol, max_panels) = match rule {
        QuadratureRule::Fixed { panels } => {
            if panels < 2 || panels % 2 != 0 {
                return Err(Error::InvalidPanels(panels));
            }
            (panels, None, panels)
        }
        QuadratureRule::Adaptive {
            rel_tol,
            max_panels,
        } => {
            let m = grid.nodes() as f64;
            let q_max = 8.0 * m * m;
            let start = ((t_end * q_max / std::f64::consts::PI).ceil() as usize).max(64);
            (start + start % 2, Some(rel_tol), max_panels)
        }
    };

    // Simpson weights: ends 1, odd interior 4, even interior 2.
    let step = t_end / panels as f64;
    let mut odd = f.sum_at(step, 2.0 * step, panels / 2);
    let mut even = f.sum_at(2.0 * step, 2.0 * step, panels / 2 - 1);
    let simpson = |panels: usize, odd: f64, even: f64| {
        t_end / panels as f64 / 3.0 * (ends + 4.0 * odd + 2.0 * even)
    };
    let mut value = simpson(panels, odd, even);

    if let Some(tol) = rel_tol {
        loop {
            if panels * 2 > max_panels {
                return Err(Error::QuadratureNotConverged { tol, panels });
            }
            even += odd;
            panels *= 2;
            let step = t_end / panels as f64;
            odd = f.sum_at(step, 2.0 * step, panels / 2);
            let next = simpson(panels, odd, even);
            let converged = (next - value).abs() <= tol * next.abs();
            value = next;
            if converged {
                break;
            }
        }
    }
    Ok(MixedNormResult::from_sum(Complex64::new(value, 0.0)))
}

/// Number of `(n1, n2, n3, n4) ∈ modes^4` with `n1 + n2 = n3 + n4`.
pub fn resonant_quadruple_count(modes: &[i64]) -> u64 {
    let mut set = modes.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut sums = std::collections::BTreeMap::<i64, u64>::new();
    for &a in &set {
        for &b in &set {
            *sums.entry(a + b).or_default() += 1;
        }
    }
    sums.values().map(|c| c * c).sum()
}
