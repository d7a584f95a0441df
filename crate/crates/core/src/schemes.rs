//! Semidiscrete dynamics on the periodic grid.
//!
//! Both schemes are diagonal in the Fourier basis: the conservative scheme
//! `i u' + Δ_h u = 0` rotates mode `k` by `exp(-i t p_h(k))`, and the viscous
//! scheme `i u' + Δ_h u = i a Δ_h u` additionally damps it by
//! `exp(-a t p_h(k))`. [`ode_integrate`] integrates the same systems in node
//! space with classical RK4 and serves as an independent check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{idft, GridSpec, GridVector, SpectralVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Conservative,
    Viscous,
}

/// How the viscosity `a(h)` depends on the mesh size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViscosityRule {
    /// `a(h) = c h`; keeps `a / h` bounded below.
    Linear { c: f64 },
    /// `a(h) = h^beta`.
    Power { beta: f64 },
}

impl ViscosityRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ViscosityRule::Linear { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidViscosityRule(c))
            }
            ViscosityRule::Power { beta } if !(beta > 0.0 && beta.is_finite()) => {
                Err(Error::InvalidViscosityRule(beta))
            }
            _ => Ok(()),
        }
    }

    pub fn viscosity(&self, h: f64) -> f64 {
        match *self {
            ViscosityRule::Linear { c } => c * h,
            ViscosityRule::Power { beta } => h.powf(beta),
        }
    }
}

impl Default for ViscosityRule {
    fn default() -> Self {
        ViscosityRule::Linear { c: 1.0 }
    }
}

/// Scheme selection together with the grid it runs on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    grid: GridSpec,
    viscosity: Option<f64>,
}

impl SchemeConfig {
    pub fn conservative(grid: GridSpec) -> Self {
        Self {
            grid,
            viscosity: None,
        }
    }

    pub fn viscous(grid: GridSpec, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidViscosity(a));
        }
        Ok(Self {
            grid,
            viscosity: Some(a),
        })
    }

    pub fn with_rule(grid: GridSpec, rule: ViscosityRule) -> Result<Self> {
        rule.validate()?;
        Self::viscous(grid, rule.viscosity(grid.h()))
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn kind(&self) -> SchemeKind {
        match self.viscosity {
            None => SchemeKind::Conservative,
            Some(_) => SchemeKind::Viscous,
        }
    }

    /// `a(h)`, zero for the conservative scheme.
    pub fn viscosity(&self) -> f64 {
        self.viscosity.unwrap_or(0.0)
    }

    /// `a(h) / h` for the viscous scheme.
    pub fn viscosity_over_h(&self) -> Option<f64> {
        self.viscosity.map(|a| a / self.grid.h())
    }

    /// The factor multiplying `-t p_h(k)` in the mode exponent: `a + i`.
    pub fn rate(&self) -> Complex64 {
        Complex64::new(self.viscosity(), 1.0)
    }

    fn check_grid(&self, grid: GridSpec) -> Result<()> {
        if grid == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                data: grid.n(),
                scheme: self.grid.n(),
            })
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Multiplier `exp(-(i + a) t p)` for a mode with symbol `p`.
pub(crate) fn mode_factor(a: f64, t: f64, p: f64) -> Complex64 {
    Complex64::from_polar((-a * t * p).exp(), -t * p)
}

/// Exact Fourier-side evolution to time `t`.
pub fn propagate(u0: &SpectralVector, t: f64, config: &SchemeConfig) -> Result<SpectralVector> {
    check_time(t)?;
    config.check_grid(u0.grid())?;
    let grid = config.grid;
    let a = config.viscosity();
    let mut out = u0.clone();
    for (k, c) in grid.modes().zip(out.coeffs_mut()) {
        *c *= mode_factor(a, t, grid.symbol(k));
    }
    Ok(out)
}

/// Node values of the exact solution at time `t`.
pub fn solution_at_nodes(u0: &SpectralVector, t: f64, config: &SchemeConfig) -> Result<GridVector> {
    Ok(idft(&propagate(u0, t, config)?))
}

/// Solution state at a given time, recomputed from the initial data on every
/// advance so no phase error accumulates.
#[derive(Debug, Clone)]
pub struct EvolutionState {
    config: SchemeConfig,
    initial: SpectralVector,
    time: f64,
    coeffs: SpectralVector,
}

impl EvolutionState {
    pub fn new(u0: SpectralVector, config: SchemeConfig) -> Result<Self> {
        config.check_grid(u0.grid())?;
        Ok(Self {
            config,
            coeffs: u0.clone(),
            initial: u0,
            time: 0.0,
        })
    }

    pub fn advance(&mut self, dt: f64) -> Result<()> {
        check_time(dt)?;
        self.advance_to(self.time + dt)
    }

    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        self.coeffs = propagate(&self.initial, t, &self.config)?;
        self.time = t;
        Ok(())
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn coeffs(&self) -> &SpectralVector {
        &self.coeffs
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn nodes(&self) -> GridVector {
        idft(&self.coeffs)
    }
}

/// `(Δ_h v)_j = (v_{j+1} - 2 v_j + v_{j-1}) / h^2` with periodic wraparound.
pub fn apply_laplacian(v: &GridVector) -> GridVector {
    let grid = v.grid();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    GridVector::from_fn(grid, |j| {
        let j = j as i64;
        (v.periodic(j + 1) - 2.0 * v.periodic(j) + v.periodic(j - 1)) * inv_h2
    })
}

/// `0.1 h^2 / 4`, well inside the RK4 stability region.
pub fn default_time_step(grid: GridSpec) -> f64 {
    0.1 * grid.h() * grid.h() / 4.0
}

/// Classical RK4 on `u' = (i + a) Δ_h u` from `0` to `t_end` in node space.
///
/// The step is shrunk so an integer number of steps lands exactly on
/// `t_end`. Requires `dt * 4 / h^2 <= 0.5`.
pub fn ode_integrate(
    u0: &GridVector,
    t_end: f64,
    dt: f64,
    config: &SchemeConfig,
) -> Result<GridVector> {
    check_time(t_end)?;
    config.check_grid(u0.grid())?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveStep(dt));
    }
    let grid = config.grid;
    let h = grid.h();
    let ratio = dt * 4.0 / (h * h);
    if ratio > 0.5 {
        return Err(Error::UnstableStep { dt, ratio });
    }
    let steps = {
        let exact = t_end / dt;
        let nearest = exact.round();
        if (exact - nearest).abs() <= 1e-9 * exact.max(1.0) {
            nearest as usize
        } else {
            exact.ceil() as usize
        }
    };
    if steps == 0 {
        return Ok(u0.clone());
    }
    let step = t_end / steps as f64;
    let rate = config.rate() / (h * h);
    let m = grid.nodes();

    let rhs = |u: &[Complex64], out: &mut [Complex64]| {
        for j in 0..m {
            let left = u[(j + m - 1) % m];
            let right = u[(j + 1) % m];
            out[j] = rate * (right - 2.0 * u[j] + left);
        }
    };

    let mut u = u0.values().to_vec();
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![zero; m], vec![zero; m], vec![zero; m], vec![zero; m]);
    let mut tmp = vec![zero; m];
    for _ in 0..steps {
        rhs(&u, &mut k1);
        for j in 0..m {
            tmp[j] = u[j] + 0.5 * step * k1[j];
        }
        rhs(&tmp, &mut k2);
        for j in 0..m {
            tmp[j] = u[j] + 0.5 * step * k2[j];
        }
        rhs(&tmp, &mut k3);
        for j in 0..m {
            tmp[j] = u[j] + step * k3[j];
        }
        rhs(&tmp, &mut k4);
        for j in 0..m {
            u[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    GridVector::new(grid, u)
}

/// Low modes `|k| <= N/8`.
pub fn default_cutoff(grid: GridSpec) -> i64 {
    grid.n() as i64 / 8
}

/// Splits `u` into modes `|k| <= cutoff` and `|k| > cutoff`; the two parts sum
/// back to `u` exactly.
pub fn split_low_high(u: &SpectralVector, cutoff: i64) -> Result<(SpectralVector, SpectralVector)> {
    let grid = u.grid();
    if cutoff < 0 || cutoff > grid.half() {
        return Err(Error::CutoffOutOfRange {
            cutoff,
            half: grid.half(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let low = SpectralVector::from_fn(grid, |k| {
        if k.abs() <= cutoff {
            u.coeffs()[grid.slot(k)]
        } else {
            zero
        }
    });
    let high = SpectralVector::from_fn(grid, |k| {
        if k.abs() > cutoff {
            u.coeffs()[grid.slot(k)]
        } else {
            zero
        }
    });
    Ok((low, high))
}
