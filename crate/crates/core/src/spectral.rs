//! Periodic grid, discrete Fourier pair, discrete norms and dispersion symbols.
//!
//! The grid has `N + 1` nodes `x_j = j h` with `h = 1 / (N + 1)` and `N` even.
//! Fourier coefficients are indexed by signed modes `k = -N/2 ..= N/2`:
//!
//! ```text
//! v^(k) = h * sum_j v_j exp(-2 pi i k j h),     v_j = sum_k v^(k) exp(2 pi i k j h)
//! ```
//!
//! Because `N + 1` is odd the two endpoint modes `±N/2` are distinct residues
//! modulo `N + 1`, so the `N + 1` exponentials form an orthogonal basis.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid with `N + 1` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    /// Builds the grid for an even mode count `N >= 2`.
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidModeCount(n));
        }
        Ok(Self { n: n as usize })
    }

    /// The mode count `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    /// Mesh size `1 / (N + 1)`.
    pub fn h(&self) -> f64 {
        1.0 / self.nodes() as f64
    }

    /// Largest mode index `N / 2`.
    pub fn half(&self) -> i64 {
        (self.n / 2) as i64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h()
    }

    pub fn modes(&self) -> RangeInclusive<i64> {
        -self.half()..=self.half()
    }

    pub fn contains(&self, k: i64) -> bool {
        k.abs() <= self.half()
    }

    pub fn check_mode(&self, k: i64) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: k,
                half: self.half(),
            })
        }
    }

    /// Storage slot of mode `k` (offset by `N / 2`).
    pub fn slot(&self, k: i64) -> usize {
        debug_assert!(self.contains(k));
        (k + self.half()) as usize
    }

    /// Representative of `k` modulo `N + 1` inside `[-N/2, N/2]`.
    pub fn wrap(&self, k: i64) -> i64 {
        let m = self.nodes() as i64;
        (k + self.half()).rem_euclid(m) - self.half()
    }

    /// `p_h(n) = 4 (N+1)^2 sin^2(n pi / (N+1))`, defined for every integer
    /// (it has period `N + 1`). Use [`symbol_p`] for the range-checked form.
    pub fn symbol(&self, n: i64) -> f64 {
        let m = self.nodes() as f64;
        let s = (n as f64 * PI / m).sin();
        4.0 * m * m * s * s
    }

    /// `p_h` for every mode, in slot order.
    pub fn symbol_table(&self) -> Vec<f64> {
        self.modes().map(|k| self.symbol(k)).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.nodes() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.nodes(),
                got: len,
            })
        }
    }
}

/// Complex values at the grid nodes `j = 0 ..= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridVector {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl GridVector {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.nodes()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            grid,
            values: (0..grid.nodes()).map(f).collect(),
        }
    }

    /// The grid exponential `phi_k` with entries `exp(2 pi i k j h)`.
    pub fn plane_wave(grid: GridSpec, k: i64) -> Result<Self> {
        grid.check_mode(k)?;
        let m = grid.nodes() as i64;
        Ok(Self::from_fn(grid, |j| {
            let phase = (k * j as i64).rem_euclid(m) as f64 / m as f64;
            Complex64::from_polar(1.0, 2.0 * PI * phase)
        }))
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at node `j` with periodic wraparound (`-1 -> N`, `N + 1 -> 0`).
    pub fn periodic(&self, j: i64) -> Complex64 {
        self.values[j.rem_euclid(self.grid.nodes() as i64) as usize]
    }
}

/// Fourier coefficients for modes `-N/2 ..= N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralVector {
    /// Wraps coefficients given in slot order (mode `-N/2` first).
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.check_len(coeffs.len())?;
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.nodes()],
        }
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(i64) -> Complex64) -> Self {
        Self {
            grid,
            coeffs: grid.modes().map(&mut f).collect(),
        }
    }

    pub fn single_mode(grid: GridSpec, k: i64, value: Complex64) -> Result<Self> {
        let mut s = Self::zeros(grid);
        s.set(k, value)?;
        Ok(s)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Coefficients in slot order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, k: i64) -> Result<Complex64> {
        self.grid.check_mode(k)?;
        Ok(self.coeffs[self.grid.slot(k)])
    }

    pub fn set(&mut self, k: i64, value: Complex64) -> Result<()> {
        self.grid.check_mode(k)?;
        let slot = self.grid.slot(k);
        self.coeffs[slot] = value;
        Ok(())
    }

    /// `(k, coefficient)` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.grid.modes().zip(self.coeffs.iter().copied())
    }

    /// Modes carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(k, _)| k)
            .collect()
    }

    /// `sum_k |c_k|^2`, equal to the squared `L^2(T_h)` norm by Parseval.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

/// Forward transform `v^(k) = h sum_j v_j exp(-2 pi i k j h)`.
pub fn dft(v: &GridVector) -> SpectralVector {
    let grid = v.grid;
    let m = grid.nodes();
    let mut buf = v.values.clone();
    plan(m, true).process(&mut buf);
    let h = grid.h();
    let coeffs = grid
        .modes()
        .map(|k| buf[k.rem_euclid(m as i64) as usize] * h)
        .collect();
    SpectralVector { grid, coeffs }
}

/// Inverse transform `v_j = sum_k v^(k) exp(2 pi i k j h)`.
pub fn idft(s: &SpectralVector) -> GridVector {
    let grid = s.grid;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.nodes()];
    idft_into(s, &mut values);
    GridVector { grid, values }
}

/// [`idft`] into a caller-owned buffer of length `N + 1`.
pub fn idft_into(s: &SpectralVector, out: &mut [Complex64]) {
    let grid = s.grid;
    let m = grid.nodes();
    assert_eq!(out.len(), m, "output buffer length");
    for (k, c) in s.iter() {
        out[k.rem_euclid(m as i64) as usize] = c;
    }
    plan(m, false).process(out);
}

/// Direct `O(N^2)` summation of the transform pair, kept as the reference
/// against which the fast path is checked.
pub mod reference {
    use super::*;

    fn twiddles(m: usize, sign: f64) -> Vec<Complex64> {
        (0..m)
            .map(|r| Complex64::from_polar(1.0, sign * 2.0 * PI * r as f64 / m as f64))
            .collect()
    }

    pub fn dft_direct(v: &GridVector) -> SpectralVector {
        let grid = v.grid;
        let m = grid.nodes();
        let w = twiddles(m, -1.0);
        let coeffs = grid
            .modes()
            .map(|k| {
                let sum: Complex64 = v
                    .values
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x * w[(k * j as i64).rem_euclid(m as i64) as usize])
                    .sum();
                sum * grid.h()
            })
            .collect();
        SpectralVector { grid, coeffs }
    }

    pub fn idft_direct(s: &SpectralVector) -> GridVector {
        let grid = s.grid;
        let m = grid.nodes();
        let w = twiddles(m, 1.0);
        GridVector::from_fn(grid, |j| {
            s.iter()
                .map(|(k, c)| c * w[(k * j as i64).rem_euclid(m as i64) as usize])
                .sum()
        })
    }
}

/// Discrete norm `(h sum_j |v_j|^p)^(1/p)`; `p = inf` gives the max modulus.
pub fn lp_norm(v: &GridVector, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let h = v.grid.h();
    let norm = if p.is_infinite() {
        v.values.iter().map(|x| x.norm()).fold(0.0, f64::max)
    } else if p == 2.0 {
        (h * v.values.iter().map(|x| x.norm_sqr()).sum::<f64>()).sqrt()
    } else if p == 4.0 {
        l4_fourth_power(&v.values, h).sqrt().sqrt()
    } else {
        (h * v.values.iter().map(|x| x.norm().powf(p)).sum::<f64>()).powf(1.0 / p)
    };
    Ok(norm)
}

/// `h sum_j |v_j|^4`.
pub(crate) fn l4_fourth_power(values: &[Complex64], h: f64) -> f64 {
    h * values
        .iter()
        .map(|x| {
            let s = x.norm_sqr();
            s * s
        })
        .sum::<f64>()
}

/// Range-checked dispersion symbol `p_h(n)`.
pub fn symbol_p(grid: GridSpec, n: i64) -> Result<f64> {
    grid.check_mode(n)?;
    Ok(grid.symbol(n))
}

/// Mode quadruple `(n1, n2, n3, n4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadruple(pub [i64; 4]);

impl Quadruple {
    pub fn new(n1: i64, n2: i64, n3: i64, n4: i64) -> Self {
        Self([n1, n2, n3, n4])
    }

    /// `n1 + n2 == n3 + n4`.
    pub fn is_resonant(&self) -> bool {
        let [a, b, c, d] = self.0;
        a + b == c + d
    }

    /// `(n3, n4, n1, n2)`.
    pub fn swap_halves(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([c, d, a, b])
    }

    fn check(&self, grid: GridSpec) -> Result<()> {
        self.0.iter().try_for_each(|&k| grid.check_mode(k))
    }
}

/// `q_h(n) = p_h(n1) + p_h(n2) - p_h(n3) - p_h(n4)`.
pub fn q_h(grid: GridSpec, q: Quadruple) -> Result<f64> {
    q.check(grid)?;
    let [a, b, c, d] = q.0;
    Ok(grid.symbol(a) + grid.symbol(b) - grid.symbol(c) - grid.symbol(d))
}

/// Product form of `q_h` valid on resonant quadruples:
/// `8 (N+1)^2 cos(s pi/(N+1)) sin((n1-n2+n3-n4) pi/(2(N+1))) sin((n1-n2-n3+n4) pi/(2(N+1)))`
/// with `s = n1 + n2`.
pub fn q_h_factored(grid: GridSpec, q: Quadruple) -> Result<f64> {
    q.check(grid)?;
    let [a, b, c, d] = q.0;
    if !q.is_resonant() {
        return Err(Error::NonResonant(a, b, c, d));
    }
    let m = grid.nodes() as f64;
    let x = PI / m;
    Ok(8.0
        * m
        * m
        * ((a + b) as f64 * x).cos()
        * ((a - b + c - d) as f64 * x / 2.0).sin()
        * ((a - b - c + d) as f64 * x / 2.0).sin())
}

/// `sigma_h(n) = p_h(n1) + p_h(n2) + p_h(n3) + p_h(n4)`.
pub fn sigma_h(grid: GridSpec, q: Quadruple) -> Result<f64> {
    q.check(grid)?;
    Ok(q.0.iter().map(|&k| grid.symbol(k)).sum())
}

/// The exponent sequence `mu_h(n) = -p_h(n) - p_h(r - n)` on `n = lo ..= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSequence {
    pub r: i64,
    pub lo: i64,
    /// `mu_h(lo), ..., mu_h(hi)`.
    pub values: Vec<f64>,
    /// `mu_h(n + 1) - mu_h(n)` for `n = lo .. hi`.
    pub diffs: Vec<f64>,
}

impl MuSequence {
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn value(&self, n: i64) -> Option<f64> {
        usize::try_from(n - self.lo)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    /// `mu_h(n + 1) - mu_h(n)`, if both ends are in the sequence.
    pub fn diff(&self, n: i64) -> Option<f64> {
        usize::try_from(n - self.lo)
            .ok()
            .and_then(|i| self.diffs.get(i).copied())
    }
}

pub fn mu_gap_seq(grid: GridSpec, r: i64, lo: i64, hi: i64) -> Result<MuSequence> {
    if hi < lo {
        return Err(Error::ModeOutOfRange {
            index: hi,
            half: grid.half(),
        });
    }
    for n in [lo, hi] {
        grid.check_mode(n)?;
        grid.check_mode(r - n)?;
    }
    let values: Vec<f64> = (lo..=hi)
        .map(|n| -grid.symbol(n) - grid.symbol(r - n))
        .collect();
    let diffs = values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(MuSequence {
        r,
        lo,
        values,
        diffs,
    })
}

/// Closed form of `mu_h(n + 1) - mu_h(n)`:
/// `8 (N+1)^2 cos(pi r/(N+1)) sin(pi (r - 2n - 1)/(N+1)) sin(pi/(N+1))`.
pub fn mu_gap_difference(grid: GridSpec, r: i64, n: i64) -> f64 {
    let m = grid.nodes() as f64;
    let x = PI / m;
    8.0 * m * m * (r as f64 * x).cos() * ((r - 2 * n - 1) as f64 * x).sin() * x.sin()
}

/// `mu_h(n, m) = q_h(n, r - n, m, r - m)` in product form,
/// `8 (N+1)^2 cos(r pi/(N+1)) sin((n + m - r) pi/(N+1)) sin((n - m) pi/(N+1))`.
pub fn mu_pair(grid: GridSpec, r: i64, n: i64, m: i64) -> Result<f64> {
    for k in [n, r - n, m, r - m] {
        grid.check_mode(k)?;
    }
    let size = grid.nodes() as f64;
    let x = PI / size;
    Ok(8.0
        * size
        * size
        * (r as f64 * x).cos()
        * ((n + m - r) as f64 * x).sin()
        * ((n - m) as f64 * x).sin())
}

/// Which quadruples count as resonant in a fourth-power expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    /// `n1 + n2 = n3 + n4` as integers.
    Exact,
    /// `n1 + n2 = n3 + n4` modulo `N + 1`: the condition the node sum
    /// actually imposes, since `phi_k` and `phi_{k + N + 1}` coincide on the grid.
    Aliased,
}

/// `sum a(n1) a(n2) conj(a(n3)) conj(a(n4))` over resonant quadruples,
/// by direct `O(N^3)` enumeration.
///
/// With [`Resonance::Aliased`] the real part equals `||idft(a)||_{L^4}^4` for
/// every `a`. With [`Resonance::Exact`] it does so only when no pair sum can
/// wrap, e.g. when `a` is supported in `|k| <= N/4`.
pub fn resonant_quadruple_sum(a: &SpectralVector, resonance: Resonance) -> Complex64 {
    let grid = a.grid;
    let support: Vec<(i64, Complex64)> = a.iter().filter(|(_, c)| c.norm_sqr() > 0.0).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(n1, c1) in &support {
        for &(n2, c2) in &support {
            let pair = c1 * c2;
            for &(n3, c3) in &support {
                let raw = n1 + n2 - n3;
                let n4 = match resonance {
                    Resonance::Exact => raw,
                    Resonance::Aliased => grid.wrap(raw),
                };
                if !grid.contains(n4) {
                    continue;
                }
                let c4 = a.coeffs[grid.slot(n4)];
                total += pair * c3.conj() * c4.conj();
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pseudo_random(grid: GridSpec, seed: u64) -> GridVector {
        // splitmix-style scramble; enough for unit tests
        let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut next = move || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        GridVector::from_fn(grid, |_| c(next(), next()))
    }

    #[test]
    fn grid_mesh() {
        assert_eq!(GridSpec::new(2).unwrap().h(), 1.0 / 3.0);
        assert_eq!(GridSpec::new(500).unwrap().h(), 1.0 / 501.0);
        assert_eq!(GridSpec::new(2).unwrap().nodes(), 3);
    }

    #[test]
    fn grid_rejects_odd_and_small() {
        assert_eq!(GridSpec::new(3), Err(Error::InvalidModeCount(3)));
        assert!(GridSpec::new(0).is_err());
        assert!(GridSpec::new(-4).is_err());
    }

    #[test]
    fn wrap_and_slots() {
        let g = GridSpec::new(8).unwrap();
        assert_eq!(g.slot(-4), 0);
        assert_eq!(g.slot(4), 8);
        assert_eq!(g.wrap(5), -4);
        assert_eq!(g.wrap(-5), 4);
        assert_eq!(g.wrap(9), 0);
        assert_eq!(g.wrap(3), 3);
    }

    #[test]
    fn periodic_access() {
        let g = GridSpec::new(4).unwrap();
        let v = GridVector::from_fn(g, |j| c(j as f64, 0.0));
        assert_eq!(v.periodic(-1), c(4.0, 0.0));
        assert_eq!(v.periodic(5), c(0.0, 0.0));
    }

    #[test]
    fn dft_of_constant_is_delta() {
        let g = GridSpec::new(10).unwrap();
        let s = dft(&GridVector::from_fn(g, |_| c(1.0, 0.0)));
        for (k, v) in s.iter() {
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert!((v - c(expect, 0.0)).norm() < 1e-14, "k={k} v={v}");
        }
    }

    #[test]
    fn dft_of_plane_wave_is_unit_coefficient() {
        let g = GridSpec::new(12).unwrap();
        for k0 in g.modes() {
            let s = dft(&GridVector::plane_wave(g, k0).unwrap());
            for (k, v) in s.iter() {
                let expect = if k == k0 { 1.0 } else { 0.0 };
                assert!((v - c(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn dft_matches_direct_sum() {
        let g = GridSpec::new(16).unwrap();
        let v = pseudo_random(g, 7);
        let fast = dft(&v);
        let slow = reference::dft_direct(&v);
        let scale = slow.energy().sqrt();
        for (a, b) in fast.coeffs().iter().zip(slow.coeffs()) {
            assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn idft_examples() {
        let g = GridSpec::new(6).unwrap();
        let ones = idft(&SpectralVector::single_mode(g, 0, c(1.0, 0.0)).unwrap());
        assert!(ones
            .values()
            .iter()
            .all(|v| (v - c(1.0, 0.0)).norm() < 1e-14));
        let zero = idft(&SpectralVector::zeros(g));
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn round_trip_n64() {
        let g = GridSpec::new(64).unwrap();
        let v = pseudo_random(g, 3);
        let back = idft(&dft(&v));
        let err: f64 = back
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let norm: f64 = v.values().iter().map(|x| x.norm_sqr()).sum();
        assert!((err / norm).sqrt() < 1e-12);
    }

    #[test]
    fn endpoint_modes_are_orthogonal() {
        for n in [2, 4, 10, 32, 100] {
            let g = GridSpec::new(n).unwrap();
            let a = GridVector::plane_wave(g, g.half()).unwrap();
            let b = GridVector::plane_wave(g, -g.half()).unwrap();
            let inner: Complex64 = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| x * y.conj())
                .sum::<Complex64>()
                * g.h();
            assert!(inner.norm() < 1e-12, "N={n} inner={inner}");
        }
    }

    #[test]
    fn lp_norm_examples() {
        for n in [2, 8, 50] {
            let g = GridSpec::new(n).unwrap();
            let ones = GridVector::from_fn(g, |_| c(1.0, 0.0));
            assert!((lp_norm(&ones, 2.0).unwrap() - 1.0).abs() < 1e-14);
            assert!((lp_norm(&ones, 4.0).unwrap() - 1.0).abs() < 1e-14);
            assert!((lp_norm(&ones, 3.0).unwrap() - 1.0).abs() < 1e-14);
            assert_eq!(lp_norm(&ones, f64::INFINITY).unwrap(), 1.0);
        }
        let g = GridSpec::new(4).unwrap();
        assert_eq!(
            lp_norm(&GridVector::zeros(g), 0.5),
            Err(Error::InvalidExponent(0.5))
        );
    }

    #[test]
    fn lp_norm_direct_sum() {
        let g = GridSpec::new(16).unwrap();
        let v = pseudo_random(g, 11);
        let mut oracle = 0.0;
        for x in v.values() {
            oracle += x.norm().powi(4) / 17.0;
        }
        let got = lp_norm(&v, 4.0).unwrap();
        assert!((got - oracle.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn symbol_values() {
        let g = GridSpec::new(2).unwrap();
        assert_eq!(symbol_p(g, 0).unwrap(), 0.0);
        assert!((symbol_p(g, 1).unwrap() - 27.0).abs() < 1e-12);
        assert!(symbol_p(g, 2).is_err());
        let g = GridSpec::new(40).unwrap();
        for n in g.modes() {
            assert_eq!(symbol_p(g, n).unwrap(), symbol_p(g, -n).unwrap());
            let p = symbol_p(g, n).unwrap();
            assert!((0.0..=4.0 * 41.0 * 41.0).contains(&p));
            assert_eq!(p == 0.0, n == 0);
        }
    }

    #[test]
    fn symbol_changes_convexity_near_quarter() {
        for n in [16, 32, 64, 200] {
            let g = GridSpec::new(n).unwrap();
            let second = |k: i64| g.symbol(k + 1) - 2.0 * g.symbol(k) + g.symbol(k - 1);
            let quarter = (n + 1) as f64 / 4.0;
            let below = quarter.floor() as i64 - 1;
            let above = quarter.ceil() as i64 + 1;
            assert!(second(below) > 0.0, "N={n}");
            assert!(second(above) < 0.0, "N={n}");
            // and no other sign change on [1, N/2 - 1]
            let changes = (1..g.half() - 1)
                .filter(|&k| second(k).signum() != second(k + 1).signum())
                .count();
            assert_eq!(changes, 1, "N={n}");
        }
    }

    #[test]
    fn q_h_examples() {
        let g = GridSpec::new(20).unwrap();
        assert!(q_h(g, Quadruple::new(3, -2, 3, -2)).unwrap().abs() < 1e-12);
        let q = Quadruple::new(1, 7, -3, 2);
        let (a, b) = (q_h(g, q).unwrap(), q_h(g, q.swap_halves()).unwrap());
        assert!((a + b).abs() < 1e-12 * a.abs());
        assert!(q_h(g, Quadruple::new(11, 0, 0, 0)).is_err());
    }

    #[test]
    fn q_h_factored_exhaustive_n16() {
        let g = GridSpec::new(16).unwrap();
        let scale = 16.0 * 17.0 * 17.0;
        let mut checked = 0;
        for a in g.modes() {
            for b in g.modes() {
                for c in g.modes() {
                    let d = a + b - c;
                    if !g.contains(d) {
                        continue;
                    }
                    let q = Quadruple::new(a, b, c, d);
                    let direct = q_h(g, q).unwrap();
                    let fact = q_h_factored(g, q).unwrap();
                    let tol = 1e-9 * direct.abs().max(fact.abs()) + 1e-14 * scale;
                    assert!((direct - fact).abs() <= tol, "{q:?}: {direct} vs {fact}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 3000);
    }

    #[test]
    fn q_h_factored_rejects_non_resonant() {
        let g = GridSpec::new(8).unwrap();
        assert_eq!(
            q_h_factored(g, Quadruple::new(1, 1, 1, 0)),
            Err(Error::NonResonant(1, 1, 1, 0))
        );
    }

    #[test]
    fn sigma_examples() {
        let g = GridSpec::new(2).unwrap();
        assert_eq!(sigma_h(g, Quadruple::new(0, 0, 0, 0)).unwrap(), 0.0);
        assert!((sigma_h(g, Quadruple::new(1, 1, 1, 1)).unwrap() - 108.0).abs() < 1e-11);
    }

    #[test]
    fn sigma_lower_bound_on_high_modes_n32() {
        let n = 32i64;
        let g = GridSpec::new(n).unwrap();
        let m = (n + 1) as f64;
        let bound = 16.0 * m * m * (n as f64 * PI / (8.0 * m)).sin().powi(2);
        let high: Vec<i64> = g.modes().filter(|k| k.abs() > n / 8).collect();
        let mut min = f64::INFINITY;
        for &a in &high {
            for &b in &high {
                for &c in &high {
                    for &d in &high {
                        min = min.min(sigma_h(g, Quadruple::new(a, b, c, d)).unwrap());
                    }
                }
            }
        }
        assert!(min >= bound * (1.0 - 1e-12), "min {min} bound {bound}");
    }

    #[test]
    fn mu_sequence_symmetric_at_r0() {
        let g = GridSpec::new(30).unwrap();
        let s = mu_gap_seq(g, 0, -15, 15).unwrap();
        for n in 0..=15 {
            assert_eq!(s.value(n), s.value(-n));
            assert_eq!(s.value(n).unwrap(), -2.0 * g.symbol(n));
        }
    }

    #[test]
    fn mu_sequence_differences_match_closed_form() {
        let g = GridSpec::new(64).unwrap();
        for r in [-20, -3, 0, 5, 17, 30] {
            let lo = (r - 32).max(-32);
            let hi = (r + 32).min(32);
            let s = mu_gap_seq(g, r, lo, hi).unwrap();
            for n in lo..hi {
                let closed = mu_gap_difference(g, r, n);
                let direct = s.diff(n).unwrap();
                let tol = 1e-9 * closed.abs().max(direct.abs()) + 1e-15 * 65.0 * 65.0 * 16.0;
                assert!((closed - direct).abs() <= tol, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn mu_sequence_rejects_out_of_range() {
        let g = GridSpec::new(16).unwrap();
        assert!(mu_gap_seq(g, 10, -8, 8).is_err());
        assert!(mu_gap_seq(g, 0, 3, 2).is_err());
    }

    #[test]
    fn mu_pair_examples() {
        let g = GridSpec::new(64).unwrap();
        let r = 8;
        assert_eq!(mu_pair(g, r, 3, 3).unwrap(), 0.0);
        assert_eq!(mu_pair(g, r, 3, 5).unwrap(), 0.0);
        for n in (r - 32)..=32 {
            for m in (r - 32)..=32 {
                let closed = mu_pair(g, r, n, m).unwrap();
                let direct = q_h(g, Quadruple::new(n, r - n, m, r - m)).unwrap();
                let tol = 1e-9 * closed.abs().max(direct.abs()) + 1e-14 * 65.0 * 65.0 * 16.0;
                assert!(
                    (closed - direct).abs() <= tol,
                    "n={n} m={m}: {closed} vs {direct}"
                );
            }
        }
        assert!(mu_pair(g, r, -30, 0).is_err());
    }

    #[test]
    fn resonant_sum_matches_node_fourth_power() {
        for n in [2, 8, 16, 32] {
            let g = GridSpec::new(n).unwrap();
            let v = pseudo_random(g, n as u64);
            let a = dft(&v);
            let direct = l4_fourth_power(v.values(), g.h());
            let sum = resonant_quadruple_sum(&a, Resonance::Aliased);
            assert!((sum.re - direct).abs() <= 1e-10 * direct, "N={n}");
            assert!(sum.im.abs() <= 1e-10 * sum.norm());
        }
    }

    #[test]
    fn exact_resonance_needs_band_limited_data() {
        let g = GridSpec::new(24).unwrap();
        let a = SpectralVector::from_fn(g, |k| {
            if k.abs() <= 6 {
                c(1.0 + k as f64 * 0.1, 0.3 * k as f64)
            } else {
                c(0.0, 0.0)
            }
        });
        let direct = l4_fourth_power(idft(&a).values(), g.h());
        let exact = resonant_quadruple_sum(&a, Resonance::Exact);
        assert!((exact.re - direct).abs() <= 1e-10 * direct);

        // Full-spectrum data picks up wrapped pair sums.
        let full = dft(&pseudo_random(g, 5));
        let direct = l4_fourth_power(idft(&full).values(), g.h());
        let exact = resonant_quadruple_sum(&full, Resonance::Exact);
        assert!((exact.re - direct).abs() > 1e-6 * direct);
    }
}
