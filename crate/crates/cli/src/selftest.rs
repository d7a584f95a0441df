//! Reduced oracle and inequality suite for a quick installation check.

use schrodinger_lab::experiments::{
    filter_cutoff, gap_report, gaussian_data, pair_bound_report, Check, Spectrum, PAIR_BOUND_FLOOR,
};
use schrodinger_lab::norms::{l4_mixed_analytic, l4_mixed_quadrature, QuadratureRule};
use schrodinger_lab::schemes::{ode_integrate, propagate, solution_at_nodes, SchemeConfig};
use schrodinger_lab::spectral::{dft, idft, lp_norm, resonant_quadruple_sum, GridSpec, Resonance};
use schrodinger_lab::Complex64;

use crate::args::SelftestArgs;
use crate::error::CliError;
use crate::output::{ensure_dir, write_csv, Summary};

fn schemes(grid: GridSpec) -> Result<[SchemeConfig; 2], CliError> {
    Ok([
        SchemeConfig::conservative(grid),
        SchemeConfig::viscous(grid, grid.h())?,
    ])
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn oracle(args: &SelftestArgs) -> Result<Check, CliError> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [8i64, 16, 32] {
        let grid = GridSpec::new(n)?;
        for trial in 0..args.trials {
            let u0 = gaussian_data(grid, Spectrum::Full, args.seed, trial);
            for cfg in schemes(grid)? {
                for t in [0.1, 1.0] {
                    let a = l4_mixed_analytic(&u0, t, &cfg)?.value;
                    let q = l4_mixed_quadrature(&u0, t, &cfg, QuadratureRule::default())?.value;
                    worst = worst.max((a - q).abs() / q);
                    cases += 1;
                }
            }
        }
    }
    Ok(Check::new(
        "analytic_vs_quadrature",
        worst <= args.oracle,
        format!("{cases} cases, max relative difference {worst:.3e}"),
    ))
}

fn ode() -> Result<Check, CliError> {
    let grid = GridSpec::new(32)?;
    let u0 = gaussian_data(grid, Spectrum::Full, 0, 0);
    let mut worst = 0.0f64;
    for cfg in schemes(grid)? {
        let exact = solution_at_nodes(&u0, 0.01, &cfg)?;
        let rk = ode_integrate(&idft(&u0), 0.01, 1e-6, &cfg)?;
        worst = worst.max(max_diff(exact.values(), rk.values()));
    }
    Ok(Check::new(
        "propagator_vs_ode",
        worst <= 1e-6,
        format!("sup-node discrepancy {worst:.3e}"),
    ))
}

fn conservation() -> Result<Check, CliError> {
    let mut worst = 0.0f64;
    for n in [8i64, 64, 512] {
        let grid = GridSpec::new(n)?;
        let u0 = gaussian_data(grid, Spectrum::Full, 0, 1);
        let nodes = idft(&u0);
        worst = worst.max(max_diff(u0.coeffs(), dft(&nodes).coeffs()));
        worst = worst.max((lp_norm(&nodes, 2.0)?.powi(2) - u0.energy()).abs());
        let cfg = SchemeConfig::conservative(grid);
        for t in [0.1, 1.0, 10.0] {
            worst = worst.max((propagate(&u0, t, &cfg)?.energy() - u0.energy()).abs());
        }
    }
    Ok(Check::new(
        "parseval_and_conservation",
        worst <= 1e-12,
        format!("max deviation {worst:.3e}"),
    ))
}

fn identity() -> Result<Check, CliError> {
    let mut worst = 0.0f64;
    for n in (1..=16).map(|k| 2 * k) {
        let grid = GridSpec::new(n)?;
        let u = gaussian_data(grid, Spectrum::Full, 0, 2);
        let fourth = lp_norm(&idft(&u), 4.0)?.powi(4);
        let sum = resonant_quadruple_sum(&u, Resonance::Aliased);
        worst = worst.max((sum.re - fourth).abs().max(sum.im.abs()) / fourth);
    }
    Ok(Check::new(
        "resonant_identity",
        worst <= 1e-10,
        format!("max relative difference {worst:.3e}"),
    ))
}

fn gaps(args: &SelftestArgs) -> Result<Check, CliError> {
    let mut bad = 0;
    let mut levels = 0;
    for n in [64usize, 128, 256, 512] {
        for r in 0..=2 * filter_cutoff(n, 0.2) {
            let rep = gap_report(n, 0.2, r)?;
            levels += 1;
            if !rep.increasing_side_holds(args.tol.gap) || !rep.decreasing_side_holds(args.tol.gap)
            {
                bad += 1;
            }
        }
    }
    Ok(Check::new(
        "gap_inequality",
        bad == 0,
        format!("{bad} of {levels} levels violate the bound"),
    ))
}

fn pairs(args: &SelftestArgs) -> Result<Check, CliError> {
    let mut min = f64::INFINITY;
    for n in [64usize, 128, 256] {
        for r in 0..=(n as i64 / 4) {
            if let Some(v) = pair_bound_report(n, r)?.min_ratio {
                min = min.min(v);
            }
        }
    }
    Ok(Check::new(
        "pair_bound",
        min >= PAIR_BOUND_FLOOR - args.tol.pair,
        format!("min ratio {min:.6} vs floor {PAIR_BOUND_FLOOR:.6}"),
    ))
}

pub fn selftest(args: &SelftestArgs) -> Result<Summary, CliError> {
    if args.trials == 0 {
        return Err(schrodinger_lab::Error::NoTrials.into());
    }
    if args.oracle.is_nan() || args.oracle <= 0.0 {
        return Err(CliError::Config(format!(
            "--tol-oracle must be positive, got {}",
            args.oracle
        )));
    }
    let checks = vec![
        oracle(args)?,
        ode()?,
        conservation()?,
        identity()?,
        gaps(args)?,
        pairs(args)?,
    ];
    let dir = &args.out.out;
    ensure_dir(dir)?;
    write_csv(
        dir,
        "selftest.csv",
        &["check", "passed", "detail"],
        checks
            .iter()
            .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]),
    )?;
    let mut s = Summary::new("selftest");
    s.set("trials", args.trials)
        .set("seed", args.seed)
        .set("tol.oracle", args.oracle)
        .set("tol.gap", args.tol.gap)
        .set("tol.pair", args.tol.pair);
    s.checks(checks);
    Ok(s)
}
