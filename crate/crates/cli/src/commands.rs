//! One function per subcommand: validate, compute, write files, return the summary.

use std::f64::consts::PI;

use schrodinger_lab::experiments::{
    blowup_initial, build_lambda_set, filter_cutoff, gap_report, gaussian_data, pair_bound_report,
    run_band_filter, run_blowup, run_filter, run_viscous, Check, Spectrum, Thresholds,
    UniformityReport, PAIR_BOUND_FLOOR,
};
use schrodinger_lab::schemes::{solution_at_nodes, SchemeConfig, ViscosityRule};
use schrodinger_lab::spectral::{idft, lp_norm, GridSpec};

use crate::args::{
    BlowupArgs, FilterArgs, GapsArgs, PairboundArgs, SimulateArgs, Tolerances, ViscousArgs,
};
use crate::error::CliError;
use crate::output::{ensure_dir, opt_real, real, write_csv, Summary};

fn echo_tolerances(s: &mut Summary, tol: &Tolerances) {
    let th: Thresholds = tol.thresholds();
    s.set("tol.growth", th.growth)
        .set("tol.spread", th.spread)
        .set("tol.slope_window", th.slope_window)
        .set("tol.blowup_growth", th.blowup_growth)
        .set("tol.mechanism", th.mechanism_spread)
        .set("tol.lower_bound", th.lower_bound_slack)
        .set("tol.gap", th.gap_slack)
        .set("tol.pair", th.pair_slack)
        .set("tol.viscous_contrast", th.viscous_contrast)
        .set("tol.conservative_growth", th.conservative_growth);
}

pub fn blowup(args: &BlowupArgs) -> Result<Summary, CliError> {
    let report = run_blowup(args.alpha, &args.ns, args.t_end)?;
    let dir = &args.out.out;
    ensure_dir(dir)?;
    write_csv(
        dir,
        "blowup.csv",
        &["N", "lambda_size", "l2_initial", "l4_mixed", "ratio"],
        report.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.lambda_size.to_string(),
                real(r.l2_initial),
                real(r.l4_mixed),
                real(r.ratio),
            ]
        }),
    )?;
    let ks = report.mechanism_constants();
    write_csv(
        dir,
        "blowup_mechanism.csv",
        &[
            "N",
            "fourth_power",
            "resonant_count",
            "q_max",
            "lower_bound",
            "mechanism_constant",
        ],
        report.rows.iter().zip(&ks).map(|(r, k)| {
            vec![
                r.n.to_string(),
                real(r.fourth_power),
                r.resonant_count.to_string(),
                real(r.q_max),
                real(r.lower_bound),
                real(*k),
            ]
        }),
    )?;

    let mut s = Summary::new("blowup");
    s.set("alpha", args.alpha)
        .list("N", &args.ns)
        .set("T", args.t_end);
    echo_tolerances(&mut s, &args.tol);
    s.set("predicted_slope", real(report.predicted_slope()));
    if let Some(fit) = report.fit {
        s.set("fit.slope", real(fit.slope))
            .set("fit.intercept", real(fit.intercept))
            .set("fit.residual", real(fit.residual));
    }
    s.checks(report.checks(&args.tol.thresholds()));
    Ok(s)
}

fn write_uniformity(
    report: &UniformityReport,
    name: &'static str,
    dir: &std::path::Path,
) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_csv(
        dir,
        &format!("{name}.csv"),
        &["N", "trial", "ratio"],
        report
            .rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.trial.to_string(), real(r.ratio)]),
    )?;
    write_csv(
        dir,
        &format!("{name}_per_n.csv"),
        &["N", "max_ratio", "mean_ratio"],
        report
            .per_n
            .iter()
            .map(|r| vec![r.n.to_string(), real(r.max_ratio), real(r.mean_ratio)]),
    )?;
    Ok(())
}

fn uniformity_summary(s: &mut Summary, report: &UniformityReport, th: &Thresholds) {
    s.set("scheme", report.scheme)
        .set("parameter", &report.parameter)
        .set("exploratory", report.exploratory);
    if !report.per_n.is_empty() {
        s.set("global_max", real(report.global_max()))
            .set("relative_spread", real(report.relative_spread()))
            .set("growth_over_smallest", real(report.growth_over_smallest()));
    }
    s.checks(report.checks(th));
}

pub fn filter(args: &FilterArgs) -> Result<Summary, CliError> {
    let report = match args.epsilon {
        Some(eps) => run_band_filter(eps, &args.ns, args.t_end, args.trials, args.seed)?,
        None => run_filter(args.lambda, &args.ns, args.t_end, args.trials, args.seed)?,
    };
    write_uniformity(&report, "filter", &args.out.out)?;
    let mut s = Summary::new("filter");
    s.list("N", &args.ns)
        .set("T", args.t_end)
        .set("trials", args.trials)
        .set("seed", args.seed);
    echo_tolerances(&mut s, &args.tol);
    uniformity_summary(&mut s, &report, &args.tol.thresholds());
    Ok(s)
}

pub fn viscous(args: &ViscousArgs) -> Result<Summary, CliError> {
    let rule = match (args.visc_c, args.visc_beta) {
        (_, Some(beta)) => ViscosityRule::Power { beta },
        (Some(c), None) => ViscosityRule::Linear { c },
        (None, None) => ViscosityRule::default(),
    };
    let contrast = args.blowup_data.then_some(args.alpha);
    let report = run_viscous(rule, &args.ns, args.t_end, args.trials, args.seed, contrast)?;
    let dir = &args.out.out;
    write_uniformity(&report, "viscous", dir)?;
    write_csv(
        dir,
        "viscous_blowup.csv",
        &["N", "lambda_size", "conservative_ratio", "viscous_ratio"],
        report.contrast.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.lambda_size.to_string(),
                real(r.conservative_ratio),
                real(r.viscous_ratio),
            ]
        }),
    )?;
    let mut s = Summary::new("viscous");
    s.list("N", &args.ns)
        .set("T", args.t_end)
        .set("trials", args.trials)
        .set("seed", args.seed)
        .set("blowup_data", args.blowup_data)
        .set("alpha", args.alpha);
    echo_tolerances(&mut s, &args.tol);
    uniformity_summary(&mut s, &report, &args.tol.thresholds());
    Ok(s)
}

pub fn gaps(args: &GapsArgs) -> Result<Summary, CliError> {
    let slack = args.tol.gap;
    let dir = &args.out.out;
    let mut s = Summary::new("gaps");
    s.list("N", &args.ns).set("lambda", args.lambda);
    echo_tolerances(&mut s, &args.tol);

    if let Some(r) = args.r {
        let [n] = args.ns[..] else {
            return Err(CliError::Config(format!(
                "--r needs exactly one value of --N, got {}",
                args.ns.len()
            )));
        };
        let rep = gap_report(n, args.lambda, r)?;
        ensure_dir(dir)?;
        let seq = &rep.sequence;
        write_csv(
            dir,
            "gaps.csv",
            &["n", "mu", "diff"],
            (seq.lo..=seq.hi())
                .map(|k| vec![k.to_string(), opt_real(seq.value(k)), opt_real(seq.diff(k))]),
        )?;
        s.set("r", r)
            .set("split", rep.split)
            .set("peak", rep.peak())
            .set("theoretical_gap", real(rep.theoretical))
            .set("min_increasing_gap", opt_real(rep.min_increasing_gap))
            .set("max_decreasing_gap", opt_real(rep.max_decreasing_gap));
        s.checks([
            Check::new(
                "increasing_side",
                rep.increasing_side_holds(slack),
                format!(
                    "min gap {} vs {}",
                    opt_real(rep.min_increasing_gap),
                    real(rep.theoretical)
                ),
            ),
            Check::new(
                "decreasing_side",
                rep.decreasing_side_holds(slack),
                format!(
                    "max gap {} vs -{}",
                    opt_real(rep.max_decreasing_gap),
                    real(rep.theoretical)
                ),
            ),
            Check::new(
                "unimodal",
                rep.is_unimodal(),
                format!("peak at {}", rep.peak()),
            ),
        ]);
        return Ok(s);
    }

    let mut reports = Vec::new();
    for &n in &args.ns {
        for r in 0..=2 * filter_cutoff(n, args.lambda) {
            reports.push(gap_report(n, args.lambda, r)?);
        }
    }
    ensure_dir(dir)?;
    write_csv(
        dir,
        "gaps_sweep.csv",
        &[
            "N",
            "r",
            "min_increasing_gap",
            "max_decreasing_gap",
            "theoretical",
        ],
        reports.iter().map(|rep| {
            vec![
                rep.n.to_string(),
                rep.r.to_string(),
                opt_real(rep.min_increasing_gap),
                opt_real(rep.max_decreasing_gap),
                real(rep.theoretical),
            ]
        }),
    )?;
    let bad: Vec<String> = reports
        .iter()
        .filter(|rep| !rep.increasing_side_holds(slack) || !rep.decreasing_side_holds(slack))
        .map(|rep| format!("N={} r={}", rep.n, rep.r))
        .collect();
    let not_unimodal = reports.iter().filter(|rep| !rep.is_unimodal()).count();
    s.set("levels", reports.len());
    s.checks([
        Check::new(
            "gap_inequality",
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} levels", reports.len())
            } else {
                format!("violations at {}", bad.join(" "))
            },
        ),
        Check::new(
            "unimodal",
            not_unimodal == 0,
            format!("{not_unimodal} non-unimodal levels"),
        ),
    ]);
    Ok(s)
}

pub fn pairbound(args: &PairboundArgs) -> Result<Summary, CliError> {
    let mut reports = Vec::new();
    for &n in &args.ns {
        match args.r {
            Some(r) => reports.push(pair_bound_report(n, r)?),
            None => {
                for r in 0..=(n as i64 / 4) {
                    reports.push(pair_bound_report(n, r)?);
                }
            }
        }
    }
    let dir = &args.out.out;
    ensure_dir(dir)?;
    write_csv(
        dir,
        "pairbound.csv",
        &["N", "r", "min_ratio"],
        reports.iter().map(|rep| {
            vec![
                rep.n.to_string(),
                rep.r.to_string(),
                opt_real(rep.min_ratio),
            ]
        }),
    )?;
    let min = reports
        .iter()
        .filter_map(|rep| rep.min_ratio)
        .fold(f64::INFINITY, f64::min);
    let mut s = Summary::new("pairbound");
    s.list("N", &args.ns);
    if let Some(r) = args.r {
        s.set("r", r);
    }
    echo_tolerances(&mut s, &args.tol);
    s.set("floor", real(PAIR_BOUND_FLOOR));
    if min.is_finite() {
        s.set("min_ratio", real(min));
    }
    s.checks([Check::new(
        "floor",
        min >= PAIR_BOUND_FLOOR - args.tol.pair,
        format!("min ratio {min:.6} vs floor {PAIR_BOUND_FLOOR:.6}"),
    )]);
    Ok(s)
}

pub fn simulate(args: &SimulateArgs) -> Result<Summary, CliError> {
    let grid = GridSpec::new(args.n as i64)?;
    let config = match args.visc_c {
        Some(c) => SchemeConfig::with_rule(grid, ViscosityRule::Linear { c })?,
        None => SchemeConfig::conservative(grid),
    };
    if !(args.t_end >= 0.0 && args.t_end.is_finite()) {
        return Err(schrodinger_lab::Error::NegativeTime(args.t_end).into());
    }
    if args.frames == 0 {
        return Err(CliError::Config("--frames must be at least 1".into()));
    }
    let u0 = match args.seed {
        Some(seed) => gaussian_data(grid, Spectrum::Full, seed, 0),
        None => blowup_initial(&build_lambda_set(args.n, args.alpha)?),
    };
    let times: Vec<f64> = if args.frames == 1 {
        vec![0.0]
    } else {
        (0..args.frames)
            .map(|k| args.t_end * k as f64 / (args.frames - 1) as f64)
            .collect()
    };
    let mut rows = Vec::new();
    let mut norms = Vec::new();
    for &t in &times {
        let u = solution_at_nodes(&u0, t, &config)?;
        norms.push(lp_norm(&u, 2.0)?);
        for (j, v) in u.values().iter().enumerate() {
            rows.push(vec![
                real(t),
                j.to_string(),
                real(grid.node(j)),
                real(v.re),
                real(v.im),
                real(v.norm()),
            ]);
        }
    }
    let dir = &args.out.out;
    ensure_dir(dir)?;
    write_csv(
        dir,
        "simulate.csv",
        &["t", "j", "x", "re", "im", "modulus"],
        rows,
    )?;
    write_csv(
        dir,
        "symbol.csv",
        &["n", "p_h", "continuous"],
        grid.modes().map(|n| {
            let k = n as f64;
            vec![
                n.to_string(),
                real(grid.symbol(n)),
                real(4.0 * PI * PI * k * k),
            ]
        }),
    )?;
    let mut s = Summary::new("simulate");
    s.set("N", args.n)
        .set("T", args.t_end)
        .set("frames", args.frames)
        .set(
            "data",
            match args.seed {
                Some(seed) => format!("random seed={seed}"),
                None => format!("window alpha={}", args.alpha),
            },
        )
        .set("viscosity", real(config.viscosity()))
        .set("l2_initial", real(lp_norm(&idft(&u0), 2.0)?))
        .set("l2_final", real(*norms.last().expect("at least one frame")));
    Ok(s)
}
