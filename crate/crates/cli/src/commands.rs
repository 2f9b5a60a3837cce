//! The five subcommands: source resolution, computation, file emission.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kairos::bridge::{bridge_check, estimate_lambda, invariant_profile, InvariantProfile, LambdaEstimate};
use kairos::intrinsic::{dissect as dissect_series, overshoot_stats, write_events};
use kairos::scaling::{scaling_suite, write_law_points, LogGrid, ScalingReport};
use kairos::series::{
    ingest_ticks, synth_brownian, write_ticks, ColumnRef, CsvFormat, PriceMode, PriceSeries,
    SynthConfig, TimeFormat, RNG_ALGORITHM,
};
use serde::Serialize;

use crate::config::{
    resolve, resolve_out, CsvParams, GridSpec, ResolvedConfig, SynthParams,
};
use crate::{missing_value, CheckArgs, DissectArgs, GridArgs, InvariantsArgs, ScalingArgs, SourceArgs, SynthArgs};

type FileMap = HashMap<String, String>;

// Grid defaults match the published evaluation protocol: sampling
// intervals from one minute to just over 18 hours, thresholds from
// 0.035% to 0.5%, 21 points each.
const DEFAULT_DT_LO: f64 = 60.0;
const DEFAULT_DT_HI: f64 = 65_798.0;
const DEFAULT_DELTA_LO_PCT: f64 = 0.035;
const DEFAULT_DELTA_HI_PCT: f64 = 0.5;
const DEFAULT_GRID_POINTS: usize = 21;
const DEFAULT_SEED: u64 = 42;

// ---------------------------------------------------------------- output

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json<P: Serialize>(dir: &Path, name: &str, payload: &P) -> Result<()> {
    let mut writer = create(dir, name)?;
    serde_json::to_writer_pretty(&mut writer, payload).with_context(|| format!("writing {name}"))?;
    writer.write_all(b"\n")?;
    Ok(())
}

// ---------------------------------------------------------------- source

/// Resolve the analyzed series plus the config record describing it.
fn resolve_source(
    args: &SourceArgs,
    file: &FileMap,
    command: &'static str,
    out_dir: &Path,
) -> Result<(PriceSeries<f64>, ResolvedConfig)> {
    // exactly one source; an explicit flag outranks the config file
    let file_input = resolve::<PathBuf>(None, file, "input")?;
    let file_sigma = resolve::<f64>(None, file, "sigma")?;
    let input = if args.input.is_some() {
        args.input.clone()
    } else if args.sigma.is_some() {
        None
    } else if file_input.is_some() && file_sigma.is_some() {
        bail!("config file supplies both `input` and `sigma`; keep exactly one source");
    } else {
        file_input
    };
    let sigma = args.sigma.or(file_sigma);

    let mut config = ResolvedConfig {
        command,
        input: None,
        synth: None,
        csv: None,
        label: String::new(),
        dt_grid: None,
        delta_grid: None,
        dt: None,
        delta: None,
        delta_unit: None,
        out_dir: out_dir.display().to_string(),
    };

    let series = if let Some(path) = input {
        let time_col = resolve(args.time_col.clone(), file, "time-col")?.unwrap_or_else(|| "time".into());
        let price_col = resolve(args.price_col.clone(), file, "price-col")?.unwrap_or_else(|| "price".into());
        let bid_col = resolve(args.bid_col.clone(), file, "bid-col")?;
        let ask_col = resolve(args.ask_col.clone(), file, "ask-col")?;
        let has_header = !(args.no_header
            || file.get("no-header").map(|v| v == "true" || v == "1").unwrap_or(false));
        let time_format = resolve(args.time_format.clone(), file, "time-format")?
            .unwrap_or_else(|| "epoch".into());
        let price_mode =
            resolve(args.price_mode.clone(), file, "price-mode")?.unwrap_or_else(|| "trade".into());

        let time_format_parsed = match time_format.as_str() {
            "epoch" => TimeFormat::EpochSeconds,
            "iso8601" => TimeFormat::Iso8601,
            other => bail!("unknown --time-format {other:?} (expected epoch | iso8601)"),
        };
        let mode = match price_mode.as_str() {
            "trade" => PriceMode::Trade,
            "mid" => PriceMode::MidBidAsk,
            other => bail!("unknown --price-mode {other:?} (expected trade | mid)"),
        };
        let (bid_ref, ask_ref) = match mode {
            PriceMode::MidBidAsk => (
                Some(ColumnRef::parse(bid_col.as_deref().unwrap_or("bid"))),
                Some(ColumnRef::parse(ask_col.as_deref().unwrap_or("ask"))),
            ),
            PriceMode::Trade => (None, None),
        };
        let format = CsvFormat {
            has_header,
            time: ColumnRef::parse(&time_col),
            price: Some(ColumnRef::parse(&price_col)),
            bid: bid_ref,
            ask: ask_ref,
            time_format: time_format_parsed,
        };
        let label = resolve(args.label.clone(), file, "label")?
            .unwrap_or_else(|| path.display().to_string());

        config.input = Some(path.display().to_string());
        config.csv = Some(CsvParams {
            time_col,
            price_col: Some(price_col),
            bid_col,
            ask_col,
            has_header,
            time_format,
            price_mode,
        });
        config.label = label.clone();

        let reader = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        ingest_ticks(std::io::BufReader::new(reader), &format, mode, label)
            .with_context(|| format!("ingesting {}", path.display()))?
    } else {
        let Some(sigma) = sigma else {
            crate::usage_error("give a series: --input <csv>, or --sigma/--n to synthesize".into())
        };
        let Some(n) = resolve(args.n, file, "n")? else { missing_value("n") };
        let tick_dt = resolve(args.tick_dt, file, "tick-dt")?.unwrap_or(1.0);
        let p0 = resolve(args.p0, file, "p0")?.unwrap_or(1.0);
        let seed = resolve(args.seed, file, "seed")?.unwrap_or(DEFAULT_SEED);
        let synth_config = SynthConfig::new(sigma, tick_dt, n, seed).with_p0(p0);
        let series = synth_brownian(&synth_config)?;
        config.synth =
            Some(SynthParams { sigma, n, tick_dt, p0, seed, rng: RNG_ALGORITHM });
        config.label = resolve(args.label.clone(), file, "label")?
            .unwrap_or_else(|| series.label().to_string());
        series
    };
    Ok((series, config))
}

fn resolve_grids(args: &GridArgs, file: &FileMap) -> Result<(GridSpec, GridSpec)> {
    let dt_lo = resolve(args.dt_lo, file, "dt-lo")?.unwrap_or(DEFAULT_DT_LO);
    let dt_hi = resolve(args.dt_hi, file, "dt-hi")?.unwrap_or(DEFAULT_DT_HI);
    let dt_points = resolve(args.dt_points, file, "dt-points")?.unwrap_or(DEFAULT_GRID_POINTS);
    let delta_lo_pct = resolve(args.delta_lo, file, "delta-lo")?.unwrap_or(DEFAULT_DELTA_LO_PCT);
    let delta_hi_pct = resolve(args.delta_hi, file, "delta-hi")?.unwrap_or(DEFAULT_DELTA_HI_PCT);
    let delta_points =
        resolve(args.delta_points, file, "delta-points")?.unwrap_or(DEFAULT_GRID_POINTS);
    Ok((
        GridSpec { lo: dt_lo, hi: dt_hi, points: dt_points, unit: "seconds" },
        GridSpec {
            lo: delta_lo_pct / 100.0,
            hi: delta_hi_pct / 100.0,
            points: delta_points,
            unit: "fraction",
        },
    ))
}

// -------------------------------------------------------------- commands

pub fn synth(args: SynthArgs, file: &FileMap) -> Result<()> {
    let out_dir = resolve_out(args.out.out.clone(), file);
    let Some(sigma) = resolve(args.sigma, file, "sigma")? else { missing_value("sigma") };
    let Some(n) = resolve(args.n, file, "n")? else { missing_value("n") };
    let dt = resolve(args.dt, file, "dt")?.unwrap_or(1.0);
    let p0 = resolve(args.p0, file, "p0")?.unwrap_or(1.0);
    let seed = resolve(args.seed, file, "seed")?.unwrap_or(DEFAULT_SEED);

    let series = synth_brownian(&SynthConfig::new(sigma, dt, n, seed).with_p0(p0))?;
    let config = ResolvedConfig {
        command: "synth",
        input: None,
        synth: Some(SynthParams { sigma, n, tick_dt: dt, p0, seed, rng: RNG_ALGORITHM }),
        csv: None,
        label: series.label().to_string(),
        dt_grid: None,
        delta_grid: None,
        dt: None,
        delta: None,
        delta_unit: None,
        out_dir: out_dir.display().to_string(),
    };

    let mut ticks_csv = create(&out_dir, "ticks.csv")?;
    writeln!(ticks_csv, "{}", config.comment_line())?;
    write_ticks(&mut ticks_csv, &series)?;

    #[derive(Serialize)]
    struct Meta<'a> {
        config: &'a ResolvedConfig,
        ticks: usize,
        span_seconds: f64,
    }
    write_json(&out_dir, "ticks.meta.json", &Meta {
        config: &config,
        ticks: series.len(),
        span_seconds: series.span()?,
    })?;
    println!("wrote {} ticks to {}", series.len(), out_dir.join("ticks.csv").display());
    Ok(())
}

pub fn dissect(args: DissectArgs, file: &FileMap) -> Result<()> {
    let out_dir = resolve_out(args.out.out.clone(), file);
    let (series, mut config) = resolve_source(&args.source, file, "dissect", &out_dir)?;
    let Some(delta_pct) = resolve(args.delta, file, "delta")? else { missing_value("delta") };
    let delta = delta_pct / 100.0;
    config.delta = Some(delta);
    config.delta_unit = Some("fraction");

    let dissection = dissect_series(&series, delta)?;
    let stats = overshoot_stats(&dissection);

    let mut events_csv = create(&out_dir, "events.csv")?;
    writeln!(events_csv, "{}", config.comment_line())?;
    write_events(&mut events_csv, &dissection)?;

    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a ResolvedConfig,
        n_dc: usize,
        n_overshoots: usize,
        mean_overshoot: Option<f64>,
        overshoot_variability: Option<f64>,
    }
    write_json(&out_dir, "dissect.json", &Summary {
        config: &config,
        n_dc: stats.n_dc,
        n_overshoots: dissection.overshoots().len(),
        mean_overshoot: stats.mean_os,
        overshoot_variability: stats.var_os,
    })?;
    println!(
        "dissected {} ticks at delta={delta_pct}%: {} directional changes, {} overshoots",
        series.len(),
        stats.n_dc,
        dissection.overshoots().len()
    );
    Ok(())
}

pub fn scaling(args: ScalingArgs, file: &FileMap) -> Result<()> {
    let out_dir = resolve_out(args.out.out.clone(), file);
    let (series, mut config) = resolve_source(&args.source, file, "scaling", &out_dir)?;
    let (dt_spec, delta_spec) = resolve_grids(&args.grids, file)?;
    config.dt_grid = Some(dt_spec.clone());
    config.delta_grid = Some(delta_spec.clone());

    let report = scaling_suite(
        &series,
        &LogGrid::new(dt_spec.lo, dt_spec.hi, dt_spec.points)?,
        &LogGrid::new(delta_spec.lo, delta_spec.hi, delta_spec.points)?,
    )?;

    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a ResolvedConfig,
        report: &'a ScalingReport<f64>,
    }
    write_json(&out_dir, "scaling.json", &Out { config: &config, report: &report })?;
    for (name, law) in report.laws() {
        let mut csv = create(&out_dir, &format!("law_{name}.csv"))?;
        writeln!(csv, "{}", config.comment_line())?;
        write_law_points(&mut csv, law)?;
    }
    for (name, law) in report.laws() {
        println!(
            "{name}: alpha={:.6e} E={:.4} r^2={:.4} ({} points)",
            law.fit.alpha, law.fit.exponent, law.fit.r_squared, law.fit.n_points
        );
    }
    Ok(())
}

pub fn invariants(args: InvariantsArgs, file: &FileMap) -> Result<()> {
    let out_dir = resolve_out(args.out.out.clone(), file);
    let (series, mut config) = resolve_source(&args.source, file, "invariants", &out_dir)?;
    let (dt_spec, delta_spec) = resolve_grids(&args.grids, file)?;
    if dt_spec.points != delta_spec.points {
        bail!(
            "the invariant profile pairs grids index by index: --dt-points {} and --delta-points {} must match",
            dt_spec.points,
            delta_spec.points
        );
    }
    config.dt_grid = Some(dt_spec.clone());
    config.delta_grid = Some(delta_spec.clone());

    let dt_grid = LogGrid::new(dt_spec.lo, dt_spec.hi, dt_spec.points)?.points();
    let delta_grid = LogGrid::new(delta_spec.lo, delta_spec.hi, delta_spec.points)?.points();
    let profile = invariant_profile(&series, &dt_grid, &delta_grid)?;
    let lambda = estimate_lambda(&profile)?;

    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let mean_physical = mean(profile.c_physical());
    let mean_intrinsic = mean(profile.c_intrinsic());

    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a ResolvedConfig,
        profile: &'a InvariantProfile<f64>,
        pooled_mean: f64,
        pooled_std: f64,
        mean_c_physical: f64,
        mean_c_intrinsic: f64,
    }
    write_json(&out_dir, "invariants.json", &Out {
        config: &config,
        profile: &profile,
        pooled_mean: profile.pooled_mean(),
        pooled_std: profile.pooled_std(),
        mean_c_physical: mean_physical,
        mean_c_intrinsic: mean_intrinsic,
    })?;

    let mut profile_csv = create(&out_dir, "invariants.csv")?;
    writeln!(profile_csv, "{}", config.comment_line())?;
    profile.write_csv(&mut profile_csv)?;

    #[derive(Serialize)]
    struct LambdaOut<'a> {
        config: &'a ResolvedConfig,
        lambda: &'a LambdaEstimate<f64>,
    }
    write_json(&out_dir, "lambda.json", &LambdaOut { config: &config, lambda: &lambda })?;

    let mut summary = create(&out_dir, "summary.txt")?;
    writeln!(summary, "series: {} ({} ticks, span {} s)", config.label, series.len(), series.span()?)?;
    writeln!(summary, "mean c_physical  = {mean_physical:.6e} 1/s")?;
    writeln!(summary, "mean c_intrinsic = {mean_intrinsic:.6e} 1/s")?;
    writeln!(
        summary,
        "pooled mean = {:.6e} 1/s, pooled std = {:.6e} 1/s",
        profile.pooled_mean(),
        profile.pooled_std()
    )?;
    writeln!(
        summary,
        "lambda = {:.6} (dispersion {:.6}, method {})",
        lambda.lambda, lambda.dispersion, lambda.method
    )?;
    writeln!(summary, "{}", config.comment_line())?;

    println!(
        "lambda = {:.4} (dispersion {:.4}); pooled invariant {:.4e} 1/s over {} grid pairs",
        lambda.lambda,
        lambda.dispersion,
        profile.pooled_mean(),
        profile.len()
    );
    Ok(())
}

pub fn check(args: CheckArgs, file: &FileMap) -> Result<()> {
    let out_dir = resolve_out(args.out.out.clone(), file);
    let (series, mut config) = resolve_source(&args.source, file, "check", &out_dir)?;
    let Some(dt) = resolve(args.dt, file, "dt")? else { missing_value("dt") };
    let Some(delta_pct) = resolve(args.delta, file, "delta")? else { missing_value("delta") };
    let delta = delta_pct / 100.0;
    config.dt = Some(dt);
    config.delta = Some(delta);
    config.delta_unit = Some("fraction");

    let result = bridge_check(&series, dt, delta)?;

    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a ResolvedConfig,
        lhs: f64,
        rhs: f64,
        rel_gap: f64,
    }
    write_json(&out_dir, "check.json", &Out {
        config: &config,
        lhs: result.lhs,
        rhs: result.rhs,
        rel_gap: result.rel_gap,
    })?;
    println!(
        "bridge check at dt={dt}s, delta={delta_pct}%: lhs={:.6e} rhs={:.6e} rel_gap={:.4}",
        result.lhs, result.rhs, result.rel_gap
    );
    Ok(())
}

