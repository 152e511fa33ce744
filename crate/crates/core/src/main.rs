use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tlac::estimator::BiasTable;
use tlac::harness::{
    analysis_text, build_matrix, calibrate_campaign, compare, load_cases, partition_failed, run_campaign, run_case,
    run_full_campaign, save_case, summary_table, write_atomic, CampaignConfig, CaseResult, DlcCase, RunConfig,
    RunContext, Variant,
};
use tlac::windfield::TurbulenceModel;

#[derive(Parser)]
#[command(name = "tlac", version, about = "Turbulence-based load alleviation control: simulation campaigns and analysis")]
struct Cli {
    /// Run configuration (TOML); missing sections use defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the campaign master seed.
    #[arg(long, global = true)]
    master_seed: Option<u64>,
    /// Use the full 700 s, 6-seed matrix instead of the desk-scale one.
    #[arg(long, global = true)]
    full: bool,
    /// Cache synthesized wind fields in this directory.
    #[arg(long, global = true)]
    field_cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one load case.
    Simulate(SimulateArgs),
    /// Run the case matrix for one or both controller variants.
    Batch(BatchArgs),
    /// Derive the estimator bias and TLAC thresholds from NTM baseline results.
    Calibrate {
        /// Directory of baseline case results.
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coherence, error histograms and segment statistics of a result set.
    Analyze {
        #[arg(long)]
        results: PathBuf,
        /// Bias table to subtract from estimates made with a zero table.
        #[arg(long)]
        bias: Option<PathBuf>,
        /// Histogram bin width, 1/s.
        #[arg(long, default_value_t = 0.002)]
        bin_width: f64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exceedance curves, power ratio and trigger rates of TLAC against baseline.
    Compare {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        tlac: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "ntm")]
    model: TurbulenceModel,
    /// Hub-height mean wind, m/s.
    #[arg(long, default_value_t = 14.0)]
    wind: f64,
    #[arg(long, default_value_t = 1)]
    seed: usize,
    /// Flow direction, deg.
    #[arg(long, default_value_t = 0.0)]
    direction: f64,
    #[arg(long, default_value = "baseline")]
    variant: Variant,
    /// s; defaults to the campaign duration.
    #[arg(long)]
    duration: Option<f64>,
    /// s; defaults to the campaign discard.
    #[arg(long)]
    discard: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BatchVariant {
    Baseline,
    Tlac,
    /// Baseline, calibration, TLAC and comparison.
    All,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, value_enum, default_value = "all")]
    variant: BatchVariant,
    #[arg(long)]
    out: PathBuf,
    /// Exit nonzero if any case failed.
    #[arg(long)]
    strict: bool,
}

fn context(cli: &Cli) -> Result<RunContext> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let default = if cli.full { CampaignConfig::full() } else { CampaignConfig::desk() };
    let mut ctx = file.context(default)?;
    if cli.full && file.campaign.is_some() {
        eprintln!("note: --full ignored, the config file sets the campaign");
    }
    if let Some(seed) = cli.master_seed {
        ctx.campaign.master_seed = seed;
    }
    ctx.field_cache = cli.field_cache.clone();
    Ok(ctx)
}

fn report_failures(results: &[CaseResult], strict: bool) -> ExitCode {
    let (_, failed) = partition_failed(results);
    for id in &failed {
        eprintln!("failed: {id}");
    }
    if strict && !failed.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn write_config(dir: &Path, ctx: &RunContext) -> Result<()> {
    write_atomic(&dir.join("config.toml"), RunConfig::from_context(ctx).to_toml().as_bytes())?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = context(&cli)?;
    match cli.command {
        Command::Simulate(a) => {
            let case = DlcCase {
                model: a.model,
                mean_wind: a.wind,
                seed_index: a.seed,
                direction: a.direction,
                duration: a.duration.unwrap_or(ctx.campaign.duration),
                discard: a.discard.unwrap_or(ctx.campaign.discard),
                variant: a.variant,
            };
            let result = run_case(&case, &ctx)?;
            let dir = save_case(&a.out, &result)?;
            print!("{}", summary_table(std::slice::from_ref(&result)));
            eprintln!("wrote {} ({:.1} s)", dir.display(), result.wall_time);
            Ok(report_failures(std::slice::from_ref(&result), true))
        }
        Command::Batch(a) => {
            std::fs::create_dir_all(&a.out)?;
            match a.variant {
                BatchVariant::All => {
                    let outcome = run_full_campaign(&ctx, Some(&a.out))?;
                    for w in &outcome.calibration.warnings {
                        eprintln!("warning: {w}");
                    }
                    print!("{}", outcome.report.to_text());
                    write_config(&a.out, &outcome.calibration.apply(&ctx))?;
                    let mut all = outcome.baseline.clone();
                    all.extend(outcome.tlac.iter().cloned());
                    Ok(report_failures(&all, a.strict))
                }
                BatchVariant::Baseline | BatchVariant::Tlac => {
                    let variant = if matches!(a.variant, BatchVariant::Tlac) { Variant::Tlac } else { Variant::Baseline };
                    let cases: Vec<DlcCase> = build_matrix(&ctx.campaign)?
                        .iter()
                        .map(|c| c.with_variant(variant))
                        .collect();
                    let results = run_campaign(&cases, &ctx, Some(&a.out))?;
                    let table = summary_table(&results);
                    write_atomic(&a.out.join("summary.txt"), table.as_bytes())?;
                    write_config(&a.out, &ctx)?;
                    print!("{table}");
                    Ok(report_failures(&results, a.strict))
                }
            }
        }
        Command::Calibrate { results, out } => {
            let results = load_cases(&results).with_context(|| format!("loading {}", results.display()))?;
            let winds: Vec<f64> = results
                .iter()
                .map(|r| r.case.mean_wind.to_bits())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(f64::from_bits)
                .collect();
            let cal = calibrate_campaign(&results, &winds, ctx.controller.tlac.short_window)?;
            for w in &cal.warnings {
                eprintln!("warning: {w}");
            }
            std::fs::create_dir_all(&out)?;
            cal.bias.save(&out.join("bias.toml"))?;
            write_config(&out, &cal.apply(&ctx))?;
            println!("wind delta_avg delta_std windows");
            for b in &cal.thresholds.bins {
                println!("{:.1} {:.6e} {:.6e} {}", b.wind, b.delta_avg, b.delta_std, b.windows);
            }
            eprintln!("wrote {} and {}", out.join("bias.toml").display(), out.join("config.toml").display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            results,
            bias,
            bin_width,
            out,
        } => {
            let results = load_cases(&results)?;
            let bias = bias.map(|p| BiasTable::load(&p)).transpose()?;
            let text = analysis_text(&results, bias.as_ref(), ctx.estimator.cutoff, bin_width)?;
            emit(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { baseline, tlac, out } => {
            let b = load_cases(&baseline)?;
            let t = load_cases(&tlac)?;
            if b.is_empty() {
                bail!("no case results in {}", baseline.display());
            }
            let report = compare(&b, &t)?;
            emit(out.as_deref(), &report.to_text())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
