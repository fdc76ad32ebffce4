use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use axhm::bench::run_bench;
use axhm::diagnostics::write_csv;
use axhm::experiments::{
    convergence_study, fit_trend, load_config, sweep, MmsRegistry, RunConfig, SweepParam,
};
use axhm::solver::run;
use axhm::Error;

#[derive(Parser)]
#[command(name = "axhm", version, about = "Axisymmetric resistive Hall-MHD experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults apply to anything not given
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Single run: diagnostics CSV, final checkpoint, summary
    Run(Common),
    /// Sweep eps or nu and summarize the lifespan trend
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "eps")]
        param: String,
        /// Comma-separated values; defaults depend on the parameter
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Sampled functional-inequality bench
    Bench(Common),
    /// Manufactured-solution convergence study
    Mms {
        #[command(flatten)]
        common: Common,
        /// Registered solution id; all of them when omitted
        #[arg(long)]
        solution: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        resolutions: Vec<usize>,
    },
}

fn prepare(common: &Common) -> axhm::Result<RunConfig> {
    let config = match &common.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    std::fs::create_dir_all(&common.out).map_err(|e| Error::Io {
        path: common.out.clone(),
        source: e,
    })?;
    config.write_echo(&common.out)?;
    Ok(config)
}

fn write(path: &Path, text: &str) -> axhm::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn cmd_run(common: &Common) -> axhm::Result<()> {
    let config = prepare(common)?;
    let grid = Arc::new(config.grid.build()?);
    let outcome = run(
        grid,
        &config.initial,
        config.physics,
        &config.control.run_control(Some(&common.out)),
    )?;
    write_csv(&outcome.records, &common.out.join(&config.control.diagnostics_file))?;
    let first = outcome.records.first().copied().unwrap_or_default();
    let summary = format!(
        "E0 = {:?}\nreason = {}\nt_proxy = {:?}\nt_final = {:?}\nsteps = {}\nrecords = {}\n",
        first.h3_u + first.h3_h,
        outcome.reason,
        outcome.verdict.t_proxy,
        outcome.state.t,
        outcome.steps,
        outcome.records.len()
    );
    write(&common.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn cmd_sweep(common: &Common, param: &str, values: Option<&[f64]>) -> axhm::Result<()> {
    let param: SweepParam = param.parse()?;
    let config = prepare(common)?;
    let values = values.map_or_else(|| param.default_values(), <[f64]>::to_vec);
    let result = sweep(&config, param, &values, Some(&common.out))?;
    write(&common.out.join("sweep.csv"), &result.to_csv_string())?;
    let mut summary = String::new();
    for r in &result.rows {
        summary.push_str(&format!(
            "{}={:?} t_proxy={:?} reason={} E0={:?}\n",
            param, r.value, r.t_proxy, r.reason, r.e0
        ));
    }
    match fit_trend(&result) {
        Ok(t) => {
            write(&common.out.join("trend.csv"), &t.to_csv_string())?;
            summary.push_str(&t.text());
        }
        Err(e) => summary.push_str(&format!("verdict: {} ({e})\n", result.verdict())),
    }
    write(&common.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn cmd_bench(common: &Common) -> axhm::Result<()> {
    let config = prepare(common)?;
    let outcome = run_bench(&config.bench, config.control.seed)?;
    outcome.write(&common.out)?;
    let summary = format!(
        "{}all hold: {}\n",
        outcome.summary(),
        outcome.all_hold()
    );
    write(&common.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn cmd_mms(common: &Common, solution: Option<&str>, resolutions: &[usize]) -> axhm::Result<()> {
    prepare(common)?;
    let registry = MmsRegistry::default();
    let ids: Vec<String> = match solution {
        Some(s) => vec![s.to_string()],
        None => registry.names().into_iter().map(String::from).collect(),
    };
    let mut summary = String::new();
    for id in &ids {
        let table = convergence_study(&registry, id, resolutions)?;
        write(&common.out.join(format!("mms_{id}.csv")), &table.to_csv_string())?;
        summary.push_str(&table.summary());
    }
    write(&common.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Run(c) => cmd_run(c),
        Command::Sweep { common, param, values } => cmd_sweep(common, param, values.as_deref()),
        Command::Bench(c) => cmd_bench(c),
        Command::Mms {
            common,
            solution,
            resolutions,
        } => cmd_mms(common, solution.as_deref(), resolutions),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
