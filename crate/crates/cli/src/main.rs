use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use carbon_quota::blend::sweep_grid;
use carbon_quota::indices::{StudyLabel, TapioSource};
use carbon_quota::report::tables::{
    feasibility_csv_table, gaps_display_csv, grid_csv, group_traces, indices_table, sweep_table, trajectory_table,
};
use carbon_quota::report::{
    self, build_trajectories, compute_study, diff_against_fixture, find_check, load_inputs, manifest, run_check,
    write_artifacts, Check, CheckKind, CheckSource, DiffReport, RunConfig, Selector, Table, Tolerance,
};

/// Effort-sharing budgets for the EU Member States.
#[derive(Parser)]
#[command(name = "carbon-quota", version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory with the input files; the bundled dataset when omitted.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Study window.
    #[arg(long, global = true)]
    study: Option<StudyLabel>,
    /// Where tapio values come from.
    #[arg(long, global = true)]
    tapio_source: Option<TapioSource>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    CapIne,
    CapDec,
    Diagonal,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the expected input files.
    Formats,
    /// Linear-to-zero trajectories and their budgets.
    Trajectory,
    /// Capability, tapio, Decoupling and Inertia indices.
    Indices,
    /// Blend sweeps.
    Blend {
        #[arg(long, value_enum, default_value = "cap-ine")]
        mode: Mode,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Capability to Inertia gap per country.
    Gaps,
    /// Behaviour groups with the diagonal trace behind each.
    Groups,
    /// Blended budgets against the 2021-2030 ESR budget.
    Feasibility,
    /// Compute everything, write artifacts and run the reference checks.
    Run {
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare computed tables with the bundled references.
    Diff {
        /// Check id from the manifest; repeatable. Default: every check.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Exit 2 when a target or endpoint check has a discrepancy.
        #[arg(long)]
        strict: bool,
        /// Compare this CSV instead of the pipeline output (needs --fixture).
        #[arg(long, requires = "fixture")]
        computed: Option<PathBuf>,
        /// Reference table id, or a path to a CSV, for --computed.
        #[arg(long)]
        fixture: Option<String>,
        /// Tolerance for --computed, absolute or with a % suffix.
        #[arg(long, default_value = "0.5")]
        tolerance: Tolerance,
        /// Print every discrepant cell.
        #[arg(long, short)]
        verbose: bool,
    },
    /// List the reference checks.
    Checks,
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::parse(&text).with_context(|| format!("{}", p.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(d) = &cli.data_dir {
        cfg.data_dir = Some(d.clone());
    }
    if let Some(s) = cli.study {
        cfg.study = s;
    }
    if let Some(s) = cli.tapio_source {
        cfg.tapio_source = s;
    }
    Ok(cfg)
}

fn print_report(r: &DiffReport, verbose: bool) {
    let status = if r.counts().discrepancies == 0 {
        "ok"
    } else if r.kind.is_binding() {
        "FAIL"
    } else {
        "expected"
    };
    println!("{:<8} {}", status, r.summary_line());
    if verbose {
        for c in r.discrepancies() {
            let f = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
            println!("         {}/{}: computed {} printed {}", c.row, c.col, f(c.computed), f(c.printed));
        }
    }
}

fn diff_file(computed: &PathBuf, fixture: &str, tolerance: Tolerance) -> Result<DiffReport> {
    let text = fs::read_to_string(computed).with_context(|| format!("reading {}", computed.display()))?;
    let computed = Table::parse(&text).with_context(|| format!("{}", computed.display()))?;
    let (printed, id) = if carbon_quota::bundled::reference(fixture).is_some() {
        (report::tables::reference_table(fixture)?, fixture.to_string())
    } else {
        let t = fs::read_to_string(fixture).with_context(|| format!("reading {fixture}"))?;
        (Table::parse(&t).with_context(|| fixture.to_string())?, fixture.to_string())
    };
    let check = Check {
        id: "computed".into(),
        fixture: id,
        study: None,
        source: CheckSource::Pipeline,
        kind: CheckKind::Target,
        rows: Selector::All,
        columns: Selector::All,
        match_tol: Tolerance::Abs(0.0),
        tolerance,
        note: String::new(),
    };
    Ok(diff_against_fixture(&computed, &printed, &check)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = config(&cli)?;
    match cli.command {
        Command::Formats => print!("{}", report::formats::describe()),
        Command::Checks => {
            for c in manifest() {
                let study = c.study.map(|s| s.as_str()).unwrap_or("*");
                println!("{:<32} {:<20} {:<10} {:<18} {}", c.id, c.fixture, study, c.kind, c.note);
            }
        }
        Command::Trajectory => {
            let ds = load_inputs(&cfg)?;
            let t = build_trajectories(&ds, &cfg)?;
            print!("{}", trajectory_table(&t).to_csv());
            eprintln!(
                "budget mismatch: total {:.2} vs ESR + ETS {:.2} ({:.2}%)",
                t.mismatch.eu27_total,
                t.mismatch.esr + t.mismatch.ets,
                100.0 * t.mismatch.relative
            );
        }
        Command::Indices => {
            let ds = load_inputs(&cfg)?;
            let r = compute_study(&ds, &cfg)?;
            print!("{}", indices_table(&r.indices).to_csv());
            eprintln!("tapio anchor {} (shift {:.4})", r.indices.anchor, r.indices.shift);
        }
        Command::Blend { mode, step } => {
            let mut cfg = cfg;
            if let Some(s) = step {
                cfg.step = s;
            }
            let ds = load_inputs(&cfg)?;
            let r = compute_study(&ds, &cfg)?;
            match mode {
                Mode::CapIne => print!("{}", sweep_table(&r.cap_ine).to_csv()),
                Mode::CapDec => print!("{}", sweep_table(&r.cap_dec).to_csv()),
                Mode::Diagonal => print!("{}", sweep_table(&r.diagonal).to_csv()),
                Mode::Grid => {
                    let g = sweep_grid(&r.capability, &r.decoupling, &r.inertia, cfg.step)?;
                    print!("{}", grid_csv(&g));
                }
            }
        }
        Command::Gaps => {
            let ds = load_inputs(&cfg)?;
            print!("{}", gaps_display_csv(&compute_study(&ds, &cfg)?.gaps));
        }
        Command::Groups => {
            let ds = load_inputs(&cfg)?;
            let r = compute_study(&ds, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&group_traces(&r.groups, &r.diagonal))?);
        }
        Command::Feasibility => {
            let ds = load_inputs(&cfg)?;
            print!("{}", feasibility_csv_table(&compute_study(&ds, &cfg)?.feasibility).to_csv());
        }
        Command::Run { output_dir } => {
            let mut cfg = cfg;
            if let Some(d) = output_dir {
                cfg.output_dir = d;
            }
            let out = report::run_study(&cfg)?;
            let written = write_artifacts(&cfg.output_dir, &out.artifacts)
                .with_context(|| format!("writing to {}", cfg.output_dir.display()))?;
            for f in &out.flags {
                eprintln!("flag: {}: {}: {}", f.file, f.region, f.message);
            }
            for r in &out.reports {
                print_report(r, false);
            }
            println!("wrote {} files to {}", written.len(), cfg.output_dir.display());
        }
        Command::Diff {
            checks,
            strict,
            computed,
            fixture,
            tolerance,
            verbose,
        } => {
            let reports = if let Some(path) = computed {
                let fixture = fixture.ok_or_else(|| anyhow!("--computed needs --fixture"))?;
                vec![diff_file(&path, &fixture, tolerance)?]
            } else {
                let ds = load_inputs(&cfg)?;
                let selected: Vec<Check> = if checks.is_empty() {
                    manifest()
                } else {
                    checks
                        .iter()
                        .map(|id| find_check(id).ok_or_else(|| anyhow!("unknown check `{id}` (see `carbon-quota checks`)")))
                        .collect::<Result<_>>()?
                };
                selected.iter().map(|c| run_check(&ds, &cfg, c)).collect::<Result<Vec<_>, _>>()?
            };
            let mut failed = 0;
            for r in &reports {
                print_report(r, verbose);
                failed += usize::from(r.fails_strict());
            }
            if failed > 0 {
                println!("{failed} binding check(s) with discrepancies");
                if strict {
                    return Ok(ExitCode::from(2));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
