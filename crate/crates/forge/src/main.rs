use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use forge::catalog::{builtin_catalog, load_catalog, load_target};
use forge::lab::Settings;
use forge::report::VerificationReport;
use forge::suites::{command_sections, run_entry, run_suite, Suite};
use forge_core::Strategy;

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Weak commutativity and Rocco constructions on finite p-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build 𝔛(P) and check its subgroup structure.
    Xp(Single),
    /// Build ν(P), the tensor square and Δ.
    Nu(Single),
    /// Schur multiplier by every route.
    Schur(Single),
    /// Compare Im ρ with its description.
    Imrho(Single),
    /// Antipodal fibre product of P.
    Fibre(Single),
    /// Run a verification suite over a catalog.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// `builtin` or a directory of .pres files.
        #[arg(long, default_value = "builtin")]
        catalog: String,
        #[command(flatten)]
        common: Common,
    },
    /// Inspect the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
}

#[derive(Args)]
struct Single {
    /// Presentation file or `catalog:NAME`.
    target: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    max_cosets: Option<usize>,
    /// Seconds per entry.
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall-clock fields so reports compare byte for byte.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn settings(&self) -> Settings {
        let mut s = Settings::default();
        if let Some(n) = self.max_cosets {
            s.max_cosets = n;
        }
        s.max_time = self.max_time.map(Duration::from_secs_f64);
        s.strategy = match self.strategy {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        };
        s.timing = !self.no_timing;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(n) = self.samples {
            s.samples = n;
        }
        s
    }

    fn emit(&self, report: &VerificationReport) -> Result<()> {
        let text = match self.format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv(),
        };
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => io::stdout()
                .write_all(text.as_bytes())
                .context("writing stdout"),
        }
    }
}

fn single(command: &str, args: &Single) -> Result<VerificationReport> {
    let entry = load_target(&args.target)?;
    let settings = args.common.settings();
    let sections = command_sections(command).expect("known command");
    let report = VerificationReport::new(command, vec![run_entry(&entry, sections, &settings)]);
    args.common.emit(&report)?;
    Ok(report)
}

fn run(cli: Cli) -> Result<u8> {
    let report = match &cli.command {
        Command::Xp(a) => single("xp", a)?,
        Command::Nu(a) => single("nu", a)?,
        Command::Schur(a) => single("schur", a)?,
        Command::Imrho(a) => single("imrho", a)?,
        Command::Fibre(a) => single("fibre", a)?,
        Command::Verify {
            suite,
            catalog,
            common,
        } => {
            let entries = load_catalog(catalog)?;
            let report = run_suite(*suite, &entries, &common.settings());
            common.emit(&report)?;
            report
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let mut out = io::stdout().lock();
            for e in builtin_catalog() {
                let text = e.presentation.to_string();
                let body: Vec<&str> = text.lines().filter(|l| !l.starts_with("group ")).collect();
                let h2 = e
                    .expected_h2
                    .map(|(h, _)| h.to_string())
                    .unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{:<8} p={} order={:<3} H2={:<6} {}",
                    e.name,
                    e.p.unwrap_or(0),
                    e.expected_order.unwrap_or(0),
                    h2,
                    body.join("; ")
                )?;
            }
            return Ok(0);
        }
    };
    for e in report.entries.iter() {
        if let Some(err) = &e.error {
            eprintln!("error: {err}");
        }
        for c in e.failed_checks() {
            eprintln!("FAIL {} {c}", e.name);
        }
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e)
            if e.chain().any(|c| {
                c.downcast_ref::<io::Error>()
                    .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            }) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
