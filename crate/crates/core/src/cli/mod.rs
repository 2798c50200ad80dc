//! Batch front end: one subcommand per check suite, JSON report on stdout
//! (and in `--out` when given), summary on stderr.
//!
//! Exit status: 0 when every check passes, 1 when any fails, 2 for usage or
//! configuration errors. Nothing is written to disk unless the configuration
//! validated and the suite ran to completion.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, RunConfig, Settings, Tolerances, DEFAULT_TOLERANCES};
pub use report::{Check, CheckKind, Report};
pub use suites::{Export, SuiteOutput};

#[derive(Debug, Parser)]
#[command(
    name = "landau",
    version,
    about = "Charged particle in a uniform magnetic field: verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for the report and exported files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// JSON parameter profile (keys m, q, B, c, hbar); overrides the config's params.
    #[arg(long, global = true, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Tighten a tolerance, e.g. --tol eigen_residual=1e-12. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Suite {
    /// Energy and invariant eigen-relations of every family.
    Eigencheck,
    /// Normal-form commutators of the Hamiltonians and constants of motion.
    Commutators,
    /// Degeneracy ladders and displacement identities.
    Ladder,
    /// Truncated exponential series against the displaced state on a grid.
    Resum,
    /// Phase factors picked up under displacement.
    Phase,
    /// Flux quantization and Hall resistivity.
    Flux,
    /// RK4 orbits: constants of motion, radius, period, gauge agreement.
    Classical,
    /// Landau eigenfunctions carried to the symmetric gauge.
    GaugeCompare,
    /// Sample an eigenfunction on a grid and write it as CSV.
    GridExport,
    /// Integrate a classical orbit and write it as CSV.
    ClassicalExport,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Eigencheck => "eigencheck",
            Suite::Commutators => "commutators",
            Suite::Ladder => "ladder",
            Suite::Resum => "resum",
            Suite::Phase => "phase",
            Suite::Flux => "flux",
            Suite::Classical => "classical",
            Suite::GaugeCompare => "gauge-compare",
            Suite::GridExport => "grid-export",
            Suite::ClassicalExport => "classical-export",
        }
    }

    pub fn run(self, settings: &Settings) -> crate::Result<SuiteOutput> {
        match self {
            Suite::Eigencheck => suites::eigencheck(settings),
            Suite::Commutators => suites::commutators(settings),
            Suite::Ladder => suites::ladder(settings),
            Suite::Resum => suites::resum(settings),
            Suite::Phase => suites::phase(settings),
            Suite::Flux => suites::flux(settings),
            Suite::Classical => suites::classical(settings),
            Suite::GaugeCompare => suites::gauge_compare(settings),
            Suite::GridExport => suites::grid_export(settings),
            Suite::ClassicalExport => suites::classical_export(settings),
        }
    }

    fn writes_files(self) -> bool {
        matches!(self, Suite::GridExport | Suite::ClassicalExport)
    }
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Validate, run and report. Returns the report and files without touching disk.
pub fn run_suite(suite: Suite, common: &CommonArgs) -> Result<(Report, Vec<Export>), ConfigError> {
    let config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let params = common
        .params
        .as_deref()
        .map(config::load_params)
        .transpose()?;
    let settings = Settings::resolve(suite.name(), config, params, &common.tol)?;
    let output = suite.run(&settings)?;
    let report = Report::new(suite.name(), settings.params.profile(), output.checks);
    Ok((report, output.exports))
}

fn write_outputs(
    suite: Suite,
    dir: Option<&PathBuf>,
    report: &Report,
    exports: &[Export],
) -> std::io::Result<()> {
    let dir = match dir {
        Some(d) => d.clone(),
        None if suite.writes_files() => PathBuf::from("."),
        None => return Ok(()),
    };
    std::fs::create_dir_all(&dir)?;
    for e in exports {
        std::fs::write(dir.join(&e.file_name), &e.contents)?;
    }
    std::fs::write(dir.join(format!("{}.json", suite.name())), report.to_json())
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let (report, exports) = match run_suite(cli.suite, &cli.common) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_outputs(cli.suite, cli.common.out.as_ref(), &report, &exports) {
        eprintln!("error: writing output: {e}");
        return EXIT_USAGE;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = lock.write_all(report.to_json().as_bytes());
    let _ = report.write_summary(std::io::stderr());
    if report.all_passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
