use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sigmasurf::Complex64;
use sigmasurf_cli::{
    cmd_integrate, cmd_report, cmd_sample, cmd_verify, parse_point, CliError, Format, Input,
    JobConfig, Outcome,
};

/// Harmonic maps into CP^{N-1}, their projectors, and the surfaces they trace.
#[derive(Parser)]
#[command(name = "sigmasurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity check on a projector and print a JSON report.
    Verify(Job),
    /// Export surface coordinates on a square grid.
    Sample(Job),
    /// Integrate the surface 1-form along two contours and compare.
    Integrate {
        #[command(flatten)]
        job: Job,
        /// Start point `re,im`.
        #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
        from: Complex64,
        /// End point `re,im`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Complex64,
    },
    /// Print a readable summary.
    Report(Job),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Job {
    /// Dimension N of CP^{N-1}; taken from the input file when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// `veronese` or a JSON file of coefficient lists.
    #[arg(long, default_value = "veronese")]
    input: String,
    /// Tower indices, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    composition: Vec<usize>,
    /// One weight per index; all 1 when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 3.0)]
    grid_radius: f64,
    #[arg(long, default_value_t = 41)]
    grid_res: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; machine parallelism by default.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl Job {
    fn config(&self) -> Result<JobConfig, CliError> {
        JobConfig::new(
            self.n,
            Input::parse(&self.input)?,
            self.composition.clone(),
            self.weights.clone(),
            self.grid_radius,
            self.grid_res,
            self.seed,
        )
    }

    fn format(&self, default: Format) -> Format {
        match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => default,
        }
    }
}

fn run(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let job = match &cli.command {
        Command::Verify(j) | Command::Sample(j) | Command::Report(j) => j,
        Command::Integrate { job, .. } => job,
    };
    if let Some(t) = job.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let cfg = job.config()?;
    let out = match &cli.command {
        Command::Verify(j) => cmd_verify(&cfg, j.format(Format::Json))?,
        Command::Sample(j) => cmd_sample(&cfg, j.format(Format::Csv))?,
        Command::Integrate { job, from, to } => {
            cmd_integrate(&cfg, *from, *to, job.format(Format::Json))?
        }
        Command::Report(_) => cmd_report(&cfg)?,
    };
    Ok((out, job.out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(outcome, path)| {
        match path {
            Some(p) => std::fs::write(p, &outcome.body)?,
            None => print!("{}", outcome.body),
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("sigmasurf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
