use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use laplace_fourier::cli::{exit_code_for, run, Command, EXIT_FAILED, EXIT_PARSE};
use laplace_fourier::config::RunConfig;
use laplace_fourier::Error;

#[derive(Parser)]
#[command(name = "lpft", version, about = "Laplace derivatives, convolutions and Fourier transforms on grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier transform at each frequency in --ys
    Ft(Opts),
    /// Laplace continuity value and derivative at each point in --xs
    Ld(Opts),
    /// Convolution of --fn with --g at each point in --xs
    Conv(Opts),
    /// Gaussian summability inversion of the transform of --fn at --xs
    Invert(Opts),
    /// Identity verification suites
    Verify(Opts),
}

#[derive(Args)]
struct Opts {
    /// Corpus name or expression in x
    #[arg(long = "fn", allow_hyphen_values = true)]
    function: Option<String>,
    /// Second convolution operand
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Frequencies: a,b,c or lo:hi:n
    #[arg(long, allow_hyphen_values = true)]
    ys: Option<String>,
    /// Points: a,b,c or lo:hi:n
    #[arg(long, allow_hyphen_values = true)]
    xs: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Half-width of the Laplace means
    #[arg(long)]
    delta: Option<String>,
    /// start,ratio,count
    #[arg(long)]
    ladder: Option<String>,
    /// Tail class of expression functions
    #[arg(long)]
    tail: Option<String>,
    /// Comma-separated suites (verify)
    #[arg(long)]
    suite: Option<String>,
    /// Flat key = value configuration file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or jsonl
    #[arg(long)]
    format: Option<String>,
}

impl Opts {
    fn to_config(&self) -> Result<RunConfig, Error> {
        let base = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        let mut flags = RunConfig::default();
        let pairs = [
            ("fn", &self.function),
            ("g", &self.g),
            ("ys", &self.ys),
            ("xs", &self.xs),
            ("tol", &self.tol),
            ("delta", &self.delta),
            ("ladder", &self.ladder),
            ("tail", &self.tail),
            ("suite", &self.suite),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        if let Some(p) = &self.out {
            flags.out = Some(p.clone());
        }
        Ok(base.merge(flags))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, opts) = match &cli.cmd {
        Cmd::Ft(o) => (Command::Ft, o),
        Cmd::Ld(o) => (Command::Ld, o),
        Cmd::Conv(o) => (Command::Conv, o),
        Cmd::Invert(o) => (Command::Invert, o),
        Cmd::Verify(o) => (Command::Verify, o),
    };
    let cfg = match opts.to_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("lpft: {e}");
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let default_format = if cmd == Command::Verify { "jsonl" } else { "csv" };
    let format = cfg.format.unwrap_or_else(|| default_format.parse().expect("known format"));
    let table = match run(cmd, &cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("lpft: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    let text = match table.render(format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("lpft: {e}");
            return ExitCode::from(EXIT_FAILED as u8);
        }
    };
    let written = match &cfg.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("lpft: {e}");
        return ExitCode::from(EXIT_FAILED as u8);
    }
    ExitCode::from(table.exit_code() as u8)
}
