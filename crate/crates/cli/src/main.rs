use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use salemlat_cli::commands::{self, AnalyzeArgs, Outcome};
use salemlat_cli::{thread_cap, CliError, Format, EXIT_INTERNAL, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "salemlat", version, about = "Isometry groups of hyperbolic lattices")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial tools; coefficients are given constant term first.
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Rank, signature, kind and cone reference of an input lattice.
    LatticeInfo { file: PathBuf },
    /// Spectral class of one generator, or of all of them.
    Classify { file: PathBuf, generator: Option<String> },
    /// Decide free / finite / almost abelian for the generated group.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_power: u32,
        #[arg(long, default_value_t = 100_000)]
        bfs_cap: usize,
        /// Invariant-sublattice recursion depth; defaults to the rank.
        #[arg(long)]
        depth: Option<usize>,
        /// Where to write the ping-pong certificate of a free verdict.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Check a certificate against an input file.
    Verify { input: PathBuf, certificate: PathBuf },
}

#[derive(Subcommand)]
enum PolyOp {
    Salem {
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<String>,
    },
    Strip {
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<String>,
    },
    Cyclo { n: u64 },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Poly { op } => match op {
            PolyOp::Salem { coeffs } => commands::poly_salem(coeffs),
            PolyOp::Strip { coeffs } => commands::poly_strip(coeffs),
            PolyOp::Cyclo { n } => commands::poly_cyclo(*n),
        },
        Command::LatticeInfo { file } => commands::lattice_info(file),
        Command::Classify { file, generator } => commands::classify(file, generator.as_deref()),
        Command::Analyze {
            file,
            max_power,
            bfs_cap,
            depth,
            cert_out,
        } => commands::analyze_file(&AnalyzeArgs {
            file,
            max_power: *max_power,
            bfs_cap: *bfs_cap,
            depth: *depth,
            cert_out: cert_out.as_deref(),
        }),
        Command::Verify { input, certificate } => commands::verify(input, certificate),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let env = std::env::var("SALEMLAT_THREADS").ok();
    match thread_cap(env.as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: thread pool: {e}");
                return ExitCode::from(EXIT_INTERNAL as u8);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }

    let start = Instant::now();
    let result = run(&cli);
    let code = match result {
        Ok(outcome) => {
            if let Some((path, text)) = &outcome.certificate {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write certificate to {}: {e}", path.display());
                    return ExitCode::from(EXIT_INTERNAL as u8);
                }
            }
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.report.render(cli.format).as_bytes()).is_err() {
                return ExitCode::from(EXIT_INTERNAL as u8);
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
