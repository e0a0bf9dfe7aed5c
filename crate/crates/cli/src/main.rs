//! `pavex`: load or generate paving matroids, solve exchange instances,
//! and check them against the brute-force oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paving_exchange::matroid::{make_random_paving, make_uniform};
use paving_exchange::oracle::{self, DEFAULT_CAP};
use paving_exchange::relaxation::stressed_hyperplanes;
use paving_exchange::{
    relax, relaxation_trace, validate_sequence, BasisTuple, ElementSet, Error, ExchangeSequence,
    Matroid, Solver, Validation,
};

#[derive(Parser, Debug)]
#[command(
    name = "pavex",
    version,
    about = "Basis exchange sequences for paving matroids"
)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the basis exchange axiom, and optionally a certificate.
    Validate {
        file: PathBuf,
        /// Certificate to recheck against the matroid.
        #[arg(long, requires = "to")]
        certificate: Option<PathBuf>,
        /// Tuple the certificate must end at.
        #[arg(long, requires = "certificate")]
        to: Option<PathBuf>,
    },
    /// Rank, paving flag, hyperplanes and stressed hyperplanes.
    Info { file: PathBuf },
    /// Relax a stressed hyperplane and print the new matroid.
    Relax {
        file: PathBuf,
        #[arg(long)]
        hyperplane: ElementSet,
    },
    /// Relax stressed hyperplanes until the matroid is uniform.
    Trace { file: PathBuf },
    /// Build an exchange sequence between two tuples.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        pair: Pair,
        /// Also write the certificate to this file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check every fiber of the given degree for connectivity.
    Verify {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Distance between two tuples in the fiber graph.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        pair: Pair,
        /// Print a geodesic certificate instead of the distance.
        #[arg(long)]
        shortest: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Generate a uniform or random paving matroid.
    Gen(Gen),
    /// List the quadric exchange binomials.
    Binomials { file: PathBuf },
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GenKind {
    /// `n r`, in either order; the smaller value is the rank
    #[arg(long, num_args = 2, value_names = ["N", "R"])]
    uniform: Option<Vec<usize>>,
    /// `n r k`: k random hyperplanes
    #[arg(long, num_args = 3, value_names = ["N", "R", "K"])]
    paving: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct Gen {
    #[command(flatten)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn load_matroid(path: &Path) -> Result<Matroid, Error> {
    Matroid::parse(&read(path)?)
}

fn load_tuple(path: &Path) -> Result<BasisTuple, Error> {
    BasisTuple::parse(&read(path)?)
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Validate {
            file,
            certificate,
            to,
        } => {
            let m = load_matroid(&file)?;
            match m.validate() {
                Validation::Ok => match (certificate, to) {
                    (Some(cert), Some(to)) => {
                        let seq = ExchangeSequence::parse(&read(&cert)?)?;
                        let to = load_tuple(&to)?;
                        let report = validate_sequence(&m, &seq, &to);
                        if report.is_ok() {
                            Ok(format!("certificate ok steps={}\n", seq.len()))
                        } else {
                            Err(Error::precondition(format!(
                                "certificate rejected: {report}"
                            )))
                        }
                    }
                    _ => Ok(format!(
                        "ok n={} r={} bases={}\n",
                        m.n(),
                        m.rank(),
                        m.num_bases()
                    )),
                },
                Validation::Violation {
                    a_basis,
                    b_basis,
                    element,
                } => Err(Error::precondition(format!(
                    "exchange axiom fails for A={{{a_basis}}} B={{{b_basis}}} a={element}"
                ))),
            }
        }
        Command::Info { file } => {
            let m = load_matroid(&file)?;
            let mut out = format!(
                "n={} r={} bases={} paving={}\n",
                m.n(),
                m.rank(),
                m.num_bases(),
                m.is_paving()
            );
            for h in m.hyperplanes() {
                out.push_str(&format!("hyperplane {h}\n"));
            }
            for h in stressed_hyperplanes(&m) {
                out.push_str(&format!("stressed {h}\n"));
            }
            Ok(out)
        }
        Command::Relax { file, hyperplane } => {
            let m = load_matroid(&file)?;
            Ok(relax(&m, hyperplane)?.to_text())
        }
        Command::Trace { file } => {
            let m = load_matroid(&file)?;
            Ok(relaxation_trace(&m)?.to_text())
        }
        Command::Solve {
            file,
            pair,
            certificate,
        } => {
            let m = load_matroid(&file)?;
            let from = load_tuple(&pair.from)?;
            let to = load_tuple(&pair.to)?;
            let mut solver = Solver::new();
            let seq = solver.solve(&m, &from, &to)?;
            let text = seq.to_text();
            if let Some(path) = certificate {
                write(&path, &text)?;
            }
            Ok(text)
        }
        Command::Verify { file, degree, cap } => {
            let m = load_matroid(&file)?;
            let report = oracle::verify_white(&m, degree, cap)?;
            Ok(report.to_text())
        }
        Command::Oracle {
            file,
            pair,
            shortest,
            cap,
        } => {
            let m = load_matroid(&file)?;
            let from = load_tuple(&pair.from)?;
            let to = load_tuple(&pair.to)?;
            let seq = oracle::shortest_sequence(&m, &from, &to, cap)?;
            if shortest {
                Ok(seq.to_text())
            } else {
                Ok(format!("distance={}\n", seq.len()))
            }
        }
        Command::Gen(gen) => {
            let m = match (gen.kind.uniform, gen.kind.paving) {
                (Some(u), None) => make_uniform(u[0].max(u[1]), u[0].min(u[1]))?,
                (None, Some(p)) => make_random_paving(p[0], p[1], p[2], gen.seed)?,
                _ => {
                    return Err(Error::precondition(
                        "give exactly one of --uniform, --paving",
                    ))
                }
            };
            Ok(m.to_text())
        }
        Command::Binomials { file } => {
            let m = load_matroid(&file)?;
            let mut out = String::new();
            for b in oracle::emit_quadric_binomials(&m) {
                out.push_str(&format!("{b}\n"));
            }
            Ok(out)
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn exit_code(err: &Error) -> u8 {
    if err.is_internal() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| match &out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
