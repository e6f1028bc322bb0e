//! `spinscale` command-line front end.
//!
//! Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 search exhausted.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinscale::classify::{self, canonical_witness_state, ClassificationReport};
use spinscale::scan::{self, Property, ScanConfig};
use spinscale::{Error, MapSpec, ScalingTriple, SpinLabel};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spinscale",
    version,
    about = "Classify spin polarization-scaling maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single map
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// Emit the full report as JSON
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Scan a cubic grid of scaling parameters and write CSV
    Scan {
        #[arg(long)]
        j: SpinLabel,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        max: f64,
        /// Grid points per axis (endpoints included)
        #[arg(long, default_value_t = 41)]
        steps: usize,
        /// Comma-separated subset of pos,cp,ppt,phi2cp,phi2ppt
        #[arg(long, default_value = "pos,cp,ppt,phi2cp,phi2ppt")]
        properties: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path; standard output if omitted
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Check that each column is invariant under permutations and even sign flips
        #[arg(long)]
        audit_symmetry: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Bisect the boundary of a property along a ray from the origin
    Boundary {
        #[arg(long)]
        j: SpinLabel,
        /// Ray direction a,b,c (normalized internally)
        #[arg(long, allow_hyphen_values = true)]
        direction: ScalingTriple,
        #[arg(long)]
        property: Property,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Export the Choi matrix as JSON
    Choi {
        #[command(flatten)]
        map: MapArgs,
        /// Export the partial transpose instead
        #[arg(long)]
        partial_transpose: bool,
        /// Output path; standard output if omitted
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Search for a map with CP square that fails 2-tensor-stable positivity
    Hunt {
        #[arg(long)]
        j: SpinLabel,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Spin j, e.g. 1/2, 1, 1.5
    #[arg(long)]
    j: SpinLabel,
    /// Scaling parameters a,b,c
    #[arg(long, allow_hyphen_values = true)]
    lambda: ScalingTriple,
}

impl MapArgs {
    fn spec(&self) -> MapSpec {
        MapSpec::new(self.j, self.lambda)
    }
}

#[derive(Args)]
struct TolArg {
    /// PSD tolerance relative to max(1, largest |eigenvalue|)
    #[arg(long, env = "SPINSCALE_TOL", default_value_t = spinscale::DEFAULT_PSD_TOL)]
    tol: f64,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Exhausted,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Exhausted) => ExitCode::from(EXIT_EXHAUSTED),
    }
}

fn check_tol(tol: f64) -> Result<f64, Failure> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!(
            "tolerance must be a finite number >= 0, got {tol}"
        )))
    }
}

fn output_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { map, json, tol } => {
            let report = classify::classify(&map.spec(), check_tol(tol.tol)?)?;
            let mut out = io::stdout().lock();
            if json {
                serde_json::to_writer_pretty(&mut out, &report)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(out)?;
            } else {
                print_table(&mut out, &report)?;
            }
        }
        Command::Scan {
            j,
            min,
            max,
            steps,
            properties,
            seed,
            output,
            workers,
            audit_symmetry,
            tol,
        } => {
            let config = ScanConfig {
                spin: j,
                range_min: min,
                range_max: max,
                steps,
                properties: Property::parse_list(&properties)?,
                tol: check_tol(tol.tol)?,
                seed,
            };
            config.validate()?;
            eprintln!("scan: j={} grid {}^3 over [{}, {}]", j, steps, min, max);
            let records = scan::run_scan(&config, workers, true)?;
            if audit_symmetry {
                let violations = scan::symmetry_audit(&config, &records)?;
                eprintln!("symmetry audit: {violations} violations");
                if violations > 0 {
                    return Err(Failure::Numerical(format!(
                        "symmetry audit found {violations} violations"
                    )));
                }
            }
            let mut out = output_writer(output.as_ref())?;
            scan::write_csv(&config, &records, &mut out)?;
            out.flush()?;
            eprintln!("scan: wrote {} rows", records.len());
        }
        Command::Boundary {
            j,
            direction,
            property,
            tol,
        } => {
            let r = scan::boundary_radius(j, direction.as_array(), property, check_tol(tol.tol)?)?;
            println!("{r}");
        }
        Command::Choi {
            map,
            partial_transpose,
            output,
        } => {
            let spec = map.spec();
            let m = if partial_transpose {
                spec.choi_partial_transpose()
            } else {
                spec.choi_closed_form()
            };
            let mut out = output_writer(output.as_ref())?;
            writeln!(out, "{}", m.to_json_string())?;
            out.flush()?;
        }
        Command::Hunt {
            j,
            steps,
            seed,
            tol,
        } => {
            if steps < 2 {
                return Err(Failure::Usage(format!("steps must be >= 2, got {steps}")));
            }
            let tol = check_tol(tol.tol)?;
            match classify::counterexample_hunt(j, steps, seed, tol)? {
                Some(hit) => {
                    let l = hit.lambdas;
                    println!("lambda = {},{},{}", l.lambda1, l.lambda2, l.lambda3);
                    println!("phi2_choi_min_eig = {}", hit.phi2_choi_min_eig);
                    println!("witness_min_eig = {}", hit.witness);
                    let state = canonical_witness_state(j);
                    eprintln!(
                        "witness state: (|m=j>|m=j> + |m=-j>|m=-j>)/sqrt(2) in dimension {}",
                        state.dim()
                    );
                }
                None => {
                    eprintln!("hunt: no counterexample on the {steps}^3 grid or random probes");
                    return Err(Failure::Exhausted);
                }
            }
        }
    }
    Ok(())
}

fn print_table(out: &mut impl Write, r: &ClassificationReport) -> io::Result<()> {
    let [l1, l2, l3] = r.lambda;
    writeln!(
        out,
        "j = {}, lambda = ({l1}, {l2}, {l3}), tol = {:e}",
        r.j, r.tol
    )?;
    let rows: [(&str, bool, Option<f64>); 7] = [
        ("positive (sufficient)", r.positive_sufficient, None),
        ("positive (necessary)", r.positive_necessary, None),
        (
            "positive (exact)",
            r.positive_exact,
            Some(r.min_positivity_eig),
        ),
        ("completely positive", r.cp, Some(r.min_choi_eig)),
        (
            "PPT Choi (EB-necessary)",
            r.ppt_both_signs,
            Some(r.min_ptchoi_eig),
        ),
        (
            "Phi^2 CP (2-TSP-necessary)",
            r.phi2_cp,
            Some(r.min_phi2_choi_eig),
        ),
        (
            "Phi^2 PPT (2-LEA-necessary)",
            r.phi2_ppt,
            Some(r.min_phi2_ptchoi_eig),
        ),
    ];
    for (name, value, cert) in rows {
        match cert {
            Some(c) => writeln!(out, "  {name:<28} {value:<5}  min eig {c:e}")?,
            None => writeln!(out, "  {name:<28} {value}")?,
        }
    }
    if let Some(values) = &r.closed_form_values {
        writeln!(out, "closed-form values:")?;
        for v in values {
            writeln!(out, "  {:<28} {}", v.name, v.value)?;
        }
    }
    for note in &r.notes {
        writeln!(out, "note: {note}")?;
    }
    Ok(())
}
