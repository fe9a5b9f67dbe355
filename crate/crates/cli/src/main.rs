//! `aps`: homology of link diagrams in punctured spheres.
//!
//! Exit codes: 0 ok, 2 input error, 3 internal invariant breach, 4 property failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use aps_core::complex::{assemble, ComplexDocument, COMPLEX_FORMAT};
use aps_core::detect::detect;
use aps_core::fuzz::{fuzz_diagrams, FuzzConfig};
use aps_core::linalg::Ring;
use aps_core::report::{
    compute_report, cube_stats, detection_report, verify_complex, verify_diagram, PropertyReport, Report,
};
use aps_core::{parse_diagram, Diagram, Error, KinkSide, MoveSite};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aps", version, about = "Homology of link diagrams in punctured spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    /// Print timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    Z,
    Q,
    F2,
    All,
}

impl RingArg {
    fn rings(self) -> Vec<Ring> {
        match self {
            RingArg::Z => vec![Ring::Integers],
            RingArg::Q => vec![Ring::Rationals],
            RingArg::F2 => vec![Ring::F2],
            RingArg::All => Ring::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MoveArg {
    R1,
    R2,
    R3,
    R1Inverse,
    R2Inverse,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a diagram.
    Validate { input: PathBuf },
    /// Homology over the chosen rings.
    Compute {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RingArg::All)]
        ring: RingArg,
        /// Also write the complex in the aps-complex/1 format.
        #[arg(long, value_name = "PATH")]
        dump_complex: Option<PathBuf>,
    },
    /// Check D² = 0, the Euler identity, winding homogeneity and the
    /// universal coefficient relation on a diagram, a complex dump, or
    /// random diagrams.
    Verify {
        #[arg(required_unless_present = "fuzz")]
        input: Option<PathBuf>,
        /// Number of random diagrams to check instead of an input file.
        #[arg(long, value_name = "N")]
        fuzz: Option<usize>,
        #[arg(long, value_name = "K", default_value_t = 8)]
        max_crossings: usize,
        #[arg(long, value_name = "P", default_value_t = 4)]
        max_punctures: usize,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
    },
    /// Mod-2 rank and the rank-two verdict.
    Detect { input: PathBuf },
    /// Apply a Reidemeister move and print the new diagram, or list the sites.
    Move {
        input: PathBuf,
        #[arg(long = "move", value_enum)]
        kind: MoveArg,
        /// Dart label locating the move.
        #[arg(long, required_unless_present = "list")]
        dart: Option<i64>,
        /// Second dart for R2.
        #[arg(long)]
        second: Option<i64>,
        /// R1: put the kink on the right of the dart.
        #[arg(long)]
        right: bool,
        /// R1: the strand passes under first. R2: the first strand goes over.
        #[arg(long)]
        over: bool,
        /// List the sites where the move can be tried.
        #[arg(long)]
        list: bool,
    },
    /// Statistics of the cube of resolutions.
    Cube { input: PathBuf },
}

enum Failure {
    Input(String),
    Internal(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Diagram, Failure> {
    Ok(parse_diagram(&read(path)?)?)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn human_report(r: &Report) -> String {
    let mut s = String::new();
    let d = &r.diagram;
    writeln!(s, "crossings {}  components {}  punctures {}", d.crossings, d.components, d.punctures.join(" ")).unwrap();
    for h in &r.homology {
        writeln!(s, "{}: total rank {}", h.ring, h.total_rank).unwrap();
        writeln!(s, "  degree  dim  betti  torsion").unwrap();
        for g in &h.degrees {
            let torsion: Vec<String> = g.torsion.iter().map(|t| format!("Z/{t}")).collect();
            writeln!(s, "  {:>6}  {:>3}  {:>5}  {}", g.degree, g.chain_dim, g.betti, torsion.join(" ")).unwrap();
        }
    }
    if let Some(v) = r.verdict {
        writeln!(s, "verdict: {v:?}").unwrap();
    }
    s
}

fn human_properties(p: &PropertyReport) -> String {
    let mark = |v: Option<bool>| match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    };
    format!(
        "d_squared_zero       {}\neuler_identity       {}\nwinding_homogeneous  {}\nuct_consistent       {}\nrank_at_least_two    {}\n",
        mark(Some(p.d_squared_zero)),
        mark(p.euler_identity),
        mark(p.winding_homogeneous),
        mark(p.uct_consistent),
        mark(p.rank_at_least_two)
    )
}

fn properties_outcome(p: PropertyReport, format: Format) -> Outcome {
    let out = match format {
        Format::Json => json(&p),
        Format::Human => human_properties(&p),
    };
    if p.passed() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Property(format!("failed: {}", p.failures().join(", "))))
    }
}

fn verify_file(path: &Path, format: Format) -> Outcome {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let p = if value.get("format").and_then(|f| f.as_str()) == Some(COMPLEX_FORMAT) {
        let doc: ComplexDocument =
            serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        verify_complex(&doc.to_matrices()?)?
    } else {
        verify_diagram(&parse_diagram(&text)?)?
    };
    properties_outcome(p, format)
}

fn verify_fuzz(n: usize, cfg: FuzzConfig, seed: u64, format: Format) -> Outcome {
    let mut failed = Vec::new();
    for (i, d) in fuzz_diagrams(seed, n, cfg).iter().enumerate() {
        let p = verify_diagram(d)?;
        if !p.passed() {
            failed.push(serde_json::json!({ "index": i, "failures": p.failures(), "diagram": d.to_document() }));
        }
    }
    let out = match format {
        Format::Json => json(&serde_json::json!({ "checked": n, "seed": seed, "failed": failed })),
        Format::Human => format!("{} of {n} random diagrams pass (seed {seed})\n", n - failed.len()),
    };
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Property(format!("{} random diagrams failed", failed.len())))
    }
}

fn move_site(kind: MoveArg, dart: i64, second: Option<i64>, right: bool, over: bool) -> Result<MoveSite, Failure> {
    Ok(match kind {
        MoveArg::R1 => MoveSite::R1 {
            dart,
            side: if right { KinkSide::Right } else { KinkSide::Left },
            under_first: !over,
        },
        MoveArg::R2 => MoveSite::R2 {
            first: dart,
            second: second.ok_or_else(|| Failure::Input("R2 needs --second".into()))?,
            first_over: over,
        },
        MoveArg::R3 => MoveSite::R3 { dart },
        MoveArg::R1Inverse => MoveSite::R1Inverse { dart },
        MoveArg::R2Inverse => MoveSite::R2Inverse { dart },
    })
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Validate { input } => {
            let d = load(&input)?;
            Ok(match format {
                Format::Json => json(&d.to_document()),
                Format::Human => format!(
                    "valid: {} crossings, {} components, {} regions, punctures {}\n",
                    d.crossing_count(),
                    d.num_components(),
                    d.num_regions(),
                    d.surface().punctures().join(" ")
                ),
            })
        }
        Command::Compute {
            input,
            ring,
            dump_complex,
        } => {
            let d = load(&input)?;
            let rings = ring.rings();
            if let Some(path) = dump_complex {
                let c = assemble(&d, rings[0])?;
                std::fs::write(&path, json(&c.to_document()) + "\n")
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            let r = compute_report(&d, &rings)?;
            Ok(match format {
                Format::Json => r.to_json(),
                Format::Human => human_report(&r),
            })
        }
        Command::Verify {
            input,
            fuzz,
            max_crossings,
            max_punctures,
            seed,
        } => match (fuzz, input) {
            (Some(n), _) => verify_fuzz(
                n,
                FuzzConfig {
                    max_crossings,
                    max_punctures,
                },
                seed,
                format,
            ),
            (None, Some(path)) => verify_file(&path, format),
            (None, None) => unreachable!("clap requires an input without --fuzz"),
        },
        Command::Detect { input } => {
            let d = load(&input)?;
            let v = detect(&d)?;
            Ok(match format {
                Format::Json => detection_report(&v, &d).to_json(),
                Format::Human => format!("rank mod 2: {}\nverdict: {:?}\n", v.total_rank_mod2, v.verdict),
            })
        }
        Command::Move {
            input,
            kind,
            dart,
            second,
            right,
            over,
            list,
        } => {
            let d = load(&input)?;
            if list {
                let sites = match kind {
                    MoveArg::R1 => d.r1_sites(),
                    MoveArg::R2 => d.r2_sites(),
                    MoveArg::R3 => d.r3_sites(),
                    MoveArg::R1Inverse => d.r1_inverse_sites(),
                    MoveArg::R2Inverse => d.r2_inverse_sites(),
                };
                return Ok(sites.iter().map(|s| format!("{s:?}\n")).collect());
            }
            let site = move_site(kind, dart.expect("clap requires --dart"), second, right, over)?;
            Ok(d.apply_move(site)?.to_json())
        }
        Command::Cube { input } => {
            let s = cube_stats(&load(&input)?)?;
            Ok(match format {
                Format::Json => json(&s),
                Format::Human => format!(
                    "states {}\ncircles per state {:?}\nessential circles {}\nmerges {}  splits {}\n",
                    s.states, s.circles, s.essential_circles, s.merges, s.splits
                ),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (threads, verbose) = (cli.threads as usize, cli.verbose);
    let start = Instant::now();
    let outcome = aps_core::with_threads(threads, || run(cli));
    if verbose {
        eprintln!("elapsed {:.3}s on {threads} threads", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Property(m)) => {
            eprintln!("{m}");
            ExitCode::from(4)
        }
    }
}
