//! Command-line interface for inspecting, solving and exporting
//! value-assignment systems in the `.bks` format.
//!
//! Exit codes: 0 = success, 1 = structural or verification failure,
//! 2 = parse or usage error. The solver verdict itself never affects the
//! exit code.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bks_core::{
    backtrack_solve, brute_force, build_report, build_singlet_relation, catalog, catalog_entry,
    classify_equation, count_propositions, export_cnf, export_dot, find_parity_certificate,
    is_orthogonal_basis, parse_system, serialize_system, state_substitution,
    verify_parity_certificate, CountMode, EquationSystem, ProofEntry, ProofKind, Provenance, Ray,
    SolverOutcome,
};

#[derive(Parser)]
#[command(
    name = "bks",
    version,
    about = "Exact verification of Bell-Kochen-Specker value-assignment systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the built-in proof catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Re-derive every equation of a file from its geometry.
    Verify { file: PathBuf },
    /// Decide satisfiability.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Backtrack)]
        method: Method,
    },
    /// Search for a parity-contradiction certificate.
    Parity { file: PathBuf },
    /// Substitute the values forced by the file's state line.
    DeriveState { file: PathBuf },
    /// Derive the singlet anticorrelation relation for four factorizable rays.
    SingletRelation { file: PathBuf },
    /// Count the propositions involved in a proof.
    Count {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Append zero components to every ray.
    Lift {
        file: PathBuf,
        #[arg(long)]
        zeros: usize,
    },
    /// Export the system as a graph or CNF.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
    },
    /// Print the full verification report.
    Report { file: PathBuf },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the catalog entries.
    List,
    /// Print one entry as a `.bks` document.
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Backtrack,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ConditionD,
    Full,
    FullWithState,
}

impl From<ModeArg> for CountMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::ConditionD => CountMode::ConditionD,
            ModeArg::Full => CountMode::Full,
            ModeArg::FullWithState => CountMode::FullWithState,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Cnf,
}

enum CliError {
    /// Structural or verification failure: exit code 1.
    Failure(String),
    /// Parse or usage error: exit code 2.
    Usage(String),
}

fn load(file: &PathBuf) -> Result<EquationSystem, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let mut system =
        parse_system(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    if system.name().is_empty() {
        if let Some(stem) = file.file_stem().and_then(|s| s.to_str()) {
            system.set_name(stem);
        }
    }
    Ok(system)
}

fn print_outcome(system: &EquationSystem, outcome: &SolverOutcome) {
    println!("{}", outcome.verdict);
    println!("nodes explored: {}", outcome.nodes_explored);
    if let Some(witness) = &outcome.witness {
        for (i, ray) in system.rays().iter().enumerate() {
            println!("v{ray} = {}", witness.values()[i] as u8);
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for entry in catalog() {
                    println!(
                        "{}  ({}, {} rays, {} equations)",
                        entry.name,
                        entry.kind,
                        entry.system.var_count(),
                        entry.system.equations().len()
                    );
                }
                Ok(())
            }
            CatalogAction::Show { name } => match catalog_entry(&name) {
                Some(entry) => {
                    print!("{}", serialize_system(&entry.system));
                    Ok(())
                }
                None => {
                    let names: Vec<String> =
                        catalog().into_iter().map(|entry| entry.name).collect();
                    Err(CliError::Usage(format!(
                        "unknown catalog entry `{name}`; available: {}",
                        names.join(", ")
                    )))
                }
            },
        },
        Command::Verify { file } => {
            let system = load(&file)?;
            let mut failed = Vec::new();
            for eq in system.equations() {
                let provenance = classify_equation(&system, eq);
                match provenance {
                    Provenance::Unclassified => {
                        println!("eq {}: FAILED (no geometric justification)", eq.label());
                        failed.push(eq.label().to_string());
                    }
                    _ => println!("eq {}: {provenance} ok", eq.label()),
                }
            }
            if failed.is_empty() {
                println!("verification passed");
                Ok(())
            } else {
                Err(CliError::Failure(format!(
                    "verification failed for equation(s) {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Solve { file, method } => {
            let system = load(&file)?;
            let outcome = match method {
                Method::Brute => brute_force(&system)
                    .map_err(|e| CliError::Failure(format!("brute force: {e}")))?,
                Method::Backtrack => backtrack_solve(&system),
            };
            print_outcome(&system, &outcome);
            Ok(())
        }
        Command::Parity { file } => {
            let system = load(&file)?;
            match find_parity_certificate(&system) {
                Some(cert) => {
                    let verified = verify_parity_certificate(&system, &cert)
                        .expect("certificate indices come from the finder");
                    assert!(verified, "finder returned an unverifiable certificate");
                    let labels: Vec<&str> = cert
                        .equation_indices()
                        .iter()
                        .map(|&i| system.equations()[i].label())
                        .collect();
                    println!("parity certificate: equations {{{}}}", labels.join(", "));
                    println!("verified: mod-2 sum of the selected equations is 0 = 1");
                }
                None => println!("no parity certificate"),
            }
            Ok(())
        }
        Command::DeriveState { file } => {
            let system = load(&file)?;
            let Some(state) = system.state().cloned() else {
                return Err(CliError::Usage(format!(
                    "{} has no state line",
                    file.display()
                )));
            };
            let derived = state_substitution(&system, &state)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            print!("{}", serialize_system(&derived));
            for elimination in derived.eliminations() {
                println!("# eliminated {elimination}");
            }
            Ok(())
        }
        Command::SingletRelation { file } => {
            let system = load(&file)?;
            let rays: Vec<Ray> = if system.var_count() == 4 {
                system.rays().to_vec()
            } else {
                // Fall back to the unique four-ray unit-sum equation that
                // is not a resolution of the identity.
                let candidates: Vec<Vec<Ray>> = system
                    .equations()
                    .iter()
                    .filter(|eq| eq.constant() == 1 && eq.rhs().is_empty() && eq.lhs().len() == 4)
                    .map(|eq| {
                        eq.lhs()
                            .iter()
                            .map(|&v| system.ray(v).clone())
                            .collect::<Vec<Ray>>()
                    })
                    .filter(|rays| is_orthogonal_basis(rays, system.dim()) != Ok(true))
                    .collect();
                match candidates.len() {
                    1 => candidates.into_iter().next().unwrap(),
                    _ => {
                        return Err(CliError::Usage(
                            "expected a file with exactly 4 rays, or exactly one \
                             non-basis unit-sum equation over 4 rays"
                                .into(),
                        ))
                    }
                }
            };
            let mut scratch = EquationSystem::new(system.name(), 4);
            let (equation, derivation) = build_singlet_relation(&mut scratch, &rays, "relation")
                .map_err(|e| CliError::Failure(e.to_string()))?;
            for (ray, (u, w)) in derivation.input_rays.iter().zip(&derivation.factorizations) {
                println!("v{ray} = v({u}) v({w})");
            }
            println!("anticorrelation substitution onto particle 1:");
            for (a, b) in &derivation.substituted_terms {
                println!("  v({a}^(1)) v({b}^(1))");
            }
            println!(
                "cross products of bases {{{}, {}}} x {{{}, {}}}",
                derivation.basis_one.0,
                derivation.basis_one.1,
                derivation.basis_two.0,
                derivation.basis_two.1
            );
            let terms: Vec<String> = equation
                .lhs()
                .iter()
                .map(|&v| format!("v{}", scratch.ray(v)))
                .collect();
            println!("derived relation: {} = 1", terms.join(" + "));
            Ok(())
        }
        Command::Count { file, mode } => {
            let system = load(&file)?;
            let kind = if system.state().is_some() {
                ProofKind::StateSpecific
            } else {
                ProofKind::StateIndependent
            };
            let entry = ProofEntry {
                name: system.name().to_string(),
                system,
                kind,
                notes: String::new(),
            };
            let count = count_propositions(&entry, mode.into())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            println!("{count}");
            Ok(())
        }
        Command::Lift { file, zeros } => {
            let system = load(&file)?;
            print!("{}", serialize_system(&system.lift(zeros)));
            Ok(())
        }
        Command::Export { file, format } => {
            let system = load(&file)?;
            match format {
                FormatArg::Dot => print!("{}", export_dot(&system)),
                FormatArg::Cnf => {
                    let cnf = export_cnf(&system).map_err(|e| CliError::Failure(e.to_string()))?;
                    print!("{cnf}");
                }
            }
            Ok(())
        }
        Command::Report { file } => {
            let system = load(&file)?;
            let report = build_report(&system);
            print!("{report}");
            if report.structurally_sound() {
                Ok(())
            } else {
                Err(CliError::Failure(
                    "at least one equation has no geometric justification".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the output pipe closes early (e.g. `bks ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
