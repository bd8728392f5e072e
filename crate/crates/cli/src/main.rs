use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qchannel_core::algebra::{
    dead_subspace, fix_equals_commutant, fixed_point_set, interaction_algebra, noise_commutant, noiseless_subsystems,
    wedderburn_structure, OperatorSpace,
};
use qchannel_core::algorithms::{deutsch, deutsch_jozsa, is_permutation_matrix, modular_adder, quantum_parallelism};
use qchannel_core::channels::{channels_equal, choi_distance, classify, classify_choi, kraus_from_choi, kraus_intertwiner};
use qchannel_core::io::{MatrixDoc, StateDoc};
use qchannel_core::qec::{build_recovery, correctability, detect, verify_recovery, VERIFY_RANDOM_STATES};
use qchannel_core::Error;

mod input;
mod report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "Io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_precondition() => 3,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "qchannel", version, about = "Quantum channels, error correction and noiseless subsystems")]
struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Do not print the report to stdout.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CP, TP and unital tests for a Kraus list or a Choi matrix.
    Classify {
        #[arg(long, required_unless_present = "choi", conflicts_with = "choi")]
        channel: Option<String>,
        #[arg(long)]
        choi: Option<String>,
    },
    /// Choi matrix of a channel.
    Choi {
        #[arg(long)]
        channel: String,
    },
    /// Kraus operators extracted from a Choi matrix.
    KrausFromChoi {
        #[arg(long)]
        choi: String,
    },
    /// Whether two Kraus lists define the same map, with the unitary relating them.
    ChannelsEqual {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Whether a single error is detectable by a code.
    Detect {
        #[arg(long)]
        code: String,
        #[arg(long)]
        error: String,
    },
    /// Knill-Laflamme test for a list of errors.
    Correctable {
        #[arg(long)]
        code: String,
        #[arg(long)]
        errors: String,
    },
    /// Recovery channel for a correctable error list.
    Recovery {
        #[arg(long)]
        code: String,
        #[arg(long)]
        errors: String,
    },
    /// Worst deviation of R(E(ρ)) from ρ over seeded random code states.
    VerifyRecovery {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        recovery: String,
        #[arg(long)]
        code: String,
    },
    /// Noise commutant of a channel.
    Commutant {
        #[arg(long)]
        channel: String,
    },
    /// Algebra generated by the Kraus operators and their adjoints.
    InteractionAlgebra {
        #[arg(long)]
        channel: String,
    },
    /// Fixed points of a channel.
    Fix {
        #[arg(long)]
        channel: String,
    },
    /// Compares the fixed points with the noise commutant.
    FixVsCommutant {
        #[arg(long)]
        channel: String,
    },
    /// Block structure of the noise commutant, or of the algebra spanned by given operators.
    Structure {
        #[arg(long, required_unless_present = "algebra", conflicts_with = "algebra")]
        channel: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Noiseless subsystems of a unital channel.
    Noiseless {
        #[arg(long)]
        channel: String,
    },
    /// Subspace annihilated by a map whose E(I) is singular.
    DeadSubspace {
        #[arg(long)]
        channel: String,
    },
    /// Deutsch's algorithm for f: {0,1} -> {0,1}.
    Deutsch {
        #[arg(long)]
        oracle: String,
    },
    /// Deutsch-Jozsa algorithm for a constant-or-balanced f.
    DeutschJozsa {
        #[arg(long)]
        oracle: String,
    },
    /// State after one oracle call on a uniform superposition.
    Parallelism {
        #[arg(long)]
        oracle: String,
    },
    /// Modular adder on two n-qubit registers.
    Adder {
        #[arg(long)]
        n: usize,
    },
}

const CHOI_THEOREM: &str = "Choi's theorem: positivity of the Choi matrix characterizes complete positivity";
const UNITARY_FREEDOM: &str = "unitary freedom: Kraus lists of one channel are related by a scalar unitary";
const DETECTION: &str = "error detection: P E P = λ P";
const KNILL_LAFLAMME: &str = "Knill-Laflamme conditions: P E_i† E_j P = λ_ij P";
const RECOVERY: &str = "Knill-Laflamme recovery construction";
const CORRECTION: &str = "error correction: R(E(ρ)) = ρ on the code";
const COMMUTANT: &str = "noise commutant A' = {ρ : [ρ, E_i] = 0 = [ρ, E_i†]}";
const INTERACTION: &str = "interaction algebra Alg{E_i, E_i†}";
const FIXED_POINTS: &str = "fixed points Fix(E) = {ρ : E(ρ) = ρ}";
const FIX_THEOREM: &str = "for a unital channel Fix(E) equals the noise commutant";
const STRUCTURE: &str = "structure theorem: A ≅ ⊕ 1_m ⊗ M_n";
const NOISELESS: &str = "noiseless subsystems from the structure of the noise commutant";
const DEAD: &str = "dead subspace of a map with singular E(I)";
const DEUTSCH: &str = "Deutsch's algorithm";
const DEUTSCH_JOZSA: &str = "Deutsch-Jozsa algorithm";
const PARALLELISM: &str = "quantum parallelism: U_f on a uniform superposition";
const ADDER: &str = "reversible modular adder";

fn json<S: Serialize>(report: &S) -> String {
    serde_json::to_string(report).expect("reports contain only finite numbers and strings")
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let tol = cli.tol;
    let seed = cli.seed;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")).into());
    }
    let text = match &cli.command {
        Command::Classify { channel, choi } => match (channel, choi) {
            (Some(path), _) => {
                let ch = input::channel(path)?;
                let c = classify(&ch, tol);
                let min = if ch.dim() <= 16 { Some(ch.choi().min_eigenvalue(tol)?) } else { None };
                json(&report::Classify {
                    dim: ch.dim(),
                    kraus_operators: Some(ch.len()),
                    completely_positive: c.completely_positive,
                    trace_preserving: c.trace_preserving,
                    unital: c.unital,
                    choi_min_eigenvalue: min,
                    paper_ref: CHOI_THEOREM,
                })
            }
            (None, Some(path)) => {
                let r = input::choi(path)?;
                let c = classify_choi(&r, tol);
                json(&report::Classify {
                    dim: r.block_dim(),
                    kraus_operators: None,
                    completely_positive: c.completely_positive,
                    trace_preserving: c.trace_preserving,
                    unital: c.unital,
                    choi_min_eigenvalue: Some(r.min_eigenvalue(tol)?),
                    paper_ref: CHOI_THEOREM,
                })
            }
            (None, None) => unreachable!("clap requires one of --channel and --choi"),
        },
        Command::Choi { channel } => {
            let r = input::channel(channel)?.choi();
            json(&report::Choi { block_dim: r.block_dim(), matrix: MatrixDoc::from(r.matrix()), paper_ref: CHOI_THEOREM })
        }
        Command::KrausFromChoi { choi } => {
            let ch = kraus_from_choi(&input::choi(choi)?, tol)?;
            json(&report::Kraus {
                dim: ch.dim(),
                kraus: ch.operators().iter().map(MatrixDoc::from).collect(),
                cp_only: (!ch.is_trace_preserving()).then_some(true),
                paper_ref: CHOI_THEOREM,
            })
        }
        Command::ChannelsEqual { a, b } => {
            let (a, b) = (input::channel(a)?, input::channel(b)?);
            let equal = channels_equal(&a, &b, tol)?;
            let intertwiner = kraus_intertwiner(&a, &b, tol)?.map(|w| report::IntertwinerDoc {
                unitary: MatrixDoc::from(&w.unitary),
                residual: w.residual,
                unitary_residual: w.unitary_residual,
            });
            json(&report::ChannelsEqual { equal, choi_distance: choi_distance(&a, &b)?, intertwiner, paper_ref: UNITARY_FREEDOM })
        }
        Command::Detect { code, error } => {
            let d = detect(&input::code(code)?, &input::matrix(error)?, tol)?;
            json(&report::Detect {
                detectable: d.detectable,
                lambda: d.lambda.map(|z| [z.re, z.im]),
                residual: d.residual,
                paper_ref: DETECTION,
            })
        }
        Command::Correctable { code, errors } => {
            let c = correctability(&input::code(code)?, &input::operators(errors)?, tol)?;
            json(&report::Correctable {
                correctable: c.correctable,
                lambda: c.lambda.as_ref().map(MatrixDoc::from),
                offending: c.offending.map(|(i, j)| [i + 1, j + 1]),
                residual: c.residual,
                paper_ref: KNILL_LAFLAMME,
            })
        }
        Command::Recovery { code, errors } => {
            let code = input::code(code)?;
            let errors = input::operators(errors)?;
            let c = correctability(&code, &errors, tol)?;
            let Some(lambda) = c.lambda else {
                let (i, j) = c.offending.map_or((0, 0), |(i, j)| (i + 1, j + 1));
                return Err(Error::ConditionViolated(format!(
                    "errors {i} and {j} violate the Knill-Laflamme conditions (residual {})",
                    c.residual
                ))
                .into());
            };
            let rec = build_recovery(&code, &errors, &lambda, tol)?;
            json(&report::Recovery {
                ambient_dim: code.ambient_dim(),
                code_dim: code.code_dim(),
                syndromes: rec.len(),
                completed: rec.completed,
                lambda_eigenvalues: rec.lambda_eigenvalues.clone(),
                recovery: report::ChannelBody {
                    dim: rec.channel.dim(),
                    kraus: rec.channel.operators().iter().map(MatrixDoc::from).collect(),
                },
                paper_ref: RECOVERY,
            })
        }
        Command::VerifyRecovery { channel, recovery, code } => {
            let deviation = verify_recovery(&input::channel(channel)?, &input::recovery(recovery)?, &input::code(code)?, seed)?;
            json(&report::VerifyRecovery {
                states: VERIFY_RANDOM_STATES,
                deviation,
                restored: deviation <= tol,
                paper_ref: CORRECTION,
            })
        }
        Command::Commutant { channel } => json(&report::Space::new(&noise_commutant(&input::channel(channel)?, tol), COMMUTANT)),
        Command::InteractionAlgebra { channel } => {
            json(&report::Space::new(&interaction_algebra(&input::channel(channel)?), INTERACTION))
        }
        Command::Fix { channel } => json(&report::Space::new(&fixed_point_set(&input::channel(channel)?, tol), FIXED_POINTS)),
        Command::FixVsCommutant { channel } => {
            let r = fix_equals_commutant(&input::channel(channel)?, tol)?;
            json(&report::FixVsCommutant {
                equal: r.equal,
                unital: r.unital,
                fix_dimension: r.fixed.dimension(),
                commutant_dimension: r.commutant.dimension(),
                paper_ref: FIX_THEOREM,
            })
        }
        Command::Structure { channel, algebra } => {
            let space = match (channel, algebra) {
                (Some(path), _) => noise_commutant(&input::channel(path)?, tol),
                (None, Some(path)) => {
                    let ops = input::operators(path)?;
                    OperatorSpace::span(ops[0].rows(), &ops)?
                }
                (None, None) => unreachable!("clap requires one of --channel and --algebra"),
            };
            json(&report::Structure::new(&wedderburn_structure(&space, tol, seed)?, STRUCTURE))
        }
        Command::Noiseless { channel } => {
            json(&report::Noiseless::new(&noiseless_subsystems(&input::channel(channel)?, tol, seed)?, NOISELESS))
        }
        Command::DeadSubspace { channel } => {
            let ch = input::channel(channel)?;
            let r = match dead_subspace(&ch, tol)? {
                Some(d) => report::DeadSubspace {
                    singular: true,
                    identity_image: MatrixDoc::from(&d.identity_image),
                    dead_dimension: d.dead_basis.len(),
                    dead_basis: d.dead_basis.iter().map(|v| StateDoc::from_slice(v)).collect(),
                    hypothesis_holds: Some(d.hypothesis_holds),
                    annihilation_residual: d.annihilation_residual,
                    paper_ref: DEAD,
                },
                None => report::DeadSubspace {
                    singular: false,
                    identity_image: MatrixDoc::from(&ch.identity_image()),
                    dead_dimension: 0,
                    dead_basis: Vec::new(),
                    hypothesis_holds: None,
                    annihilation_residual: None,
                    paper_ref: DEAD,
                },
            };
            json(&r)
        }
        Command::Deutsch { oracle } => {
            let v = deutsch::<f64>(&input::oracle(oracle)?)?;
            json(&report::Verdict {
                verdict: v.verdict.to_string(),
                probability: v.probability,
                zero_probability: v.zero_probability,
                paper_ref: DEUTSCH,
            })
        }
        Command::DeutschJozsa { oracle } => {
            let v = deutsch_jozsa::<f64>(&input::oracle(oracle)?)?;
            json(&report::Verdict {
                verdict: v.verdict.to_string(),
                probability: v.probability,
                zero_probability: v.zero_probability,
                paper_ref: DEUTSCH_JOZSA,
            })
        }
        Command::Parallelism { oracle } => {
            let f = input::oracle(oracle)?;
            let psi = quantum_parallelism::<f64>(&f);
            let a = psi.amplitudes();
            let terms = (0..1usize << f.m())
                .map(|x| {
                    let fx = f.eval(x);
                    let z = a[(x << f.k()) | fx];
                    report::Term { x, fx, amplitude: [z.re, z.im] }
                })
                .collect();
            json(&report::Parallelism { m: f.m(), k: f.k(), terms, state: StateDoc::from_slice(a), paper_ref: PARALLELISM })
        }
        Command::Adder { n } => {
            let u = modular_adder::<f64>(*n)?;
            let images = (0..u.cols()).map(|j| (0..u.rows()).find(|&i| u[(i, j)].re == 1.0).unwrap_or(usize::MAX)).collect();
            json(&report::Adder {
                n: *n,
                dim: u.rows(),
                permutation_matrix: is_permutation_matrix(&u),
                images,
                paper_ref: ADDER,
            })
        }
    };
    Ok(text)
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|text| {
        if let Some(path) = &cli.out {
            fs::write(path, format!("{text}\n"))
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        } else if !cli.quiet {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(stdout, "{text}");
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = json(&ErrorLine { error: e.kind(), message: e.to_string() });
            let _ = writeln!(std::io::stderr(), "{line}");
            ExitCode::from(e.exit_code())
        }
    }
}
