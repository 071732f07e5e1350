//! Command line front end. [`run_cli`] takes the argument list and output
//! streams so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 semantic failure (a check failed, a machine was
//! rejected), 2 usage or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use crate::conversion::{
    mealy_to_moore_labeled, moore_to_mealy_labeled, projection_witness, roundtrip_check, verify_covering, Automaton,
};
use crate::dadic::{EpWord, Radix};
use crate::error::Error;
use crate::format::{parse_machine_file, print_mealy, print_moore, Machine};
use crate::mealy::MealyMachine;
use crate::moore::MooreMachine;
use crate::vanderput::{CoefficientSource, MachineCoefficients, Portrait, Variant};
use crate::BigRational;

#[derive(Parser, Debug)]
#[command(name = "lipaut", version, about = "Mealy and Moore automata for 1-Lipschitz maps on d-adic integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced van der Put coefficients of a Mealy machine
    Vdp {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
        #[arg(long, default_value_t = 16)]
        count: u64,
        /// Use b̃_0 = f(0) and b̃_n = (f(n) − f(n_))/d^⌊log n⌋ for every n > 0
        #[arg(long)]
        schikhof: bool,
    },
    /// Convert between Mealy and Moore machines
    #[command(subcommand)]
    Convert(Convert),
    /// Apply a machine to inputs
    #[command(subcommand)]
    Eval(Eval),
    /// Print a prefix of the coefficient sequence
    Seq {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
        #[arg(long, default_value_t = 16)]
        count: u64,
        /// Print rational values instead of digit words
        #[arg(long)]
        rational: bool,
    },
    /// Label the d-ary tree up to a depth with coefficients
    Portrait {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Minimize a machine
    Minimize {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Verify structural properties
    #[command(subcommand)]
    Check(Check),
}

#[derive(Args, Debug)]
struct StateArg {
    /// Start state of a Mealy machine (defaults to the file's start state)
    #[arg(long)]
    state: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Convert {
    MealyToMoore {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
        #[command(flatten)]
        output: ConvertOutput,
    },
    MooreToMealy {
        file: PathBuf,
        #[command(flatten)]
        output: ConvertOutput,
    },
}

#[derive(Args, Debug)]
struct ConvertOutput {
    #[arg(long)]
    minimize: bool,
    #[arg(long)]
    dot: bool,
    /// Append the search label of every state as comments
    #[arg(long, conflicts_with_all = ["minimize", "dot"])]
    labels: bool,
}

#[derive(Subcommand, Debug)]
enum Eval {
    /// Images of finite words (`0110`) or eventually periodic literals (`1(0)`)
    Mealy {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
        /// Read inputs as rationals with denominators coprime to d
        #[arg(long)]
        rational: bool,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Terms a_n of the generated sequence
    Moore {
        file: PathBuf,
        #[arg(long)]
        rational: bool,
        #[arg(required = true)]
        indices: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Mealy → Moore and verify the underlying graph covers the source
    Cover {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
    },
    /// Mealy → Moore → Mealy and compare minimized machines
    Roundtrip {
        file: PathBuf,
        #[command(flatten)]
        state: StateArg,
    },
}

enum Failure {
    Usage(String),
    Semantic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidLiteral(_)
            | Error::InvalidRadix(_)
            | Error::DigitOutOfRange { .. }
            | Error::EmptyPeriod => Failure::Usage(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs the tool on `args` (including the program name) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let outcome = dispatch(cli.command, &mut warnings);
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match outcome {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Semantic(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn load(path: &Path, warnings: &mut Vec<String>) -> std::result::Result<Machine, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let machine = parse_machine_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    warnings.extend(machine.warnings());
    Ok(machine)
}

fn load_mealy(path: &Path, state: &StateArg, warnings: &mut Vec<String>) -> std::result::Result<MealyMachine, Failure> {
    match load(path, warnings)? {
        Machine::Mealy(m) => match &state.state {
            Some(name) => Ok(m.rooted_at(m.state(name)?)),
            None => Ok(m),
        },
        Machine::Moore(_) => Err(Failure::Semantic(format!("{} holds a Moore machine, expected Mealy", path.display()))),
    }
}

fn load_moore(path: &Path, warnings: &mut Vec<String>) -> std::result::Result<MooreMachine, Failure> {
    match load(path, warnings)? {
        Machine::Moore(m) => Ok(m),
        Machine::Mealy(_) => Err(Failure::Semantic(format!("{} holds a Mealy machine, expected Moore", path.display()))),
    }
}

fn rational(w: &EpWord) -> BigRational {
    w.to_rational::<BigInt>().expect("big integers do not overflow")
}

/// Coefficient source for either kind of file: a Mealy machine contributes
/// its van der Put coefficients, a Moore machine its sequence.
fn with_source<R>(
    path: &Path,
    state: &StateArg,
    variant: Variant,
    warnings: &mut Vec<String>,
    f: impl FnOnce(&dyn CoefficientSource) -> std::result::Result<R, Failure>,
) -> std::result::Result<R, Failure> {
    match load(path, warnings)? {
        Machine::Mealy(m) => {
            let q = match &state.state {
                Some(name) => m.state(name)?,
                None => m.initial(),
            };
            let mut source = MachineCoefficients::new(&m, q);
            source.variant = variant;
            f(&source)
        }
        Machine::Moore(b) => {
            if state.state.is_some() {
                return Err(Failure::Usage("--state applies to Mealy machines only".into()));
            }
            if variant == Variant::Schikhof {
                return Err(Failure::Usage("--schikhof applies to Mealy machines only".into()));
            }
            f(&b)
        }
    }
}

fn dispatch(command: Command, warnings: &mut Vec<String>) -> Outcome {
    match command {
        Command::Vdp {
            file,
            state,
            count,
            schikhof,
        } => {
            let m = load_mealy(&file, &state, warnings)?;
            let source = MachineCoefficients {
                machine: &m,
                state: m.initial(),
                variant: if schikhof { Variant::Schikhof } else { Variant::Mahler },
            };
            let mut out = String::new();
            for n in 0..count {
                let b = source.coefficient(n)?;
                writeln!(out, "{n}\t{b}\t{}", rational(&b)).unwrap();
            }
            Ok(out)
        }
        Command::Seq {
            file,
            state,
            count,
            rational: as_rational,
        } => with_source(&file, &state, Variant::Mahler, warnings, |source| {
            let terms = (0..count)
                .map(|n| {
                    let a = source.coefficient(n)?;
                    Ok(if as_rational { rational(&a).to_string() } else { a.to_string() })
                })
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            Ok(terms.join(" ") + "\n")
        }),
        Command::Portrait { file, state, depth, dot } => {
            with_source(&file, &state, Variant::Mahler, warnings, |source| {
                let portrait = Portrait::of(source, depth)?;
                Ok(if dot { portrait.to_dot() } else { portrait.to_text() })
            })
        }
        Command::Minimize { file, dot } => Ok(match load(&file, warnings)? {
            Machine::Mealy(m) => {
                let min = m.minimize();
                if dot {
                    min.diagram().to_dot("mealy")
                } else {
                    print_mealy(&min)
                }
            }
            Machine::Moore(b) => {
                let min = b.minimize();
                if dot {
                    min.diagram().to_dot("moore")
                } else {
                    print_moore(&min)
                }
            }
        }),
        Command::Convert(Convert::MealyToMoore { file, state, output }) => {
            let m = load_mealy(&file, &state, warnings)?;
            let conv = mealy_to_moore_labeled(&m)?;
            let machine = if output.minimize { conv.machine.minimize() } else { conv.machine.clone() };
            if output.dot {
                return Ok(machine.diagram().to_dot("moore"));
            }
            let mut out = print_moore(&machine);
            if output.labels {
                for (name, label) in conv.machine.names().iter().zip(&conv.labels) {
                    writeln!(out, "# {name}: {} {}", m.name(label.section), tuple_text(&label.tuple)).unwrap();
                }
            }
            Ok(out)
        }
        Command::Convert(Convert::MooreToMealy { file, output }) => {
            let b = load_moore(&file, warnings)?;
            let conv = moore_to_mealy_labeled(&b)?;
            let machine = if output.minimize { conv.machine.minimize() } else { conv.machine.clone() };
            if output.dot {
                return Ok(machine.diagram().to_dot("mealy"));
            }
            let mut out = print_mealy(&machine);
            if output.labels {
                for (name, label) in conv.machine.names().iter().zip(&conv.labels) {
                    writeln!(out, "# {name}: {} {}", b.name(label.kernel_state), tuple_text(&label.tuple)).unwrap();
                }
            }
            Ok(out)
        }
        Command::Eval(Eval::Mealy {
            file,
            state,
            rational: as_rational,
            inputs,
        }) => {
            let m = load_mealy(&file, &state, warnings)?;
            let q = m.initial();
            let radix = m.radix();
            let mut out = String::new();
            for input in inputs {
                if as_rational {
                    let r: BigRational = input.parse()?;
                    let image = m.apply_ep(q, &EpWord::from_rational(&r, radix)?)?;
                    writeln!(out, "{r} -> {}\t{image}", rational(&image)).unwrap();
                } else if input.contains('(') {
                    let image = m.apply_ep(q, &EpWord::parse(&input, radix)?)?;
                    writeln!(out, "{input} -> {image}").unwrap();
                } else {
                    let word = parse_finite(&input, radix)?;
                    let image = m.apply_finite(q, &word)?;
                    let image = if image.is_empty() { "ε".to_string() } else { radix.format_word(&image) };
                    writeln!(out, "{input} -> {image}").unwrap();
                }
            }
            Ok(out)
        }
        Command::Eval(Eval::Moore {
            file,
            rational: as_rational,
            indices,
        }) => {
            let b = load_moore(&file, warnings)?;
            let mut out = String::new();
            for n in indices {
                let a = b.evaluate(n);
                if as_rational {
                    writeln!(out, "{n} -> {}", rational(a)).unwrap();
                } else {
                    writeln!(out, "{n} -> {a}").unwrap();
                }
            }
            Ok(out)
        }
        Command::Check(Check::Cover { file, state }) => {
            let m = load_mealy(&file, &state, warnings)?;
            let conv = mealy_to_moore_labeled(&m)?;
            let big = conv.machine.underlying_graph();
            let small = m.underlying_graph();
            let projection = conv.projection();
            let mut out = projection_witness(&big, &small, &projection);
            if verify_covering(&big, &small, &projection) {
                writeln!(out, "covering: ok ({} -> {} states)", big.node_count(), small.node_count()).unwrap();
                Ok(out)
            } else {
                Err(Failure::Semantic(format!("{out}projection is not a covering")))
            }
        }
        Command::Check(Check::Roundtrip { file, state }) => {
            let m = load_mealy(&file, &state, warnings)?;
            if roundtrip_check(&m)? {
                Ok("roundtrip: ok\n".into())
            } else {
                Err(Failure::Semantic("roundtrip: minimized machines are not isomorphic".into()))
            }
        }
    }
}

fn parse_finite(input: &str, radix: Radix) -> std::result::Result<Vec<u8>, Failure> {
    if input == "ε" {
        return Ok(Vec::new());
    }
    Ok(radix.parse_word(input)?)
}

fn tuple_text(tuple: &[EpWord]) -> String {
    let items: Vec<String> = tuple.iter().map(|w| w.to_string()).collect();
    format!("({})", items.join(", "))
}
