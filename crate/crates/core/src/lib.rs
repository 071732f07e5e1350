//! Finite Mealy automata acting on the rooted d-ary tree and finite Moore
//! automata generating their reduced van der Put coefficients.
//!
//! An endomorphism of the d-ary tree is the same thing as a 1-Lipschitz map
//! `Z_d → Z_d`. It is given by a finite Mealy machine exactly when the
//! sequence of its reduced van der Put coefficients is d-automatic with
//! eventually periodic terms. [`conversion`] builds each side from the other.
//!
//! All arithmetic is exact: coefficients are [`EpWord`]s (eventually periodic
//! digit words) and their rational values are [`DadicRational`]s over any
//! [`DadicInt`] backend.
//!
//! ```
//! use lipaut::{mealy_to_moore, moore_to_mealy, MealyMachine};
//!
//! let lamp = MealyMachine::parse_wreath("p=(p,q)[1,0]; q=(p,q)")?;
//! let coefficients = mealy_to_moore(&lamp, false)?;
//! assert_eq!(coefficients.evaluate(2).to_string(), "10(1)");
//! let back = moore_to_mealy(&coefficients, true)?;
//! assert!(back.is_isomorphic(&lamp.minimize()));
//! # Ok::<(), lipaut::Error>(())
//! ```

pub mod cli;
pub mod conversion;
pub mod dadic;
pub mod error;
pub mod format;
pub mod mealy;
pub mod moore;
mod partition;
pub mod scalar;
pub mod vanderput;

pub use conversion::{
    mealy_to_moore, mealy_to_moore_labeled, moore_to_mealy, moore_to_mealy_labeled, projection_witness,
    roundtrip_check, termination_guard, underlying_graph, verify_covering, Automaton, GuardBounds,
    LabeledDigraph, MealyConversion, MealyToMooreLabel, MooreConversion, MooreToMealyLabel,
};
pub use dadic::{closure_a, enumerate_p, DadicRational, Digit, EpWord, Radix};
pub use error::{Error, Result};
pub use mealy::{MealyMachine, StateId};
pub use moore::MooreMachine;
pub use scalar::DadicInt;
pub use format::{parse_machine_file, print_machine_file, Machine};
pub use vanderput::{
    evaluate_series, vdp_coefficient, CoefficientSource, CoefficientTable, MachineCoefficients, Portrait,
    StoredCoefficients, Variant,
};

/// Rationals over `i64`; overflow is reported, never wrapped.
pub type Rational64 = DadicRational<i64>;
/// Rationals over `i128`.
pub type Rational128 = DadicRational<i128>;
/// Rationals over arbitrary precision integers.
pub type BigRational = DadicRational<num_bigint::BigInt>;
