use thiserror::Error;

/// Errors raised by the library. Parse problems carry a position, everything
/// else names the offending value, state or digit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radix {0} is outside 2..=36")]
    InvalidRadix(u32),
    #[error("digit {digit} is out of range for radix {radix}")]
    DigitOutOfRange { digit: u32, radix: u8 },
    #[error("period of an eventually periodic word must be nonempty")]
    EmptyPeriod,
    #[error("radix mismatch: {left} vs {right}")]
    RadixMismatch { left: u8, right: u8 },
    #[error("{word} is not divisible by {radix}^{power}")]
    NotDivisible { word: String, radix: u8, power: usize },
    #[error("denominator {denominator} shares a factor with radix {radix}")]
    NotCoprime { denominator: String, radix: u8 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("{0}")]
    Domain(String),
    #[error("invalid literal `{0}`")]
    InvalidLiteral(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` is defined more than once")]
    DuplicateState(String),
    #[error("state `{state}` has no transition on digit {digit}")]
    MissingTransition { state: String, digit: u8 },
    #[error("states unreachable from `{initial}`: {states:?}")]
    Unreachable { initial: String, states: Vec<String> },
    #[error("machine is not zero-stable: output of `{state}` is {output} but its 0-successor `{successor}` outputs {successor_output}")]
    NotZeroStable {
        state: String,
        output: String,
        successor: String,
        successor_output: String,
    },
    #[error("termination guard violated at label of `{state}`: {detail}")]
    GuardViolation { state: String, detail: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
