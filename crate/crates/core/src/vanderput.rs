//! Van der Put analysis of tree endomorphisms.
//!
//! A 1-Lipschitz map `f: Z_d → Z_d` expands as `f(x) = Σ b_n·d^{⌊log_d n⌋}·χ_n(x)`
//! where `χ_n` is the indicator of the cylinder of words starting with
//! `[n]_d`. The reduced coefficients are
//!
//! ```text
//! b_n = f(n)                                   0 ≤ n < d
//! b_n = (f(n) − f(n_)) / d^{⌊log_d n⌋}         n ≥ d
//! ```
//!
//! with `n_` the integer obtained by deleting the most significant digit of `n`.
//! In the Schikhof numbering (`[0]_d` is the empty word) the terms `0 < n < d`
//! become `f(n) − f(0)`; everything from `n = d` on is shared.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dadic::{Digit, EpWord, Radix};
use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, StateId};
use crate::moore::MooreMachine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Mahler,
    Schikhof,
}

/// `n_ = n − x_k·d^k` where `x_k` is the leading digit of `n ≥ 1`.
pub fn n_underscore(n: u64, radix: Radix) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("n_ is undefined for n = 0".into()));
    }
    let mut digits = radix.expand(n);
    digits.pop();
    Ok(radix.value_of(&digits))
}

/// Reduced van der Put coefficient `b_n` of the endomorphism defined by state `q`.
pub fn vdp_coefficient(m: &MealyMachine, q: StateId, n: u64, variant: Variant) -> Result<EpWord> {
    let radix = m.radix();
    let image = |k: u64| m.apply_ep(q, &EpWord::from_integer(k, radix));
    if n == 0 || (n < radix.get() as u64 && variant == Variant::Mahler) {
        return image(n);
    }
    image(n)?
        .try_sub(&image(n_underscore(n, radix)?)?)?
        .div_power(radix.floor_log(n))
}

/// `b_n^{g|_x}` from the coefficients of `g` alone:
/// `σ(b_x)` for `n = 0`, `b_{x+nd} + σ(b_x)` for `0 < n < d`, `b_{x+nd}` otherwise.
pub fn section_coefficient(m: &MealyMachine, q: StateId, x: Digit, n: u64) -> Result<EpWord> {
    let d = m.radix().get() as u64;
    let b = |k: u64| vdp_coefficient(m, q, k, Variant::Mahler);
    let x = m.radix().check_digit(x as u32)? as u64;
    if n == 0 {
        Ok(b(x)?.shift())
    } else if n < d {
        b(x + n * d)?.try_add(&b(x)?.shift())
    } else {
        b(x + n * d)
    }
}

/// Schikhof counterpart of [`section_coefficient`]:
/// `σ(b̃_0)` for `n = x = 0`, `σ(b̃_x + b_0)` for `n = 0 < x`, `b̃_{x+nd}` for `n > 0`.
///
/// Mixed case: `b̃_x + b_0 = (f(x) − f(0)) + f(0) = f(x)`, so it is evaluated as
/// `σ(g(x·0^∞))`.
pub fn schikhof_section_coefficient(m: &MealyMachine, q: StateId, x: Digit, n: u64) -> Result<EpWord> {
    let radix = m.radix();
    let d = radix.get() as u64;
    let x = radix.check_digit(x as u32)? as u64;
    match (n, x) {
        (0, 0) => Ok(vdp_coefficient(m, q, 0, Variant::Schikhof)?.shift()),
        (0, _) => Ok(m.apply_ep(q, &EpWord::from_integer(x, radix))?.shift()),
        _ => vdp_coefficient(m, q, x + n * d, Variant::Schikhof),
    }
}

/// Mahler coefficients `b_n` for every state and every `n < d²`: all the
/// values the Mealy → Moore construction ever needs.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    machine: MealyMachine,
    entries: Vec<EpWord>,
}

impl CoefficientTable {
    pub fn build(m: &MealyMachine) -> Result<Self> {
        let width = m.radix().size().pow(2) as u64;
        let entries = (0..m.len())
            .flat_map(|q| (0..width).map(move |n| (q, n)))
            .map(|(q, n)| vdp_coefficient(m, q, n, Variant::Mahler))
            .collect::<Result<_>>()?;
        Ok(CoefficientTable {
            machine: m.clone(),
            entries,
        })
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    /// Coefficient `b_n` of state `q`, `n < d²`.
    pub fn entry(&self, q: StateId, n: usize) -> &EpWord {
        let width = self.machine.radix().size().pow(2);
        assert!(n < width, "table holds indices below d²");
        &self.entries[q * width + n]
    }
}

/// Anything that yields a coefficient sequence `n ↦ b_n`.
pub trait CoefficientSource {
    fn radix(&self) -> Radix;
    fn coefficient(&self, n: u64) -> Result<EpWord>;
}

/// Coefficients of the endomorphism at one state of a Mealy machine.
#[derive(Clone, Copy, Debug)]
pub struct MachineCoefficients<'a> {
    pub machine: &'a MealyMachine,
    pub state: StateId,
    pub variant: Variant,
}

impl<'a> MachineCoefficients<'a> {
    pub fn new(machine: &'a MealyMachine, state: StateId) -> Self {
        MachineCoefficients {
            machine,
            state,
            variant: Variant::Mahler,
        }
    }
}

impl CoefficientSource for MachineCoefficients<'_> {
    fn radix(&self) -> Radix {
        self.machine.radix()
    }

    fn coefficient(&self, n: u64) -> Result<EpWord> {
        vdp_coefficient(self.machine, self.state, n, self.variant)
    }
}

impl CoefficientSource for MooreMachine {
    fn radix(&self) -> Radix {
        MooreMachine::radix(self)
    }

    fn coefficient(&self, n: u64) -> Result<EpWord> {
        Ok(self.evaluate(n).clone())
    }
}

/// A finite stored list of coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredCoefficients {
    pub radix: Radix,
    pub values: Vec<EpWord>,
}

impl CoefficientSource for StoredCoefficients {
    fn radix(&self) -> Radix {
        self.radix
    }

    fn coefficient(&self, n: u64) -> Result<EpWord> {
        self.values
            .get(n as usize)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no stored coefficient at index {n}")))
    }
}

/// First `k` digits of `Σ b_n·d^{⌊log_d n⌋}·χ_n(x)` over `n < d^k`.
///
/// Only the labelled vertices on the path of `x` have `χ_n(x) = 1`, so the sum
/// runs over those; by telescoping it equals `f(prefix_k(x)·0^∞)`.
pub fn evaluate_series<S: CoefficientSource + ?Sized>(source: &S, x: &EpWord, k: usize) -> Result<Vec<Digit>> {
    let radix = source.radix();
    if x.radix() != radix {
        return Err(Error::RadixMismatch {
            left: radix.get(),
            right: x.radix().get(),
        });
    }
    let path = x.prefix(k);
    let mut sum = EpWord::zero(radix);
    for depth in 0..k {
        if depth > 0 && path[depth] == 0 {
            continue;
        }
        let n = radix.value_of(&path[..=depth]);
        sum = sum.try_add(&source.coefficient(n)?.mul_power(depth))?;
    }
    Ok(sum.prefix(k))
}

/// A labelling of the tree up to some depth by the terms of a sequence:
/// vertex `[n]_d` carries `a_n`; vertices ending in 0 (other than `0`) stay blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    radix: Radix,
    depth: usize,
    labels: BTreeMap<Vec<Digit>, EpWord>,
}

impl Portrait {
    pub fn of<S: CoefficientSource + ?Sized>(source: &S, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Domain("portrait depth must be at least 1".into()));
        }
        let radix = source.radix();
        let mut labels = BTreeMap::new();
        labels.insert(vec![0], source.coefficient(0)?);
        let count = (radix.get() as u64).pow(depth as u32);
        for n in 1..count {
            labels.insert(radix.expand(n), source.coefficient(n)?);
        }
        Ok(Portrait { radix, depth, labels })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn label(&self, vertex: &[Digit]) -> Option<&EpWord> {
        self.labels.get(vertex)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&[Digit], &EpWord)> {
        self.labels.iter().map(|(v, l)| (v.as_slice(), l))
    }

    fn preorder(&self) -> Vec<Vec<Digit>> {
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(v) = stack.pop() {
            if v.len() < self.depth {
                for x in self.radix.digits().rev() {
                    let mut child = v.clone();
                    child.push(x);
                    stack.push(child);
                }
            }
            out.push(v);
        }
        out
    }

    fn vertex_name(&self, v: &[Digit]) -> String {
        if v.is_empty() {
            "ε".to_string()
        } else {
            self.radix.format_word(v)
        }
    }

    /// Indented tree, one `vertex: label` line per vertex, `·` when unlabelled.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.preorder() {
            let label = self.labels.get(&v).map_or("·".to_string(), ToString::to_string);
            writeln!(out, "{}{}: {}", "  ".repeat(v.len()), self.vertex_name(&v), label).unwrap();
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let id = |v: &[Digit]| format!("\"v{}\"", self.radix.format_word(v));
        let mut out = String::from("digraph portrait {\n  node [shape=box];\n");
        for v in self.preorder() {
            let label = self.labels.get(&v).map_or(String::new(), ToString::to_string);
            writeln!(out, "  {} [label=\"{}\\n{}\"];", id(&v), self.vertex_name(&v), label).unwrap();
            if let Some((&x, parent)) = v.split_last() {
                writeln!(out, "  {} -> {} [label=\"{}\"];", id(parent), id(&v), self.radix.digit_char(x)).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}
