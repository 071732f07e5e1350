//! Moore machines (d-DFAOs) whose outputs are eventually periodic d-adic
//! integers. A machine generates `a_n = τ(δ(q0, [n]_d))`, reading the
//! least-significant digit first.

use std::collections::HashMap;

use crate::dadic::{Digit, EpWord, Radix};
use crate::error::{Error, Result};
use crate::mealy::{check_names, name_index, quotient, StateId};
use crate::partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreMachine {
    radix: Radix,
    names: Vec<String>,
    transition: Vec<StateId>,
    output: Vec<EpWord>,
    initial: StateId,
}

impl MooreMachine {
    pub fn new(
        radix: Radix,
        names: Vec<String>,
        transition: Vec<StateId>,
        output: Vec<EpWord>,
        initial: StateId,
    ) -> Result<Self> {
        let n = names.len();
        let d = radix.size();
        check_names(&names)?;
        if initial >= n {
            return Err(Error::UnknownState(initial.to_string()));
        }
        if output.len() != n {
            return Err(Error::InvalidLiteral(format!("{} outputs for {n} states", output.len())));
        }
        for (q, tau) in output.iter().enumerate() {
            if tau.radix() != radix {
                return Err(Error::RadixMismatch {
                    left: radix.get(),
                    right: tau.radix().get(),
                });
            }
            for x in 0..d {
                match transition.get(q * d + x) {
                    Some(&t) if t < n => {}
                    Some(&t) => return Err(Error::UnknownState(t.to_string())),
                    None => {
                        return Err(Error::MissingTransition {
                            state: names[q].clone(),
                            digit: x as Digit,
                        })
                    }
                }
            }
        }
        let machine = MooreMachine {
            radix,
            names,
            transition,
            output,
            initial,
        };
        let order = partition::bfs_order(initial, &machine.transition, d, n);
        if order.len() != n {
            let mut seen = vec![false; n];
            order.iter().for_each(|&q| seen[q] = true);
            return Err(Error::Unreachable {
                initial: machine.names[initial].clone(),
                states: (0..n).filter(|&q| !seen[q]).map(|q| machine.names[q].clone()).collect(),
            });
        }
        Ok(machine)
    }

    /// Like [`MooreMachine::new`] but drops the states unreachable from
    /// `initial` instead of rejecting them.
    pub fn trimmed(
        radix: Radix,
        names: Vec<String>,
        transition: Vec<StateId>,
        output: Vec<EpWord>,
        initial: StateId,
    ) -> Result<Self> {
        let d = radix.size();
        let n = names.len();
        if output.len() != n || transition.len() != n * d || transition.iter().any(|&t| t >= n) || initial >= n {
            // Let `new` report the precise problem.
            return Self::new(radix, names, transition, output, initial);
        }
        let order = partition::bfs_order(initial, &transition, d, n);
        let mut new_id = vec![usize::MAX; n];
        order.iter().enumerate().for_each(|(i, &s)| new_id[s] = i);
        Self::new(
            radix,
            order.iter().map(|&s| names[s].clone()).collect(),
            order.iter().flat_map(|&s| (0..d).map(move |x| s * d + x)).map(|i| new_id[transition[i]]).collect(),
            order.iter().map(|&s| output[s].clone()).collect(),
            0,
        )
    }

    /// Builds a machine from named rows `(state, output, [target; d])`.
    pub fn from_rows(radix: Radix, rows: Vec<(String, EpWord, Vec<String>)>, initial: &str) -> Result<Self> {
        let index = name_index(rows.iter().map(|(n, _, _)| n))?;
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownState(name.to_string()));
        let mut transition = Vec::new();
        for (name, _, row) in &rows {
            if row.len() != radix.size() {
                return Err(Error::MissingTransition {
                    state: name.clone(),
                    digit: row.len().min(radix.size()) as Digit,
                });
            }
            for target in row {
                transition.push(lookup(target)?);
            }
        }
        let initial = lookup(initial)?;
        let (names, output) = rows.into_iter().map(|(n, o, _)| (n, o)).unzip();
        Self::new(radix, names, transition, output, initial)
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    #[inline]
    pub fn next(&self, q: StateId, x: Digit) -> StateId {
        self.transition[q * self.radix.size() + x as usize]
    }

    pub fn output(&self, q: StateId) -> &EpWord {
        &self.output[q]
    }

    pub fn outputs(&self) -> &[EpWord] {
        &self.output
    }

    pub fn transitions(&self) -> &[StateId] {
        &self.transition
    }

    pub fn run(&self, q: StateId, word: &[Digit]) -> StateId {
        word.iter().fold(q, |s, &x| self.next(s, x))
    }

    pub fn evaluate(&self, n: u64) -> &EpWord {
        self.evaluate_from(self.initial, n)
    }

    /// Term `n` of the sequence generated from state `q`; for `q = δ(q0, v)`
    /// this is the section of the sequence at vertex `v`.
    pub fn evaluate_from(&self, q: StateId, n: u64) -> &EpWord {
        &self.output[self.run(q, &self.radix.expand(n))]
    }

    pub fn sequence_prefix(&self, count: usize) -> Vec<EpWord> {
        (0..count as u64).map(|n| self.evaluate(n).clone()).collect()
    }

    /// Output unaffected by trailing zeros. Checking `τ(δ(q,0)) = τ(q)` on every
    /// state covers all 0-chains, since every state is reachable.
    pub fn is_zero_stable(&self) -> bool {
        self.check_zero_stable().is_ok()
    }

    pub fn check_zero_stable(&self) -> Result<()> {
        for q in 0..self.len() {
            let s = self.next(q, 0);
            if self.output[s] != self.output[q] {
                return Err(Error::NotZeroStable {
                    state: self.names[q].clone(),
                    output: self.output[q].to_string(),
                    successor: self.names[s].clone(),
                    successor_output: self.output[s].to_string(),
                });
            }
        }
        Ok(())
    }

    /// Minimal machine generating the same sequence; blocks are named after
    /// their lowest-index member and listed in BFS order.
    pub fn minimize(&self) -> MooreMachine {
        let d = self.radix.size();
        let mut classes: HashMap<&EpWord, usize> = HashMap::new();
        let initial: Vec<usize> = self
            .output
            .iter()
            .map(|tau| {
                let fresh = classes.len();
                *classes.entry(tau).or_insert(fresh)
            })
            .collect();
        let block = partition::refine(&initial, &self.transition, d);
        let (names, transition, members) = quotient(&block, &self.transition, d, self.initial, &self.names);
        MooreMachine {
            radix: self.radix,
            names,
            transition,
            output: members.iter().map(|&q| self.output[q].clone()).collect(),
            initial: 0,
        }
    }

    pub fn is_isomorphic(&self, other: &MooreMachine) -> bool {
        self.radix == other.radix
            && partition::isomorphic(
                (self.initial, &self.transition, self.len()),
                (other.initial, &other.transition, other.len()),
                self.radix.size(),
                |a, b| self.output[a] == other.output[b],
            )
    }
}
