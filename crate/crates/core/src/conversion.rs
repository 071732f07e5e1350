//! Conversions between a Mealy machine and the Moore machine generating its
//! reduced van der Put coefficients, plus the graph-covering relation between
//! the two.
//!
//! Both directions are breadth-first searches over finite labels:
//!
//! * Mealy → Moore: the state at vertex `v` is labelled
//!   `(g|_v, (b_{v̄y})_{y∈X})`. Its child along `x` keeps `b_{v̄x}` as the first
//!   entry (`vx0` and `vx` name the same integer) and reads the others from the
//!   start-up table of the section `g|_v`, since `b_{(vxy)‾} = b^{g|_v}_{x+yd}`
//!   for `y ≠ 0`.
//! * Moore → Mealy: the state at `v` is labelled `(kernel state of v,
//!   (b^{g|_v}_i)_{i<d})`; the child tuple follows from the section recursion
//!   and the Mealy output on `x` is the first digit of `b^{g|_v}_x`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::dadic::{Digit, EpWord, Radix};
use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, StateId};
use crate::moore::MooreMachine;
use crate::vanderput::CoefficientTable;
use crate::BigRational;

/// Moore state label `(g|_v, (b_{(vy)‾})_{y∈X})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MealyToMooreLabel {
    pub section: StateId,
    pub tuple: Vec<EpWord>,
}

/// Mealy state label `((b_n)|_v, (b^{g|_v}_i)_{i<d})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MooreToMealyLabel {
    pub kernel_state: StateId,
    pub tuple: Vec<EpWord>,
}

/// Result of the Mealy → Moore construction before minimization.
#[derive(Clone, Debug)]
pub struct MooreConversion {
    pub machine: MooreMachine,
    /// `labels[i]` is the label of state `i` of `machine`.
    pub labels: Vec<MealyToMooreLabel>,
}

impl MooreConversion {
    /// State of the Moore machine ↦ state of the source Mealy machine.
    pub fn projection(&self) -> Vec<StateId> {
        self.labels.iter().map(|l| l.section).collect()
    }
}

/// Result of the Moore → Mealy construction before minimization.
#[derive(Clone, Debug)]
pub struct MealyConversion {
    pub machine: MealyMachine,
    pub labels: Vec<MooreToMealyLabel>,
    pub bounds: GuardBounds,
}

impl MealyConversion {
    /// State of the Mealy machine ↦ state of the source Moore machine.
    pub fn projection(&self) -> Vec<StateId> {
        self.labels.iter().map(|l| l.kernel_state).collect()
    }
}

fn vertex_name(radix: Radix, word: &[Digit]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        radix.format_word(word)
    }
}

/// Generic FIFO label search. `children` maps a label to its `d` children and
/// the per-digit edge data; states are named by the vertex word that first
/// reaches them.
struct Search<L> {
    labels: Vec<L>,
    names: Vec<String>,
    transition: Vec<StateId>,
}

fn breadth_first<L, E>(
    radix: Radix,
    root: L,
    mut children: impl FnMut(&L) -> Result<Vec<(L, E)>>,
    mut edge: impl FnMut(E),
) -> Result<Search<L>>
where
    L: Clone + Eq + std::hash::Hash,
{
    let mut index: HashMap<L, StateId> = HashMap::new();
    index.insert(root.clone(), 0);
    let mut labels = vec![root];
    let mut words: Vec<Vec<Digit>> = vec![Vec::new()];
    let mut transition = Vec::new();
    let mut head = 0;
    while head < labels.len() {
        let kids = children(&labels[head])?;
        for (x, (child, data)) in kids.into_iter().enumerate() {
            let id = match index.get(&child) {
                Some(&id) => id,
                None => {
                    let id = labels.len();
                    index.insert(child.clone(), id);
                    labels.push(child);
                    let mut word = words[head].clone();
                    word.push(x as Digit);
                    words.push(word);
                    id
                }
            };
            transition.push(id);
            edge(data);
        }
        head += 1;
    }
    Ok(Search {
        names: words.iter().map(|w| vertex_name(radix, w)).collect(),
        labels,
        transition,
    })
}

/// Mealy → Moore with labels kept, rooted at the machine's initial state.
pub fn mealy_to_moore_labeled(m: &MealyMachine) -> Result<MooreConversion> {
    let radix = m.radix();
    let d = radix.size();
    let table = CoefficientTable::build(m)?;
    let root = MealyToMooreLabel {
        section: m.initial(),
        tuple: (0..d).map(|y| table.entry(m.initial(), y).clone()).collect(),
    };
    let search = breadth_first(
        radix,
        root,
        |parent: &MealyToMooreLabel| {
            Ok((0..d)
                .map(|x| {
                    let tuple = std::iter::once(parent.tuple[x].clone())
                        .chain((1..d).map(|y| table.entry(parent.section, x + y * d).clone()))
                        .collect();
                    let child = MealyToMooreLabel {
                        section: m.next(parent.section, x as Digit),
                        tuple,
                    };
                    (child, ())
                })
                .collect())
        },
        |_| {},
    )?;
    let output = search.labels.iter().map(|l| l.tuple[0].clone()).collect();
    let machine = MooreMachine::new(radix, search.names, search.transition, output, 0)?;
    Ok(MooreConversion {
        machine,
        labels: search.labels,
    })
}

/// Moore machine generating the reduced van der Put coefficients of the
/// endomorphism defined by `m` at its initial state.
pub fn mealy_to_moore(m: &MealyMachine, minimize: bool) -> Result<MooreMachine> {
    let machine = mealy_to_moore_labeled(m)?.machine;
    Ok(if minimize { machine.minimize() } else { machine })
}

/// Moore → Mealy with labels kept. The input must be zero-stable; every label
/// tuple is checked against [`termination_guard`].
pub fn moore_to_mealy_labeled(b: &MooreMachine) -> Result<MealyConversion> {
    b.check_zero_stable()?;
    let radix = b.radix();
    let d = radix.size();
    let bounds = termination_guard(b);
    let root = MooreToMealyLabel {
        kernel_state: b.initial(),
        tuple: (0..d as u64).map(|i| b.evaluate(i).clone()).collect(),
    };
    bounds.check_label(&root, b)?;
    let mut output = Vec::new();
    let search = breadth_first(
        radix,
        root,
        |parent: &MooreToMealyLabel| {
            (0..d)
                .map(|x| {
                    let shifted = parent.tuple[x].shift();
                    let mut tuple = Vec::with_capacity(d);
                    tuple.push(shifted.clone());
                    for i in 1..d {
                        let deeper = b.evaluate_from(parent.kernel_state, (x + i * d) as u64);
                        tuple.push(deeper.try_add(&shifted)?);
                    }
                    let child = MooreToMealyLabel {
                        kernel_state: b.next(parent.kernel_state, x as Digit),
                        tuple,
                    };
                    bounds.check_label(&child, b)?;
                    Ok((child, parent.tuple[x].first_digit()))
                })
                .collect()
        },
        |y| output.push(y),
    )?;
    let machine = MealyMachine::new(radix, search.names, search.transition, output, 0)?;
    Ok(MealyConversion {
        machine,
        labels: search.labels,
        bounds,
    })
}

/// Mealy machine of the endomorphism whose reduced van der Put coefficients
/// are the sequence generated by `b`.
pub fn moore_to_mealy(b: &MooreMachine, minimize: bool) -> Result<MealyMachine> {
    let machine = moore_to_mealy_labeled(b)?.machine;
    Ok(if minimize { machine.minimize() } else { machine })
}

/// Bounds every label tuple of the Moore → Mealy search must respect: with
/// `l` the longest preperiod and `m` the lcm of the period lengths among the
/// outputs, each value lies in `[−z, z]`, `z = (d^{l+1} + d − 1)/(d − 1)`, and
/// has a denominator dividing `d^m − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardBounds {
    pub preperiod: usize,
    pub period: usize,
    pub z: BigRational,
    pub modulus: BigInt,
}

impl GuardBounds {
    /// `Ok` iff `value` satisfies both bounds, otherwise a description.
    pub fn check(&self, value: &EpWord) -> std::result::Result<(), String> {
        let r = value
            .to_rational::<BigInt>()
            .expect("big integers do not overflow");
        let magnitude = BigRational::new(r.numer().abs(), r.denom().clone()).expect("nonzero denominator");
        if magnitude > self.z {
            return Err(format!("{value} = {r} lies outside [-{z}, {z}]", z = self.z));
        }
        if !self.modulus.is_multiple_of(r.denom()) {
            return Err(format!("{value} = {r} has a denominator not dividing {}", self.modulus));
        }
        Ok(())
    }

    fn check_label(&self, label: &MooreToMealyLabel, b: &MooreMachine) -> Result<()> {
        for value in &label.tuple {
            self.check(value).map_err(|detail| Error::GuardViolation {
                state: b.name(label.kernel_state).to_string(),
                detail,
            })?;
        }
        Ok(())
    }
}

pub fn termination_guard(b: &MooreMachine) -> GuardBounds {
    let d = BigInt::from(b.radix().get());
    let preperiod = b.outputs().iter().map(|w| w.preperiod().len()).max().unwrap_or(0);
    let period = b.outputs().iter().fold(1usize, |acc, w| acc.lcm(&w.period().len()));
    let one = BigInt::one();
    let z = BigRational::new(num_traits::pow(d.clone(), preperiod + 1) + &d - &one, &d - &one)
        .expect("d > 1");
    GuardBounds {
        preperiod,
        period,
        z,
        modulus: num_traits::pow(d, period) - one,
    }
}

/// Digit-labelled transition graph of a machine, optionally decorated with
/// Mealy outputs (edge labels `x|y`) or Moore outputs (node annotations).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub radix: Radix,
    pub nodes: Vec<String>,
    /// `targets[q·d + x]` is the end of the edge `q →x`.
    pub targets: Vec<usize>,
    pub annotations: Vec<Option<String>>,
    pub outputs: Option<Vec<Digit>>,
    pub initial: Option<usize>,
}

impl LabeledDigraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Digit, usize)> + '_ {
        let d = self.radix.size();
        self.targets.iter().enumerate().map(move |(i, &t)| (i / d, (i % d) as Digit, t))
    }

    pub fn to_dot(&self, graph_name: &str) -> String {
        let radix = self.radix;
        let mut out = format!("digraph {graph_name} {{\n  rankdir=LR;\n");
        if let Some(initial) = self.initial {
            writeln!(out, "  __start [shape=point];\n  __start -> \"{}\";", escape(&self.nodes[initial])).unwrap();
        }
        for (node, note) in self.nodes.iter().zip(&self.annotations) {
            let label = match note {
                Some(note) => format!("{}\\n{}", escape(node), escape(note)),
                None => escape(node),
            };
            writeln!(out, "  \"{}\" [label=\"{label}\"];", escape(node)).unwrap();
        }
        for (i, (q, x, t)) in self.edges().enumerate() {
            let label = match &self.outputs {
                Some(outputs) => format!("{}|{}", radix.digit_char(x), radix.digit_char(outputs[i])),
                None => radix.digit_char(x).to_string(),
            };
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{label}\"];",
                escape(&self.nodes[q]),
                escape(&self.nodes[t])
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Machines that have an underlying oriented graph.
pub trait Automaton {
    fn underlying_graph(&self) -> LabeledDigraph;
    /// The graph with outputs kept, for drawing.
    fn diagram(&self) -> LabeledDigraph;
}

impl Automaton for MealyMachine {
    fn underlying_graph(&self) -> LabeledDigraph {
        LabeledDigraph {
            radix: self.radix(),
            nodes: self.names().to_vec(),
            targets: self.transitions().to_vec(),
            annotations: vec![None; self.len()],
            outputs: None,
            initial: None,
        }
    }

    fn diagram(&self) -> LabeledDigraph {
        let outputs = (0..self.len())
            .flat_map(|q| self.radix().digits().map(move |x| self.output(q, x)))
            .collect();
        LabeledDigraph {
            outputs: Some(outputs),
            initial: Some(self.initial()),
            ..self.underlying_graph()
        }
    }
}

impl Automaton for MooreMachine {
    fn underlying_graph(&self) -> LabeledDigraph {
        LabeledDigraph {
            radix: self.radix(),
            nodes: self.names().to_vec(),
            targets: self.transitions().to_vec(),
            annotations: vec![None; self.len()],
            outputs: None,
            initial: None,
        }
    }

    fn diagram(&self) -> LabeledDigraph {
        LabeledDigraph {
            annotations: self.outputs().iter().map(|w| Some(w.to_string())).collect(),
            initial: Some(self.initial()),
            ..self.underlying_graph()
        }
    }
}

pub fn underlying_graph<M: Automaton + ?Sized>(machine: &M) -> LabeledDigraph {
    machine.underlying_graph()
}

/// Whether `projection` is a covering `big → small`: a label-preserving graph
/// homomorphism that is surjective on vertices and on edges.
pub fn verify_covering(big: &LabeledDigraph, small: &LabeledDigraph, projection: &[usize]) -> bool {
    if big.radix != small.radix || projection.len() != big.node_count() {
        return false;
    }
    if projection.iter().any(|&p| p >= small.node_count()) {
        return false;
    }
    let d = big.radix.size();
    let mut node_hit = vec![false; small.node_count()];
    let mut edge_hit = vec![false; small.edge_count()];
    for (q, x, t) in big.edges() {
        let (pq, pt) = (projection[q], projection[t]);
        let slot = pq * d + x as usize;
        if small.targets[slot] != pt {
            return false;
        }
        node_hit[pq] = true;
        edge_hit[slot] = true;
    }
    node_hit.into_iter().all(|h| h) && edge_hit.into_iter().all(|h| h)
}

/// Audit text for a projection, one `big-state -> small-state` line per node.
pub fn projection_witness(big: &LabeledDigraph, small: &LabeledDigraph, projection: &[usize]) -> String {
    big.nodes
        .iter()
        .zip(projection)
        .map(|(b, &s)| format!("{b} -> {}\n", small.nodes[s]))
        .collect()
}

/// `minimize(moore_to_mealy(mealy_to_moore(m)))` is isomorphic to `minimize(m)`.
pub fn roundtrip_check(m: &MealyMachine) -> Result<bool> {
    let moore = mealy_to_moore(m, false)?;
    let back = moore_to_mealy(&moore, false)?;
    Ok(back.minimize().is_isomorphic(&m.minimize()))
}
