//! Mealy automata as endomorphisms of the rooted d-ary tree.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dadic::{Digit, EpWord, Radix};
use crate::error::{Error, Result};
use crate::format::LineCursor;
use crate::partition;

/// Index of a state inside a machine.
pub type StateId = usize;

/// A complete deterministic Mealy machine over `{0,…,d−1}` with a designated
/// initial state. Every state is reachable from the initial one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    radix: Radix,
    names: Vec<String>,
    transition: Vec<StateId>,
    output: Vec<Digit>,
    initial: StateId,
}

impl MealyMachine {
    /// `transition` and `output` are flat tables indexed by `state·d + digit`.
    pub fn new(
        radix: Radix,
        names: Vec<String>,
        transition: Vec<StateId>,
        output: Vec<Digit>,
        initial: StateId,
    ) -> Result<Self> {
        let machine = Self::unchecked(radix, names, transition, output, initial)?;
        machine.check_reachable()?;
        Ok(machine)
    }

    /// Like [`MealyMachine::new`] but drops the states unreachable from
    /// `initial` instead of rejecting them.
    pub fn trimmed(
        radix: Radix,
        names: Vec<String>,
        transition: Vec<StateId>,
        output: Vec<Digit>,
        initial: StateId,
    ) -> Result<Self> {
        let machine = Self::unchecked(radix, names, transition, output, initial)?;
        Ok(machine.rooted_at(machine.initial))
    }

    fn unchecked(
        radix: Radix,
        names: Vec<String>,
        transition: Vec<StateId>,
        output: Vec<Digit>,
        initial: StateId,
    ) -> Result<Self> {
        let n = names.len();
        let d = radix.size();
        check_names(&names)?;
        if initial >= n {
            return Err(Error::UnknownState(initial.to_string()));
        }
        for (q, name) in names.iter().enumerate() {
            for x in 0..d {
                let missing = || Error::MissingTransition {
                    state: name.clone(),
                    digit: x as Digit,
                };
                let t = *transition.get(q * d + x).ok_or_else(missing)?;
                let y = *output.get(q * d + x).ok_or_else(missing)?;
                if t >= n {
                    return Err(Error::UnknownState(t.to_string()));
                }
                radix.check_digit(y as u32)?;
            }
        }
        if transition.len() != n * d || output.len() != n * d {
            return Err(Error::InvalidLiteral(format!(
                "transition table of {} entries for {n} states over {d} digits",
                transition.len()
            )));
        }
        Ok(MealyMachine {
            radix,
            names,
            transition,
            output,
            initial,
        })
    }

    /// Builds a machine from named rows `(state, [(target, output); d])`.
    pub fn from_rows(radix: Radix, rows: Vec<(String, Vec<(String, Digit)>)>, initial: &str) -> Result<Self> {
        let index = name_index(rows.iter().map(|(n, _)| n))?;
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownState(name.to_string()));
        let d = radix.size();
        let mut transition = Vec::with_capacity(rows.len() * d);
        let mut output = Vec::with_capacity(rows.len() * d);
        for (name, row) in &rows {
            if row.len() != d {
                return Err(Error::MissingTransition {
                    state: name.clone(),
                    digit: row.len().min(d) as Digit,
                });
            }
            for (target, y) in row {
                transition.push(lookup(target)?);
                output.push(*y);
            }
        }
        let initial = lookup(initial)?;
        Self::new(radix, rows.into_iter().map(|(n, _)| n).collect(), transition, output, initial)
    }

    fn check_reachable(&self) -> Result<()> {
        let order = self.reachable_from(self.initial);
        if order.len() == self.len() {
            return Ok(());
        }
        let mut seen = vec![false; self.len()];
        order.iter().for_each(|&q| seen[q] = true);
        Err(Error::Unreachable {
            initial: self.names[self.initial].clone(),
            states: (0..self.len()).filter(|&q| !seen[q]).map(|q| self.names[q].clone()).collect(),
        })
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

    #[inline]
    pub fn output(&self, q: StateId, x: Digit) -> Digit {
        self.output[q * self.radix.size() + x as usize]
    }

    pub fn transitions(&self) -> &[StateId] {
        &self.transition
    }

    pub(crate) fn reachable_from(&self, q: StateId) -> Vec<StateId> {
        partition::bfs_order(q, &self.transition, self.radix.size(), self.len())
    }

    /// The initial automaton `A_q`: same machine restarted at `q`, restricted
    /// to the states reachable from it.
    pub fn rooted_at(&self, q: StateId) -> MealyMachine {
        let order = self.reachable_from(q);
        let mut new_id = vec![usize::MAX; self.len()];
        order.iter().enumerate().for_each(|(i, &s)| new_id[s] = i);
        let d = self.radix.size();
        MealyMachine {
            radix: self.radix,
            names: order.iter().map(|&s| self.names[s].clone()).collect(),
            transition: order
                .iter()
                .flat_map(|&s| (0..d).map(move |x| (s, x)))
                .map(|(s, x)| new_id[self.transition[s * d + x]])
                .collect(),
            output: order
                .iter()
                .flat_map(|&s| self.output[s * d..(s + 1) * d].iter().copied())
                .collect(),
            initial: 0,
        }
    }

    fn check_word(&self, word: &[Digit]) -> Result<()> {
        word.iter().try_for_each(|&x| self.radix.check_digit(x as u32).map(|_| ()))
    }

    /// `λ(q, w)`: the image of the finite word `w` under the state `q`.
    pub fn apply_finite(&self, q: StateId, word: &[Digit]) -> Result<Vec<Digit>> {
        self.check_word(word)?;
        let mut state = q;
        Ok(word
            .iter()
            .map(|&x| {
                let y = self.output(state, x);
                state = self.next(state, x);
                y
            })
            .collect())
    }

    /// `δ(q, w)`: the section of `q` at vertex `w`.
    pub fn section_at(&self, q: StateId, word: &[Digit]) -> Result<StateId> {
        self.check_word(word)?;
        Ok(word.iter().fold(q, |s, &x| self.next(s, x)))
    }

    /// Image of the boundary point `a`. The output is periodic as soon as a
    /// (state, phase within period) pair repeats.
    pub fn apply_ep(&self, q: StateId, a: &EpWord) -> Result<EpWord> {
        if a.radix() != self.radix {
            return Err(Error::RadixMismatch {
                left: self.radix.get(),
                right: a.radix().get(),
            });
        }
        let mut state = q;
        let mut out = Vec::new();
        for &x in a.preperiod() {
            out.push(self.output(state, x));
            state = self.next(state, x);
        }
        let period = a.period();
        let mut first_visit: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut phase = 0;
        loop {
            if let Some(&start) = first_visit.get(&(state, phase)) {
                let cycle = out.split_off(start);
                return EpWord::new(self.radix, out, cycle);
            }
            first_visit.insert((state, phase), out.len());
            let x = period[phase];
            out.push(self.output(state, x));
            state = self.next(state, x);
            phase = (phase + 1) % period.len();
        }
    }

    /// True iff every state acts on the first level as a permutation.
    pub fn is_invertible(&self) -> bool {
        let d = self.radix.size();
        (0..self.len()).all(|q| {
            let mut hit = vec![false; d];
            self.output[q * d..(q + 1) * d].iter().for_each(|&y| hit[y as usize] = true);
            hit.into_iter().all(|h| h)
        })
    }

    /// Minimal machine realizing the same transformation at the initial state.
    /// Blocks are named after their lowest-index member and listed in BFS order.
    pub fn minimize(&self) -> MealyMachine {
        let d = self.radix.size();
        let mut rows: HashMap<&[Digit], usize> = HashMap::new();
        let initial: Vec<usize> = (0..self.len())
            .map(|q| {
                let fresh = rows.len();
                *rows.entry(&self.output[q * d..(q + 1) * d]).or_insert(fresh)
            })
            .collect();
        let block = partition::refine(&initial, &self.transition, d);
        let (names, transition, members) = quotient(&block, &self.transition, d, self.initial, &self.names);
        let output = members
            .iter()
            .flat_map(|&q| self.output[q * d..(q + 1) * d].iter().copied())
            .collect();
        MealyMachine {
            radix: self.radix,
            names,
            transition,
            output,
            initial: 0,
        }
    }

    /// Isomorphism of initial machines (bijection preserving initial state,
    /// transitions and outputs). Meaningful as transformation equality when
    /// both sides are minimized.
    pub fn is_isomorphic(&self, other: &MealyMachine) -> bool {
        let d = self.radix.size();
        self.radix == other.radix
            && partition::isomorphic(
                (self.initial, &self.transition, self.len()),
                (other.initial, &other.transition, other.len()),
                d,
                |a, b| self.output[a * d..(a + 1) * d] == other.output[b * d..(b + 1) * d],
            )
    }

    /// Parses wreath recursion text such as `p=(p,q)[1,0]; q=(p,q)`.
    ///
    /// Definitions are separated by `;` or newlines; `#` starts a comment.
    /// Sections are listed for digits `0,…,d−1`; the optional bracket lists the
    /// first-level images `[σ(0),…,σ(d−1)]` and defaults to the identity. The
    /// radix is the section count and the first definition is the initial state.
    pub fn parse_wreath(text: &str) -> Result<MealyMachine> {
        let mut defs = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let mut cursor = LineCursor::new(line, line_no + 1);
            loop {
                cursor.skip_ws();
                if cursor.at_end() {
                    break;
                }
                if cursor.eat(';') {
                    continue;
                }
                defs.push(WreathDef::parse(&mut cursor)?);
                cursor.skip_ws();
                if !cursor.at_end() && !cursor.eat(';') {
                    return Err(cursor.error("expected `;` between definitions"));
                }
            }
        }
        let first = defs
            .first()
            .ok_or_else(|| Error::InvalidLiteral("empty wreath recursion".into()))?;
        let radix = Radix::new(first.sections.len() as u32).map_err(|_| first.error("a state needs at least two sections"))?;
        let initial = first.name.clone();
        let rows = defs
            .into_iter()
            .map(|def| def.into_row(radix))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(radix, rows, &initial)
    }

    /// One definition per line, `name = (s0,…,s_{d−1}) [σ(0),…,σ(d−1)]`,
    /// omitting the map when it is the identity.
    pub fn print_wreath(&self) -> String {
        let d = self.radix.size();
        let mut out = String::new();
        for q in self.reachable_from(self.initial) {
            let sections: Vec<&str> = (0..d).map(|x| self.name(self.next(q, x as Digit))).collect();
            write!(out, "{} = ({})", self.names[q], sections.join(",")).unwrap();
            let map = &self.output[q * d..(q + 1) * d];
            if map.iter().enumerate().any(|(x, &y)| x != y as usize) {
                let images: Vec<String> = map.iter().map(|&y| self.radix.digit_char(y).to_string()).collect();
                write!(out, " [{}]", images.join(",")).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// A parsed `name = (s0,…) [o0,…]` definition, positions kept for errors.
pub(crate) struct WreathDef {
    pub name: String,
    pub sections: Vec<String>,
    pub map: Option<Vec<(String, usize)>>,
    line: usize,
    column: usize,
}

impl WreathDef {
    pub(crate) fn parse(cursor: &mut LineCursor) -> Result<WreathDef> {
        cursor.skip_ws();
        let (line, column) = cursor.position();
        let name = cursor.ident()?;
        cursor.skip_ws();
        cursor.expect('=')?;
        cursor.skip_ws();
        cursor.expect('(')?;
        let sections = cursor.list(')')?.into_iter().map(|(s, _)| s).collect();
        cursor.skip_ws();
        let map = if cursor.eat('[') { Some(cursor.list(']')?) } else { None };
        Ok(WreathDef {
            name,
            sections,
            map,
            line,
            column,
        })
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: format!("state `{}`: {message}", self.name),
        }
    }

    pub(crate) fn into_row(self, radix: Radix) -> Result<(String, Vec<(String, Digit)>)> {
        let d = radix.size();
        if self.sections.len() != d {
            return Err(self.error(&format!("expected {d} sections, found {}", self.sections.len())));
        }
        let images: Vec<Digit> = match &self.map {
            None => radix.digits().collect(),
            Some(items) => {
                if items.len() != d {
                    return Err(self.error(&format!("expected {d} map entries, found {}", items.len())));
                }
                items
                    .iter()
                    .map(|(text, column)| {
                        let mut chars = text.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => radix.parse_digit(c),
                            _ => Err(Error::InvalidLiteral(text.clone())),
                        }
                        .map_err(|_| Error::Parse {
                            line: self.line,
                            column: *column,
                            message: format!("map entry `{text}` of state `{}` is not a digit below {d}", self.name),
                        })
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok((self.name, self.sections.into_iter().zip(images).collect()))
    }
}

pub(crate) fn check_names(names: &[String]) -> Result<()> {
    name_index(names.iter()).map(|_| ())
}

pub(crate) fn name_index<'a>(names: impl Iterator<Item = &'a String>) -> Result<HashMap<&'a str, usize>> {
    let mut index = HashMap::new();
    for (i, name) in names.enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::DuplicateState(name.clone()));
        }
    }
    Ok(index)
}

/// Quotient by `block`: names, transitions and one member per block, blocks
/// ordered by BFS from the initial block.
pub(crate) fn quotient(
    block: &[usize],
    transition: &[usize],
    d: usize,
    initial: usize,
    names: &[String],
) -> (Vec<String>, Vec<usize>, Vec<usize>) {
    let blocks = block.iter().max().map_or(0, |&b| b + 1);
    let mut member = vec![usize::MAX; blocks];
    for (q, &b) in block.iter().enumerate() {
        if member[b] == usize::MAX {
            member[b] = q;
        }
    }
    let block_transition: Vec<usize> = (0..blocks)
        .flat_map(|b| (0..d).map(move |x| (b, x)))
        .map(|(b, x)| block[transition[member[b] * d + x]])
        .collect();
    let order = partition::bfs_order(block[initial], &block_transition, d, blocks);
    let mut new_id = vec![usize::MAX; blocks];
    order.iter().enumerate().for_each(|(i, &b)| new_id[b] = i);
    let names = order.iter().map(|&b| names[member[b]].clone()).collect();
    let trans = order
        .iter()
        .flat_map(|&b| (0..d).map(move |x| (b, x)))
        .map(|(b, x)| new_id[block_transition[b * d + x]])
        .collect();
    let members = order.iter().map(|&b| member[b]).collect();
    (names, trans, members)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lamplighter() -> MealyMachine {
        MealyMachine::parse_wreath("p=(p,q)[1,0]; q=(p,q)").unwrap()
    }

    fn w(s: &str) -> EpWord {
        EpWord::parse(s, Radix::BINARY).unwrap()
    }

    #[test]
    fn parses_example_machines() {
        let m = lamplighter();
        let (p, q) = (m.state("p").unwrap(), m.state("q").unwrap());
        assert_eq!((m.output(p, 0), m.output(p, 1)), (1, 0));
        assert_eq!((m.output(q, 0), m.output(q, 1)), (0, 1));
        assert_eq!((m.next(p, 0), m.next(p, 1)), (p, q));

        let e = MealyMachine::parse_wreath("e=(e,e)").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.apply_finite(0, &[1, 0, 1]).unwrap(), vec![1, 0, 1]);

        let t = MealyMachine::parse_wreath("t=(t,s); s=(s,t)[0,0]").unwrap();
        let s = t.state("s").unwrap();
        assert_eq!((t.output(s, 0), t.output(s, 1)), (0, 0));
    }

    #[test]
    fn wreath_errors() {
        assert!(matches!(
            MealyMachine::parse_wreath("p=(p,r)"),
            Err(Error::UnknownState(s)) if s == "r"
        ));
        assert!(matches!(
            MealyMachine::parse_wreath("p=(p,p)[0,2]"),
            Err(Error::Parse { line: 1, column: 11, .. })
        ));
        assert!(matches!(
            MealyMachine::parse_wreath("p=(p,p)\np=(p,p)"),
            Err(Error::DuplicateState(_))
        ));
        assert!(matches!(
            MealyMachine::parse_wreath("p=(p,q); q=(q,q); r=(r,r)"),
            Err(Error::Unreachable { states, .. }) if states == ["r"]
        ));
        assert!(matches!(
            MealyMachine::parse_wreath("p=(p,p,p); q=(p,q)"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn wreath_round_trip() {
        for text in ["p=(p,q)[1,0]; q=(p,q)", "t=(t,s); s=(s,t)[0,0]", "a=(b,a,c)[2,2,0]\nb=(a,a,a)\nc=(c,b,a)[1,0,2]"] {
            let m = MealyMachine::parse_wreath(text).unwrap();
            let back = MealyMachine::parse_wreath(&m.print_wreath()).unwrap();
            assert!(m.is_isomorphic(&back));
            assert_eq!(m, back);
        }
        assert_eq!(lamplighter().print_wreath(), "p = (p,q) [1,0]\nq = (p,q)\n");
    }

    #[test]
    fn finite_and_periodic_images() {
        let m = lamplighter();
        let (p, q) = (m.state("p").unwrap(), m.state("q").unwrap());
        assert_eq!(m.apply_finite(p, &[0, 1, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(m.apply_finite(q, &[1, 1]).unwrap(), vec![1, 1]);
        assert_eq!(m.apply_ep(q, &w("11(0)")).unwrap().prefix(2), vec![1, 1]);
        assert_eq!(m.apply_ep(p, &w("(0)")).unwrap(), w("(1)"));
        assert_eq!(m.apply_ep(p, &w("1(0)")).unwrap(), w("00(1)"));
        assert_eq!(m.apply_ep(q, &w("(0)")).unwrap(), w("0(1)"));
        assert!(m.apply_finite(p, &[2]).is_err());
    }

    #[test]
    fn sections() {
        let m = lamplighter();
        let (p, q) = (m.state("p").unwrap(), m.state("q").unwrap());
        assert_eq!(m.section_at(p, &[0, 1]).unwrap(), q);
        assert_eq!(m.section_at(p, &[]).unwrap(), p);
        assert_eq!(m.section_at(p, &[1, 1]).unwrap(), q);
    }

    #[test]
    fn invertibility() {
        assert!(lamplighter().is_invertible());
        assert!(!MealyMachine::parse_wreath("t=(t,s); s=(s,t)[0,0]").unwrap().is_invertible());
        assert!(MealyMachine::parse_wreath("e=(e,e)").unwrap().is_invertible());
    }

    #[test]
    fn minimization() {
        let twins = MealyMachine::parse_wreath("a=(b,a)[1,0]; b=(a,b)[1,0]").unwrap();
        assert_eq!(twins.minimize().len(), 1);
        assert_eq!(lamplighter().minimize().len(), 2);
        let copies = MealyMachine::parse_wreath("e1=(e2,e3); e2=(e3,e1); e3=(e1,e2)").unwrap();
        let min = copies.minimize();
        assert_eq!(min.len(), 1);
        assert_eq!(min.name(0), "e1");
    }

    #[test]
    fn isomorphism() {
        let m = lamplighter();
        let renamed = MealyMachine::parse_wreath("b=(a,b); a=(a,b)[1,0]").unwrap().rooted_at(1);
        assert!(m.is_isomorphic(&renamed));
        assert!(!m.is_isomorphic(&MealyMachine::parse_wreath("e=(e,e)").unwrap()));
    }

    #[test]
    fn rooted_machines_trim() {
        let m = MealyMachine::parse_wreath("a=(b,a); b=(b,b)[0,0]").unwrap();
        let b = m.rooted_at(m.state("b").unwrap());
        assert_eq!(b.names(), ["b"]);
    }
}
