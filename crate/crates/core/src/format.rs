//! Line-oriented machine files.
//!
//! ```text
//! # lamplighter generator
//! mealy d=2 start=p
//! p: 0 -> p / 1 ; 1 -> q / 0
//! q = (p,q)
//!
//! moore d=2 start=a
//! a [out=(0)]: 0 -> a ; 1 -> b
//! b [out=1(0)]: 0 -> b ; 1 -> a
//! ```
//!
//! Mealy state lines give `digit -> target / output` per digit, or use the
//! wreath form `name = (s0,…) [σ(0),…]`. Moore state lines carry the output
//! as an eventually periodic literal.

use std::fmt::Write as _;

use crate::dadic::{Digit, EpWord, Radix};
use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, WreathDef};
use crate::moore::MooreMachine;

/// Either kind of machine read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Mealy(MealyMachine),
    Moore(MooreMachine),
}

impl Machine {
    pub fn radix(&self) -> Radix {
        match self {
            Machine::Mealy(m) => m.radix(),
            Machine::Moore(m) => m.radix(),
        }
    }

    /// Non-fatal findings, currently only missing zero-stability of Moore machines.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            Machine::Moore(m) => m.check_zero_stable().err().map(|e| e.to_string()).into_iter().collect(),
            Machine::Mealy(_) => Vec::new(),
        }
    }
}

pub fn parse_machine_file(text: &str) -> Result<Machine> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, strip_comment(line)))
        .filter(|(_, line)| !line.trim().is_empty());
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing header line".into(),
    })?;
    let mut cursor = LineCursor::new(header, line_no);
    cursor.skip_ws();
    let kind = cursor.ident()?;
    let mut radix = None;
    let mut start = None;
    loop {
        cursor.skip_ws();
        if cursor.at_end() {
            break;
        }
        let (line, column) = cursor.position();
        let key = cursor.ident()?;
        cursor.expect('=')?;
        match key.as_str() {
            "d" => {
                let (value, column) = cursor.token()?;
                let d = value
                    .parse::<u32>()
                    .ok()
                    .and_then(|d| Radix::new(d).ok())
                    .ok_or_else(|| Error::Parse {
                        line,
                        column,
                        message: format!("radix `{value}` is not an integer in 2..=36"),
                    })?;
                radix = Some(d);
            }
            "start" => start = Some(cursor.ident()?),
            _ => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unknown header key `{key}`"),
                })
            }
        }
    }
    let missing = |what: &str| Error::Parse {
        line: line_no,
        column: 1,
        message: format!("header is missing `{what}=`"),
    };
    let radix = radix.ok_or_else(|| missing("d"))?;
    let start = start.ok_or_else(|| missing("start"))?;
    match kind.as_str() {
        "mealy" => {
            let mut rows = Vec::new();
            for (line_no, line) in lines {
                rows.push(parse_mealy_line(line, line_no, radix)?);
            }
            MealyMachine::from_rows(radix, rows, &start).map(Machine::Mealy)
        }
        "moore" => {
            let mut rows = Vec::new();
            for (line_no, line) in lines {
                rows.push(parse_moore_line(line, line_no, radix)?);
            }
            MooreMachine::from_rows(radix, rows, &start).map(Machine::Moore)
        }
        other => Err(Error::Parse {
            line: line_no,
            column: 1,
            message: format!("expected `mealy` or `moore`, found `{other}`"),
        }),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn parse_mealy_line(line: &str, line_no: usize, radix: Radix) -> Result<(String, Vec<(String, Digit)>)> {
    let mut cursor = LineCursor::new(line, line_no);
    cursor.skip_ws();
    let mut probe = cursor.clone();
    probe.ident()?;
    probe.skip_ws();
    if probe.peek() == Some('=') {
        let def = WreathDef::parse(&mut cursor)?;
        cursor.finish()?;
        return def.into_row(radix);
    }
    let name = cursor.ident()?;
    cursor.skip_ws();
    cursor.expect(':')?;
    let entries = parse_transitions(&mut cursor, radix, true)?;
    let mut row = Vec::with_capacity(radix.size());
    for x in radix.digits() {
        match entries.iter().find(|e| e.0 == x) {
            Some((_, target, y)) => row.push((target.clone(), y.expect("outputs required"))),
            None => return Err(Error::MissingTransition { state: name, digit: x }),
        }
    }
    Ok((name, row))
}

fn parse_moore_line(line: &str, line_no: usize, radix: Radix) -> Result<(String, EpWord, Vec<String>)> {
    let mut cursor = LineCursor::new(line, line_no);
    cursor.skip_ws();
    let name = cursor.ident()?;
    cursor.skip_ws();
    cursor.expect('[')?;
    cursor.skip_ws();
    let key = cursor.ident()?;
    if key != "out" {
        return Err(cursor.error(&format!("expected `out=`, found `{key}`")));
    }
    cursor.expect('=')?;
    let (line, column) = cursor.position();
    let literal = cursor.until(']');
    cursor.expect(']')?;
    let output = EpWord::parse(&literal, radix).map_err(|e| Error::Parse {
        line,
        column,
        message: format!("output of `{name}`: {e}"),
    })?;
    cursor.skip_ws();
    cursor.expect(':')?;
    let entries = parse_transitions(&mut cursor, radix, false)?;
    let mut row = Vec::with_capacity(radix.size());
    for x in radix.digits() {
        match entries.iter().find(|e| e.0 == x) {
            Some((_, target, _)) => row.push(target.clone()),
            None => return Err(Error::MissingTransition { state: name, digit: x }),
        }
    }
    Ok((name, output, row))
}

type TransitionEntry = (Digit, String, Option<Digit>);

fn parse_transitions(cursor: &mut LineCursor, radix: Radix, with_output: bool) -> Result<Vec<TransitionEntry>> {
    let mut entries: Vec<TransitionEntry> = Vec::new();
    loop {
        cursor.skip_ws();
        if cursor.at_end() {
            return Ok(entries);
        }
        let x = cursor.digit(radix)?;
        if entries.iter().any(|e| e.0 == x) {
            return Err(cursor.error(&format!("digit {x} given twice")));
        }
        cursor.skip_ws();
        cursor.expect('-')?;
        cursor.expect('>')?;
        cursor.skip_ws();
        let target = cursor.ident()?;
        cursor.skip_ws();
        let y = if with_output {
            cursor.expect('/')?;
            cursor.skip_ws();
            Some(cursor.digit(radix)?)
        } else {
            None
        };
        entries.push((x, target, y));
        cursor.skip_ws();
        if !cursor.at_end() {
            cursor.expect(';')?;
        }
    }
}

pub fn print_machine_file(machine: &Machine) -> String {
    match machine {
        Machine::Mealy(m) => print_mealy(m),
        Machine::Moore(m) => print_moore(m),
    }
}

pub fn print_mealy(m: &MealyMachine) -> String {
    let radix = m.radix();
    let mut out = format!("mealy d={} start={}\n", radix, m.name(m.initial()));
    for q in 0..m.len() {
        let items: Vec<String> = radix
            .digits()
            .map(|x| {
                format!(
                    "{} -> {} / {}",
                    radix.digit_char(x),
                    m.name(m.next(q, x)),
                    radix.digit_char(m.output(q, x))
                )
            })
            .collect();
        writeln!(out, "{}: {}", m.name(q), items.join(" ; ")).unwrap();
    }
    out
}

pub fn print_moore(m: &MooreMachine) -> String {
    let radix = m.radix();
    let mut out = format!("moore d={} start={}\n", radix, m.name(m.initial()));
    for q in 0..m.len() {
        let items: Vec<String> = radix
            .digits()
            .map(|x| format!("{} -> {}", radix.digit_char(x), m.name(m.next(q, x))))
            .collect();
        writeln!(out, "{} [out={}]: {}", m.name(q), m.output(q), items.join(" ; ")).unwrap();
    }
    out
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

/// Character cursor over one line with 1-based positions for diagnostics.
#[derive(Clone)]
pub(crate) struct LineCursor {
    chars: Vec<char>,
    at: usize,
    line: usize,
}

impl LineCursor {
    pub(crate) fn new(text: &str, line: usize) -> Self {
        LineCursor {
            chars: text.chars().collect(),
            at: 0,
            line,
        }
    }

    pub(crate) fn position(&self) -> (usize, usize) {
        (self.line, self.at + 1)
    }

    pub(crate) fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.at + 1,
            message: message.to_string(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.at += 1;
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.at >= self.chars.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}` at end of line"),
            }))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing text"))
        }
    }

    /// A run of name characters, with its starting column.
    pub(crate) fn token(&mut self) -> Result<(String, usize)> {
        let column = self.at + 1;
        let start = self.at;
        while self.peek().is_some_and(is_name_char) {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.error("expected a name"));
        }
        Ok((self.chars[start..self.at].iter().collect(), column))
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        self.token().map(|(s, _)| s)
    }

    pub(crate) fn digit(&mut self, radix: Radix) -> Result<Digit> {
        let column = self.at;
        let (text, _) = self.token()?;
        let mut chars = text.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => radix.parse_digit(c).ok(),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: self.line,
            column: column + 1,
            message: format!("`{text}` is not a digit below {radix}"),
        })
    }

    /// Comma separated names up to `close`, which is consumed.
    pub(crate) fn list(&mut self, close: char) -> Result<Vec<(String, usize)>> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            items.push(self.token()?);
            self.skip_ws();
            if self.eat(close) {
                return Ok(items);
            }
            self.expect(',')?;
        }
    }

    pub(crate) fn until(&mut self, stop: char) -> String {
        let start = self.at;
        while self.peek().is_some_and(|c| c != stop) {
            self.at += 1;
        }
        self.chars[start..self.at].iter().collect::<String>().trim().to_string()
    }
}
