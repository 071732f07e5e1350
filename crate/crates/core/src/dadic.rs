//! Exact arithmetic on eventually periodic d-adic integers.
//!
//! A d-adic integer `x0 + x1·d + x2·d² + …` is stored as its digit stream
//! `x0 x1 x2 …`, written least-significant digit first. The eventually
//! periodic ones are exactly `u·v^∞` for finite words `u`, `v` and correspond
//! one-to-one with rationals whose denominator is coprime to `d`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedSub};

use crate::error::{Error, Result};
use crate::scalar::{checked_add, checked_mul, checked_pow, checked_sub, inverse_mod, residue, DadicInt};

/// A single base-d digit.
pub type Digit = u8;

/// The base `d` of the tree / ring, `2 ≤ d ≤ 36`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radix(u8);

impl Radix {
    pub const BINARY: Radix = Radix(2);

    pub fn new(d: u32) -> Result<Self> {
        if (2..=36).contains(&d) {
            Ok(Radix(d as u8))
        } else {
            Err(Error::InvalidRadix(d))
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn digits(self) -> std::ops::Range<Digit> {
        0..self.0
    }

    pub fn check_digit(self, digit: u32) -> Result<Digit> {
        if digit < self.0 as u32 {
            Ok(digit as Digit)
        } else {
            Err(Error::DigitOutOfRange {
                digit,
                radix: self.0,
            })
        }
    }

    /// Digits render as `0-9` then `a-z`.
    pub fn digit_char(self, digit: Digit) -> char {
        std::char::from_digit(digit as u32, 36).expect("digit below 36")
    }

    pub fn parse_digit(self, c: char) -> Result<Digit> {
        let value = c
            .to_digit(36)
            .ok_or_else(|| Error::InvalidLiteral(c.to_string()))?;
        self.check_digit(value)
    }

    pub fn parse_word(self, text: &str) -> Result<Vec<Digit>> {
        text.chars().map(|c| self.parse_digit(c)).collect()
    }

    pub fn format_word(self, word: &[Digit]) -> String {
        word.iter().map(|&x| self.digit_char(x)).collect()
    }

    /// `[n]_d`: base-d expansion written backwards, with `[0]_d = "0"`.
    pub fn expand(self, mut n: u64) -> Vec<Digit> {
        if n == 0 {
            return vec![0];
        }
        let d = self.0 as u64;
        let mut out = Vec::new();
        while n > 0 {
            out.push((n % d) as Digit);
            n /= d;
        }
        out
    }

    /// `w̄`: the integer whose backwards expansion is `word` (trailing zeros ignored).
    pub fn value_of(self, word: &[Digit]) -> u64 {
        word.iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.0 as u64 + x as u64)
    }

    /// `⌊log_d n⌋` for `n ≥ 1`, as digit count minus one.
    pub fn floor_log(self, n: u64) -> usize {
        self.expand(n).len() - 1
    }
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An eventually periodic d-adic integer `preperiod · period^∞`, always in
/// canonical form (minimal period, then minimal preperiod), so structural
/// equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpWord {
    radix: Radix,
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
}

impl EpWord {
    /// Builds the canonical form of `u·v^∞`.
    pub fn new(radix: Radix, preperiod: Vec<Digit>, period: Vec<Digit>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        for &x in preperiod.iter().chain(&period) {
            radix.check_digit(x as u32)?;
        }
        Ok(Self::canonical(radix, preperiod, period))
    }

    fn canonical(radix: Radix, mut preperiod: Vec<Digit>, mut period: Vec<Digit>) -> Self {
        let len = period.len();
        if let Some(p) = (1..=len)
            .filter(|p| len.is_multiple_of(*p))
            .find(|&p| (p..len).all(|i| period[i] == period[i - p]))
        {
            period.truncate(p);
        }
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EpWord {
            radix,
            preperiod,
            period,
        }
    }

    pub fn zero(radix: Radix) -> Self {
        EpWord {
            radix,
            preperiod: Vec::new(),
            period: vec![0],
        }
    }

    /// `[n]_d · 0^∞`.
    pub fn from_integer(n: u64, radix: Radix) -> Self {
        Self::from_word(radix, radix.expand(n))
    }

    /// The boundary point `word · 0^∞`.
    pub fn from_word(radix: Radix, word: Vec<Digit>) -> Self {
        Self::canonical(radix, word, vec![0])
    }

    /// Parses the literal `u(v)`, digits least significant first.
    pub fn parse(text: &str, radix: Radix) -> Result<Self> {
        let bad = || Error::InvalidLiteral(text.to_string());
        let text = text.trim();
        let open = text.find('(').ok_or_else(bad)?;
        let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        if inner.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let preperiod = radix.parse_word(&text[..open])?;
        let period = radix.parse_word(inner)?;
        Self::new(radix, preperiod, period)
    }

    #[inline]
    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    /// Coefficient of `d^k`.
    pub fn digit(&self, k: usize) -> Digit {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `k` digits.
    pub fn prefix(&self, k: usize) -> Vec<Digit> {
        (0..k).map(|i| self.digit(i)).collect()
    }

    /// `a mod d`.
    pub fn first_digit(&self) -> Digit {
        self.digit(0)
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.period == [0]
    }

    /// Drops the first `k` digits.
    pub fn drop_digits(&self, k: usize) -> Self {
        if k <= self.preperiod.len() {
            return EpWord {
                radix: self.radix,
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            };
        }
        let mut period = self.period.clone();
        period.rotate_left((k - self.preperiod.len()) % self.period.len());
        EpWord {
            radix: self.radix,
            preperiod: Vec::new(),
            period,
        }
    }

    /// The shift map `σ(a) = (a − (a mod d)) / d`.
    pub fn shift(&self) -> Self {
        self.drop_digits(1)
    }

    /// Exact division by `d^k`; the low `k` digits must vanish.
    pub fn div_power(&self, k: usize) -> Result<Self> {
        if (0..k).any(|i| self.digit(i) != 0) {
            return Err(Error::NotDivisible {
                word: self.to_string(),
                radix: self.radix.get(),
                power: k,
            });
        }
        Ok(self.drop_digits(k))
    }

    /// Multiplication by `d^k` (prepends `k` zeros).
    pub fn mul_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut preperiod = vec![0; k];
        preperiod.extend_from_slice(&self.preperiod);
        Self::canonical(self.radix, preperiod, self.period.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn negate(&self) -> Self {
        Self::zero(self.radix)
            .combine(self, true)
            .expect("same radix")
    }

    // Digitwise add/sub with carry. Past the common preperiod both operands are
    // periodic with period `lcm`, so each period block is determined by the
    // carry entering it; the first repeated entering carry closes the cycle.
    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch {
                left: self.radix.get(),
                right: other.radix.get(),
            });
        }
        let d = self.radix.get() as i32;
        let start = self.preperiod.len().max(other.preperiod.len());
        let block = self.period.len().lcm(&other.period.len());
        let mut digits = Vec::with_capacity(start + 3 * block);
        let mut carry = 0i32;
        let mut step = |pos: usize, carry: &mut i32| {
            let b = other.digit(pos) as i32;
            let s = self.digit(pos) as i32 + if subtract { -b } else { b } + *carry;
            let r = s.rem_euclid(d);
            *carry = (s - r) / d;
            digits.push(r as Digit);
        };
        for pos in 0..start {
            step(pos, &mut carry);
        }
        let mut entering = Vec::new();
        loop {
            if let Some(j) = entering.iter().position(|&c| c == carry) {
                let k = entering.len();
                let (lo, hi) = (start + j * block, start + k * block);
                return Ok(Self::canonical(
                    self.radix,
                    digits[..lo].to_vec(),
                    digits[lo..hi].to_vec(),
                ));
            }
            entering.push(carry);
            let base = start + (entering.len() - 1) * block;
            for pos in base..base + block {
                step(pos, &mut carry);
            }
        }
    }

    /// `ψ⁻¹(u·v^∞) = ū + v̄·d^{|u|} / (1 − d^{|v|})`.
    pub fn to_rational<T: DadicInt>(&self) -> Result<DadicRational<T>> {
        let d = T::from_digit(self.radix.get() as u64);
        let word_value = |word: &[Digit]| -> Result<T> {
            word.iter().rev().try_fold(T::zero(), |acc, &x| {
                checked_add(&checked_mul(&acc, &d)?, &T::from_digit(x as u64))
            })
        };
        let u = word_value(&self.preperiod)?;
        let v = word_value(&self.period)?;
        let shift = checked_pow(&d, self.preperiod.len())?;
        let denom = checked_sub(&T::one(), &checked_pow(&d, self.period.len())?)?;
        let numer = checked_add(&checked_mul(&u, &denom)?, &checked_mul(&v, &shift)?)?;
        Ok(DadicRational(Ratio::new(numer, denom)))
    }

    /// `ψ(q)`: digits come from iterating `x ↦ (x − (x mod d)) / d` until the
    /// numerator repeats (the denominator never changes).
    pub fn from_rational<T: DadicInt>(q: &DadicRational<T>, radix: Radix) -> Result<Self> {
        let denom = q.denom().clone();
        let inverse = inverse_mod(&denom, radix.get()).ok_or_else(|| Error::NotCoprime {
            denominator: denom.to_string(),
            radix: radix.get(),
        })?;
        let d = T::from_digit(radix.get() as u64);
        let mut numer = q.numer().clone();
        let mut seen: HashMap<T, usize> = HashMap::new();
        let mut digits = Vec::new();
        loop {
            if let Some(&i) = seen.get(&numer) {
                let period = digits.split_off(i);
                return Ok(Self::canonical(radix, digits, period));
            }
            seen.insert(numer.clone(), digits.len());
            let r = (residue(&numer, radix.get()) * inverse) % radix.get() as u64;
            digits.push(r as Digit);
            let rest = checked_sub(&numer, &checked_mul(&T::from_digit(r), &denom)?)?;
            numer = rest.div_floor(&d);
        }
    }
}

impl fmt::Display for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            self.radix.format_word(&self.preperiod),
            self.radix.format_word(&self.period)
        )
    }
}

impl fmt::Debug for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpWord[d={}]({})", self.radix, self)
    }
}

/// A rational number with denominator coprime to the radix, i.e. an element of
/// `Z_{d,0}`. Always in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DadicRational<T: DadicInt>(Ratio<T>);

impl<T: DadicInt> DadicRational<T> {
    pub fn new(numer: T, denom: T) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidLiteral(format!("{numer}/0")));
        }
        Ok(DadicRational(Ratio::new(numer, denom)))
    }

    pub fn from_integer(n: T) -> Self {
        DadicRational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(T::zero())
    }

    pub fn numer(&self) -> &T {
        self.0.numer()
    }

    pub fn denom(&self) -> &T {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &Ratio<T> {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Membership in `Z_{d,0}`.
    pub fn is_dadic(&self, radix: Radix) -> bool {
        self.denom()
            .gcd(&T::from_digit(radix.get() as u64))
            .is_one()
    }

    /// `x mod d` taken in `Z_d`.
    pub fn first_digit(&self, radix: Radix) -> Result<Digit> {
        let inverse = inverse_mod(self.denom(), radix.get()).ok_or_else(|| Error::NotCoprime {
            denominator: self.denom().to_string(),
            radix: radix.get(),
        })?;
        Ok(((residue(self.numer(), radix.get()) * inverse) % radix.get() as u64) as Digit)
    }

    /// The shift map `σ(x) = (x − (x mod d)) / d`.
    pub fn shift(&self, radix: Radix) -> Result<Self> {
        let r = T::from_digit(self.first_digit(radix)? as u64);
        let numer = checked_sub(self.numer(), &checked_mul(&r, self.denom())?)?;
        let denom = checked_mul(self.denom(), &T::from_digit(radix.get() as u64))?;
        Self::new(numer, denom)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        CheckedAdd::checked_add(&self.0, &other.0)
            .map(DadicRational)
            .ok_or(Error::Overflow)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        CheckedSub::checked_sub(&self.0, &other.0)
            .map(DadicRational)
            .ok_or(Error::Overflow)
    }
}

impl<T: DadicInt> fmt::Display for DadicRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl<T: DadicInt> FromStr for DadicRational<T> {
    type Err = Error;

    /// `n` or `n/m` in base 10 with optional sign.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLiteral(s.to_string());
        let s = s.trim();
        let parse = |t: &str| -> Result<T> {
            let t = t.strip_prefix('+').unwrap_or(t);
            if t.is_empty() || !t.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<T>().map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((n, m)) => Self::new(parse(n)?, parse(m)?),
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

/// `P^{l,m} = { i + j·d^l / (1 − d^m) : 0 ≤ i < d^l, 0 ≤ j < d^m }`, listed once
/// per generating pair `(i, j)`, so the result has `d^{l+m}` entries.
pub fn enumerate_p<T: DadicInt>(l: usize, m: usize, radix: Radix) -> Result<Vec<DadicRational<T>>> {
    assert!(m >= 1, "period length bound must be positive");
    let d = T::from_digit(radix.get() as u64);
    let dl = checked_pow(&d, l)?;
    let dm = checked_pow(&d, m)?;
    let denom = checked_sub(&T::one(), &dm)?;
    let count_l = dl.to_u64().ok_or(Error::Overflow)?;
    let count_m = dm.to_u64().ok_or(Error::Overflow)?;
    let mut out = Vec::with_capacity((count_l * count_m) as usize);
    for i in 0..count_l {
        let i = T::from_digit(i);
        for j in 0..count_m {
            let j = T::from_digit(j);
            let numer = checked_add(&checked_mul(&i, &denom)?, &checked_mul(&j, &dl)?)?;
            out.push(DadicRational(Ratio::new(numer, denom.clone())));
        }
    }
    Ok(out)
}

/// The finite closure `A^{l,m} = ⋃ A_i` with `A_0 = P^{l,m}` and
/// `A_{i+1} = σ(A_i) + P^{l,m}`.
///
/// Elements are tracked as integers scaled by `D = d^m − 1`, which clears every
/// denominator that can occur. Each new element is checked against the bound
/// `|x| ≤ (d^{l+1} + d − 1) / (d − 1)`.
pub fn closure_a<T: DadicInt>(l: usize, m: usize, radix: Radix) -> Result<BTreeSet<DadicRational<T>>> {
    assert!(m >= 1, "period length bound must be positive");
    let dr = radix.get();
    let d = T::from_digit(dr as u64);
    let dl = checked_pow(&d, l)?;
    let scale = checked_sub(&checked_pow(&d, m)?, &T::one())?;
    let scale_inverse = T::from_digit(inverse_mod(&scale, dr).expect("d^m - 1 is coprime to d"));
    // |N|·(d−1) ≤ (d^{l+1} + d − 1)·D
    let bound = checked_mul(
        &checked_add(&checked_mul(&dl, &d)?, &checked_sub(&d, &T::one())?)?,
        &scale,
    )?;
    let d_minus_one = checked_sub(&d, &T::one())?;

    let mut p = HashSet::new();
    for i in 0..dl.to_u64().ok_or(Error::Overflow)? {
        for j in 0..checked_add(&scale, &T::one())?.to_u64().ok_or(Error::Overflow)? {
            let scaled = checked_sub(
                &checked_mul(&T::from_digit(i), &scale)?,
                &checked_mul(&T::from_digit(j), &dl)?,
            )?;
            p.insert(scaled);
        }
    }
    let shift = |n: &T| -> Result<T> {
        let r = residue(&checked_mul(n, &scale_inverse)?, dr);
        let rest = checked_sub(n, &checked_mul(&T::from_digit(r), &scale)?)?;
        Ok(rest.div_floor(&d))
    };

    let mut union: HashSet<T> = p.clone();
    let mut current = p.clone();
    loop {
        let shifted: HashSet<T> = current.iter().map(shift).collect::<Result<_>>()?;
        let mut next = HashSet::new();
        for s in &shifted {
            for q in &p {
                next.insert(checked_add(s, q)?);
            }
        }
        let mut grew = false;
        for n in &next {
            assert!(
                checked_mul(&n.abs(), &d_minus_one)? <= bound,
                "closure element {n}/{scale} escapes the finiteness bound"
            );
            grew |= union.insert(n.clone());
        }
        if !grew {
            break;
        }
        current = next;
    }
    Ok(union
        .into_iter()
        .map(|n| DadicRational(Ratio::new(n, scale.clone())))
        .collect())
}
