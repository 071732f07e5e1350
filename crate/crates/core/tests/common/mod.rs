#![allow(dead_code)]

use lipaut::{Digit, EpWord, MealyMachine, MooreMachine, Radix, StateId};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<BigInt>;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x1a5e_d00d ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn radix(d: u32) -> Radix {
    Radix::new(d).unwrap()
}

pub fn lamplighter() -> MealyMachine {
    MealyMachine::parse_wreath("p=(p,q)[1,0]; q=(p,q)").unwrap()
}

pub fn thue_morse() -> MooreMachine {
    let r = Radix::BINARY;
    MooreMachine::new(
        r,
        vec!["a".into(), "b".into()],
        vec![0, 1, 1, 0],
        vec![EpWord::from_integer(0, r), EpWord::from_integer(1, r)],
        0,
    )
    .unwrap()
}

/// Hand-picked machines that every corpus-wide check also covers.
pub fn named_machines() -> Vec<(&'static str, MealyMachine)> {
    let lamp = lamplighter();
    vec![
        ("lamplighter p", lamp.clone()),
        ("lamplighter q", lamp.rooted_at(1)),
        ("identity", MealyMachine::parse_wreath("e=(e,e)").unwrap()),
        ("constant zero", MealyMachine::parse_wreath("c=(c,c)[0,0]").unwrap()),
        ("thue-morse endomorphism", MealyMachine::parse_wreath("t=(t,s); s=(s,t)[0,0]").unwrap()),
        ("adding machine", MealyMachine::parse_wreath("a=(e,a)[1,0]; e=(e,e)").unwrap()),
        ("ternary cycle", MealyMachine::parse_wreath("r=(r,s,r)[1,2,0]; s=(s,s,r)[0,0,2]").unwrap()),
    ]
}

pub fn random_mealy(rng: &mut impl Rng, d: u32, max_states: usize) -> MealyMachine {
    let r = radix(d);
    let n = rng.gen_range(1..=max_states);
    let size = n * d as usize;
    let transition = (0..size).map(|_| rng.gen_range(0..n)).collect();
    let output = (0..size).map(|_| rng.gen_range(0..d) as Digit).collect();
    let names = (0..n).map(|i| format!("s{i}")).collect();
    MealyMachine::trimmed(r, names, transition, output, 0).unwrap()
}

/// 120 machines per radix 2 and 3, at most three states each.
pub fn mealy_corpus() -> Vec<MealyMachine> {
    let mut rng = rng(1);
    [2, 3]
        .into_iter()
        .flat_map(|d| (0..120).map(move |_| d))
        .map(|d| random_mealy(&mut rng, d, 3))
        .collect()
}

/// Everything the conversion criteria run over.
pub fn full_mealy_corpus() -> Vec<MealyMachine> {
    named_machines().into_iter().map(|(_, m)| m).chain(mealy_corpus()).collect()
}

pub fn random_epword(rng: &mut impl Rng, r: Radix, max_pre: usize, max_per: usize) -> EpWord {
    let d = r.get();
    let pre = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..d)).collect();
    let per = (0..rng.gen_range(1..=max_per)).map(|_| rng.gen_range(0..d)).collect();
    EpWord::new(r, pre, per).unwrap()
}

/// Random zero-stable DFAO: outputs are constant on each component of the
/// graph of `q ↦ δ(q, 0)`.
pub fn random_zero_stable_moore(rng: &mut impl Rng, d: u32, max_states: usize) -> MooreMachine {
    let r = radix(d);
    let n = rng.gen_range(1..=max_states);
    let transition: Vec<StateId> = (0..n * d as usize).map(|_| rng.gen_range(0..n)).collect();
    let mut component: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], q: usize) -> usize {
        if c[q] != q {
            c[q] = find(c, c[q]);
        }
        c[q]
    }
    for q in 0..n {
        let (a, b) = (find(&mut component, q), find(&mut component, transition[q * d as usize]));
        component[a] = b;
    }
    let values: Vec<EpWord> = (0..n).map(|_| random_epword(rng, r, 2, 2)).collect();
    let output = (0..n).map(|q| values[find(&mut component, q)].clone()).collect();
    let names = (0..n).map(|i| format!("k{i}")).collect();
    MooreMachine::trimmed(r, names, transition, output, 0).unwrap()
}

pub fn moore_corpus() -> Vec<MooreMachine> {
    let mut rng = rng(2);
    [2, 3]
        .into_iter()
        .flat_map(|d| (0..60).map(move |_| d))
        .map(|d| random_zero_stable_moore(&mut rng, d, 3))
        .collect()
}

/// `ψ⁻¹(u·v^∞) = ū + v̄·d^{|u|}/(1 − d^{|v|})`, straight from the digits.
pub fn value(d: u32, preperiod: &[Digit], period: &[Digit]) -> Q {
    let d = BigInt::from(d);
    let num = |w: &[Digit]| w.iter().rev().fold(BigInt::zero(), |acc, &x| acc * &d + BigInt::from(x));
    let u = num(preperiod);
    let v = num(period);
    let scale: BigInt = Pow::pow(&d, preperiod.len());
    let denom = BigInt::one() - Pow::pow(&d, period.len());
    Q::from_integer(u) + Q::new(v * scale, denom)
}

pub fn rational(w: &EpWord) -> Q {
    value(w.radix().get() as u32, w.preperiod(), w.period())
}

/// `g(n·0^∞)` by running the machine over the digits of `n` and then over
/// zeros until a state repeats.
pub fn image(m: &MealyMachine, q: StateId, n: u64) -> Q {
    let d = m.radix().get() as u64;
    let mut digits = Vec::new();
    let mut k = n;
    while k > 0 {
        digits.push((k % d) as Digit);
        k /= d;
    }
    let mut state = q;
    let mut out = Vec::new();
    for &x in &digits {
        out.push(m.output(state, x));
        state = m.next(state, x);
    }
    let mut seen: Vec<StateId> = Vec::new();
    while !seen.contains(&state) {
        seen.push(state);
        out.push(m.output(state, 0));
        state = m.next(state, 0);
    }
    let start = digits.len() + seen.iter().position(|&s| s == state).unwrap();
    value(d as u32, &out[..start], &out[start..])
}

/// Reduced van der Put coefficient, Mahler convention, over exact rationals.
pub fn vdp(m: &MealyMachine, q: StateId, n: u64) -> Q {
    let d = m.radix().get() as u64;
    if n < d {
        return image(m, q, n);
    }
    let mut top = 1u64;
    let mut exponent = 0usize;
    while top * d <= n {
        top *= d;
        exponent += 1;
    }
    let lower = n % top;
    (image(m, q, n) - image(m, q, lower)) / Q::from_integer(Pow::pow(BigInt::from(d), exponent))
}
