mod common;

use common::{rational, value, Q};
use lipaut::{closure_a, enumerate_p, BigRational, DadicRational, EpWord, Error, Radix, Rational128, Rational64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed};
use proptest::prelude::*;

fn radix_strategy() -> impl Strategy<Value = Radix> {
    prop::sample::select(vec![2u32, 3, 10]).prop_map(|d| Radix::new(d).unwrap())
}

fn digits(r: Radix, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..r.get(), len)
}

fn epword_in(r: Radix) -> impl Strategy<Value = EpWord> {
    (digits(r, 0..6), digits(r, 1..5)).prop_map(move |(u, v)| EpWord::new(r, u, v).unwrap())
}

fn epword() -> impl Strategy<Value = EpWord> {
    radix_strategy().prop_flat_map(epword_in)
}

fn pair() -> impl Strategy<Value = (EpWord, EpWord)> {
    radix_strategy().prop_flat_map(|r| (epword_in(r), epword_in(r)))
}

/// Rationals with denominators coprime to the radix.
fn dadic_rational() -> impl Strategy<Value = (Radix, BigRational)> {
    (radix_strategy(), -5000i64..5000, 1i64..400).prop_filter_map("denominator shares a factor with d", |(r, n, m)| {
        (m.gcd(&(r.get() as i64)) == 1).then(|| (r, BigRational::new(BigInt::from(n), BigInt::from(m)).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn unrolled_forms_canonicalize_alike(
        (r, u, v) in radix_strategy().prop_flat_map(|r| (Just(r), digits(r, 0..5), digits(r, 1..4))),
        rotate in 0usize..4,
        repeat in 1usize..3,
    ) {
        let a = EpWord::new(r, u.clone(), v.clone()).unwrap();
        let k = rotate % v.len();
        let mut u2 = u.clone();
        u2.extend_from_slice(&v[..k]);
        let mut v2: Vec<u8> = v[k..].iter().chain(&v[..k]).copied().collect();
        v2 = v2.repeat(repeat);
        let b = EpWord::new(r, u2, v2).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(value(r.get() as u32, &u, &v), rational(&b));
        prop_assert_eq!(EpWord::new(r, a.preperiod().to_vec(), a.period().to_vec()).unwrap(), a);
    }

    #[test]
    fn records_equal_iff_values_equal((a, b) in pair()) {
        prop_assert_eq!(a == b, rational(&a) == rational(&b));
    }

    #[test]
    fn rational_round_trips(a in epword()) {
        let q = a.to_rational::<BigInt>().unwrap();
        prop_assert_eq!(q.as_ratio(), &rational(&a));
        prop_assert!(q.is_dadic(a.radix()));
        prop_assert_eq!(EpWord::from_rational(&q, a.radix()).unwrap(), a);
    }

    #[test]
    fn rationals_round_trip_through_words((r, q) in dadic_rational()) {
        let a = EpWord::from_rational(&q, r).unwrap();
        prop_assert_eq!(a.to_rational::<BigInt>().unwrap(), q);
    }

    #[test]
    fn arithmetic_is_a_ring_homomorphism((a, b) in pair()) {
        prop_assert_eq!(rational(&a.try_add(&b).unwrap()), rational(&a) + rational(&b));
        prop_assert_eq!(rational(&a.try_sub(&b).unwrap()), rational(&a) - rational(&b));
        prop_assert_eq!(rational(&a.negate()), -rational(&a));
    }

    #[test]
    fn shift_drops_first_digit(a in epword()) {
        let d = Q::from_integer(BigInt::from(a.radix().get()));
        let first = Q::from_integer(BigInt::from(a.first_digit()));
        prop_assert_eq!(rational(&a.shift()), (rational(&a) - first) / d);
        prop_assert_eq!(a.shift().digit(3), a.digit(4));
    }

    #[test]
    fn multiplying_by_powers_inverts_division(a in epword(), k in 0usize..5) {
        let up = a.mul_power(k);
        prop_assert_eq!(up.prefix(k), vec![0; k]);
        prop_assert_eq!(up.div_power(k).unwrap(), a.clone());
        let scale = Q::from_integer(Pow::pow(BigInt::from(a.radix().get()), k));
        prop_assert_eq!(rational(&up), rational(&a) * scale);
    }

    #[test]
    fn division_requires_trailing_zeros(a in epword()) {
        let divisible = a.first_digit() == 0;
        prop_assert_eq!(a.div_power(1).is_ok(), divisible);
        if !divisible {
            prop_assert!(matches!(a.div_power(1), Err(Error::NotDivisible { .. })), "expected NotDivisible");
        }
    }

    #[test]
    fn backends_agree(a in epword()) {
        let big = a.to_rational::<BigInt>().unwrap();
        let small = a.to_rational::<i128>().unwrap();
        prop_assert_eq!(big.to_string(), small.to_string());
        prop_assert_eq!(EpWord::from_rational(&small, a.radix()).unwrap(), a);
    }
}

#[test]
fn integers_round_trip() {
    for r in [Radix::BINARY, Radix::new(10).unwrap()] {
        for n in 0..1_000_000u64 {
            let q: Rational64 = EpWord::from_integer(n, r).to_rational().unwrap();
            assert!(q.is_integer() && *q.numer() == n as i64, "{n} in base {r}");
        }
    }
}

#[test]
fn small_backends_report_overflow() {
    let long = EpWord::new(Radix::BINARY, vec![], [1, 0].repeat(40)).unwrap();
    let period = EpWord::new(Radix::BINARY, vec![], [0u8; 69].iter().copied().chain([1]).collect()).unwrap();
    assert_eq!(long.period().len(), 2);
    assert_eq!(period.to_rational::<i64>(), Err(Error::Overflow));
    assert!(period.to_rational::<i128>().is_ok());
    assert!(period.to_rational::<BigInt>().is_ok());
}

#[test]
fn rejects_non_dadic_rationals() {
    let half = Rational128::new(1, 2).unwrap();
    assert!(matches!(EpWord::from_rational(&half, Radix::BINARY), Err(Error::NotCoprime { .. })));
    let sixth: DadicRational<i64> = "-1/6".parse().unwrap();
    assert!(EpWord::from_rational(&sixth, Radix::new(10).unwrap()).is_err());
    assert!(EpWord::from_rational(&sixth, Radix::new(5).unwrap()).is_ok());
}

#[test]
fn p_sets_have_expected_size_and_range() {
    for d in [2u32, 3] {
        let r = Radix::new(d).unwrap();
        for l in 0..=3usize {
            for m in 1..=3usize {
                let p = enumerate_p::<i64>(l, m, r).unwrap();
                assert_eq!(p.len(), d.pow((l + m) as u32) as usize);
                let low = -(d as i64).pow(l as u32);
                let high = (d as i64).pow(l as u32) - 1;
                for x in &p {
                    let q = x.as_ratio();
                    assert!(*q >= low.into() && *q <= high.into(), "{x} outside [{low}, {high}]");
                }
            }
        }
    }
}

#[test]
fn closures_respect_bounds() {
    for d in [2u32, 3] {
        let r = Radix::new(d).unwrap();
        let big = BigInt::from(d);
        for l in 0..=3usize {
            for m in 1..=3usize {
                let a = closure_a::<BigInt>(l, m, r).unwrap();
                let p = enumerate_p::<BigInt>(l, m, r).unwrap();
                let z = Q::new(Pow::pow(&big, l + 1) + &big - 1, &big - 1);
                let modulus: BigInt = Pow::pow(&big, m) - 1;
                assert!(p.iter().all(|x| a.contains(x)), "P ⊄ A for l={l} m={m} d={d}");
                for x in &a {
                    assert!(x.as_ratio().abs() <= z, "{x} beyond z={z}");
                    assert!(modulus.is_multiple_of(x.denom()));
                    let shifted = x.shift(r).unwrap();
                    let closed = p.iter().any(|y| a.contains(&shifted.checked_add(y).unwrap()));
                    assert!(closed, "σ({x}) + P leaves A");
                }
            }
        }
    }
}
