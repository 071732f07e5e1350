mod common;

use common::{lamplighter, random_mealy, rational, rng, thue_morse, vdp};
use lipaut::vanderput::n_underscore;
use lipaut::{
    evaluate_series, mealy_to_moore, vdp_coefficient, CoefficientTable, EpWord, MachineCoefficients, MealyMachine,
    Portrait, Radix, StoredCoefficients, Variant,
};
use proptest::prelude::*;

fn mealy() -> impl Strategy<Value = MealyMachine> {
    (any::<u64>(), prop::sample::select(vec![2u32, 3])).prop_map(|(seed, d)| random_mealy(&mut rng(seed), d, 3))
}

/// All words of length `len` over the radix, in counting order.
fn words(r: Radix, len: usize) -> Vec<Vec<u8>> {
    let d = r.get() as u64;
    (0..d.pow(len as u32))
        .map(|mut k| {
            (0..len)
                .map(|_| {
                    let x = (k % d) as u8;
                    k /= d;
                    x
                })
                .collect()
        })
        .collect()
}

#[test]
fn n_underscore_strips_the_leading_digit() {
    assert_eq!(n_underscore(22, Radix::BINARY).unwrap(), 6);
    assert_eq!(n_underscore(1, Radix::BINARY).unwrap(), 0);
    assert_eq!(n_underscore(47, Radix::new(10).unwrap()).unwrap(), 7);
    assert!(n_underscore(0, Radix::BINARY).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coefficients_match_rational_oracle(m in mealy()) {
        let d = m.radix().get() as u64;
        for q in 0..m.len() {
            for n in 0..d.pow(3) {
                let b = vdp_coefficient(&m, q, n, Variant::Mahler).unwrap();
                prop_assert_eq!(rational(&b), vdp(&m, q, n));
            }
        }
    }

    #[test]
    fn schikhof_differs_only_below_d(m in mealy()) {
        let d = m.radix().get() as u64;
        let b0 = vdp_coefficient(&m, 0, 0, Variant::Mahler).unwrap();
        prop_assert_eq!(vdp_coefficient(&m, 0, 0, Variant::Schikhof).unwrap(), b0.clone());
        for n in 1..d * d {
            let mahler = vdp_coefficient(&m, 0, n, Variant::Mahler).unwrap();
            let schikhof = vdp_coefficient(&m, 0, n, Variant::Schikhof).unwrap();
            if n < d {
                prop_assert_eq!(schikhof, mahler.try_sub(&b0).unwrap());
            } else {
                prop_assert_eq!(schikhof, mahler);
            }
        }
    }

    #[test]
    fn coefficients_reindex_along_sections(m in mealy()) {
        let r = m.radix();
        let d = r.get() as u64;
        for vlen in 0..=3 {
            for v in words(r, vlen) {
                let section = m.section_at(m.initial(), &v).unwrap();
                for wlen in 2..=3 {
                    for w in words(r, wlen).into_iter().filter(|w| w[wlen - 1] != 0) {
                        let vw = r.value_of(&v) + d.pow(vlen as u32) * r.value_of(&w);
                        prop_assert_eq!(
                            vdp_coefficient(&m, m.initial(), vw, Variant::Mahler).unwrap(),
                            vdp_coefficient(&m, section, r.value_of(&w), Variant::Mahler).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn section_tails_agree_with_converted_machine(m in mealy()) {
        let r = m.radix();
        let d = r.get() as u64;
        let moore = mealy_to_moore(&m, false).unwrap();
        for vlen in 0..=2 {
            for v in words(r, vlen) {
                let section = m.section_at(m.initial(), &v).unwrap();
                let kernel = moore.run(moore.initial(), &v);
                for n in d..d.pow(3) {
                    prop_assert_eq!(
                        &vdp_coefficient(&m, section, n, Variant::Mahler).unwrap(),
                        moore.evaluate_from(kernel, n)
                    );
                }
            }
        }
    }

    #[test]
    fn series_reproduces_images(m in mealy(), seed in any::<u64>(), k in 1usize..=6) {
        let x = common::random_epword(&mut rng(seed), m.radix(), 5, 3);
        let source = MachineCoefficients::new(&m, m.initial());
        let expected = m.apply_ep(m.initial(), &x).unwrap().prefix(k);
        prop_assert_eq!(evaluate_series(&source, &x, k).unwrap(), expected.clone());
        let stored = StoredCoefficients {
            radix: m.radix(),
            values: (0..(m.radix().get() as u64).pow(k as u32))
                .map(|n| vdp_coefficient(&m, m.initial(), n, Variant::Mahler).unwrap())
                .collect(),
        };
        prop_assert_eq!(evaluate_series(&stored, &x, k).unwrap(), expected);
    }
}

#[test]
fn table_entries_match_direct_coefficients() {
    for m in common::mealy_corpus() {
        let table = CoefficientTable::build(&m).unwrap();
        let width = m.radix().size().pow(2);
        for q in 0..m.len() {
            for n in 0..width {
                let entry = table.entry(q, n);
                assert_eq!(entry, &vdp_coefficient(&m, q, n as u64, Variant::Mahler).unwrap());
                let recanonical = EpWord::new(m.radix(), entry.preperiod().to_vec(), entry.period().to_vec()).unwrap();
                assert_eq!(entry, &recanonical);
            }
        }
    }
}

#[test]
fn portraits_label_exactly_the_numbered_vertices() {
    let tm = thue_morse();
    let portrait = Portrait::of(&tm, 3).unwrap();
    let labelled: Vec<String> = portrait.labels().map(|(v, _)| Radix::BINARY.format_word(v)).collect();
    let mut expected: Vec<String> = ["0", "1", "01", "11", "001", "101", "011", "111"].map(String::from).to_vec();
    expected.sort();
    assert_eq!(labelled, expected);
    for (n, v) in [(0, "0"), (1, "1"), (2, "01"), (3, "11"), (4, "001"), (5, "101"), (6, "011"), (7, "111")] {
        let vertex = Radix::BINARY.parse_word(v).unwrap();
        assert_eq!(portrait.label(&vertex), Some(tm.evaluate(n)));
    }
    assert_eq!(portrait.label(&[1, 0]), None);
    assert!(Portrait::of(&tm, 0).is_err());
}

#[test]
fn portrait_renderings() {
    let lamp = lamplighter();
    let portrait = Portrait::of(&MachineCoefficients::new(&lamp, 0), 2).unwrap();
    assert_eq!(
        portrait.to_text(),
        "ε: ·\n  0: (1)\n    00: ·\n    01: 10(1)\n  1: 00(1)\n    10: ·\n    11: (1)\n"
    );
    let dot = portrait.to_dot();
    assert!(dot.starts_with("digraph portrait {"));
    assert!(dot.contains("\"v0\" -> \"v01\" [label=\"1\"];"));
    assert!(dot.contains("\"v11\" [label=\"11\\n(1)\"];"));
}
