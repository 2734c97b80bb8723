use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use xorbounds::fourier::FourierTable;
use xorbounds::modfn::*;
use xorbounds::rational::{int, pow2, rat, to_f64, Rational};
use xorbounds::spec::build_function;
use xorbounds::BooleanFunction;

fn set(v: &[u32]) -> BTreeSet<u32> {
    v.iter().copied().collect()
}

fn spec(m: u32, a: &[u32], n: u32) -> ModSpec {
    ModSpec::new(m, a.iter().copied(), n).unwrap()
}

fn nontrivial_sets(m: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<BTreeSet<u32>> {
    let total = (1u32 << m) - 2;
    if total as usize <= count {
        return (1..=total).map(|b| (0..m).filter(|r| b >> r & 1 == 1).collect()).collect();
    }
    (0..count)
        .map(|_| {
            let b = rng.gen_range(1..=total);
            (0..m).filter(|r| b >> r & 1 == 1).collect()
        })
        .collect()
}

#[test]
fn mod_functions_by_definition() {
    for n in 1..=6 {
        assert_eq!(mod_function(&spec(2, &[1], n)).unwrap(), BooleanFunction::parity(n).unwrap());
        assert_eq!(mod_function(&spec(4, &[0, 1], n)).unwrap(), build_function(&format!("cq:{n}")).unwrap());
    }
    let f = mod_function(&spec(3, &[0], 4)).unwrap();
    for x in 0..16u32 {
        let w = x.count_ones();
        assert_eq!(f.value(x), if w == 0 || w == 3 { -1 } else { 1 });
    }
    assert!(ModSpec::new(3, [3], 4).is_err());
    assert!(mod_function(&spec(3, &[0], 25)).unwrap_err().is_capacity());
}

#[test]
fn simplicity() {
    assert_eq!(is_simple(&spec(5, &[], 7)), (true, Simplicity::Constant));
    assert_eq!(is_simple(&spec(6, &[1, 3, 5], 9)), (true, Simplicity::Parity));
    assert_eq!(is_simple(&spec(6, &[0, 2, 4], 9)), (true, Simplicity::NegatedParity));
    assert_eq!(is_simple(&spec(3, &[0], 9)), (false, Simplicity::NonSimple));
    // On few bits a non-simple set can induce a simple predicate.
    assert_eq!(is_simple(&spec(7, &[0], 0)).0, true);
    assert!(is_simple_set(4, &set(&[1, 3])));
    assert!(!is_simple_set(4, &set(&[0, 1])));
}

#[test]
fn closed_form_examples() {
    // mod_2^{1} is χ_[n] itself, so its top coefficient is +1.
    let top = mod_fourier_closed_form(&spec(2, &[1], 5), 5).unwrap();
    assert!((top.re - 1.0).abs() < 1e-9 && top.im.abs() < 1e-9);
    // Weights 0 and 3 of 4 bits: 5 of 16 inputs are −1, mean 6/16.
    let e = mod_fourier_closed_form(&spec(3, &[0], 4), 0).unwrap();
    assert!((e.re - 0.375).abs() < 1e-9);
    for s in 0..=4 {
        let c = mod_fourier_closed_form(&spec(4, &[0, 1], 4), s).unwrap();
        assert!((c.norm() - 0.25).abs() < 1e-9);
    }
    assert!(mod_fourier_closed_form(&spec(3, &[0], 4), 5).is_err());
}

#[test]
fn closed_form_matches_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in 2..=9u32 {
        for a in nontrivial_sets(m, 20, &mut rng) {
            for n in [1u32, 3, 6, 9, 14] {
                if n == 14 && rng.gen_range(0..4) != 0 {
                    continue;
                }
                let sp = ModSpec::new(m, a.iter().copied(), n).unwrap();
                let exact = exact_level_coefficients(&sp).unwrap();
                for s in 0..=n {
                    let c = mod_fourier_closed_form(&sp, s).unwrap();
                    assert!(c.im.abs() <= 1e-9, "m={m} A={a:?} n={n} s={s}");
                    assert!((c.re - to_f64(&exact[s as usize])).abs() <= 1e-9, "m={m} A={a:?} n={n} s={s}");
                }
            }
        }
    }
}

#[test]
fn complete_quadratic_spectrum() {
    for n in 1..=16u32 {
        let t = FourierTable::of(&mod_function(&spec(4, &[0, 1], n)).unwrap());
        for &c in t.scaled() {
            let c = c.abs();
            if n % 2 == 0 {
                assert_eq!(c, 1 << (n / 2), "n={n}");
            } else {
                assert!(c == 0 || c == 1 << ((n + 1) / 2), "n={n}");
            }
        }
    }
}

#[test]
fn single_residue_modulo_four_obstruction() {
    for n in (2..=16u32).step_by(2) {
        let t = FourierTable::of(&mod_function(&spec(4, &[0], n)).unwrap());
        let full = (1u32 << n) - 1;
        assert_eq!(t.get(0).abs() + t.get(full).abs(), 1 << n, "n={n}");
    }
}

#[test]
fn coefficient_bound_audit() {
    assert!(claim_bound_audit(&spec(3, &[0], 12)).unwrap().pass);
    assert!(claim_bound_audit(&spec(5, &[1, 2], 16)).unwrap().pass);
    assert!(claim_bound_audit(&spec(2, &[1], 8)).is_err());
    assert!(claim_bound_audit(&spec(3, &[], 8)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in [3u32, 5, 7, 9] {
        for a in nontrivial_sets(m, 6, &mut rng) {
            for n in [2u32, 7, 12] {
                let r = claim_bound_audit(&ModSpec::new(m, a.iter().copied(), n).unwrap()).unwrap();
                assert!(r.pass, "m={m} A={a:?} n={n}: {r:?}");
            }
        }
    }
}

#[test]
fn forster_bounds() {
    for n in (2..=14u32).step_by(2) {
        let r = forster_xor_bound(&mod_function(&spec(4, &[0, 1], n)).unwrap()).unwrap();
        assert_eq!(r.exact, Some(pow2(n as i64 / 2)));
    }
    let p = forster_xor_bound(&BooleanFunction::parity(5).unwrap()).unwrap();
    assert_eq!(p.exact, Some(int(1)));
    assert!(p.vacuous);
    // max scaled coefficient 6 of 16.
    let m = forster_xor_bound(&mod_function(&spec(3, &[0], 4)).unwrap()).unwrap();
    assert_eq!(m.exact, Some(rat(16, 6)));
    assert!(forster_from_coefficients(&[int(0), int(0)], &int(1)).is_err());
    assert_eq!(forster_from_coefficients(&[rat(1, 4), rat(-1, 2)], &rat(1, 3)).unwrap().exact, Some(rat(2, 3)));
    assert_eq!(m.provenance.len(), 2);
}

/// δ/c for a dropped family, computed from the table directly.
fn ratio(f: &BooleanFunction, dropped: &[u32]) -> Rational {
    let t = FourierTable::of(f);
    let n = f.arity() as i64;
    let mass: Rational = dropped.iter().map(|&s| t.coefficient(s).abs()).sum();
    let c = (0..t.scaled().len() as u32)
        .filter(|s| !dropped.contains(s))
        .map(|s| t.coefficient(s).abs())
        .max()
        .unwrap();
    let _ = n;
    (int(1) - mass) / c
}

#[test]
fn coefficient_dropping() {
    let f = mod_function(&spec(3, &[0], 12)).unwrap();
    let none = sufficient_witness(&f, &DropPolicy::Explicit(vec![])).unwrap();
    assert_eq!(none.report.exact, forster_xor_bound(&f).unwrap().exact);
    let empty = sufficient_witness(&f, &DropPolicy::Explicit(vec![0])).unwrap();
    assert_eq!(empty.report.exact, Some(ratio(&f, &[0])));
    // At n = 12 the top coefficient (about 0.237) exceeds (2/9), so dropping
    // f̂(∅) alone lowers the ratio.
    assert!(empty.report.exact < none.report.exact);
    let greedy = sufficient_witness(&f, &DropPolicy::Greedy).unwrap();
    assert!(greedy.report.exact > none.report.exact);
    assert_eq!(greedy.report.exact, Some(ratio(&f, &greedy.set)));
    assert!(greedy.agreement_checked);
    let cq = mod_function(&spec(4, &[0, 1], 4)).unwrap();
    assert!(sufficient_witness(&cq, &DropPolicy::Greedy).unwrap().set.is_empty());
    let dict = BooleanFunction::character(3, 1).unwrap();
    assert!(sufficient_witness(&dict, &DropPolicy::Explicit(vec![1])).is_err());
}

#[test]
fn odd_modulus_bounds() {
    let r = odd_m_signrank_bound(3, 12).unwrap();
    // 1/(9·(3/4)^6) − 1 = 4096/6561 − 1.
    assert_eq!(r.exact, Some(rat(4096, 6561) - int(1)));
    assert!(r.vacuous);
    assert!(odd_m_signrank_bound(3, 1).unwrap().vacuous);
    let big = odd_m_signrank_bound(5, 100).unwrap();
    let direct = 1.0 / (25.0 * (std::f64::consts::PI / 10.0).cos().powi(100)) - 1.0;
    assert!(direct > 0.0 && (big.value - direct.log2()).abs() < 1e-9);
    assert!(!big.vacuous);
    assert!(odd_m_signrank_bound(4, 10).is_err());
    let huge = odd_m_signrank_bound(3, 100_000).unwrap();
    assert!(huge.value.is_finite() && huge.value > 10_000.0);
}

#[test]
fn shifted_products() {
    match shift_xor_identity(6, &set(&[0]), 3, 12).unwrap() {
        ShiftOutcome::Reduction { p, residues, simple, .. } => {
            assert_eq!((p, residues, simple), (3, set(&[0]), false));
        }
        other => panic!("{other:?}"),
    }
    match shift_xor_identity(4, &set(&[0]), 1, 12).unwrap() {
        ShiftOutcome::Reduction { p, residues, simple, .. } => {
            assert_eq!((p, residues, simple), (4, set(&[0, 1]), false));
        }
        other => panic!("{other:?}"),
    }
    match shift_xor_identity(4, &set(&[0, 1]), 2, 12).unwrap() {
        ShiftOutcome::Reduction { simple, .. } => assert!(simple),
        other => panic!("{other:?}"),
    }
    assert!(shift_xor_identity(4, &set(&[0]), 1, 15).unwrap_err().is_capacity());
}

#[test]
fn chain_examples() {
    let c = reduction_chain(6, &set(&[0])).unwrap();
    assert_eq!(c.steps.len(), 1);
    assert_eq!((c.base_m, c.base_residues.clone(), c.base), (3, set(&[0]), BaseTag::OddModulus));
    let c = reduction_chain(3, &set(&[0])).unwrap();
    assert!(c.steps.is_empty());
    assert_eq!(c.base, BaseTag::OddModulus);
    let c = reduction_chain(12, &set(&[0])).unwrap();
    assert!(c.steps.len() <= 2);
    assert!(c.base_m == 3 || c.base_m == 4);
    assert_eq!(c.total_arity_loss(), c.steps.iter().map(|s| s.arity_loss).sum::<u32>());
    assert!(reduction_chain(6, &set(&[1, 3, 5])).is_err());
    assert!(reduction_chain(2, &set(&[0])).is_err());
}

fn product_of_shifts(m: u32, a: &BTreeSet<u32>, i: u32, n: u32) -> BooleanFunction {
    let f = mod_function(&ModSpec::new(m, a.iter().copied(), n).unwrap()).unwrap();
    let g = mod_function(&ModSpec::new(m, a.iter().map(|r| (r + i) % m), n).unwrap()).unwrap();
    f.product(&g).unwrap()
}

#[test]
fn every_chain_is_well_formed() {
    for m in 3..=16u32 {
        for bits in 1u32..(1 << m) - 1 {
            let a: BTreeSet<u32> = (0..m).filter(|r| bits >> r & 1 == 1).collect();
            if is_simple_set(m, &a) {
                continue;
            }
            let c = reduction_chain_at(m, &a, 0).unwrap();
            let (mut cm, mut ca) = (m, a.clone());
            for s in &c.steps {
                assert_eq!((s.from_m, &s.from), (cm, &ca));
                assert!(s.to_m < s.from_m || s.from_m == 4);
                assert!(!is_simple_set(s.to_m, &s.to), "m={m} A={a:?}");
                cm = s.to_m;
                ca = s.to.clone();
            }
            assert_eq!((c.base_m, &c.base_residues), (cm, &ca));
            match c.base {
                BaseTag::OddModulus => assert_eq!(cm % 2, 1),
                BaseTag::Modulus4 | BaseTag::CqTranslate => assert_eq!(cm, 4),
            }
        }
    }
}

#[test]
fn chain_steps_hold_pointwise() {
    let n = 12;
    for m in 3..=10u32 {
        for bits in 1u32..(1 << m) - 1 {
            let a: BTreeSet<u32> = (0..m).filter(|r| bits >> r & 1 == 1).collect();
            if is_simple_set(m, &a) {
                continue;
            }
            let c = reduction_chain_at(m, &a, n).unwrap();
            for s in &c.steps {
                assert_eq!(s.verified_at, Some(n));
                let target = mod_function(&ModSpec::new(s.to_m, s.to.iter().copied(), n).unwrap()).unwrap();
                let source = match s.kind {
                    StepKind::ShiftXor => product_of_shifts(s.from_m, &s.from, s.shift, n),
                    StepKind::Rewrite => mod_function(&ModSpec::new(s.from_m, s.from.iter().copied(), n).unwrap()).unwrap(),
                };
                assert_eq!(source, target, "m={m} A={a:?} step {s:?}");
            }
        }
    }
}

#[test]
fn unbounded_error_bounds() {
    let n = 40;
    let cq = upp_bound_report(&spec(4, &[0, 1], n)).unwrap();
    assert_eq!(cq.value, 20.0);
    assert!(cq.slack >= 1);
    let one = upp_bound_report(&spec(4, &[0], n)).unwrap();
    assert_eq!(one.value, (n as f64 - 12.0) / 4.0);
    let six = upp_bound_report(&spec(6, &[0], 200)).unwrap();
    assert!((six.value - odd_m_signrank_bound(3, 194).unwrap().value / 2.0).abs() < 1e-12);
    assert!(upp_bound_report(&spec(4, &[0, 2], n)).is_err());
    let tiny = upp_bound_report(&spec(12, &[0], 10)).unwrap();
    assert!(tiny.vacuous);
    assert!(six.provenance.iter().any(|s| s.theorem == "shifting lemma"));
}

#[test]
fn circuit_bounds() {
    let r = circuit_size_bound(&spec(4, &[0, 1], 20), 5).unwrap();
    assert!((r.value - (10.0 - 5f64.log2())).abs() < 1e-12);
    assert_eq!(r.slack, 0);
    assert!(circuit_size_bound(&spec(3, &[], 20), 5).is_err());
    let o = circuit_size_bound(&spec(3, &[0], 100), 7).unwrap();
    assert!((o.value - (odd_m_signrank_bound(3, 100).unwrap().value - 7f64.log2())).abs() < 1e-12);
    let s = circuit_size_bound(&spec(6, &[0], 200), 3).unwrap();
    assert!(s.slack > upp_bound_report(&spec(6, &[0], 200)).unwrap().slack);
    assert!(circuit_size_bound(&spec(3, &[0], 100), 0).is_err());
}

#[test]
fn modulus_split() {
    assert_eq!(split_modulus(12), (3, 2));
    assert_eq!(split_modulus(6), (3, 1));
    assert_eq!(split_modulus(9), (9, 0));
    assert_eq!(split_modulus(16), (4, 2));
    assert_eq!(split_modulus(4), (4, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dropped_function_sign_agrees(seed in any::<u64>(), n in 1u32..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let signs: Vec<i8> = (0..1u32 << n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
        let f = BooleanFunction::from_signs(&signs).unwrap();
        let w = sufficient_witness(&f, &DropPolicy::Greedy).unwrap();
        let t = FourierTable::of(&f);
        for x in 0..1u32 << n {
            let mut v = int(f.value(x) as i64);
            for &s in &w.set {
                let chi = if (x & s).count_ones() % 2 == 0 { 1 } else { -1 };
                v -= t.coefficient(s) * int(chi);
            }
            prop_assert!(!v.is_zero());
            prop_assert_eq!(v.is_negative(), f.value(x) < 0);
            prop_assert!(v.abs() >= w.delta);
        }
        let none = sufficient_bound(&f, &DropPolicy::Explicit(vec![])).unwrap();
        prop_assert_eq!(&none.exact, &forster_xor_bound(&f).unwrap().exact);
        prop_assert!(w.report.exact >= none.exact);
    }
}

#[test]
fn spec_parsing_without_arity_cap() {
    assert_eq!(ModSpec::parse("mod:6,{0};200").unwrap(), spec(6, &[0], 200));
    assert_eq!(ModSpec::parse("CQ:40").unwrap(), spec(4, &[0, 1], 40));
    assert_eq!(ModSpec::parse("parity:30").unwrap(), spec(2, &[1], 30));
    assert_eq!(ModSpec::parse("mod:3,{0};4").unwrap().label(), "mod:3,{0};4");
    assert!(ModSpec::parse("maj:5").is_err());
    assert!(ModSpec::parse("mod:3,{5};4").is_err());
    assert!(matches!(ModSpec::parse("cq:x"), Err(xorbounds::Error::Parse { pos: 3, .. })));
}
