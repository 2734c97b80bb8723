use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xorbounds::fourier::FourierTable;
use xorbounds::measures::*;
use xorbounds::rational::{int, rat, Rational};
use xorbounds::{BooleanFunction, SymmetricPredicate};

fn all_predicates(n: u32) -> impl Iterator<Item = SymmetricPredicate> {
    (0..1u64 << (n + 1)).map(move |c| SymmetricPredicate::from_code(n, c).unwrap())
}

fn random_function(n: u32, rng: &mut ChaCha8Rng) -> BooleanFunction {
    let signs: Vec<i8> = (0..1u32 << n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    BooleanFunction::from_signs(&signs).unwrap()
}

fn sign_changes(d: &SymmetricPredicate) -> u32 {
    d.values().windows(2).filter(|w| w[0] != w[1]).count() as u32
}

fn is_signed_character(f: &BooleanFunction) -> bool {
    let t = FourierTable::of(f);
    t.scaled().iter().filter(|&&c| c != 0).count() == 1
}

#[test]
fn majority_of_three_by_hand() {
    // p = (x1+x2+x3)/2 − x1x2x3/2 meets p·f ≥ 1 with weight 2; the measure
    // with masses 1/4, 3/4, 3/4, 1/4 on weight classes 0..3 has every
    // correlation at most 1 and total 2, so wt = 2 and m = 1/2.
    let f = BooleanFunction::majority(3).unwrap();
    assert_eq!(threshold_weight(&f).unwrap().value, Some(int(2)));
    assert_eq!(margin(&f).unwrap().value, Some(rat(1, 2)));
    // Best linear approximation c·Σx: errors |c−1| and |3c−1| balance at c = 1/2.
    assert_eq!(epsilon_d(&f, 1).unwrap(), rat(1, 2));
    assert_eq!(epsilon_d(&f, 0).unwrap(), int(1));
    let aw = approx_weight(&f, &rat(1, 3)).unwrap();
    assert!(aw.value.clone().unwrap() <= int(2));
    assert!(aw.verify(&f).unwrap());
    let db = degree_bounded_threshold_weight(&f, 1).unwrap();
    // Degree one: (x1+x2+x3) is optimal among symmetric linear forms.
    assert_eq!(db.value, Some(int(3)));
    assert!(db.verify(&f).unwrap());
}

#[test]
fn two_bit_functions_exhaustively() {
    for code in 0..16u32 {
        let f = BooleanFunction::from_bits(2, |x| code >> x & 1 == 1).unwrap();
        let m = margin_with(&f, Method::Full).unwrap();
        let w = threshold_weight_with(&f, Method::Full).unwrap();
        assert!(m.verify(&f).unwrap(), "margin certificate {code}");
        assert!(w.verify(&f).unwrap(), "weight certificate {code}");
        assert_eq!(m.value.clone().unwrap() * w.value.clone().unwrap(), int(1));
        // ±χ_S have weight 1; the eight AND-type functions have weight 2
        // (own expansion, and the uniform measure of mass 1/2 per input).
        let expect = if is_signed_character(&f) { int(1) } else { int(2) };
        assert_eq!(w.value, Some(expect), "function {code}");
        let mon = signed_monomial_complexity(&f).unwrap();
        assert_eq!(mon == 1, is_signed_character(&f));
    }
}

#[test]
fn random_functions_margin_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [3u32, 4] {
        for _ in 0..100 {
            let f = random_function(n, &mut rng);
            let m = margin_with(&f, Method::Full).unwrap();
            assert!(m.verify(&f).unwrap());
            let w = threshold_weight_with(&f, Method::Full).unwrap();
            assert_eq!(m.value.unwrap() * w.value.unwrap(), int(1));
        }
    }
}

#[test]
fn six_bit_margin() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_function(6, &mut rng);
    let m = margin(&f).unwrap();
    assert!(m.verify(&f).unwrap());
    assert!(margin(&random_function(7, &mut rng)).unwrap_err().is_capacity());
}

#[test]
fn symmetric_and_full_formulations_agree() {
    for n in 1..=4 {
        for d in all_predicates(n) {
            let f = d.to_function().unwrap();
            let ms = margin_with(&d, Method::Symmetric).unwrap();
            let mf = margin_with(&f, Method::Full).unwrap();
            assert_eq!(ms.value, mf.value, "{d}");
            assert!(ms.verify_target(Target::Predicate(&d)).unwrap());
            let ws = threshold_weight_with(&d, Method::Symmetric).unwrap();
            let wf = threshold_weight_with(&f, Method::Full).unwrap();
            assert_eq!(ws.value, wf.value, "{d}");
            assert!(ws.verify(&f).unwrap());
            let e = rat(1, 3);
            let a_s = approx_weight_with(&d, &e, Method::Symmetric).unwrap();
            let a_f = approx_weight_with(&f, &e, Method::Full).unwrap();
            assert_eq!(a_s.value, a_f.value, "{d}");
            assert!(a_s.verify(&f).unwrap() && a_f.verify(&f).unwrap());
            for k in 0..n {
                assert_eq!(
                    epsilon_d_with(&d, k, Method::Symmetric).unwrap(),
                    epsilon_d_with(&f, k, Method::Full).unwrap()
                );
            }
            assert_eq!(
                sign_degree_with(&d, Method::Symmetric).unwrap(),
                sign_degree_with(&f, Method::Full).unwrap()
            );
        }
    }
}

#[test]
fn sign_degree_of_symmetric_functions_counts_sign_changes() {
    for n in 1..=7 {
        for d in all_predicates(n) {
            assert_eq!(sign_degree_with(&d, Method::Symmetric).unwrap(), sign_changes(&d), "{d}");
        }
    }
    assert_eq!(sign_degree(&BooleanFunction::parity(12).unwrap()).unwrap(), 12);
}

#[test]
fn large_symmetric_margin() {
    let p = SymmetricPredicate::parity(24).unwrap();
    assert_eq!(margin_with(&p, Method::Auto).unwrap().value, Some(int(1)));
    let neg = p.negate();
    assert_eq!(margin_with(&neg, Method::Auto).unwrap().value, Some(int(1)));
    assert_eq!(threshold_weight_with(&neg, Method::Auto).unwrap().value, Some(int(1)));
}

#[test]
fn degree_measure_examples() {
    let par3 = BooleanFunction::parity(3).unwrap();
    let c = BooleanFunction::constant(3, 1).unwrap();
    assert_eq!(approx_degree(&par3, &rat(1, 3)).unwrap(), 3);
    assert_eq!(approx_degree(&c, &rat(1, 2)).unwrap(), 0);
    assert_eq!(epsilon_d(&c, 0).unwrap(), Rational::zero());
    assert_eq!(epsilon_d(&par3, 3).unwrap(), Rational::zero());
    assert!(approx_degree(&par3, &int(1)).is_err());
}

#[test]
fn pp_polynomial_for_every_even_predicate() {
    for n in [2u32, 4, 6, 8] {
        for d in all_predicates(n) {
            let p = pp_upper_poly(&d).unwrap();
            assert!(p.is_integral(), "{d}");
            assert!(p.sign_represents(&d.to_function().unwrap()).unwrap(), "{d}");
            assert!(p.weight() <= pp_weight_bound(&d), "{d}");
        }
    }
    assert!(pp_upper_poly(&SymmetricPredicate::parity(3).unwrap()).is_err());
}

#[test]
fn json_shape() {
    let f = BooleanFunction::majority(3).unwrap();
    let j = margin(&f).unwrap().to_json();
    assert_eq!(j["measure"], "margin");
    assert_eq!(j["value"]["num"], "1");
    assert_eq!(j["value"]["den"], "2");
    assert!(j["certificate"]["primal"]["terms"].is_array());
}

fn eps_strategy() -> impl Strategy<Value = Rational> {
    (1i64..8).prop_map(|k| rat(k, 8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn weight_measures_are_ordered(code in 0u64..256, e1 in eps_strategy(), e2 in eps_strategy()) {
        let f = BooleanFunction::from_bits(3, |x| code >> x & 1 == 1).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let w_lo = approx_weight(&f, &lo).unwrap().value.unwrap();
        let w_hi = approx_weight(&f, &hi).unwrap().value.unwrap();
        let l1 = FourierTable::of(&f).l1();
        prop_assert!(w_hi <= w_lo);
        prop_assert!(w_lo <= l1);
        prop_assert!(margin(&f).unwrap().value.unwrap() >= Rational::one() / l1);
        prop_assert!(approx_degree(&f, &hi).unwrap() <= approx_degree(&f, &lo).unwrap());
    }

    #[test]
    fn uniform_error_decreases_with_degree(code in 0u64..65536) {
        let f = BooleanFunction::from_bits(4, |x| code >> x & 1 == 1).unwrap();
        let errs: Vec<Rational> = (0..=4).map(|d| epsilon_d(&f, d).unwrap()).collect();
        prop_assert!(errs.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(errs[4].is_zero());
    }

    #[test]
    fn pp_polynomial_random_predicates(code in 0u64..(1 << 11)) {
        let d = SymmetricPredicate::from_code(10, code).unwrap();
        let p = pp_upper_poly(&d).unwrap();
        prop_assert!(p.sign_represents(&d.to_function().unwrap()).unwrap());
        prop_assert!(p.weight() <= pp_weight_bound(&d));
    }
}
