use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xorbounds::lifting::*;
use xorbounds::matrix::xor_compose;
use xorbounds::measures::{
    approx_weight_with, margin_with, signed_monomial_complexity, threshold_weight_with, Method,
};
use xorbounds::rational::{int, rat, Rational};
use xorbounds::{BooleanFunction, Ltf, SymmetricPredicate};

fn random_function(n: u32, rng: &mut ChaCha8Rng) -> BooleanFunction {
    let signs: Vec<i8> = (0..1u32 << n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    BooleanFunction::from_signs(&signs).unwrap()
}

fn check_selector(f: &BooleanFunction) {
    let n = f.arity();
    let lifted = kp_lift(f).unwrap();
    for (zval, block) in [(-1i8, 0u32), (1, 1)] {
        let fix: Vec<(u32, i8)> = (0..n).map(|i| (2 * n + i + 1, zval)).collect();
        let g = lifted.restrict(&fix).unwrap();
        for v in 0..1u32 << (2 * n) {
            let chosen = (v >> (block * n)) & ((1 << n) - 1);
            assert_eq!(g.bit(v), f.bit(chosen));
        }
    }
}

#[test]
fn selector_identity() {
    for code in 0..16u32 {
        check_selector(&BooleanFunction::from_bits(2, |x| code >> x & 1 == 1).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=4 {
        for _ in 0..10 {
            check_selector(&random_function(n, &mut rng));
        }
    }
}

#[test]
fn lift_of_parity_by_nested_loops() {
    let f = BooleanFunction::parity(2).unwrap();
    let lifted = kp_lift(&f).unwrap();
    assert_eq!(lifted.arity(), 6);
    for x1 in 0..2u32 {
        for x2 in 0..2u32 {
            for y1 in 0..2u32 {
                for y2 in 0..2u32 {
                    for z1 in 0..2u32 {
                        for z2 in 0..2u32 {
                            let u1 = if z1 == 1 { x1 } else { y1 };
                            let u2 = if z2 == 1 { x2 } else { y2 };
                            let v = x1 | x2 << 1 | y1 << 2 | y2 << 3 | z1 << 4 | z2 << 5;
                            assert_eq!(lifted.bit(v), (u1 ^ u2) == 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn relevance_matches_enumeration() {
    for n in 1..=4u32 {
        for mask in 0..1u32 << (2 * n) {
            let mut hits = 0;
            for z in 0..1u32 << n {
                // z bit set means z_i = −1, which selects x_i.
                let selected = z | ((!z & ((1 << n) - 1)) << n);
                if mask & !selected == 0 {
                    hits += 1;
                }
            }
            assert_eq!(relevance_probability(mask, n).unwrap(), rat(hits, 1 << n));
        }
    }
}

#[test]
fn xor_composition_is_a_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=4u32 {
        let f = random_function(n, &mut rng);
        let list = MonomialList::new(
            2 * n,
            (0..n)
                .map(|i| SignedMonomial { mask: 1 << i | 1 << (n + i), neg: false })
                .collect(),
        )
        .unwrap();
        let g = monomial_project(&f, &list).unwrap();
        let m = xor_compose(&f).unwrap();
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                assert_eq!(g.value((x | y << n) as u32), m.get(x, y));
            }
        }
    }
}

/// Weight of the projected input and of the selected variables for every
/// lifted input, computed without the library.
fn weight_pairs(n: u32) -> Vec<(u32, u32)> {
    let full = (1u32 << n) - 1;
    (0..1u32 << (3 * n))
        .map(|v| {
            let (x, y, z) = (v & full, v >> n & full, v >> (2 * n) & full);
            // u_i = −x_i z_i is −1 iff x_i, z_i agree in ±1; v_i = y_i z_i.
            let u = !(x ^ z) & full;
            let w = (y ^ z) & full;
            let a = x.count_ones() + y.count_ones() + u.count_ones() + w.count_ones();
            let b = ((x & z) | (y & !z & full)).count_ones();
            (a, b)
        })
        .collect()
}

#[test]
fn symmetric_decomposition_for_every_predicate() {
    for n in 1..=3u32 {
        for c in 0..1u64 << (4 * n + 1) {
            let big = SymmetricPredicate::from_code(4 * n, c).unwrap();
            let (small, _, w) = symm_lift_decompose(&big).unwrap();
            assert!(w.pointwise_checked);
            assert_eq!(w.inputs_checked, 1 << (3 * n));
            assert_eq!(small.arity(), n);
        }
    }
    // 4n = 16: check the weight relation a = 2b + n that makes every
    // predicate decompose, then spot-check the library on a sample.
    let pairs = weight_pairs(4);
    assert!(pairs.iter().all(|&(a, b)| a == 2 * b + 4));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let big = SymmetricPredicate::from_code(16, rng.gen_range(0..1u64 << 17)).unwrap();
        let (small, _, _) = symm_lift_decompose(&big).unwrap();
        for b in 0..=4 {
            assert_eq!(small.at(b), big.at(2 * b + 4));
        }
    }
}

#[test]
fn decomposition_examples() {
    let par = SymmetricPredicate::parity(4).unwrap();
    let (small, _, _) = symm_lift_decompose(&par).unwrap();
    assert!(small.is_constant());
    let c = SymmetricPredicate::constant(8, -1).unwrap();
    assert!(symm_lift_decompose(&c).unwrap().0.is_constant());
    let mod3 = SymmetricPredicate::from_fn(8, |w| if w % 3 == 0 { -1 } else { 1 }).unwrap();
    let (_, _, w) = symm_lift_decompose(&mod3).unwrap();
    assert_eq!(w.inputs_checked, 64);
    assert!(symm_lift_decompose(&SymmetricPredicate::parity(6).unwrap()).is_err());
}

#[test]
fn extension_places_the_stripe() {
    let p = SymmetricPredicate::parity(2).unwrap();
    let big = lifsym_extend(&p).unwrap();
    assert_eq!(big.arity(), 8);
    assert_eq!([big.at(2), big.at(4), big.at(6)], [p.at(0), p.at(1), p.at(2)]);
    assert!([0, 1, 3, 5, 7, 8].iter().all(|&w| big.at(w) == 1));
}

#[test]
fn threshold_lift_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for t in 0..100 {
        let n = 1 + t % 4;
        let w: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        let f = Ltf::new(w, rat(1, 2));
        let (g, list, wit) = thr_lift(&f).unwrap();
        assert!(wit.pointwise_checked);
        let lhs = monomial_project(&g.to_function().unwrap(), &list).unwrap();
        assert_eq!(lhs, kp_lift(&f.to_function().unwrap()).unwrap());
    }
}

#[test]
fn projections_do_not_increase_complexity() {
    let e = rat(1, 3);
    for c in 0..4u64 {
        let small = SymmetricPredicate::from_code(1, c).unwrap();
        let src = lifsym_extend(&small).unwrap();
        let (base, list, _) = symm_lift_decompose(&src).unwrap();
        let image = kp_lift(&base.to_function().unwrap()).unwrap();
        let srcf = src.to_function().unwrap();
        assert_eq!(monomial_project(&srcf, &list).unwrap(), image);
        let m_src = margin_with(&srcf, Method::Full).unwrap().value.unwrap();
        let m_img = margin_with(&image, Method::Full).unwrap().value.unwrap();
        assert!(m_src <= m_img);
        let w_src = threshold_weight_with(&srcf, Method::Full).unwrap().value.unwrap();
        let w_img = threshold_weight_with(&image, Method::Full).unwrap().value.unwrap();
        assert!(w_img <= w_src);
        let a_src = approx_weight_with(&srcf, &e, Method::Full).unwrap().value.unwrap();
        let a_img = approx_weight_with(&image, &e, Method::Full).unwrap().value.unwrap();
        assert!(a_img <= a_src);
        assert!(signed_monomial_complexity(&image).unwrap() <= signed_monomial_complexity(&srcf).unwrap());
    }
    for w in [[1i64], [2], [-1]] {
        let f = Ltf::new(w.iter().map(|&v| int(v)).collect(), rat(1, 2));
        let (g, list, _) = thr_lift(&f).unwrap();
        let gf = g.to_function().unwrap();
        let image = monomial_project(&gf, &list).unwrap();
        let m_src = margin_with(&gf, Method::Full).unwrap().value.unwrap();
        let m_img = margin_with(&image, Method::Full).unwrap().value.unwrap();
        assert!(m_src <= m_img);
        assert!(signed_monomial_complexity(&image).unwrap() <= signed_monomial_complexity(&gf).unwrap());
    }
}

#[test]
fn family_witness_for_mod3() {
    let big = SymmetricPredicate::from_fn(12, |w| if w % 3 == 0 { -1 } else { 1 }).unwrap();
    let r = liftsym_witness(&big).unwrap();
    assert!(r.odd_even_degree >= 1);
    assert!(!r.members.is_empty());
    let best = r.best.unwrap();
    let top = r.members.iter().map(|m| m.sign_degree).max().unwrap();
    assert_eq!(r.members.iter().find(|m| m.index == best).unwrap().sign_degree, top);
    for m in &r.members {
        assert_eq!(m.sign_degree, m.sign_changes);
    }
    // Parity has no (i, i+2) jumps at all.
    assert!(liftsym_witness(&SymmetricPredicate::parity(12).unwrap()).unwrap().members.is_empty());
}

#[test]
fn family_members_read_the_right_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let big = SymmetricPredicate::from_code(24, rng.gen_range(0..1u64 << 25)).unwrap();
        let r = liftsym_witness(&big).unwrap();
        let mut g: Vec<i8> = match r.orientation {
            Orientation::Low => big.values().to_vec(),
            Orientation::High => big.values().iter().rev().cloned().collect(),
        };
        if r.restriction.is_some() {
            g.remove(0);
        }
        for m in &r.members {
            let d = SymmetricPredicate::parse(m.predicate.trim_start_matches("pred:")).unwrap();
            for b in 0..=m.arity {
                assert_eq!(d.at(b), g[(2 * b + m.arity) as usize]);
            }
        }
    }
}
