use num_traits::{Signed, Zero};
use proptest::prelude::*;
use xorbounds::lp::{check_duality, from_text, solve, to_text, Bound, LinearProgram, Relation, Sense, Status};
use xorbounds::rational::{int, rat, Rational};

/// Solves a 2x2 system by Cramer's rule.
fn intersect(a: [&Rational; 2], b: [&Rational; 2], r: [&Rational; 2]) -> Option<[Rational; 2]> {
    let det = a[0] * b[1] - a[1] * b[0];
    if det.is_zero() {
        return None;
    }
    Some([
        (r[0] * b[1] - r[1] * b[0]) / &det,
        (a[0] * r[1] - a[1] * r[0]) / &det,
    ])
}

/// Best objective over vertices of a boxed two-variable program, by
/// enumerating every pair of tight constraints.
fn vertex_oracle(lp: &LinearProgram) -> Option<Rational> {
    let mut lines: Vec<([Rational; 2], Rational)> = lp
        .constraints
        .iter()
        .map(|c| ([c.coeffs[0].clone(), c.coeffs[1].clone()], c.rhs.clone()))
        .collect();
    for (j, b) in lp.bounds.iter().enumerate() {
        let mut e = [int(0), int(0)];
        e[j] = int(1);
        for v in [&b.lower, &b.upper].into_iter().flatten() {
            lines.push((e.clone(), v.clone()));
        }
    }
    let feasible = |x: &[Rational; 2]| {
        lp.constraints.iter().all(|c| {
            let lhs = &c.coeffs[0] * &x[0] + &c.coeffs[1] * &x[1];
            c.rel.holds(&lhs, &c.rhs)
        }) && lp.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
    };
    let mut best: Option<Rational> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, ra) = &lines[i];
            let (b, rb) = &lines[j];
            let Some(x) = intersect([&a[0], &b[0]], [&a[1], &b[1]], [ra, rb]) else {
                continue;
            };
            if !feasible(&x) {
                continue;
            }
            let v = lp.objective_value(&x);
            best = Some(match (best, lp.sense) {
                (None, _) => v,
                (Some(b), Sense::Max) => b.max(v),
                (Some(b), Sense::Min) => b.min(v),
            });
        }
    }
    best
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)]
}

fn boxed_program() -> impl Strategy<Value = LinearProgram> {
    let row = (prop::collection::vec(small_rat(), 2), relation(), small_rat());
    (
        any::<bool>(),
        prop::collection::vec(small_rat(), 2),
        prop::collection::vec(row, 0..5),
        prop::collection::vec((-4i64..=0, 0i64..=4), 2),
    )
        .prop_map(|(max, c, rows, bounds)| {
            let mut lp = LinearProgram::new(if max { Sense::Max } else { Sense::Min }, 2);
            lp.objective = c;
            for (j, (l, u)) in bounds.into_iter().enumerate() {
                lp.set_bound(j, Bound::between(int(l), int(u)));
            }
            for (a, rel, b) in rows {
                lp.add_constraint(a, rel, b);
            }
            lp
        })
}

fn general_program() -> impl Strategy<Value = LinearProgram> {
    let bound = prop_oneof![
        Just(Bound::nonneg()),
        Just(Bound::free()),
        (-3i64..=3).prop_map(|u| Bound { lower: None, upper: Some(int(u)) }),
        (-3i64..=3, 0i64..=3).prop_map(|(l, w)| Bound::between(int(l), int(l + w))),
    ];
    let row = (prop::collection::vec(small_rat(), 3), relation(), small_rat());
    (
        any::<bool>(),
        prop::collection::vec(small_rat(), 3),
        prop::collection::vec(row, 0..5),
        prop::collection::vec(bound, 3),
    )
        .prop_map(|(max, c, rows, bounds)| {
            let mut lp = LinearProgram::new(if max { Sense::Max } else { Sense::Min }, 3);
            lp.objective = c;
            lp.bounds = bounds;
            for (a, rel, b) in rows {
                lp.add_constraint(a, rel, b);
            }
            lp
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_vertex_enumeration(lp in boxed_program()) {
        let sol = solve(&lp).unwrap();
        match vertex_oracle(&lp) {
            None => prop_assert_eq!(sol.status, Status::Infeasible),
            Some(best) => {
                prop_assert_eq!(sol.status, Status::Optimal);
                prop_assert_eq!(&sol.objective, &best);
            }
        }
        prop_assert!(check_duality(&lp, &sol).unwrap().pass);
    }

    #[test]
    fn every_status_carries_a_valid_certificate(lp in general_program()) {
        let sol = solve(&lp).unwrap();
        let v = check_duality(&lp, &sol).unwrap();
        prop_assert!(v.pass, "{:?} {:?}\n{}", sol.status, v, to_text(&lp));
    }

    #[test]
    fn solving_is_deterministic(lp in general_program()) {
        prop_assert_eq!(solve(&lp).unwrap(), solve(&lp).unwrap());
    }

    #[test]
    fn text_round_trip(lp in general_program()) {
        prop_assert_eq!(from_text(&to_text(&lp)).unwrap(), lp);
    }
}

#[test]
fn perturbed_dual_is_rejected() {
    let mut lp = LinearProgram::new(Sense::Max, 2);
    lp.objective = vec![int(3), int(2)];
    lp.add_constraint(vec![int(1), int(1)], Relation::Le, int(4));
    lp.add_constraint(vec![int(1), int(3)], Relation::Le, int(6));
    lp.add_constraint(vec![int(1), int(0)], Relation::Le, int(3));
    let mut sol = solve(&lp).unwrap();
    assert_eq!(sol.objective, int(11));
    assert!(check_duality(&lp, &sol).unwrap().pass);
    sol.dual[1] += int(1);
    let v = check_duality(&lp, &sol).unwrap();
    assert!(!v.pass);
    assert!(v.violation.is_some());
    assert!(!v.detail.is_empty());
}

#[test]
fn perturbed_primal_names_the_row() {
    let mut lp = LinearProgram::new(Sense::Min, 1);
    lp.objective = vec![int(1)];
    lp.add_constraint(vec![int(1)], Relation::Ge, int(2));
    let mut sol = solve(&lp).unwrap();
    sol.primal[0] = int(1);
    let v = check_duality(&lp, &sol).unwrap();
    assert_eq!(v.violation, Some(xorbounds::lp::Violation::PrimalRow));
    assert!(v.detail.contains("row 0"));
}

#[test]
fn capacity_is_enforced() {
    let lp = LinearProgram::new(Sense::Min, 10);
    let big = xorbounds::lp::solve_with_capacity(&lp, 5).unwrap_err();
    assert!(big.is_capacity());
}

#[test]
fn negative_objective_is_reported_exactly() {
    let mut lp = LinearProgram::new(Sense::Min, 2);
    lp.objective = vec![int(-1), rat(-1, 3)];
    lp.add_constraint(vec![int(2), int(1)], Relation::Le, int(5));
    lp.add_constraint(vec![int(1), int(2)], Relation::Le, int(4));
    let sol = solve(&lp).unwrap();
    // Vertices (0,0), (5/2,0), (2,1), (0,2) give 0, -5/2, -7/3, -2/3.
    assert_eq!(sol.objective, rat(-5, 2));
    assert!(sol.dual.iter().all(|y| !y.is_positive()));
}
