use permutocalc::chains::{check_d2, homology, CellComplex, Ring};
use permutocalc::mutation::{with_mutation, Mutation};
use permutocalc::omega::*;
use permutocalc::setcalc::Set;
use proptest::prelude::*;

fn fixtures() -> Vec<(&'static str, CubicalSet)> {
    ["cube2", "cube3", "cube4", "synthetic23", "tower6"].iter().map(|n| (*n, CubicalSet::fixture(n).unwrap())).collect()
}

#[test]
fn fixtures_are_one_reduced_cubical_sets() {
    for (name, q) in fixtures() {
        assert!(q.is_one_reduced(), "{name}");
        q.check_identities().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn json_round_trip() {
    for (name, q) in fixtures() {
        let back = CubicalSet::from_json(&q.to_json()).unwrap();
        assert_eq!(back.to_json(), q.to_json(), "{name}");
    }
}

#[test]
fn broken_face_table_is_rejected() {
    let mut v = CubicalSet::fixture("cube4").unwrap().to_json();
    let top = "****";
    let f0 = v["d0"][top][0].clone();
    v["d0"][top][0] = v["d0"][top][1].clone();
    v["d0"][top][1] = f0;
    let q = CubicalSet::from_json(&v).unwrap();
    assert!(q.check_identities().is_err());
}

#[test]
fn small_degrees_of_omega() {
    let q = CubicalSet::fixture("cube2").unwrap();
    let om = Omega::build(&q).unwrap();
    assert_eq!(om.basis(1).len(), 1);
    assert_eq!(om.basis(2).len(), 1);
    let s = CubicalSet::synthetic23();
    let om = Omega::build(&s).unwrap();
    // x·x and ȳ
    let b: Vec<String> = om.basis(2).iter().map(|w| w.to_string()).collect();
    assert_eq!(b, vec!["x·x", "y"]);
    // the splits 1|23 and 23|1 cancel, as do the two faces in ∂y
    assert!(om.boundary(&OmegaWord::generator(s.cell("y").unwrap())).is_zero());
}

#[test]
fn not_one_reduced_is_rejected() {
    let v = serde_json::json!({"cells": {"0": ["*"], "1": ["a"]}, "d0": {"a": ["*"]}, "d1": {"a": ["*"]}});
    let q = CubicalSet::from_json(&v).unwrap();
    assert!(Omega::build(&q).is_err());
}

#[test]
fn cobar_identity() {
    for (name, cap) in [("cube2", 6), ("cube3", 5), ("cube4", 4), ("synthetic23", 6), ("tower6", 6)] {
        let q = CubicalSet::fixture(name).unwrap();
        let n = verify_cobar_identity(&q, cap).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(n > 0);
    }
}

#[test]
fn cobar_identity_detects_sign_flip() {
    // quadratic terms first appear on 4-cells
    let q = CubicalSet::fixture("cube4").unwrap();
    assert!(verify_cobar_identity(&q, 3).is_ok());
    let r = with_mutation(Mutation::CobarQuadraticSign, || verify_cobar_identity(&q, 3));
    assert!(r.is_err());
}

#[test]
fn omega_boundary_squares_to_zero() {
    for (name, cap) in [("cube3", 5), ("synthetic23", 6), ("tower6", 6)] {
        let q = CubicalSet::fixture(name).unwrap();
        let c = OmegaComplex(Omega::build(&q).unwrap());
        assert!(check_d2(&c, cap).is_none(), "{name}");
    }
}

#[test]
fn quadratic_relation_on_generators() {
    // d_{A|B} ⊗ 1 after d_{A∪B|C} agrees with 1 ⊗ d_{B|C} after d_{A|B∪C}
    let q = CubicalSet::fixture("cube4").unwrap();
    let om = Omega::build(&q).unwrap();
    for c in om.generators() {
        let all = Set::underline(c.dim);
        for p in permutocalc::setcalc::ordered_partitions(all, Some(3)) {
            let [a, b, cc] = [p.blocks()[0], p.blocks()[1], p.blocks()[2]];
            let w = OmegaWord::generator(c.clone());
            let ab = a | b;
            let first = om.face(&w, 0, ab, cc);
            let r = |s: Set, inside: Set| s.map(|x| inside.rank(x) as u32);
            let left = om.face(&first, 0, r(a, ab), r(b, ab)).normal_form();
            let bc = b | cc;
            let second = om.face(&w, 0, a, bc);
            let right = om.face(&second, 1, r(b, bc), r(cc, bc)).normal_form();
            assert_eq!(left, right, "{c} at {a}|{b}|{cc}");
        }
    }
}

#[test]
fn twisting_axioms() {
    for (name, q) in fixtures() {
        let om = Omega::build(&q).unwrap();
        check_twisting(&q, &om, &universal_twisting, q.max_dim()).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_twisting(&q, &TrivialMonoid, &trivial_twisting, q.max_dim()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn twisting_checker_rejects_constant_generator() {
    let q = CubicalSet::fixture("cube3").unwrap();
    let om = Omega::build(&q).unwrap();
    let x = q.nondegenerate(2)[0].clone();
    let unit = q.unit_cell();
    let bad = move |c: &QCell| if c.dim <= 1 { universal_twisting(&unit) } else { OmegaWord::generator(x.clone()) };
    assert!(check_twisting(&q, &om, &bad, 3).is_err());
}

#[test]
fn twisted_product_relations() {
    for (name, cap) in [("cube3", 5), ("synthetic23", 5), ("tower6", 5)] {
        let q = CubicalSet::fixture(name).unwrap();
        let n = check_pq_relations(&q, cap).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(n > 0);
    }
}

#[test]
fn twisted_differential_squares_to_zero() {
    for name in ["cube2", "cube3", "synthetic23", "tower6"] {
        let q = CubicalSet::fixture(name).unwrap();
        let t = TwistedComplex { q: &q, fiber: OmegaFiber(Omega::build(&q).unwrap()) };
        assert!(check_d2(&t, 6).is_none(), "{name}");
        let t = TwistedComplex { q: &q, fiber: TrivialFiber };
        assert!(check_d2(&t, 6).is_none(), "{name}");
    }
}

#[test]
fn universal_twisted_product_is_acyclic() {
    for name in ["cube2", "cube3", "synthetic23", "tower6"] {
        let q = CubicalSet::fixture(name).unwrap();
        let t = TwistedComplex { q: &q, fiber: OmegaFiber(Omega::build(&q).unwrap()) };
        for ring in [Ring::Z, Ring::Z2] {
            let h = homology(&t, 4, ring);
            let shown: Vec<String> = h.iter().map(|g| g.to_string()).collect();
            assert_eq!(shown, vec!["Z", "0", "0", "0", "0"], "{name} over {ring:?}");
        }
    }
}

#[test]
fn trivial_twisting_recovers_cubical_chains() {
    let q = CubicalSet::fixture("cube3").unwrap();
    let t = TwistedComplex { q: &q, fiber: TrivialFiber };
    for d in 0..=3 {
        let cells = t.cells(d);
        assert_eq!(cells.len(), if d == 1 { 0 } else { q.nondegenerate(d as u32).len() });
        for c in cells {
            let b: Vec<(QCell, i64)> = t.boundary(&c).iter().map(|(x, k)| (x.base.clone(), k)).collect();
            let want: Vec<(QCell, i64)> = q.boundary(&c.base).iter().map(|(x, k)| (x.clone(), k)).collect();
            assert_eq!(b, want, "{c}");
        }
    }
}

proptest! {
    #[test]
    fn normal_form_is_confluent(seed in proptest::collection::vec(0usize..8, 0..12), dummies in proptest::collection::vec((0usize..4, 1u32..4), 0..6)) {
        let q = CubicalSet::fixture("cube3").unwrap();
        let gens: Vec<QCell> = q.nondegenerate(2).into_iter().chain(q.nondegenerate(3)).collect();
        let mut w: Vec<QCell> = dummies.iter().map(|&(g, _)| gens[g % gens.len()].clone()).collect();
        for (k, &(_, j)) in dummies.iter().enumerate() {
            let j = j.min(w[k].dim + 1);
            w[k] = q.degeneracy(&w[k], j);
        }
        let mut w = OmegaWord(w);
        let target = w.normal_form();
        // rewrite in an arbitrary order, then finish canonically
        for s in seed {
            let pos = w.rewrite_positions();
            if pos.is_empty() { break; }
            w = w.rewrite_at(pos[s % pos.len()]);
        }
        prop_assert_eq!(w.normal_form(), target);
    }
}
