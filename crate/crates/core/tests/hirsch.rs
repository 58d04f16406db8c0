use permutocalc::chains::{cohomology, Chain, Ring};
use permutocalc::hirsch::*;
use permutocalc::omega::{CubicalSet, OmegaWord};

fn cubical(name: &str) -> (CubicalSet, DGAlgebra, HirschStructure) {
    let q = CubicalSet::fixture(name).unwrap();
    let a = DGAlgebra::cubical_cochains(&q);
    let e = HirschStructure::cubical(&q, &a);
    (q, a, e)
}

#[test]
fn cubical_cochains_form_a_dga() {
    for name in ["cube2", "cube3", "cube4", "synthetic23"] {
        let (_, a, _) = cubical(name);
        assert!(a.is_one_reduced());
        a.check().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn polynomial_dga_round_trips() {
    let a = DGAlgebra::truncated_polynomial(2, 3);
    a.check().unwrap();
    let b = DGAlgebra::from_json(&a.to_json()).unwrap();
    assert_eq!(b.to_json(), a.to_json());
}

#[test]
fn bar_differential_squares_to_zero() {
    for name in ["cube3", "cube4"] {
        let (_, a, _) = cubical(name);
        for d in 0..=4 {
            for w in bar_words(&a, d) {
                let dd = bar_differential(&a, &w).map(|v| bar_differential(&a, v));
                assert!(dd.is_zero(), "{name} {}", w.show(&a));
            }
        }
    }
}

#[test]
fn coproduct_has_primitive_part() {
    let (q, _, _) = cubical("cube4");
    for d in 2..=4 {
        for s in q.nondegenerate(d) {
            let delta = omega_coproduct(&q, &s);
            let g = OmegaWord::generator(s.clone());
            assert_eq!(delta.coeff(&(g.clone(), OmegaWord::unit())), 1);
            assert_eq!(delta.coeff(&(OmegaWord::unit(), g)), 1);
            for ((l, r), _) in delta.iter() {
                assert!(!(l.0.is_empty() && r.0.is_empty()));
                assert!(!(l.0.len() > 1 && r.0.is_empty()) && !(r.0.len() > 1 && l.0.is_empty()));
            }
        }
    }
}

#[test]
fn omega_coproduct_is_a_chain_map() {
    use permutocalc::omega::Omega;
    for name in ["cube3", "cube4", "synthetic23"] {
        let q = CubicalSet::fixture(name).unwrap();
        let om = Omega::build(&q).unwrap();
        for deg in 1..=4 {
            for w in om.basis(deg) {
                let delta = omega_coproduct_word(&q, &w);
                let mut lhs = Chain::new();
                for ((l, r), c) in delta.iter() {
                    for (x, k) in om.boundary(l).iter() {
                        lhs.add((x.clone(), r.clone()), c * k);
                    }
                    let s = if l.degree() % 2 == 0 { 1 } else { -1 };
                    for (x, k) in om.boundary(r).iter() {
                        lhs.add((l.clone(), x.clone()), c * k * s);
                    }
                }
                let rhs = om.boundary(&w).map(|x| omega_coproduct_word(&q, x));
                assert_eq!(lhs, rhs, "{name} on {w}");
            }
        }
    }
}

#[test]
fn components_reassemble_the_coproduct() {
    let (q, _, _) = cubical("cube4");
    let comps = extract_e_components(&q, 4);
    for d in 2..=4 {
        for s in q.nondegenerate(d) {
            let mut sum = Chain::new();
            for list in comps.values() {
                for (c, ch) in list {
                    if *c == s {
                        sum.add_chain(ch, 1);
                    }
                }
            }
            assert_eq!(sum, omega_coproduct(&q, &s));
        }
    }
    assert!(comps.contains_key(&(1, 1)));
}

#[test]
fn explicit_formula_matches_transpose() {
    let (q, a, e) = cubical("cube4");
    let cell = |i: usize| q.nondegenerate(a.degree(i) as u32).into_iter().find(|c| c.to_string() == a.name(i)).unwrap();
    let mut checked = 0;
    for ((x, y), val) in &e.table {
        let xs: Vec<_> = x.0.iter().map(|&i| cell(i)).collect();
        let ys: Vec<_> = y.0.iter().map(|&i| cell(i)).collect();
        let direct = e_pq_cochain(&q, &xs, &ys);
        let want: Vec<(String, i64)> = val.iter().map(|(&i, k)| (a.name(i).to_string(), k)).collect();
        let got: Vec<(String, i64)> = direct.iter().map(|(c, k)| (c.to_string(), k)).collect();
        assert_eq!(got, want);
        checked += 1;
    }
    assert!(checked > 0);
    // degree mismatch gives zero
    let two = q.nondegenerate(2);
    assert!(e_pq_cochain(&q, &two[..1], &q.nondegenerate(3)[..1]).iter().all(|(c, _)| c.dim == 4));
    let s = q.nondegenerate(4)[0].clone();
    assert_eq!(e_bar_st(&q, &two[..1], &two[..1], &s), 0);
}

#[test]
fn e11_identity() {
    for name in ["cube3", "cube4", "synthetic23", "tower6"] {
        let (_, a, e) = cubical(name);
        check_e11_identity(&a, &e, 6).unwrap_or_else(|err| panic!("{name}: {err}"));
    }
}

#[test]
fn twisting_element_condition() {
    for name in ["cube3", "cube4", "synthetic23", "tower6"] {
        let (_, a, e) = cubical(name);
        for ring in [Ring::Z, Ring::Z2] {
            check_twisting_element(&a, &e, 4, ring).unwrap_or_else(|err| panic!("{name}: {err}"));
        }
    }
}

#[test]
fn commutative_dga_is_hirsch() {
    let a = DGAlgebra::truncated_polynomial(2, 3);
    let e = HirschStructure::commutative();
    check_twisting_element(&a, &e, 4, Ring::Z).unwrap();
    check_mu_chain_map(&a, &e, 4).unwrap();
}

#[test]
fn mu_e_is_a_chain_map() {
    for name in ["cube3", "cube4", "tower6"] {
        let (_, a, e) = cubical(name);
        check_mu_chain_map(&a, &e, 3).unwrap_or_else(|err| panic!("{name}: {err}"));
    }
}

#[test]
fn twisted_differential_is_a_derivation() {
    let a = DGAlgebra::truncated_polynomial(2, 2);
    let e = HirschStructure::commutative();
    let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
    t.check_derivation(4).unwrap();
    assert_eq!(t.associator_norm(4), 0);
    for name in ["cube3", "synthetic23", "tower6"] {
        let (_, a, e) = cubical(name);
        let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
        t.check_derivation(4).unwrap_or_else(|err| panic!("{name}: {err}"));
    }
}

#[test]
fn acyclic_bar_construction() {
    let a = DGAlgebra::truncated_polynomial(2, 2);
    let e = HirschStructure::commutative();
    let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
    let h: Vec<String> = cohomology(&t, 4, Ring::Z).iter().map(|g| g.to_string()).collect();
    assert_eq!(h, vec!["Z", "0", "0", "0", "0"]);
    for name in ["cube3", "tower6"] {
        let (_, a, e) = cubical(name);
        let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
        let h: Vec<String> = cohomology(&t, 4, Ring::Z).iter().map(|g| g.to_string()).collect();
        assert_eq!(h, vec!["Z", "0", "0", "0", "0"], "{name}");
    }
}

#[test]
fn tower_has_higher_e_components() {
    let (_, _, e) = cubical("tower6");
    assert!(e.table.keys().any(|(x, y)| x.0.len() == 2 && y.0.len() == 2));
}

#[test]
fn unit_of_twisted_product() {
    let (_, a, e) = cubical("cube3");
    let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
    let one = TensorCell { a: a.unit(), m: BarWord::empty() };
    for d in 0..=3 {
        for x in t.cells(d) {
            assert_eq!(t.mul(&one, &x), Chain::single(x.clone(), 1));
        }
    }
}

#[test]
fn multiplicative_twisting_cochains() {
    let (q, a, e) = cubical("cube3");
    check_multiplicative(&a, &e, &universal_projection, 4).unwrap();
    let theta = dual_universal_twisting(&q, &a);
    check_multiplicative(&a, &e, &theta, 4).unwrap();
    let doubled = |w: &BarWord| universal_projection(w).scaled(2);
    assert!(check_multiplicative(&a, &e, &doubled, 2).is_err());
}
