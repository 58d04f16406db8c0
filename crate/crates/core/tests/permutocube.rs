use permutocalc::permutahedron::faces;
use permutocalc::permutocube::*;
use permutocalc::setcalc::{parse_block, OrderedPartition, Set};

fn s(text: &str) -> Set {
    parse_block(text).unwrap()
}

fn b(text: &str, n: u32) -> PcubeFace {
    PcubeFace::parse(text, n).unwrap()
}

#[test]
fn small_face_lists() {
    let names = |n, d| faces_b(n, Some(d)).iter().map(|f| f.to_string()).collect::<Vec<_>>();
    let mut v = names(2, 0);
    v.sort();
    assert_eq!(v, vec!["0]", "0]1", "0]1|2", "0]2", "0]2|1"]);
    let mut e = names(2, 1);
    e.sort();
    assert_eq!(e, vec!["0]12", "1]", "1]2", "2]", "2]1"]);
    assert_eq!(names(2, 2), vec!["12]"]);
    assert_eq!(faces_b(2, None).len(), 11);
    let mut b1 = names(1, 0);
    b1.sort();
    assert_eq!(b1, vec!["0]", "0]1"]);
    assert_eq!(names(1, 1), vec!["1]"]);
}

#[test]
fn euler_characteristic() {
    for n in 0..=6 {
        let chi: i64 = faces_b(n, None).iter().map(|f| if f.dim() % 2 == 0 { 1 } else { -1 }).sum();
        assert_eq!(chi, 1, "B_{n}");
    }
}

#[test]
fn word_of_a_nine_cube_face() {
    let w = vec![
        PcubeOp::Split(s("024"), s("13")),
        PcubeOp::Split(s("01235"), s("4")),
        PcubeOp::Split(s("012346"), s("57")),
        PcubeOp::Delete(2),
        PcubeOp::Delete(5),
    ];
    let u = b("038]14|6|79", 9);
    assert_eq!(apply_word(&w, &PcubeFace::top(9)).unwrap(), u);
    let (label, deleted) = decompose_label(&u);
    assert_eq!(label, b("026]13|4|57", 7));
    assert_eq!(deleted, vec![2, 5]);
    assert!(label_word(&PcubeFace::top(4)).is_empty());
}

#[test]
fn label_words_round_trip() {
    for n in 0..=5 {
        for f in faces_b(n, None) {
            assert_eq!(apply_word(&label_word(&f), &PcubeFace::top(n)).unwrap(), f);
        }
    }
}

#[test]
fn deletions_commute() {
    for n in 2..=5 {
        for f in faces_b(n, None) {
            let k = f.head_coords().len() as u32;
            for j in 2..=k {
                for i in 1..j {
                    let lhs = face_op_i(i, &face_op_i(j, &f).unwrap()).unwrap();
                    let rhs = face_op_i(j - 1, &face_op_i(i, &f).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{f}: d_{i}d_{j}");
                }
            }
        }
    }
}

#[test]
fn ill_typed_operators_are_rejected() {
    let f = b("0]12", 2);
    assert!(face_op_i(1, &f).is_err());
    assert!(face_op_am(s("0"), s("1"), &f).is_err());
    assert!(face_op_perm(s("1"), s("2"), &PcubeFace::top(2)).is_err());
    assert!(face_op_perm(s("1"), s("1"), &f).is_err());
}

#[test]
fn permutahedral_facet() {
    for n in 1..=5 {
        let f = face_op_am(s("0"), Set::underline(n), &PcubeFace::top(n)).unwrap();
        assert_eq!(f, embed_perm_face(&OrderedPartition::top(Set::underline(n))).unwrap());
    }
}

#[test]
fn embedding_intertwines_face_operators() {
    assert_eq!(embed_perm_face(&OrderedPartition::parse("1|23").unwrap()).unwrap(), b("0]1|23", 3));
    for n in 1..=5 {
        let all = faces(n, None);
        let mut seen = std::collections::BTreeSet::new();
        for g in &all {
            let e = embed_perm_face(g).unwrap();
            assert_eq!(e.dim(), g.dim());
            assert!(seen.insert(e.clone()));
            let last = *g.blocks().last().unwrap();
            for (m1, m2) in permutocalc::setcalc::splits(Set::underline(last.len() as u32)) {
                let lift = |x: Set| x.map(|r| last.nth(r as usize).unwrap());
                let mut blocks = g.blocks().to_vec();
                blocks.pop();
                blocks.extend([lift(m1), lift(m2)]);
                let dg = OrderedPartition::new(blocks).unwrap();
                assert_eq!(face_op_perm(m1, m2, &e).unwrap(), embed_perm_face(&dg).unwrap());
            }
        }
    }
}

#[test]
fn collapse_to_the_cube() {
    let img = project_to_cube(&b("02]1", 2));
    assert_eq!(img.face.to_string(), "0*");
    assert!(!img.degenerate);
    assert_eq!(project_to_cube(&b("0]", 2)).face.to_string(), "11");
    assert_eq!(project_to_cube(&PcubeFace::top(3)).face.to_string(), "***");
    assert!(project_to_cube(&b("0]12|3", 3)).degenerate);
    assert!(!project_to_cube(&b("0]1|2|3", 3)).degenerate);
}

#[test]
fn cell_structures() {
    assert_eq!(cell_structure(&b("0]12", 2)).to_string(), "B0 × P2");
    let c = cell_structure(&b("01]", 2));
    assert_eq!(c.to_string(), "B1");
    assert_eq!(c.head, s("01"));
    assert_eq!(cell_structure(&PcubeFace::top(3)).to_string(), "B3");
    assert_eq!(cell_structure(&b("038]14|6|79", 9)).perm_dims(), vec![2, 1, 2]);
}

#[test]
fn parse_round_trips() {
    for n in 0..=4 {
        for f in faces_b(n, None) {
            assert_eq!(PcubeFace::parse(&f.to_string(), n).unwrap(), f);
            assert_eq!(PcubeFace::parse(&f.full_string(), n).unwrap(), f);
        }
    }
    assert!(PcubeFace::parse("12", 2).is_err());
}
