use permutocalc::setcalc::*;
use proptest::prelude::*;

fn s(text: &str) -> Set {
    parse_block(text).unwrap()
}

// ordered Bell numbers by the binomial recurrence
fn fubini(n: usize) -> usize {
    let mut a = vec![1usize];
    for m in 1..=n {
        let mut binom = 1;
        let mut total = 0;
        for k in 1..=m {
            binom = binom * (m - k + 1) / k;
            total += binom * a[m - k];
        }
        a.push(total);
    }
    a[n]
}

#[test]
fn partition_counts() {
    assert_eq!(ordered_partitions(s("123"), Some(2)).len(), 6);
    assert_eq!(ordered_partitions(s("123"), None).len(), 13);
    assert_eq!(ordered_partitions(s("1"), None).iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["1"]);
    assert!(ordered_partitions(s("12"), Some(3)).is_empty());
    for n in 1..=7 {
        assert_eq!(ordered_partitions(Set::underline(n as u32), None).len(), fubini(n), "n = {n}");
    }
}

#[test]
fn partitions_are_distinct_and_cover() {
    let all = ordered_partitions(Set::underline(5), None);
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), all.len());
    for p in &all {
        assert_eq!(p.support(), Set::underline(5));
    }
}

#[test]
fn shuffle_sign_examples() {
    assert_eq!(shuffle_sign(s("13"), s("2")).unwrap(), -1);
    assert_eq!(shuffle_sign(s("12"), s("3")).unwrap(), 1);
    assert_eq!(shuffle_sign(Set::EMPTY, s("59")).unwrap(), 1);
    assert!(shuffle_sign(s("12"), s("23")).is_err());
}

#[test]
fn shuffle_sign_antisymmetry() {
    for n in 1..=8 {
        for a in nonempty_subsets(Set::underline(n)) {
            let b = Set::underline(n) - a;
            let both = shuffle_sign(a, b).unwrap() * shuffle_sign(b, a).unwrap();
            assert_eq!(both, if a.len() * b.len() % 2 == 0 { 1 } else { -1 });
        }
    }
}

#[test]
fn partition_sign_examples() {
    assert_eq!(psgn(&[s("0"), s("1"), s("2")]), 1);
    assert_eq!(psgn(&[s("04"), s("12"), s("3"), s("56")]), -1);
    assert_eq!(rsgn(&[s("12")]), -1);
    assert!(partition_signs(&OrderedPartition::with_ground(vec![s("1")], s("12")).unwrap()).is_err());
}

#[test]
fn disjoint_union_examples() {
    // 12|345|678
    let u = Set::underline(8);
    assert_eq!(lower_union(s("12"), s("345"), u).unwrap(), s("1234"));
    assert_eq!(lower_union(s("12"), s("678"), u).unwrap(), s("567"));
    assert_eq!(upper_union(s("12"), s("678"), u).unwrap(), s("12"));
    assert_eq!(upper_union(s("345"), s("678"), u).unwrap(), s("34567"));
    assert_eq!(lower_union(Set::EMPTY, s("7"), s("7")).unwrap(), s("7"));
    assert!(lower_union(s("12"), s("23"), s("123")).is_err());
}

#[test]
fn unions_of_a_full_split() {
    for n in 1..=6 {
        let u = Set::underline(n + 1);
        for a in nonempty_subsets(u) {
            let b = u - a;
            if b.is_empty() {
                continue;
            }
            assert_eq!(lower_union(a, b, u).unwrap(), Set::underline(n), "{a}|{b}");
            assert_eq!(upper_union(a, b, u).unwrap(), Set::underline(n), "{a}|{b}");
        }
    }
}

#[test]
fn square_examples() {
    assert_eq!(square_op(s("12"), &[s("345"), s("678")]).unwrap().to_string(), "1234|567");
    assert_eq!(square_op(s("678"), &[s("12"), s("345")]).unwrap().to_string(), "12|34567");
    assert_eq!(square_op(s("2"), &[s("1")]).unwrap().to_string(), "1");
    assert!(square_op(s("2"), &[s("12")]).is_err());
}

#[test]
fn index_and_translate() {
    assert_eq!(index_map(s("259"), s("59")).unwrap(), s("23"));
    assert_eq!(index_map(s("259"), s("259")).unwrap(), Set::underline(3));
    assert!(index_map(s("259"), s("3")).is_err());
    assert_eq!(translate(s("456"), -3).unwrap(), s("123"));
    assert!(translate(s("456"), -5).is_err());
}

#[test]
fn parse_and_display() {
    let p = OrderedPartition::parse("13|2").unwrap();
    assert_eq!(p.blocks(), &[s("13"), s("2")]);
    assert_eq!(p.to_string(), "13|2");
    assert_eq!(block_string(s("1,10")), "1,10");
    assert!(OrderedPartition::parse("12|23").is_err());
}

proptest! {
    #[test]
    fn psgn_is_invariant_under_indexing(ground in 1u64..(1 << 9), seed in any::<u64>()) {
        let m = Set::from_bits(ground << 1);
        prop_assume!(m.len() <= 6);
        let parts = ordered_partitions(m, None);
        let p = &parts[(seed % parts.len() as u64) as usize];
        let relabeled: Vec<Set> = p.blocks().iter().map(|&b| index_map(m, b).unwrap()).collect();
        prop_assert_eq!(psgn(p.blocks()), psgn(&relabeled));
        let sg = partition_signs(p).unwrap();
        for x in [sg.psgn, sg.sgn1, sg.sgn2, sg.rsgn] {
            prop_assert!(x == 1 || x == -1);
        }
    }
}
