use permutocalc::chains::*;
use permutocalc::permutahedron::top;
use permutocalc::permutocube::PcubeFace;
use permutocalc::setcalc::OrderedPartition;

fn p(text: &str) -> OrderedPartition {
    OrderedPartition::parse(text).unwrap()
}

fn shown<C: CellComplex>(c: &C, top: usize, ring: Ring) -> Vec<String> {
    homology(c, top, ring).iter().map(|g| g.to_string()).collect()
}

fn point(top: usize) -> Vec<String> {
    std::iter::once("Z".to_string()).chain(std::iter::repeat("0".to_string()).take(top)).collect()
}

#[test]
fn boundary_of_small_cells() {
    let want: Chain<OrderedPartition> = [(p("1|2"), 1), (p("2|1"), -1)].into_iter().collect();
    assert_eq!(boundary_perm(&top(2)), want);
    assert!(boundary_perm(&top(1)).is_zero());
    assert_eq!(boundary_perm(&top(3)).len(), 6);
    assert_eq!(boundary_pcube(&PcubeFace::top(1)).len(), 2);
}

#[test]
fn boundary_squares_to_zero() {
    for n in 1..=6 {
        assert!(check_d2(&PermComplex(n), n as usize).is_none(), "P_{n}");
        assert!(check_d2(&CubeComplex(n as usize), n as usize).is_none(), "I^{n}");
    }
    for n in 0..=5 {
        assert!(check_d2(&PcubeComplex(n), n as usize).is_none(), "B_{n}");
    }
}

#[test]
fn polytopes_are_contractible() {
    for n in 1..=5 {
        assert_eq!(shown(&PermComplex(n), n as usize - 1, Ring::Z), point(n as usize - 1));
    }
    for n in 0..=4 {
        for ring in [Ring::Z, Ring::Z2] {
            assert_eq!(shown(&PcubeComplex(n), n as usize, ring), point(n as usize));
        }
    }
}

struct Toy(Vec<Vec<Vec<(usize, i64)>>>);

impl CellComplex for Toy {
    type Cell = (usize, usize);
    fn cells(&self, d: usize) -> Vec<(usize, usize)> {
        (0..self.0.get(d).map_or(0, |c| c.len())).map(|i| (d, i)).collect()
    }
    fn boundary(&self, &(d, i): &(usize, usize)) -> Chain<(usize, usize)> {
        self.0[d][i].iter().map(|&(j, c)| ((d - 1, j), c)).collect()
    }
}

#[test]
fn homology_with_torsion() {
    // a point, a loop, and a disc wrapped twice around it
    let rp2 = Toy(vec![vec![vec![]], vec![vec![]], vec![vec![(0, 2)]]]);
    assert_eq!(shown(&rp2, 2, Ring::Z), vec!["Z", "Z/2", "0"]);
    assert_eq!(shown(&rp2, 2, Ring::Z2), vec!["Z", "Z", "Z"]);
    let empty = Toy(vec![]);
    assert_eq!(shown(&empty, 2, Ring::Z), vec!["0", "0", "0"]);
}

#[test]
fn smith_form_divisors() {
    let rows: SparseRows = vec![[(0, 2), (1, 4)].into_iter().collect(), [(0, 6), (1, 8)].into_iter().collect()];
    let snf = smith_normal_form(rows, 2, Ring::Z);
    assert_eq!(snf.rank, 2);
    assert_eq!(snf.divisors, vec![2, 4]);
}

#[test]
fn tensor_boundary_has_koszul_sign() {
    let ch: Chain<(OrderedPartition, OrderedPartition)> = Chain::single((top(2), top(2)), 1);
    let d = tensor_boundary(&ch, boundary_perm, boundary_perm, |a: &OrderedPartition| a.dim());
    assert_eq!(d.coeff(&(top(2), p("1|2"))), -1);
    assert_eq!(d.coeff(&(p("1|2"), top(2))), 1);
}

#[test]
fn chain_json_round_trip() {
    let ch = boundary_perm(&top(3));
    let v = ch.to_json(1);
    let (deg, back) = chain_from_json(&v, OrderedPartition::parse).unwrap();
    assert_eq!(deg, 1);
    assert_eq!(back, ch);
    assert!(chain_from_json(&serde_json::json!({"terms": []}), OrderedPartition::parse).is_err());
}

#[test]
fn ring_reduction() {
    let ch: Chain<u32> = [(1, 2), (2, -3)].into_iter().collect();
    let r = ch.reduce(Ring::Z2);
    assert_eq!(r.coeff(&1), 0);
    assert_eq!(r.coeff(&2), 1);
}
