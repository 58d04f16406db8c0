use clap::{Parser, Subcommand, ValueEnum};
use permutocalc::chains::{
    boundary_pcube, boundary_perm, check_d2, cohomology, homology, is_chain_map, tensor_boundary, CellComplex, CubeComplex,
    PcubeComplex, PermComplex, Ring,
};
use permutocalc::diagonals::{
    diagonal_pcube, diagonal_pcube_ring, diagonal_perm, diagonal_perm_ring, grouped_pcube, grouped_perm, grouped_text, terms_json,
    Diagonal, VertexRow,
};
use permutocalc::hirsch::{
    check_e11_identity, check_mu_chain_map, check_twisting_element, universal_projection, DGAlgebra, HirschStructure, TwistedDga,
};
use permutocalc::mutation::{with_mutation, Mutation};
use permutocalc::omega::{verify_cobar_identity, CubicalSet, Omega, OmegaFiber, TrivialFiber, TwistedComplex};
use permutocalc::permutahedron::{check_relations, faces, top};
use permutocalc::permutocube::{faces_b, PcubeFace};
use serde_json::{json, Value};
use std::fmt::{Debug, Display};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "permutocalc", version, about = "Permutahedra, permutocubes and their diagonals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the faces of P_n or B_n in canonical order.
    Faces {
        #[arg(long)]
        polytope: Polytope,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Print the diagonal of the top cell.
    Diagonal {
        #[arg(long)]
        polytope: Polytope,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "Z")]
        ring: RingArg,
        /// Group terms by the vertex of their stream.
        #[arg(long)]
        group_by_vertex: bool,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run verification suites. Exit code 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Largest n for the polytope suites.
        #[arg(long, default_value_t = 5)]
        max_n: u32,
        /// Degree cap: total degree for cobar (default 5) and twisted (6), bar degree for hirsch (4).
        #[arg(long)]
        cap: Option<usize>,
        /// Built-in fixture name or a JSON file; repeatable.
        #[arg(long)]
        fixture: Vec<String>,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long, hide = true)]
        mutate: Option<MutateArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Polytope {
    #[value(name = "P")]
    P,
    #[value(name = "B")]
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    D2,
    Chainmap,
    Relations,
    Cobar,
    Twisted,
    Hirsch,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutateArg {
    BoundaryKoszul,
    PairSignDeletion,
    CobarQuadraticSign,
}

impl From<MutateArg> for Mutation {
    fn from(m: MutateArg) -> Mutation {
        match m {
            MutateArg::BoundaryKoszul => Mutation::BoundaryKoszul,
            MutateArg::PairSignDeletion => Mutation::PairSignDeletion,
            MutateArg::CobarQuadraticSign => Mutation::CobarQuadraticSign,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Faces { polytope, n, dim, format } => cmd_faces(polytope, n, dim, format),
        Cmd::Diagonal { polytope, n, ring, group_by_vertex, format } => cmd_diagonal(polytope, n, ring, group_by_vertex, format),
        Cmd::Verify { suite, max_n, cap, fixture, format, mutate } => cmd_verify(suite, max_n, cap, fixture, format, mutate),
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn check_n(polytope: Polytope, n: u32) -> Result<(), ExitCode> {
    match polytope {
        Polytope::P if n == 0 => Err(usage("P_n needs n ≥ 1")),
        _ if n > 12 => Err(usage("n is limited to 12")),
        _ => Ok(()),
    }
}

fn cmd_faces(polytope: Polytope, n: u32, dim: Option<usize>, format: Format) -> ExitCode {
    if let Err(code) = check_n(polytope, n) {
        return code;
    }
    let list: Vec<(String, usize)> = match polytope {
        Polytope::P => faces(n, dim).iter().map(|f| (f.to_string(), f.dim())).collect(),
        Polytope::B => faces_b(n, dim).iter().map(|f| (f.to_string(), f.dim())).collect(),
    };
    match format {
        Format::Text => {
            for (f, _) in &list {
                println!("{f}");
            }
        }
        Format::Json => {
            let faces: Vec<Value> = list.iter().map(|(f, d)| json!({"face": f, "dim": d})).collect();
            let name = polytope_name(polytope);
            println!("{}", json!({"polytope": name, "n": n, "dim": dim, "faces": faces}));
        }
    }
    ExitCode::SUCCESS
}

fn polytope_name(p: Polytope) -> &'static str {
    match p {
        Polytope::P => "P",
        Polytope::B => "B",
    }
}

fn cmd_diagonal(polytope: Polytope, n: u32, ring: RingArg, grouped: bool, format: Format) -> ExitCode {
    if let Err(code) = check_n(polytope, n) {
        return code;
    }
    if n > 7 {
        return usage("diagonals are limited to n ≤ 7");
    }
    let ring = match ring {
        RingArg::Z => Ring::Z,
        RingArg::Z2 => Ring::Z2,
    };
    let out = match polytope {
        Polytope::P => render_diagonal(&diagonal_perm_ring(&top(n), ring), || grouped_perm(n), ring, grouped, format),
        Polytope::B => render_diagonal(&diagonal_pcube_ring(&PcubeFace::top(n), ring), || grouped_pcube(n), ring, grouped, format),
    };
    print!("{out}");
    ExitCode::SUCCESS
}

fn render_diagonal<F: Ord + Clone + Display>(
    d: &Diagonal<F>,
    rows: impl Fn() -> Vec<VertexRow<F>>,
    ring: Ring,
    grouped: bool,
    format: Format,
) -> String {
    let mut rows = if grouped { rows() } else { Vec::new() };
    if ring == Ring::Z2 {
        for row in &mut rows {
            for (us, _) in &mut row.groups {
                for (_, c) in us.iter_mut() {
                    *c = 1;
                }
            }
        }
    }
    match (format, grouped) {
        (Format::Text, true) => grouped_text(&rows),
        (Format::Text, false) => {
            let mut out = String::new();
            for ((l, r), c) in d.iter() {
                match ring {
                    Ring::Z => out.push_str(&format!("{c:+} {l} ⊗ {r}\n")),
                    Ring::Z2 => out.push_str(&format!("{l} ⊗ {r}\n")),
                }
            }
            out
        }
        (Format::Json, true) => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let groups: Vec<Value> = row
                        .groups
                        .iter()
                        .map(|(us, v)| {
                            let left: Vec<Value> = us.iter().map(|(u, c)| json!({"cell": u.to_string(), "coeff": c})).collect();
                            json!({"left": left, "right": v.to_string()})
                        })
                        .collect();
                    json!({"vertex": row.vertex.to_string(), "groups": groups})
                })
                .collect();
            format!("{}\n", json!({"rows": rows}))
        }
        (Format::Json, false) => format!("{}\n", json!({"terms": terms_json(d)})),
    }
}

type Outcome = Result<String, String>;

struct Check {
    suite: &'static str,
    name: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn check(suite: &'static str, name: impl Into<String>, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Check {
    Check { suite, name: name.into(), run: Box::new(run) }
}

fn load_fixture(name: &str) -> Result<CubicalSet, String> {
    if let Ok(q) = CubicalSet::fixture(name) {
        return Ok(q);
    }
    let text = std::fs::read_to_string(name).map_err(|_| format!("unknown fixture {name}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))?;
    CubicalSet::from_json(&v).map_err(|e| format!("{name}: {e}"))
}

fn d2_outcome<C: CellComplex>(c: &C, top: usize) -> Outcome
where
    C::Cell: Debug,
{
    match check_d2(c, top) {
        None => Ok(format!("{} cells", (0..=top).map(|d| c.cells(d).len()).sum::<usize>())),
        Some((cell, dd)) => Err(format!("∂∂{cell:?} = {dd:?}")),
    }
}

fn groups_outcome(got: Vec<String>) -> Outcome {
    let want: Vec<String> = std::iter::once("Z".to_string()).chain(std::iter::repeat("0".to_string())).take(got.len()).collect();
    if got == want {
        Ok(format!("({})", got.join(", ")))
    } else {
        Err(format!("got ({}), want ({})", got.join(", "), want.join(", ")))
    }
}

fn count_outcome(r: permutocalc::Result<usize>, what: &str) -> Outcome {
    r.map(|k| format!("{k} {what}")).map_err(|e| e.to_string())
}

fn build_checks(suite: Suite, max_n: u32, cap: Option<usize>, fixtures: &[String]) -> Result<Vec<Check>, String> {
    let want = |s: Suite| suite == s || suite == Suite::All;
    let pick = |defaults: &[&str]| -> Result<Vec<(String, CubicalSet)>, String> {
        let names: Vec<String> = if fixtures.is_empty() { defaults.iter().map(|s| s.to_string()).collect() } else { fixtures.to_vec() };
        names.into_iter().map(|n| load_fixture(&n).map(|q| (n, q))).collect()
    };
    let mut out = Vec::new();
    if want(Suite::D2) {
        for n in 1..=max_n {
            out.push(check("d2", format!("P_{n}"), move || d2_outcome(&PermComplex(n), n as usize)));
        }
        for n in 0..=max_n {
            out.push(check("d2", format!("B_{n}"), move || d2_outcome(&PcubeComplex(n), n as usize)));
        }
        for n in 1..=max_n as usize {
            out.push(check("d2", format!("I^{n}"), move || d2_outcome(&CubeComplex(n), n)));
        }
    }
    if want(Suite::Chainmap) {
        for n in 1..=max_n {
            out.push(check("chainmap", format!("P_{n}"), move || {
                let cells = faces(n, None);
                let bd = |ch: &Diagonal<_>| tensor_boundary(ch, boundary_perm, boundary_perm, |a: &permutocalc::setcalc::OrderedPartition| a.dim());
                match is_chain_map(&cells, diagonal_perm, boundary_perm, bd) {
                    (0, _) => Ok(format!("{} cells", cells.len())),
                    (w, first) => Err(format!("residual norm {w} at {first:?}")),
                }
            }));
        }
        // B_n has one dimension more than P_n
        for n in 0..max_n {
            out.push(check("chainmap", format!("B_{n}"), move || {
                let cells = faces_b(n, None);
                let bd = |ch: &Diagonal<PcubeFace>| tensor_boundary(ch, boundary_pcube, boundary_pcube, |a: &PcubeFace| a.dim());
                match is_chain_map(&cells, diagonal_pcube, boundary_pcube, bd) {
                    (0, _) => Ok(format!("{} cells", cells.len())),
                    (w, first) => Err(format!("residual norm {w} at {first:?}")),
                }
            }));
        }
    }
    if want(Suite::Relations) {
        let n = max_n.min(7);
        out.push(check("relations", format!("factorizations n≤{n}"), move || count_outcome(check_relations(n), "partitions")));
    }
    if want(Suite::Cobar) {
        let cap = cap.unwrap_or(5);
        for (name, q) in pick(&["cube2", "synthetic23", "tower6"])? {
            out.push(check("cobar", format!("{name} deg≤{cap}"), move || count_outcome(verify_cobar_identity(&q, cap), "words")));
        }
    }
    if want(Suite::Twisted) {
        let cap = cap.unwrap_or(6);
        for (name, q) in pick(&["cube2", "synthetic23"])? {
            let q1 = q.clone();
            out.push(check("twisted", format!("{name} universal d²=0 deg≤{cap}"), move || {
                let om = Omega::build(&q1).map_err(|e| e.to_string())?;
                d2_outcome(&TwistedComplex { q: &q1, fiber: OmegaFiber(om) }, cap)
            }));
            let q2 = q.clone();
            out.push(check("twisted", format!("{name} trivial d²=0 deg≤{cap}"), move || {
                d2_outcome(&TwistedComplex { q: &q2, fiber: TrivialFiber }, cap)
            }));
            out.push(check("twisted", format!("{name} acyclic"), move || {
                let om = Omega::build(&q).map_err(|e| e.to_string())?;
                let h = homology(&TwistedComplex { q: &q, fiber: OmegaFiber(om) }, 4, Ring::Z);
                groups_outcome(h.iter().map(|g| g.to_string()).collect())
            }));
        }
    }
    if want(Suite::Hirsch) {
        let cap = cap.unwrap_or(4);
        out.push(check("hirsch", "polynomial bar acyclic", move || {
            let a = DGAlgebra::truncated_polynomial(2, 2);
            let e = HirschStructure::commutative();
            let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
            groups_outcome(cohomology(&t, cap, Ring::Z).iter().map(|g| g.to_string()).collect())
        }));
        for (name, q) in pick(&["cube3", "synthetic23", "tower6"])? {
            let a = std::sync::Arc::new(DGAlgebra::cubical_cochains(&q));
            let e = std::sync::Arc::new(HirschStructure::cubical(&q, &a));
            for ring in [Ring::Z, Ring::Z2] {
                let (a, e) = (a.clone(), e.clone());
                out.push(check("hirsch", format!("{name} ∇E+E⌣E over {ring:?} cap {cap}"), move || {
                    count_outcome(check_twisting_element(&a, &e, cap, ring), "pairs")
                }));
            }
            let (a1, e1) = (a.clone(), e.clone());
            out.push(check("hirsch", format!("{name} E11"), move || count_outcome(check_e11_identity(&a1, &e1, cap + 2), "pairs")));
            let (a1, e1) = (a.clone(), e.clone());
            out.push(check("hirsch", format!("{name} μ_E chain map"), move || {
                count_outcome(check_mu_chain_map(&a1, &e1, cap.saturating_sub(1)), "pairs")
            }));
            let (a1, e1) = (a.clone(), e.clone());
            out.push(check("hirsch", format!("{name} d_φ derivation cap {cap}"), move || {
                let t = TwistedDga { a: &a1, e: &e1, phi: &universal_projection };
                count_outcome(t.check_derivation(cap), "pairs")
            }));
            out.push(check("hirsch", format!("{name} bar acyclic"), move || {
                let t = TwistedDga { a: &a, e: &e, phi: &universal_projection };
                groups_outcome(cohomology(&t, cap, Ring::Z).iter().map(|g| g.to_string()).collect())
            }));
        }
    }
    Ok(out)
}

fn threads() -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("PERMUTOCALC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(k) if k >= 1 => k,
        _ => avail,
    }
}

fn run_checks(checks: &[Check], mutation: Mutation) -> Vec<Outcome> {
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Outcome>>> = checks.iter().map(|_| Mutex::new(None)).collect();
    let workers = threads().min(checks.len()).max(1);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= checks.len() {
                    break;
                }
                // mutations are thread-local
                let r = with_mutation(mutation, || (checks[i].run)());
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().expect("every check runs")).collect()
}

fn cmd_verify(suite: Suite, max_n: u32, cap: Option<usize>, fixtures: Vec<String>, format: Format, mutate: Option<MutateArg>) -> ExitCode {
    if max_n > 7 {
        return usage("--max-n is limited to 7");
    }
    let checks = match build_checks(suite, max_n, cap, &fixtures) {
        Ok(c) => c,
        Err(msg) => return usage(&msg),
    };
    let mutation = mutate.map_or(Mutation::None, Mutation::from);
    let start = Instant::now();
    let results = run_checks(&checks, mutation);
    let failed = results.iter().filter(|r| r.is_err()).count();
    match format {
        Format::Text => {
            for (c, r) in checks.iter().zip(&results) {
                match r {
                    Ok(detail) => println!("PASS {} {}: {detail}", c.suite, c.name),
                    Err(cex) => println!("FAIL {} {}: {cex}", c.suite, c.name),
                }
            }
            if failed == 0 {
                println!("all {} checks passed", checks.len());
            } else {
                println!("{failed} of {} checks failed", checks.len());
            }
        }
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .zip(&results)
                .map(|(c, r)| match r {
                    Ok(d) => json!({"suite": c.suite, "name": c.name, "pass": true, "detail": d}),
                    Err(x) => json!({"suite": c.suite, "name": c.name, "pass": false, "counterexample": x}),
                })
                .collect();
            let suite_name = Suite::value_variants()
                .iter()
                .find(|s| **s == suite)
                .and_then(|s| s.to_possible_value())
                .map(|v| v.get_name().to_string());
            let report = json!({
                "suite": suite_name,
                "parameters": {"max_n": max_n, "cap": cap, "fixtures": fixtures},
                "checks": list,
                "pass": failed == 0,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    eprintln!("wall time {:.2} s", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
