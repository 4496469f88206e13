//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, with the
//! runtime bound each criterion is held to. Exits non-zero on any failure.

use std::sync::Arc;
use std::time::{Duration, Instant};

use frobcc::field::Field;
use frobcc::frobenius::frobenius_by_division;
use frobcc::groebner::{ideal_quotient, saturate_irrelevant, Ideal};
use frobcc::koszul::{h1_degree_zero, limit_map};
use frobcc::linalg::ExactMatrix;
use frobcc::oracle::oracle_component_count;
use frobcc::pipeline::{parse_problem, run_oracle, run_pipeline_detailed, PipelineOptions, PipelineRun, ProblemSpec, Strategy};
use frobcc::polyring::{PolyRing, Polynomial};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = body();
        let elapsed = start.elapsed();
        let timing = match limit {
            Some(l) => format!("{:.2} s, bound {} s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.2} s, over the {} s bound", elapsed.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({timing})"),
            Err(reason) => {
                self.failures += 1;
                println!("[FAIL] {name}: {reason} ({timing})");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn problem(p: u32, e: u32, vars: &str, gens: &[&str]) -> ProblemSpec {
    let text = format!("char: {p}\next: {e}\nvars: {vars}\nideal:\n{}\n", gens.join("\n"));
    parse_problem(&text).expect("fixture parses")
}

fn run(spec: &ProblemSpec) -> Result<PipelineRun, String> {
    run_pipeline_detailed(spec, &PipelineOptions::default()).map_err(|e| e.to_string())
}

fn components(spec: &ProblemSpec) -> Result<usize, String> {
    run(spec).map(|r| r.report.components)
}

/// ℓ equals the stabilized Koszul dimension, the image chain does not grow,
/// the limit maps are injective and Frobenius is bijective on its stable part.
fn consistency(run: &PipelineRun) -> Result<(), String> {
    let Some(ps) = &run.parameters else { return Ok(()) };
    let ell = run.report.ell.ok_or("no ℓ in a certified run")?;
    ensure(run.koszul_dims.last() == Some(&ell), || format!("Koszul dims {:?} vs ℓ = {ell}", run.koszul_dims))?;
    ensure(run.koszul_dims.windows(2).all(|w| w[0] <= w[1]), || format!("Koszul dims {:?} decrease", run.koszul_dims))?;
    ensure(run.report.chain.windows(2).all(|w| w[0] >= w[1]), || format!("chain {:?} grows", run.report.chain))?;
    let n = run.report.stab_n.unwrap();
    let gsat = &run.saturated;
    let field = gsat.ring().field().clone();
    let levels: Vec<_> = (1..=n + 1).map(|t| h1_degree_zero(gsat, ps.forms(), t)).collect();
    for w in levels.windows(2) {
        let m = limit_map(gsat, &w[0], &w[1]).map_err(|e| e.to_string())?;
        ensure(m.rank(&field) == w[0].dim(), || format!("limit map at t = {} is not injective", w[0].t()))?;
    }
    let dec = run.decomposition.as_ref().unwrap();
    ensure(dec.bijective_on_stable, || "Frobenius not bijective on the stable part".into())?;
    if let (Some(classes), Some(frob)) = (&run.classes, &run.frobenius) {
        if let Some(div) = frobenius_by_division(gsat, classes) {
            ensure(div == *frob, || "division route disagrees with the cohomological route".into())?;
        }
    }
    Ok(())
}

const EXAMPLE: [&str; 4] = ["u^2 - 2*x^2", "v^2 - 2*y^2", "u*v - 2*x*y", "v*x - u*y"];
const LINES: [&str; 4] = ["x*u", "x*v", "y*u", "y*v"];

fn golden_fixtures() -> Vec<(String, u32, &'static str, Vec<&'static str>, usize)> {
    let mut out = Vec::new();
    for p in [3, 5] {
        out.push((format!("example over F_{p}"), p, "x y u v", EXAMPLE.to_vec(), 2));
    }
    for p in [2, 3, 5] {
        out.push((format!("disjoint lines over F_{p}"), p, "x y u v", LINES.to_vec(), 2));
    }
    out.push(("zero ideal, 2 variables".into(), 5, "x y", vec![], 1));
    out.push(("zero ideal, 3 variables".into(), 5, "x y z", vec![], 1));
    out.push(("zero ideal, 4 variables".into(), 3, "x y z w", vec![], 1));
    out.push(("conic x^2 + yz over F_3".into(), 3, "x y z", vec!["x^2 + y*z"], 1));
    out.push(("(xy) in 3 variables over F_2".into(), 2, "x y z", vec!["x*y"], 1));
    for p in [3, 5] {
        out.push((format!("x^2 + y^2 over F_{p}"), p, "x y", vec!["x^2 + y^2"], 2));
    }
    out
}

fn random_squarefree(rng: &mut ChaCha8Rng) -> (u32, usize, Vec<String>) {
    let p = [2, 3, 5][rng.gen_range(0..3)];
    let n = rng.gen_range(2..=6usize);
    let random_mask = |rng: &mut ChaCha8Rng, density: f64| loop {
        let mask = (0..n).filter(|_| rng.gen_bool(density)).fold(0u32, |m, i| m | (1 << i));
        if mask != 0 && mask != (1 << n) - 1 {
            return mask;
        }
    };
    let masks: Vec<u32> = if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=8usize);
        (0..k).map(|_| random_mask(rng, 0.4)).collect()
    } else {
        // ∩ (x_i : i ∉ T_j): a union of small coordinate subspaces, which
        // tends to be disconnected; generated by one variable per prime
        let full = (1u32 << n) - 1;
        let primes: Vec<u32> = (0..rng.gen_range(2..=3)).map(|_| full ^ random_mask(rng, 0.3)).collect();
        let mut products = vec![0u32];
        for s in &primes {
            products = products.iter().flat_map(|&m| (0..n).filter(move |i| s & (1 << i) != 0).map(move |i| m | (1 << i))).collect();
        }
        products.sort_unstable();
        products.dedup();
        let minimal: Vec<u32> =
            products.iter().copied().filter(|&m| !products.iter().any(|&o| o != m && o & !m == 0)).collect();
        if minimal.len() > 8 {
            return random_squarefree(rng);
        }
        minimal
    };
    let gens = masks
        .iter()
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| format!("x{i}")).collect::<Vec<_>>().join("*"))
        .collect();
    (p, n, gens)
}

fn homogeneous(ring: &Arc<PolyRing>, degree: u64, coeffs: &[u32]) -> Polynomial {
    let field = ring.field();
    let terms = ring
        .monomials_of_degree(degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(m, &c)| (m, field.element(c % field.order())))
        .collect();
    Polynomial::from_terms(ring, terms)
}

fn property_suites() -> Outcome {
    let cases = 1000;
    // a runner counts cases cumulatively, so every property gets its own
    let runner = || TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let fields: Vec<Field> =
        [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2), (5, 2)].iter().map(|&(p, e)| Field::extension(p, e).unwrap()).collect();

    runner()
        .run(&(0..fields.len(), any::<u32>(), any::<u32>()), |(fi, a, b)| {
            let f = &fields[fi];
            let (a, b) = (f.element(a % f.order()), f.element(b % f.order()));
            prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            prop_assert_eq!(f.pth_root(f.frobenius(a)), a);
            prop_assert!(a == b || f.frobenius(a) != f.frobenius(b));
            Ok(())
        })
        .map_err(|e| format!("Frobenius on scalars: {e}"))?;

    let rings: Vec<Arc<PolyRing>> =
        [2, 3, 5].iter().map(|&p| PolyRing::new(Arc::new(Field::prime(p).unwrap()), &["x", "y", "z"]).unwrap()).collect();
    let coeffs = proptest::collection::vec(any::<u32>(), 1..12);

    runner()
        .run(&(0..3usize, coeffs.clone(), coeffs.clone(), 1..3u64), |(ri, a, b, d)| {
            let r = &rings[ri];
            let (f, g) = (homogeneous(r, d, &a), homogeneous(r, d + 1, &b));
            prop_assert_eq!((&f + &g).pth_power(), &f.pth_power() + &g.pth_power());
            Ok(())
        })
        .map_err(|e| format!("freshman's dream: {e}"))?;

    let ideal_strategy = (0..3usize, proptest::collection::vec((1..3u64, coeffs.clone()), 1..4));
    let build = |ri: usize, gens: &[(u64, Vec<u32>)]| {
        let r = &rings[ri];
        Ideal::new(r, gens.iter().map(|(d, c)| homogeneous(r, *d, c)).collect()).unwrap()
    };

    runner()
        .run(&ideal_strategy, |(ri, gens)| {
            let i = build(ri, &gens);
            let mut rev: Vec<Polynomial> = i.generators().iter().rev().cloned().collect();
            if rev.len() > 1 {
                let s = &rev[0] * &Polynomial::one(&rings[ri]);
                rev.push(s);
            }
            let j = Ideal::new(&rings[ri], rev).unwrap();
            prop_assert_eq!(i.groebner(), j.groebner());
            Ok(())
        })
        .map_err(|e| format!("reduced Gröbner basis uniqueness: {e}"))?;

    runner()
        .run(&(ideal_strategy, 1..3u64, coeffs), |((ri, gens), d, c)| {
            let i = build(ri, &gens);
            let f = homogeneous(&rings[ri], d, &c);
            prop_assume!(!f.is_zero());
            let gi = i.groebner();
            let q = ideal_quotient(&i, &f).groebner();
            for g in q.elements() {
                prop_assert!(gi.contains(&(g * &f)));
            }
            for g in gi.elements() {
                prop_assert!(q.contains(g));
            }
            let sat = saturate_irrelevant(&i);
            let gsat = sat.groebner();
            prop_assert_eq!(saturate_irrelevant(&sat).groebner(), gsat.clone());
            for g in gi.elements() {
                prop_assert!(gsat.contains(g));
            }
            Ok::<(), TestCaseError>(())
        })
        .map_err(|e| format!("quotient/saturation identities: {e}"))?;

    Ok(format!("{cases} cases each: Frobenius on scalars, freshman's dream, reduced-basis uniqueness, quotient/saturation"))
}

fn main() {
    let mut suite = Suite { failures: 0 };
    let secs = Duration::from_secs;

    suite.check("golden example over F_3 and F_5", Some(secs(5)), || {
        let mut details = Vec::new();
        for p in [3, 5] {
            let r = run(&problem(p, 1, "x y u v", &EXAMPLE))?;
            let field = Field::prime(p).unwrap();
            let m = r.frobenius.as_ref().unwrap().matrix().clone();
            ensure(r.report.components == 2, || format!("F_{p}: {} components", r.report.components))?;
            ensure(r.report.ell == Some(1), || format!("F_{p}: ℓ = {:?}", r.report.ell))?;
            ensure(!r.report.connected_geom, || format!("F_{p}: reported connected"))?;
            ensure(m.rows() == 1 && !m[(0, 0)].is_zero(), || format!("F_{p}: matrix {m:?}"))?;
            if p == 3 {
                ensure(m == ExactMatrix::from_ints(&field, &[&[2]]), || format!("F_3: matrix {m:?}, expected [2]"))?;
            }
            details.push(format!("F_{p}: M = [{}]", field.format(m[(0, 0)])));
        }
        Ok(format!("2 components, ℓ = 1, not connected; {}", details.join(", ")))
    });

    suite.check("disjoint lines over F_2, F_3, F_5 match the oracle", Some(secs(5)), || {
        for p in [2, 3, 5] {
            let spec = problem(p, 1, "x y u v", &LINES);
            let c = components(&spec)?;
            let o = run_oracle(&spec).map_err(|e| e.to_string())?.components;
            ensure(c == 2 && o == 2, || format!("F_{p}: pipeline {c}, oracle {o}"))?;
        }
        Ok("2 components everywhere".into())
    });

    suite.check("connected fixtures", Some(secs(5)), || {
        let fixtures: Vec<(u32, &str, Vec<&str>)> = vec![
            (5, "x y", vec![]),
            (5, "x y z", vec![]),
            (3, "x y z w", vec![]),
            (2, "x y z", vec!["x^2 + y*z"]),
            (3, "x y z", vec!["x^2 + y*z"]),
            (2, "x y z", vec!["x*y"]),
            (5, "x y z", vec!["x*y"]),
        ];
        for (p, vars, gens) in &fixtures {
            let c = components(&problem(*p, 1, vars, gens))?;
            ensure(c == 1, || format!("{gens:?} in K[{vars}] over F_{p}: {c} components"))?;
        }
        Ok(format!("{} fixtures, 1 component each", fixtures.len()))
    });

    suite.check("x^2 + y^2 over F_3 and F_5", Some(secs(2)), || {
        for p in [3, 5] {
            let c = components(&problem(p, 1, "x y", &["x^2 + y^2"]))?;
            ensure(c == 2, || format!("F_{p}: {c} components"))?;
        }
        Ok("2 components over both fields".into())
    });

    let mut corpus_runs: Vec<PipelineRun> = Vec::new();
    suite.check("oracle equivalence on random square-free monomial ideals", Some(secs(600)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let (mut tested, mut by_count) = (0, std::collections::BTreeMap::new());
        let mut attempts = 0;
        while tested < 300 {
            attempts += 1;
            if attempts > 5000 {
                return Err(format!("only {tested} usable ideals generated"));
            }
            let (p, n, gens) = random_squarefree(&mut rng);
            let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            let spec = problem(p, 1, &vars.join(" "), &refs);
            let oracle = oracle_component_count(&spec.ideal).map_err(|e| e.to_string())?;
            if oracle == 0 {
                continue;
            }
            let r = run(&spec).map_err(|e| format!("F_{p}, {gens:?}: {e}"))?;
            ensure(r.report.components == oracle, || {
                format!("F_{p}, n = {n}, {gens:?}: pipeline {} vs oracle {oracle}", r.report.components)
            })?;
            *by_count.entry(oracle).or_insert(0) += 1;
            tested += 1;
            corpus_runs.push(r);
        }
        Ok(format!("{tested} ideals agree; oracle counts {by_count:?}"))
    });

    suite.check("internal consistency on every fixture", Some(secs(120)), || {
        let mut checked = 0;
        for (name, p, vars, gens, _) in golden_fixtures() {
            consistency(&run(&problem(p, 1, vars, &gens))?).map_err(|e| format!("{name}: {e}"))?;
            checked += 1;
        }
        for (k, r) in corpus_runs.iter().enumerate() {
            consistency(r).map_err(|e| format!("corpus ideal {k}: {e}"))?;
            checked += 1;
        }
        Ok(format!("{checked} runs: ℓ = Koszul dimension, chains nonincreasing, limit maps injective, F bijective on stable part"))
    });

    suite.check("base change to F_{p^2} and F_{p^3} keeps the count", Some(secs(60)), || {
        let fixtures = golden_fixtures();
        for (name, p, vars, gens, expected) in &fixtures {
            for e in [1, 2, 3] {
                let c = components(&problem(*p, e, vars, gens))?;
                ensure(c == *expected, || format!("{name}, ext {e}: {c} components, expected {expected}"))?;
            }
        }
        Ok(format!("{} fixtures agree for ext 1, 2 and 3", fixtures.len()))
    });

    suite.check("ext and heuristic strategies agree", Some(secs(120)), || {
        let heuristic = PipelineOptions { strategy: Strategy::Heuristic, ..Default::default() };
        for (name, p, vars, gens, expected) in golden_fixtures() {
            let r = run_pipeline_detailed(&problem(p, 1, vars, &gens), &heuristic).map_err(|e| e.to_string())?;
            ensure(r.report.components == expected, || format!("{name}: heuristic gives {}", r.report.components))?;
        }
        Ok("all golden fixtures".into())
    });

    suite.check("property suites", Some(secs(300)), property_suites);

    if suite.failures > 0 {
        println!("{} criterion(s) failed", suite.failures);
        std::process::exit(1);
    }
}
