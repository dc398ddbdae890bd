//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p dispersive --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dispersive::batch::{simple_suite, tree_batch, tree_suite, worstcase_batch, TreeRun};
use dispersive::gadgets::{guards_from_assignment, lemma_suite, compose, Formula, Layout};
use dispersive::oracle::{exact_max_dispersion, feasible_at, OracleBudget};
use dispersive::{geodesic_distance, random_simple, verify, Dispersion, LatticePoint};

struct Outcome {
    pass: bool,
    summary: String,
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn worst_case_and_invariants() -> (Outcome, Outcome) {
    let started = Instant::now();
    let runs = worstcase_batch(&simple_suite(200), true);
    let took = started.elapsed();
    let mut verified = 0;
    let mut errors = Vec::new();
    let mut checks = 0;
    let mut failures = Vec::new();
    for r in &runs {
        match r {
            Ok(r) => {
                verified += r.ok as usize;
                checks += r.invariant_checks;
                failures.extend(r.invariant_failures.iter().map(|f| format!("seed {}: {f}", r.seed)));
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let c1 = Outcome {
        pass: verified == 200 && errors.is_empty() && took < Duration::from_secs(60),
        summary: format!("{verified}/200 verified at dispersion 3, {} errors, {} (limit 60 s)", errors.len(), secs(took)),
    };
    let mut s8 = format!("{checks} invariant checks, {} failures", failures.len());
    if let Some(first) = failures.first() {
        s8.push_str(&format!("; first: {first}"));
    }
    let c8 = Outcome { pass: failures.is_empty() && errors.is_empty() && checks > 0, summary: s8 };
    (c1, c8)
}

fn tight_example() -> Outcome {
    let p = common::grid("fig2.grid");
    let started = Instant::now();
    let sol = exact_max_dispersion(&p, &[], OracleBudget::default());
    let took = started.elapsed();
    match sol {
        Ok(sol) => {
            let ok = verify(&sol.witness, &p, sol.best, &[]).is_ok_and(|r| r.ok);
            Outcome {
                pass: sol.best == Dispersion::Finite(3) && ok && took < Duration::from_secs(60),
                summary: format!("l* = {} on {} cells, {} (limit 60 s)", sol.best, p.len(), secs(took)),
            }
        }
        Err(e) => Outcome { pass: false, summary: e.to_string() },
    }
}

fn tree_dp() -> Outcome {
    let runs = tree_batch(&tree_suite(100), OracleBudget::default());
    let mut agree = 0;
    let mut dp = Duration::ZERO;
    let mut bad = Vec::new();
    for r in &runs {
        match r {
            Ok(r) => {
                dp += r.dp_time;
                if TreeRun::agrees(r) {
                    agree += 1;
                } else {
                    bad.push(format!("seed {} dp {} oracle {}", r.seed, r.dp, r.oracle));
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    let mut summary = format!("{agree}/100 match the oracle, DP total {} (limit 5 s)", secs(dp));
    if let Some(first) = bad.first() {
        summary.push_str(&format!("; first mismatch: {first}"));
    }
    Outcome { pass: agree == 100 && dp < Duration::from_secs(5), summary }
}

fn gadget_lemmas() -> Outcome {
    let limit = Duration::from_secs(600);
    let budget = OracleBudget { time_limit: limit, ..Default::default() };
    let mut lines = Vec::new();
    let mut pass = true;
    for r in lemma_suite(budget) {
        match r {
            Ok(r) => {
                pass &= r.holds && r.elapsed < limit;
                lines.push(format!("{}:{}({})", r.lemma, if r.holds { "ok" } else { "FAILED" }, secs(r.elapsed)));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("error: {e}"));
            }
        }
    }
    Outcome { pass: pass && lines.len() == 8, summary: format!("lemmas {}", lines.join(" ")) }
}

fn end_to_end() -> Outcome {
    let f = Formula::parse(&common::fixture("formulas/fig12.cnf")).unwrap();
    let l = Layout::parse(&common::fixture("formulas/fig12.layout")).unwrap();
    let comp = match compose(&f, &l) {
        Ok(c) => c,
        Err(e) => return Outcome { pass: false, summary: e.to_string() },
    };
    let mut got = Vec::new();
    let mut took = Duration::ZERO;
    for a in [[false, true, true, true, false], [true, true, true, true, false]] {
        let g = match guards_from_assignment(&f, &l, &a) {
            Ok(w) => w.guards,
            Err(e) => return Outcome { pass: false, summary: e.to_string() },
        };
        let started = Instant::now();
        let r = verify(&g, &comp.poly, Dispersion::Finite(5), &[]).unwrap();
        took += started.elapsed();
        got.push((r.covered, r.dispersion));
    }
    Outcome {
        pass: got == [(true, Dispersion::Finite(5)), (true, Dispersion::Finite(4))] && took < Duration::from_secs(10),
        summary: format!(
            "{} cells; 01110 -> {}, 11110 -> {}; verification {} (limit 10 s)",
            comp.poly.len(),
            got[0].1,
            got[1].1,
            secs(took)
        ),
    }
}

fn geodesics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut scaling = 0;
    let mut violations = Vec::new();
    for t in 0..200u64 {
        let p = random_simple(t, rng.gen_range(5..120)).unwrap();
        let pts = p.lattice_points();
        let a = pts[rng.gen_range(0..pts.len())];
        let b = pts[rng.gen_range(0..pts.len())];
        let d = geodesic_distance(a, b, &p).unwrap();
        for k in [2, 3] {
            let s = |q: LatticePoint| LatticePoint::new(q.x * k, q.y * k);
            if geodesic_distance(s(a), s(b), &p.refined(k)).unwrap() == d * k as u32 {
                scaling += 1;
            } else {
                violations.push(format!("scaling k={k} on triple {t}"));
            }
        }
    }
    let mut pairs = 0;
    for t in 0..100u64 {
        let p = random_simple(1000 + t, rng.gen_range(5..150)).unwrap();
        let vs = p.vertices();
        for _ in 0..10 {
            let (a, b, c) = (
                vs[rng.gen_range(0..vs.len())],
                vs[rng.gen_range(0..vs.len())],
                vs[rng.gen_range(0..vs.len())],
            );
            let d = |x, y| geodesic_distance(x, y, &p).unwrap();
            pairs += 1;
            if d(a, b) != d(b, a) {
                violations.push(format!("symmetry on shape {t}"));
            }
            if d(a, b) > d(a, c) + d(c, b) {
                violations.push(format!("triangle inequality on shape {t}"));
            }
            if d(a, b) < a.l1(b) || (d(a, b) == 0) != (a == b) {
                violations.push(format!("lower bound on shape {t}"));
            }
        }
    }
    let mut summary = format!("{scaling}/400 refinement checks over 200 triples, {pairs} vertex pairs, {} violations", violations.len());
    if let Some(first) = violations.first() {
        summary.push_str(&format!("; first: {first}"));
    }
    Outcome { pass: violations.is_empty() && scaling == 400 && pairs == 1000, summary }
}

fn oracle_soundness() -> Outcome {
    let corpus = common::small_corpus();
    let levels: Vec<u32> = (1..=12).collect();
    let mut mismatches = Vec::new();
    for (name, p) in &corpus {
        let (naive_best, naive_reach) = common::naive(p, 6, &levels);
        let best = exact_max_dispersion(p, &[], OracleBudget::default()).map(|s| s.best).ok();
        if best != naive_best {
            mismatches.push(format!("{name}: oracle {best:?}, naive {naive_best:?}"));
        }
        for (&l, &reach) in levels.iter().zip(&naive_reach) {
            let got = feasible_at(p, Dispersion::Finite(l), &[], OracleBudget::default()).map(|g| g.is_some());
            if got.as_ref().ok() != Some(&reach) {
                mismatches.push(format!("{name} at {l}"));
            }
        }
    }
    let big = corpus.iter().filter(|(_, p)| p.len() > 16).count();
    let mut summary = format!("{} fixtures of at most 16 cells, {} mismatches", corpus.len(), mismatches.len());
    if let Some(first) = mismatches.first() {
        summary.push_str(&format!("; first: {first}"));
    }
    Outcome { pass: mismatches.is_empty() && big == 0 && !corpus.is_empty(), summary }
}

fn main() -> ExitCode {
    let (c1, c8) = worst_case_and_invariants();
    let results = [
        (1, "worst-case guarantee", c1),
        (2, "tightness of 3", tight_example()),
        (3, "tree DP optimality", tree_dp()),
        (4, "gadget lemma suite", gadget_lemmas()),
        (5, "end-to-end reduction", end_to_end()),
        (6, "geodesic correctness", geodesics()),
        (7, "oracle soundness", oracle_soundness()),
        (8, "structural invariants", c8),
    ];
    let mut all = true;
    for (n, name, o) in &results {
        println!("{} criterion {n} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
