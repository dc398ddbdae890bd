//! Gadget properties checked with the exact oracle.
//!
//! Each check returns `holds = false` with a description when the oracle
//! disagrees, and an error (typically `Timeout`) when the search gives up.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::geodesic::Dispersion;
use crate::oracle::{enumerate_in, exact_max_dispersion, feasible_in, is_minimal, OracleBudget};

use super::{clause_gadget, connector_l, connector_z, duplicator_gadget, variable_gadget, GadgetBlueprint, TARGET};

pub const LEMMAS: [u8; 8] = [6, 7, 8, 9, 10, 11, 12, 13];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: u8,
    pub statement: &'static str,
    pub holds: bool,
    pub detail: String,
    pub elapsed: Duration,
}

const L5: Dispersion = Dispersion::Finite(TARGET);

fn feasible(bp: &GadgetBlueprint, covered: &[&str], budget: OracleBudget) -> Result<bool> {
    let inst = bp.glued_instance(covered)?;
    Ok(feasible_in(&inst, L5, budget)?.is_some())
}

/// Runs `cases` of (covered ports, expected feasibility) and collects mismatches.
fn expect_all(bp: &GadgetBlueprint, cases: &[(&[&str], bool)], budget: OracleBudget, detail: &mut Vec<String>) -> Result<bool> {
    let mut ok = true;
    for &(covered, want) in cases {
        let got = feasible(bp, covered, budget)?;
        detail.push(format!("{}[{}]={}", bp.kind.name(), covered.join("+"), if got { "feasible" } else { "infeasible" }));
        ok &= got == want;
    }
    Ok(ok)
}

fn clause_cases(arity: u8) -> Vec<(&'static [&'static str], bool)> {
    let mut cases: Vec<(&[&str], bool)> = vec![(&[], false), (&["a"], true), (&["b"], true)];
    if arity == 3 {
        cases.push((&["c"], true));
    }
    cases
}

pub fn check_lemma(lemma: u8, budget: OracleBudget) -> Result<LemmaReport> {
    let started = Instant::now();
    let mut detail = Vec::new();
    let (statement, holds) = match lemma {
        6 => {
            let v = variable_gadget();
            let best = exact_max_dispersion(&v.shape, &[], budget)?.best;
            detail.push(format!("l*={best}"));
            ("variable gadget has maximum dispersion 5", best == L5)
        }
        7 => {
            let v = variable_gadget();
            let inst = v.glued_instance(&["T", "F"])?;
            let sets = enumerate_in(&inst, L5, budget)?;
            let pre = v.covered_from_outside(&["T", "F"])?;
            let minimal = sets.iter().filter(|g| is_minimal(g, &v.shape, &pre)).count();
            detail.push(format!("sets={} minimal={minimal}", sets.len()));
            ("glued variable gadget has exactly two guard sets at 5", sets.len() == 2 && minimal == 2)
        }
        8 => {
            let mut ok = true;
            for arity in [2, 3] {
                ok &= expect_all(&clause_gadget(arity, 0)?, &[(&[], false)], budget, &mut detail)?;
            }
            ("clause gadgets alone admit no guard set at 5", ok)
        }
        9 => {
            let mut ok = true;
            for arity in [2, 3] {
                let cases: Vec<_> = clause_cases(arity).into_iter().filter(|c| !c.0.is_empty()).collect();
                ok &= expect_all(&clause_gadget(arity, 0)?, &cases, budget, &mut detail)?;
            }
            ("one literal covered from outside makes a clause feasible at 5", ok)
        }
        10 => {
            let mut ok = true;
            for arity in [2, 3] {
                for stretch in [1, 2] {
                    let bp = clause_gadget(arity, stretch)?;
                    detail.push(format!("stretch={stretch}"));
                    ok &= expect_all(&bp, &clause_cases(arity), budget, &mut detail)?;
                }
            }
            ("stretched clauses behave like unstretched ones", ok)
        }
        11 => {
            let cases: &[(&[&str], bool)] = &[(&["in"], true), (&["out1", "out2"], true), (&[], false)];
            let ok = expect_all(&duplicator_gadget(), cases, budget, &mut detail)?;
            ("duplicator outputs follow the input", ok)
        }
        12 => {
            let cases: &[(&[&str], bool)] = &[(&["out1"], false), (&["out2"], false)];
            let ok = expect_all(&duplicator_gadget(), cases, budget, &mut detail)?;
            ("one output covered from outside cannot flip the other", ok)
        }
        13 => {
            let cases: &[(&[&str], bool)] = &[(&["in"], true), (&["out"], true), (&[], false)];
            let mut ok = true;
            for bp in [connector_l(), connector_z()] {
                ok &= expect_all(&bp, cases, budget, &mut detail)?;
            }
            ("connectors cover exactly one of their ends from inside", ok)
        }
        _ => return Err(crate::Error::Invalid(format!("no gadget property numbered {lemma}"))),
    };
    Ok(LemmaReport { lemma, statement, holds, detail: detail.join(" "), elapsed: started.elapsed() })
}

pub fn lemma_suite(budget: OracleBudget) -> Vec<Result<LemmaReport>> {
    LEMMAS.iter().map(|&n| check_lemma(n, budget)).collect()
}
