//! Seeded batch runs over random polyominoes. Items are processed in
//! parallel when the `parallel` feature is on; results keep input order.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::geodesic::Dispersion;
use crate::oracle::{exact_max_dispersion, OracleBudget};
use crate::par::maybe_par_map;
use crate::poly::{random_simple, random_tree};
use crate::treedp::solve_tree;
use crate::verify::verify;
use crate::worstcase::{solve_worstcase_with, SolveOptions};

/// `(seed, cell count)` pairs: seeds `0..count`, sizes cycling through `20..=200`.
pub fn simple_suite(count: u64) -> Vec<(u64, usize)> {
    (0..count).map(|seed| (seed, 20 + (seed % 181) as usize)).collect()
}

/// `(seed, cell count)` pairs: seeds `0..count`, sizes spread over `2..=40`.
pub fn tree_suite(count: u64) -> Vec<(u64, usize)> {
    (0..count).map(|seed| (seed, 2 + (seed as usize * 7) % 39)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCaseRun {
    pub seed: u64,
    pub cells: usize,
    pub guards: usize,
    pub dispersion: Dispersion,
    /// Verified at distance 3 (or a single covering guard).
    pub ok: bool,
    pub invariant_checks: u64,
    pub invariant_failures: Vec<String>,
    pub elapsed: Duration,
}

pub fn worstcase_batch(items: &[(u64, usize)], check_invariants: bool) -> Vec<Result<WorstCaseRun>> {
    maybe_par_map(items, |&(seed, cells)| {
        let started = Instant::now();
        let poly = random_simple(seed, cells)?;
        let sol = solve_worstcase_with(&poly, SolveOptions { start: None, check_invariants })?;
        let report = verify(&sol.guards, &poly, Dispersion::Finite(3), &[])?;
        Ok(WorstCaseRun {
            seed,
            cells,
            guards: sol.guards.len(),
            dispersion: report.dispersion,
            ok: report.ok,
            invariant_checks: sol.report.checks,
            invariant_failures: sol.report.failures,
            elapsed: started.elapsed(),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRun {
    pub seed: u64,
    pub cells: usize,
    pub dp: Dispersion,
    pub oracle: Dispersion,
    /// The DP witness verifies at its own value.
    pub witness_ok: bool,
    pub dp_time: Duration,
    pub oracle_time: Duration,
}

impl TreeRun {
    pub fn agrees(&self) -> bool {
        self.dp == self.oracle && self.witness_ok
    }
}

pub fn tree_batch(items: &[(u64, usize)], budget: OracleBudget) -> Vec<Result<TreeRun>> {
    maybe_par_map(items, |&(seed, cells)| {
        let poly = random_tree(seed, cells)?;
        let t = Instant::now();
        let (dp, witness) = solve_tree(&poly)?;
        let dp_time = t.elapsed();
        let t = Instant::now();
        let oracle = exact_max_dispersion(&poly, &[], budget)?.best;
        let oracle_time = t.elapsed();
        let witness_ok = verify(&witness, &poly, dp, &[])?.ok;
        Ok(TreeRun { seed, cells, dp, oracle, witness_ok, dp_time, oracle_time })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites() {
        let s = simple_suite(200);
        assert_eq!(s.len(), 200);
        assert!(s.iter().all(|&(_, n)| (20..=200).contains(&n)));
        assert_eq!(s.iter().map(|p| p.1).max(), Some(200));
        assert!(tree_suite(100).iter().all(|&(_, n)| (2..=40).contains(&n)));
    }

    #[test]
    fn small_batches() {
        let runs = worstcase_batch(&simple_suite(6), true);
        assert!(runs.iter().all(|r| r.as_ref().is_ok_and(|r| r.ok && r.invariant_failures.is_empty())));
        let trees = tree_batch(&tree_suite(10), OracleBudget::default());
        assert!(trees.iter().all(|r| r.as_ref().is_ok_and(TreeRun::agrees)));
    }
}
