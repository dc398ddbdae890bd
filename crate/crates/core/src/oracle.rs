//! Exact solvers for small instances by branch and bound.
//!
//! The search repeatedly picks the uncovered cell with the fewest admissible
//! guards and branches on those guards, best coverage gain first. A guard is
//! admissible while it is not chosen, not excluded by an earlier sibling
//! branch, and not closer than `ℓ` to a chosen guard. Distances come from a
//! precomputed vertex distance matrix.
//!
//! The feasibility search also
//! - splits the uncovered cells into groups that share no admissible guard
//!   and no conflicting pair, and solves the groups one after another;
//! - records for every failure the decision levels it depends on and jumps
//!   back over choices that played no part in it;
//! - remembers small failing combinations of chosen guards (nogoods) and
//!   skips any branch that would complete one.
//!
//! Composed gadget instances need all three: a local contradiction otherwise
//! gets re-derived under every combination of unrelated wire choices.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geodesic::{pairwise_distances, Dispersion};
use crate::poly::{Cell, LatticePoint, Polyomino};
use crate::verify::GuardSet;
use crate::visibility::sees_cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { node_limit: 200_000_000, time_limit: Duration::from_secs(600) }
    }
}

impl OracleBudget {
    pub fn nodes(node_limit: u64) -> Self {
        OracleBudget { node_limit, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    pub best: Dispersion,
    pub witness: GuardSet,
}

/// Vertex/cell incidence and distances shared by all searches on one shape.
pub struct Instance<'a> {
    poly: &'a Polyomino,
    verts: Vec<LatticePoint>,
    dist: Vec<u32>,
    sees: Vec<Vec<u32>>,
    coverers: Vec<Vec<u32>>,
    required: Vec<bool>,
}

impl<'a> Instance<'a> {
    pub fn new(poly: &'a Polyomino, pre_covered: &[Cell]) -> Result<Self> {
        Self::with_excluded(poly, pre_covered, &[])
    }

    /// Like `new`, with some vertices unavailable as guards (port corners of
    /// a gadget stop being vertices once the gadget is glued in place).
    pub fn with_excluded(poly: &'a Polyomino, pre_covered: &[Cell], excluded: &[LatticePoint]) -> Result<Self> {
        if let Some(&c) = pre_covered.iter().find(|&&c| !poly.contains(c)) {
            return Err(Error::OutsideShape(c));
        }
        let verts: Vec<LatticePoint> = poly.vertices().iter().copied().filter(|v| !excluded.contains(v)).collect();
        let dist = pairwise_distances(&verts, poly);
        let cells = poly.cells();
        let mut sees = vec![Vec::new(); verts.len()];
        let mut coverers = vec![Vec::new(); cells.len()];
        for (vi, &v) in verts.iter().enumerate() {
            for (ci, &c) in cells.iter().enumerate() {
                if sees_cell(poly, v, c) {
                    sees[vi].push(ci as u32);
                    coverers[ci].push(vi as u32);
                }
            }
        }
        let mut required = vec![true; cells.len()];
        for c in pre_covered {
            required[poly.cell_index(*c).unwrap()] = false;
        }
        Ok(Instance { poly, verts, dist, sees, coverers, required })
    }

    pub fn poly(&self) -> &Polyomino {
        self.poly
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.verts
    }

    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.verts.len() + b]
    }

    fn dispersion_of(&self, set: &[usize]) -> Dispersion {
        let mut best = Dispersion::Infinite;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                best = best.min(Dispersion::Finite(self.distance(a, b)));
            }
        }
        best
    }

    fn to_guards(&self, set: &[usize]) -> GuardSet {
        set.iter().map(|&i| self.verts[i]).collect()
    }

    /// Distinct positive pairwise distances, ascending.
    fn distance_values(&self) -> Vec<u32> {
        let mut vals: Vec<u32> = self.dist.iter().copied().filter(|&d| d > 0 && d != u32::MAX).collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    fn single_cover(&self) -> Option<usize> {
        let need: usize = self.required.iter().filter(|&&r| r).count();
        (0..self.verts.len()).find(|&v| self.sees[v].iter().filter(|&&c| self.required[c as usize]).count() == need)
    }

    fn required_cells(&self) -> Vec<u32> {
        (0..self.required.len() as u32).filter(|&c| self.required[c as usize]).collect()
    }

    fn searcher(&self, min_dist: u32, budget: OracleBudget) -> Search<'_, 'a> {
        Search::new(self, min_dist, budget)
    }
}

/// A set of decision levels (positions in the chosen stack).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Levels(Vec<u64>);

impl Levels {
    fn single(level: usize) -> Self {
        let mut l = Levels::default();
        l.insert(level);
        l
    }

    fn insert(&mut self, level: usize) {
        let w = level / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (level % 64);
    }

    fn remove(&mut self, level: usize) {
        if let Some(w) = self.0.get_mut(level / 64) {
            *w &= !(1 << (level % 64));
        }
    }

    fn contains(&self, level: usize) -> bool {
        self.0.get(level / 64).is_some_and(|w| w & (1 << (level % 64)) != 0)
    }

    fn below(&self, n: usize) -> bool {
        self.0.iter().enumerate().all(|(w, &bits)| bits == 0 || (w * 64 + 63 - bits.leading_zeros() as usize) < n)
    }

    fn union(&mut self, other: &Levels) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

/// Larger learned nogoods are rarely hit again and are not kept.
const MAX_NOGOOD: usize = 4;

enum Found {
    Yes,
    No(Levels),
}

enum Step {
    Chose(usize),
    Blocked(usize),
}

struct Search<'i, 'a> {
    inst: &'i Instance<'a>,
    trail: Vec<Step>,
    /// Why each blocked vertex is blocked; meaningful only while it is.
    reason: Vec<Levels>,
    /// Position in `chosen`, or `u32::MAX`.
    level_of: Vec<u32>,
    /// Learned sets of vertices that no feasible set contains together.
    nogoods: Vec<Vec<u32>>,
    nogood_index: HashSet<Vec<u32>>,
    watch: Vec<Vec<u32>>,
    conflicts: Vec<Vec<u32>>,
    covered_by: Vec<u32>,
    blocked: Vec<u32>,
    avail: Vec<u32>,
    uncovered: usize,
    chosen: Vec<usize>,
    nodes: u64,
    budget: OracleBudget,
    started: Instant,
}

impl<'i, 'a> Search<'i, 'a> {
    fn new(inst: &'i Instance<'a>, min_dist: u32, budget: OracleBudget) -> Self {
        let n = inst.verts.len();
        let conflicts = (0..n)
            .map(|v| (0..n).filter(|&u| inst.distance(v, u) < min_dist).map(|u| u as u32).collect())
            .collect();
        let avail = inst.coverers.iter().map(|c| c.len() as u32).collect();
        let uncovered = inst.required.iter().filter(|&&r| r).count();
        Search {
            inst,
            trail: Vec::new(),
            reason: vec![Levels::default(); n],
            level_of: vec![u32::MAX; n],
            nogoods: Vec::new(),
            nogood_index: HashSet::new(),
            watch: vec![Vec::new(); n],
            conflicts,
            covered_by: vec![0; inst.required.len()],
            blocked: vec![0; n],
            avail,
            uncovered,
            chosen: Vec::new(),
            nodes: 0,
            budget,
            started: Instant::now(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes & 1023 == 0 && self.started.elapsed() > self.budget.time_limit)
        {
            return Err(Error::Timeout { nodes: self.nodes, elapsed: self.started.elapsed() });
        }
        Ok(())
    }

    fn block(&mut self, v: usize) {
        self.blocked[v] += 1;
        if self.blocked[v] == 1 {
            for &c in &self.inst.sees[v] {
                self.avail[c as usize] -= 1;
            }
        }
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] -= 1;
        if self.blocked[v] == 0 {
            for &c in &self.inst.sees[v] {
                self.avail[c as usize] += 1;
            }
        }
    }

    fn choose(&mut self, v: usize) {
        self.level_of[v] = self.chosen.len() as u32;
        self.chosen.push(v);
        for &c in &self.inst.sees[v] {
            let c = c as usize;
            self.covered_by[c] += 1;
            if self.covered_by[c] == 1 && self.inst.required[c] {
                self.uncovered -= 1;
            }
        }
        for i in 0..self.conflicts[v].len() {
            let u = self.conflicts[v][i] as usize;
            self.block(u);
        }
    }

    fn unchoose(&mut self, v: usize) {
        for i in 0..self.conflicts[v].len() {
            let u = self.conflicts[v][i] as usize;
            self.unblock(u);
        }
        for &c in &self.inst.sees[v] {
            let c = c as usize;
            if self.covered_by[c] == 1 && self.inst.required[c] {
                self.uncovered += 1;
            }
            self.covered_by[c] -= 1;
        }
        let popped = self.chosen.pop();
        debug_assert_eq!(popped, Some(v));
        self.level_of[v] = u32::MAX;
    }

    /// Most constrained uncovered required cell, or `None` when all covered.
    fn pick_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for c in 0..self.covered_by.len() {
            if self.covered_by[c] == 0 && self.inst.required[c] {
                let a = self.avail[c];
                if best.is_none_or(|(b, _)| a < b) {
                    best = Some((a, c));
                    if a == 0 {
                        break;
                    }
                }
            }
        }
        best.map(|(_, c)| c)
    }

    fn candidates(&self, cell: usize) -> Vec<usize> {
        let mut cands: Vec<(usize, usize)> = self.inst.coverers[cell]
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| self.blocked[v] == 0)
            .map(|v| {
                let gain = self.inst.sees[v]
                    .iter()
                    .filter(|&&c| self.covered_by[c as usize] == 0 && self.inst.required[c as usize])
                    .count();
                (v, gain)
            })
            .collect();
        cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        cands.into_iter().map(|(v, _)| v).collect()
    }

    /// Depth-first search for a feasible completion of the uncovered cells
    /// in `scope`. Choices stay applied on success; on failure the state is
    /// restored and the result names the decision levels responsible, so
    /// callers can skip branches that had nothing to do with it.
    fn feasible(&mut self, scope: &[u32]) -> Result<Found> {
        self.tick()?;
        let open: Vec<u32> = scope.iter().copied().filter(|&c| self.covered_by[c as usize] == 0).collect();
        if open.is_empty() {
            return Ok(Found::Yes);
        }
        let mark = self.trail.len();
        let parts = self.components(&open);
        if parts.len() > 1 {
            let base = self.chosen.len();
            let mut failed = None;
            for part in parts {
                if let Found::No(why) = self.feasible(&part)? {
                    failed = Some(why);
                    break;
                }
            }
            let Some(why) = failed else {
                return Ok(Found::Yes);
            };
            self.rollback(mark);
            // A learned nogood can tie a later group to choices made for an
            // earlier one; then the groups are not independent after all and
            // the node is searched as a whole.
            if why.below(base) {
                return Ok(Found::No(why));
            }
        }
        let cell = open.iter().map(|&c| c as usize).min_by_key(|&c| self.avail[c]).unwrap();
        let mut why = Levels::default();
        for &u in &self.inst.coverers[cell] {
            if self.blocked[u as usize] != 0 {
                why.union(&self.reason[u as usize]);
            }
        }
        let level = self.chosen.len();
        for v in self.candidates(cell) {
            if let Some(banned) = self.completes_nogood(v) {
                why.union(&banned);
                continue;
            }
            let before = self.trail.len();
            for &u in &self.conflicts[v] {
                if self.blocked[u as usize] == 0 {
                    self.reason[u as usize] = Levels::single(level);
                }
            }
            self.choose(v);
            self.trail.push(Step::Chose(v));
            let Found::No(mut sub) = self.feasible(&open)? else {
                return Ok(Found::Yes);
            };
            self.rollback(before);
            if !sub.contains(level) {
                self.rollback(mark);
                return Ok(Found::No(sub));
            }
            sub.remove(level);
            why.union(&sub);
            self.reason[v] = sub;
            self.block(v);
            self.trail.push(Step::Blocked(v));
        }
        self.rollback(mark);
        self.learn(&why);
        Ok(Found::No(why))
    }

    /// Levels of the other members if choosing `v` would complete a nogood.
    fn completes_nogood(&self, v: usize) -> Option<Levels> {
        'next: for &id in &self.watch[v] {
            let mut levels = Levels::default();
            for &u in &self.nogoods[id as usize] {
                if u as usize == v {
                    continue;
                }
                match self.level_of[u as usize] {
                    u32::MAX => continue 'next,
                    l => levels.insert(l as usize),
                }
            }
            return Some(levels);
        }
        None
    }

    fn learn(&mut self, why: &Levels) {
        let mut set = Vec::new();
        for (w, &bits) in why.0.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                set.push(self.chosen[w * 64 + b.trailing_zeros() as usize] as u32);
                b &= b - 1;
                if set.len() > MAX_NOGOOD {
                    return;
                }
            }
        }
        set.sort_unstable();
        if set.is_empty() || !self.nogood_index.insert(set.clone()) {
            return;
        }
        let id = self.nogoods.len() as u32;
        for &u in &set {
            self.watch[u as usize].push(id);
        }
        self.nogoods.push(set);
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Step::Chose(v) => self.unchoose(v),
                Step::Blocked(v) => self.unblock(v),
            }
        }
    }

    /// Splits `open` into groups that cannot affect each other: no admissible
    /// guard covers cells of two groups, and admissible guards of different
    /// groups are at least `ℓ` apart. Smallest group first.
    fn components(&self, open: &[u32]) -> Vec<Vec<u32>> {
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut parent: Vec<usize> = (0..open.len()).collect();
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        let mut owner = vec![usize::MAX; self.blocked.len()];
        for (i, &c) in open.iter().enumerate() {
            for &v in &self.inst.coverers[c as usize] {
                let v = v as usize;
                if self.blocked[v] != 0 {
                    continue;
                }
                if owner[v] == usize::MAX {
                    owner[v] = i;
                } else {
                    union(&mut parent, i, owner[v]);
                }
            }
        }
        for v in 0..owner.len() {
            if owner[v] == usize::MAX {
                continue;
            }
            for &u in &self.conflicts[v] {
                let u = u as usize;
                if owner[u] != usize::MAX {
                    union(&mut parent, owner[v], owner[u]);
                }
            }
        }
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let mut slot = vec![usize::MAX; open.len()];
        for (i, &c) in open.iter().enumerate() {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(c);
        }
        groups.sort_by_key(Vec::len);
        groups
    }

    /// Every feasible set, each reported once.
    fn enumerate(&mut self, out: &mut Vec<Vec<usize>>, limit: usize) -> Result<()> {
        self.tick()?;
        let Some(cell) = self.pick_cell() else {
            // Covered: extend by any independent subset of the free vertices.
            let free: Vec<usize> = (0..self.blocked.len()).filter(|&v| self.blocked[v] == 0).collect();
            return self.extend(&free, 0, out, limit);
        };
        if self.avail[cell] == 0 {
            return Ok(());
        }
        let cands = self.candidates(cell);
        let mut excluded = Vec::new();
        for v in cands {
            self.choose(v);
            self.enumerate(out, limit)?;
            self.unchoose(v);
            self.block(v);
            excluded.push(v);
        }
        for v in excluded {
            self.unblock(v);
        }
        Ok(())
    }

    fn extend(&mut self, free: &[usize], from: usize, out: &mut Vec<Vec<usize>>, limit: usize) -> Result<()> {
        let mut set = self.chosen.clone();
        set.sort_unstable();
        out.push(set);
        if out.len() > limit {
            return Err(Error::Timeout { nodes: self.nodes, elapsed: self.started.elapsed() });
        }
        for i in from..free.len() {
            let v = free[i];
            if self.blocked[v] != 0 {
                continue;
            }
            self.tick()?;
            self.choose(v);
            self.extend(free, i + 1, out, limit)?;
            self.unchoose(v);
        }
        Ok(())
    }

    /// Lower bound on guards still needed: uncovered cells with pairwise
    /// disjoint admissible guard lists, picked greedily.
    fn packing_bound(&self) -> usize {
        let mut used = vec![false; self.blocked.len()];
        let mut count = 0;
        for c in 0..self.covered_by.len() {
            if self.covered_by[c] != 0 || !self.inst.required[c] {
                continue;
            }
            let gs: Vec<usize> =
                self.inst.coverers[c].iter().map(|&v| v as usize).filter(|&v| self.blocked[v] == 0).collect();
            if gs.iter().all(|&v| !used[v]) {
                count += 1;
                for v in gs {
                    used[v] = true;
                }
            }
        }
        count
    }

    fn minimize(&mut self, best: &mut Option<Vec<usize>>) -> Result<()> {
        self.tick()?;
        let Some(cell) = self.pick_cell() else {
            if best.as_ref().is_none_or(|b| self.chosen.len() < b.len()) {
                *best = Some(self.chosen.clone());
            }
            return Ok(());
        };
        if self.avail[cell] == 0 {
            return Ok(());
        }
        if let Some(b) = best {
            if self.chosen.len() + self.packing_bound().max(1) >= b.len() {
                return Ok(());
            }
        }
        let cands = self.candidates(cell);
        let mut excluded = Vec::new();
        for v in cands {
            self.choose(v);
            self.minimize(best)?;
            self.unchoose(v);
            self.block(v);
            excluded.push(v);
        }
        for v in excluded {
            self.unblock(v);
        }
        Ok(())
    }
}

/// Decides whether a guard set with pairwise distances at least `min_dist`
/// covers every cell outside `pre_covered`; returns a witness if so.
pub fn feasible_at(
    poly: &Polyomino,
    min_dist: Dispersion,
    pre_covered: &[Cell],
    budget: OracleBudget,
) -> Result<Option<GuardSet>> {
    let inst = Instance::new(poly, pre_covered)?;
    feasible_in(&inst, min_dist, budget)
}

pub fn feasible_in(inst: &Instance<'_>, min_dist: Dispersion, budget: OracleBudget) -> Result<Option<GuardSet>> {
    if inst.required.iter().all(|&r| !r) {
        return Ok(Some(GuardSet::default()));
    }
    match min_dist {
        Dispersion::Infinite => Ok(inst.single_cover().map(|v| inst.to_guards(&[v]))),
        Dispersion::Finite(d) => {
            let mut s = inst.searcher(d.max(1), budget);
            if let Found::Yes = s.feasible(&inst.required_cells())? {
                Ok(Some(inst.to_guards(&s.chosen)))
            } else {
                Ok(None)
            }
        }
    }
}

/// Maximum dispersion over all vertex guard sets covering the cells outside
/// `pre_covered`, with a witness.
pub fn exact_max_dispersion(poly: &Polyomino, pre_covered: &[Cell], budget: OracleBudget) -> Result<OracleSolution> {
    let inst = Instance::new(poly, pre_covered)?;
    exact_max_in(&inst, budget)
}

pub fn exact_max_in(inst: &Instance<'_>, budget: OracleBudget) -> Result<OracleSolution> {
    if inst.required.iter().all(|&r| !r) {
        return Ok(OracleSolution { best: Dispersion::Infinite, witness: GuardSet::default() });
    }
    if let Some(v) = inst.single_cover() {
        return Ok(OracleSolution { best: Dispersion::Infinite, witness: inst.to_guards(&[v]) });
    }
    let vals = inst.distance_values();
    let scope = inst.required_cells();
    let started = Instant::now();
    let remaining = |b: OracleBudget| OracleBudget {
        node_limit: b.node_limit,
        time_limit: b.time_limit.saturating_sub(started.elapsed()),
    };
    // Invariant: vals[lo] feasible (witness kept), vals[hi] infeasible.
    let mut witness = None;
    let (mut lo, mut hi) = (None::<usize>, vals.len());
    let mut a = 0usize;
    while a < hi {
        let mid = if lo.is_none() { a } else { (a + hi) / 2 };
        let mut s = inst.searcher(vals[mid], remaining(budget));
        if let Found::Yes = s.feasible(&scope)? {
            lo = Some(mid);
            witness = Some(s.chosen.clone());
            a = mid + 1;
        } else {
            if lo.is_none() {
                return Err(Error::Unguardable);
            }
            hi = mid;
        }
    }
    let set = witness.ok_or(Error::Unguardable)?;
    Ok(OracleSolution { best: inst.dispersion_of(&set), witness: inst.to_guards(&set) })
}

/// All guard sets (not only minimal ones) covering the cells outside
/// `pre_covered` with pairwise distances at least `min_dist`, sorted.
pub fn enumerate_guard_sets(
    poly: &Polyomino,
    min_dist: Dispersion,
    pre_covered: &[Cell],
    budget: OracleBudget,
) -> Result<Vec<GuardSet>> {
    let inst = Instance::new(poly, pre_covered)?;
    enumerate_in(&inst, min_dist, budget)
}

pub fn enumerate_in(inst: &Instance<'_>, min_dist: Dispersion, budget: OracleBudget) -> Result<Vec<GuardSet>> {
    let sets: Vec<Vec<usize>> = match min_dist {
        Dispersion::Infinite => {
            let mut out = Vec::new();
            if inst.required.iter().all(|&r| !r) {
                out.push(Vec::new());
            }
            let need: Vec<usize> = (0..inst.required.len()).filter(|&c| inst.required[c]).collect();
            for v in 0..inst.verts.len() {
                if need.iter().all(|&c| inst.sees[v].contains(&(c as u32))) {
                    out.push(vec![v]);
                }
            }
            out
        }
        Dispersion::Finite(d) => {
            let mut s = inst.searcher(d.max(1), budget);
            let mut out = Vec::new();
            s.enumerate(&mut out, 1_000_000)?;
            out
        }
    };
    let mut result: Vec<GuardSet> = sets.iter().map(|s| inst.to_guards(s)).collect();
    result.sort();
    result.dedup();
    Ok(result)
}

/// True when no guard can be dropped without losing coverage.
pub fn is_minimal(guards: &GuardSet, poly: &Polyomino, pre_covered: &[Cell]) -> bool {
    (0..guards.len()).all(|skip| {
        let rest: GuardSet =
            guards.points().iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &g)| g).collect();
        !crate::verify::uncovered_cells(&rest, poly, pre_covered).is_empty()
    })
}

/// Minimum-cardinality vertex guard set (distances ignored).
pub fn classic_min_guards(poly: &Polyomino, budget: OracleBudget) -> Result<GuardSet> {
    let inst = Instance::new(poly, &[])?;
    let mut s = inst.searcher(1, budget);
    let mut best = None;
    s.minimize(&mut best)?;
    best.map(|b| inst.to_guards(&b)).ok_or(Error::Unguardable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(x: i32, y: i32) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn square_is_seen_from_one_corner() {
        let sq = Polyomino::from_grid("##\n##").unwrap();
        let sol = exact_max_dispersion(&sq, &[], OracleBudget::default()).unwrap();
        assert_eq!(sol.best, Dispersion::Infinite);
        assert_eq!(sol.witness.len(), 1);
    }

    #[test]
    fn u_pentomino() {
        let u5 = Polyomino::from_grid("#.#\n###").unwrap();
        let sol = exact_max_dispersion(&u5, &[], OracleBudget::default()).unwrap();
        // The two arms need separate guards; the farthest admissible pair
        // sits on opposite outer corners.
        assert_eq!(sol.best, Dispersion::Finite(5));
        let sets = enumerate_guard_sets(&u5, Dispersion::Finite(5), &[], OracleBudget::default()).unwrap();
        assert!(sets.contains(&GuardSet::new([lp(0, 2), lp(3, 0)])) || sets.contains(&GuardSet::new([lp(0, 0), lp(3, 2)])));
    }

    #[test]
    fn classic() {
        let bar = Polyomino::from_grid("###").unwrap();
        assert_eq!(classic_min_guards(&bar, OracleBudget::default()).unwrap().len(), 1);
        let plus = Polyomino::from_grid(".#.\n###\n.#.").unwrap();
        assert_eq!(classic_min_guards(&plus, OracleBudget::default()).unwrap().len(), 1);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = crate::poly::random_simple(5, 60).unwrap();
        let r = exact_max_dispersion(&p, &[], OracleBudget::nodes(3));
        assert!(matches!(r, Err(Error::Timeout { .. })) || r.unwrap().best == Dispersion::Infinite);
    }
}
