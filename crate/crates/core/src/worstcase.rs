//! Recursive guard placement reaching dispersion at least 3 on simple
//! polyominoes.
//!
//! A step takes the current region `Q` and a guard `g` on its boundary,
//! removes everything `g` sees and splits the rest into sub-shapes `P_i`.
//! Each sub-shape is separated from the visible part by a gate. Gates are
//! oriented clockwise or counterclockwise from their order along the
//! clockwise boundary walk of `Q` starting at `g`, and the orientation picks
//! which side of a maximal rectangle behind the gate the next guard comes
//! from. The step then recurses on `P_i ∪ V(ḡ)` with `ḡ`.
//!
//! Visibility is always taken in the full polyomino. Since every cell seen by
//! `ḡ` lies in `V(ḡ)`, this agrees with visibility inside `P_i ∪ V(ḡ)`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesic::distance_field;
use crate::poly::{trace_cycles_with, Cell, LatticePoint, Orientation, Polyomino, Side};
use crate::verify::GuardSet;
use crate::visibility::visibility_mask;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOrientation {
    Clockwise,
    Counterclockwise,
}

impl fmt::Display for GateOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateOrientation::Clockwise => "cw",
            GateOrientation::Counterclockwise => "ccw",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Parallel,
    Orthogonal,
}

/// Interface between a sub-shape and the region seen by its parent guard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    /// Maximal straight pieces, each as (lower-left, upper-right) endpoints.
    pub segments: Vec<(LatticePoint, LatticePoint)>,
    /// Boundary sides just before and just after the sub-shape's stretch of
    /// the clockwise walk.
    pub walls: [Side; 2],
    pub kind: GateKind,
    pub orientation: Option<GateOrientation>,
    /// Where the clockwise walk enters and leaves the sub-shape.
    pub entry: LatticePoint,
    pub exit: LatticePoint,
    /// Cells of the sub-shape, sorted.
    pub subshape: Vec<Cell>,
    // Straight boundary runs of the sub-shape leaving `entry` and `exit`.
    entry_run: Vec<LatticePoint>,
    exit_run: Vec<LatticePoint>,
}

impl Gate {
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut pts = Vec::new();
        for &(a, b) in &self.segments {
            if a.y == b.y {
                pts.extend((a.x..=b.x).map(|x| LatticePoint::new(x, a.y)));
            } else {
                pts.extend((a.y..=b.y).map(|y| LatticePoint::new(a.x, y)));
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn endpoints(&self) -> Vec<LatticePoint> {
        let mut ends: Vec<LatticePoint> = self.segments.iter().flat_map(|&(a, b)| [a, b]).collect();
        ends.sort();
        // A junction appears twice; keep points occurring once.
        let mut out = Vec::new();
        let mut i = 0;
        while i < ends.len() {
            let mut j = i;
            while j < ends.len() && ends[j] == ends[i] {
                j += 1;
            }
            if j - i == 1 {
                out.push(ends[i]);
            }
            i = j;
        }
        out
    }

    pub fn shares_endpoint(&self, other: &Gate) -> bool {
        let mine = self.endpoints();
        other.endpoints().iter().any(|p| mine.contains(p))
    }

    fn contains_cell(&self, c: Cell) -> bool {
        self.subshape.binary_search(&c).is_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "segments": self.segments.iter().map(|(a, b)| json!([[a.x, a.y], [b.x, b.y]])).collect::<Vec<_>>(),
            "walls": self.walls.iter().map(|w| json!([[w.a.x, w.a.y], [w.b.x, w.b.y]])).collect::<Vec<_>>(),
            "kind": match self.kind { GateKind::Parallel => "parallel", GateKind::Orthogonal => "orthogonal" },
            "orientation": self.orientation.map(|o| o.to_string()),
            "cells": self.subshape.len(),
        })
    }
}

/// Result of removing `V(g)` from a region.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub gates: Vec<Gate>,
    pub alpha: usize,
    pub beta: usize,
    pub anomalies: Vec<String>,
}

/// One placed guard with the gate it was placed behind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionNode {
    pub guard: LatticePoint,
    pub gate_in: Option<Gate>,
    pub children: Vec<RecursionNode>,
}

impl RecursionNode {
    pub fn to_json(&self) -> Value {
        json!({
            "guard": [self.guard.x, self.guard.y],
            "gate": self.gate_in.as_ref().map(Gate::to_json),
            "children": self.children.iter().map(RecursionNode::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RecursionNode::size).sum::<usize>()
    }
}

/// Structural checks gathered during a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub checks: u64,
    pub failures: Vec<String>,
    /// Steps with two gates and both boundary counts above one.
    pub case_gaps: usize,
    /// Placements not produced by the rectangle rule.
    pub fallbacks: usize,
    pub anomalies: Vec<String>,
}

impl InvariantReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Debug)]
pub struct WorstCaseSolution {
    pub guards: GuardSet,
    pub trace: RecursionNode,
    pub report: InvariantReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub start: Option<LatticePoint>,
    pub check_invariants: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { start: None, check_invariants: cfg!(debug_assertions) }
    }
}

pub fn solve_worstcase(poly: &Polyomino, start: Option<LatticePoint>) -> Result<WorstCaseSolution> {
    solve_worstcase_with(poly, SolveOptions { start, ..Default::default() })
}

pub fn solve_worstcase_with(poly: &Polyomino, opts: SolveOptions) -> Result<WorstCaseSolution> {
    if !poly.is_simple() {
        return Err(Error::NotSimple);
    }
    let g0 = match opts.start {
        Some(p) if !poly.is_vertex(p) => return Err(Error::NotAVertex(p)),
        Some(p) => p,
        None => poly.vertices()[0],
    };
    let mut solver = Solver { poly, opts, guards: vec![g0], report: InvariantReport::default() };
    let all = vec![true; poly.len()];
    let trace = solver.step(&all, g0, None)?;
    let guards = solver.guards.iter().copied().collect();
    Ok(WorstCaseSolution { guards, trace, report: solver.report })
}

struct Solver<'a> {
    poly: &'a Polyomino,
    opts: SolveOptions,
    guards: Vec<LatticePoint>,
    report: InvariantReport,
}

impl Solver<'_> {
    fn step(&mut self, region: &[bool], g: LatticePoint, gate_in: Option<Gate>) -> Result<RecursionNode> {
        let mut node = RecursionNode { guard: g, gate_in, children: Vec::new() };
        let dec = match decompose_in(self.poly, region, g) {
            Ok(d) => d,
            Err(Error::FullyVisible) => return Ok(node),
            Err(e) => return Err(e),
        };
        self.report.anomalies.extend(dec.anomalies.iter().cloned());
        let turns = match orient_gates(&dec.gates, dec.alpha, dec.beta) {
            Ok(t) => t,
            Err(Error::CaseGap { .. }) => {
                self.report.case_gaps += 1;
                gap_orientation(&dec.gates)
            }
            Err(e) => return Err(e),
        };
        let mut gates = dec.gates;
        for (gate, t) in gates.iter_mut().zip(&turns) {
            gate.orientation = Some(*t);
        }
        if self.opts.check_invariants {
            for i in 0..gates.len() {
                for j in i + 1..gates.len() {
                    if gates[i].shares_endpoint(&gates[j]) {
                        let (a, b) = (&gates[i], &gates[j]);
                        self.report.check(a.orientation == b.orientation, || {
                            format!("guard {g}: gates {i} and {j} share an endpoint but differ in orientation")
                        });
                        let perpendicular = a.segments.len() == 1
                            && b.segments.len() == 1
                            && (a.segments[0].0.y == a.segments[0].1.y) != (b.segments[0].0.y == b.segments[0].1.y);
                        self.report.check(
                            a.kind == GateKind::Parallel && b.kind == GateKind::Parallel && perpendicular,
                            || format!("guard {g}: adjacent gates {i} and {j} are not perpendicular parallel gates"),
                        );
                    }
                }
            }
        }
        for gate in gates {
            let orientation = gate.orientation.unwrap();
            let placed = self.choose(&gate, orientation)?;
            let seen = visibility_mask(placed, self.poly);
            let before = gate.subshape.len();
            let mut child_region = vec![false; self.poly.len()];
            let mut remaining = 0;
            for &c in &gate.subshape {
                let i = self.poly.cell_index(c).unwrap();
                child_region[i] = true;
                if !seen[i] {
                    remaining += 1;
                }
            }
            if self.opts.check_invariants {
                self.check_placement(&gate, placed, &seen);
            }
            if remaining == before {
                return Err(Error::Invalid(format!("guard {placed} sees nothing behind its gate")));
            }
            for (i, s) in seen.iter().enumerate() {
                child_region[i] |= *s;
            }
            self.guards.push(placed);
            node.children.push(self.step(&child_region, placed, Some(gate))?);
        }
        Ok(node)
    }

    fn check_placement(&mut self, gate: &Gate, placed: LatticePoint, seen: &[bool]) {
        let pts = gate.points();
        let behind = placed.incident_cells().iter().any(|&c| gate.contains_cell(c));
        let field = distance_field(placed, self.poly);
        let to_gate = pts.iter().filter_map(|&p| field.get(p)).min().unwrap_or(0);
        self.report.check(behind && to_gate >= 1, || {
            format!("guard {placed} is not behind its gate (distance {to_gate})")
        });
        let adjacent: Vec<Cell> = gate
            .subshape
            .iter()
            .copied()
            .filter(|c| c.corners().iter().any(|p| pts.contains(p)))
            .collect();
        let missed: Vec<Cell> =
            adjacent.into_iter().filter(|&c| !seen[self.poly.cell_index(c).unwrap()]).collect();
        self.report.check(missed.is_empty(), || {
            format!("guard {placed} misses gate-adjacent cells {missed:?}")
        });
    }

    /// The next guard behind `gate`. Candidates come in widening tiers: the
    /// rectangle rule, any vertex on the rectangles behind the gate, any
    /// vertex of the sub-shape. Within the first tier that has one, a vertex
    /// seeing every cell touching the gate and lying at distance 3 or more
    /// from all placed guards wins; otherwise the first tier with a vertex
    /// seeing the gate cells.
    fn choose(&mut self, gate: &Gate, orientation: GateOrientation) -> Result<LatticePoint> {
        let pts = gate.points();
        let adjacent: Vec<usize> = gate
            .subshape
            .iter()
            .filter(|c| c.corners().iter().any(|p| pts.contains(p)))
            .map(|&c| self.poly.cell_index(c).unwrap())
            .collect();
        let mut inside: Vec<LatticePoint> = gate.subshape.iter().flat_map(|c| c.corners()).collect();
        inside.sort();
        inside.dedup();
        let tiers = [
            rule_candidates(self.poly, gate, orientation).unwrap_or_default(),
            rectangle_candidates(self.poly, gate),
            rank_by_gate_distance(self.poly, &pts, inside),
        ];
        let sees_gate_cells = |v: LatticePoint| {
            let seen = visibility_mask(v, self.poly);
            adjacent.iter().all(|&i| seen[i])
        };
        let far = |v: LatticePoint| {
            let field = distance_field(v, self.poly);
            self.guards.iter().all(|&h| field.get(h).is_some_and(|d| d >= 3))
        };
        let mut fallback = None;
        for (tier, cands) in tiers.iter().enumerate() {
            for &v in cands {
                if !sees_gate_cells(v) {
                    continue;
                }
                if far(v) {
                    if tier > 0 {
                        self.report.fallbacks += 1;
                    }
                    return Ok(v);
                }
                fallback.get_or_insert((tier, v));
            }
        }
        if let Some((_, v)) = fallback {
            self.report.fallbacks += 1;
            self.report.anomalies.push(format!("guard {v} placed within distance 3 of an earlier guard"));
            return Ok(v);
        }
        // No vertex sees all cells at the gate: take the one seeing most.
        self.report.fallbacks += 1;
        self.report.anomalies.push(format!("no vertex sees the whole gate at {}", gate.entry));
        let best = tiers[2]
            .iter()
            .copied()
            .max_by_key(|&v| {
                let seen = visibility_mask(v, self.poly);
                (gate.subshape.iter().filter(|&&c| seen[self.poly.cell_index(c).unwrap()]).count(), std::cmp::Reverse(v))
            })
            .ok_or_else(|| Error::Invalid("sub-shape without usable vertex".into()))?;
        Ok(best)
    }
}

/// Inside cell of a directed boundary side (the region lies to its right).
fn inner_cell(p: LatticePoint, q: LatticePoint) -> Cell {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    Cell::new(p.x.min(q.x) + if dy < 0 { -1 } else { 0 }, p.y.min(q.y) + if dx > 0 { -1 } else { 0 })
}

/// Splits `P \ V(g)` (the whole polyomino as region).
pub fn decompose(poly: &Polyomino, g: LatticePoint) -> Result<Decomposition> {
    decompose_in(poly, &vec![true; poly.len()], g)
}

/// Splits `region \ V(g)` into sub-shapes with their gates, ordered along the
/// clockwise walk of the region's outer boundary starting at `g`.
pub fn decompose_in(poly: &Polyomino, region: &[bool], g: LatticePoint) -> Result<Decomposition> {
    let cells = poly.cells();
    let seen = visibility_mask(g, poly);
    let idx = |c: Cell| poly.cell_index(c);
    // Component label per cell of the region outside V(g).
    const VISIBLE: usize = usize::MAX;
    const OUTSIDE: usize = usize::MAX - 1;
    let mut label = vec![OUTSIDE; cells.len()];
    for i in 0..cells.len() {
        if region[i] && seen[i] {
            label[i] = VISIBLE;
        }
    }
    let mut comps: Vec<Vec<Cell>> = Vec::new();
    for i in 0..cells.len() {
        if region[i] && !seen[i] && label[i] == OUTSIDE {
            let id = comps.len();
            let mut comp = vec![cells[i]];
            label[i] = id;
            let mut k = 0;
            while k < comp.len() {
                for n in comp[k].neighbors() {
                    if let Some(j) = idx(n) {
                        if region[j] && !seen[j] && label[j] == OUTSIDE {
                            label[j] = id;
                            comp.push(n);
                        }
                    }
                }
                k += 1;
            }
            comps.push(comp);
        }
    }
    if comps.is_empty() {
        return Err(Error::FullyVisible);
    }
    let mut anomalies = Vec::new();

    let region_cells: Vec<Cell> = (0..cells.len()).filter(|&i| region[i]).map(|i| cells[i]).collect();
    let in_region = |c: Cell| idx(c).is_some_and(|i| region[i]);
    let cycles = trace_cycles_with(&region_cells, in_region, false);
    let cycle = cycles
        .iter()
        .find(|c| c.outer && c.points.contains(&g))
        .or_else(|| cycles.iter().find(|c| c.points.contains(&g)))
        .ok_or_else(|| Error::Invalid(format!("guard {g} is not on the region boundary")))?;
    if cycles.len() > 1 {
        anomalies.push(format!("guard {g}: region has {} boundary cycles", cycles.len()));
    }
    let mut walk = cycle.points.clone();
    let s = walk.iter().position(|&p| p == g).unwrap();
    walk.rotate_left(s);
    let n = walk.len();
    let side_label: Vec<usize> = (0..n)
        .map(|i| {
            let c = inner_cell(walk[i], walk[(i + 1) % n]);
            idx(c).map_or(OUTSIDE, |j| label[j])
        })
        .collect();

    // First and last side of each component along the walk.
    let mut first = vec![usize::MAX; comps.len()];
    let mut last = vec![0usize; comps.len()];
    let mut order = Vec::new();
    for (i, &l) in side_label.iter().enumerate() {
        if l < comps.len() {
            if first[l] == usize::MAX {
                first[l] = i;
                order.push(l);
            }
            last[l] = i;
        }
    }
    for l in 0..comps.len() {
        if first[l] == usize::MAX {
            anomalies.push(format!("guard {g}: sub-shape of {} cells does not touch the boundary", comps[l].len()));
        } else if side_label[first[l]..=last[l]].iter().any(|&x| x != l) {
            anomalies.push(format!("guard {g}: sub-shape stretch is interrupted"));
        }
    }
    let straight_run = |from: usize, step: isize| -> Vec<LatticePoint> {
        // Points along the walk from index `from` while the direction holds.
        let at = |k: isize| walk[k.rem_euclid(n as isize) as usize];
        let start = from as isize;
        let dir = (at(start + step).x - at(start).x, at(start + step).y - at(start).y);
        let mut run = vec![at(start)];
        let mut k = start;
        loop {
            let (a, b) = (at(k), at(k + step));
            if (b.x - a.x, b.y - a.y) != dir || run.len() > n {
                break;
            }
            run.push(b);
            k += step;
        }
        run
    };

    let mut gates = Vec::new();
    for &l in &order {
        let mut sub = comps[l].clone();
        sub.sort();
        let segments = gate_segments(poly, &sub, &label, l);
        let (f, e) = (first[l], last[l]);
        let entry = walk[f];
        let exit = walk[(e + 1) % n];
        let before = Side::new(walk[(f + n - 1) % n], walk[f]);
        let after = Side::new(walk[(e + 1) % n], walk[(e + 2) % n]);
        let kind =
            if before.orientation() == after.orientation() { GateKind::Parallel } else { GateKind::Orthogonal };
        let entry_run = straight_run(f, 1);
        let exit_run = straight_run(e + 1, -1);
        gates.push(Gate {
            segments,
            walls: [before, after],
            kind,
            orientation: None,
            entry,
            exit,
            subshape: sub,
            entry_run,
            exit_run,
        });
    }
    for l in 0..comps.len() {
        if first[l] == usize::MAX {
            let mut sub = comps[l].clone();
            sub.sort();
            let segments = gate_segments(poly, &sub, &label, l);
            let (a, b) = segments.first().copied().unwrap_or((g, g));
            gates.push(Gate {
                segments,
                walls: [Side::new(a, LatticePoint::new(a.x + 1, a.y)); 2],
                kind: GateKind::Parallel,
                orientation: None,
                entry: a,
                exit: b,
                subshape: sub,
                entry_run: vec![a],
                exit_run: vec![b],
            });
        }
    }
    let alpha = order.first().map_or(0, |&l| first[l]);
    let beta = order.last().map_or(0, |&l| n - last[l] - 1);
    Ok(Decomposition { gates, alpha, beta, anomalies })
}

/// Sides between a component and visible region cells, merged into
/// maximal straight segments.
fn gate_segments(poly: &Polyomino, sub: &[Cell], label: &[usize], l: usize) -> Vec<(LatticePoint, LatticePoint)> {
    let mut sides = Vec::new();
    for &c in sub {
        for n in c.neighbors() {
            if let Some(j) = poly.cell_index(n) {
                if label[j] == usize::MAX {
                    sides.push(Side::between(c, n));
                }
            }
        }
    }
    let _ = l;
    let mut h: Vec<(i32, i32)> = Vec::new();
    let mut v: Vec<(i32, i32)> = Vec::new();
    for s in sides {
        match s.orientation() {
            Orientation::Horizontal => h.push((s.a.y, s.a.x)),
            Orientation::Vertical => v.push((s.a.x, s.a.y)),
        }
    }
    h.sort();
    v.sort();
    let mut segs = Vec::new();
    let merge = |list: &[(i32, i32)], horizontal: bool, segs: &mut Vec<(LatticePoint, LatticePoint)>| {
        let mut i = 0;
        while i < list.len() {
            let (line, from) = list[i];
            let mut to = from + 1;
            let mut j = i + 1;
            while j < list.len() && list[j] == (line, to) {
                to += 1;
                j += 1;
            }
            if horizontal {
                segs.push((LatticePoint::new(from, line), LatticePoint::new(to, line)));
            } else {
                segs.push((LatticePoint::new(line, from), LatticePoint::new(line, to)));
            }
            i = j;
        }
    };
    merge(&h, true, &mut segs);
    merge(&v, false, &mut segs);
    segs
}

/// Orientation per gate from the gate count, the boundary counts and which
/// consecutive gates touch.
pub fn orient_gates(gates: &[Gate], alpha: usize, beta: usize) -> Result<Vec<GateOrientation>> {
    let adjacent: Vec<bool> = gates.windows(2).map(|w| w[0].shares_endpoint(&w[1])).collect();
    orient_pattern(gates.len(), &adjacent, alpha, beta)
}

/// Orientation for two gates when neither touches the start guard's
/// boundary neighbourhood: the many-gate rule, so touching gates agree.
pub fn gap_orientation(gates: &[Gate]) -> Vec<GateOrientation> {
    let adjacent: Vec<bool> = gates.windows(2).map(|w| w[0].shares_endpoint(&w[1])).collect();
    split_at_first_gap(gates.len(), &adjacent)
}

fn split_at_first_gap(k: usize, adjacent: &[bool]) -> Vec<GateOrientation> {
    let split = (0..k.saturating_sub(1)).find(|&i| !adjacent[i]).map_or(k, |i| i + 1);
    (0..k)
        .map(|i| if i < split { GateOrientation::Clockwise } else { GateOrientation::Counterclockwise })
        .collect()
}

/// `adjacent[i]` tells whether gate `i` shares an endpoint with gate `i + 1`.
pub fn orient_pattern(k: usize, adjacent: &[bool], alpha: usize, beta: usize) -> Result<Vec<GateOrientation>> {
    use GateOrientation::*;
    Ok(match k {
        0 => Vec::new(),
        1 if alpha == 1 => vec![Clockwise],
        1 => vec![Counterclockwise],
        2 => match (alpha == 1, beta == 1) {
            (true, true) => vec![Clockwise, Counterclockwise],
            (true, false) => vec![Clockwise, Clockwise],
            (false, true) => vec![Counterclockwise, Counterclockwise],
            (false, false) => return Err(Error::CaseGap { alpha, beta }),
        },
        _ => split_at_first_gap(k, adjacent),
    })
}

/// Rotation by `r` quarter turns counterclockwise.
#[derive(Clone, Copy, Debug)]
struct Frame(u8);

impl Frame {
    fn rot(v: (i32, i32), r: u8) -> (i32, i32) {
        let (mut x, mut y) = v;
        for _ in 0..r % 4 {
            (x, y) = (-y, x);
        }
        (x, y)
    }

    /// Frame mapping direction `d` onto `target`.
    fn taking(d: (i32, i32), target: (i32, i32)) -> Frame {
        (0..4).map(Frame).find(|f| Frame::rot(d, f.0) == target).unwrap()
    }

    fn turned(self) -> Frame {
        Frame((self.0 + 1) % 4)
    }

    fn pt(self, p: LatticePoint) -> (i32, i32) {
        Frame::rot((p.x, p.y), self.0)
    }

    fn world(self, p: (i32, i32)) -> LatticePoint {
        let (x, y) = Frame::rot(p, 4 - self.0 % 4);
        LatticePoint::new(x, y)
    }

    fn world_cell(self, x: i32, y: i32) -> Cell {
        let (cx, cy) = Frame::rot((2 * x + 1, 2 * y + 1), 4 - self.0 % 4);
        Cell::new((cx - 1).div_euclid(2), (cy - 1).div_euclid(2))
    }
}

const UP: (i32, i32) = (0, 1);
const LEFT: (i32, i32) = (-1, 0);

/// Direction from a gate segment into the sub-shape.
fn into_subshape(gate: &Gate, seg: (LatticePoint, LatticePoint)) -> (i32, i32) {
    let (a, _) = seg;
    let probe = Side::new(a, if seg.0.y == seg.1.y { LatticePoint::new(a.x + 1, a.y) } else { LatticePoint::new(a.x, a.y + 1) });
    let [c, d] = probe.cells();
    let inside = if gate.contains_cell(c) { c } else { d };
    let other = if inside == c { d } else { c };
    (inside.x - other.x, inside.y - other.y)
}

/// Frame segment `(from, to)` on a horizontal or vertical frame line, ascending.
fn frame_segment(f: Frame, seg: (LatticePoint, LatticePoint)) -> ((i32, i32), (i32, i32)) {
    let (a, b) = (f.pt(seg.0), f.pt(seg.1));
    if a <= b { (a, b) } else { (b, a) }
}

/// Height of the maximal rectangle of sub-shape cells above frame row `y`
/// spanning columns `x0..x1`.
fn grow_up(gate: &Gate, f: Frame, x0: i32, x1: i32, y: i32) -> i32 {
    let mut h = 0;
    while (x0..x1).all(|x| gate.contains_cell(f.world_cell(x, y + h))) {
        h += 1;
    }
    h
}

/// Width of the maximal rectangle of sub-shape cells left of frame column
/// `x` spanning rows `y0..y1`.
fn grow_left(gate: &Gate, f: Frame, y0: i32, y1: i32, x: i32) -> i32 {
    let mut w = 0;
    while (y0..y1).all(|y| gate.contains_cell(f.world_cell(x - 1 - w, y))) {
        w += 1;
    }
    w
}

/// The next guard behind `gate`: a vertex on the maximal rectangle behind the
/// gate, on the side the orientation allows, farthest from the gate.
pub fn place_next_guard(poly: &Polyomino, gate: &Gate, orientation: GateOrientation) -> Result<LatticePoint> {
    rule_candidates(poly, gate, orientation)?
        .first()
        .copied()
        .ok_or_else(|| Error::Invalid("no admissible vertex".into()))
}

/// Vertices admitted by the rectangle rule, best first: farthest from the
/// gate, then lexicographically smallest.
pub fn rule_candidates(poly: &Polyomino, gate: &Gate, orientation: GateOrientation) -> Result<Vec<LatticePoint>> {
    use GateOrientation::*;
    let gate_pts = gate.points();
    let mut cands: Vec<LatticePoint> = Vec::new();
    let segs = &gate.segments;
    match (gate.kind, segs.len()) {
        (GateKind::Parallel, 1) => {
            let f = Frame::taking(into_subshape(gate, segs[0]), UP);
            let ((x0, y), (x1, _)) = frame_segment(f, segs[0]);
            let h = grow_up(gate, f, x0, x1, y);
            let top = y + h;
            cands.extend((x0..=x1).map(|x| f.world((x, top))));
            let keep = if orientation == Clockwise { x1 } else { x0 };
            cands.extend((y + 1..top).map(|yy| f.world((keep, yy))));
            if orientation == Clockwise {
                cands.retain(|&p| f.pt(p).0 != x0);
            } else {
                cands.retain(|&p| f.pt(p).0 != x1);
            }
        }
        (GateKind::Orthogonal, 2) => {
            let (hs, vs) = if segs[0].0.y == segs[0].1.y { (segs[0], segs[1]) } else { (segs[1], segs[0]) };
            let (dh, dv) = (into_subshape(gate, hs), into_subshape(gate, vs));
            let cross = dh.0 * dv.1 - dh.1 * dv.0;
            let (t, l, f) = if cross > 0 {
                (hs, vs, Frame::taking(dh, UP))
            } else {
                (vs, hs, Frame::taking(dv, UP))
            };
            debug_assert_eq!(Frame::rot(into_subshape(gate, l), f.0), LEFT);
            match orientation {
                Clockwise => {
                    let ((x0, y), (x1, _)) = frame_segment(f, t);
                    let top = y + grow_up(gate, f, x0, x1, y);
                    cands.extend((x0..=x1).map(|x| f.world((x, top))));
                }
                Counterclockwise => {
                    let ((x, y0), (_, y1)) = frame_segment(f, l);
                    let left = x - grow_left(gate, f, y0, y1, x);
                    cands.extend((y0..=y1).map(|y| f.world((left, y))));
                }
            }
        }
        (GateKind::Orthogonal, 1) => {
            let seg = segs[0];
            let d = into_subshape(gate, seg);
            // The wall parallel to the segment sits at one endpoint.
            let collinear = gate
                .walls
                .iter()
                .find(|w| (w.a.y == w.b.y) == (seg.0.y == seg.1.y))
                .map(|w| if w.a == seg.0 || w.b == seg.0 { seg.0 } else { seg.1 })
                .unwrap_or(seg.1);
            let mut f = Frame::taking(d, UP);
            let ((x0, y), (x1, _)) = frame_segment(f, seg);
            if f.pt(collinear) == (x1, y) {
                // Horizontal frame, collinear wall on the right.
                match orientation {
                    Clockwise => {
                        let top = y + grow_up(gate, f, x0, x1, y);
                        cands.extend((x0..=x1).map(|x| f.world((x, top))));
                    }
                    Counterclockwise => cands.extend(run_vertex(poly, gate, f.world((x0, y)))),
                }
            } else {
                f = f.turned();
                let ((x, y0), (_, y1)) = frame_segment(f, seg);
                debug_assert_eq!(f.pt(collinear), (x, y0));
                match orientation {
                    Clockwise => cands.extend(run_vertex(poly, gate, f.world((x, y1)))),
                    Counterclockwise => {
                        let left = x - grow_left(gate, f, y0, y1, x);
                        cands.extend((y0..=y1).map(|yy| f.world((left, yy))));
                    }
                }
            }
        }
        _ => return Err(Error::Invalid(format!("gate with {} segments", segs.len()))),
    }
    Ok(rank_by_gate_distance(poly, &gate_pts, cands))
}

/// Keeps vertices off the gate, ordered by decreasing distance to the gate
/// and then lexicographically.
fn rank_by_gate_distance(poly: &Polyomino, gate_pts: &[LatticePoint], mut cands: Vec<LatticePoint>) -> Vec<LatticePoint> {
    cands.retain(|p| poly.is_vertex(*p) && !gate_pts.contains(p));
    cands.sort();
    cands.dedup();
    let mut keyed: Vec<(u32, LatticePoint)> = cands
        .into_iter()
        .map(|p| {
            let field = distance_field(p, poly);
            (gate_pts.iter().filter_map(|&q| field.get(q)).min().unwrap_or(0), p)
        })
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// Vertices on the boundary of the maximal rectangle behind each gate
/// segment, any side.
fn rectangle_candidates(poly: &Polyomino, gate: &Gate) -> Vec<LatticePoint> {
    let mut cands = Vec::new();
    for &seg in &gate.segments {
        let f = Frame::taking(into_subshape(gate, seg), UP);
        let ((x0, y), (x1, _)) = frame_segment(f, seg);
        let top = y + grow_up(gate, f, x0, x1, y);
        cands.extend((x0..=x1).map(|x| f.world((x, top))));
        for yy in y + 1..top {
            cands.push(f.world((x0, yy)));
            cands.push(f.world((x1, yy)));
        }
    }
    rank_by_gate_distance(poly, &gate.points(), cands)
}

/// First polyomino vertex along the straight boundary run of the sub-shape
/// leaving gate endpoint `end`.
fn run_vertex(poly: &Polyomino, gate: &Gate, end: LatticePoint) -> Option<LatticePoint> {
    let run = if gate.entry == end {
        &gate.entry_run
    } else if gate.exit == end {
        &gate.exit_run
    } else {
        return None;
    };
    run.iter().skip(1).copied().find(|&p| poly.is_vertex(p))
}
