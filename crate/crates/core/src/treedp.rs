//! Exact maximum dispersion for tree-shaped polyominoes.
//!
//! A tree-shaped polyomino without pinch points splits at every dual edge:
//! the closures of the two sides meet in exactly the shared unit side, so
//! every path between them passes through one of its endpoints `p1`, `p2`.
//! Coverage is also local. In a thin polyomino a vertex sees a cell exactly
//! when it lies on the closure of the cell's horizontal or vertical strip
//! (maximal straight run of cells), and only the strip crossing the edge
//! reaches both sides.
//!
//! For a fixed `ℓ` the program runs bottom-up over the dual tree. Each edge
//! has states made of:
//! - the guards chosen at `p1` and `p2`;
//! - the distances from `p1` and `p2` to the nearest guard below the edge,
//!   capped at `ℓ` (no guard counts as `ℓ`);
//! - the status of the crossing strip: already guarded, demanded by an
//!   uncovered cell below, or free.
//!
//! Only the largest distances are kept per (guards, strip, order), where
//! order is the difference of the two distances. The root decides
//! feasibility, and a binary search on `ℓ` gives the optimum.
//!
//! The maximal rectangles, their partition and the borders between pieces
//! are exposed for inspection; the program itself runs on cells, and the
//! states of an inner border are the states of the dual edge it lies on.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::geodesic::{dispersion_distance, Dispersion};
use crate::poly::{Cell, LatticePoint, Polyomino, Side};
use crate::verify::GuardSet;
use crate::visibility::visibility_mask;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BorderKind {
    Inner,
    Outer,
}

/// A unit side separating two rectangle pieces (inner) or closing a
/// rectangle on the boundary (outer). `p1` precedes `p2` along the clockwise
/// outer boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Border {
    pub p1: LatticePoint,
    pub p2: LatticePoint,
    pub kind: BorderKind,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderSet {
    /// Maximal rectangles as (first cell, last cell) of a straight run.
    pub rectangles: Vec<(Cell, Cell)>,
    /// The partition cut out by overlapping rectangles, each piece sorted.
    pub pieces: Vec<Vec<Cell>>,
    pub borders: Vec<Border>,
}

impl BorderSet {
    pub fn inner(&self) -> impl Iterator<Item = &Border> {
        self.borders.iter().filter(|b| b.kind == BorderKind::Inner)
    }

    pub fn outer(&self) -> impl Iterator<Item = &Border> {
        self.borders.iter().filter(|b| b.kind == BorderKind::Outer)
    }
}

/// Borders rooted at `root_cell`; `parent[i]` is the next border on the way
/// from border `i` to the root cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderTree {
    pub root_cell: Cell,
    pub borders: Vec<Border>,
    pub parent: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StripStatus {
    Free,
    Demand,
    Guarded,
}

impl fmt::Display for StripStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StripStatus::Free => "free",
            StripStatus::Demand => "demand",
            StripStatus::Guarded => "guarded",
        })
    }
}

/// A state on an edge, read from the side away from the root. `score` is
/// the smaller of the two capped distances and `order` is `d1 - d2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPState {
    pub order: i8,
    pub chosen: Vec<LatticePoint>,
    pub strip: StripStatus,
    pub score: u32,
}

fn check_tree(poly: &Polyomino) -> Result<()> {
    let class = poly.classify();
    if !class.tree_shaped {
        return Err(Error::NotTreeShaped("dual graph has a cycle or a 2x2 block"));
    }
    if !class.simple {
        return Err(Error::NotTreeShaped("pinch point"));
    }
    Ok(())
}

/// Horizontal and vertical run id per cell, with the runs.
struct Strips {
    h: Vec<usize>,
    v: Vec<usize>,
    runs: Vec<Vec<Cell>>,
}

fn strips(poly: &Polyomino) -> Strips {
    let cells = poly.cells();
    let mut h = vec![usize::MAX; cells.len()];
    let mut v = vec![usize::MAX; cells.len()];
    let mut runs = Vec::new();
    for (i, &c) in cells.iter().enumerate() {
        if h[i] == usize::MAX {
            let mut x = c.x;
            while poly.contains(Cell::new(x - 1, c.y)) {
                x -= 1;
            }
            let mut run = Vec::new();
            while poly.contains(Cell::new(x, c.y)) {
                let d = Cell::new(x, c.y);
                h[poly.cell_index(d).unwrap()] = runs.len();
                run.push(d);
                x += 1;
            }
            runs.push(run);
        }
        if v[i] == usize::MAX {
            let mut y = c.y;
            while poly.contains(Cell::new(c.x, y - 1)) {
                y -= 1;
            }
            let mut run = Vec::new();
            while poly.contains(Cell::new(c.x, y)) {
                let d = Cell::new(c.x, y);
                v[poly.cell_index(d).unwrap()] = runs.len();
                run.push(d);
                y += 1;
            }
            runs.push(run);
        }
    }
    Strips { h, v, runs }
}

fn order_on_boundary(poly: &Polyomino, a: LatticePoint, b: LatticePoint) -> (LatticePoint, LatticePoint) {
    let pos = |p: LatticePoint| poly.outer_cycle().points.iter().position(|&q| q == p).unwrap_or(usize::MAX);
    if (pos(a), a) <= (pos(b), b) {
        (a, b)
    } else {
        (b, a)
    }
}

fn border(poly: &Polyomino, side: Side, kind: BorderKind) -> Border {
    let (p1, p2) = order_on_boundary(poly, side.a, side.b);
    Border { p1, p2, kind, side }
}

/// Piece id per cell, the pieces and the maximal rectangles.
fn partition(poly: &Polyomino, st: &Strips) -> (Vec<usize>, Vec<Vec<Cell>>, Vec<(Cell, Cell)>) {
    let cells = poly.cells();
    let long = |r: usize| st.runs[r].len() >= 2;
    let mut rectangles: Vec<(Cell, Cell)> =
        st.runs.iter().filter(|r| r.len() >= 2).map(|r| (r[0], *r.last().unwrap())).collect();
    if cells.len() == 1 {
        rectangles.push((cells[0], cells[0]));
    }
    rectangles.sort();
    let mut piece = vec![usize::MAX; cells.len()];
    let mut pieces: Vec<Vec<Cell>> = Vec::new();
    for i in 0..cells.len() {
        if long(st.h[i]) && long(st.v[i]) {
            piece[i] = pieces.len();
            pieces.push(vec![cells[i]]);
        }
    }
    for i in 0..cells.len() {
        if piece[i] != usize::MAX {
            continue;
        }
        // Extend along the only long run through this cell.
        let run = if long(st.h[i]) { st.h[i] } else { st.v[i] };
        let id = pieces.len();
        let mut part = Vec::new();
        let members = &st.runs[run];
        let at = members.iter().position(|&c| c == cells[i]).unwrap();
        let mut lo = at;
        while lo > 0 && piece[poly.cell_index(members[lo - 1]).unwrap()] == usize::MAX {
            lo -= 1;
        }
        let mut k = lo;
        while k < members.len() {
            let j = poly.cell_index(members[k]).unwrap();
            if piece[j] != usize::MAX {
                break;
            }
            piece[j] = id;
            part.push(members[k]);
            k += 1;
        }
        part.sort();
        pieces.push(part);
    }
    (piece, pieces, rectangles)
}

/// Maximal rectangles, their partition and all borders.
pub fn build_borders(poly: &Polyomino) -> Result<BorderSet> {
    check_tree(poly)?;
    let st = strips(poly);
    let (piece, pieces, rectangles) = partition(poly, &st);
    let cells = poly.cells();
    let mut borders = Vec::new();
    for (i, &c) in cells.iter().enumerate() {
        for n in [Cell::new(c.x + 1, c.y), Cell::new(c.x, c.y + 1)] {
            if let Some(j) = poly.cell_index(n) {
                if piece[i] != piece[j] {
                    borders.push(border(poly, Side::between(c, n), BorderKind::Inner));
                }
            }
        }
    }
    for &(a, b) in &rectangles {
        let sides = if a == b {
            Vec::new()
        } else if a.y == b.y {
            vec![
                Side::new(LatticePoint::new(a.x, a.y), LatticePoint::new(a.x, a.y + 1)),
                Side::new(LatticePoint::new(b.x + 1, b.y), LatticePoint::new(b.x + 1, b.y + 1)),
            ]
        } else {
            vec![
                Side::new(LatticePoint::new(a.x, a.y), LatticePoint::new(a.x + 1, a.y)),
                Side::new(LatticePoint::new(b.x, b.y + 1), LatticePoint::new(b.x + 1, b.y + 1)),
            ]
        };
        borders.extend(sides.into_iter().map(|s| border(poly, s, BorderKind::Outer)));
    }
    Ok(BorderSet { rectangles, pieces, borders })
}

/// True when the polyomino is one straight run of cells (or a single cell).
fn is_bar(poly: &Polyomino) -> bool {
    let (x0, y0, x1, y1) = poly.bbox();
    x0 == x1 || y0 == y1
}

fn root_cell(poly: &Polyomino, set: &BorderSet) -> Option<Cell> {
    poly.cells().iter().copied().find(|&c| {
        let mut h = false;
        let mut v = false;
        for b in set.inner() {
            if b.side.cells().contains(&c) {
                match b.side.orientation() {
                    crate::poly::Orientation::Horizontal => h = true,
                    crate::poly::Orientation::Vertical => v = true,
                }
            }
        }
        h && v
    })
}

pub fn build_tree(poly: &Polyomino) -> Result<BorderTree> {
    check_tree(poly)?;
    if is_bar(poly) {
        return Err(Error::DegenerateRectangle);
    }
    let set = build_borders(poly)?;
    let root = root_cell(poly, &set).ok_or(Error::NotTreeShaped("no cell with orthogonal borders"))?;
    let st = strips(poly);
    let (piece, pieces, _) = partition(poly, &st);
    let piece_of = |c: Cell| piece[poly.cell_index(c).unwrap()];
    // Exit border of every piece toward the root piece.
    let mut exit: Vec<Option<usize>> = vec![None; pieces.len()];
    let mut seen = vec![false; pieces.len()];
    let root_piece = piece_of(root);
    seen[root_piece] = true;
    let mut queue = VecDeque::from([root_piece]);
    while let Some(p) = queue.pop_front() {
        for (bi, b) in set.borders.iter().enumerate() {
            if b.kind != BorderKind::Inner {
                continue;
            }
            let [c, d] = b.side.cells();
            let (pc, pd) = (piece_of(c), piece_of(d));
            let other = if pc == p { pd } else if pd == p { pc } else { continue };
            if !seen[other] {
                seen[other] = true;
                exit[other] = Some(bi);
                queue.push_back(other);
            }
        }
    }
    let mut depth = vec![0usize; pieces.len()];
    for _ in 0..pieces.len() {
        for p in 0..pieces.len() {
            if let Some(bi) = exit[p] {
                let [c, d] = set.borders[bi].side.cells();
                let up = if piece_of(c) == p { piece_of(d) } else { piece_of(c) };
                depth[p] = depth[up] + 1;
            }
        }
    }
    let parent = set
        .borders
        .iter()
        .map(|b| match b.kind {
            BorderKind::Inner => {
                let [c, d] = b.side.cells();
                let (pc, pd) = (piece_of(c), piece_of(d));
                exit[if depth[pc] < depth[pd] { pc } else { pd }]
            }
            BorderKind::Outer => {
                let c = b.side.cells().into_iter().find(|&c| poly.contains(c)).unwrap();
                exit[piece_of(c)]
            }
        })
        .collect();
    Ok(BorderTree { root_cell: root, borders: set.borders, parent })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct St {
    /// Bit 0: guard at `p1`, bit 1: guard at `p2`.
    m: u8,
    strip: StripStatus,
    s: [u32; 2],
}

#[derive(Clone, Debug)]
struct Entry {
    st: St,
    corners: u8,
    picks: Vec<u32>,
}

/// Per-cell geometry for the program.
struct Node {
    corners: [LatticePoint; 4],
    vertex: [bool; 4],
    parent: Option<usize>,
    /// Corner indices of the edge to the parent as (p1, p2).
    up: (usize, usize),
    /// Crossing strip of the parent edge is horizontal.
    up_horizontal: bool,
    /// (child, corner index of the child's p1, of its p2, horizontal).
    children: Vec<(usize, usize, usize, bool)>,
}

struct Program {
    nodes: Vec<Node>,
    order: Vec<usize>,
    root: usize,
}

fn l1(a: LatticePoint, b: LatticePoint) -> u32 {
    a.l1(b)
}

impl Program {
    fn new(poly: &Polyomino, root: Cell) -> Program {
        let cells = poly.cells();
        let n = cells.len();
        let root_i = poly.cell_index(root).unwrap();
        let mut parent = vec![usize::MAX; n];
        let mut order = vec![root_i];
        parent[root_i] = root_i;
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            for nb in cells[x].neighbors() {
                if let Some(j) = poly.cell_index(nb) {
                    if parent[j] == usize::MAX {
                        parent[j] = x;
                        order.push(j);
                    }
                }
            }
            k += 1;
        }
        let mut nodes: Vec<Node> = cells
            .iter()
            .map(|&c| {
                let corners = c.corners();
                Node {
                    corners,
                    vertex: corners.map(|p| poly.is_vertex(p)),
                    parent: None,
                    up: (0, 0),
                    up_horizontal: false,
                    children: Vec::new(),
                }
            })
            .collect();
        let corner_index = |x: usize, p: LatticePoint| nodes_corner(cells[x], p);
        for &x in &order[1..] {
            let p = parent[x];
            let side = Side::between(cells[x], cells[p]);
            let (p1, p2) = (side.a, side.b);
            let horizontal = cells[x].y == cells[p].y;
            nodes[x].parent = Some(p);
            nodes[x].up = (corner_index(x, p1), corner_index(x, p2));
            nodes[x].up_horizontal = horizontal;
            let entry = (x, corner_index(p, p1), corner_index(p, p2), horizontal);
            nodes[p].children.push(entry);
        }
        order.reverse();
        Program { nodes, order, root: root_i }
    }

    /// Runs the program for `ell`; returns chosen corners on success.
    fn run(&self, ell: u32) -> Option<Vec<LatticePoint>> {
        let cap = |d: u32| d.min(ell);
        let mut tables: Vec<Vec<Entry>> = vec![Vec::new(); self.nodes.len()];
        let mut root_pick: Option<(u8, Vec<u32>)> = None;
        for &x in &self.order {
            let node = &self.nodes[x];
            let mut slots: Vec<Option<Entry>> = vec![None; 36];
            let kids = &node.children;
            'masks: for mask in 0u8..16 {
                if (0..4).any(|i| mask & (1 << i) != 0 && !node.vertex[i]) {
                    continue;
                }
                let chosen: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
                for (a, &i) in chosen.iter().enumerate() {
                    for &j in &chosen[a + 1..] {
                        if l1(node.corners[i], node.corners[j]) < ell {
                            continue 'masks;
                        }
                    }
                }
                // Child entries agreeing with this corner choice.
                let mut lists: Vec<Vec<u32>> = Vec::with_capacity(kids.len());
                for &(c, qa, qb, _) in kids {
                    let want = u8::from(mask & (1 << qa) != 0) | (u8::from(mask & (1 << qb) != 0) << 1);
                    let list: Vec<u32> = tables[c]
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.st.m == want)
                        .map(|(i, _)| i as u32)
                        .collect();
                    if list.is_empty() {
                        continue 'masks;
                    }
                    lists.push(list);
                }
                let mut pick = vec![0usize; kids.len()];
                loop {
                    let sts: Vec<St> = (0..kids.len()).map(|j| tables[kids[j].0][lists[j][pick[j]] as usize].st).collect();
                    if let Some(out) = self.combine(node, mask, &chosen, &sts, ell, cap) {
                        let picks: Vec<u32> = (0..kids.len()).map(|j| lists[j][pick[j]]).collect();
                        match out {
                            None => {
                                root_pick = Some((mask, picks));
                                break 'masks;
                            }
                            Some(st) => {
                                let key = usize::from(st.m) * 9
                                    + (st.strip as usize) * 3
                                    + (i64::from(st.s[0]) - i64::from(st.s[1]) + 1) as usize;
                                let better = slots[key].as_ref().is_none_or(|e| st.s[0] > e.st.s[0]);
                                if better {
                                    slots[key] = Some(Entry { st, corners: mask, picks });
                                }
                            }
                        }
                    }
                    // Odometer over the children lists.
                    let mut j = 0;
                    loop {
                        if j == kids.len() {
                            break;
                        }
                        pick[j] += 1;
                        if pick[j] < lists[j].len() {
                            break;
                        }
                        pick[j] = 0;
                        j += 1;
                    }
                    if j == kids.len() {
                        break;
                    }
                }
            }
            if x == self.root {
                break;
            }
            tables[x] = slots.into_iter().flatten().collect();
            if tables[x].is_empty() {
                return None;
            }
        }
        let (mask, picks) = root_pick?;
        let mut guards = Vec::new();
        let mut stack = vec![(self.root, mask, picks)];
        while let Some((x, mask, picks)) = stack.pop() {
            let node = &self.nodes[x];
            guards.extend((0..4).filter(|&i| mask & (1 << i) != 0).map(|i| node.corners[i]));
            for (j, &(c, _, _, _)) in node.children.iter().enumerate() {
                let e = &tables[c][picks[j] as usize];
                stack.push((c, e.corners, e.picks.clone()));
            }
        }
        guards.sort();
        guards.dedup();
        Some(guards)
    }

    /// Checks one combination at a cell. `None` means invalid; `Some(None)`
    /// means valid at the root; otherwise the state on the parent edge.
    #[allow(clippy::option_option)]
    fn combine(
        &self,
        node: &Node,
        mask: u8,
        chosen: &[usize],
        kids: &[St],
        ell: u32,
        cap: impl Fn(u32) -> u32,
    ) -> Option<Option<St>> {
        let ch = &node.children;
        let c = &node.corners;
        for (j, st) in kids.iter().enumerate() {
            let (qa, qb) = (c[ch[j].1], c[ch[j].2]);
            for &i in chosen {
                if (l1(c[i], qa) + st.s[0]).min(l1(c[i], qb) + st.s[1]) < ell {
                    return None;
                }
            }
            for (k, other) in kids.iter().enumerate().skip(j + 1) {
                let (ra, rb) = (c[ch[k].1], c[ch[k].2]);
                let d = [(qa, st.s[0]), (qb, st.s[1])]
                    .iter()
                    .flat_map(|&(q, sq)| [(ra, other.s[0]), (rb, other.s[1])].map(move |(r, sr)| sq + l1(q, r) + sr))
                    .min()
                    .unwrap();
                if d < ell {
                    return None;
                }
            }
        }
        let own = if mask != 0 { StripStatus::Guarded } else { StripStatus::Free };
        let (mut hs, mut vs) = (own, own);
        for (j, st) in kids.iter().enumerate() {
            if ch[j].3 {
                hs = hs.max(st.strip);
            } else {
                vs = vs.max(st.strip);
            }
        }
        let covered = hs == StripStatus::Guarded || vs == StripStatus::Guarded;
        let Some(_) = node.parent else {
            let ok = covered && hs != StripStatus::Demand && vs != StripStatus::Demand;
            return if ok { Some(None) } else { None };
        };
        let (mut up, done) = if node.up_horizontal { (hs, vs) } else { (vs, hs) };
        if done == StripStatus::Demand {
            return None;
        }
        if !covered {
            up = up.max(StripStatus::Demand);
        }
        let (pa, pb) = node.up;
        let score = |p: LatticePoint| {
            let mut s = ell;
            for &i in chosen {
                if i != pa && i != pb {
                    s = s.min(l1(p, c[i]));
                }
            }
            for (j, st) in kids.iter().enumerate() {
                let (qa, qb) = (c[ch[j].1], c[ch[j].2]);
                s = s.min(l1(p, qa) + st.s[0]).min(l1(p, qb) + st.s[1]);
            }
            cap(s)
        };
        let m = u8::from(mask & (1 << pa) != 0) | (u8::from(mask & (1 << pb) != 0) << 1);
        Some(Some(St { m, strip: up, s: [score(c[pa]), score(c[pb])] }))
    }
}

fn nodes_corner(c: Cell, p: LatticePoint) -> usize {
    c.corners().iter().position(|&q| q == p).expect("point is a corner of the cell")
}

/// A vertex seeing every cell, if any.
fn single_cover(poly: &Polyomino) -> Option<LatticePoint> {
    poly.vertices().iter().copied().find(|&v| visibility_mask(v, poly).iter().all(|&s| s))
}

fn program(poly: &Polyomino) -> Result<Option<Program>> {
    check_tree(poly)?;
    if is_bar(poly) {
        return Ok(None);
    }
    let set = build_borders(poly)?;
    let root = root_cell(poly, &set).ok_or(Error::NotTreeShaped("no cell with orthogonal borders"))?;
    Ok(Some(Program::new(poly, root)))
}

/// A guard set with pairwise distances at least `ell` covering `poly`, if
/// one exists.
pub fn feasible_for(poly: &Polyomino, ell: u32) -> Result<Option<GuardSet>> {
    let Some(prog) = program(poly)? else {
        return Ok(Some(GuardSet::new([poly.vertices()[0]])));
    };
    if let Some(v) = single_cover(poly) {
        return Ok(Some(GuardSet::new([v])));
    }
    Ok(prog.run(ell.max(1)).map(GuardSet::new))
}

/// Maximum dispersion with a witness.
pub fn solve_tree(poly: &Polyomino) -> Result<(Dispersion, GuardSet)> {
    let Some(prog) = program(poly)? else {
        return Ok((Dispersion::Infinite, GuardSet::new([poly.vertices()[0]])));
    };
    if let Some(v) = single_cover(poly) {
        return Ok((Dispersion::Infinite, GuardSet::new([v])));
    }
    let mut best = prog.run(1).ok_or(Error::Unguardable)?;
    // Geodesic distances between lattice points never exceed the perimeter.
    let (mut lo, mut hi) = (1u32, 2 * poly.len() as u32 + 3);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match prog.run(mid) {
            Some(g) => {
                lo = mid;
                best = g;
            }
            None => hi = mid,
        }
    }
    let witness = GuardSet::new(best);
    debug_assert!(dispersion_distance(witness.points(), poly).is_ok_and(|d| d >= Dispersion::Finite(lo)));
    Ok((Dispersion::Finite(lo), witness))
}

/// State tables of every inner border at `ell`, for inspection. A score
/// equal to `ell` means no guard closer than `ell` below the border.
pub fn border_tables(poly: &Polyomino, ell: u32) -> Result<Vec<(Border, Vec<DPState>)>> {
    let set = build_borders(poly)?;
    let Some(prog) = program(poly)? else {
        return Ok(Vec::new());
    };
    let tables = prog.tables(ell.max(1));
    let mut out = Vec::new();
    for b in set.inner() {
        let [c, d] = b.side.cells();
        let (ci, di) = (poly.cell_index(c).unwrap(), poly.cell_index(d).unwrap());
        let child = if prog.nodes[ci].parent == Some(di) { ci } else { di };
        let node = &prog.nodes[child];
        let pts = [node.corners[node.up.0], node.corners[node.up.1]];
        let states = tables[child]
            .iter()
            .map(|e| {
                // Table distances are stored in side order; report in border order.
                let (s1, s2) = if pts[0] == b.p1 { (e.st.s[0], e.st.s[1]) } else { (e.st.s[1], e.st.s[0]) };
                let chosen = (0..2).filter(|&i| e.st.m & (1 << i) != 0).map(|i| pts[i]).collect();
                DPState { order: (i64::from(s1) - i64::from(s2)) as i8, chosen, strip: e.st.strip, score: s1.min(s2) }
            })
            .collect();
        out.push((*b, states));
    }
    Ok(out)
}

impl Program {
    fn tables(&self, ell: u32) -> Vec<Vec<Entry>> {
        // Same pass as `run`, keeping every table.
        let cap = |d: u32| d.min(ell);
        let mut tables: Vec<Vec<Entry>> = vec![Vec::new(); self.nodes.len()];
        for &x in &self.order {
            if x == self.root {
                break;
            }
            let node = &self.nodes[x];
            let mut slots: Vec<Option<Entry>> = vec![None; 36];
            let kids = &node.children;
            'masks: for mask in 0u8..16 {
                if (0..4).any(|i| mask & (1 << i) != 0 && !node.vertex[i]) {
                    continue;
                }
                let chosen: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
                for (a, &i) in chosen.iter().enumerate() {
                    for &j in &chosen[a + 1..] {
                        if l1(node.corners[i], node.corners[j]) < ell {
                            continue 'masks;
                        }
                    }
                }
                let mut lists: Vec<Vec<u32>> = Vec::new();
                for &(c, qa, qb, _) in kids {
                    let want = u8::from(mask & (1 << qa) != 0) | (u8::from(mask & (1 << qb) != 0) << 1);
                    let list: Vec<u32> =
                        (0..tables[c].len() as u32).filter(|&i| tables[c][i as usize].st.m == want).collect();
                    if list.is_empty() {
                        continue 'masks;
                    }
                    lists.push(list);
                }
                for combo in product(&lists) {
                    let sts: Vec<St> = (0..kids.len()).map(|j| tables[kids[j].0][combo[j] as usize].st).collect();
                    if let Some(Some(st)) = self.combine(node, mask, &chosen, &sts, ell, cap) {
                        let key = usize::from(st.m) * 9
                            + (st.strip as usize) * 3
                            + (i64::from(st.s[0]) - i64::from(st.s[1]) + 1) as usize;
                        if slots[key].as_ref().is_none_or(|e| st.s[0] > e.st.s[0]) {
                            slots[key] = Some(Entry { st, corners: mask, picks: combo });
                        }
                    }
                }
            }
            tables[x] = slots.into_iter().flatten().collect();
        }
        tables
    }
}

fn product(lists: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        out = out.iter().flat_map(|pre| list.iter().map(move |&v| [pre.clone(), vec![v]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_max_dispersion, OracleBudget};

    fn plus() -> Polyomino {
        Polyomino::from_grid(".#.\n###\n.#.").unwrap()
    }

    #[test]
    fn borders_of_small_shapes() {
        let bar = Polyomino::from_grid("###").unwrap();
        let b = build_borders(&bar).unwrap();
        assert_eq!((b.rectangles.len(), b.outer().count(), b.inner().count()), (1, 2, 0));
        let p = build_borders(&plus()).unwrap();
        assert_eq!((p.rectangles.len(), p.outer().count(), p.inner().count(), p.pieces.len()), (2, 4, 4, 5));
        let l = build_borders(&Polyomino::from_grid("#.\n##").unwrap()).unwrap();
        assert_eq!((l.rectangles.len(), l.inner().count(), l.pieces.len()), (2, 2, 3));
    }

    #[test]
    fn trees_of_small_shapes() {
        let t = build_tree(&plus()).unwrap();
        assert_eq!(t.root_cell, Cell::new(1, 1));
        assert_eq!(t.borders.len(), 8);
        // Inner borders hang off the root cell, outer borders off them.
        for (i, b) in t.borders.iter().enumerate() {
            match b.kind {
                BorderKind::Inner => assert_eq!(t.parent[i], None),
                BorderKind::Outer => assert_eq!(t.borders[t.parent[i].unwrap()].kind, BorderKind::Inner),
            }
        }
        let l = build_tree(&Polyomino::from_grid("#.\n##").unwrap()).unwrap();
        assert_eq!(l.root_cell, Cell::new(0, 0));
        assert_eq!(build_tree(&Polyomino::from_grid("#####").unwrap()), Err(Error::DegenerateRectangle));
    }

    #[test]
    fn rejects_non_trees() {
        let sq = Polyomino::from_grid("##\n##").unwrap();
        assert!(matches!(solve_tree(&sq), Err(Error::NotTreeShaped(_))));
    }

    #[test]
    fn closed_forms() {
        let bar = Polyomino::from_grid("###").unwrap();
        assert_eq!(feasible_for(&bar, 5).unwrap().unwrap().len(), 1);
        assert_eq!(solve_tree(&bar).unwrap().0, Dispersion::Infinite);
    }

    #[test]
    fn plus_matches_oracle() {
        let p = plus();
        let (best, witness) = solve_tree(&p).unwrap();
        let oracle = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap();
        assert_eq!(best, oracle.best);
        assert!(crate::verify::verify(&witness, &p, best, &[]).unwrap().ok);
        if let Dispersion::Finite(l) = best {
            assert!(feasible_for(&p, l + 1).unwrap().is_none());
        }
    }

    #[test]
    fn small_random_trees_match_oracle() {
        for seed in 0..40 {
            let p = crate::poly::random_tree(seed, 6 + (seed as usize % 12)).unwrap();
            let (best, witness) = solve_tree(&p).unwrap();
            let oracle = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap();
            assert_eq!(best, oracle.best, "seed {seed}");
            assert!(crate::verify::verify(&witness, &p, best, &[]).unwrap().ok, "seed {seed}");
        }
    }

    #[test]
    fn border_tables_are_reported() {
        let tables = border_tables(&plus(), 2).unwrap();
        assert_eq!(tables.len(), 4);
        assert!(tables.iter().all(|(_, s)| !s.is_empty()));
    }
}
