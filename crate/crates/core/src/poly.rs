//! Polyominoes on the integer lattice.
//!
//! A [`Polyomino`] is an edge-connected set of unit cells. Cell `(x, y)`
//! occupies the closed square `[x, x+1] × [y, y+1]`; the polyomino is the
//! union of its closed cells. Everything derived from the cell set (boundary
//! cycles, vertices, bounding box lookup tables, classification flags) is
//! computed once at construction and the value is immutable afterwards.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A unit cell, identified by its lower-left corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    /// The four corners, counter-clockwise from the lower-left one.
    pub fn corners(self) -> [LatticePoint; 4] {
        let (x, y) = (self.x, self.y);
        [
            LatticePoint::new(x, y),
            LatticePoint::new(x + 1, y),
            LatticePoint::new(x + 1, y + 1),
            LatticePoint::new(x, y + 1),
        ]
    }

    pub fn neighbors(self) -> [Cell; 4] {
        let (x, y) = (self.x, self.y);
        [
            Cell::new(x + 1, y),
            Cell::new(x, y + 1),
            Cell::new(x - 1, y),
            Cell::new(x, y - 1),
        ]
    }

    /// True when `p` is one of the four corners.
    pub fn has_corner(self, p: LatticePoint) -> bool {
        (p.x == self.x || p.x == self.x + 1) && (p.y == self.y || p.y == self.y + 1)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

/// A point with integer coordinates. Guards and polyomino vertices live here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i32,
    pub y: i32,
}

impl LatticePoint {
    pub const fn new(x: i32, y: i32) -> Self {
        LatticePoint { x, y }
    }

    pub fn l1(self, other: LatticePoint) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// The (up to) four cells having this point as a corner.
    pub fn incident_cells(self) -> [Cell; 4] {
        let (x, y) = (self.x, self.y);
        [
            Cell::new(x, y),
            Cell::new(x - 1, y),
            Cell::new(x - 1, y - 1),
            Cell::new(x, y - 1),
        ]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A unit side of a cell. Endpoints are stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Side {
    pub a: LatticePoint,
    pub b: LatticePoint,
}

impl Side {
    /// Builds a side from two points at unit L1 distance, in either order.
    pub fn new(p: LatticePoint, q: LatticePoint) -> Self {
        debug_assert_eq!(p.l1(q), 1, "side endpoints must be adjacent");
        if p <= q {
            Side { a: p, b: q }
        } else {
            Side { a: q, b: p }
        }
    }

    pub fn orientation(self) -> Orientation {
        if self.a.y == self.b.y {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    /// The two cells sharing this side (below/above or left/right).
    pub fn cells(self) -> [Cell; 2] {
        match self.orientation() {
            Orientation::Horizontal => [Cell::new(self.a.x, self.a.y - 1), Cell::new(self.a.x, self.a.y)],
            Orientation::Vertical => [Cell::new(self.a.x - 1, self.a.y), Cell::new(self.a.x, self.a.y)],
        }
    }

    /// The side between two edge-adjacent cells.
    pub fn between(c: Cell, d: Cell) -> Side {
        if c.y == d.y {
            let x = c.x.max(d.x);
            Side::new(LatticePoint::new(x, c.y), LatticePoint::new(x, c.y + 1))
        } else {
            let y = c.y.max(d.y);
            Side::new(LatticePoint::new(c.x, y), LatticePoint::new(c.x + 1, y))
        }
    }
}

/// A closed boundary walk. Consecutive points (cyclically) are joined by a
/// unit side; the polyomino lies to the right of the direction of travel, so
/// the outer cycle runs clockwise and hole cycles run counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCycle {
    pub points: Vec<LatticePoint>,
    pub outer: bool,
}

impl BoundaryCycle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn side(&self, i: usize) -> Side {
        let n = self.points.len();
        Side::new(self.points[i % n], self.points[(i + 1) % n])
    }

    /// Turn at point `i`: +1 for a right turn (convex corner), -1 for a left
    /// turn (reflex corner), 0 when the boundary runs straight through.
    pub fn turn(&self, i: usize) -> i32 {
        let n = self.points.len();
        let prev = self.points[(i + n - 1) % n];
        let cur = self.points[i % n];
        let next = self.points[(i + 1) % n];
        let (dx1, dy1) = (cur.x - prev.x, cur.y - prev.y);
        let (dx2, dy2) = (next.x - cur.x, next.y - cur.y);
        // z-component of the cross product; negative means a right turn.
        -(dx1 * dy2 - dy1 * dx2).signum()
    }

    /// Indices of the points where the walk changes direction.
    pub fn corner_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.points.len()).filter(move |&i| self.turn(i) != 0)
    }
}

/// Simple, thin and tree-shaped flags of a polyomino.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Classification {
    pub simple: bool,
    pub thin: bool,
    pub tree_shaped: bool,
}

const NONE: u32 = u32::MAX;

#[derive(Clone)]
pub struct Polyomino {
    cells: Vec<Cell>,
    min_x: i32,
    min_y: i32,
    width: i32,
    height: i32,
    /// Cell index per bounding-box slot, `NONE` when absent.
    slots: Vec<u32>,
    /// 2D prefix counts over the bounding box, `(width+1) × (height+1)`.
    prefix: Vec<u32>,
    cycles: Vec<BoundaryCycle>,
    vertices: Vec<LatticePoint>,
    vertex_ids: HashMap<LatticePoint, usize>,
    class: Classification,
}

impl PartialEq for Polyomino {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Polyomino {}

impl fmt::Debug for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polyomino")
            .field("cells", &self.cells.len())
            .field("bbox", &(self.min_x, self.min_y, self.width, self.height))
            .field("class", &self.class)
            .finish()
    }
}

impl Polyomino {
    /// Builds a polyomino from any collection of cells (duplicates ignored).
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self> {
        let set: BTreeSet<Cell> = cells.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyShape);
        }
        let cells: Vec<Cell> = set.into_iter().collect();
        let min_x = cells.iter().map(|c| c.x).min().unwrap();
        let max_x = cells.iter().map(|c| c.x).max().unwrap();
        let min_y = cells.iter().map(|c| c.y).min().unwrap();
        let max_y = cells.iter().map(|c| c.y).max().unwrap();
        let width = max_x - min_x + 1;
        let height = max_y - min_y + 1;
        let mut slots = vec![NONE; (width as usize) * (height as usize)];
        for (i, c) in cells.iter().enumerate() {
            slots[((c.y - min_y) * width + (c.x - min_x)) as usize] = i as u32;
        }
        let mut prefix = vec![0u32; ((width + 1) * (height + 1)) as usize];
        let pw = (width + 1) as usize;
        for y in 0..height as usize {
            for x in 0..width as usize {
                let here = u32::from(slots[y * width as usize + x] != NONE);
                prefix[(y + 1) * pw + x + 1] =
                    here + prefix[y * pw + x + 1] + prefix[(y + 1) * pw + x] - prefix[y * pw + x];
            }
        }
        let mut poly = Polyomino {
            cells,
            min_x,
            min_y,
            width,
            height,
            slots,
            prefix,
            cycles: Vec::new(),
            vertices: Vec::new(),
            vertex_ids: HashMap::new(),
            class: Classification::default(),
        };
        if !poly.is_connected() {
            return Err(Error::Disconnected);
        }
        poly.cycles = trace_cycles(&poly.cells, |c| poly.contains(c));
        let mut verts: Vec<LatticePoint> = poly
            .cycles
            .iter()
            .flat_map(|cy| cy.corner_indices().map(move |i| cy.points[i]))
            .collect();
        verts.sort();
        verts.dedup();
        poly.vertex_ids = verts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        poly.vertices = verts;
        poly.class = poly.compute_class();
        Ok(poly)
    }

    /// Parses the `#`/`.` grid format. The first line is the top row.
    pub fn from_grid(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
        let h = lines.len() as i32;
        let mut cells = Vec::new();
        for (row, line) in lines.iter().enumerate() {
            let y = h - 1 - row as i32;
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '#' => cells.push(Cell::new(col as i32, y)),
                    '.' | ' ' => {}
                    other => {
                        return Err(Error::BadChar { line: row + 1, column: col + 1, ch: other });
                    }
                }
            }
        }
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Inclusive cell bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bbox(&self) -> (i32, i32, i32, i32) {
        (self.min_x, self.min_y, self.min_x + self.width - 1, self.min_y + self.height - 1)
    }

    pub fn cell_index(&self, c: Cell) -> Option<usize> {
        let (x, y) = (c.x - self.min_x, c.y - self.min_y);
        if x < 0 || y < 0 || x >= self.width || y >= self.height {
            return None;
        }
        match self.slots[(y * self.width + x) as usize] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cell_index(c).is_some()
    }

    /// Number of cells of the polyomino inside the inclusive cell box.
    pub fn count_in_box(&self, x0: i32, y0: i32, x1: i32, y1: i32) -> u32 {
        let lx = (x0.min(x1) - self.min_x).max(0);
        let ly = (y0.min(y1) - self.min_y).max(0);
        let hx = (x0.max(x1) - self.min_x + 1).min(self.width);
        let hy = (y0.max(y1) - self.min_y + 1).min(self.height);
        if lx >= hx || ly >= hy {
            return 0;
        }
        let pw = (self.width + 1) as usize;
        let at = |x: i32, y: i32| self.prefix[y as usize * pw + x as usize];
        at(hx, hy) + at(lx, ly) - at(lx, hy) - at(hx, ly)
    }

    /// True when every cell of the inclusive box belongs to the polyomino.
    pub fn box_filled(&self, x0: i32, y0: i32, x1: i32, y1: i32) -> bool {
        let area = (x0.abs_diff(x1) as u64 + 1) * (y0.abs_diff(y1) as u64 + 1);
        u64::from(self.count_in_box(x0, y0, x1, y1)) == area
    }

    pub fn boundary_cycles(&self) -> &[BoundaryCycle] {
        &self.cycles
    }

    pub fn outer_cycle(&self) -> &BoundaryCycle {
        self.cycles.iter().find(|c| c.outer).expect("connected polyomino has an outer cycle")
    }

    /// Corner points of all boundary cycles, sorted.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn vertex_index(&self, p: LatticePoint) -> Option<usize> {
        self.vertex_ids.get(&p).copied()
    }

    pub fn is_vertex(&self, p: LatticePoint) -> bool {
        self.vertex_ids.contains_key(&p)
    }

    pub fn classify(&self) -> Classification {
        self.class
    }

    pub fn is_simple(&self) -> bool {
        self.class.simple
    }

    /// Edge-adjacent cells that belong to the polyomino.
    pub fn dual_neighbors(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        c.neighbors().into_iter().filter(move |&n| self.contains(n))
    }

    pub fn dual_degree(&self, c: Cell) -> usize {
        self.dual_neighbors(c).count()
    }

    pub fn dual_edge_count(&self) -> usize {
        self.cells
            .iter()
            .map(|&c| usize::from(self.contains(Cell::new(c.x + 1, c.y))) + usize::from(self.contains(Cell::new(c.x, c.y + 1))))
            .sum()
    }

    /// Cells of dual degree one.
    pub fn niches(&self) -> Vec<Cell> {
        self.cells.iter().copied().filter(|&c| self.dual_degree(c) == 1).collect()
    }

    /// True when the closed polyomino contains the lattice point.
    pub fn contains_point(&self, p: LatticePoint) -> bool {
        p.incident_cells().iter().any(|&c| self.contains(c))
    }

    /// True when the unit segment `p`–`q` lies in the closed polyomino.
    pub fn unit_segment_inside(&self, p: LatticePoint, q: LatticePoint) -> bool {
        Side::new(p, q).cells().iter().any(|&c| self.contains(c))
    }

    /// Lattice-point bounding box `(min_x, min_y, max_x, max_y)` of the closed shape.
    pub fn point_bbox(&self) -> (i32, i32, i32, i32) {
        (self.min_x, self.min_y, self.min_x + self.width, self.min_y + self.height)
    }

    /// Every lattice point of the closed polyomino, sorted.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let mut pts: Vec<LatticePoint> = self.cells.iter().flat_map(|c| c.corners()).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Applies an integer map to every cell and rebuilds.
    pub fn map_cells(&self, f: impl Fn(Cell) -> Cell) -> Result<Self> {
        Self::from_cells(self.cells.iter().map(|&c| f(c)))
    }

    /// Translates so that the cell bounding box starts at the origin.
    pub fn normalized(&self) -> Self {
        let (dx, dy) = (self.min_x, self.min_y);
        if dx == 0 && dy == 0 {
            return self.clone();
        }
        self.map_cells(|c| Cell::new(c.x - dx, c.y - dy)).expect("translation preserves validity")
    }

    /// Subdivides every cell into `k × k` cells.
    pub fn refined(&self, k: i32) -> Self {
        assert!(k >= 1);
        let cells = self
            .cells
            .iter()
            .flat_map(|c| (0..k).flat_map(move |i| (0..k).map(move |j| Cell::new(c.x * k + i, c.y * k + j))));
        Self::from_cells(cells).expect("refinement preserves validity")
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for n in self.cells[i].neighbors() {
                if let Some(j) = self.cell_index(n) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        count == self.cells.len()
    }

    fn compute_class(&self) -> Classification {
        let simple = self.cycles.len() == 1;
        let thin = !self.cells.iter().any(|&c| {
            self.contains(Cell::new(c.x + 1, c.y))
                && self.contains(Cell::new(c.x, c.y + 1))
                && self.contains(Cell::new(c.x + 1, c.y + 1))
        });
        let tree_shaped = self.dual_edge_count() + 1 == self.cells.len();
        Classification { simple, thin, tree_shaped }
    }
}

/// Traces the boundary cycles of an arbitrary edge-connected cell set.
///
/// At a pinch point (two cells touching only diagonally) the walk turns left,
/// so every cycle borders exactly one 4-connected component of the
/// complement. Each cycle starts at its lexicographically smallest point.
pub(crate) fn trace_cycles(cells: &[Cell], contains: impl Fn(Cell) -> bool) -> Vec<BoundaryCycle> {
    trace_cycles_with(cells, contains, true)
}

/// As [`trace_cycles`], choosing the turn taken at pinch points. Turning
/// right keeps the outer walk of a hole-free cell set in one cycle.
pub(crate) fn trace_cycles_with(
    cells: &[Cell],
    contains: impl Fn(Cell) -> bool,
    pinch_left: bool,
) -> Vec<BoundaryCycle> {
    // Outgoing directed sides per start point.
    let mut out: HashMap<LatticePoint, Vec<LatticePoint>> = HashMap::new();
    let mut starts: Vec<(LatticePoint, LatticePoint)> = Vec::new();
    for &c in cells {
        let [ll, lr, ur, ul] = c.corners();
        let mut push = |p: LatticePoint, q: LatticePoint| {
            out.entry(p).or_default().push(q);
            starts.push((p, q));
        };
        if !contains(Cell::new(c.x - 1, c.y)) {
            push(ll, ul);
        }
        if !contains(Cell::new(c.x, c.y + 1)) {
            push(ul, ur);
        }
        if !contains(Cell::new(c.x + 1, c.y)) {
            push(ur, lr);
        }
        if !contains(Cell::new(c.x, c.y - 1)) {
            push(lr, ll);
        }
    }
    starts.sort();
    let mut used: std::collections::HashSet<(LatticePoint, LatticePoint)> = Default::default();
    let mut cycles = Vec::new();
    for &(s, t) in &starts {
        if used.contains(&(s, t)) {
            continue;
        }
        let mut points = vec![s];
        used.insert((s, t));
        let (mut prev, mut cur) = (s, t);
        loop {
            let next = next_on_boundary(prev, cur, &out[&cur], pinch_left);
            if (cur, next) == (s, t) {
                break;
            }
            points.push(cur);
            used.insert((cur, next));
            prev = cur;
            cur = next;
        }
        let area2: i64 = (0..points.len())
            .map(|i| {
                let p = points[i];
                let q = points[(i + 1) % points.len()];
                i64::from(p.x) * i64::from(q.y) - i64::from(q.x) * i64::from(p.y)
            })
            .sum();
        let start = (0..points.len()).min_by_key(|&i| points[i]).unwrap();
        points.rotate_left(start);
        cycles.push(BoundaryCycle { points, outer: area2 < 0 });
    }
    cycles.sort_by_key(|c| (!c.outer, c.points[0]));
    cycles
}

/// Successor of `cur` when arriving from `prev`.
fn next_on_boundary(prev: LatticePoint, cur: LatticePoint, nexts: &[LatticePoint], pinch_left: bool) -> LatticePoint {
    if nexts.len() == 1 {
        return nexts[0];
    }
    let (dx, dy) = (cur.x - prev.x, cur.y - prev.y);
    let turn = if pinch_left {
        LatticePoint::new(cur.x - dy, cur.y + dx)
    } else {
        LatticePoint::new(cur.x + dy, cur.y - dx)
    };
    debug_assert!(nexts.contains(&turn), "pinch point without a matching turn");
    turn
}

const RESTARTS: u64 = 50;

/// Random simple polyomino with exactly `cell_count` cells, deterministic in `seed`.
pub fn random_simple(seed: u64, cell_count: usize) -> Result<Polyomino> {
    grow(seed, cell_count, simple_point)
}

/// Random tree-shaped polyomino (thin, acyclic dual graph, no pinch points)
/// with exactly `cell_count` cells, deterministic in `seed`.
pub fn random_tree(seed: u64, cell_count: usize) -> Result<Polyomino> {
    grow(seed, cell_count, |set, c| {
        let four = c.neighbors().iter().filter(|n| set.contains(n)).count();
        if four != 1 || !simple_point(set, c) {
            return false;
        }
        // No 2x2 block may contain c.
        for (dx, dy) in [(0, 0), (-1, 0), (0, -1), (-1, -1)] {
            let base = Cell::new(c.x + dx, c.y + dy);
            let block = [base, Cell::new(base.x + 1, base.y), Cell::new(base.x, base.y + 1), Cell::new(base.x + 1, base.y + 1)];
            if block.iter().all(|&b| b == c || set.contains(&b)) {
                return false;
            }
        }
        true
    })
}

fn grow(seed: u64, n: usize, accept: impl Fn(&std::collections::HashSet<Cell>, Cell) -> bool) -> Result<Polyomino> {
    if n == 0 {
        return Err(Error::EmptyShape);
    }
    'restart: for attempt in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let mut list = vec![Cell::new(0, 0)];
        let mut set: std::collections::HashSet<Cell> = list.iter().copied().collect();
        while list.len() < n {
            let mut added = false;
            for _ in 0..(200 * n).max(1000) {
                let base = list[rng.gen_range(0..list.len())];
                let cand = base.neighbors()[rng.gen_range(0..4)];
                if !set.contains(&cand) && accept(&set, cand) {
                    set.insert(cand);
                    list.push(cand);
                    added = true;
                    break;
                }
            }
            if !added {
                continue 'restart;
            }
        }
        let poly = Polyomino::from_cells(list)?;
        return Ok(poly.normalized());
    }
    Err(Error::GrowthStuck { cells: n })
}

/// Adding `c` keeps the closed shape connected and hole-free: the occupied
/// ring cells form one 8-connected group and the free 4-neighbours of `c`
/// stay 4-connected inside the ring.
fn simple_point(set: &std::collections::HashSet<Cell>, c: Cell) -> bool {
    // Ring in cyclic order starting east, counter-clockwise.
    const RING: [(i32, i32); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
    let occ: Vec<bool> = RING.iter().map(|&(dx, dy)| set.contains(&Cell::new(c.x + dx, c.y + dy))).collect();
    if !occ.iter().any(|&o| o) {
        return false;
    }
    // Background 4-components in the ring: free cells are linked along the
    // ring only through a shared edge, i.e. between an edge cell and a
    // diagonal cell. Count components that contain an edge-neighbour.
    let mut comp = [usize::MAX; 8];
    let mut ncomp = 0;
    for s in 0..8 {
        if occ[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(i) = stack.pop() {
            for j in [(i + 1) % 8, (i + 7) % 8] {
                if !occ[j] && comp[j] == usize::MAX {
                    comp[j] = ncomp;
                    stack.push(j);
                }
            }
        }
        ncomp += 1;
    }
    let mut touching: Vec<usize> = (0..8).step_by(2).filter(|&i| !occ[i]).map(|i| comp[i]).collect();
    touching.sort();
    touching.dedup();
    // Foreground 8-components in the ring: consecutive ring cells are 8-adjacent,
    // and two edge cells two steps apart are 8-adjacent through the corner too.
    let mut fcomp = [usize::MAX; 8];
    let mut nf = 0;
    for s in 0..8 {
        if !occ[s] || fcomp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        fcomp[s] = nf;
        while let Some(i) = stack.pop() {
            let mut adj = vec![(i + 1) % 8, (i + 7) % 8];
            if i % 2 == 0 {
                adj.push((i + 2) % 8);
                adj.push((i + 6) % 8);
            }
            for j in adj {
                if occ[j] && fcomp[j] == usize::MAX {
                    fcomp[j] = nf;
                    stack.push(j);
                }
            }
        }
        nf += 1;
    }
    touching.len() == 1 && nf == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i32, i32)]) -> Vec<LatticePoint> {
        let mut out: Vec<LatticePoint> = v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect();
        out.sort();
        out
    }

    #[test]
    fn grid_parsing() {
        let p = Polyomino::from_grid("###").unwrap();
        assert_eq!(p.cells(), &[Cell::new(0, 0), Cell::new(1, 0), Cell::new(2, 0)]);
        let l = Polyomino::from_grid("#.\n##").unwrap();
        assert_eq!(l.cells(), &[Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0)]);
        assert!(matches!(Polyomino::from_grid("#.#"), Err(Error::Disconnected)));
        assert!(matches!(Polyomino::from_grid("..\n.."), Err(Error::EmptyShape)));
        assert!(matches!(Polyomino::from_grid("#x"), Err(Error::BadChar { ch: 'x', .. })));
        // short lines are padded, spaces are empty
        let s = Polyomino::from_grid("# \n##").unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn vertices_of_small_shapes() {
        let bar = Polyomino::from_grid("###").unwrap();
        assert_eq!(bar.vertices(), pts(&[(0, 0), (3, 0), (3, 1), (0, 1)]).as_slice());
        let l = Polyomino::from_grid("#.\n##").unwrap();
        assert_eq!(l.vertices(), pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).as_slice());
        let sq = Polyomino::from_grid("##\n##").unwrap();
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn classification() {
        let sq = Polyomino::from_grid("##\n##").unwrap();
        assert_eq!(sq.classify(), Classification { simple: true, thin: false, tree_shaped: false });
        let plus = Polyomino::from_grid(".#.\n###\n.#.").unwrap();
        assert_eq!(plus.classify(), Classification { simple: true, thin: true, tree_shaped: true });
        let ring = Polyomino::from_grid("###\n#.#\n###").unwrap();
        assert_eq!(ring.classify(), Classification { simple: false, thin: true, tree_shaped: false });
        assert_eq!(ring.boundary_cycles().len(), 2);
        let single = Polyomino::from_grid("#").unwrap();
        assert!(single.classify().simple && single.classify().tree_shaped);
    }

    #[test]
    fn pinch_point_is_a_hole() {
        // C-shape whose ends touch diagonally: the enclosed square is a hole.
        let p = Polyomino::from_grid("##.\n#.#\n###").unwrap();
        assert!(!p.classify().simple);
        assert_eq!(p.boundary_cycles().len(), 2);
        assert!(p.is_vertex(LatticePoint::new(2, 2)));
    }

    #[test]
    fn niche_cells() {
        assert_eq!(Polyomino::from_grid("###").unwrap().niches(), vec![Cell::new(0, 0), Cell::new(2, 0)]);
        assert!(Polyomino::from_grid("##\n##").unwrap().niches().is_empty());
        let plus = Polyomino::from_grid(".#.\n###\n.#.").unwrap();
        assert_eq!(plus.niches(), vec![Cell::new(0, 1), Cell::new(1, 0), Cell::new(1, 2), Cell::new(2, 1)]);
    }

    #[test]
    fn outer_cycle_is_clockwise_from_smallest_point() {
        let l = Polyomino::from_grid("#.\n##").unwrap();
        let c = l.outer_cycle();
        assert_eq!(c.points[0], LatticePoint::new(0, 0));
        assert_eq!(c.points[1], LatticePoint::new(0, 1));
        let convex = c.corner_indices().filter(|&i| c.turn(i) > 0).count();
        let reflex = c.corner_indices().filter(|&i| c.turn(i) < 0).count();
        assert_eq!((convex, reflex), (5, 1));
    }

    #[test]
    fn generators() {
        assert_eq!(random_tree(7, 1).unwrap().len(), 1);
        let t = random_tree(3, 40).unwrap();
        assert_eq!(t.len(), 40);
        assert!(t.classify().tree_shaped && t.classify().simple);
        let s = random_simple(11, 200).unwrap();
        assert_eq!(s.len(), 200);
        assert!(s.classify().simple);
        assert_eq!(random_simple(11, 50).unwrap(), random_simple(11, 50).unwrap());
        assert!(matches!(random_simple(1, 0), Err(Error::EmptyShape)));
    }
}
