//! Formulas, layouts, composition into one polyomino and witness guard sets.
//!
//! Formula text is DIMACS-like:
//!
//! ```text
//! c comments start with c
//! p cnf 2 1
//! 1 2 0
//! ```
//!
//! Every clause has 2 or 3 literals, all positive or all negative.
//!
//! Layout text has one statement per line, `#` starts a comment:
//!
//! ```text
//! gadget <id> <kind> <x> <y> [rot=0|90|180|270] [mirror] [stretch=K] [len=N]
//! link <id>.<port> <id>.<port>
//! ```
//!
//! The gadget is transformed (mirror first, then counter-clockwise rotation),
//! translated so its bounding box starts at the origin and then moved by
//! `(x, y)`. Variables must be called `x1..xn` and clauses `c1..cm` in formula
//! order. A link joins two ports facing each other on one line; the cells
//! between them become a corridor.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::geodesic::Dispersion;
use crate::oracle::{exact_max_in, feasible_in, Instance, OracleBudget};
use crate::par::maybe_par_map;
use crate::poly::{Cell, LatticePoint, Polyomino};
use crate::verify::GuardSet;

use super::{GadgetBlueprint, GadgetKind, Transform, TARGET};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub vars: usize,
    /// Literals as signed 1-based variable indices.
    pub clauses: Vec<Vec<i32>>,
}

impl Formula {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Formula> {
        for (j, c) in clauses.iter().enumerate() {
            let line = j + 1;
            let bad = |message: String| Error::Parse { line, message };
            if !(2..=3).contains(&c.len()) {
                return Err(bad(format!("clause {line} has {} literals, expected 2 or 3", c.len())));
            }
            if let Some(&l) = c.iter().find(|l| l.unsigned_abs() as usize > vars || **l == 0) {
                return Err(bad(format!("literal {l} out of range 1..={vars}")));
            }
            if !(c.iter().all(|&l| l > 0) || c.iter().all(|&l| l < 0)) {
                return Err(bad(format!("clause {line} mixes positive and negative literals")));
            }
            let vars_in: HashSet<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            if vars_in.len() != c.len() {
                return Err(bad(format!("clause {line} repeats a variable")));
            }
        }
        Ok(Formula { vars, clauses })
    }

    pub fn parse(text: &str) -> Result<Formula> {
        let mut header = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |message: String| Error::Parse { line, message };
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if let Some(rest) = t.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if header.is_some() || f.len() != 3 || f[0] != "cnf" {
                    return Err(bad("expected a single `p cnf <vars> <clauses>` header".into()));
                }
                let n = f[1].parse::<usize>().map_err(|e| bad(e.to_string()))?;
                let m = f[2].parse::<usize>().map_err(|e| bad(e.to_string()))?;
                header = Some((n, m));
                continue;
            }
            if header.is_none() {
                return Err(bad("clause before the `p cnf` header".into()));
            }
            for tok in t.split_whitespace() {
                let l = tok.parse::<i32>().map_err(|_| bad(format!("bad literal {tok:?}")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, message: "missing `p cnf` header".into() })?;
        if !current.is_empty() {
            return Err(Error::Parse { line: text.lines().count(), message: "last clause is not terminated by 0".into() });
        }
        if clauses.len() != m {
            return Err(Error::Parse { line: 0, message: format!("header announces {m} clauses, found {}", clauses.len()) });
        }
        Formula::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn literal_value(lit: i32, assignment: &[bool]) -> bool {
        assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    /// 1-based indices of the clauses the assignment leaves unsatisfied.
    pub fn unsatisfied(&self, assignment: &[bool]) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.iter().any(|&l| Formula::literal_value(l, assignment)))
            .map(|(j, _)| j + 1)
            .collect()
    }
}

/// Accepts `01110`, `0 1 1 1 0` or `0,1,1,1,0`.
pub fn parse_assignment(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse { line: 1, message: format!("assignment digit must be 0 or 1, got {c:?}") }),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutEntry {
    pub id: String,
    pub kind: GadgetKind,
    pub x: i32,
    pub y: i32,
    pub transform: Transform,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    pub gadgets: Vec<LayoutEntry>,
    /// `((id, port), (id, port))`
    pub links: Vec<((String, String), (String, String))>,
}

fn port_ref(tok: &str, line: usize) -> Result<(String, String)> {
    let (g, p) = tok
        .split_once('.')
        .ok_or_else(|| Error::Parse { line, message: format!("expected <gadget>.<port>, got {tok:?}") })?;
    Ok((g.to_string(), p.to_string()))
}

impl Layout {
    pub fn parse(text: &str) -> Result<Layout> {
        let mut layout = Layout::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |message: String| Error::Parse { line, message };
            let t = raw.split('#').next().unwrap_or("").trim();
            let f: Vec<&str> = t.split_whitespace().collect();
            match f.first() {
                None => continue,
                Some(&"gadget") => {
                    if f.len() < 5 {
                        return Err(bad("expected `gadget <id> <kind> <x> <y> [flags]`".into()));
                    }
                    let num = |s: &str| s.parse::<i32>().map_err(|_| bad(format!("bad coordinate {s:?}")));
                    let (x, y) = (num(f[3])?, num(f[4])?);
                    let mut transform = Transform::IDENTITY;
                    let mut param = 0;
                    for flag in &f[5..] {
                        let val = |s: &str| s.parse::<u32>().map_err(|_| bad(format!("bad flag value in {flag:?}")));
                        match flag.split_once('=') {
                            None if *flag == "mirror" => transform.mirror = true,
                            Some(("rot", v)) => {
                                transform.quarter_turns = match v {
                                    "0" => 0,
                                    "90" => 1,
                                    "180" => 2,
                                    "270" => 3,
                                    _ => return Err(bad(format!("rotation must be 0, 90, 180 or 270, got {v}"))),
                                }
                            }
                            Some(("stretch" | "len", v)) => param = val(v)?,
                            _ => return Err(bad(format!("unknown flag {flag:?}"))),
                        }
                    }
                    let kind = GadgetKind::from_name(f[2], param).map_err(|e| bad(e.to_string()))?;
                    layout.gadgets.push(LayoutEntry { id: f[1].to_string(), kind, x, y, transform });
                }
                Some(&"link") => {
                    if f.len() != 3 {
                        return Err(bad("expected `link <id>.<port> <id>.<port>`".into()));
                    }
                    layout.links.push((port_ref(f[1], line)?, port_ref(f[2], line)?));
                }
                Some(other) => return Err(bad(format!("unknown statement {other:?}"))),
            }
        }
        Ok(layout)
    }
}

/// A gadget in its final position: `blueprint` is in local coordinates.
#[derive(Clone, Debug)]
pub struct Placed {
    pub id: String,
    pub blueprint: GadgetBlueprint,
    pub offset: (i32, i32),
}

impl Placed {
    pub fn to_global(&self, c: Cell) -> Cell {
        Cell::new(c.x + self.offset.0, c.y + self.offset.1)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.blueprint.shape.cells().iter().map(|&c| self.to_global(c))
    }
}

#[derive(Clone, Debug)]
pub struct Link {
    /// `(gadget index, port name)` for both ends.
    pub ends: [(usize, &'static str); 2],
    pub corridor: Vec<Cell>,
    /// The variable literal whose signal runs through the link.
    pub literal: i32,
    /// Which end is closer to the variable.
    pub upstream: usize,
}

#[derive(Clone, Debug)]
pub struct Composition {
    pub poly: Polyomino,
    pub gadgets: Vec<Placed>,
    pub links: Vec<Link>,
    /// `(clause id, port) -> literal`
    pub port_map: BTreeMap<(String, String), i32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Owner {
    Gadget(usize),
    Corridor(usize),
}

fn element_index(id: &str, prefix: char) -> Option<usize> {
    id.strip_prefix(prefix)?.parse::<usize>().ok().filter(|&i| i >= 1)
}

pub fn compose(formula: &Formula, layout: &Layout) -> Result<Composition> {
    let mut gadgets: Vec<Placed> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for e in &layout.gadgets {
        if index.insert(&e.id, gadgets.len()).is_some() {
            return Err(Error::Invalid(format!("gadget id {} used twice", e.id)));
        }
        match e.kind {
            GadgetKind::Variable => {
                if !element_index(&e.id, 'x').is_some_and(|i| i <= formula.vars) {
                    return Err(Error::Invalid(format!("variable gadget {} must be named x1..x{}", e.id, formula.vars)));
                }
            }
            GadgetKind::Clause { arity, .. } => {
                let j = element_index(&e.id, 'c').filter(|&j| j <= formula.clauses.len());
                let j = j.ok_or_else(|| {
                    Error::Invalid(format!("clause gadget {} must be named c1..c{}", e.id, formula.clauses.len()))
                })?;
                if formula.clauses[j - 1].len() != arity as usize {
                    return Err(Error::Invalid(format!("{} has {} literals but uses clause{arity}", e.id, formula.clauses[j - 1].len())));
                }
            }
            _ => {}
        }
        let blueprint = e.kind.blueprint()?.transformed(e.transform);
        gadgets.push(Placed { id: e.id.clone(), blueprint, offset: (e.x, e.y) });
    }
    for i in 1..=formula.vars {
        if !index.contains_key(format!("x{i}").as_str()) {
            return Err(Error::Invalid(format!("layout has no variable x{i}")));
        }
    }
    for j in 1..=formula.clauses.len() {
        if !index.contains_key(format!("c{j}").as_str()) {
            return Err(Error::Invalid(format!("layout has no clause c{j}")));
        }
    }

    let mut owner: HashMap<Cell, Owner> = HashMap::new();
    for (g, placed) in gadgets.iter().enumerate() {
        for c in placed.cells() {
            if owner.insert(c, Owner::Gadget(g)).is_some() {
                return Err(Error::Overlap(c));
            }
        }
    }

    let mut links = Vec::new();
    let mut used: HashMap<(usize, &'static str), usize> = HashMap::new();
    let mut joints: HashSet<(Cell, Cell)> = HashSet::new();
    for (a, b) in &layout.links {
        let mut ends = [(0usize, ""); 2];
        let mut cells = [Cell::new(0, 0); 2];
        let mut dirs = [super::Dir::North; 2];
        for (k, (gid, pname)) in [a, b].into_iter().enumerate() {
            let &g = index.get(gid.as_str()).ok_or_else(|| Error::PortMismatch(format!("unknown gadget {gid}")))?;
            let p = gadgets[g].blueprint.port(pname)?;
            if used.insert((g, p.name), links.len()).is_some() {
                return Err(Error::PortMismatch(format!("port {gid}.{pname} is linked twice")));
            }
            ends[k] = (g, p.name);
            cells[k] = gadgets[g].to_global(p.cell);
            dirs[k] = p.dir;
        }
        let name = format!("{}.{} - {}.{}", a.0, a.1, b.0, b.1);
        if dirs[1] != dirs[0].opposite() {
            return Err(Error::PortMismatch(format!("{name}: ports face {} and {}", dirs[0], dirs[1])));
        }
        let (dx, dy) = dirs[0].delta();
        let (ex, ey) = (cells[1].x - cells[0].x, cells[1].y - cells[0].y);
        let steps = ex * dx + ey * dy;
        if steps < 1 || (ex, ey) != (steps * dx, steps * dy) {
            return Err(Error::PortMismatch(format!("{name}: ports are not facing each other on one line")));
        }
        let path: Vec<Cell> = (0..=steps).map(|s| Cell::new(cells[0].x + s * dx, cells[0].y + s * dy)).collect();
        let corridor = path[1..path.len() - 1].to_vec();
        for &c in &corridor {
            if owner.insert(c, Owner::Corridor(links.len())).is_some() {
                return Err(Error::Overlap(c));
            }
        }
        for w in path.windows(2) {
            joints.insert((w[0], w[1]));
            joints.insert((w[1], w[0]));
        }
        links.push(Link { ends, corridor, literal: 0, upstream: 0 });
    }

    // Separate elements may only meet where a link joins them.
    for (&c, &o) in &owner {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let n = Cell::new(c.x + dx, c.y + dy);
            match owner.get(&n) {
                Some(&o2) if o2 != o && !joints.contains(&(c, n)) => {
                    return Err(Error::PortMismatch(format!("cells {c} and {n} of different gadgets touch outside a link")));
                }
                _ => {}
            }
        }
    }

    for (g, placed) in gadgets.iter().enumerate() {
        for p in &placed.blueprint.ports {
            if !used.contains_key(&(g, p.name)) && placed.blueprint.kind != GadgetKind::Variable {
                return Err(Error::PortMismatch(format!("port {}.{} is not linked", placed.id, p.name)));
            }
        }
    }

    let poly = Polyomino::from_cells(owner.keys().copied())?;

    // Trace each variable output to the clauses it reaches.
    let mut port_map = BTreeMap::new();
    let mut driven = vec![false; links.len()];
    for i in 1..=formula.vars {
        let g = index[format!("x{i}").as_str()];
        for (pname, lit) in [("T", i as i32), ("F", -(i as i32))] {
            let mut stack = Vec::new();
            if let Some(&l) = used.get(&(g, pname)) {
                stack.push((l, g, pname));
            }
            while let Some((l, from, from_port)) = stack.pop() {
                if std::mem::replace(&mut driven[l], true) {
                    return Err(Error::PortMismatch(format!("signal of x{i} runs in a cycle")));
                }
                let link = &mut links[l];
                let up = if link.ends[0] == (from, from_port) { 0 } else { 1 };
                link.literal = lit;
                link.upstream = up;
                let (h, entry) = link.ends[1 - up];
                let target = &gadgets[h];
                let exits: Vec<&'static str> = match target.blueprint.kind {
                    GadgetKind::Variable => {
                        return Err(Error::PortMismatch(format!("x{i} is wired into variable {}", target.id)));
                    }
                    GadgetKind::Clause { .. } => {
                        port_map.insert((target.id.clone(), entry.to_string()), lit);
                        Vec::new()
                    }
                    GadgetKind::Duplicator if entry != "in" => {
                        return Err(Error::PortMismatch(format!("signal enters duplicator {} through {entry}", target.id)));
                    }
                    _ => target.blueprint.ports.iter().map(|p| p.name).filter(|&n| n != entry).collect(),
                };
                for e in exits {
                    stack.push((used[&(h, e)], h, e));
                }
            }
        }
    }
    if let Some(l) = driven.iter().position(|d| !d) {
        let [(a, pa), (b, pb)] = links[l].ends;
        return Err(Error::PortMismatch(format!("link {}.{pa} - {}.{pb} is not driven by a variable", gadgets[a].id, gadgets[b].id)));
    }

    let var_top = (1..=formula.vars).flat_map(|i| gadgets[index[format!("x{i}").as_str()]].cells()).map(|c| c.y);
    let (var_lo, var_hi) = var_top.fold((i32::MAX, i32::MIN), |(lo, hi), y| (lo.min(y), hi.max(y)));
    for (j, clause) in formula.clauses.iter().enumerate() {
        let id = format!("c{}", j + 1);
        let mut got: Vec<i32> = port_map.iter().filter(|((c, _), _)| *c == id).map(|(_, &l)| l).collect();
        let mut want = clause.clone();
        got.sort();
        want.sort();
        if got != want {
            return Err(Error::PortMismatch(format!("{id} is wired to literals {got:?}, expected {want:?}")));
        }
        let placed = &gadgets[index[id.as_str()]];
        let ys = placed.cells().map(|c| c.y);
        let ok = if clause[0] > 0 { ys.min().unwrap() > var_hi } else { ys.max().unwrap() < var_lo };
        if !ok {
            let side = if clause[0] > 0 { "above" } else { "below" };
            return Err(Error::Invalid(format!("{id} must lie {side} the variable gadgets")));
        }
    }

    Ok(Composition { poly, gadgets, links, port_map })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub guards: GuardSet,
    /// 1-based clause indices whose gadget had to fall back to a best-effort set.
    pub unsatisfied: Vec<usize>,
}

impl Witness {
    pub fn satisfied(self) -> Result<GuardSet> {
        match self.unsatisfied.first() {
            Some(&j) => Err(Error::UnsatisfiedClause(j)),
            None => Ok(self.guards),
        }
    }
}

impl Composition {
    /// Per-gadget guard sets for the signals implied by `assignment`.
    ///
    /// A link carrying `true` is covered by its upstream gadget, so the
    /// downstream gadget sees that strip as covered from outside, and the
    /// other way round for `false`. Each gadget is then solved in isolation at
    /// distance 5. A clause whose literals are all false has no such set; it
    /// gets its best set instead and is reported as unsatisfied.
    pub fn witness(&self, assignment: &[bool], budget: OracleBudget) -> Result<Witness> {
        let mut pre: Vec<Vec<&str>> = vec![Vec::new(); self.gadgets.len()];
        let mut glued: Vec<Vec<LatticePoint>> = vec![Vec::new(); self.gadgets.len()];
        for link in &self.links {
            let value = Formula::literal_value(link.literal, assignment);
            for (k, &(g, p)) in link.ends.iter().enumerate() {
                let upstream = k == link.upstream;
                if upstream != value {
                    pre[g].push(p);
                }
                glued[g].extend(self.gadgets[g].blueprint.port(p)?.corners());
            }
        }
        let jobs: Vec<usize> = (0..self.gadgets.len()).collect();
        let parts = maybe_par_map(&jobs, |&g| -> Result<(GuardSet, bool)> {
            let placed = &self.gadgets[g];
            let bp = &placed.blueprint;
            let inst = Instance::with_excluded(&bp.shape, &bp.covered_from_outside(&pre[g])?, &glued[g])?;
            let (set, ok) = match feasible_in(&inst, Dispersion::Finite(TARGET), budget)? {
                Some(set) => (set, true),
                None if matches!(bp.kind, GadgetKind::Clause { .. }) => (exact_max_in(&inst, budget)?.witness, false),
                None => return Err(Error::Invalid(format!("gadget {} has no guard set at distance {TARGET}", placed.id))),
            };
            let shifted = set.points().iter().map(|p| LatticePoint::new(p.x + placed.offset.0, p.y + placed.offset.1));
            Ok((shifted.collect(), ok))
        });
        let mut guards = Vec::new();
        let mut unsatisfied = Vec::new();
        for (g, part) in parts.into_iter().enumerate() {
            let (set, ok) = part?;
            guards.extend_from_slice(set.points());
            if !ok {
                let j = element_index(&self.gadgets[g].id, 'c').expect("clause ids are checked by compose");
                unsatisfied.push(j);
            }
        }
        unsatisfied.sort();
        Ok(Witness { guards: GuardSet::new(guards), unsatisfied })
    }
}

pub fn guards_from_assignment(formula: &Formula, layout: &Layout, assignment: &[bool]) -> Result<Witness> {
    if assignment.len() != formula.vars {
        return Err(Error::Invalid(format!("assignment has {} values for {} variables", assignment.len(), formula.vars)));
    }
    compose(formula, layout)?.witness(assignment, OracleBudget::default())
}
