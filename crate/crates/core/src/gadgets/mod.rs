//! Reduction gadgets for the ℓ = 5 decision problem and their composition.
//!
//! Every gadget is a thin polyomino whose ports are the open ends of
//! straight strips. Two gadgets are glued port to port (possibly through a
//! straight corridor), which merges the two port strips into one strip. A
//! guard at either end of that strip covers all of it, so the strip is the
//! unit of communication: the signal on a link is `true` when the upstream
//! gadget covers the shared strip and `false` when the downstream gadget has
//! to. In isolation a strip "covered from outside" is modelled by marking all
//! its cells pre-covered, and the two corners at the open end are removed
//! from the candidate guards since they stop being vertices once glued.

mod compose;
mod lemmas;

pub use compose::{
    compose, guards_from_assignment, parse_assignment, Composition, Formula, Layout, LayoutEntry, Link, Placed, Witness,
};
pub use lemmas::{check_lemma, lemma_suite, LemmaReport, LEMMAS};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::Instance;
use crate::poly::{Cell, LatticePoint, Polyomino};

/// The dispersion distance the reduction is built for.
pub const TARGET: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::North => (0, 1),
            Dir::East => (1, 0),
            Dir::South => (0, -1),
            Dir::West => (-1, 0),
        }
    }

    pub fn opposite(self) -> Dir {
        self.ccw().ccw()
    }

    fn ccw(self) -> Dir {
        match self {
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
            Dir::East => Dir::North,
        }
    }

    fn mirrored(self) -> Dir {
        match self {
            Dir::East => Dir::West,
            Dir::West => Dir::East,
            d => d,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::North => "N",
            Dir::East => "E",
            Dir::South => "S",
            Dir::West => "W",
        })
    }
}

/// One of the 8 symmetries of the square lattice: an optional mirror in the
/// vertical axis followed by `quarter_turns` counter-clockwise rotations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Transform {
    pub quarter_turns: u8,
    pub mirror: bool,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { quarter_turns: 0, mirror: false };

    pub fn all() -> impl Iterator<Item = Transform> {
        (0..8u8).map(|i| Transform { quarter_turns: i % 4, mirror: i >= 4 })
    }

    /// Maps a cell as a unit square (not its lower-left corner).
    pub fn apply_cell(self, c: Cell) -> Cell {
        let (mut x, mut y) = (c.x, c.y);
        if self.mirror {
            x = -x - 1;
        }
        for _ in 0..self.quarter_turns % 4 {
            (x, y) = (-y - 1, x);
        }
        Cell::new(x, y)
    }

    pub fn apply_dir(self, d: Dir) -> Dir {
        let mut d = if self.mirror { d.mirrored() } else { d };
        for _ in 0..self.quarter_turns % 4 {
            d = d.ccw();
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PortRole {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Port {
    pub name: &'static str,
    pub cell: Cell,
    /// Direction the open end faces.
    pub dir: Dir,
    pub role: PortRole,
}

impl Port {
    /// The two lattice points on the open side of the port cell.
    pub fn corners(&self) -> [LatticePoint; 2] {
        let Cell { x, y } = self.cell;
        let p = LatticePoint::new;
        match self.dir {
            Dir::East => [p(x + 1, y), p(x + 1, y + 1)],
            Dir::West => [p(x, y), p(x, y + 1)],
            Dir::North => [p(x, y + 1), p(x + 1, y + 1)],
            Dir::South => [p(x, y), p(x + 1, y)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    Variable,
    Clause { arity: u8, stretch: u32 },
    Duplicator,
    ConnectorL,
    ConnectorZ,
    Corridor { length: u32 },
}

impl GadgetKind {
    pub fn blueprint(self) -> Result<GadgetBlueprint> {
        match self {
            GadgetKind::Variable => Ok(variable_gadget()),
            GadgetKind::Clause { arity, stretch } => clause_gadget(arity, stretch),
            GadgetKind::Duplicator => Ok(duplicator_gadget()),
            GadgetKind::ConnectorL => Ok(connector_l()),
            GadgetKind::ConnectorZ => Ok(connector_z()),
            GadgetKind::Corridor { length } => corridor(length),
        }
    }

    /// Parses `variable`, `clause2`, `clause3`, `duplicator`, `connector-l`,
    /// `connector-z` or `corridor`; `param` is the stretch or corridor length.
    pub fn from_name(name: &str, param: u32) -> Result<GadgetKind> {
        Ok(match name {
            "variable" => GadgetKind::Variable,
            "clause2" => GadgetKind::Clause { arity: 2, stretch: param },
            "clause3" => GadgetKind::Clause { arity: 3, stretch: param },
            "duplicator" => GadgetKind::Duplicator,
            "connector-l" => GadgetKind::ConnectorL,
            "connector-z" => GadgetKind::ConnectorZ,
            "corridor" => GadgetKind::Corridor { length: param },
            _ => return Err(Error::Invalid(format!("unknown gadget {name:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Variable => "variable",
            GadgetKind::Clause { arity: 2, .. } => "clause2",
            GadgetKind::Clause { .. } => "clause3",
            GadgetKind::Duplicator => "duplicator",
            GadgetKind::ConnectorL => "connector-l",
            GadgetKind::ConnectorZ => "connector-z",
            GadgetKind::Corridor { .. } => "corridor",
        }
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GadgetKind::from_name(s, 0)
    }
}

#[derive(Clone, Debug)]
pub struct GadgetBlueprint {
    pub kind: GadgetKind,
    pub shape: Polyomino,
    pub ports: Vec<Port>,
    /// Named cells for tests: `zeta_<port>` is the clause cell where the
    /// literal's strip turns into the clause body.
    pub marked_cells: Vec<(String, Cell)>,
}

impl GadgetBlueprint {
    pub fn port(&self, name: &str) -> Result<&Port> {
        self.ports
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::PortMismatch(format!("{} has no port {name:?}", self.kind.name())))
    }

    /// The maximal straight strip through the port cell along the port axis.
    pub fn port_strip(&self, name: &str) -> Result<Vec<Cell>> {
        let port = self.port(name)?;
        let (dx, dy) = port.dir.delta();
        let mut cells = vec![port.cell];
        for sign in [1, -1] {
            let mut c = port.cell;
            loop {
                c = Cell::new(c.x + sign * dx, c.y + sign * dy);
                if !self.shape.contains(c) {
                    break;
                }
                cells.push(c);
            }
        }
        cells.sort();
        Ok(cells)
    }

    /// Cells pre-covered when the named ports are covered from outside.
    pub fn covered_from_outside(&self, ports: &[&str]) -> Result<Vec<Cell>> {
        let mut cells = Vec::new();
        for name in ports {
            cells.extend(self.port_strip(name)?);
        }
        cells.sort();
        cells.dedup();
        Ok(cells)
    }

    /// Port corners of every port: they are not vertices once glued.
    pub fn port_corners(&self) -> Vec<LatticePoint> {
        self.ports.iter().flat_map(|p| p.corners()).collect()
    }

    /// The gadget as glued into a larger shape: all port corners excluded and
    /// the named ports covered from outside.
    pub fn glued_instance(&self, covered: &[&str]) -> Result<Instance<'_>> {
        Instance::with_excluded(&self.shape, &self.covered_from_outside(covered)?, &self.port_corners())
    }

    pub fn marked(&self, name: &str) -> Option<Cell> {
        self.marked_cells.iter().find(|(n, _)| n == name).map(|&(_, c)| c)
    }

    /// The image under `t`, translated back so the smallest x and y are 0.
    pub fn transformed(&self, t: Transform) -> GadgetBlueprint {
        let moved: Vec<Cell> = self.shape.cells().iter().map(|&c| t.apply_cell(c)).collect();
        let x0 = moved.iter().map(|c| c.x).min().unwrap_or(0);
        let y0 = moved.iter().map(|c| c.y).min().unwrap_or(0);
        let f = |c: Cell| {
            let c = t.apply_cell(c);
            Cell::new(c.x - x0, c.y - y0)
        };
        GadgetBlueprint {
            kind: self.kind,
            shape: self.shape.map_cells(f).expect("symmetries preserve connectivity"),
            ports: self.ports.iter().map(|p| Port { cell: f(p.cell), dir: t.apply_dir(p.dir), ..p.clone() }).collect(),
            marked_cells: self.marked_cells.iter().map(|(n, c)| (n.clone(), f(*c))).collect(),
        }
    }
}

fn fixture(text: &str) -> Polyomino {
    Polyomino::from_grid(text).expect("gadget fixtures are valid grids")
}

fn port(name: &'static str, x: i32, y: i32, dir: Dir, role: PortRole) -> Port {
    Port { name, cell: Cell::new(x, y), dir, role }
}

/// Two outputs `T` (covered from inside when the variable is true) and `F`.
pub fn variable_gadget() -> GadgetBlueprint {
    GadgetBlueprint {
        kind: GadgetKind::Variable,
        shape: fixture(include_str!("../../fixtures/gadgets/variable.grid")),
        ports: vec![port("T", 0, 0, Dir::West, PortRole::Output), port("F", 5, 6, Dir::East, PortRole::Output)],
        marked_cells: Vec::new(),
    }
}

/// Clause body of width `w` with one arm per literal; stretching adds two
/// columns per step (one on each side of the middle arm).
///
/// Ports: `a` faces west at the left foot, `b` east at the right foot and,
/// for three literals, `c` east at the end of the raised middle arm.
pub fn clause_gadget(arity: u8, stretch: u32) -> Result<GadgetBlueprint> {
    if !(2..=3).contains(&arity) {
        return Err(Error::Invalid(format!("clause arity must be 2 or 3, got {arity}")));
    }
    let k = stretch as i32;
    let (w, mid) = if arity == 3 { (6 + 2 * k, 3 + k) } else { (4 + 2 * k, 0) };
    let mut cells = Vec::new();
    let left = 4;
    let right = left + w;
    cells.extend((left..=right).map(|x| Cell::new(x, 2)));
    cells.extend([Cell::new(left, 1), Cell::new(right, 1)]);
    cells.extend((0..=left).map(|x| Cell::new(x, 0)));
    cells.extend((right..=right + 4).map(|x| Cell::new(x, 0)));
    let mut ports = vec![
        port("a", 0, 0, Dir::West, PortRole::Input),
        port("b", right + 4, 0, Dir::East, PortRole::Input),
    ];
    let mut marked_cells = vec![("zeta_a".to_string(), Cell::new(left, 0)), ("zeta_b".to_string(), Cell::new(right, 0))];
    if arity == 3 {
        let m = left + mid;
        cells.push(Cell::new(m, 3));
        cells.extend((m..=m + 4).map(|x| Cell::new(x, 4)));
        ports.push(port("c", m + 4, 4, Dir::East, PortRole::Input));
        marked_cells.push(("zeta_c".to_string(), Cell::new(m, 4)));
    }
    Ok(GadgetBlueprint { kind: GadgetKind::Clause { arity, stretch }, shape: Polyomino::from_cells(cells)?, ports, marked_cells })
}

/// Input `in` faces west; `out1` faces west three rows up, `out2` east.
pub fn duplicator_gadget() -> GadgetBlueprint {
    GadgetBlueprint {
        kind: GadgetKind::Duplicator,
        shape: fixture(include_str!("../../fixtures/gadgets/duplicator.grid")),
        ports: vec![
            port("in", 0, 0, Dir::West, PortRole::Input),
            port("out1", 0, 3, Dir::West, PortRole::Output),
            port("out2", 9, 2, Dir::East, PortRole::Output),
        ],
        marked_cells: Vec::new(),
    }
}

/// Quarter turn: `in` faces west, `out` north.
pub fn connector_l() -> GadgetBlueprint {
    GadgetBlueprint {
        kind: GadgetKind::ConnectorL,
        shape: fixture(include_str!("../../fixtures/gadgets/connector_l.grid")),
        ports: vec![port("in", 0, 0, Dir::West, PortRole::Input), port("out", 5, 6, Dir::North, PortRole::Output)],
        marked_cells: Vec::new(),
    }
}

/// Offset by two rows: `in` faces west, `out` east.
pub fn connector_z() -> GadgetBlueprint {
    GadgetBlueprint {
        kind: GadgetKind::ConnectorZ,
        shape: fixture(include_str!("../../fixtures/gadgets/connector_z.grid")),
        ports: vec![port("in", 0, 0, Dir::West, PortRole::Input), port("out", 8, 2, Dir::East, PortRole::Output)],
        marked_cells: Vec::new(),
    }
}

/// A `1 × length` bar. It only lengthens the strip it sits in.
pub fn corridor(length: u32) -> Result<GadgetBlueprint> {
    if length == 0 {
        return Err(Error::Invalid("corridor length must be positive".into()));
    }
    let n = length as i32;
    Ok(GadgetBlueprint {
        kind: GadgetKind::Corridor { length },
        shape: Polyomino::from_cells((0..n).map(|x| Cell::new(x, 0)))?,
        ports: vec![port("in", 0, 0, Dir::West, PortRole::Input), port("out", n - 1, 0, Dir::East, PortRole::Output)],
        marked_cells: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_form_a_group_action() {
        let c = Cell::new(2, 5);
        for t in Transform::all() {
            let back = (0..8).map(|_| t).fold(c, |c, t| t.apply_cell(c));
            assert_eq!(back, c);
        }
        let r = Transform { quarter_turns: 1, mirror: false };
        assert_eq!(r.apply_cell(Cell::new(0, 0)), Cell::new(-1, 0));
        assert_eq!(r.apply_dir(Dir::West), Dir::South);
        let m = Transform { quarter_turns: 0, mirror: true };
        assert_eq!(m.apply_dir(Dir::West), Dir::East);
        assert_eq!(Transform::all().count(), 8);
    }

    #[test]
    fn blueprints_are_thin_trees() {
        let all = [
            variable_gadget(),
            clause_gadget(2, 0).unwrap(),
            clause_gadget(3, 0).unwrap(),
            clause_gadget(3, 2).unwrap(),
            duplicator_gadget(),
            connector_l(),
            connector_z(),
            corridor(3).unwrap(),
        ];
        for bp in &all {
            let c = bp.shape.classify();
            assert!(c.simple && c.thin && c.tree_shaped, "{}", bp.kind.name());
            for p in &bp.ports {
                assert!(bp.shape.contains(p.cell));
                let (dx, dy) = p.dir.delta();
                assert!(!bp.shape.contains(Cell::new(p.cell.x + dx, p.cell.y + dy)), "{} {}", bp.kind.name(), p.name);
                for q in p.corners() {
                    assert!(bp.shape.is_vertex(q));
                }
            }
        }
        assert_eq!(variable_gadget().shape.len(), 22);
        assert_eq!(duplicator_gadget().shape.len(), 17);
        assert_eq!(clause_gadget(3, 0).unwrap().shape.len(), 25);
        assert_eq!(clause_gadget(3, 1).unwrap().shape.len(), 27);
        assert!(clause_gadget(4, 0).is_err());
    }

    #[test]
    fn strips() {
        let v = variable_gadget();
        assert_eq!(v.port_strip("T").unwrap(), (0..5).map(|x| Cell::new(x, 0)).collect::<Vec<_>>());
        assert_eq!(v.port_strip("F").unwrap(), (1..6).map(|x| Cell::new(x, 6)).collect::<Vec<_>>());
        let d = duplicator_gadget();
        assert_eq!(d.port_strip("out2").unwrap().len(), 6);
        assert!(v.port_strip("X").is_err());
    }

    #[test]
    fn transformed_ports_stay_open() {
        let l = connector_l();
        for t in Transform::all() {
            let m = l.transformed(t);
            assert_eq!(m.shape.len(), l.shape.len());
            let (x0, y0, _, _) = m.shape.bbox();
            assert_eq!((x0, y0), (0, 0));
            for p in &m.ports {
                let (dx, dy) = p.dir.delta();
                assert!(m.shape.contains(p.cell));
                assert!(!m.shape.contains(Cell::new(p.cell.x + dx, p.cell.y + dy)));
            }
            assert_eq!(m.port_strip("in").unwrap().len(), 5);
        }
    }
}
