//! Text, JSON and SVG formats.
//!
//! Guard files are JSON objects with one required key:
//!
//! ```text
//! {"guards":[[0,0],[3,2]]}
//! ```
//!
//! Reports written by the solvers add optional keys in a fixed order:
//! `instance`, `algorithm`, `guards`, `dispersion` (an integer or `"inf"`),
//! `covered` and `elapsed_us`. [`GuardReport::to_json`] writes the compact
//! form followed by a newline, and parsing then serializing that form gives
//! back the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geodesic::{distance_field, Dispersion};
use crate::poly::{Cell, LatticePoint, Polyomino};
use crate::verify::GuardSet;

/// The shape as `#`/`.` rows, top row first, over its bounding box. Rows are
/// joined by `\n` with no trailing newline.
pub fn render_grid(poly: &Polyomino) -> String {
    let (x0, y0, x1, y1) = poly.bbox();
    let rows: Vec<String> = (y0..=y1)
        .rev()
        .map(|y| (x0..=x1).map(|x| if poly.contains(Cell::new(x, y)) { '#' } else { '.' }).collect())
        .collect();
    rows.join("\n")
}

impl Serialize for Dispersion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dispersion::Finite(d) => s.serialize_u32(*d),
            Dispersion::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dispersion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Dispersion::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Dispersion::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("dispersion must be an integer or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    pub guards: Vec<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<Dispersion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covered: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

impl GuardReport {
    pub fn from_guards(guards: &GuardSet) -> Self {
        GuardReport { guards: guards.points().iter().map(|p| [p.x, p.y]).collect(), ..Default::default() }
    }

    pub fn guard_set(&self) -> GuardSet {
        self.guards.iter().map(|&[x, y]| LatticePoint::new(x, y)).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellList {
    cells: Vec<[i32; 2]>,
}

/// Reads `{"cells":[[x,y],...]}`.
pub fn parse_cells(text: &str) -> Result<Vec<Cell>> {
    let list: CellList = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    Ok(list.cells.iter().map(|&[x, y]| Cell::new(x, y)).collect())
}

pub fn cells_to_json(cells: &[Cell]) -> String {
    let list = CellList { cells: cells.iter().map(|c| [c.x, c.y]).collect() };
    let mut s = serde_json::to_string(&list).expect("cell lists serialize");
    s.push('\n');
    s
}

/// A pair of guards at minimum geodesic distance, if there are two guards.
pub fn closest_pair(guards: &GuardSet, poly: &Polyomino) -> Option<(LatticePoint, LatticePoint, u32)> {
    let pts = guards.points();
    let mut best = None;
    for (i, &g) in pts.iter().enumerate() {
        let field = distance_field(g, poly);
        for &h in &pts[i + 1..] {
            if let Some(d) = field.get(h) {
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((g, h, d));
                }
            }
        }
    }
    best
}

/// Extra drawing on top of cells, boundary and guards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annotation {
    /// A straight lattice segment, e.g. a gate or a border.
    Segment { from: LatticePoint, to: LatticePoint, class: String },
    /// Two guards joined by a dashed line and labelled with their distance.
    Pair { a: LatticePoint, b: LatticePoint, label: String },
    /// A shaded cell.
    Cell { cell: Cell, class: String },
}

pub const SVG_UNIT: i32 = 32;

/// SVG drawing with 32 units per cell; the lattice point `(x, y)` is drawn at
/// `(32·(x − x0), 32·(y1 + 1 − y))` so the picture is upright on screen.
pub fn render_svg(poly: &Polyomino, guards: &GuardSet, annotations: &[Annotation]) -> String {
    let (x0, y0, x1, y1) = poly.bbox();
    let u = SVG_UNIT;
    let px = |x: i32| (x - x0) * u;
    let py = |y: i32| (y1 + 1 - y) * u;
    let (w, h) = ((x1 - x0 + 1) * u, (y1 - y0 + 1) * u);
    let mut s = String::new();
    let pad = u / 2;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        -pad,
        -pad,
        w + 2 * pad,
        h + 2 * pad,
        w + 2 * pad,
        h + 2 * pad
    );
    s.push_str("<style>.cell{fill:#e8e8e8;stroke:#c0c0c0;stroke-width:1}.boundary{fill:none;stroke:#202020;stroke-width:3}");
    s.push_str(".guard{fill:#d62728;stroke:#ffffff;stroke-width:2}.pair{stroke:#1f77b4;stroke-width:3;stroke-dasharray:6 4}");
    s.push_str(".gate{stroke:#ff7f0e;stroke-width:4}.border{stroke:#2ca02c;stroke-width:4}.mark{fill:#9467bd;fill-opacity:0.4}");
    s.push_str("text{font:14px sans-serif;fill:#1f77b4}</style>\n");
    for c in poly.cells() {
        let _ = writeln!(s, r#"<rect class="cell" x="{}" y="{}" width="{u}" height="{u}"/>"#, px(c.x), py(c.y + 1));
    }
    for cycle in poly.boundary_cycles() {
        let mut d = String::new();
        for (i, p) in cycle.points.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, px(p.x), py(p.y));
        }
        let _ = writeln!(s, r#"<path class="boundary" d="{d} Z"/>"#);
    }
    for a in annotations {
        match a {
            Annotation::Segment { from, to, class } => {
                let _ = writeln!(
                    s,
                    r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    px(from.x),
                    py(from.y),
                    px(to.x),
                    py(to.y)
                );
            }
            Annotation::Pair { a, b, label } => {
                let _ = writeln!(s, r#"<line class="pair" x1="{}" y1="{}" x2="{}" y2="{}"/>"#, px(a.x), py(a.y), px(b.x), py(b.y));
                let _ = writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, (px(a.x) + px(b.x)) / 2 + 4, (py(a.y) + py(b.y)) / 2 - 4);
            }
            Annotation::Cell { cell, class } => {
                let _ = writeln!(s, r#"<rect class="{class}" x="{}" y="{}" width="{u}" height="{u}"/>"#, px(cell.x), py(cell.y + 1));
            }
        }
    }
    for g in guards.points() {
        let _ = writeln!(s, r#"<circle class="guard" cx="{}" cy="{}" r="7"/>"#, px(g.x), py(g.y));
    }
    s.push_str("</svg>\n");
    s
}

/// Annotation marking the closest guard pair with its distance.
pub fn dispersion_annotation(guards: &GuardSet, poly: &Polyomino) -> Option<Annotation> {
    closest_pair(guards, poly).map(|(a, b, d)| Annotation::Pair { a, b, label: format!("d={d}") })
}
