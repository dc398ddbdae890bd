//! L1 geodesic distances between lattice points of a closed polyomino.
//!
//! Paths run on the lattice graph whose edges are unit segments lying in the
//! closed shape (boundary segments included). For lattice endpoints this is
//! the continuous L1 geodesic.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::par::maybe_par_map;
use crate::poly::{LatticePoint, Polyomino};

/// Minimum pairwise distance of a guard set; `Infinite` for fewer than two guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dispersion {
    Finite(u32),
    Infinite,
}

impl Dispersion {
    pub fn finite(self) -> Option<u32> {
        match self {
            Dispersion::Finite(d) => Some(d),
            Dispersion::Infinite => None,
        }
    }
}

impl fmt::Display for Dispersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dispersion::Finite(d) => write!(f, "{d}"),
            Dispersion::Infinite => f.write_str("inf"),
        }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Single-source BFS distances over every lattice point of the closed shape.
#[derive(Clone, Debug)]
pub struct DistanceField {
    pub source: LatticePoint,
    origin: (i32, i32),
    stride: i32,
    rows: i32,
    dist: Vec<u32>,
}

impl DistanceField {
    pub fn get(&self, p: LatticePoint) -> Option<u32> {
        let (x, y) = (p.x - self.origin.0, p.y - self.origin.1);
        if x < 0 || y < 0 || x >= self.stride || y >= self.rows {
            return None;
        }
        match self.dist[(y * self.stride + x) as usize] {
            UNREACHED => None,
            d => Some(d),
        }
    }

    /// All reachable points with their distances.
    pub fn iter(&self) -> impl Iterator<Item = (LatticePoint, u32)> + '_ {
        self.dist.iter().enumerate().filter(|(_, &d)| d != UNREACHED).map(move |(i, &d)| {
            let i = i as i32;
            (LatticePoint::new(self.origin.0 + i % self.stride, self.origin.1 + i / self.stride), d)
        })
    }
}

pub fn distance_field(source: LatticePoint, poly: &Polyomino) -> DistanceField {
    let (x0, y0, x1, y1) = poly.point_bbox();
    let stride = x1 - x0 + 1;
    let rows = y1 - y0 + 1;
    let mut dist = vec![UNREACHED; (stride * rows) as usize];
    let idx = |p: LatticePoint| ((p.y - y0) * stride + (p.x - x0)) as usize;
    if poly.contains_point(source) {
        dist[idx(source)] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(p) = queue.pop_front() {
            let d = dist[idx(p)];
            for q in [
                LatticePoint::new(p.x + 1, p.y),
                LatticePoint::new(p.x - 1, p.y),
                LatticePoint::new(p.x, p.y + 1),
                LatticePoint::new(p.x, p.y - 1),
            ] {
                if q.x < x0 || q.x > x1 || q.y < y0 || q.y > y1 {
                    continue;
                }
                if dist[idx(q)] == UNREACHED && poly.unit_segment_inside(p, q) {
                    dist[idx(q)] = d + 1;
                    queue.push_back(q);
                }
            }
        }
    }
    DistanceField { source, origin: (x0, y0), stride, rows, dist }
}

pub fn geodesic_distance(p: LatticePoint, q: LatticePoint, poly: &Polyomino) -> Result<u32> {
    distance_field(p, poly).get(q).ok_or(Error::Unreachable(p, q))
}

/// All-pairs distances between a list of points, row-major `n × n`.
pub fn pairwise_distances(points: &[LatticePoint], poly: &Polyomino) -> Vec<u32> {
    let rows: Vec<Vec<u32>> = maybe_par_map(points, |&p| {
        let field = distance_field(p, poly);
        points.iter().map(|&q| field.get(q).unwrap_or(UNREACHED)).collect()
    });
    rows.concat()
}

pub fn dispersion_distance(guards: &[LatticePoint], poly: &Polyomino) -> Result<Dispersion> {
    if let Some(&g) = guards.iter().find(|&&g| !poly.is_vertex(g)) {
        return Err(Error::NotAVertex(g));
    }
    let mut best = Dispersion::Infinite;
    for (i, &g) in guards.iter().enumerate() {
        let field = distance_field(g, poly);
        for &h in &guards[i + 1..] {
            let d = field.get(h).ok_or(Error::Unreachable(g, h))?;
            best = best.min(Dispersion::Finite(d));
        }
    }
    Ok(best)
}
