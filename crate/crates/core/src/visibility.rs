//! r-visibility: `p` sees `q` when the closed axis-parallel rectangle spanned
//! by the two points lies inside the closed polyomino.
//!
//! For a lattice point `g` and a cell `c`, every interior point of `c` spans a
//! rectangle with `g` that meets exactly the cells of one box, so a cell is
//! either seen entirely or not at all and coverage can be decided per cell.

use crate::error::{Error, Result};
use crate::poly::{Cell, LatticePoint, Polyomino};

/// The cells visible from a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityRegion {
    pub owner: LatticePoint,
    pub cells: Vec<Cell>,
}

impl VisibilityRegion {
    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }
}

/// Cell box between `g` and `c`: it contains `c` and abuts `g`.
fn cell_box(g: LatticePoint, c: Cell) -> (i32, i32, i32, i32) {
    let (x0, x1) = if g.x <= c.x { (g.x, c.x) } else { (c.x, g.x - 1) };
    let (y0, y1) = if g.y <= c.y { (g.y, c.y) } else { (c.y, g.y - 1) };
    (x0, y0, x1, y1)
}

/// Unchecked variant for callers that already know `c` is in `poly`.
#[inline]
pub(crate) fn sees_cell(poly: &Polyomino, g: LatticePoint, c: Cell) -> bool {
    let (x0, y0, x1, y1) = cell_box(g, c);
    poly.box_filled(x0, y0, x1, y1)
}

pub fn cell_visible(g: LatticePoint, c: Cell, poly: &Polyomino) -> Result<bool> {
    if !poly.contains(c) {
        return Err(Error::OutsideShape(c));
    }
    Ok(sees_cell(poly, g, c))
}

pub fn visibility_region(g: LatticePoint, poly: &Polyomino) -> VisibilityRegion {
    let cells = poly.cells().iter().copied().filter(|&c| sees_cell(poly, g, c)).collect();
    VisibilityRegion { owner: g, cells }
}

/// Visibility as a mask indexed like `poly.cells()`.
pub fn visibility_mask(g: LatticePoint, poly: &Polyomino) -> Vec<bool> {
    poly.cells().iter().map(|&c| sees_cell(poly, g, c)).collect()
}

pub fn point_sees_point(p: LatticePoint, q: LatticePoint, poly: &Polyomino) -> bool {
    if p == q {
        return poly.contains_point(p);
    }
    if p.y == q.y {
        let (lo, hi) = (p.x.min(q.x), p.x.max(q.x));
        return (lo..hi).all(|x| poly.unit_segment_inside(LatticePoint::new(x, p.y), LatticePoint::new(x + 1, p.y)));
    }
    if p.x == q.x {
        let (lo, hi) = (p.y.min(q.y), p.y.max(q.y));
        return (lo..hi).all(|y| poly.unit_segment_inside(LatticePoint::new(p.x, y), LatticePoint::new(p.x, y + 1)));
    }
    poly.box_filled(p.x.min(q.x), p.y.min(q.y), p.x.max(q.x) - 1, p.y.max(q.y) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u5() -> Polyomino {
        Polyomino::from_grid("#.#\n###").unwrap()
    }

    fn lp(x: i32, y: i32) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn cell_visibility_examples() {
        let l = Polyomino::from_grid("#.\n##").unwrap();
        assert!(cell_visible(lp(1, 1), Cell::new(1, 0), &l).unwrap());
        assert!(!cell_visible(lp(0, 2), Cell::new(2, 0), &u5()).unwrap());
        assert!(!cell_visible(lp(1, 1), Cell::new(2, 1), &u5()).unwrap());
        assert_eq!(cell_visible(lp(0, 0), Cell::new(1, 1), &u5()), Err(Error::OutsideShape(Cell::new(1, 1))));
    }

    #[test]
    fn regions() {
        let bar = Polyomino::from_grid("###").unwrap();
        assert_eq!(visibility_region(lp(0, 0), &bar).cells.len(), 3);
        let l = Polyomino::from_grid("#.\n##").unwrap();
        assert_eq!(visibility_region(lp(1, 1), &l).cells.len(), 3);
        let v = visibility_region(lp(1, 1), &u5());
        assert_eq!(v.cells, vec![Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0), Cell::new(2, 0)]);
    }

    #[test]
    fn point_pairs() {
        assert!(point_sees_point(lp(1, 1), lp(1, 1), &u5()));
        assert!(!point_sees_point(lp(0, 2), lp(3, 2), &u5()));
        let sq = Polyomino::from_grid("##\n##").unwrap();
        assert!(point_sees_point(lp(0, 0), lp(2, 2), &sq));
        // along a wall
        assert!(point_sees_point(lp(0, 0), lp(3, 0), &u5()));
        assert!(!point_sees_point(lp(5, 5), lp(5, 5), &u5()));
    }
}
