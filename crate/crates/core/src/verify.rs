//! Certificate checks: coverage and dispersion of a proposed vertex set.
//! Polynomial time, no search.

use crate::error::{Error, Result};
use crate::geodesic::{dispersion_distance, Dispersion};
use crate::poly::{Cell, LatticePoint, Polyomino};
use crate::visibility::sees_cell;

/// A set of guard positions, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardSet {
    guards: Vec<LatticePoint>,
}

impl GuardSet {
    pub fn new<I: IntoIterator<Item = LatticePoint>>(guards: I) -> Self {
        let mut guards: Vec<LatticePoint> = guards.into_iter().collect();
        guards.sort();
        guards.dedup();
        GuardSet { guards }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.guards
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.guards.binary_search(&p).is_ok()
    }
}

impl FromIterator<LatticePoint> for GuardSet {
    fn from_iter<I: IntoIterator<Item = LatticePoint>>(iter: I) -> Self {
        GuardSet::new(iter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub covered: bool,
    pub dispersion: Dispersion,
    pub ok: bool,
}

fn check_vertices(guards: &GuardSet, poly: &Polyomino) -> Result<()> {
    match guards.points().iter().find(|&&g| !poly.is_vertex(g)) {
        Some(&g) => Err(Error::NotAVertex(g)),
        None => Ok(()),
    }
}

/// Cells (from `poly.cells()`) not seen by any guard and not pre-covered.
pub fn uncovered_cells(guards: &GuardSet, poly: &Polyomino, pre_covered: &[Cell]) -> Vec<Cell> {
    let mut pre = pre_covered.to_vec();
    pre.sort();
    poly.cells()
        .iter()
        .copied()
        .filter(|c| pre.binary_search(c).is_err())
        .filter(|&c| !guards.points().iter().any(|&g| sees_cell(poly, g, c)))
        .collect()
}

pub fn is_guard_set(guards: &GuardSet, poly: &Polyomino) -> Result<bool> {
    check_vertices(guards, poly)?;
    Ok(uncovered_cells(guards, poly, &[]).is_empty())
}

pub fn verify(guards: &GuardSet, poly: &Polyomino, required: Dispersion, pre_covered: &[Cell]) -> Result<VerifyReport> {
    check_vertices(guards, poly)?;
    if let Some(&c) = pre_covered.iter().find(|&&c| !poly.contains(c)) {
        return Err(Error::OutsideShape(c));
    }
    let covered = uncovered_cells(guards, poly, pre_covered).is_empty();
    let dispersion = dispersion_distance(guards.points(), poly)?;
    Ok(VerifyReport { covered, dispersion, ok: covered && dispersion >= required })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(v: &[(i32, i32)]) -> GuardSet {
        v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()
    }

    #[test]
    fn guard_sets() {
        let u5 = Polyomino::from_grid("#.#\n###").unwrap();
        assert_eq!(is_guard_set(&gs(&[(1, 1)]), &u5), Ok(false));
        assert_eq!(is_guard_set(&gs(&[(1, 1), (2, 1)]), &u5), Ok(true));
        let bar = Polyomino::from_grid("###").unwrap();
        assert_eq!(is_guard_set(&gs(&[(0, 0)]), &bar), Ok(true));
        assert_eq!(is_guard_set(&gs(&[(1, 0)]), &bar), Err(Error::NotAVertex(LatticePoint::new(1, 0))));
    }

    #[test]
    fn verification() {
        let sq = Polyomino::from_grid("##\n##").unwrap();
        let r = verify(&GuardSet::default(), &sq, Dispersion::Infinite, sq.cells()).unwrap();
        assert_eq!(r, VerifyReport { covered: true, dispersion: Dispersion::Infinite, ok: true });
        let u5 = Polyomino::from_grid("#.#\n###").unwrap();
        let r = verify(&gs(&[(1, 1)]), &u5, Dispersion::Finite(1), &[Cell::new(2, 1)]).unwrap();
        assert!(r.ok);
        let r = verify(&gs(&[(0, 0), (2, 0)]), &sq, Dispersion::Finite(3), &[]).unwrap();
        assert_eq!((r.dispersion, r.ok), (Dispersion::Finite(2), false));
        assert!(matches!(verify(&gs(&[]), &sq, Dispersion::Finite(1), &[Cell::new(5, 5)]), Err(Error::OutsideShape(_))));
    }
}
