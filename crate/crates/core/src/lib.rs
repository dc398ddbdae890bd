//! Guard placement with maximal dispersion on polyominoes.
//!
//! Guards sit on polyomino vertices and see under r-visibility (a point sees
//! another when the axis-parallel rectangle they span lies in the shape);
//! distances are L1 geodesics inside the closed shape. The crate provides the
//! geometric substrate ([`poly`], [`visibility`], [`geodesic`], [`verify`]),
//! a recursive placement achieving dispersion 3 on simple polyominoes
//! ([`worstcase`]), an exact dynamic program for tree-shaped polyominoes
//! ([`treedp`]), an exact branch-and-bound oracle ([`oracle`]), the
//! hardness gadgets and their composition ([`gadgets`]) and text/JSON/SVG
//! input and output ([`io`]).

pub mod batch;
pub mod error;
pub mod gadgets;
pub mod geodesic;
pub mod io;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod treedp;
pub mod verify;
pub mod visibility;
pub mod worstcase;

pub use error::{Error, Result};
pub use geodesic::{dispersion_distance, distance_field, geodesic_distance, Dispersion, DistanceField};
pub use poly::{random_simple, random_tree, BoundaryCycle, Cell, Classification, LatticePoint, Orientation, Polyomino, Side};
pub use verify::{is_guard_set, verify, GuardSet, VerifyReport};
pub use visibility::{cell_visible, point_sees_point, visibility_region, VisibilityRegion};
