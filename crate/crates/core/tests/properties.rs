use dispersive::gadgets::Transform;
use dispersive::io::{render_grid, GuardReport};
use dispersive::oracle::{exact_max_dispersion, OracleBudget};
use dispersive::treedp::solve_tree;
use dispersive::worstcase::solve_worstcase;
use dispersive::*;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = Polyomino> {
    (any::<u64>(), 1usize..60).prop_map(|(seed, n)| random_simple(seed, n).unwrap())
}

fn tree() -> impl Strategy<Value = Polyomino> {
    (any::<u64>(), 1usize..25).prop_map(|(seed, n)| random_tree(seed, n).unwrap())
}

fn pick(poly: &Polyomino, i: usize) -> LatticePoint {
    let pts = poly.lattice_points();
    pts[i % pts.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geodesic_is_a_metric(p in shape(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let (a, b, c) = (pick(&p, i), pick(&p, j), pick(&p, k));
        let ab = geodesic_distance(a, b, &p).unwrap();
        prop_assert_eq!(ab, geodesic_distance(b, a, &p).unwrap());
        prop_assert!(ab >= a.l1(b));
        prop_assert_eq!(ab == 0, a == b);
        let ac = geodesic_distance(a, c, &p).unwrap();
        let cb = geodesic_distance(c, b, &p).unwrap();
        prop_assert!(ab <= ac + cb);
    }

    #[test]
    fn refinement_scales_distances(p in shape(), i in any::<usize>(), j in any::<usize>(), k in 2i32..=3) {
        let (a, b) = (pick(&p, i), pick(&p, j));
        let fine = p.refined(k);
        let scaled = |q: LatticePoint| LatticePoint::new(q.x * k, q.y * k);
        let d = geodesic_distance(a, b, &p).unwrap();
        prop_assert_eq!(geodesic_distance(scaled(a), scaled(b), &fine).unwrap(), d * k as u32);
    }

    #[test]
    fn grid_text_round_trips(p in shape()) {
        let text = render_grid(&p);
        let back = Polyomino::from_grid(&text).unwrap();
        let norm = p.normalized();
        prop_assert_eq!(back.cells(), norm.cells());
        prop_assert_eq!(render_grid(&back), text);
    }

    #[test]
    fn guard_reports_round_trip(pts in prop::collection::vec((-50i32..50, -50i32..50), 0..8), d in prop::option::of(0u32..100), inf in any::<bool>(), cov in prop::option::of(any::<bool>())) {
        let mut r = GuardReport::from_guards(&pts.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect());
        r.dispersion = d.map(|d| if inf { Dispersion::Infinite } else { Dispersion::Finite(d) });
        r.covered = cov;
        let text = r.to_json();
        let back = GuardReport::parse(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn visibility_is_cellwise_and_vertices_are_guards(p in shape(), i in any::<usize>()) {
        let v = p.vertices()[i % p.vertices().len()];
        let region = visibility_region(v, &p);
        prop_assert!(!region.cells.is_empty());
        // Every cell touching a vertex is seen from it.
        for c in p.cells() {
            if c.has_corner(v) {
                prop_assert!(region.contains(*c));
            }
        }
        // All vertices together cover the shape.
        let all = GuardSet::new(p.vertices().iter().copied());
        prop_assert!(verify::uncovered_cells(&all, &p, &[]).is_empty());
    }

    #[test]
    fn symmetries_preserve_dispersion(p in (any::<u64>(), 2usize..14).prop_map(|(s, n)| random_simple(s, n).unwrap()), t in 0usize..8) {
        let t = Transform::all().nth(t).unwrap();
        let q = p.map_cells(|c| t.apply_cell(c)).unwrap();
        let a = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap().best;
        let b = exact_max_dispersion(&q, &[], OracleBudget::default()).unwrap().best;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn worstcase_reaches_three(p in shape()) {
        let sol = solve_worstcase(&p, None).unwrap();
        let r = verify(&sol.guards, &p, Dispersion::Finite(3), &[]).unwrap();
        prop_assert!(r.ok, "{:?}", r);
        prop_assert!(sol.report.failures.is_empty(), "{:?}", sol.report.failures);
    }

    #[test]
    fn oracle_witness_verifies(p in (any::<u64>(), 1usize..20).prop_map(|(s, n)| random_simple(s, n).unwrap())) {
        let sol = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap();
        let r = verify(&sol.witness, &p, sol.best, &[]).unwrap();
        prop_assert!(r.ok);
        prop_assert_eq!(r.dispersion, sol.best);
    }

    #[test]
    fn tree_dp_matches_oracle(p in tree()) {
        let (d, w) = solve_tree(&p).unwrap();
        let o = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap();
        prop_assert_eq!(d, o.best);
        prop_assert!(verify(&w, &p, d, &[]).unwrap().ok);
    }
}
