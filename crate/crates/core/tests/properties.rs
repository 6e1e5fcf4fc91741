use proptest::prelude::*;

use skewcorner::constructions::{is_line_trapezoid_free, LineTriple};
use skewcorner::grid_sets::{
    is_bi_skew_corner_free, is_corner_free_tri, is_skew_corner_free_grid, is_skew_corner_free_tri,
    project_tri_to_grid, GridSet, TriSet, S3,
};
use skewcorner::groups::{count_zero_sum_triples, is_trapezoid_free, AbelianGroup, GroupTriple};
use skewcorner::search::{greedy_heuristic, Instance, Objective, Symmetry};
use skewcorner::stpp::{
    omega_bound, packing_bound_check, stpp_to_trapezoid_witness, verify_stpp, verify_tpp, StppFamily, StppTriple,
};
use skewcorner::textio::{load, save, Certificate};

fn grid_brute(points: &[(u32, u32)]) -> bool {
    for &(x, y) in points {
        for &(x2, y2) in points {
            if x != x2 || y2 <= y {
                continue;
            }
            let d = y2 - y;
            if points.iter().any(|&(x3, _)| x3 == x + d || x3 + d == x) {
                return false;
            }
        }
    }
    true
}

fn tri_brute(points: &[(u32, u32, u32)]) -> bool {
    for perm in S3 {
        let p: Vec<[i64; 3]> = points
            .iter()
            .map(|&(a, b, c)| {
                let v = [a as i64, b as i64, c as i64];
                [v[perm[0]], v[perm[1]], v[perm[2]]]
            })
            .collect();
        for u in &p {
            for w in &p {
                if u[0] == w[0] && u[1] != w[1] {
                    let line = u[0] + u[1] - w[1];
                    if p.iter().any(|z| z[0] == line) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn grid_points(n: u32) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((1..=n, 1..=n), 0..12)
}

fn tri_set(n: u32) -> impl Strategy<Value = TriSet> {
    let all: Vec<_> = TriSet::full(n).points().collect();
    prop::sample::subsequence(all.clone(), 0..=all.len().min(10))
        .prop_map(move |pts| TriSet::from_points(n, pts).unwrap())
}

fn subset(order: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..order, 1..=max)
}

fn trapezoid_free_triple(g: AbelianGroup) -> impl Strategy<Value = GroupTriple> {
    let order = g.order();
    prop::collection::vec((0..3usize, 0..order), 0..3 * order).prop_map(move |moves| {
        let mut parts: [Vec<usize>; 3] = Default::default();
        for (p, e) in moves {
            parts[p].push(e);
            let t = GroupTriple::from_indices(g.clone(), parts[0].clone(), parts[1].clone(), parts[2].clone())
                .unwrap();
            if !is_trapezoid_free(&t) {
                parts[p].pop();
            }
        }
        let [a, b, c] = parts;
        GroupTriple::from_indices(g.clone(), a, b, c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn skew_grid_matches_definition(pts in grid_points(7)) {
        let s = GridSet::from_points(7, pts.clone()).unwrap();
        prop_assert_eq!(is_skew_corner_free_grid(&s), grid_brute(&pts));
    }

    #[test]
    fn bi_skew_is_both_orientations(pts in grid_points(6)) {
        let s = GridSet::from_points(6, pts).unwrap();
        let both = is_skew_corner_free_grid(&s) && is_skew_corner_free_grid(&s.transpose());
        prop_assert_eq!(is_bi_skew_corner_free(&s), both);
    }

    #[test]
    fn skew_tri_matches_definition(s in tri_set(6)) {
        let pts: Vec<_> = s.points().collect();
        prop_assert_eq!(is_skew_corner_free_tri(&s), tri_brute(&pts));
        for perm in S3 {
            prop_assert_eq!(is_skew_corner_free_tri(&s.permute(perm)), is_skew_corner_free_tri(&s));
        }
    }

    #[test]
    fn skew_free_tri_is_corner_free(s in tri_set(7)) {
        if is_skew_corner_free_tri(&s) {
            prop_assert!(is_corner_free_tri(&s));
        }
    }

    #[test]
    fn text_round_trip(pts in grid_points(9), t in tri_set(5)) {
        for c in [Certificate::Grid(GridSet::from_points(9, pts.clone()).unwrap()), Certificate::Tri(t.clone())] {
            let text = save(&c);
            let back = load(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(save(&back), text);
        }
    }

    #[test]
    fn trapezoid_freeness_closed_under_shift_and_product(
        t in trapezoid_free_triple(AbelianGroup::cyclic(5).unwrap()),
        u in trapezoid_free_triple("Z2xZ2".parse().unwrap()),
    ) {
        prop_assert!(is_trapezoid_free(&t.cyclic_shift()));
        let p = t.product(&u).unwrap();
        prop_assert!(is_trapezoid_free(&p));
        prop_assert_eq!(count_zero_sum_triples(&p), count_zero_sum_triples(&t) * count_zero_sum_triples(&u));
    }

    #[test]
    fn line_triples_project_without_loss(a in prop::collection::vec(0..=9u32, 0..8),
                                         b in prop::collection::vec(0..=9u32, 0..8),
                                         c in prop::collection::vec(0..=9u32, 0..8)) {
        let t = LineTriple::new(9, a, b, c).unwrap();
        if is_line_trapezoid_free(&t) {
            let sol = t.solutions();
            prop_assert!(is_corner_free_tri(&sol));
            prop_assert!(is_skew_corner_free_tri(&sol));
            let g = project_tri_to_grid(&sol);
            prop_assert!(is_skew_corner_free_grid(&g));
            prop_assert_eq!(g.len(), sol.len());
        }
    }

    #[test]
    fn tpp_matches_definition(s in subset(7, 3), t in subset(7, 3), u in subset(7, 3)) {
        let g = AbelianGroup::cyclic(7).unwrap();
        let mut brute = true;
        for &s1 in &s { for &s2 in &s { for &t1 in &t { for &t2 in &t { for &u1 in &u { for &u2 in &u {
            let sum = (7 + s1 - s2 + 7 + t1 - t2 + 7 + u1 - u2) % 7;
            if sum == 0 && !(s1 == s2 && t1 == t2 && u1 == u2) {
                brute = false;
            }
        }}}}}}
        prop_assert_eq!(verify_tpp(&g, &s, &t, &u), brute);
    }

    #[test]
    fn valid_families_pack_and_give_witnesses(
        triples in prop::collection::vec((subset(12, 3), subset(12, 3), subset(12, 3)), 1..4),
    ) {
        let g: AbelianGroup = "Z2xZ6".parse().unwrap();
        let mut kept: Vec<StppTriple> = Vec::new();
        let mut last_omega = f64::INFINITY;
        for (s, t, u) in triples {
            kept.push(StppTriple::new(s, t, u));
            let f = StppFamily::new(g.clone(), kept.clone()).unwrap();
            if !verify_stpp(&f).is_valid() {
                kept.pop();
                continue;
            }
            let pack = packing_bound_check(&f).unwrap();
            prop_assert!(pack.sums.iter().all(|&x| x <= 12));
            let w = stpp_to_trapezoid_witness(&f).unwrap();
            prop_assert!(is_trapezoid_free(&w));
            let omega = omega_bound(&f).unwrap();
            prop_assert!((2.0..=3.0).contains(&omega.omega));
            prop_assert!(omega.omega <= last_omega + 1e-9);
            last_omega = omega.omega;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn heuristic_witnesses_are_feasible(seed in any::<u64>(), n in 2..6u32) {
        for (o, sym) in [
            (Objective::MaxSkewGrid, Symmetry::None),
            (Objective::MaxBiSkew, Symmetry::None),
            (Objective::MaxSkewTri, Symmetry::S3),
            (Objective::ValPlane, Symmetry::None),
        ] {
            let r = greedy_heuristic(o, &Instance::Size(n), sym, seed, 1).unwrap();
            prop_assert!(r.check_witness().is_ok());
        }
    }
}
