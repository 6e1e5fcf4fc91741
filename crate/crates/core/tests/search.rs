use skewcorner::groups::AbelianGroup;
use skewcorner::oracle;
use skewcorner::search::{
    greedy_heuristic, max_bi_skew_exact, max_skew_grid_exact, max_skew_tri_exact, val_group_exact, val_plane_exact,
    Budget, Instance, Objective, Status, Symmetry, DEFAULT_GROUP_CAP,
};
use skewcorner::textio::{load, save, Certificate};

#[test]
fn known_grid_values() {
    let b = Budget::default();
    let values: Vec<u64> = (1..=8).map(|n| max_skew_grid_exact(n, &b).unwrap().best_value).collect();
    for (i, w) in values.windows(2).enumerate() {
        assert!(w[0] <= w[1], "not monotone at n={}", i + 1);
    }
    for n in 1..=5 {
        assert_eq!(values[n as usize - 1], oracle::max_skew_grid(n).0);
    }
}

#[test]
fn witnesses_survive_the_text_format() {
    let b = Budget::default();
    let results = [
        max_skew_grid_exact(7, &b).unwrap(),
        max_bi_skew_exact(5, &b).unwrap(),
        max_skew_tri_exact(6, Symmetry::None, &b).unwrap(),
        max_skew_tri_exact(12, Symmetry::S3, &b).unwrap(),
        val_plane_exact(5, &b).unwrap(),
        val_group_exact(&"Z2xZ3".parse::<AbelianGroup>().unwrap(), DEFAULT_GROUP_CAP, &b).unwrap(),
    ];
    for r in results {
        r.check_witness().unwrap();
        assert_eq!(r.status, Status::Optimal);
        let text = save(&Certificate::from(&r.witness));
        assert_eq!(load(&text).unwrap(), Certificate::from(&r.witness));
    }
}

#[test]
fn report_shape() {
    let r = max_skew_grid_exact(4, &Budget::default()).unwrap();
    let v = r.to_json();
    for key in ["objective", "n", "value", "status", "witness", "nodes", "seconds"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["objective"], "max-skew-grid");
    assert_eq!(v["status"], "Optimal");
}

#[test]
fn exhausted_budget_is_reported() {
    let b = Budget::new(50, 600.0, 1).unwrap();
    let r = max_skew_tri_exact(10, Symmetry::None, &b).unwrap();
    assert_eq!(r.status, Status::TimedOut);
    r.check_witness().unwrap();
    let h = greedy_heuristic(Objective::MaxSkewTri, &Instance::Size(10), Symmetry::None, 3, 2).unwrap();
    assert_eq!(h.status, Status::LowerBoundOnly);
    assert!(h.best_value >= 11);
}

#[test]
fn workers_do_not_change_values() {
    let one = Budget::new(1_000_000_000, 600.0, 1).unwrap();
    let four = Budget::new(1_000_000_000, 600.0, 4).unwrap();
    for n in [5, 8] {
        let a = max_skew_tri_exact(n, Symmetry::None, &one).unwrap();
        let b = max_skew_tri_exact(n, Symmetry::None, &four).unwrap();
        assert_eq!(a.best_value, b.best_value);
    }
    let g = AbelianGroup::cyclic(7).unwrap();
    assert_eq!(
        val_group_exact(&g, DEFAULT_GROUP_CAP, &one).unwrap().best_value,
        val_group_exact(&g, DEFAULT_GROUP_CAP, &four).unwrap().best_value
    );
}
