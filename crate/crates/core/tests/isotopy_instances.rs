use std::path::PathBuf;

use conftc::isotopy::{format_path_table, map_f, map_g, map_f_inverse};
use conftc::{build_isotopy, plan_with_moving_obstacles, DetourPlanner, Instance};

fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name);
    Instance::load(path).unwrap()
}

#[test]
fn revisit_instance_plans_and_verifies() {
    let inst = instance("segment_revisit.toml");
    let seq = inst.sequence().unwrap();
    let traj = inst.trajectory().unwrap();
    let planner = DetourPlanner { margin: inst.settings.margin };
    let planned =
        plan_with_moving_obstacles(&seq, &traj, &planner, &inst.isotopy_config(), inst.settings.samples_per_leg)
            .unwrap();
    assert_eq!(planned.path.samples().len(), 101);
    for (i, k) in [0, 50, 100].into_iter().enumerate() {
        assert_eq!(planned.path.samples()[k], seq.configs()[i]);
    }
    assert!(planned.report.min_clearance >= inst.settings.min_clearance);
    assert!(planned.snap_error <= inst.settings.tol_inv);
    let table = format_path_table(&planned.path);
    assert_eq!(table.lines().count(), 102);
}

#[test]
fn swap_instance_commutes() {
    let inst = instance("swap.toml");
    let traj = inst.trajectory().unwrap();
    let field = build_isotopy(&traj, &inst.isotopy_config()).unwrap();
    assert!(field.tracking_error() <= 1e-4);
    let seq = inst.sequence().unwrap();
    let stationary = map_g(&seq, &field).unwrap();
    let planner = DetourPlanner { margin: inst.settings.margin };
    let planned = plan_with_moving_obstacles(&seq, &traj, &planner, &inst.isotopy_config(), 50).unwrap();
    let forward = map_f(&planned.path, &field).unwrap();
    let sampled = forward.sample(3).unwrap();
    for (a, b) in sampled.configs().iter().zip(stationary.configs()) {
        for (x, y) in a.iter().zip(b) {
            let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
            assert!(d <= 1e-3, "{d}");
        }
    }
    let back = map_f_inverse(&forward, &field).unwrap();
    assert!(back.sup_distance(&planned.path) <= 1e-3);
}
