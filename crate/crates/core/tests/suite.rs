use cartan_twistor::scene::{Scene, SceneFile};
use cartan_twistor::suite::*;
use cartan_twistor::Error;

fn scene(name: &str, points: usize) -> Scene {
    let mut f = SceneFile::builtin(name).unwrap();
    f.points = points;
    Scene::compile(f).unwrap()
}

#[test]
fn suite_tags_round_trip() {
    for tag in std::iter::once(SuiteTag::All).chain(SuiteTag::SUITES) {
        assert_eq!(tag.name().parse::<SuiteTag>().unwrap(), tag);
    }
    assert!("gravity".parse::<SuiteTag>().is_err());
}

#[test]
fn anchors_come_from_the_table_and_ids_are_unique() {
    for c in CHECKS.iter() {
        assert!(ANCHORS.contains(&c.anchor), "{}", c.anchor);
        assert_eq!(CHECKS.iter().filter(|d| d.id == c.id).count(), 1, "{}", c.id);
    }
    for a in ANCHORS {
        assert!(CHECKS.iter().any(|c| c.anchor == a), "unused anchor {a}");
    }
}

#[test]
fn flat_scene_passes_every_check_with_zero_curvature() {
    let r = run_suite(&scene("flat", 3), RunOptions::default()).unwrap();
    assert!(r.all_passed(), "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    for id in ["curvature-zero", "schouten-oracle", "weyl-oracle", "killing-route"] {
        let c = r.checks.iter().find(|c| c.id == id).unwrap();
        assert_eq!(c.max_residual, 0.0, "{id}");
    }
}

#[test]
fn curvature_zero_check_only_on_conformally_flat_scenes() {
    let has = |name: &str| selected_checks(&scene(name, 1), SuiteTag::Twistor).iter().any(|c| c.id == "curvature-zero");
    assert!(has("conformally-flat"));
    assert!(!has("bumpy"));
}

#[test]
fn tiny_tolerance_fails_with_reported_residuals() {
    let opts = RunOptions { suite: SuiteTag::Cartan, tolerance: Some(1e-20) };
    let r = run_suite(&scene("bumpy", 2), opts).unwrap();
    assert!(!r.all_passed());
    assert_eq!(r.summary.passed + r.summary.failed, r.summary.total);
    for c in &r.checks {
        assert_eq!(c.passed, c.max_residual < c.tolerance);
        assert_eq!(c.tolerance, 1e-20);
        assert_eq!(c.points_evaluated, 2);
    }
}

#[test]
fn suite_selection_filters_checks() {
    let r = run_suite(&scene("flat", 1), RunOptions { suite: SuiteTag::Spin, tolerance: None }).unwrap();
    assert!(r.checks.iter().all(|c| c.suite == SuiteTag::Spin));
    assert_eq!(r.summary.total, 2);
}

#[test]
fn low_order_rejected() {
    let mut f = SceneFile::builtin("flat").unwrap();
    f.order = 3;
    let s = Scene::compile(f).unwrap();
    assert!(matches!(run_suite(&s, RunOptions::default()), Err(Error::Scene(_))));
}

#[test]
fn report_json_is_byte_stable_and_ordered() {
    let s = scene("bumpy", 2);
    let opts = RunOptions { suite: SuiteTag::Dressing, tolerance: None };
    let a = run_suite(&s, opts).unwrap().to_json();
    let b = run_suite(&s, opts).unwrap().to_json();
    assert_eq!(a, b);
    let keys = ["\"tool\"", "\"version\"", "\"scene\"", "\"seed\"", "\"checks\"", "\"summary\""];
    let pos: Vec<usize> = keys.iter().map(|k| a.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    let rec = ["\"id\"", "\"suite\"", "\"paper_anchor\"", "\"max_residual\"", "\"tolerance\"", "\"passed\""];
    let pos: Vec<usize> = rec.iter().map(|k| a.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert!(a.contains("\"suite\": \"dressing\""));
}
