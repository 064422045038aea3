//! Shared inputs for the benchmarks.

use cartan_twistor::brst::GhostJets;
use cartan_twistor::checks::{ghost_field, test_section, PointData};
use cartan_twistor::scene::Scene;
use cartan_twistor::MatrixForm;

pub const POINT: [f64; 4] = [0.21, -0.33, 0.125, 0.4];

pub fn scene(name: &str) -> Scene {
    Scene::builtin(name).expect("built-in scene")
}

/// Generic connection, test section and ghosts of a built-in scene at `POINT`.
pub fn brst_inputs(name: &str, order: usize) -> (MatrixForm, MatrixForm, GhostJets) {
    let s = scene(name);
    let d = PointData::new(&s, &POINT, order).expect("point data");
    let g = ghost_field(&s).at(&POINT, order).expect("ghost jets");
    (d.generic, test_section(&POINT, order), g)
}
