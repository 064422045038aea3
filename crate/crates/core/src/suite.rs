//! Verification suites: a fixed table of checks, run over the sample points
//! of a scene, assembled into a deterministic report.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::checks::{self, DressedData, PointData, RANDOM_SAMPLES};
use crate::error::{Error, Result};
use crate::field::Point;
use crate::scene::Scene;

pub const TOOL: &str = "cartan-twistor";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Smallest jet order at which every point check has the derivatives it needs.
pub const MIN_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteTag {
    All,
    Calculus,
    Spin,
    Cartan,
    Dressing,
    Twistor,
    Brst,
    Ym,
}

impl SuiteTag {
    pub const SUITES: [SuiteTag; 7] = [
        SuiteTag::Calculus,
        SuiteTag::Spin,
        SuiteTag::Cartan,
        SuiteTag::Dressing,
        SuiteTag::Twistor,
        SuiteTag::Brst,
        SuiteTag::Ym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteTag::All => "all",
            SuiteTag::Calculus => "calculus",
            SuiteTag::Spin => "spin",
            SuiteTag::Cartan => "cartan",
            SuiteTag::Dressing => "dressing",
            SuiteTag::Twistor => "twistor",
            SuiteTag::Brst => "brst",
            SuiteTag::Ym => "ym",
        }
    }

    fn selects(self, suite: SuiteTag) -> bool {
        self == SuiteTag::All || self == suite
    }
}

impl fmt::Display for SuiteTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(SuiteTag::All)
            .chain(SuiteTag::SUITES)
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Scene(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceClass {
    /// Identities exact up to rounding.
    Identity,
    /// Comparisons against finite-difference or finite-parameter routes.
    Oracle,
}

/// Everything a point check may read.
pub struct PointContext<'a> {
    pub scene: &'a Scene,
    pub p: Point,
    pub k: usize,
    pub d: PointData,
    pub dd: DressedData,
}

impl<'a> PointContext<'a> {
    pub fn new(scene: &'a Scene, p: Point, k: usize) -> Result<Self> {
        let d = PointData::new(scene, &p, k)?;
        let dd = DressedData::new(&d, &p, k)?;
        Ok(PointContext { scene, p, k, d, dd })
    }
}

type PointFn = fn(&PointContext) -> Result<f64>;
type GlobalFn = fn(u64) -> Result<f64>;

#[derive(Clone, Copy)]
pub enum CheckKind {
    /// Evaluated at every sample point; the report keeps the maximum.
    Point(PointFn),
    /// Evaluated once on seeded random algebra elements.
    Global(GlobalFn),
}

#[derive(Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub suite: SuiteTag,
    pub anchor: &'static str,
    pub class: ToleranceClass,
    pub kind: CheckKind,
    /// Only run on scenes declared conformally flat.
    pub conformally_flat_only: bool,
}

const fn point(id: &'static str, suite: SuiteTag, anchor: &'static str, class: ToleranceClass, f: PointFn) -> CheckSpec {
    CheckSpec { id, suite, anchor, class, kind: CheckKind::Point(f), conformally_flat_only: false }
}

const fn global(id: &'static str, suite: SuiteTag, anchor: &'static str, f: GlobalFn) -> CheckSpec {
    CheckSpec { id, suite, anchor, class: ToleranceClass::Identity, kind: CheckKind::Global(f), conformally_flat_only: false }
}

use SuiteTag::*;
use ToleranceClass::{Identity as Id, Oracle as Or};

/// Anchors attached to check records.
pub const ANCHORS: [&str; 27] = [
    "exterior-calculus",
    "hodge-star",
    "spin-covering",
    "algebra-morphism",
    "structure-equations",
    "bianchi-identity",
    "GT_0",
    "GT_1",
    "right-action",
    "normal-connection",
    "dressing-field",
    "composite-fields",
    "CompFields_1_S",
    "varpi_1_Z",
    "Omega_1_Z",
    "Twistor_Connection_1",
    "weyl-cocycle",
    "TE3-TE4",
    "twistor-curvature",
    "twistor-bilinear",
    "helicity",
    "brst-algebra",
    "dressed-brst",
    "brst-linearization",
    "weyl-lagrangian",
    "killing-form",
    "Lag-Merk",
];

/// The full check table, in report order.
pub const CHECKS: [CheckSpec; 37] = [
    point("d-squared", Calculus, "exterior-calculus", Id, |c| checks::d_squared(c.scene, &c.p, c.k)),
    point("hodge-involution", Calculus, "hodge-star", Id, |c| checks::hodge_involution(c.scene, &c.p, c.k)),
    global("covering", Spin, "spin-covering", checks::spin_covering),
    global("algebra-morphism", Spin, "algebra-morphism", checks::spin_algebra_morphism),
    point("structure", Cartan, "structure-equations", Id, |c| checks::structure(&c.d)),
    point("bianchi", Cartan, "bianchi-identity", Id, |c| checks::bianchi_residual(&c.d)),
    point("gt0", Cartan, "GT_0", Id, |c| checks::gt0(&c.d)),
    point("gt1", Cartan, "GT_1", Id, |c| checks::gt1(&c.d)),
    point("right-action", Cartan, "right-action", Id, |c| checks::right_action(&c.d, &c.p, c.k)),
    point("normality", Cartan, "normal-connection", Id, |c| checks::normality(&c.d)),
    point("schouten-oracle", Cartan, "normal-connection", Or, |c| checks::schouten_oracle(c.scene, &c.d, &c.p)),
    point("weyl-oracle", Cartan, "normal-connection", Or, |c| checks::weyl_oracle(c.scene, &c.d, &c.p)),
    point("a-block", Dressing, "dressing-field", Id, |c| Ok(checks::a_block(&c.dd))),
    point("boost-invariance", Dressing, "composite-fields", Id, |c| checks::boost_invariance(&c.d, &c.dd, &c.p, c.k)),
    point("residual-lorentz", Dressing, "CompFields_1_S", Id, |c| checks::residual_lorentz_laws(&c.d, &c.dd)),
    point("residual-weyl-connection", Dressing, "varpi_1_Z", Id, |c| checks::residual_weyl_connection(&c.d, &c.dd)),
    point("residual-weyl-curvature", Dressing, "Omega_1_Z", Id, |c| checks::residual_weyl_curv(&c.d, &c.dd)),
    point("residual-weyl-section", Dressing, "Twistor_Connection_1", Id, |c| checks::residual_weyl_sect(&c.d, &c.dd)),
    point("cocycle", Dressing, "weyl-cocycle", Id, |c| checks::cocycle(&c.d, &c.p, c.k)),
    point("friedrich", Twistor, "TE3-TE4", Or, |c| checks::friedrich(c.scene, &c.p, c.k)),
    CheckSpec {
        conformally_flat_only: true,
        ..point("curvature-zero", Twistor, "twistor-curvature", Id, |c| checks::twistor_flatness(&c.d))
    },
    point("curvature-action", Twistor, "twistor-curvature", Id, |c| checks::curvature_action(&c.dd, &c.p, c.k)),
    point("bilinear-invariance", Twistor, "twistor-bilinear", Id, |c| checks::bilinear_invariance(&c.d, &c.dd, &c.p, c.k)),
    point("metric-compatibility", Twistor, "twistor-bilinear", Id, |c| checks::metric_compatibility(&c.dd, &c.p, c.k)),
    point("helicity-reality", Twistor, "helicity", Id, |c| Ok(checks::helicity_reality(&c.dd, &c.p, c.k))),
    point("nilpotency", Brst, "brst-algebra", Id, |c| checks::nilpotency(c.scene, &c.d, &c.p, c.k)),
    point("dressed-ghost", Brst, "dressed-brst", Id, |c| checks::dressed_ghost(c.scene, &c.dd, &c.p, c.k)),
    point("dressed-closed-forms", Brst, "dressed-brst", Id, |c| checks::dressed_closed_forms(c.scene, &c.dd, &c.p, c.k)),
    point("linearization", Brst, "brst-linearization", Or, |c| checks::linearization(c.scene, &c.d, &c.dd, &c.p, c.k)),
    point("spin-routes", Ym, "weyl-lagrangian", Id, |c| checks::spin_routes(&c.d)),
    point("killing-route", Ym, "killing-form", Id, |c| checks::killing_route(&c.d)),
    point("density-reality", Ym, "weyl-lagrangian", Id, |c| checks::reality(&c.d)),
    point("conformal-invariance", Ym, "weyl-lagrangian", Id, |c| checks::conformal_invariance(c.scene, &c.d, &c.p, c.k)),
    point("boost-invariance-density", Ym, "weyl-lagrangian", Id, |c| checks::boost_invariance_density(&c.d)),
    global("killing-ad-invariance", Ym, "killing-form", checks::killing_ad_invariance),
    point("lag-merk", Ym, "Lag-Merk", Id, |c| checks::lag_merk(c.scene, &c.d, &c.p, c.k)),
    point("obstruction", Ym, "Lag-Merk", Id, |c| {
        let o = checks::obstruction(c.scene, &c.d, &c.p, c.k)?;
        Ok(o.identity_residual.max((6 - o.rank) as f64).max(o.forced_f_norm))
    }),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: SuiteTag,
    pub paper_anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub points_evaluated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scene: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Run options layered over the scene's own settings.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub suite: SuiteTag,
    /// Replaces both tolerance classes.
    pub tolerance: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { suite: SuiteTag::All, tolerance: None }
    }
}

pub fn selected_checks(scene: &Scene, suite: SuiteTag) -> Vec<&'static CheckSpec> {
    let flat = scene.file.expect_conformally_flat.unwrap_or(false);
    CHECKS
        .iter()
        .filter(|c| suite.selects(c.suite) && (flat || !c.conformally_flat_only))
        .collect()
}

/// Residuals reduce with `max`, with NaN taken as a failure.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

pub fn run_suite(scene: &Scene, opts: RunOptions) -> Result<Report> {
    let k = scene.file.order;
    if k < MIN_ORDER {
        return Err(Error::Scene(format!("suites need jet order at least {MIN_ORDER}")));
    }
    let specs = selected_checks(scene, opts.suite);
    let point_ids: Vec<usize> = (0..specs.len()).filter(|&i| matches!(specs[i].kind, CheckKind::Point(_))).collect();
    let points = scene.points();

    let per_point: Vec<Vec<f64>> = if point_ids.is_empty() {
        Vec::new()
    } else {
        points
            .par_iter()
            .map(|p| {
                let ctx = PointContext::new(scene, *p, k)?;
                point_ids
                    .iter()
                    .map(|&i| match specs[i].kind {
                        CheckKind::Point(f) => f(&ctx),
                        CheckKind::Global(_) => unreachable!(),
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?
    };
    let globals: Vec<(usize, f64)> = specs
        .par_iter()
        .enumerate()
        .filter_map(|(i, s)| match s.kind {
            CheckKind::Global(f) => Some(f(scene.file.seed).map(|r| (i, r))),
            CheckKind::Point(_) => None,
        })
        .collect::<Result<_>>()?;

    let checks: Vec<CheckRecord> = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let (max_residual, points_evaluated) = match spec.kind {
                CheckKind::Point(_) => {
                    let col = point_ids.iter().position(|&j| j == i).expect("point check");
                    (per_point.iter().map(|r| r[col]).fold(0.0, worst), points.len())
                }
                CheckKind::Global(_) => {
                    (globals.iter().find(|(j, _)| *j == i).expect("global check").1, RANDOM_SAMPLES)
                }
            };
            let tolerance = opts.tolerance.unwrap_or(match spec.class {
                ToleranceClass::Identity => scene.file.tolerance.identity,
                ToleranceClass::Oracle => scene.file.tolerance.oracle,
            });
            CheckRecord {
                id: spec.id.to_string(),
                suite: spec.suite,
                paper_anchor: spec.anchor.to_string(),
                max_residual,
                tolerance,
                passed: max_residual < tolerance,
                points_evaluated,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(Report {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        scene: scene.name().to_string(),
        seed: scene.file.seed,
        summary: Summary { total: checks.len(), passed, failed: checks.len() - passed },
        checks,
    })
}
