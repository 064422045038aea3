use cartan_twistor::brst::*;
use cartan_twistor::cartan::*;
use cartan_twistor::dressing::*;
use cartan_twistor::field::ScalarField;
use cartan_twistor::frame::Frame;
use cartan_twistor::grassmann::Grassmann;
use cartan_twistor::jet::I;
use cartan_twistor::scene::Scene;
use cartan_twistor::{Jet, MatrixForm};
use proptest::prelude::*;

const P: [f64; 4] = [0.21, -0.33, 0.125, 0.4];
const K: usize = 4;

fn x(mu: usize) -> ScalarField {
    ScalarField::coordinate(mu)
}

fn c(v: f64) -> ScalarField {
    ScalarField::constant(v)
}

fn frame(name: &str) -> Frame {
    Scene::builtin(name).unwrap().vierbein.at(&P, K).unwrap()
}

/// The normal connection moved by a full `γ̄ = K̄₀K̄₁`.
fn generic(name: &str) -> MatrixForm {
    let g = GaugeField {
        z: Some(x(0).scale(0.1).add(&c(0.1)).map(|j| Ok(j.exp()))),
        s_log: Some([x(0).scale(0.3), c(0.0), x(2).scale(0.15), x(1).scale(0.3), c(0.06), c(0.0)]),
        r: Some([x(1).scale(0.1), c(0.02), x(0).mul(&x(3)).scale(0.3), x(2).scale(-0.1).add(&c(0.1))]),
        ..Default::default()
    }
    .at(&P, K)
    .unwrap();
    let normal = normal_connection(&frame(name)).unwrap().conn;
    gauge_transform(&normal.matrix(), &g.matrix().unwrap()).unwrap()
}

fn ghosts() -> GhostField {
    GhostField {
        eps: Some(c(0.3).add(&x(0).scale(0.2)).add(&x(1).mul(&x(2)).scale(-0.1))),
        s: Some([x(3).scale(0.4), c(-0.2), x(0).scale(0.3).add(&c(0.1)), c(0.25), x(2).scale(-0.5), x(1).mul(&x(1))]),
        rho: Some([c(0.1), x(2).scale(0.3), x(0).mul(&x(3)), c(-0.4).add(&x(1))]),
    }
}

fn twistor() -> MatrixForm {
    let v = |m: usize| Jet::variable(m, P[m], K);
    MatrixForm::from_jets(4, 1, vec![v(0), v(1).exp().scale(I), &v(2) * &v(3), &v(3) - &v(0).scale(0.5)])
}

struct Dressed {
    conn: SpinCartanConn,
    psi: MatrixForm,
    frame: Frame,
    u: DressingField,
    g: GhostJets,
}

fn dressed(name: &str) -> Dressed {
    let varpi = generic(name);
    let conn = SpinCartanConn::from_matrix(&varpi);
    let u = extract_dressing(&conn).unwrap();
    let frame = frame_of(&conn).unwrap();
    Dressed {
        conn: SpinCartanConn::from_matrix(&dress_connection(&varpi, &u).unwrap()),
        psi: dress_section(&twistor(), &u).unwrap(),
        frame,
        u,
        g: ghosts().at(&P, K).unwrap(),
    }
}

#[test]
fn nilpotent_on_generic_fields() {
    let g = ghosts().at(&P, K).unwrap();
    let env = BrstEnv::new(&generic("bumpy"), &twistor(), g.v()).unwrap();
    let r = nilpotency_residual(&env).unwrap();
    assert!(r < 1e-12, "{r}");
    assert!(curvature_consistency(&env).unwrap() < 1e-12);
    assert!(russian_formula_residual(&env).unwrap() < 1e-12);
}

#[test]
fn wrong_curvature_rule_breaks_consistency() {
    let g = ghosts().at(&P, K).unwrap();
    let mut env = BrstEnv::new(&generic("bumpy"), &twistor(), g.v()).unwrap();
    env.curv = env.curv.scale(-1.0);
    assert!(curvature_consistency(&env).unwrap() > 1e-3);
}

#[test]
fn s_is_the_linearized_gauge_action() {
    let g = ghosts().at(&P, K).unwrap();
    let varpi = generic("bumpy");
    let r = linearization_residual(&varpi, &twistor(), &g, 1e-4).unwrap();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn dressed_ghost_routes_agree_and_lose_rho() {
    let d = dressed("bumpy");
    let conj = dressed_ghost(&d.g, &d.u, &d.frame).unwrap();
    let closed = dressed_ghost_closed(&d.g, &d.frame).unwrap();
    assert!(rho_residual(&d.g.v()) > 0.1);
    assert!(rho_residual(&conj) < 1e-12);
    assert!(conj.distance(&closed) < 1e-12, "{}", conj.distance(&closed));
    let [_, _, ll, _] = closed.coefficient(1).blocks();
    assert!(ll.max_abs() == 0.0);
}

#[test]
fn s_of_dressing_field_matches_finite_differences() {
    let varpi = generic("bumpy");
    let d = dressed("bumpy");
    let su = s_dressing(&d.g, &d.u, &d.frame).unwrap();
    let t = 1e-4;
    let dressing_at = |gen: usize, t: f64| {
        let gamma = d.g.generator_matrix(gen).scale(t).exp().unwrap();
        let moved = gauge_transform(&varpi, &gamma).unwrap();
        extract_dressing(&SpinCartanConn::from_matrix(&moved)).unwrap().u
    };
    for gen in 0..GENERATORS {
        let fd = (&dressing_at(gen, t) - &dressing_at(gen, -t)).scale(0.5 / t);
        let r = fd.value_distance(&su.coefficient(1 << gen));
        assert!(r < 1e-6, "generator {gen}: {r}");
    }
}

#[test]
fn dressed_closed_forms_match_generic_rules() {
    let d = dressed("bumpy");
    let v1 = dressed_ghost_closed(&d.g, &d.frame).unwrap();
    let env = BrstEnv::new(&d.conn.matrix(), &d.psi, v1).unwrap();
    let eval = |f: Field| BrstExpr::leaf(f).s().eval(&env).unwrap();
    let curv = SpinCurvature::from_matrix(&env.curv.coefficient(0));
    let checks = [
        (eval(Field::Conn), dressed_brst_connection(&d.conn, &d.g, &d.frame).unwrap()),
        (eval(Field::Curv), dressed_brst_curvature(&curv, &d.g, &d.frame).unwrap()),
        (eval(Field::Section), dressed_brst_section(&d.psi, &d.g, &d.frame).unwrap()),
        (eval(Field::Ghost), dressed_brst_ghost(&d.g, &d.frame).unwrap()),
    ];
    for (i, (generic, closed)) in checks.iter().enumerate() {
        let r = generic.distance(closed);
        assert!(r < 1e-11, "field {i}: {r}");
    }
    assert!(nilpotency_residual(&env).unwrap() < 1e-12);
}

#[test]
fn dressed_s_is_the_linearized_residual_action() {
    let d = dressed("bumpy");
    let r = dressed_linearization_residual(&d.conn, &d.psi, &d.g, &d.frame, 1e-4).unwrap();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn dressed_brst_of_ghost_flips_sign_under_wrong_rule() {
    let d = dressed("bumpy");
    let v1 = dressed_ghost_closed(&d.g, &d.frame).unwrap();
    let sq: Grassmann = &v1 * &v1;
    let closed = dressed_brst_ghost(&d.g, &d.frame).unwrap();
    assert!((&closed + &sq).max_abs() < 1e-13);
    assert!(closed.distance(&sq) > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn nilpotency_at_random_points(p in prop::array::uniform4(-0.4f64..0.4)) {
        let fr = Scene::builtin("bumpy").unwrap().vierbein.at(&p, 3).unwrap();
        let varpi = normal_connection(&fr).unwrap().conn.matrix();
        let g = ghosts().at(&p, 3).unwrap();
        let psi = MatrixForm::from_jets(4, 1, (0..4).map(|m| Jet::variable(m, p[m], 3).exp()).collect());
        let env = BrstEnv::new(&varpi, &psi, g.v()).unwrap();
        prop_assert!(nilpotency_residual(&env).unwrap() < 1e-12);
    }
}
