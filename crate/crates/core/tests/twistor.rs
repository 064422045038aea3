use cartan_twistor::cartan::*;
use cartan_twistor::dressing::*;
use cartan_twistor::field::ScalarField;
use cartan_twistor::jet::{C64, I, ONE, ZERO};
use cartan_twistor::scene::Scene;
use cartan_twistor::twistor::*;
use cartan_twistor::{Form, Jet, MatrixForm};

const P: [f64; 4] = [0.21, -0.33, 0.125, 0.4];
const K: usize = 4;

fn section(seed: f64) -> MatrixForm {
    let v = |m: usize| Jet::variable(m, P[m], K);
    MatrixForm::from_jets(
        4,
        1,
        vec![
            &v(0).scale(seed) + &Jet::constant(C64::new(0.3, -0.1), K),
            v(1).scale(seed).exp().scale(I),
            &(&v(2) * &v(3)) + &Jet::constant(seed, K),
            &v(3).sin() - &v(0).scale(C64::new(0.5, seed)),
        ],
    )
}

fn normal(name: &str) -> SpinCartanConn {
    normal_connection(&Scene::builtin(name).unwrap().vierbein.at(&P, K).unwrap()).unwrap().conn
}

#[test]
fn flat_constant_section() {
    let conn = normal("flat");
    let pi = [C64::new(1.0, 0.5), C64::new(-0.2, 0.0)];
    let psi = MatrixForm::from_jets(
        4,
        1,
        vec![Jet::constant(pi[0], K), Jet::constant(pi[1], K), Jet::zero(K), Jet::zero(K)],
    );
    let d = twistor_deriv(&psi, &conn).unwrap();
    let pi_col = psi.block(0, 0, 2, 1);
    let expect = (&conn.theta_bar * &pi_col).scale(I);
    assert!(d.block(0, 0, 2, 1).max_abs() < 1e-15);
    assert!(d.block(2, 0, 2, 1).distance(&expect) < 1e-15);
}

#[test]
fn flat_global_twistors_are_parallel() {
    let conn = normal("flat");
    let psi = flat_global_twistor([C64::new(1.0, 0.5), C64::new(-0.2, 0.3)], [ONE, I], &P, K);
    assert!(twistor_deriv(&psi, &conn).unwrap().max_abs() < 1e-14);
}

#[test]
fn undressed_connection_rejected() {
    let mut conn = normal("flat");
    conn.a = Form::one_form(0, Jet::constant(0.1, K));
    assert!(matches!(twistor_deriv(&section(0.1), &conn), Err(cartan_twistor::Error::NotDressed(_))));
}

#[test]
fn friedrich_equivalence_on_bumpy() {
    let s = Scene::builtin("bumpy").unwrap();
    for p in s.points() {
        let psi = {
            let v = |m: usize| Jet::variable(m, p[m], K);
            MatrixForm::from_jets(4, 1, vec![v(0), v(1).exp().scale(I), &v(2) * &v(3), v(3).cos()])
        };
        let r = friedrich_residual(&s.vierbein, &p, &psi).unwrap();
        assert!(r < 1e-7, "{r} at {p:?}");
    }
}

#[test]
fn friedrich_oracle_detects_wrong_schouten_sign() {
    let s = Scene::builtin("bumpy").unwrap();
    let fr = s.vierbein.at(&P, K).unwrap();
    let mut conn = normal_connection(&fr).unwrap().conn;
    conn.p_bar = conn.p_bar.scale(-1.0);
    let psi = section(0.4);
    let ours = components(&twistor_deriv(&psi, &conn).unwrap());
    let oracle = ProlongationData::new(&s.vierbein, &P).unwrap().apply(&psi);
    assert!((ours - oracle).camax() > 1e-4);
}

#[test]
fn bilinear_examples() {
    let col = |v: [f64; 4]| MatrixForm::from_jets(4, 1, v.iter().map(|&x| Jet::constant(x, 0)).collect());
    let psi = col([1.0, 0.0, 1.0, 0.0]);
    assert!((bilinear(&psi, &psi).comps()[0].value() - C64::new(2.0, 0.0)).norm() < 1e-15);
    assert_eq!(helicity(&psi).0, 1.0);
    let null = col([1.0, 0.0, 0.0, 0.0]);
    assert_eq!(bilinear(&null, &null).comps()[0].value(), ZERO);
    let (_, im) = helicity(&section(0.7));
    assert!(im.abs() < 1e-12);
}

#[test]
fn bilinear_is_invariant_under_residual_actions() {
    let fr = Scene::builtin("bumpy").unwrap().vierbein.at(&P, K).unwrap();
    let z = ScalarField::constant(1.0).add(&ScalarField::coordinate(3).scale(0.1));
    let c = WeylCocycle::new(&z.jet(&P, K).unwrap(), &fr).unwrap();
    let s = GaugeField {
        s_log: Some(std::array::from_fn(|k| ScalarField::coordinate(k % 4).scale(0.1 * (k + 1) as f64))),
        ..Default::default()
    }
    .at(&P, K)
    .unwrap()
    .s_bar;
    let (a, b) = (section(0.2), section(-0.6));
    let before = bilinear(&a, &b);
    let wz = |x: &MatrixForm| residual_weyl_section(x, &c).unwrap();
    let ls = |x: &MatrixForm| residual_lorentz_section(x, &s).unwrap();
    assert!(bilinear(&wz(&a), &wz(&b)).distance(&before) < 1e-11);
    assert!(bilinear(&ls(&a), &ls(&b)).distance(&before) < 1e-11);
    assert!(bilinear(&ls(&wz(&a)), &ls(&wz(&b))).distance(&before) < 1e-11);
}

#[test]
fn metric_compatibility_and_negative_control() {
    let pairs = vec![(section(0.1), section(0.9)), (section(-0.4), section(0.3))];
    let flat = normal("flat").matrix();
    assert!(metric_compatibility(&flat, &pairs).unwrap() < 1e-14);
    let bumpy = normal("bumpy");
    assert!(metric_compatibility(&bumpy.matrix(), &pairs).unwrap() < 1e-9);
    let mut bad = bumpy.clone();
    bad.a = Form::one_form(2, Jet::constant(C64::new(0.0, 0.05), K));
    assert!(metric_compatibility(&bad.matrix(), &pairs).unwrap() > 1e-3);
}

#[test]
fn twistor_curvature_acts_on_sections() {
    let conn = normal("bumpy");
    let r = curvature_action_residual(&conn.matrix(), &section(0.3)).unwrap();
    assert!(r < 1e-8);
}

#[test]
fn twistor_curvature_blocks() {
    for name in ["flat", "conformally-flat", "exp-conformal"] {
        let tc = twistor_curvature(&normal(name)).unwrap();
        assert!(tc.matrix.max_abs_value() < 1e-9, "{name}");
        assert!(tc.is_conformally_flat());
    }
    let tc = twistor_curvature(&normal("bumpy")).unwrap();
    assert!(!tc.is_conformally_flat());
    let [_, ur, ll, lr] = tc.matrix.blocks();
    assert!(ll.max_abs_value() < 1e-9);
    assert!(tc.matrix.max_abs_value() > 1e-3);
    assert!(ur.scale(I).value_distance(&tc.cotton) < 1e-12);
    assert!(lr.value_distance(&tc.weyl) < 1e-12);
}

#[test]
fn weyl_laws_exponential_rescaling() {
    let s = Scene::builtin("bumpy").unwrap();
    let z = ScalarField::coordinate(0).scale(0.1).map(|j| Ok(j.exp()));
    let r = weyl_transformation_laws(&s.vierbein, &z, &P, &section(0.5)).unwrap();
    assert!(r.schouten < 1e-7, "{r:?}");
    assert!(r.spin_connection < 1e-10, "{r:?}");
    assert!(r.twistor < 1e-9, "{r:?}");
}

#[test]
fn constant_rescaling_schouten_scaling() {
    let s = Scene::builtin("bumpy").unwrap();
    let z = ScalarField::constant(1.5);
    let hat = s.vierbein.rescaled(&z);
    let (a, b) = (
        cartan_twistor::metric_oracle::metric_curvature(&s.vierbein, &P, 1e-2).unwrap(),
        cartan_twistor::metric_oracle::metric_curvature(&hat, &P, 1e-2).unwrap(),
    );
    assert!((b.schouten - a.schouten).amax() < 1e-8);
    assert!((b.schouten_frame - a.schouten_frame / 2.25).amax() < 1e-8);
    let r = weyl_transformation_laws(&s.vierbein, &z, &P, &section(0.5)).unwrap();
    assert!(r.schouten < 1e-8 && r.twistor < 1e-12);
}
