use cartan_twistor::cartan::*;
use cartan_twistor::dressing::*;
use cartan_twistor::field::ScalarField;
use cartan_twistor::frame::Frame;
use cartan_twistor::jet::I;
use cartan_twistor::scene::Scene;
use cartan_twistor::{Jet, MatrixForm};

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

fn normal(name: &str) -> SpinCartanConn {
    normal_connection(&frame(name)).unwrap().conn
}

fn boost_field(k: f64) -> GaugeField {
    GaugeField {
        r: Some([x(1).scale(k), c(0.2 * k), x(0).mul(&x(3)).scale(3.0 * k), x(2).scale(-k).add(&c(0.1))]),
        ..Default::default()
    }
}

fn lorentz_field(k: f64) -> GaugeField {
    GaugeField {
        s_log: Some([x(0).scale(k), c(0.0), x(2).scale(0.5 * k), x(1).scale(k), c(0.2 * k), c(0.0)]),
        ..Default::default()
    }
}

/// A generic (non-dressed) connection: the normal one moved by `γ̄ = K̄₀K̄₁`.
fn generic(name: &str) -> MatrixForm {
    let mut g = boost_field(0.1).at(&P, K).unwrap();
    g.s_bar = lorentz_field(0.3).at(&P, K).unwrap().s_bar;
    g.z = (&Jet::constant(1.0, K) + &Jet::variable(0, P[0], K).scale(0.1)).exp();
    gauge_transform(&normal(name).matrix(), &g.matrix().unwrap()).unwrap()
}

fn twistor() -> MatrixForm {
    let v = |m: usize| Jet::variable(m, P[m], K);
    MatrixForm::from_jets(
        4,
        1,
        vec![v(0), v(1).exp().scale(I), &v(2) * &v(3), &v(3) - &v(0).scale(0.5)],
    )
}

#[test]
fn normal_connection_has_trivial_dressing() {
    let u = extract_dressing(&normal("bumpy")).unwrap();
    assert!(u.q.iter().all(|q| q.max_abs() < 1e-14));
    assert!(u.u.distance(&MatrixForm::identity(4, K)) < 1e-14);
}

#[test]
fn constant_boost_is_recovered() {
    let g = GaugeField { r: Some([c(0.0), c(0.2), c(0.0), c(0.0)]), ..Default::default() };
    let g = g.at(&P, K).unwrap();
    let varpi = gauge_transform(&normal("bumpy").matrix(), &g.k1()).unwrap();
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let expect = [0.0, -0.2, 0.0, 0.0];
    for a in 0..4 {
        assert!((u.q[a].value().re - expect[a]).abs() < 1e-10);
    }
}

#[test]
fn weyl_rescaling_gives_log_gradient_covector() {
    let fr = frame("bumpy");
    let z = &Jet::constant(1.0, K) + &Jet::variable(0, P[0], K).scale(0.1);
    let varpi = gauge_transform(&normal("bumpy").matrix(), &weyl_matrix(&z).unwrap()).unwrap();
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let cz = WeylCocycle::new(&z, &fr).unwrap();
    let zinv = z.recip().unwrap();
    for a in 0..4 {
        assert!(u.q[a].distance(&(&cz.upsilon[a] * &zinv)) < 1e-12);
    }
}

#[test]
fn dressing_kills_the_weyl_potential() {
    for name in ["bumpy", "conformally-flat"] {
        let varpi = generic(name);
        let conn = SpinCartanConn::from_matrix(&varpi);
        assert!(conn.a.max_abs_value() > 1e-3);
        let u = extract_dressing(&conn).unwrap();
        let dressed = SpinCartanConn::from_matrix(&dress_connection(&varpi, &u).unwrap());
        assert!(dressed.a.max_abs_value() < 1e-10, "{name}");
        assert!(dressed.a_bar.trace().max_abs_value() < 1e-10);
    }
}

#[test]
fn composite_fields_are_boost_invariant() {
    let varpi = generic("bumpy");
    let omega = curvature_matrix(&varpi).unwrap();
    let psi = twistor();
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let w1 = dress_connection(&varpi, &u).unwrap();
    let o1 = dress_curvature(&omega, &u).unwrap();
    let p1 = dress_section(&psi, &u).unwrap();
    let dp1 = covariant_derivative(&w1, &p1).unwrap();
    for k in [0.05, -0.3, 1.0] {
        let g = boost_field(k).at(&P, K).unwrap().k1();
        let varpi_g = gauge_transform(&varpi, &g).unwrap();
        let ug = extract_dressing(&SpinCartanConn::from_matrix(&varpi_g)).unwrap();
        let w1g = dress_connection(&varpi_g, &ug).unwrap();
        let o1g = dress_curvature(&conjugate(&omega, &g).unwrap(), &ug).unwrap();
        let p1g = dress_section(&act_on_section(&psi, &g).unwrap(), &ug).unwrap();
        let dp1g = covariant_derivative(&w1g, &p1g).unwrap();
        assert!(w1g.value_distance(&w1) < 1e-9);
        assert!(o1g.value_distance(&o1) < 1e-9);
        assert!(p1g.value_distance(&p1) < 1e-9);
        assert!(dp1g.value_distance(&dp1) < 1e-9);
    }
}

#[test]
fn dressed_curvature_routes_agree() {
    let varpi = generic("bumpy");
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let w1 = dress_connection(&varpi, &u).unwrap();
    let direct = curvature_matrix(&w1).unwrap();
    let conj = dress_curvature(&curvature_matrix(&varpi).unwrap(), &u).unwrap();
    assert!(direct.value_distance(&conj) < 1e-10);
}

#[test]
fn f1_is_minus_trace_of_theta_p() {
    let s = Scene::builtin("bumpy+f").unwrap();
    let fr = s.vierbein.at(&P, K).unwrap();
    let mut conn = normal_connection(&fr).unwrap().conn;
    // An arbitrary non-symmetric P̄ makes the connection non-normal.
    let extra = MatrixForm::from_entries(
        2,
        2,
        vec![
            fr.theta[1].scale(0.3),
            &fr.theta[2].scale(0.1) + &fr.theta[3].scale(I * 0.2),
            &fr.theta[2].scale(0.1) - &fr.theta[3].scale(I * 0.2),
            fr.theta[0].scale(-0.4),
        ],
    )
    .unwrap();
    conn.p_bar = &conn.p_bar + &extra;
    let curv = curvature(&conn).unwrap();
    let f1 = f1_of_blocks(&conn);
    assert!(curv.f.max_abs_value() > 1e-2);
    assert!(curv.f.distance(&real_part(&f1)) < 1e-12);
    assert!(f1.map(Jet::im).max_abs_value() < 1e-13);
}

#[test]
fn residual_lorentz_closed_forms() {
    let varpi = generic("bumpy");
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let w1 = dress_connection(&varpi, &u).unwrap();
    let o1 = curvature_matrix(&w1).unwrap();
    let psi1 = dress_section(&twistor(), &u).unwrap();
    let s = lorentz_field(0.2).at(&P, K).unwrap().s_bar;
    let l = lorentz_matrix(&s).unwrap();
    let generic_conn = gauge_transform(&w1, &l).unwrap();
    let closed = residual_lorentz(&SpinCartanConn::from_matrix(&w1), &s).unwrap().matrix();
    assert!(generic_conn.value_distance(&closed) < 1e-9);
    let closed_o = residual_lorentz_tensor(&o1, &s).unwrap();
    assert!(conjugate(&o1, &l).unwrap().value_distance(&closed_o) < 1e-9);
    let psi_s = residual_lorentz_section(&psi1, &s).unwrap();
    assert!(act_on_section(&psi1, &l).unwrap().value_distance(&psi_s) < 1e-12);
    // (D̄₁ψ₁)^S = S⁻¹D̄₁ψ₁
    let lhs = covariant_derivative(&generic_conn, &psi_s).unwrap();
    let rhs = residual_lorentz_section(&covariant_derivative(&w1, &psi1).unwrap(), &s).unwrap();
    assert!(lhs.value_distance(&rhs) < 1e-10);
    // ū₁^S = S⁻¹ū₁S
    let varpi_s = gauge_transform(&varpi, &l).unwrap();
    let us = extract_dressing(&SpinCartanConn::from_matrix(&varpi_s)).unwrap();
    assert!(us.u.value_distance(&conjugate(&u.u, &l).unwrap()) < 1e-10);
}

#[test]
fn non_unimodular_lorentz_rejected() {
    let conn = normal("flat");
    let s = MatrixForm::identity(2, K).scale(2.0);
    assert!(residual_lorentz(&conn, &s).is_err());
}

fn z_field() -> Jet {
    ScalarField::constant(1.0).add(&x(1).scale(0.1)).add(&x(0).mul(&x(2)).scale(0.2)).jet(&P, K).unwrap()
}

#[test]
fn residual_weyl_closed_forms() {
    let varpi = generic("bumpy");
    let u = extract_dressing(&SpinCartanConn::from_matrix(&varpi)).unwrap();
    let w1 = dress_connection(&varpi, &u).unwrap();
    let conn1 = SpinCartanConn::from_matrix(&w1);
    let o1 = curvature_matrix(&w1).unwrap();
    let psi1 = dress_section(&twistor(), &u).unwrap();
    let z = z_field();
    let cz = WeylCocycle::new(&z, &frame_of(&conn1).unwrap()).unwrap();
    let cm = cz.matrix().unwrap();
    let by_conj = gauge_transform(&w1, &cm).unwrap();
    let closed = residual_weyl(&conn1, &cz).unwrap().matrix();
    assert!(by_conj.value_distance(&closed) < 1e-9);
    assert!(SpinCartanConn::from_matrix(&by_conj).a.max_abs_value() < 1e-10);
    let closed_o = residual_weyl_curvature(&o1, &cz).unwrap();
    assert!(conjugate(&o1, &cm).unwrap().value_distance(&closed_o) < 1e-9);
    let psi_z = residual_weyl_section(&psi1, &cz).unwrap();
    assert!(act_on_section(&psi1, &cm).unwrap().value_distance(&psi_z) < 1e-12);
    let lhs = covariant_derivative(&by_conj, &psi_z).unwrap();
    let rhs = act_on_section(&covariant_derivative(&w1, &psi1).unwrap(), &cm).unwrap();
    assert!(lhs.value_distance(&rhs) < 1e-10);
    // ū₁^Z = Z⁻¹ū₁C(z), with C(z) on the undressed coframe
    let zm = weyl_matrix(&z).unwrap();
    let varpi_z = gauge_transform(&varpi, &zm).unwrap();
    let uz = extract_dressing(&SpinCartanConn::from_matrix(&varpi_z)).unwrap();
    let expect = &(&zm.inverse().unwrap() * &u.u) * &cm;
    assert!(uz.u.value_distance(&expect) < 1e-10);
}

#[test]
fn constant_weyl_is_pure_scaling() {
    let conn = normal("bumpy");
    let z = Jet::constant(1.3, K);
    let cz = WeylCocycle::new(&z, &frame("bumpy")).unwrap();
    assert!(cz.upsilon_bar.max_abs() < 1e-15);
    let out = residual_weyl(&conn, &cz).unwrap();
    assert!(out.theta_bar.distance(&conn.theta_bar.scale(1.3)) < 1e-14);
    assert!(out.p_bar.distance(&conn.p_bar.scale(1.0 / 1.3)) < 1e-14);
    assert!(out.a_bar.distance(&conn.a_bar) < 1e-14);
}

#[test]
fn weyl_transformed_normal_connection_is_normal_connection_of_rescaled_frame() {
    let s = Scene::builtin("bumpy").unwrap();
    let zf = c(1.0).add(&x(1).scale(0.1));
    let fr = s.vierbein.at(&P, K).unwrap();
    let conn = normal_connection(&fr).unwrap().conn;
    let cz = WeylCocycle::new(&zf.jet(&P, K).unwrap(), &fr).unwrap();
    let moved = residual_weyl(&conn, &cz).unwrap();
    let direct = normal_connection(&s.vierbein.rescaled(&zf).at(&P, K).unwrap()).unwrap().conn;
    assert!(moved.p_bar.value_distance(&direct.p_bar) < 1e-7);
    assert!(moved.a_bar.value_distance(&direct.a_bar) < 1e-10);
    assert!(moved.theta_bar.value_distance(&direct.theta_bar) < 1e-12);
}

#[test]
fn lorentz_and_weyl_residual_actions_commute() {
    let conn = SpinCartanConn::from_matrix(&generic("bumpy"));
    let u = extract_dressing(&conn).unwrap();
    let conn1 = SpinCartanConn::from_matrix(&dress_connection(&conn.matrix(), &u).unwrap());
    let s = lorentz_field(0.2).at(&P, K).unwrap().s_bar;
    let z = z_field();
    let sz = {
        let ls = residual_lorentz(&conn1, &s).unwrap();
        residual_weyl(&ls, &WeylCocycle::new(&z, &frame_of(&ls).unwrap()).unwrap()).unwrap()
    };
    let zs = {
        let lz = residual_weyl(&conn1, &WeylCocycle::new(&z, &frame_of(&conn1).unwrap()).unwrap()).unwrap();
        residual_lorentz(&lz, &s).unwrap()
    };
    assert!(sz.matrix().value_distance(&zs.matrix()) < 1e-9);
}

#[test]
fn cocycle_relations() {
    let fr = frame("bumpy");
    let z = c(1.0).add(&x(0).scale(0.1));
    let zp = x(2).scale(0.05).map(|j| Ok(j.exp()));
    let r = cocycle_check(&z.jet(&P, K).unwrap(), &zp.jet(&P, K).unwrap(), &fr).unwrap();
    assert!(r.cocycle < 1e-10 && r.covariance < 1e-10);
    let one = Jet::constant(1.0, K);
    let r1 = cocycle_check(&z.jet(&P, K).unwrap(), &one, &fr).unwrap();
    assert!(r1.cocycle < 1e-14 && r1.group_law_violation < 1e-14);
    let rc = cocycle_check(&Jet::constant(1.4, K), &Jet::constant(0.6, K), &fr).unwrap();
    assert!(rc.group_law_violation < 1e-14);
    // C(z)C(z′) ≠ C(zz′) away from z = 1.
    let q = [0.45, 0.1, -0.2, 0.3];
    let far = |f: &ScalarField| f.jet(&q, K).unwrap();
    let fq = Scene::builtin("bumpy").unwrap().vierbein.at(&q, K).unwrap();
    let r = cocycle_check(&far(&z), &far(&zp), &fq).unwrap();
    assert!(r.cocycle < 1e-10);
    assert!(r.group_law_violation > 1e-3, "{}", r.group_law_violation);
}
