use formap::curve::local::{GSeries, ZPoly};
use formap::curve::{
    residue_at, solve_1mm_curve, solve_2mm_curve, OneMatrixModel, RationalFunctionZ, Series, TwoMatrixModel, ZPoint,
};
use formap::invariant::{parse_monomial, Potential};
use formap::series::{int, rat, Ring};
use formap::wick::{GaussianModel, Method, WickEngine};

fn engine(c: Vec<Vec<i64>>, terms: &[(&str, i64)]) -> WickEngine {
    let p = c.len();
    let v = Potential::numeric(p, terms.iter().map(|(m, g)| (parse_monomial(m, p).unwrap(), "g", int(*g))).collect())
        .unwrap();
    let c = c.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
    WickEngine::new(GaussianModel::new(c).unwrap(), v).unwrap().with_method(Method::Contract)
}

/// `−F^(g)` against `Σ_l t^{l+2−2g} F_{l,g}` for `l ≤ max_l`.
fn assert_matches_wick(f: &Series, e: &mut WickEngine, g: usize, max_l: usize) {
    let table = e.compute_f(max_l).unwrap();
    for l in 0..=max_l {
        let power = l as i64 + 2 - 2 * g as i64;
        assert_eq!(f.coeff(power), -table.numeric(l, g).unwrap(), "F_{l},{g}");
    }
}

fn ising() -> TwoMatrixModel {
    let v = vec![int(0), int(0), int(0), rat(1, 3)];
    TwoMatrixModel::new(int(4), int(4), v.clone(), v).unwrap()
}

#[test]
fn quartic_closed_forms_match_wick() {
    let curve = solve_1mm_curve(&OneMatrixModel::monomial(int(1), 4, int(1)).unwrap(), 6).unwrap();
    let mut e = engine(vec![vec![1]], &[("tr(1,1,1,1)", 1)]);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 2);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 3);
    let f2 = curve.f2().unwrap();
    assert_eq!(f2.coeff(1), rat(-15, 4));
    assert_eq!(f2.coeff(2), rat(-2007, 16));
}

#[test]
fn cubic_closed_forms_match_wick() {
    let curve = solve_1mm_curve(&OneMatrixModel::monomial(int(1), 3, int(1)).unwrap(), 6).unwrap();
    let mut e = engine(vec![vec![1]], &[("tr(1,1,1)", 1)]);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 2);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 4);
}

#[test]
fn mixed_potential_closed_forms_match_wick() {
    let m = OneMatrixModel::new(int(2), vec![int(0), int(0), int(0), rat(1, 3), rat(-1, 4)]).unwrap();
    let curve = solve_1mm_curve(&m, 5).unwrap();
    let mut e = engine(vec![vec![2]], &[("tr(1,1,1)", 1), ("tr(1,1,1,1)", -1)]);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 2);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 3);
}

#[test]
fn ising_free_energies_match_wick() {
    let curve = solve_2mm_curve(&ising(), 6).unwrap();
    let mut e = engine(vec![vec![4, -1], vec![-1, 4]], &[("tr(1,1,1)", 1), ("tr(2,2,2)", 1)]);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 3);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 3);
}

#[test]
fn asymmetric_two_matrix_model_matches_wick() {
    let gm = GaussianModel::new(vec![vec![int(3), int(-2)], vec![int(-2), int(4)]]).unwrap();
    let terms = [("tr(1,1,1)", 1), ("tr(2,2,2)", 2)];
    let v = Potential::numeric(2, terms.iter().map(|(m, g)| (parse_monomial(m, 2).unwrap(), "g", int(*g))).collect())
        .unwrap();
    let model = TwoMatrixModel::from_model(&gm, &v).unwrap();
    let curve = solve_2mm_curve(&model, 5).unwrap();
    let mut e = WickEngine::new(gm, v).unwrap().with_method(Method::Contract);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 2);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 2);
}

#[test]
fn symmetric_ising_curve_is_self_dual() {
    let curve = solve_2mm_curve(&ising(), 6).unwrap();
    assert_eq!(curve.alpha_scaled, curve.beta_scaled);
}

#[test]
fn gaussian_two_matrix_model_is_trivial() {
    let curve = solve_2mm_curve(&TwoMatrixModel::new(int(3), int(2), Vec::new(), Vec::new()).unwrap(), 6).unwrap();
    assert!(curve.f0().unwrap().is_known_zero());
    assert!(curve.f1().unwrap().is_known_zero());
    let det = Series::monomial(rat(1, 5), 1);
    assert_eq!(curve.gamma2, det.truncate(6));
}

#[test]
fn quadratic_second_potential_reduces_to_one_matrix() {
    for m in [
        OneMatrixModel::monomial(int(1), 4, int(1)).unwrap(),
        OneMatrixModel::monomial(int(2), 3, int(-1)).unwrap(),
        OneMatrixModel::new(int(1), vec![int(0), int(0), int(0), rat(1, 3), rat(1, 4)]).unwrap(),
    ] {
        let one = solve_1mm_curve(&m, 6).unwrap();
        let two = solve_2mm_curve(&TwoMatrixModel::from_one_matrix(&m).unwrap(), 6).unwrap();
        assert_eq!(two.gamma2, one.gamma2);
        assert_eq!(two.alpha_scaled[0], one.alpha);
        assert_eq!(two.alpha_scaled[1], Series::constant(int(1)).truncate(6));
        assert_eq!(two.beta_scaled[0], one.alpha);
        assert_eq!(two.beta_scaled[1], one.v_scaled[1].add(&Series::constant(int(1))));
        for j in 2..one.v_scaled.len() {
            assert_eq!(two.beta_scaled[j], one.v_scaled[j]);
        }
        assert_eq!(two.f0().unwrap(), one.f0().unwrap());
        assert_eq!(two.f1().unwrap(), one.f1().unwrap());
    }
}

#[test]
fn residues_through_rational_functions() {
    let curve = solve_1mm_curve(&OneMatrixModel::monomial(int(1), 4, int(1)).unwrap(), 6).unwrap();
    let ydx = RationalFunctionZ::laurent(curve.y_poly().mul(&curve.dx_poly()));
    let t = Series::var();
    let r = residue_at(&ydx, &ZPoint::Infinity).unwrap();
    assert_eq!(curve.to_t(&r).unwrap(), t.truncate(6));
    let r0 = residue_at(&ydx, &ZPoint::Zero).unwrap();
    assert_eq!(curve.to_t(&r0).unwrap(), t.neg().truncate(6));
    let xv = RationalFunctionZ::laurent(curve.x_poly().mul(&curve.vprime_poly())).mul(&ydx);
    let r = residue_at(&xv, &ZPoint::Infinity).unwrap();
    assert_eq!(curve.to_t(&r).unwrap(), t.mul(&t).truncate(6));
}

#[test]
fn residue_of_a_pure_triple_pole_vanishes() {
    let one = ZPoly::constant(GSeries::one());
    let lin = ZPoly::from_terms([(1, GSeries::one()), (0, GSeries::constant(int(1)))]);
    let f = RationalFunctionZ::new(one, lin.mul(&lin).mul(&lin)).unwrap();
    let r = residue_at(&f, &ZPoint::At(GSeries::constant(int(-1)))).unwrap();
    assert!(r.is_known_zero());
}

#[test]
fn irrational_branch_points_are_reported() {
    let v = vec![int(0), int(0), int(0), rat(1, 3)];
    let curve = solve_2mm_curve(&TwoMatrixModel::new(int(4), int(2), v.clone(), v).unwrap(), 3).unwrap();
    assert!(curve.branch_points().is_err());
    assert!(curve.f1().is_ok());
}

#[test]
fn quartic_second_potential_matches_wick() {
    let gm = GaussianModel::new(vec![vec![int(2), int(-1)], vec![int(-1), int(3)]]).unwrap();
    let terms = [("tr(1,1,1)", 1), ("tr(2,2,2,2)", 1)];
    let v = Potential::numeric(2, terms.iter().map(|(m, g)| (parse_monomial(m, 2).unwrap(), "g", int(*g))).collect())
        .unwrap();
    let curve = solve_2mm_curve(&TwoMatrixModel::from_model(&gm, &v).unwrap(), 4).unwrap();
    let mut e = WickEngine::new(gm, v).unwrap().with_method(Method::Contract);
    assert_matches_wick(&curve.f0().unwrap(), &mut e, 0, 1);
    assert_matches_wick(&curve.f1().unwrap(), &mut e, 1, 2);
}
