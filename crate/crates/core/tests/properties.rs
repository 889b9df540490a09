use proptest::prelude::*;

use formap::curve::{solve_1mm_curve, OneMatrixModel, Series};
use formap::invariant::{canonical_rotation, rotation_symmetry, InvariantMonomial, Potential};
use formap::series::{int, rat, Rational};
use formap::wick::{GaussianModel, Method, WickEngine};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    ((1i64..=5), (1i64..=3), any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn series(len: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rational(), len).prop_map(|c| {
        let order = c.len() as i64;
        Series::new(c, order)
    })
}

fn word(p: u8) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1..=p, 1..7)
}

fn covariance() -> impl Strategy<Value = GaussianModel> {
    (2i64..=5, -1i64..=1, 2i64..=5).prop_map(|(a, b, c)| GaussianModel::new(vec![vec![int(a), int(b)], vec![int(b), int(c)]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_inverts_log(s in series(6)) {
        let u = Series::constant(int(1)).add(&s.shift(1).truncate(6));
        let back = u.log().unwrap().exp().unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn inverse_is_two_sided(c0 in nonzero_rational(), s in series(5)) {
        let u = Series::constant(c0).add(&s.shift(1).truncate(6));
        let v = u.inv().unwrap();
        prop_assert!(u.mul(&v).is_one());
        prop_assert!(v.mul(&u).is_one());
    }

    #[test]
    fn multiplication_commutes(a in series(5), b in series(5)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn canonical_rotation_is_rotation_invariant(w in word(3), k in 0usize..7) {
        let mut r = w.clone();
        r.rotate_left(k % w.len());
        prop_assert_eq!(canonical_rotation(&r), canonical_rotation(&w));
        prop_assert_eq!(rotation_symmetry(&r), rotation_symmetry(&w));
        prop_assert_eq!(w.len() % rotation_symmetry(&w), 0);
    }

    #[test]
    fn monomial_ignores_trace_order_and_rotation(ws in prop::collection::vec(word(2), 1..4), k in 0usize..7) {
        let mut shuffled: Vec<Vec<u8>> = ws.iter().rev().cloned().collect();
        for w in &mut shuffled {
            let n = w.len();
            w.rotate_right(k % n);
        }
        let a = InvariantMonomial::canonicalize(&ws, 2).unwrap();
        let b = InvariantMonomial::canonicalize(&shuffled, 2).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweep_agrees_with_contraction(model in covariance(), traces in prop::collection::vec(word(2), 1..3)) {
        let letters: usize = traces.iter().map(Vec::len).sum();
        prop_assume!(letters <= 10);
        let mut sweep = WickEngine::new(model.clone(), Potential::empty(2)).unwrap().with_method(Method::Sweep);
        let mut contract = WickEngine::new(model, Potential::empty(2)).unwrap().with_method(Method::Contract);
        prop_assert_eq!(sweep.gaussian_moment(&traces).unwrap(), contract.gaussian_moment(&traces).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn one_matrix_curves_satisfy_residue_identities(
        c in (1i64..=4).prop_map(int),
        v3 in small_rational(),
        v4 in small_rational(),
    ) {
        let model = OneMatrixModel::new(c, vec![int(0), int(0), int(0), v3, v4]).unwrap();
        let order = 5;
        let curve = solve_1mm_curve(&model, order).unwrap();
        let t = Series::var();
        let ids = curve.residue_identities().unwrap();
        prop_assert_eq!(ids.res_inf_ydx, t.truncate(order));
        prop_assert_eq!(ids.res_zero_ydx, t.neg().truncate(order));
        prop_assert!(ids.res_inf_vprime_ydx.is_known_zero());
        prop_assert_eq!(ids.res_inf_x_vprime_ydx, t.mul(&t).truncate(order));
        let f0 = curve.f0().unwrap();
        let f0r = curve.f0_residue().unwrap();
        let n = f0.order().min(f0r.order());
        prop_assert_eq!(f0.truncate(n), f0r.truncate(n));
    }
}
