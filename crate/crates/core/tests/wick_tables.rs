use formap::invariant::{parse_monomial, Potential};
use formap::series::{int, rat, Rational};
use formap::wick::{GaussianModel, Method, WickEngine};

fn one_matrix(word: &str) -> WickEngine {
    let v = Potential::numeric(1, vec![(parse_monomial(word, 1).unwrap(), "g", int(1))]).unwrap();
    WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), v).unwrap()
}

// Independent enumeration (explicit pairing lists, cycle counting) of
// quadrangulations and triangulations, coupling 1, C = 1.
fn quartic_table() -> Vec<(usize, usize, Rational)> {
    vec![
        (1, 0, rat(1, 2)),
        (1, 1, rat(1, 4)),
        (2, 0, rat(9, 8)),
        (2, 1, rat(15, 8)),
        (3, 0, rat(9, 2)),
        (3, 1, rat(33, 2)),
        (3, 2, rat(15, 4)),
        (4, 0, rat(189, 8)),
        (4, 1, rat(2511, 16)),
        (4, 2, rat(2007, 16)),
    ]
}

fn cubic_table() -> Vec<(usize, usize, Rational)> {
    vec![
        (1, 0, rat(2, 3)),
        (1, 1, rat(1, 6)),
        (2, 0, rat(8, 3)),
        (2, 1, rat(7, 3)),
        (3, 0, rat(56, 3)),
        (3, 1, rat(332, 9)),
        (3, 2, rat(35, 6)),
        (4, 0, rat(512, 3)),
        (4, 1, rat(1864, 3)),
        (4, 2, int(338)),
    ]
}

#[test]
fn quartic_by_contraction() {
    let t = one_matrix("tr(1,1,1,1)").with_method(Method::Contract).compute_f(4).unwrap();
    for (l, g, v) in quartic_table() {
        assert_eq!(t.numeric(l, g).unwrap(), v, "F_{l},{g}");
    }
    assert_eq!(t.entries().count(), 10);
}

#[test]
fn cubic_by_contraction() {
    let t = one_matrix("tr(1,1,1)").with_method(Method::Contract).compute_f(4).unwrap();
    for (l, g, v) in cubic_table() {
        assert_eq!(t.numeric(l, g).unwrap(), v, "F_{l},{g}");
    }
    assert_eq!(t.entries().count(), 10);
}

#[test]
fn quartic_by_sweep() {
    let mut e = one_matrix("tr(1,1,1,1)").with_method(Method::Sweep).with_budget(3_000_000);
    let t = e.compute_f(4).unwrap();
    for (l, g, v) in quartic_table().into_iter().filter(|e| e.0 <= 4) {
        assert_eq!(t.numeric(l, g).unwrap(), v, "F_{l},{g}");
    }
}
