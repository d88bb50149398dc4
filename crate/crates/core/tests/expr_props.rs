use gkcore::field::Field;
use gkcore::symexpr::{big_rat, parse_expr, Cq, ScalarExpr};
use num::{BigRational, Complex, Zero};
use proptest::prelude::*;

const D: usize = 4;

#[derive(Clone, Debug)]
enum Tree {
    Const(i64, i64, i64),
    Var(usize),
    Cos(Vec<i64>),
    Sin(Vec<i64>),
    Add(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    /// `a / (c + x_j²)`, never singular at real points.
    Div(Box<Tree>, i64, usize),
}

fn leaf(trig: bool) -> BoxedStrategy<Tree> {
    let c = (-5i64..=5, 1i64..=4, -2i64..=2).prop_map(|(p, q, i)| Tree::Const(p, q, i));
    let v = (0..D).prop_map(Tree::Var);
    if trig {
        let k = || proptest::collection::vec(-2i64..=2, D);
        prop_oneof![c, v, k().prop_map(Tree::Cos), k().prop_map(Tree::Sin)].boxed()
    } else {
        prop_oneof![c, v].boxed()
    }
}

fn tree(trig: bool) -> impl Strategy<Value = Tree> {
    leaf(trig).prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
            (inner, 1i64..=3, 0..D).prop_map(|(a, c, j)| Tree::Div(Box::new(a), c, j)),
        ]
    })
}

fn build(t: &Tree) -> ScalarExpr {
    match t {
        Tree::Const(p, q, i) => ScalarExpr::constant(Complex::new(big_rat(*p, *q), big_rat(*i, 1))),
        Tree::Var(j) => ScalarExpr::var(*j),
        Tree::Cos(k) => ScalarExpr::cos_k(k),
        Tree::Sin(k) => ScalarExpr::sin_k(k),
        Tree::Add(a, b) => build(a).add(&build(b)),
        Tree::Mul(a, b) => build(a).mul(&build(b)),
        Tree::Div(a, c, j) => {
            let den = ScalarExpr::int(*c).add(&ScalarExpr::var(*j).mul(&ScalarExpr::var(*j)));
            build(a).checked_div(&den).unwrap()
        }
    }
}

fn eval_exact(t: &Tree, x: &[BigRational]) -> Cq {
    match t {
        Tree::Const(p, q, i) => Complex::new(big_rat(*p, *q), big_rat(*i, 1)),
        Tree::Var(j) => Complex::new(x[*j].clone(), BigRational::zero()),
        Tree::Cos(_) | Tree::Sin(_) => unreachable!("polynomial trees only"),
        Tree::Add(a, b) => eval_exact(a, x) + eval_exact(b, x),
        Tree::Mul(a, b) => eval_exact(a, x) * eval_exact(b, x),
        Tree::Div(a, c, j) => eval_exact(a, x) / Complex::new(big_rat(*c, 1) + &x[*j] * &x[*j], BigRational::zero()),
    }
}

fn eval_f64(t: &Tree, x: &[f64]) -> Complex<f64> {
    let dot = |k: &[i64]| k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>();
    match t {
        Tree::Const(p, q, i) => Complex::new(*p as f64 / *q as f64, *i as f64),
        Tree::Var(j) => Complex::new(x[*j], 0.0),
        Tree::Cos(k) => Complex::new(dot(k).cos(), 0.0),
        Tree::Sin(k) => Complex::new(dot(k).sin(), 0.0),
        Tree::Add(a, b) => eval_f64(a, x) + eval_f64(b, x),
        Tree::Mul(a, b) => eval_f64(a, x) * eval_f64(b, x),
        Tree::Div(a, c, j) => eval_f64(a, x) / (*c as f64 + x[*j] * x[*j]),
    }
}

fn rat_point() -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-6i64..=6, 1i64..=5).prop_map(|(p, q)| big_rat(p, q)), D)
}

fn names() -> Vec<String> {
    (1..=D).map(|i| format!("x{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_identities(a in tree(true), b in tree(true)) {
        let (f, g) = (build(&a), build(&b));
        prop_assert!(f.mul(&g).sub(&g.mul(&f)).is_zero());
        prop_assert!(f.add(&g).sub(&g).sub(&f).is_zero());
        prop_assert_eq!(f.add(&g), g.add(&f));
    }

    #[test]
    fn leibniz(a in tree(true), b in tree(true), k in 0..D) {
        let (f, g) = (build(&a), build(&b));
        let lhs = f.mul(&g).partial(k);
        let rhs = f.partial(k).mul(&g).add(&f.mul(&g.partial(k)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_evaluates_like_the_tree(a in tree(false), x in rat_point()) {
        let f = build(&a);
        let v = f.eval_exact(&x).unwrap().expect("polynomial data has exact values");
        prop_assert_eq!(v, eval_exact(&a, &x));
    }

    #[test]
    fn trig_evaluation_matches_tree(a in tree(true), x in proptest::collection::vec(-3.0f64..3.0, D)) {
        let v = build(&a).eval_f64(&x).unwrap();
        let w = eval_f64(&a, &x);
        prop_assert!((v - w).norm() <= 1e-9 * (1.0 + w.norm()), "{v} vs {w}");
    }

    #[test]
    fn print_parse_round_trip(a in tree(true)) {
        let f = build(&a);
        let s = f.to_string_with(&names());
        prop_assert_eq!(parse_expr(&s, &names()).unwrap(), f);
    }

    #[test]
    fn conjugation(a in tree(true), b in tree(true)) {
        let (f, g) = (build(&a), build(&b));
        prop_assert_eq!(f.mul(&g).conj(), f.conj().mul(&g.conj()));
        prop_assert_eq!(f.re().add(&f.im().mul(&ScalarExpr::i())), f.clone());
        prop_assert!(f.re().is_real() && f.im().is_real());
        prop_assert!(f.mul(&f.conj()).is_real());
    }

    #[test]
    fn division_inverts_multiplication(a in tree(true), b in tree(true)) {
        let (f, g) = (build(&a), build(&b));
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).checked_div(&g).unwrap(), f);
    }
}
