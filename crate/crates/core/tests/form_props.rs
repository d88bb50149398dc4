use gkcore::field::Field;
use gkcore::forms::sigma_sign;
use gkcore::genalg::{ad_b_matrix, pairing_matrix};
use gkcore::symexpr::{big_rat, ScalarExpr};
use gkcore::{Chart, Form, GenVec, Mat};
use num::Complex;
use proptest::prelude::*;

/// Polynomial of degree ≤ 2 in the chart coordinates, given as (coefficient, variable list).
type PolySpec = Vec<(i64, i64, Vec<usize>)>;

fn poly_spec(d: usize) -> impl Strategy<Value = PolySpec> {
    proptest::collection::vec((-3i64..=3, 0i64..=2, proptest::collection::vec(0..d, 0..=2)), 1..=3)
}

fn poly(spec: &PolySpec) -> ScalarExpr {
    spec.iter().fold(ScalarExpr::zero(), |acc, (re, im, vars)| {
        let c = ScalarExpr::constant(Complex::new(big_rat(*re, 1), big_rat(*im, 1)));
        acc.add(&vars.iter().fold(c, |t, j| t.mul(&ScalarExpr::var(*j))))
    })
}

type FormSpec = Vec<(u8, PolySpec)>;

fn form_spec(d: usize, degree: Option<u32>) -> impl Strategy<Value = FormSpec> {
    let mask = (0u8..(1u8 << d)).prop_filter("degree", move |m| degree.map_or(true, |k| m.count_ones() == k));
    proptest::collection::vec((mask, poly_spec(d)), 1..=4)
}

fn form(chart: &Chart, spec: &FormSpec) -> Form {
    let mut f = Form::zero(chart);
    for (m, p) in spec {
        f.add_term(*m, poly(p));
    }
    f
}

fn genvec(chart: &Chart, spec: &[PolySpec]) -> GenVec {
    GenVec::from_components(chart, &spec.iter().map(poly).collect::<Vec<_>>())
}

fn genvec_spec(d: usize) -> impl Strategy<Value = Vec<PolySpec>> {
    proptest::collection::vec(poly_spec(d), 2 * d)
}

fn chart_and<S: Strategy>(f: impl Fn(usize) -> S + Clone) -> impl Strategy<Value = (usize, S::Value)> {
    (1usize..=3).prop_flat_map(move |n| (Just(n), f(2 * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn d_squared_vanishes((n, a) in chart_and(|d| form_spec(d, None))) {
        let c = Chart::euclidean(n);
        prop_assert!(form(&c, &a).ext_d().ext_d().is_zero());
    }

    #[test]
    fn graded_leibniz(k in 0u32..=2, a in form_spec(4, None), b in form_spec(4, None)) {
        let c = Chart::euclidean(2);
        let al = form(&c, &a).degree_part(k);
        let be = form(&c, &b);
        let lhs = al.wedge(&be).ext_d();
        let sign = ScalarExpr::int(if k % 2 == 0 { 1 } else { -1 });
        let rhs = al.ext_d().wedge(&be).add(&al.wedge(&be.ext_d()).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_and_d((k, a) in (0u32..=3).prop_flat_map(|k| (Just(k), form_spec(4, Some(k))))) {
        let c = Chart::euclidean(2);
        let al = form(&c, &a);
        let lhs = al.sigma().ext_d();
        let rhs = al.ext_d().sigma();
        let expected = if k % 2 == 0 { rhs } else { rhs.neg() };
        prop_assert_eq!(lhs, expected);
    }

    #[test]
    fn sigma_is_an_involution((n, a) in chart_and(|d| form_spec(d, None))) {
        let c = Chart::euclidean(n);
        let al = form(&c, &a);
        prop_assert_eq!(al.sigma().sigma(), al.clone());
        for k in 0..=c.dim() as u32 {
            let part = al.degree_part(k);
            prop_assert_eq!(part.sigma(), part.scale(&ScalarExpr::int(sigma_sign(k) as i64)));
        }
    }

    #[test]
    fn clifford_relation((n, (x, y, a)) in chart_and(|d| (genvec_spec(d), genvec_spec(d), form_spec(d, None)))) {
        let c = Chart::euclidean(n);
        let (e1, e2, al) = (genvec(&c, &x), genvec(&c, &y), form(&c, &a));
        let lhs = e1.act(&e2.act(&al)).add(&e2.act(&e1.act(&al)));
        let rhs = al.scale(&e1.pair(&e2).scale_cq(&gkcore::symexpr::cq_int(2)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear((n, (x, y, z)) in chart_and(|d| (genvec_spec(d), genvec_spec(d), genvec_spec(d)))) {
        let c = Chart::euclidean(n);
        let (u, v, w) = (genvec(&c, &x), genvec(&c, &y), genvec(&c, &z));
        prop_assert_eq!(u.pair(&v), v.pair(&u));
        prop_assert_eq!(u.add(&v).pair(&w), u.pair(&w).add(&v.pair(&w)));
    }

    #[test]
    fn mukai_bilinear_and_parity_symmetric(
        (n, (a, b, a2)) in (1usize..=2).prop_flat_map(|n| (Just(n), (form_spec(2 * n, None), form_spec(2 * n, None), form_spec(2 * n, None))))
    ) {
        let c = Chart::euclidean(n);
        let (f, g, h) = (form(&c, &a), form(&c, &b), form(&c, &a2));
        prop_assert_eq!(f.add(&h).mukai_scalar(&g), f.mukai_scalar(&g).add(&h.mukai_scalar(&g)));
        let cal = gkcore::calibrate::committed();
        for p in 0..=c.dim() as u32 {
            let fp = f.degree_part(p);
            let q = c.dim() as u32 - p;
            let gq = g.degree_part(q);
            if fp.is_zero() || gq.is_zero() {
                continue;
            }
            let s = ScalarExpr::int(cal.symmetry(c.dim(), p) as i64);
            prop_assert_eq!(fp.mukai_scalar(&gq), gq.mukai_scalar(&fp).mul(&s));
        }
    }

    #[test]
    fn b_fields_preserve_the_pairing_and_compose(
        (n, (t1, t2, x, y)) in chart_and(|d| (form_spec(d, Some(1)), form_spec(d, Some(1)), genvec_spec(d), genvec_spec(d)))
    ) {
        let c = Chart::euclidean(n);
        let (b1, b2) = (form(&c, &t1).ext_d(), form(&c, &t2).ext_d());
        let (u, v) = (genvec(&c, &x), genvec(&c, &y));
        let (bu, bv) = (u.ad_b(&b1).unwrap(), v.ad_b(&b1).unwrap());
        prop_assert_eq!(bu.pair(&bv), u.pair(&v));
        let m1: Mat<ScalarExpr> = ad_b_matrix(&b1);
        let m2 = ad_b_matrix(&b2);
        prop_assert_eq!(m1.mul(&m2), ad_b_matrix(&b1.add(&b2)));
        let g: Mat<ScalarExpr> = pairing_matrix(c.dim());
        prop_assert_eq!(m1.transpose().mul(&g).mul(&m1), g);
    }

    #[test]
    fn exponential_of_two_form_is_multiplicative((t1, t2) in (form_spec(4, Some(2)), form_spec(4, Some(2)))) {
        let c = Chart::euclidean(2);
        let (a, b) = (form(&c, &t1), form(&c, &t2));
        prop_assert_eq!(a.add(&b).exp(), a.exp().wedge(&b.exp()));
    }
}
