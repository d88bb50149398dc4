use gkcore::curvature::{gr_complex, gric_gr, type00_gric};
use gkcore::examples;
use gkcore::field::Field;
use gkcore::forms::d_scalar;
use gkcore::genalg::{ad_b_matrix, apply, pairing_matrix};
use gkcore::gk_pairs::{hamiltonian_element, GKPair};
use gkcore::spinor_gcs::{annihilator, GCStruct};
use gkcore::symexpr::{big_rat, ScalarExpr};
use gkcore::{Chart, Form, Mat};
use proptest::prelude::*;

fn real_poly(d: usize) -> impl Strategy<Value = ScalarExpr> {
    proptest::collection::vec((-3i64..=3, 1i64..=3, proptest::collection::vec(0..d, 0..=2)), 1..=3).prop_map(|ts| {
        ts.iter().fold(ScalarExpr::zero(), |acc, (p, q, vars)| {
            acc.add(&vars.iter().fold(ScalarExpr::rat(*p, *q), |t, j| t.mul(&ScalarExpr::var(*j))))
        })
    })
}

/// `b = dθ` for a real polynomial one-form `θ` on a four-dimensional chart.
fn closed_b() -> impl Strategy<Value = Form> {
    proptest::collection::vec(real_poly(4), 4).prop_map(|cs| Form::one_form(&Chart::euclidean(2), &cs).ext_d())
}

fn rebase(f: &Form, chart: &Chart) -> Form {
    let mut g = Form::zero(chart);
    for (m, c) in f.terms() {
        g.add_term(m, c.clone());
    }
    g
}

fn structure_invariants(j: &GCStruct) -> Result<(), TestCaseError> {
    let d = j.chart().dim();
    let m = j.j_matrix().unwrap();
    prop_assert_eq!(m.mul(&m), Mat::<ScalarExpr>::identity(2 * d).neg());
    let g: Mat<ScalarExpr> = pairing_matrix(d);
    prop_assert_eq!(m.transpose().mul(&g).mul(&m), g);
    let phi = j.spinor();
    let ann = annihilator(phi);
    prop_assert_eq!(ann.len(), d);
    for e in &ann {
        prop_assert!(e.act(phi).is_zero());
    }
    for e in &j.frame().unwrap().e {
        prop_assert!(e.act(phi).is_zero());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn b_transformed_structures_are_generalized_complex(b in closed_b()) {
        let base = examples::flat_kahler(2).unwrap();
        let b = rebase(&b, base.chart());
        structure_invariants(&GCStruct::b_transform(b.clone(), base.j1.clone()).unwrap())?;
        structure_invariants(&GCStruct::symplectic(b, base.omega().clone()).unwrap())?;
    }

    #[test]
    fn eta_is_b_equivariant(b in closed_b(), s in (-3i64..=3, -3i64..=3)) {
        prop_assume!(s != (0, 0));
        let base = examples::sheared_almost_kahler(big_rat(s.0, 2), big_rat(s.1, 3)).unwrap();
        let b = rebase(&b, base.chart());
        let en = base.j1.eta_n().unwrap();
        let moved = GCStruct::b_transform(b.clone(), base.j1.clone()).unwrap().eta_n().unwrap();
        prop_assert_eq!(moved.eta, apply(&ad_b_matrix(&b), &en.eta));
        prop_assert!(en.eta.is_real());
        prop_assert!(en.n.is_real());
    }

    #[test]
    fn hamiltonian_elements_act_as_df(f in real_poly(4), which in 0usize..3) {
        let pair: GKPair = match which {
            0 => examples::flat_kahler(2).unwrap(),
            1 => examples::hyperkahler_t4().unwrap(),
            _ => examples::perturbed_type00(big_rat(1, 5)).pair().unwrap(),
        };
        let f = ScalarExpr::from_poly(f.numer().clone());
        let e = hamiltonian_element(&pair, &f).unwrap();
        let psi = pair.psi_form();
        prop_assert_eq!(e.act(psi), d_scalar(pair.chart(), &f).wedge(psi).scale(&ScalarExpr::i()));
    }

    #[test]
    fn type00_routes_agree(p in -4i64..=4, q in 3i64..=9) {
        prop_assume!(p != 0);
        let data = examples::perturbed_type00(big_rat(p, q));
        let spinor = gric_gr(&data.pair().unwrap()).unwrap();
        let closed = type00_gric(&data.b, &data.w1, &data.w2).unwrap();
        prop_assert_eq!(&spinor.gric, &closed.gric);
        prop_assert_eq!(&spinor.gr, &closed.gr);
        prop_assert!(spinor.gric.is_real() && spinor.gr.is_real());
        prop_assert!(spinor.gric_closed);
    }
}

#[test]
fn complex_scalar_curvature_has_real_part_gr() {
    let pairs = [
        examples::flat_kahler(2).unwrap(),
        examples::fubini_study_chart(1).unwrap(),
        examples::hyperkahler_t4().unwrap(),
        examples::perturbed_type00(big_rat(1, 5)).pair().unwrap(),
    ];
    for p in &pairs {
        assert_eq!(gr_complex(p).unwrap().value.re(), gric_gr(p).unwrap().gr);
    }
}
