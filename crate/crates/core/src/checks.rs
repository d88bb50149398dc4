//! Seeded invariance checks: closed b-fields, affine diffeomorphisms, and
//! closedness of the generalized Ricci form on every shipped example.

use crate::curvature::gric_gr;
use crate::error::GkResult;
use crate::examples;
use crate::field::Field;
use crate::forms::{Chart, Form};
use crate::gk_pairs::GKPair;
use crate::sample::random_rat;
use crate::spinor_gcs::GCStruct;
use crate::symexpr::{big_rat, ScalarExpr};
use num::{BigRational, Complex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub notes: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult { name: name.into(), instances: 0, failures: 0, notes: Vec::new() }
    }
    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < 5 {
                self.notes.push(note());
            }
        }
    }
    pub fn ok(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

fn real(q: BigRational) -> ScalarExpr {
    ScalarExpr::constant(Complex::new(q, num::zero()))
}

/// Real polynomial of degree at most two with small rational coefficients.
fn random_real_poly<R: Rng>(chart: &Chart, rng: &mut R) -> ScalarExpr {
    let d = chart.dim();
    let mut f = ScalarExpr::zero();
    for _ in 0..3 {
        let mut t = real(random_rat(rng, 3, 3));
        for _ in 0..rng.gen_range(1..=2) {
            t = t.mul(&ScalarExpr::var(rng.gen_range(0..d)));
        }
        f = f.add(&t);
    }
    f
}

/// `b = dθ` for a random real polynomial one-form `θ`.
pub fn random_closed_b<R: Rng>(chart: &Chart, rng: &mut R) -> Form {
    let mut th = Form::zero(chart);
    for j in 0..chart.dim() {
        th = th.add(&Form::dx(chart, j).scale(&random_real_poly(chart, rng)));
    }
    th.ext_d()
}

/// Random invertible integer matrix with entries in `[-2, 2]` and a rational shift.
pub fn random_affine<R: Rng>(d: usize, rng: &mut R) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    loop {
        let a: Vec<Vec<BigRational>> = (0..d).map(|_| (0..d).map(|_| big_rat(rng.gen_range(-2..=2), 1)).collect()).collect();
        let m = crate::linalg::Mat::<crate::symexpr::Cq>::from_fn(d, d, |i, j| Complex::new(a[i][j].clone(), num::zero()));
        if !Field::is_zero(&m.det()) {
            let t = (0..d).map(|_| random_rat(rng, 2, 3)).collect();
            return (a, t);
        }
    }
}

/// The pair transported by `e^b`: `(e^b J e^{−b}, e^b∧ψ)`.
pub fn b_transform_pair(pair: &GKPair, b: &Form) -> GkResult<GKPair> {
    GKPair::new(GCStruct::b_transform(b.clone(), pair.j1.clone())?, pair.b().add(b), pair.omega().clone())
}

pub fn pullback_pair(pair: &GKPair, a: &[Vec<BigRational>], t: &[BigRational]) -> GkResult<GKPair> {
    GKPair::new(pair.j1.pullback_affine(a, t)?, pair.b().pullback_affine(a, t)?, pair.omega().pullback_affine(a, t)?)
}

fn bases() -> GkResult<Vec<(&'static str, GKPair)>> {
    Ok(vec![
        ("perturbed_type00", examples::perturbed_type00(big_rat(1, 5)).pair()?),
        ("fubini_study_1", examples::fubini_study_chart(1)?),
    ])
}

/// GR is unchanged by `count` random closed b-fields.
pub fn bfield_invariance(seed: u64, count: usize) -> GkResult<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = bases()?;
    let refs: Vec<_> = bases.iter().map(|(_, p)| gric_gr(p)).collect::<GkResult<_>>()?;
    let mut r = CheckResult::new("bfield_invariance");
    for k in 0..count {
        let (name, p) = &bases[k % bases.len()];
        let b = random_closed_b(p.chart(), &mut rng);
        let q = b_transform_pair(p, &b)?;
        let c = gric_gr(&q)?;
        let base = &refs[k % bases.len()];
        r.record(c.gr == base.gr && c.gric == base.gric, || format!("{name}: instance {k} changes GR"));
    }
    Ok(r)
}

/// `GR' = F*GR` and `GRic' = F*GRic` for `count` random affine maps.
pub fn affine_equivariance(seed: u64, count: usize) -> GkResult<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = bases()?;
    let refs: Vec<_> = bases.iter().map(|(_, p)| gric_gr(p)).collect::<GkResult<_>>()?;
    let mut r = CheckResult::new("affine_equivariance");
    for k in 0..count {
        let (name, p) = &bases[k % bases.len()];
        let (a, t) = random_affine(p.chart().dim(), &mut rng);
        let q = pullback_pair(p, &a, &t)?;
        let c = gric_gr(&q)?;
        let base = &refs[k % bases.len()];
        let gr = base.gr.substitute_affine(&a, &t)?;
        let gric = base.gric.pullback_affine(&a, &t)?;
        r.record(c.gr == gr && c.gric == gric, || format!("{name}: instance {k} breaks equivariance"));
    }
    Ok(r)
}

/// Every shipped pair, by name.
pub fn all_example_pairs() -> GkResult<Vec<(String, GKPair)>> {
    let l = examples::default_lambda();
    let mut v: Vec<(String, GKPair)> = vec![
        ("flat_kahler_1".into(), examples::flat_kahler(1)?),
        ("flat_kahler_2".into(), examples::flat_kahler(2)?),
        ("flat_kahler_torus_2".into(), examples::flat_kahler_torus(2)?),
        ("fubini_study_1".into(), examples::fubini_study_chart(1)?),
        ("fubini_study_2".into(), examples::fubini_study_chart(2)?),
        ("hyperkahler_t4".into(), examples::hyperkahler_t4()?),
        ("perturbed_type00".into(), examples::perturbed_type00(big_rat(1, 5)).pair()?),
        ("calabi_yau_pullback".into(), examples::calabi_yau_pullback()?),
        ("flat_c2_rotation".into(), examples::flat_c2_rotation_deform(l.clone())?.deformed),
        ("flat_t4_translation".into(), examples::flat_t4_translation_deform(l.clone())?.deformed),
        ("cp2_three_lines".into(), examples::cp2_three_lines(l)?.deformed),
    ];
    v.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(v)
}

/// `d GRic = 0` on every shipped example.
pub fn gric_closed_everywhere() -> GkResult<CheckResult> {
    let mut r = CheckResult::new("gric_closed");
    for (name, p) in all_example_pairs()? {
        let c = gric_gr(&p)?;
        r.record(c.gric.ext_d().is_zero(), || format!("{name}: d GRic ≠ 0"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariances_hold() {
        let b = bfield_invariance(1, 20).unwrap();
        assert!(b.ok(), "{b:?}");
        let a = affine_equivariance(2, 20).unwrap();
        assert!(a.ok(), "{a:?}");
        let c = gric_closed_everywhere().unwrap();
        assert!(c.ok(), "{c:?}");
    }
}
