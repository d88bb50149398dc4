//! Derivative of the moment map along ψ-compatible deformations of a flat
//! torus, by central differences of a jet-based quadrature on one side and
//! the exact symplectic form on the other.

use crate::curvature::integrate;
use crate::error::{GkError, GkResult};
use crate::field::{Diff, Field, Jet, JET_M};
use crate::forms::Form;
use crate::genalg::{apply, gen_lie_j, BiVec, GenVec};
use crate::gk_pairs::{epm_split, hamiltonian_element, GKPair};
use crate::linalg::Mat;
use crate::spinor_gcs::{eta_n_solve, Frame};
use crate::symexpr::{cq_i, cq_to_c64, Cq, Point, ScalarExpr, C64};
use num::{BigRational, Zero};
use serde::Serialize;
use std::f64::consts::PI;

pub const STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
/// Order at which the exponential series are cut; the remainder is below
/// `t^{17}/17!` times a bounded factor.
pub const SERIES_ORDER: usize = 16;
/// Trapezoid nodes per circle factor.
pub const GRID: usize = 4;
/// Measured `lhs / rhs` between the curvature pairing and the trace form.
pub const MOMENT_NORMALIZATION: f64 = -0.25;

#[derive(Clone, Debug, Serialize)]
pub struct MomentDerivative {
    pub steps: Vec<f64>,
    /// `(F(t) − F(−t)) / 2t` for each step, real and imaginary parts.
    pub central: Vec<[f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// `lhs / rhs`, real part.
    pub ratio: f64,
    /// `|lhs − κ rhs| / |κ rhs|` with `κ = MOMENT_NORMALIZATION`.
    pub rel_error: f64,
}

/// Second-order jets of a fixed expression, with derivatives precomputed.
struct JetPlan {
    konst: Option<C64>,
    v: ScalarExpr,
    d: Vec<ScalarExpr>,
    h: Vec<(usize, usize, ScalarExpr)>,
}

impl JetPlan {
    fn new(e: &ScalarExpr) -> Self {
        if let Some(c) = e.const_value() {
            return JetPlan { konst: Some(cq_to_c64(&c)), v: e.clone(), d: vec![], h: vec![] };
        }
        let d: Vec<ScalarExpr> = (0..JET_M).map(|a| e.partial(a)).collect();
        let mut h = Vec::new();
        for a in 0..JET_M {
            for b in a..JET_M {
                h.push((a, b, d[a].partial(b)));
            }
        }
        JetPlan { konst: None, v: e.clone(), d, h }
    }

    fn eval(&self, p: &[f64]) -> GkResult<Jet> {
        if let Some(c) = self.konst {
            return Ok(Jet::constant(c));
        }
        let mut j = Jet::constant(self.v.eval_f64(p)?);
        for (a, e) in self.d.iter().enumerate() {
            j.d[a] = e.eval_f64(p)?;
        }
        for (a, b, e) in &self.h {
            j.set_hess(*a, *b, e.eval_f64(p)?);
        }
        Ok(j)
    }
}

struct FormPlan(Vec<(u8, JetPlan)>);

impl FormPlan {
    fn new(f: &Form) -> Self {
        FormPlan(f.terms().map(|(m, c)| (m, JetPlan::new(c))).collect())
    }
    fn eval(&self, chart: &crate::forms::Chart, p: &[f64]) -> GkResult<Form<Jet>> {
        let mut f = Form::zero(chart);
        for (m, c) in &self.0 {
            f.add_term(*m, c.eval(p)?);
        }
        Ok(f)
    }
}

/// Generalized scalar curvature of the almost structure with spinor `φ`
/// and conjugate annihilator `ē`, paired with `ψ = e^{b+iω}`, over any
/// differentiable field. Jets must carry two derivative orders.
pub fn gr_from_spinor<F: Diff>(phi: &Form<F>, ebar: &[GenVec<F>], b: &Form<F>, omega: &Form<F>) -> GkResult<F> {
    let chart = phi.chart();
    let i = F::from_cq(&cq_i());
    let psi = b.add(&omega.scale(&i)).exp();
    let vol = psi.mukai_scalar(&psi.conj());
    let rho = phi.mukai_scalar(&phi.conj()).div(&vol).ok_or(GkError::VanishingVolume)?;
    let dlog: Vec<F> = (0..chart.dim()).map(|a| rho.partial(a).div(&rho)).collect::<Option<_>>().ok_or(GkError::VanishingVolume)?;
    let frame = Frame { e: ebar.iter().map(|x| x.conj()).collect(), ebar: ebar.to_vec() };
    let j = frame.j_matrix()?;
    let eta = eta_n_solve(phi, ebar)?.eta;
    let x = apply(&j, &eta.scale(&F::from_int(-2)).add(&GenVec::covector(chart, dlog)));
    let th = x.act(&psi.conj()).ext_d();
    let pq = th.wedge(&b.sub(&omega.scale(&i)).neg().exp()).degree_part(2);
    let half = F::from_cq(&crate::symexpr::cq_rat(1, 2));
    let p = pq.add(&pq.conj()).scale(&half);
    let n = chart.n();
    let num = p.wedge(&power_generic(omega, n - 1)).scale(&F::from_int(n as i64));
    num.top_coeff().div(&power_generic(omega, n).top_coeff()).ok_or(GkError::VanishingVolume)
}

fn power_generic<F: Field>(w: &Form<F>, k: usize) -> Form<F> {
    (0..k).fold(Form::one(w.chart()), |acc, _| acc.wedge(w))
}

/// `h = c e⁺∧e⁻ + conj` for the constant frames of `E⁺`, `E⁻` at the origin.
/// Such `h` is real, lies in `Λ²E⊕Λ²Ē` and commutes with `J_ψ`.
pub fn compatible_direction(pair: &GKPair, c: &ScalarExpr) -> GkResult<BiVec> {
    let chart = pair.chart();
    let one = Cq::new(num::One::one(), BigRational::zero());
    let origin = Point {
        x: vec![BigRational::zero(); chart.dim()],
        u: chart.periodic().iter().map(|&p| p.then(|| one.clone())).collect(),
    };
    let fr = epm_split(pair, &origin)?;
    let lift = |x: &GenVec<Cq>| x.convert(|c| ScalarExpr::constant(c.clone()));
    let mut h = BiVec::zero(pair.chart());
    for (p, m) in fr.plus.iter().zip(&fr.minus) {
        let w = BiVec::wedge(&lift(p), &lift(m)).scale(c);
        h = h.add(&w).add(&w.conj());
    }
    Ok(h)
}

/// `−i^{−n} ∫ tr(J (L_eJ) [h,J]) ⟨ψ,ψ̄⟩`, exactly.
pub fn symplectic_side(pair: &GKPair, f: &ScalarExpr, h: &BiVec) -> GkResult<C64> {
    let j = pair.j1.j_matrix()?;
    let e = hamiltonian_element(pair, f)?;
    let l = gen_lie_j(&e, &j);
    let dj = h.ad_matrix().commutator(&j);
    let tr = j.mul(&l).mul(&dj).trace();
    let psi = pair.psi_form();
    let r = integrate(&psi.mukai(&psi.conj()).scale(&tr))?;
    let n = pair.chart().n() as i32;
    Ok(-r.to_f64() * C64::new(0.0, 1.0).powi(-n))
}

struct Plans {
    phi: FormPlan,
    b: FormPlan,
    omega: FormPlan,
    ebar: Vec<Vec<JetPlan>>,
    h: Vec<(usize, usize, JetPlan)>,
    f: ScalarExpr,
    vol: ScalarExpr,
}

fn series_form(h: &BiVec<Jet>, phi: &Form<Jet>, t: f64) -> Form<Jet> {
    let mut term = phi.clone();
    let mut acc = phi.clone();
    for k in 1..=SERIES_ORDER {
        term = h.act(&term).scale(&Jet::constant(C64::new(t / k as f64, 0.0)));
        acc = acc.add(&term);
    }
    acc
}

fn series_vec(m: &Mat<Jet>, x: &GenVec<Jet>, t: f64) -> GenVec<Jet> {
    let mut term = x.clone();
    let mut acc = x.clone();
    for k in 1..=SERIES_ORDER {
        term = apply(m, &term).scale(&Jet::constant(C64::new(t / k as f64, 0.0)));
        acc = acc.add(&term);
    }
    acc
}

/// `F(t) = i^{−n} ∫ GR(J_t) f ⟨ψ,ψ̄⟩` by the trapezoid rule.
fn pairing_at(pair: &GKPair, plans: &Plans, t: f64) -> GkResult<C64> {
    let chart = pair.chart();
    let d = chart.dim();
    let nodes = GRID.pow(d as u32);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..nodes {
        let p: Vec<f64> = (0..d).map(|a| 2.0 * PI * ((k / GRID.pow(a as u32)) % GRID) as f64 / GRID as f64).collect();
        let mut hm: Mat<Jet> = Mat::zeros(2 * d, 2 * d);
        for (r, c, e) in &plans.h {
            hm.set(*r, *c, e.eval(&p)?);
        }
        let h = BiVec::from_matrix(chart, hm);
        let ad = h.ad_matrix();
        let phi = series_form(&h, &plans.phi.eval(chart, &p)?, t);
        let ebar: Vec<GenVec<Jet>> = plans
            .ebar
            .iter()
            .map(|v| -> GkResult<GenVec<Jet>> {
                let comps = v.iter().map(|c| c.eval(&p)).collect::<GkResult<Vec<_>>>()?;
                Ok(series_vec(&ad, &GenVec::from_components(chart, &comps), t))
            })
            .collect::<GkResult<_>>()?;
        let gr = gr_from_spinor(&phi, &ebar, &plans.b.eval(chart, &p)?, &plans.omega.eval(chart, &p)?)?;
        acc += gr.v * plans.f.eval_f64(&p)? * plans.vol.eval_f64(&p)?;
    }
    let cell = (2.0 * PI / GRID as f64).powi(d as i32);
    Ok(acc * cell * C64::new(0.0, 1.0).powi(-(chart.n() as i32)))
}

/// Neville extrapolation in `t²` of central differences.
pub fn richardson(steps: &[f64], vals: &[C64]) -> C64 {
    let mut t = vals.to_vec();
    for j in 1..t.len() {
        for i in (j..t.len()).rev() {
            let r = (steps[i - j] / steps[i]).powi(2);
            t[i] = t[i] + (t[i] - t[i - 1]) / (r - 1.0);
        }
    }
    *t.last().expect("at least one step")
}

/// Compare `d/dt ⟨μ(J_t), f⟩` at `t = 0`, with `J_t = e^{th} J e^{−th}`, to
/// the symplectic form evaluated on `(L_eJ, [h, J])`.
pub fn moment_derivative_check(pair: &GKPair, f: &ScalarExpr, h: &BiVec, steps: &[f64]) -> GkResult<MomentDerivative> {
    let chart = pair.chart();
    if !chart.is_torus() {
        return Err(GkError::NotExactlyIntegrable("moment derivative needs a torus chart".into()));
    }
    if steps.is_empty() || steps.iter().any(|s| s.is_nan() || *s <= 1e-8) {
        return Err(GkError::StepTooSmall);
    }
    let d = chart.dim();
    let psi = pair.psi_form();
    let plans = Plans {
        phi: FormPlan::new(pair.phi()),
        b: FormPlan::new(pair.b()),
        omega: FormPlan::new(pair.omega()),
        ebar: pair.j1.frame()?.ebar.iter().map(|v| v.components().iter().map(JetPlan::new).collect()).collect(),
        h: (0..2 * d).flat_map(|r| (0..2 * d).map(move |c| (r, c))).filter(|&(r, c)| !h.m.get(r, c).is_zero()).map(|(r, c)| (r, c, JetPlan::new(h.m.get(r, c)))).collect(),
        f: f.clone(),
        vol: psi.mukai_scalar(&psi.conj()),
    };
    let offsets: Vec<f64> = steps.iter().flat_map(|&s| [s, -s]).collect();
    let values: Vec<GkResult<C64>> = std::thread::scope(|sc| {
        let hs: Vec<_> = offsets.iter().map(|&t| sc.spawn({
            let plans = &plans;
            move || pairing_at(pair, plans, t)
        })).collect();
        hs.into_iter().map(|h| h.join().expect("quadrature thread")).collect()
    });
    let values = values.into_iter().collect::<GkResult<Vec<C64>>>()?;
    let mut central = Vec::new();
    for (k, &s) in steps.iter().enumerate() {
        let (a, b) = (values[2 * k], values[2 * k + 1]);
        let diff = a - b;
        let scale = a.norm().max(b.norm());
        if scale > 0.0 && diff.norm() < 1e3 * f64::EPSILON * scale {
            return Err(GkError::StepTooSmall);
        }
        central.push(diff / (2.0 * s));
    }
    let lhs = richardson(steps, &central);
    let rhs = symplectic_side(pair, f, h)?;
    let target = rhs * MOMENT_NORMALIZATION;
    let rel_error = (lhs - target).norm() / target.norm().max(f64::MIN_POSITIVE);
    let ratio = (lhs / rhs).re;
    Ok(MomentDerivative {
        steps: steps.to_vec(),
        central: central.iter().map(|c| [c.re, c.im]).collect(),
        lhs: [lhs.re, lhs.im],
        rhs: [rhs.re, rhs.im],
        ratio,
        rel_error,
    })
}

/// Mean-zero trigonometric test function on `T⁴`.
pub fn test_function() -> ScalarExpr {
    ScalarExpr::cos_k(&[1, 0, 0, 0]).add(&ScalarExpr::sin_k(&[0, 1, -1, 0])).add(&ScalarExpr::cos_k(&[0, 0, 1, 1]).scale(&crate::symexpr::cq_rat(1, 2)))
}

/// Random coefficient `c(x)` sharing frequencies with [`test_function`].
pub fn random_coefficient<R: rand::Rng>(rng: &mut R) -> ScalarExpr {
    let freqs: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 1, -1, 0], [0, 0, 1, 1], [0, 1, 0, 0]];
    let mut c = ScalarExpr::constant(crate::sample::random_cq(rng, 3));
    for k in freqs {
        let a = crate::sample::random_cq(rng, 3);
        let b = crate::sample::random_cq(rng, 3);
        c = c.add(&ScalarExpr::cos_k(&k).scale(&a)).add(&ScalarExpr::sin_k(&k).scale(&b));
    }
    c.scale(&crate::symexpr::cq_rat(1, 8))
}

/// The check on the flat Kähler `T⁴` for `count` random compatible directions.
pub fn flat_torus_suite(seed: u64, count: usize) -> GkResult<Vec<MomentDerivative>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pair = crate::examples::flat_kahler_torus(2)?;
    let f = test_function();
    (0..count)
        .map(|_| {
            let h = compatible_direction(&pair, &random_coefficient(&mut rng))?;
            moment_derivative_check(&pair, &f, &h, &STEPS)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::gric_gr;
    use crate::examples;
    use crate::symexpr::big_rat;

    #[test]
    fn jet_scalar_curvature_matches_exact() {
        let pair = examples::perturbed_type00(big_rat(1, 5)).pair().unwrap();
        let exact = gric_gr(&pair).unwrap().gr;
        let p = [0.31, -0.27, 0.19, 0.44];
        let conv = |f: &Form| f.jets(&p);
        let ebar: Vec<GenVec<Jet>> = pair.j1.frame().unwrap().ebar.iter().map(|v| v.convert(|c| Jet::of_expr(c, &p))).collect();
        let g = gr_from_spinor(&conv(pair.phi()), &ebar, &conv(pair.b()), &conv(pair.omega())).unwrap();
        let want = exact.eval_f64(&p).unwrap();
        assert!((g.v - want).norm() < 1e-9 * (1.0 + want.norm()), "{} vs {}", g.v, want);
    }

    #[test]
    fn flat_torus_identity() {
        for r in flat_torus_suite(7, 5).unwrap() {
            assert!(r.rel_error < 1e-6, "{r:?}");
            assert!(r.rhs[0].abs() > 1.0);
        }
    }

    #[test]
    fn richardson_removes_even_orders() {
        let f = |t: f64| 3.0 + 2.0 * t * t - 5.0 * t.powi(4);
        let vals: Vec<C64> = STEPS.iter().map(|&s| C64::new(f(s), 0.0)).collect();
        assert!((richardson(&STEPS, &vals).re - 3.0).abs() < 1e-13);
    }
}
