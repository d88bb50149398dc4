//! Generalized Ricci form, generalized scalar curvature, and the moment map
//! pairing.

use crate::error::{GkError, GkResult};
use crate::field::Field;
use crate::forms::{d_scalar, Chart, Form};
use crate::genalg::{apply, GenVec};
use crate::gk_pairs::GKPair;
use crate::symexpr::{cq_i, cq_rat, Cq, ScalarExpr};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub rho: ScalarExpr,
    pub gric: Form,
    pub q: Form,
    pub gr: ScalarExpr,
    pub gric_closed: bool,
    /// `λ` with `GRic = λω`, when such a constant exists.
    pub lambda: Option<Cq>,
    pub gr_constant: Option<Cq>,
    /// `P = d(i_v b + θ)` and `Q = d(i_v ω)` for `v + θ = −2Jη + J d log ρ`.
    pub cross_check: bool,
}

/// `ρ = ⟨φ,φ̄⟩ / ⟨ψ,ψ̄⟩`.
pub fn rho(pair: &GKPair) -> GkResult<ScalarExpr> {
    let phi = pair.phi();
    let psi = pair.psi_form();
    let den = psi.mukai_scalar(&psi.conj());
    let num = phi.mukai_scalar(&phi.conj());
    if den.is_zero() || num.is_zero() {
        return Err(GkError::VanishingVolume);
    }
    let r = num.checked_div(&den)?;
    if !r.is_real() {
        return Err(GkError::DecompositionFailed("ρ is not real".into()));
    }
    Ok(r)
}

fn dlog(chart: &Chart, f: &ScalarExpr) -> GkResult<Vec<ScalarExpr>> {
    (0..chart.dim()).map(|a| f.partial(a).checked_div(f)).collect()
}

/// Ratio of two top-degree forms.
pub fn top_ratio(a: &Form, b: &Form) -> GkResult<ScalarExpr> {
    let den = b.top_coeff();
    if den.is_zero() {
        return Err(GkError::VanishingVolume);
    }
    a.top_coeff().checked_div(&den)
}

pub fn power(w: &Form, k: usize) -> Form {
    (0..k).fold(Form::one(w.chart()), |acc, _| acc.wedge(w))
}

/// `n P∧ω^{n−1} / ωⁿ`.
pub fn scalar_from_two_form(p: &Form, omega: &Form) -> GkResult<ScalarExpr> {
    let n = omega.chart().n();
    let num = p.wedge(&power(omega, n - 1)).scale(&ScalarExpr::int(n as i64));
    top_ratio(&num, &power(omega, n))
}

/// `λ` with `a = λ b` for a constant `λ`.
pub fn proportionality(a: &Form, b: &Form) -> Option<Cq> {
    let (mask, c) = b.terms().next()?;
    let lam = a.coeff(mask).checked_div(c).ok()?.const_value()?;
    (*a == b.scale_cq(&lam)).then_some(lam)
}

/// `X = −2Jη + J d log ρ` and `Θ = d(X·ψ̄)`.
fn theta(pair: &GKPair, rho: &ScalarExpr) -> GkResult<(GenVec, Form)> {
    let chart = pair.chart();
    let j = pair.j1.j_matrix()?;
    let eta = pair.j1.eta_n()?.eta;
    let dl = GenVec::covector(chart, dlog(chart, rho)?);
    let x = apply(&j, &eta.scale(&ScalarExpr::int(-2))).add(&apply(&j, &dl));
    let th = x.act(&pair.psi_form().conj()).ext_d();
    Ok((x, th))
}

/// Degree-2 part of `Θ∧e^{−(b−iω)}`, which must be the whole product.
fn extract_pq(pair: &GKPair, th: &Form) -> GkResult<Form> {
    let i = ScalarExpr::i();
    let e = pair.b().sub(&pair.omega().scale(&i)).neg().exp();
    let s = th.wedge(&e);
    for deg in s.degrees() {
        if deg != 2 {
            return Err(GkError::ExtractionResidue(deg as usize));
        }
    }
    Ok(s.degree_part(2))
}

pub fn gric_gr(pair: &GKPair) -> GkResult<CurvatureReport> {
    let chart = pair.chart().clone();
    let r = rho(pair)?;
    let (x, th) = theta(pair, &r)?;
    let pq = extract_pq(pair, &th)?;
    let p = pq.re();
    let q = pq.im().neg();
    let gric = p.neg();
    let gr = scalar_from_two_form(&p, pair.omega())?;
    if !gr.is_real() {
        return Err(GkError::DecompositionFailed("GR is not real".into()));
    }
    let d = chart.dim();
    let v: Vec<ScalarExpr> = x.v.clone();
    let p2 = pair.b().interior_vec(&v).add(&Form::one_form(&chart, &x.xi)).ext_d();
    let q2 = pair.omega().interior_vec(&v).ext_d();
    let _ = d;
    Ok(CurvatureReport {
        rho: r,
        gric_closed: gric.ext_d().is_zero(),
        lambda: proportionality(&gric, pair.omega()),
        gr_constant: gr.const_value(),
        cross_check: p2 == p && q2 == q,
        gric,
        q,
        gr,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrComplex {
    /// `−4 ×` the literal `(i/2)⟨ψ,Θ⟩/⟨ψ,ψ̄⟩`; its real part equals `GR`.
    pub value: ScalarExpr,
    /// `(i/2)⟨ψ, Θ⟩ / ⟨ψ,ψ̄⟩` verbatim.
    pub literal: ScalarExpr,
    /// The two-term real form `iⁿ c_n(⟨ψ,Y·ψ̄⟩ − ⟨Y·ψ,ψ̄⟩)/⟨ψ,ψ̄⟩` with `Y = X/2`.
    pub both_terms: ScalarExpr,
}

pub fn gr_complex(pair: &GKPair) -> GkResult<GrComplex> {
    let r = rho(pair)?;
    let (_, th) = theta(pair, &r)?;
    let psi = pair.psi_form();
    let vol = psi.mukai_scalar(&psi.conj());
    let half_i = ScalarExpr::constant(cq_i() * cq_rat(1, 2));
    let literal = half_i.mul(&psi.mukai_scalar(&th)).checked_div(&vol)?;
    let value = literal.scale(&cq_rat(-4, 1));
    let half = Cq::new(num::BigRational::new(1.into(), 2.into()), num::zero());
    let t1 = psi.mukai_scalar(&th.scale_cq(&half));
    let t2 = th.conj().scale_cq(&half).mukai_scalar(&psi.conj());
    let both_terms = half_i.mul(&t1.sub(&t2)).checked_div(&vol)?;
    Ok(GrComplex { value, literal, both_terms })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Type00Curvature {
    pub gric: Form,
    pub gr: ScalarExpr,
}

/// Closed formula for type (0,0): with `Y = d(B ω₁⁻¹ d log(ω₁ⁿ/ω₂ⁿ))`,
/// `GRic = Y` and `GR ω₂ⁿ = −n ω₂^{n−1}∧Y`. The overall sign of `Y` is the
/// one produced by the spinor route under our pairing and orientation
/// conventions; the usual closed form carries the opposite sign.
pub fn type00_gric(b: &Form, w1: &Form, w2: &Form) -> GkResult<Type00Curvature> {
    let chart = b.chart().clone();
    let n = chart.n();
    let r = top_ratio(&power(w1, n), &power(w2, n))?;
    let dl = dlog(&chart, &r)?;
    // v with i_v ω₁ = d log ρ
    let wm = w1.two_form_matrix();
    let v = wm.transpose().solve(&dl).ok_or(GkError::DegenerateOmega)?;
    if wm.det().is_zero() {
        return Err(GkError::DegenerateOmega);
    }
    let y = b.interior_vec(&v).ext_d();
    let gr = top_ratio(&power(w2, n - 1).wedge(&y).scale(&ScalarExpr::int(-(n as i64))), &power(w2, n))?;
    let gric = y;
    Ok(Type00Curvature { gric, gr })
}

/// `c · π^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiMultiple {
    #[serde(serialize_with = "crate::symexpr::serialize_cq")]
    pub coeff: Cq,
    pub pi_power: u32,
}

impl PiMultiple {
    pub fn to_f64(&self) -> num::Complex<f64> {
        crate::symexpr::cq_to_c64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

/// Exact integral of a top-degree trigonometric form over a flat torus.
pub fn integrate(top: &Form) -> GkResult<PiMultiple> {
    let chart = top.chart();
    if !chart.is_torus() {
        return Err(GkError::NotExactlyIntegrable("chart has non-periodic coordinates".into()));
    }
    let d = chart.dim();
    if top.terms().any(|(k, _)| k.count_ones() as usize != d) {
        return Err(GkError::NotExactlyIntegrable("form is not of top degree".into()));
    }
    let mean = top
        .top_coeff()
        .torus_mean(chart.periodic())
        .ok_or_else(|| GkError::NotExactlyIntegrable("coefficient is not a trigonometric polynomial".into()))?;
    Ok(PiMultiple { coeff: mean * Cq::new(num::BigRational::from_integer(num::BigInt::from(1u64 << d)), num::zero()), pi_power: d as u32 })
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Tensor Gauss–Legendre quadrature of a top form over a coordinate box.
pub fn integrate_box(top: &Form, lo: &[f64], hi: &[f64], order: usize) -> GkResult<num::Complex<f64>> {
    let chart = top.chart();
    let d = chart.dim();
    if lo.len() != d || hi.len() != d {
        return Err(GkError::DimensionMismatch("box bounds".into()));
    }
    let f = top.top_coeff();
    let gl = gauss_legendre(order);
    let mut acc = num::Complex::new(0.0, 0.0);
    let mut idx = vec![0usize; d];
    loop {
        let mut w = 1.0;
        let mut p = vec![0.0; d];
        for a in 0..d {
            let (x, wa) = gl[idx[a]];
            let h = 0.5 * (hi[a] - lo[a]);
            p[a] = lo[a] + h * (x + 1.0);
            w *= wa * h;
        }
        acc += f.eval_f64(&p)? * w;
        let mut a = 0;
        while a < d {
            idx[a] += 1;
            if idx[a] < order {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == d {
            break;
        }
    }
    Ok(acc)
}

/// `⟨μ(J), f⟩ = i^{−n} ∫ GR f ⟨ψ,ψ̄⟩` on a torus, for mean-zero `f`.
pub fn moment_pairing(pair: &GKPair, f: &ScalarExpr) -> GkResult<PiMultiple> {
    let psi = pair.psi_form();
    let vol = psi.mukai(&psi.conj());
    let mean = integrate(&vol.scale(f))?;
    if !mean.coeff.is_zero() {
        return Err(GkError::NotMeanZero);
    }
    let rep = gric_gr(pair)?;
    let mut r = integrate(&vol.scale(&rep.gr.mul(f)))?;
    let n = pair.chart().n() as i32;
    r.coeff *= cq_i().powi(-n);
    Ok(r)
}

/// Kähler oracle `−d J d log ρ` with `ρ ∝ (det W)^{−1/2}`, bypassing spinors.
pub fn kahler_ricci_oracle(pair: &GKPair) -> GkResult<Form> {
    let chart = pair.chart();
    let det = pair.omega().two_form_matrix().det();
    let dl = dlog(chart, &det)?;
    let half = ScalarExpr::rat(-1, 2);
    let theta = GenVec::covector(chart, dl.iter().map(|x| x.mul(&half)).collect());
    let jt = apply(&pair.j1.j_matrix()?, &theta);
    if jt.v.iter().any(|x| !x.is_zero()) {
        return Err(GkError::DecompositionFailed("J does not preserve T*".into()));
    }
    Ok(Form::one_form(chart, &jt.xi).ext_d().neg())
}

/// Hamiltonian one-form `df` as a generalized vector.
pub fn df_genvec(chart: &Chart, f: &ScalarExpr) -> GenVec {
    GenVec::from_one_form(&d_scalar(chart, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor_gcs::GCStruct;

    fn kahler(c: &Chart, omega: Form) -> GKPair {
        let n = c.n();
        let dz: Vec<Form> = (0..n).map(|k| Form::dx(c, 2 * k).add(&Form::dx(c, 2 * k + 1).scale(&ScalarExpr::i()))).collect();
        GKPair::new(GCStruct::complex_volume(dz).unwrap(), Form::zero(c), omega).unwrap()
    }

    fn flat_omega(c: &Chart) -> Form {
        (0..c.n()).fold(Form::zero(c), |acc, k| acc.add(&Form::dxs(c, &[2 * k + 1, 2 * k])))
    }

    #[test]
    fn flat_kahler_vanishes() {
        for n in [1, 2] {
            let c = Chart::euclidean(n);
            let p = kahler(&c, flat_omega(&c));
            assert_eq!(rho(&p).unwrap(), ScalarExpr::one());
            let r = gric_gr(&p).unwrap();
            assert!(r.gric.is_zero() && r.gr.is_zero() && r.cross_check);
            assert!(gr_complex(&p).unwrap().value.is_zero());
        }
    }

    #[test]
    fn fubini_study_cp1() {
        let c = Chart::euclidean(1);
        let (x, y) = (ScalarExpr::var(0), ScalarExpr::var(1));
        let s = ScalarExpr::one().add(&x.mul(&x)).add(&y.mul(&y));
        let w = Form::dxs(&c, &[1, 0]).scale(&s.powi(-2).unwrap());
        let p = kahler(&c, w.clone());
        let r = gric_gr(&p).unwrap();
        assert!(r.gric_closed && r.cross_check, "{r:?}");
        let lam = r.lambda.clone().expect("GRic proportional to ω");
        assert!(lam.im == num::zero() && lam.re > num::zero());
        let g = gr_complex(&p).unwrap();
        assert_eq!(g.value.re(), r.gr);
        assert!(g.value.im().is_zero());
        assert_eq!(kahler_ricci_oracle(&p).unwrap(), r.gric);
    }

    #[test]
    fn torus_integrals() {
        let c = Chart::torus(1);
        let f = Form::vol(&c).scale(&ScalarExpr::int(2).add(&ScalarExpr::cos_k(&[1, 0])));
        assert_eq!(integrate(&f).unwrap(), PiMultiple { coeff: crate::symexpr::cq_int(8), pi_power: 2 });
        let exact = Form::one_form(&c, &[ScalarExpr::sin_k(&[0, 1]), ScalarExpr::zero()]).ext_d();
        assert!(integrate(&exact).unwrap().coeff.is_zero());
        assert!(integrate(&Form::vol(&Chart::euclidean(1))).is_err());
        let g = gauss_legendre(5);
        let s: f64 = g.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
    }
}
