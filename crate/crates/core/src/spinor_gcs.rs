//! Almost generalized complex structures defined by pure spinors.
//!
//! Convention: the Clifford annihilator `E = ker φ` is the `−i` eigenbundle
//! of `J`. For a symplectic spinor `e^{b+iω}` this gives
//! `J_ω = [[0, ω̂⁻¹], [−ω̂, 0]]` with `ω̂(v) = i_v ω`, conjugated by the
//! b-field.

use crate::error::{GkError, GkResult};
use crate::field::{Diff, Field};
use crate::forms::{Chart, Form};
use crate::genalg::{ad_b_matrix, ad_beta_form, ad_beta_matrix, apply, check_closed_two_form, BiVec, GenVec, TriVec};
use crate::linalg::Mat;
use crate::symexpr::{cq_i, cq_to_c64, Cq, ScalarExpr, C64};
use num::{BigRational, Complex};
use std::sync::OnceLock;

/// Bases of `E = ker φ` and its conjugate.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<F: Field = ScalarExpr> {
    pub e: Vec<GenVec<F>>,
    pub ebar: Vec<GenVec<F>>,
}

impl<F: Field> Frame<F> {
    pub fn convert<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Frame<G> {
        Frame { e: self.e.iter().map(|x| x.convert(f)).collect(), ebar: self.ebar.iter().map(|x| x.convert(f)).collect() }
    }
    pub fn transform(&self, m: &Mat<F>) -> Self {
        Frame { e: self.e.iter().map(|x| apply(m, x)).collect(), ebar: self.ebar.iter().map(|x| apply(m, x)).collect() }
    }
    /// `J = P diag(−i, +i) P⁻¹` with `P = [e | ē]`.
    pub fn j_matrix(&self) -> GkResult<Mat<F>> {
        let cols: Vec<Vec<F>> = self.e.iter().chain(self.ebar.iter()).map(|x| x.components()).collect();
        let p = Mat::from_cols(&cols);
        let pinv = p.inverse().ok_or_else(|| GkError::DecompositionFailed("frame is degenerate".into()))?;
        let i = F::from_cq(&cq_i());
        let k = self.e.len();
        let dp = Mat::from_fn(p.rows, p.cols, |r, c| if c < k { p.get(r, c).mul(&i.neg()) } else { p.get(r, c).mul(&i) });
        Ok(dp.mul(&pinv))
    }
}

#[derive(Clone, Debug)]
pub enum GCKind {
    /// `φ = e^{b+iω}`.
    Symplectic { b: Form, omega: Form },
    /// `φ = dz_1 ∧ … ∧ dz_n` for closed complex one-forms `dz_k`.
    ComplexVolume { dz: Vec<Form> },
    /// `φ = e^{β}·φ_base` for a real bivector `β^{ab}` on T.
    BetaDeform { beta: Mat<ScalarExpr>, base: Box<GCStruct> },
    /// `φ = e^{b}∧φ_base` for a closed 2-form `b`.
    BTransform { b: Form, base: Box<GCStruct> },
    /// An explicit trivialization.
    Generic { phi: Form },
}

/// An almost generalized complex structure with lazily computed caches.
#[derive(Clone, Debug)]
pub struct GCStruct {
    chart: Chart,
    pub kind: GCKind,
    spinor: OnceLock<Form>,
    jm: OnceLock<GkResult<Mat<ScalarExpr>>>,
    frame: OnceLock<GkResult<Frame>>,
    eta_n: OnceLock<GkResult<EtaN>>,
}

/// The decomposition `dφ = η·φ + N·φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaN<F: Field = ScalarExpr> {
    pub eta: GenVec<F>,
    pub n: TriVec<F>,
    pub eta01: GenVec<F>,
    pub n03: TriVec<F>,
}

impl GCStruct {
    fn wrap(chart: &Chart, kind: GCKind) -> Self {
        GCStruct {
            chart: chart.clone(),
            kind,
            spinor: OnceLock::new(),
            jm: OnceLock::new(),
            frame: OnceLock::new(),
            eta_n: OnceLock::new(),
        }
    }
    pub fn symplectic(b: Form, omega: Form) -> GkResult<Self> {
        let chart = omega.chart().clone();
        chart.check(b.chart())?;
        if !b.is_zero() {
            check_closed_two_form(&b)?;
        }
        if omega.terms().any(|(k, _)| k.count_ones() != 2) {
            return Err(GkError::DegenerateOmega);
        }
        if omega.two_form_matrix().det().is_zero() {
            return Err(GkError::DegenerateOmega);
        }
        Ok(Self::wrap(&chart, GCKind::Symplectic { b, omega }))
    }
    pub fn complex_volume(dz: Vec<Form>) -> GkResult<Self> {
        let chart = dz.first().ok_or(GkError::DimensionMismatch("no one-forms".into()))?.chart().clone();
        if dz.len() != chart.n() {
            return Err(GkError::DimensionMismatch(format!("expected {} one-forms, got {}", chart.n(), dz.len())));
        }
        for f in &dz {
            chart.check(f.chart())?;
            if f.terms().any(|(k, _)| k.count_ones() != 1) {
                return Err(GkError::DimensionMismatch("dz entries must be one-forms".into()));
            }
        }
        Ok(Self::wrap(&chart, GCKind::ComplexVolume { dz }))
    }
    pub fn beta_deform(beta: Mat<ScalarExpr>, base: GCStruct) -> GkResult<Self> {
        let d = base.chart.dim();
        if beta.rows != d || beta.cols != d {
            return Err(GkError::DimensionMismatch("bivector size".into()));
        }
        if !beta.add(&beta.transpose()).is_zero() {
            return Err(GkError::NotBivector);
        }
        let chart = base.chart.clone();
        Ok(Self::wrap(&chart, GCKind::BetaDeform { beta, base: Box::new(base) }))
    }
    pub fn b_transform(b: Form, base: GCStruct) -> GkResult<Self> {
        base.chart.check(b.chart())?;
        check_closed_two_form(&b)?;
        let chart = base.chart.clone();
        Ok(Self::wrap(&chart, GCKind::BTransform { b, base: Box::new(base) }))
    }
    /// Pullback along `F(x) = A x + t`.
    pub fn pullback_affine(&self, a: &[Vec<BigRational>], t: &[BigRational]) -> GkResult<Self> {
        let pb = |f: &Form| f.pullback_affine(a, t);
        match &self.kind {
            GCKind::Symplectic { b, omega } => Self::symplectic(pb(b)?, pb(omega)?),
            GCKind::ComplexVolume { dz } => Self::complex_volume(dz.iter().map(pb).collect::<GkResult<_>>()?),
            GCKind::BetaDeform { beta, base } => {
                let d = self.chart.dim();
                let am = Mat::<Cq>::from_fn(d, d, |i, j| Complex::new(a[i][j].clone(), num::zero()));
                let ainv = am.inverse().ok_or(GkError::SingularMap)?;
                let ai = Mat::from_fn(d, d, |i, j| ScalarExpr::constant(ainv.get(i, j).clone()));
                let moved = beta.try_map(|x| x.substitute_affine(a, t))?;
                Self::beta_deform(ai.mul(&moved).mul(&ai.transpose()), base.pullback_affine(a, t)?)
            }
            GCKind::BTransform { b, base } => Self::b_transform(pb(b)?, base.pullback_affine(a, t)?),
            GCKind::Generic { phi } => Ok(Self::generic(pb(phi)?)),
        }
    }
    pub fn generic(phi: Form) -> Self {
        let chart = phi.chart().clone();
        Self::wrap(&chart, GCKind::Generic { phi })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// The defining spinor.
    pub fn spinor(&self) -> &Form {
        self.spinor.get_or_init(|| match &self.kind {
            GCKind::Symplectic { b, omega } => b.add(&omega.scale_cq(&cq_i())).exp(),
            GCKind::ComplexVolume { dz } => dz.iter().fold(Form::one(&self.chart), |acc, f| acc.wedge(f)),
            GCKind::BetaDeform { beta, base } => {
                ad_beta_form(&BiVec::from_vector_bivector(&self.chart, beta), base.spinor()).expect("vector bivector")
            }
            GCKind::BTransform { b, base } => b.exp().wedge(base.spinor()),
            GCKind::Generic { phi } => phi.clone(),
        })
    }

    /// Closed-form annihilator frame of the spinor.
    pub fn frame(&self) -> GkResult<Frame> {
        self.frame.get_or_init(|| self.compute_frame()).clone()
    }

    fn compute_frame(&self) -> GkResult<Frame> {
        let c = &self.chart;
        let d = c.dim();
        match &self.kind {
            GCKind::Symplectic { b, omega } => {
                let bm = b.two_form_matrix();
                let wm = omega.two_form_matrix();
                let i = ScalarExpr::i();
                let mk = |sign: &ScalarExpr| -> Vec<GenVec> {
                    (0..d)
                        .map(|j| {
                            let mut e = GenVec::basis(c, j);
                            for k in 0..d {
                                // −(i_{∂_j}(b ± iω))_k
                                let x = bm.get(j, k) + &(sign * wm.get(j, k));
                                e.xi[k] = -x;
                            }
                            e
                        })
                        .collect()
                };
                Ok(Frame { e: mk(&i), ebar: mk(&-&i) })
            }
            GCKind::ComplexVolume { dz } => {
                let n = dz.len();
                let p = self.dz_matrix(dz);
                let q = p.inverse().ok_or(GkError::DecompositionFailed("dz and its conjugate are dependent".into()))?;
                let w = |i: usize| GenVec::vector(c, (0..d).map(|a| q.get(i, a).clone()).collect());
                let zv = |k: usize| GenVec::covector(c, (0..d).map(|a| p.get(a, k).clone()).collect());
                let e = (n..d).map(w).chain((0..n).map(zv)).collect();
                let ebar = (0..n).map(w).chain((n..d).map(zv)).collect();
                Ok(Frame { e, ebar })
            }
            GCKind::BetaDeform { beta, base } => Ok(base.frame()?.transform(&ad_beta_matrix(beta))),
            GCKind::BTransform { b, base } => Ok(base.frame()?.transform(&ad_b_matrix(b))),
            GCKind::Generic { phi } => {
                let k = annihilator(phi);
                if k.len() != d {
                    return Err(GkError::DecompositionFailed(format!("spinor is not pure: kernel dimension {}", k.len())));
                }
                let ebar = k.iter().map(|x| x.conj()).collect();
                Ok(Frame { e: k, ebar })
            }
        }
    }

    /// Columns `dz_1..dz_n, conj(dz_1)..conj(dz_n)` as covector components.
    fn dz_matrix(&self, dz: &[Form]) -> Mat<ScalarExpr> {
        let d = self.chart.dim();
        let mut cols: Vec<Vec<ScalarExpr>> = dz.iter().map(|f| (0..d).map(|a| f.coeff(1 << a)).collect()).collect();
        let conj: Vec<Vec<ScalarExpr>> = cols.iter().map(|c| c.iter().map(|x| x.conj()).collect()).collect();
        cols.extend(conj);
        Mat::from_cols(&cols)
    }

    /// The 4n×4n matrix field of J.
    pub fn j_matrix(&self) -> GkResult<Mat<ScalarExpr>> {
        self.jm.get_or_init(|| self.compute_j()).clone()
    }

    fn compute_j(&self) -> GkResult<Mat<ScalarExpr>> {
        let d = self.chart.dim();
        match &self.kind {
            GCKind::Symplectic { b, omega } => {
                let w = omega.two_form_matrix();
                let what = w.neg(); // ω̂ = −W in column convention
                let winv = what.inverse().ok_or(GkError::DegenerateOmega)?;
                let mut j = Mat::zeros(2 * d, 2 * d);
                for r in 0..d {
                    for s in 0..d {
                        j.set(r, d + s, winv.get(r, s).clone());
                        j.set(d + r, s, what.get(r, s).neg());
                    }
                }
                Ok(conjugate(&j, &ad_b_matrix(b), &ad_b_matrix(&b.neg())))
            }
            GCKind::ComplexVolume { dz } => {
                let n = dz.len();
                let p = self.dz_matrix(dz);
                let q = p.inverse().ok_or(GkError::DecompositionFailed("dz and its conjugate are dependent".into()))?;
                let i = ScalarExpr::i();
                let dp = Mat::from_fn(d, d, |r, c| if c < n { p.get(r, c) * &i } else { -(p.get(r, c) * &i) });
                let jstar = dp.mul(&q);
                let jv = jstar.transpose();
                let mut j = Mat::zeros(2 * d, 2 * d);
                for r in 0..d {
                    for s in 0..d {
                        j.set(r, s, jv.get(r, s).clone());
                        j.set(d + r, d + s, -jstar.get(r, s));
                    }
                }
                Ok(j)
            }
            GCKind::BetaDeform { beta, base } => {
                Ok(conjugate(&base.j_matrix()?, &ad_beta_matrix(beta), &ad_beta_matrix(&beta.neg())))
            }
            GCKind::BTransform { b, base } => Ok(conjugate(&base.j_matrix()?, &ad_b_matrix(b), &ad_b_matrix(&b.neg()))),
            GCKind::Generic { .. } => self.frame()?.j_matrix(),
        }
    }

    /// Minimal degree of the spinor at a rational point.
    pub fn type_number(&self, p: &[BigRational]) -> GkResult<u32> {
        type_number_at(self.spinor(), p)
    }

    /// The unique decomposition `dφ = η·φ + N·φ`.
    pub fn eta_n(&self) -> GkResult<EtaN> {
        self.eta_n
            .get_or_init(|| {
                let f = self.frame()?;
                let r = eta_n_solve(self.spinor(), &f.ebar)?;
                if !r.eta.is_real() || !r.n.is_real() {
                    return Err(GkError::DecompositionFailed("η or N not real".into()));
                }
                Ok(r)
            })
            .clone()
    }

    pub fn integrable(&self) -> GkResult<bool> {
        Ok(self.eta_n()?.n.is_zero())
    }
}

fn conjugate<F: Field>(j: &Mat<F>, a: &Mat<F>, ainv: &Mat<F>) -> Mat<F> {
    a.mul(j).mul(ainv)
}

/// Matrix whose column k is the coefficient vector of `E_k·φ`.
pub fn clifford_matrix<F: Field>(phi: &Form<F>) -> Mat<F> {
    let c = phi.chart();
    let n = 2 * c.dim();
    let rows = 1usize << c.dim();
    let cols: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let f = GenVec::basis(c, k).act(phi);
            (0..rows).map(|m| f.coeff(m as u8)).collect()
        })
        .collect();
    Mat::from_cols(&cols)
}

/// Basis of the Clifford annihilator of `φ`.
pub fn annihilator<F: Field>(phi: &Form<F>) -> Vec<GenVec<F>> {
    clifford_matrix(phi).kernel().iter().map(|v| GenVec::from_components(phi.chart(), v)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurityReport {
    pub pure: bool,
    pub nondegenerate: bool,
    pub kernel_dim: usize,
    /// False when trig phases forced double-precision elimination.
    pub exact: bool,
    pub annihilator: Vec<GenVec<Cq>>,
}

fn purity_generic<F: Field>(phi: &Form<F>) -> (bool, bool, usize, Vec<GenVec<F>>) {
    let d = phi.chart().dim();
    let k = annihilator(phi);
    let pure = k.len() == d;
    let mut cols: Vec<Vec<F>> = k.iter().map(|x| x.components()).collect();
    cols.extend(k.iter().map(|x| x.conj().components()));
    let nondeg = pure && Mat::from_cols(&cols).rank() == 2 * d;
    (pure, nondeg, k.len(), k)
}

/// Purity and nondegeneracy of `φ` at a rational point.
pub fn purity_nondeg(phi: &Form, p: &[BigRational]) -> GkResult<PurityReport> {
    match phi.eval_exact(p)? {
        Some(f) => {
            if f.is_zero() {
                return Err(GkError::ZeroSpinor);
            }
            let (pure, nondegenerate, kernel_dim, k) = purity_generic(&f);
            Ok(PurityReport { pure, nondegenerate, kernel_dim, exact: true, annihilator: k })
        }
        None => {
            let pf: Vec<f64> = p.iter().map(crate::symexpr::poly::rat_to_f64).collect();
            let f = phi.eval_f64(&pf)?;
            if f.is_zero() {
                return Err(GkError::ZeroSpinor);
            }
            let (pure, nondegenerate, kernel_dim, k) = purity_generic(&f);
            let k = k.iter().map(|x| x.convert(c64_to_cq)).collect();
            Ok(PurityReport { pure, nondegenerate, kernel_dim, exact: false, annihilator: k })
        }
    }
}

fn c64_to_cq(z: &C64) -> Cq {
    let r = |x: f64| BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(0.into()));
    Complex::new(r(z.re), r(z.im))
}

/// Minimal degree with nonvanishing coefficient at a rational point.
pub fn type_number_at(phi: &Form, p: &[BigRational]) -> GkResult<u32> {
    let mut best: Option<u32> = None;
    for (k, c) in phi.terms() {
        let nz = match c.eval_exact(p)? {
            Some(v) => !Field::is_zero(&v),
            None => {
                let v = c.eval_approx(p, 40)?;
                cq_to_c64(&v).norm() > 1e-30
            }
        };
        if nz {
            let deg = k.count_ones();
            best = Some(best.map_or(deg, |b: u32| b.min(deg)));
        }
    }
    best.ok_or(GkError::ZeroSpinor)
}

/// Solve `dφ = (Σ c_i ē_i + Σ c_ijk ē_i ē_j ē_k)·φ` and symmetrize.
pub fn eta_n_solve<F: Diff>(phi: &Form<F>, ebar: &[GenVec<F>]) -> GkResult<EtaN<F>> {
    let chart = phi.chart();
    let rows = 1usize << chart.dim();
    let dphi = phi.ext_d();
    let m = ebar.len();
    let single: Vec<Form<F>> = ebar.iter().map(|e| e.act(phi)).collect();
    let mut cols: Vec<Vec<F>> = single.iter().map(|f| (0..rows).map(|r| f.coeff(r as u8)).collect()).collect();
    let mut triples = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let f = ebar[i].act(&ebar[j].act(&single[k]));
                cols.push((0..rows).map(|r| f.coeff(r as u8)).collect());
                triples.push((i, j, k));
            }
        }
    }
    let a = Mat::from_cols(&cols);
    let b: Vec<F> = (0..rows).map(|r| dphi.coeff(r as u8)).collect();
    let x = a.solve(&b).ok_or_else(|| GkError::DecompositionFailed("dφ has components outside U^{n-1} ⊕ U^{n-3}".into()))?;
    let mut eta01 = GenVec::zero(chart);
    for i in 0..m {
        if !x[i].is_zero() {
            eta01 = eta01.add(&ebar[i].scale(&x[i]));
        }
    }
    let mut n03 = TriVec::zero(chart);
    for (t, &(i, j, k)) in triples.iter().enumerate() {
        let c = &x[m + t];
        if !c.is_zero() {
            n03 = n03.add(&TriVec::wedge(&ebar[i], &ebar[j], &ebar[k]).scale(c));
        }
    }
    let eta = eta01.add(&eta01.conj());
    let n = n03.add(&n03.conj());
    Ok(EtaN { eta, n, eta01, n03 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::big_rat;

    fn w(c: &Chart) -> Form {
        Form::dxs(c, &[0, 1])
    }

    #[test]
    fn symplectic_j_and_frame() {
        let c = Chart::euclidean(1);
        let s = GCStruct::symplectic(Form::zero(&c), w(&c)).unwrap();
        assert_eq!(s.spinor(), &w(&c).scale_cq(&cq_i()).exp());
        let j = s.j_matrix().unwrap();
        assert_eq!(j.mul(&j), Mat::identity(4).neg());
        // J(∂_1) = −dx_2 under the −i eigenspace convention
        let e = apply(&j, &GenVec::basis(&c, 0));
        assert_eq!(e, GenVec::basis(&c, 3).neg());
        let f = s.frame().unwrap();
        for x in &f.e {
            assert!(x.act(s.spinor()).is_zero());
            assert_eq!(apply(&j, x), x.scale(&-ScalarExpr::i()));
        }
    }

    #[test]
    fn complex_volume_j() {
        let c = Chart::named(&["x", "y"], false);
        let dz = Form::dx(&c, 0).add(&Form::dx(&c, 1).scale(&ScalarExpr::i()));
        let s = GCStruct::complex_volume(vec![dz]).unwrap();
        let j = s.j_matrix().unwrap();
        assert_eq!(apply(&j, &GenVec::basis(&c, 0)), GenVec::basis(&c, 1));
        assert_eq!(apply(&j, &GenVec::basis(&c, 2)), GenVec::basis(&c, 3));
        for x in &s.frame().unwrap().e {
            assert!(x.act(s.spinor()).is_zero());
        }
        assert_eq!(s.type_number(&[big_rat(1, 2), big_rat(1, 3)]).unwrap(), 1);
        let en = s.eta_n().unwrap();
        assert!(en.eta.is_zero() && en.n.is_zero());
    }

    #[test]
    fn purity_examples() {
        let c = Chart::euclidean(1);
        let p = [big_rat(1, 3), big_rat(2, 5)];
        let r = purity_nondeg(&w(&c).scale_cq(&cq_i()).exp(), &p).unwrap();
        assert!(r.pure && r.nondegenerate && r.exact);
        let r = purity_nondeg(&Form::dx(&c, 0), &p).unwrap();
        assert!(r.pure && !r.nondegenerate);
        let c2 = Chart::euclidean(2);
        let q = [big_rat(1, 3), big_rat(2, 5), big_rat(0, 1), big_rat(7, 2)];
        let r = purity_nondeg(&Form::dxs(&c2, &[0, 1]).add(&Form::dxs(&c2, &[2, 3])), &q).unwrap();
        assert!(!r.pure);
        assert_eq!(purity_nondeg(&Form::zero(&c), &p), Err(GkError::ZeroSpinor));
    }
}
