//! Almost generalized Kähler pairs `(J, J_ψ)` with `ψ = e^{b+iω}`.

use crate::error::{GkError, GkResult};
use crate::field::Field;
use crate::forms::{d_scalar, Chart, Form};
use crate::genalg::{apply, pairing_matrix, BiVec, GenVec};
use crate::linalg::Mat;
use crate::sample::{eval_cq, mat_at, min_eigenvalue, random_rat};
use crate::spinor_gcs::{GCKind, GCStruct};
use crate::symexpr::{cq_i, cq_int, cq_to_c64, Cq, Point, ScalarExpr};
use num::{Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct GKPair {
    pub j1: GCStruct,
    pub psi: GCStruct,
    ghat: OnceLock<GkResult<Mat<ScalarExpr>>>,
}

impl GKPair {
    pub fn new(j1: GCStruct, b: Form, omega: Form) -> GkResult<Self> {
        j1.chart().check(omega.chart())?;
        let psi = GCStruct::symplectic(b, omega)?;
        Ok(GKPair { j1, psi, ghat: OnceLock::new() })
    }
    pub fn chart(&self) -> &Chart {
        self.j1.chart()
    }
    pub fn b(&self) -> &Form {
        match &self.psi.kind {
            GCKind::Symplectic { b, .. } => b,
            _ => unreachable!("ψ is symplectic by construction"),
        }
    }
    pub fn omega(&self) -> &Form {
        match &self.psi.kind {
            GCKind::Symplectic { omega, .. } => omega,
            _ => unreachable!("ψ is symplectic by construction"),
        }
    }
    pub fn phi(&self) -> &Form {
        self.j1.spinor()
    }
    pub fn psi_form(&self) -> &Form {
        self.psi.spinor()
    }
    /// `Ĝ = −J₁J₂`.
    pub fn ghat(&self) -> GkResult<Mat<ScalarExpr>> {
        self.ghat.get_or_init(|| Ok(self.j1.j_matrix()?.mul(&self.psi.j_matrix()?).neg())).clone()
    }
    /// Matrix `S` of the bilinear form `G(a, b) = ⟨Ĝa, b⟩`.
    pub fn metric(&self) -> GkResult<Mat<ScalarExpr>> {
        Ok(self.ghat()?.transpose().mul(&pairing_matrix(self.chart().dim())))
    }
    /// Pointwise projectors onto `E⁺, E⁻, Ē⁺, Ē⁻` as `(1 ± iJ₁)(1 ± iJ₂)/4`.
    pub fn projectors(&self) -> GkResult<[Mat<ScalarExpr>; 4]> {
        let j1 = self.j1.j_matrix()?;
        let j2 = self.psi.j_matrix()?;
        let n = j1.rows;
        let id = Mat::identity(n);
        let i = ScalarExpr::i();
        let p = |j: &Mat<ScalarExpr>, s: i64| id.add(&j.scale(&i.scale(&cq_int(s)))).scale(&ScalarExpr::rat(1, 2));
        let (e1, eb1, e2, eb2) = (p(&j1, 1), p(&j1, -1), p(&j2, 1), p(&j2, -1));
        Ok([e1.mul(&e2), e1.mul(&eb2), eb1.mul(&eb2), eb1.mul(&e2)])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatReport {
    pub commute: bool,
    pub ghat_involution: bool,
    pub symmetric: bool,
    pub positive: bool,
    /// Float diagnostic only.
    pub min_eigenvalue: f64,
    pub points_checked: usize,
    pub notes: Vec<String>,
}

impl CompatReport {
    pub fn ok(&self) -> bool {
        self.commute && self.ghat_involution && self.symmetric && self.positive
    }
}

/// Commutation, `Ĝ² = 1`, symmetry, and positivity by exact Sylvester minors.
pub fn compatibility_check(pair: &GKPair, points: &[Point]) -> GkResult<CompatReport> {
    let j1 = pair.j1.j_matrix()?;
    let j2 = pair.psi.j_matrix()?;
    let commute = j1.commutator(&j2).is_zero();
    let g = pair.ghat()?;
    let ghat_involution = g.mul(&g) == Mat::identity(g.rows);
    let s = pair.metric()?;
    let symmetric = s == s.transpose();
    let mut positive = true;
    let mut min_eig = f64::INFINITY;
    let mut notes = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let sp = mat_at(&s, p)?;
        for (r, m) in sp.leading_minors().iter().enumerate() {
            if !m.im.is_zero() || !m.re.is_positive() {
                positive = false;
                notes.push(format!("point {k}: leading minor {} is {}", r + 1, crate::symexpr::ScalarExpr::constant(m.clone())));
                break;
            }
        }
        let rows: Vec<Vec<f64>> = (0..sp.rows).map(|i| (0..sp.cols).map(|j| cq_to_c64(sp.get(i, j)).re).collect()).collect();
        min_eig = min_eig.min(min_eigenvalue(&rows));
    }
    Ok(CompatReport { commute, ghat_involution, symmetric, positive, min_eigenvalue: min_eig, points_checked: points.len(), notes })
}

/// Simultaneous eigenbases at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct EpmFrame {
    pub plus: Vec<GenVec<Cq>>,
    pub minus: Vec<GenVec<Cq>>,
    pub plus_bar: Vec<GenVec<Cq>>,
    pub minus_bar: Vec<GenVec<Cq>>,
}

fn stacked_kernel(chart: &Chart, a: &Mat<Cq>, b: &Mat<Cq>) -> Vec<GenVec<Cq>> {
    let n = a.rows;
    let m = Mat::from_fn(2 * n, n, |r, c| if r < n { a.get(r, c).clone() } else { b.get(r - n, c).clone() });
    m.kernel().iter().map(|v| GenVec::from_components(chart, v)).collect()
}

/// `E⁺ = E₁∩E₂`, `E⁻ = E₁∩Ē₂` by exact kernels.
pub fn epm_split(pair: &GKPair, p: &Point) -> GkResult<EpmFrame> {
    let j1 = mat_at(&pair.j1.j_matrix()?, p)?;
    let j2 = mat_at(&pair.psi.j_matrix()?, p)?;
    let n = j1.rows;
    let ii = Mat::<Cq>::identity(n).scale(&cq_i());
    let chart = pair.chart();
    let plus = stacked_kernel(chart, &j1.add(&ii), &j2.add(&ii));
    let minus = stacked_kernel(chart, &j1.add(&ii), &j2.sub(&ii));
    let half = chart.n();
    if plus.len() != half || minus.len() != half {
        return Err(GkError::DimensionMismatch(format!("dim E+ = {}, dim E- = {}, expected {half}", plus.len(), minus.len())));
    }
    let plus_bar = plus.iter().map(|x| x.conj()).collect();
    let minus_bar = minus.iter().map(|x| x.conj()).collect();
    Ok(EpmFrame { plus, minus, plus_bar, minus_bar })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Type00Report {
    /// Four-dimensional wedge conditions; `None` outside dimension 4.
    pub b_wedge_w1: Option<bool>,
    pub b_wedge_w2: Option<bool>,
    pub w1_wedge_w2: Option<bool>,
    pub bb_equals_sum_nonzero: Option<bool>,
    pub kernel_dims: bool,
    pub tame: bool,
    pub notes: Vec<String>,
}

impl Type00Report {
    pub fn ok(&self) -> bool {
        [self.b_wedge_w1, self.b_wedge_w2, self.w1_wedge_w2, self.bb_equals_sum_nonzero].iter().all(|x| x.unwrap_or(true))
            && self.kernel_dims
            && self.tame
    }
}

/// Complex structure on vectors whose `+i` eigenspace is the kernel of the
/// 2-form matrix. With `Ĝ = −J₁J₂` this is the orientation in which
/// positivity of the metric is tameness `ω₂(x, Ix) > 0`.
fn complex_structure_from_kernel(w: &Mat<Cq>) -> Option<Mat<Cq>> {
    let d = w.rows;
    let k = w.transpose().kernel();
    if k.len() != d / 2 {
        return None;
    }
    let mut cols = k.clone();
    cols.extend(k.iter().map(|v| v.iter().map(|x| x.conj()).collect::<Vec<_>>()));
    let p = Mat::from_cols(&cols);
    let pinv = p.inverse()?;
    let i = cq_i();
    let dp = Mat::from_fn(d, d, |r, c| if c < d / 2 { p.get(r, c).mul(&i) } else { p.get(r, c).mul(&i.neg()) });
    Some(dp.mul(&pinv))
}

/// Conditions for `(e^{B+iω₁}, e^{iω₂})` to be generalized Kähler.
pub fn type00_check<R: Rng>(b: &Form, w1: &Form, w2: &Form, points: &[Point], rng: &mut R) -> GkResult<Type00Report> {
    let chart = b.chart().clone();
    chart.check(w1.chart())?;
    chart.check(w2.chart())?;
    let d = chart.dim();
    let mut notes = Vec::new();
    let (mut c1, mut c2, mut c3, mut c4) = (None, None, None, None);
    if d == 4 {
        c1 = Some(b.wedge(w1).is_zero());
        c2 = Some(b.wedge(w2).is_zero());
        c3 = Some(w1.wedge(w2).is_zero());
        let bb = b.wedge(b);
        c4 = Some(bb == w1.wedge(w1).add(&w2.wedge(w2)) && !bb.is_zero());
    }
    let i = ScalarExpr::i();
    let wp = b.add(&w1.sub(w2).scale(&i)).two_form_matrix();
    let wm = b.add(&w1.add(w2).scale(&i)).two_form_matrix();
    let w2m = w2.two_form_matrix();
    let mut kernel_dims = true;
    let mut tame = true;
    for (k, p) in points.iter().enumerate() {
        let w2p = mat_at(&w2m, p)?;
        for (lbl, m) in [("+", &wp), ("-", &wm)] {
            let mp = mat_at(m, p)?;
            match complex_structure_from_kernel(&mp) {
                None => {
                    kernel_dims = false;
                    tame = false;
                    notes.push(format!("point {k}: ker ω_C^{lbl} has wrong dimension or meets its conjugate"));
                }
                Some(ic) => {
                    for _ in 0..20 {
                        let x: Vec<Cq> = (0..d).map(|_| Cq::new(random_rat(rng, 6, 3), num::zero())).collect();
                        let ix = ic.apply(&x);
                        let wx = w2p.transpose().apply(&x);
                        let val = wx.iter().zip(&ix).fold(<Cq as Field>::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                        if !val.im.is_zero() || !val.re.is_positive() {
                            if x.iter().all(|c| Field::is_zero(c)) {
                                continue;
                            }
                            tame = false;
                            notes.push(format!("point {k}: ω₂(x, I{lbl}x) not positive"));
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(Type00Report {
        b_wedge_w1: c1,
        b_wedge_w2: c2,
        w1_wedge_w2: c3,
        bb_equals_sum_nonzero: c4,
        kernel_dims,
        tame,
        notes,
    })
}

/// `e = v − i_v b` with `i_v ω = df`; checks `e·ψ = i df∧ψ`.
pub fn hamiltonian_element(pair: &GKPair, f: &ScalarExpr) -> GkResult<GenVec> {
    let chart = pair.chart();
    let d = chart.dim();
    let w = pair.omega().two_form_matrix();
    let df: Vec<ScalarExpr> = (0..d).map(|j| f.partial(j)).collect();
    let v = w.transpose().solve(&df).ok_or(GkError::DegenerateOmega)?;
    if w.det().is_zero() {
        return Err(GkError::DegenerateOmega);
    }
    let bm = pair.b().two_form_matrix();
    let ib = bm.transpose().apply(&v);
    let e = GenVec::new(chart, v, ib.iter().map(|x| x.neg()).collect());
    let lhs = e.act(pair.psi_form());
    let rhs = d_scalar(chart, f).wedge(pair.psi_form()).scale(&ScalarExpr::i());
    if lhs != rhs {
        return Err(GkError::DecompositionFailed("hamiltonian element fails e·ψ = i df·ψ".into()));
    }
    Ok(e)
}

/// Lie algebroid differential of a section of `Ē`, returned in `Λ²Ē`.
pub fn d_ebar(j: &GCStruct, eps: &GenVec) -> GkResult<BiVec> {
    let frame = j.frame()?;
    let e = &frame.e;
    let eb = &frame.ebar;
    let k = e.len();
    let chart = j.chart();
    let two = ScalarExpr::int(2);
    let ev = |x: &GenVec, f: &ScalarExpr| -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (a, va) in x.v.iter().enumerate() {
            if !va.is_zero() {
                acc = acc.add(&va.mul(&f.partial(a)));
            }
        }
        acc
    };
    let pair_e: Vec<ScalarExpr> = e.iter().map(|x| eps.pair(x).mul(&two)).collect();
    let m = Mat::from_fn(k, k, |a, b| {
        if a == b {
            return ScalarExpr::zero();
        }
        let br = e[a].dorfman(&e[b]);
        ev(&e[a], &pair_e[b]).sub(&ev(&e[b], &pair_e[a])).sub(&eps.pair(&br).mul(&two))
    });
    let g = Mat::from_fn(k, k, |a, i| eb[a].pair(&e[i]).mul(&two));
    let ginv = g.inverse().ok_or_else(|| GkError::DecompositionFailed("Ē does not pair with E".into()))?;
    let ebm = Mat::from_cols(&eb.iter().map(|x| x.components()).collect::<Vec<_>>());
    let m2 = ebm.mul(&ginv.transpose()).mul(&m).mul(&ginv).mul(&ebm.transpose());
    Ok(BiVec::from_matrix(chart, m2))
}

/// Component of a bivector in `X∧Y ⊕ Y∧X` for projectors `px`, `py`.
pub fn bivector_part(h: &BiVec, px: &Mat<ScalarExpr>, py: &Mat<ScalarExpr>) -> BiVec {
    let m = px.mul(&h.m).mul(&py.transpose()).add(&py.mul(&h.m).mul(&px.transpose()));
    BiVec::from_matrix(h.chart(), m)
}

/// `∂̄⁺∂̄⁻f`: the `Ē⁺∧Ē⁻` part of the algebroid differential of `∂̄⁻f`.
pub fn ddbar_pm(pair: &GKPair, f: &ScalarExpr) -> GkResult<BiVec> {
    let [_, _, pbp, pbm] = pair.projectors()?;
    let df = GenVec::from_one_form(&d_scalar(pair.chart(), f));
    let dm = apply(&pbm, &df);
    let h = d_ebar(&pair.j1, &dm)?;
    let part = bivector_part(&h, &pbp, &pbm);
    let rest = BiVec::from_matrix(h.chart(), h.m.sub(&part.m));
    // the Λ²Ē⁻ remainder is ∂̄⁻∂̄⁻f, which vanishes for integrable J
    if !rest.is_zero() && pair.j1.integrable()? {
        return Err(GkError::DecompositionFailed("∂̄⁺∂̄⁻f has components outside Ē⁺∧Ē⁻".into()));
    }
    Ok(part)
}

/// Independent route: `∂̄((J_ψ df)^{0,1})`, expected to equal `−2i ∂̄⁺∂̄⁻f`.
pub fn ddbar_oracle(pair: &GKPair, f: &ScalarExpr) -> GkResult<BiVec> {
    let j1 = pair.j1.j_matrix()?;
    let id = Mat::identity(j1.rows);
    let pbar = id.sub(&j1.scale(&ScalarExpr::i())).scale(&ScalarExpr::rat(1, 2));
    let df = GenVec::from_one_form(&d_scalar(pair.chart(), f));
    let e01 = apply(&pbar, &apply(&pair.psi.j_matrix()?, &df));
    d_ebar(&pair.j1, &e01)
}

/// Projector onto `E` and `Ē` at a point.
fn e_projectors(j: &Mat<Cq>) -> (Mat<Cq>, Mat<Cq>) {
    let id = Mat::identity(j.rows);
    let half = Cq::new(num::BigRational::new(1.into(), 2.into()), num::zero());
    let ij = j.scale(&cq_i());
    (id.add(&ij).scale(&half), id.sub(&ij).scale(&half))
}

/// `tr(J [h₁,J] [h₂,J])` at a point, with the bidegree of `h₁, h₂` checked.
pub fn trace_pairing(j: &Mat<Cq>, h1: &BiVec<Cq>, h2: &BiVec<Cq>) -> GkResult<Cq> {
    let (pe, pb) = e_projectors(j);
    for h in [h1, h2] {
        let mixed = pe.mul(&h.m).mul(&pb.transpose()).add(&pb.mul(&h.m).mul(&pe.transpose()));
        if !mixed.is_zero() {
            return Err(GkError::WrongBidegree);
        }
    }
    let d1 = h1.ad_matrix().commutator(j);
    let d2 = h2.ad_matrix().commutator(j);
    Ok(j.mul(&d1).mul(&d2).trace())
}

/// Real `h = h^{2,0} + conj(h^{2,0})` from random Gaussian-integer
/// coefficients on a basis of `E`.
pub fn random_real_h<R: Rng>(e: &[GenVec<Cq>], rng: &mut R) -> BiVec<Cq> {
    let chart = e[0].chart().clone();
    let mut h = BiVec::zero(&chart);
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            let c = crate::sample::random_cq(rng, 3);
            h = h.add(&BiVec::wedge(&e[a], &e[b]).scale(&c));
        }
    }
    h.add(&h.conj())
}

/// Evaluate the frame of a structure at a point.
pub fn frame_at(j: &GCStruct, p: &Point) -> GkResult<(Vec<GenVec<Cq>>, Vec<GenVec<Cq>>)> {
    let f = j.frame()?;
    let conv = |v: &Vec<GenVec>| -> GkResult<Vec<GenVec<Cq>>> {
        v.iter().map(|x| crate::sample::genvec_at(x, p)).collect()
    };
    Ok((conv(&f.e)?, conv(&f.ebar)?))
}

pub fn scalar_at(e: &ScalarExpr, p: &Point) -> GkResult<Cq> {
    eval_cq(e, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_point;
    use rand::SeedableRng;

    fn flat_kahler(n: usize) -> GKPair {
        let c = Chart::euclidean(n);
        let dz: Vec<Form> = (0..n).map(|k| Form::dx(&c, 2 * k).add(&Form::dx(&c, 2 * k + 1).scale(&ScalarExpr::i()))).collect();
        let mut w = Form::zero(&c);
        for k in 0..n {
            w = w.add(&Form::dxs(&c, &[2 * k + 1, 2 * k]));
        }
        GKPair::new(GCStruct::complex_volume(dz).unwrap(), Form::zero(&c), w).unwrap()
    }

    #[test]
    fn flat_kahler_is_compatible() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2] {
            let p = flat_kahler(n);
            let pts: Vec<Point> = (0..3).map(|_| random_point(p.chart(), &mut rng)).collect();
            let r = compatibility_check(&p, &pts).unwrap();
            assert!(r.ok(), "{r:?}");
            let f = epm_split(&p, &pts[0]).unwrap();
            assert_eq!((f.plus.len(), f.minus.len()), (n, n));
        }
    }

    #[test]
    fn opposite_symplectic_pair_not_positive() {
        let c = Chart::euclidean(1);
        let w = Form::dxs(&c, &[1, 0]);
        let j1 = GCStruct::symplectic(Form::zero(&c), w.clone()).unwrap();
        let p = GKPair::new(j1, Form::zero(&c), w.neg()).unwrap();
        let pt = Point::rational(&[num::BigRational::from_integer(1.into()), num::BigRational::from_integer(2.into())]);
        let r = compatibility_check(&p, &[pt.clone()]).unwrap();
        assert!(r.commute && !r.positive);
        assert!(matches!(epm_split(&p, &pt), Err(GkError::DimensionMismatch(_))));
    }

    #[test]
    fn hamiltonian_examples() {
        let c = Chart::euclidean(1);
        let p = GKPair::new(GCStruct::symplectic(Form::zero(&c), Form::dxs(&c, &[0, 1])).unwrap(), Form::zero(&c), Form::dxs(&c, &[0, 1])).unwrap();
        let e = hamiltonian_element(&p, &ScalarExpr::var(0)).unwrap();
        assert_eq!(e, GenVec::basis(&c, 1).neg());
        assert!(hamiltonian_element(&p, &ScalarExpr::int(3)).unwrap().is_zero());
    }

    #[test]
    fn ddbar_two_routes_agree() {
        let p = flat_kahler(2);
        let f = ScalarExpr::var(0).mul(&ScalarExpr::var(2));
        let a = ddbar_pm(&p, &f).unwrap();
        let b = ddbar_oracle(&p, &f).unwrap();
        assert!(!a.is_zero());
        assert_eq!(b.m, a.m.scale(&ScalarExpr::constant(cq_i()).mul(&ScalarExpr::int(-2))));
        assert!(ddbar_pm(&p, &ScalarExpr::var(1)).unwrap().is_zero());
    }
}
