//! Generalized tangent bundle (T ⊕ T*)^C on a chart.
//!
//! Components are indexed `0..d` for `∂_j` and `d..2d` for `dx_j`, d = 2n.
//! Pairing `⟨v+ξ, u+η⟩ = ½(ξ(u)+η(v))`; Clifford action
//! `(v+ξ)·α = i_v α + ξ∧α`.

use crate::error::{GkError, GkResult};
use crate::field::{Diff, Field};
use crate::forms::{Chart, Form};
use crate::linalg::Mat;
use crate::symexpr::{cq_rat, ScalarExpr};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct GenVec<F: Field = ScalarExpr> {
    chart: Chart,
    pub v: Vec<F>,
    pub xi: Vec<F>,
}

fn half<F: Field>() -> F {
    F::from_cq(&cq_rat(1, 2))
}

impl<F: Field> GenVec<F> {
    pub fn zero(chart: &Chart) -> Self {
        let d = chart.dim();
        GenVec { chart: chart.clone(), v: vec![F::zero(); d], xi: vec![F::zero(); d] }
    }
    pub fn new(chart: &Chart, v: Vec<F>, xi: Vec<F>) -> Self {
        assert!(v.len() == chart.dim() && xi.len() == chart.dim());
        GenVec { chart: chart.clone(), v, xi }
    }
    /// Basis element `k` of the coordinate frame (`∂_k` or `dx_{k-d}`).
    pub fn basis(chart: &Chart, k: usize) -> Self {
        let mut e = Self::zero(chart);
        e.set_comp(k, F::one());
        e
    }
    pub fn vector(chart: &Chart, v: Vec<F>) -> Self {
        let d = chart.dim();
        Self::new(chart, v, vec![F::zero(); d])
    }
    pub fn covector(chart: &Chart, xi: Vec<F>) -> Self {
        let d = chart.dim();
        Self::new(chart, vec![F::zero(); d], xi)
    }
    /// Covector part from a one-form (higher degrees ignored).
    pub fn from_one_form(f: &Form<F>) -> Self {
        let d = f.chart().dim();
        Self::covector(f.chart(), (0..d).map(|j| f.coeff(1 << j)).collect())
    }
    pub fn from_components(chart: &Chart, c: &[F]) -> Self {
        let d = chart.dim();
        assert_eq!(c.len(), 2 * d);
        Self::new(chart, c[..d].to_vec(), c[d..].to_vec())
    }
    pub fn components(&self) -> Vec<F> {
        self.v.iter().chain(self.xi.iter()).cloned().collect()
    }
    pub fn comp(&self, k: usize) -> &F {
        let d = self.v.len();
        if k < d {
            &self.v[k]
        } else {
            &self.xi[k - d]
        }
    }
    pub fn set_comp(&mut self, k: usize, x: F) {
        let d = self.v.len();
        if k < d {
            self.v[k] = x
        } else {
            self.xi[k - d] = x
        }
    }
    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    pub fn covector_form(&self) -> Form<F> {
        Form::one_form(&self.chart, &self.xi)
    }
    pub fn is_zero(&self) -> bool {
        self.v.iter().chain(self.xi.iter()).all(|x| x.is_zero())
    }
    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        GenVec { chart: self.chart.clone(), v: self.v.iter().map(&f).collect(), xi: self.xi.iter().map(&f).collect() }
    }
    pub fn convert<G: Field>(&self, f: impl Fn(&F) -> G) -> GenVec<G> {
        GenVec { chart: self.chart.clone(), v: self.v.iter().map(&f).collect(), xi: self.xi.iter().map(&f).collect() }
    }
    pub fn add(&self, o: &Self) -> Self {
        GenVec {
            chart: self.chart.clone(),
            v: self.v.iter().zip(&o.v).map(|(a, b)| a.add(b)).collect(),
            xi: self.xi.iter().zip(&o.xi).map(|(a, b)| a.add(b)).collect(),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }
    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul(s))
    }
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn try_pair(&self, o: &Self) -> GkResult<F> {
        self.chart.check(&o.chart)?;
        let mut acc = F::zero();
        for j in 0..self.v.len() {
            acc = acc.add(&self.xi[j].mul(&o.v[j])).add(&o.xi[j].mul(&self.v[j]));
        }
        Ok(acc.mul(&half()))
    }
    /// Split pairing `½(ξ(u)+η(v))`.
    pub fn pair(&self, o: &Self) -> F {
        self.try_pair(o).expect("chart mismatch")
    }

    pub fn try_act(&self, a: &Form<F>) -> GkResult<Form<F>> {
        self.chart.check(a.chart())?;
        Ok(a.interior_vec(&self.v).add(&self.covector_form().wedge(a)))
    }
    /// Clifford action `i_v α + ξ∧α`.
    pub fn act(&self, a: &Form<F>) -> Form<F> {
        self.try_act(a).expect("chart mismatch")
    }
}

fn vec_bracket<F: Diff>(u: &[F], v: &[F]) -> Vec<F> {
    let d = u.len();
    (0..d)
        .map(|j| {
            let mut acc = F::zero();
            for k in 0..d {
                if !u[k].is_zero() {
                    acc = acc.add(&u[k].mul(&v[j].partial(k)));
                }
                if !v[k].is_zero() {
                    acc = acc.sub(&v[k].mul(&u[j].partial(k)));
                }
            }
            acc
        })
        .collect()
}

/// Lie derivative of a one-form along a vector field.
fn lie_one_form<F: Diff>(u: &[F], eta: &[F]) -> Vec<F> {
    let d = u.len();
    (0..d)
        .map(|j| {
            let mut acc = F::zero();
            for k in 0..d {
                if !u[k].is_zero() {
                    acc = acc.add(&u[k].mul(&eta[j].partial(k)));
                }
                if !eta[k].is_zero() {
                    acc = acc.add(&eta[k].mul(&u[k].partial(j)));
                }
            }
            acc
        })
        .collect()
}

fn contract<F: Field>(u: &[F], eta: &[F]) -> F {
    u.iter().zip(eta).fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
}

fn grad<F: Diff>(f: &F, d: usize) -> Vec<F> {
    (0..d).map(|j| f.partial(j)).collect()
}

impl<F: Diff> GenVec<F> {
    /// Courant bracket `[u,v] + L_uη − L_vξ − ½d(i_uη − i_vξ)`.
    pub fn try_courant(&self, o: &Self) -> GkResult<Self> {
        self.chart.check(&o.chart)?;
        let d = self.v.len();
        let v = vec_bracket(&self.v, &o.v);
        let a = lie_one_form(&self.v, &o.xi);
        let b = lie_one_form(&o.v, &self.xi);
        let g = contract(&self.v, &o.xi).sub(&contract(&o.v, &self.xi)).mul(&half());
        let dg = grad(&g, d);
        let xi = (0..d).map(|j| a[j].sub(&b[j]).sub(&dg[j])).collect();
        Ok(GenVec { chart: self.chart.clone(), v, xi })
    }
    pub fn courant(&self, o: &Self) -> Self {
        self.try_courant(o).expect("chart mismatch")
    }
    /// Dorfman bracket `[u,v] + L_uη − i_v dξ`.
    pub fn try_dorfman(&self, o: &Self) -> GkResult<Self> {
        self.chart.check(&o.chart)?;
        let d = self.v.len();
        let v = vec_bracket(&self.v, &o.v);
        let a = lie_one_form(&self.v, &o.xi);
        let dxi = self.covector_form().ext_d();
        let ivdxi = dxi.interior_vec(&o.v);
        let xi = (0..d).map(|j| a[j].sub(&ivdxi.coeff(1 << j))).collect();
        Ok(GenVec { chart: self.chart.clone(), v, xi })
    }
    pub fn dorfman(&self, o: &Self) -> Self {
        self.try_dorfman(o).expect("chart mismatch")
    }
    /// `L_e α = d(e·α) + e·dα`.
    pub fn try_lie_form(&self, a: &Form<F>) -> GkResult<Form<F>> {
        Ok(self.try_act(a)?.ext_d().add(&self.act(&a.ext_d())))
    }
    pub fn lie_form(&self, a: &Form<F>) -> Form<F> {
        self.try_lie_form(a).expect("chart mismatch")
    }
}

impl GenVec<ScalarExpr> {
    pub fn is_real(&self) -> bool {
        self.v.iter().chain(self.xi.iter()).all(|x| x.is_real())
    }
}

/// Endomorphism of T⊕T* as a matrix acting on component columns.
pub fn apply<F: Field>(m: &Mat<F>, e: &GenVec<F>) -> GenVec<F> {
    GenVec::from_components(e.chart(), &m.apply(&e.components()))
}

/// Matrix of the pairing: `⟨a,b⟩ = aᵀ P b`.
pub fn pairing_matrix<F: Field>(d: usize) -> Mat<F> {
    let mut p = Mat::zeros(2 * d, 2 * d);
    for j in 0..d {
        p.set(j, d + j, half());
        p.set(d + j, j, half());
    }
    p
}

/// Matrix of `v + θ ↦ v + θ − i_v b`.
pub fn ad_b_matrix<F: Field>(b: &Form<F>) -> Mat<F> {
    let d = b.chart().dim();
    let bm = b.two_form_matrix();
    let mut m = Mat::identity(2 * d);
    for j in 0..d {
        for a in 0..d {
            // (i_v b)_j = Σ_a v^a b_{aj}
            m.set(d + j, a, bm.get(a, j).neg());
        }
    }
    m
}

/// Matrix of `v + θ ↦ v + θ + β(·, θ)` for a bivector `β^{ab}` on T.
pub fn ad_beta_matrix<F: Field>(beta: &Mat<F>) -> Mat<F> {
    let d = beta.rows;
    let mut m = Mat::identity(2 * d);
    for a in 0..d {
        for b in 0..d {
            m.set(a, d + b, beta.get(a, b).clone());
        }
    }
    m
}

impl<F: Diff> GenVec<F> {
    /// b-field action on a generalized vector; `b` must be a closed 2-form.
    pub fn ad_b(&self, b: &Form<F>) -> GkResult<Self> {
        check_closed_two_form(b)?;
        Ok(apply(&ad_b_matrix(b), self))
    }
}

pub fn check_closed_two_form<F: Diff>(b: &Form<F>) -> GkResult<()> {
    if b.terms().any(|(k, _)| k.count_ones() != 2) || !b.is_closed() {
        return Err(GkError::NotClosed);
    }
    Ok(())
}

/// b-field action on forms: `α ↦ e^b ∧ α`.
pub fn ad_b_form<F: Diff>(b: &Form<F>, a: &Form<F>) -> GkResult<Form<F>> {
    check_closed_two_form(b)?;
    Ok(b.exp().wedge(a))
}

/// Element of Λ²(T⊕T*)^C, `Σ_{a<b} m_ab E_a∧E_b` over the coordinate frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BiVec<F: Field = ScalarExpr> {
    chart: Chart,
    /// Antisymmetric 2d×2d coefficient matrix.
    pub m: Mat<F>,
}

impl<F: Field> BiVec<F> {
    pub fn zero(chart: &Chart) -> Self {
        let n = 2 * chart.dim();
        BiVec { chart: chart.clone(), m: Mat::zeros(n, n) }
    }
    pub fn from_matrix(chart: &Chart, m: Mat<F>) -> Self {
        BiVec { chart: chart.clone(), m }
    }
    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    /// `x ∧ y`.
    pub fn wedge(x: &GenVec<F>, y: &GenVec<F>) -> Self {
        let xc = x.components();
        let yc = y.components();
        let n = xc.len();
        let m = Mat::from_fn(n, n, |a, b| xc[a].mul(&yc[b]).sub(&xc[b].mul(&yc[a])));
        BiVec { chart: x.chart().clone(), m }
    }
    /// Bivector on T from an antisymmetric matrix `β^{ab}`.
    pub fn from_vector_bivector(chart: &Chart, beta: &Mat<F>) -> Self {
        let d = chart.dim();
        let mut m = Mat::zeros(2 * d, 2 * d);
        for a in 0..d {
            for b in 0..d {
                m.set(a, b, beta.get(a, b).clone());
            }
        }
        BiVec { chart: chart.clone(), m }
    }
    /// The `T∧T` block, or `NotBivector` if other components are present.
    pub fn vector_part(&self) -> GkResult<Mat<F>> {
        let d = self.chart.dim();
        for a in 0..2 * d {
            for b in 0..2 * d {
                if (a >= d || b >= d) && !self.m.get(a, b).is_zero() {
                    return Err(GkError::NotBivector);
                }
            }
        }
        Ok(Mat::from_fn(d, d, |a, b| self.m.get(a, b).clone()))
    }
    pub fn add(&self, o: &Self) -> Self {
        BiVec { chart: self.chart.clone(), m: self.m.add(&o.m) }
    }
    pub fn scale(&self, s: &F) -> Self {
        BiVec { chart: self.chart.clone(), m: self.m.scale(s) }
    }
    pub fn conj(&self) -> Self {
        BiVec { chart: self.chart.clone(), m: self.m.map(|x| x.conj()) }
    }
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Clifford action: `E_a∧E_b ↦ ½(E_aE_b − E_bE_a)`.
    pub fn act(&self, alpha: &Form<F>) -> Form<F> {
        let n = self.m.rows;
        let d = n / 2;
        let mut acc = Form::zero(alpha.chart());
        let basis: Vec<GenVec<F>> = (0..n).map(|k| GenVec::basis(&self.chart, k)).collect();
        let single: Vec<Form<F>> = basis.iter().map(|e| e.act(alpha)).collect();
        for a in 0..n {
            for b in a + 1..n {
                let c = self.m.get(a, b);
                if c.is_zero() {
                    continue;
                }
                // E_aE_b − ⟨E_a,E_b⟩ equals the antisymmetrized product
                let mut t = basis[a].act(&single[b]);
                if b == a + d {
                    t = t.sub(&alpha.scale(&half()));
                }
                acc = acc.add(&t.scale(c));
            }
        }
        acc
    }

    /// Adjoint action on T⊕T*: `[q(B), x]` in the Clifford algebra.
    pub fn ad_matrix(&self) -> Mat<F> {
        // ad(E_a∧E_b)(x) = 2(⟨E_b,x⟩E_a − ⟨E_a,x⟩E_b), with ⟨E_k, x⟩ = ½ x_{k*}
        let n = self.m.rows;
        let d = n / 2;
        let dual = |k: usize| if k < d { k + d } else { k - d };
        let mut r: Mat<F> = Mat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let c = self.m.get(a, b);
                if a >= b || c.is_zero() {
                    continue;
                }
                // column dual(b) contributes to row a, column dual(a) to row b
                let x = r.get(a, dual(b)).add(c);
                r.set(a, dual(b), x);
                let y = r.get(b, dual(a)).sub(c);
                r.set(b, dual(a), y);
            }
        }
        r
    }
}

/// Element of Λ³(T⊕T*)^C, `Σ_{a<b<c} t_abc E_a∧E_b∧E_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriVec<F: Field = ScalarExpr> {
    chart: Chart,
    pub t: BTreeMap<(usize, usize, usize), F>,
}

fn perm_sign3(a: usize, b: usize, c: usize) -> (i32, (usize, usize, usize)) {
    let mut v = [a, b, c];
    let mut s = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                s = -s;
            }
        }
    }
    if v[0] == v[1] || v[1] == v[2] {
        (0, (v[0], v[1], v[2]))
    } else {
        (s, (v[0], v[1], v[2]))
    }
}

impl<F: Field> TriVec<F> {
    pub fn zero(chart: &Chart) -> Self {
        TriVec { chart: chart.clone(), t: BTreeMap::new() }
    }
    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    fn add_entry(&mut self, a: usize, b: usize, c: usize, x: F) {
        let (s, key) = perm_sign3(a, b, c);
        if s == 0 || x.is_zero() {
            return;
        }
        let x = if s < 0 { x.neg() } else { x };
        let e = self.t.entry(key).or_insert_with(F::zero);
        *e = e.add(&x);
        if e.is_zero() {
            self.t.remove(&key);
        }
    }
    /// `x ∧ y ∧ z`.
    pub fn wedge(x: &GenVec<F>, y: &GenVec<F>, z: &GenVec<F>) -> Self {
        let (xc, yc, zc) = (x.components(), y.components(), z.components());
        let n = xc.len();
        let mut r = Self::zero(x.chart());
        for a in 0..n {
            if xc[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if yc[b].is_zero() || a == b {
                    continue;
                }
                let xy = xc[a].mul(&yc[b]);
                for c in 0..n {
                    if zc[c].is_zero() || c == a || c == b {
                        continue;
                    }
                    r.add_entry(a, b, c, xy.mul(&zc[c]));
                }
            }
        }
        r
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((a, b, c), x) in &o.t {
            r.add_entry(*a, *b, *c, x.clone());
        }
        r
    }
    pub fn scale(&self, s: &F) -> Self {
        let mut r = Self::zero(&self.chart);
        for ((a, b, c), x) in &self.t {
            r.add_entry(*a, *b, *c, x.mul(s));
        }
        r
    }
    pub fn conj(&self) -> Self {
        let mut r = Self::zero(&self.chart);
        for ((a, b, c), x) in &self.t {
            r.add_entry(*a, *b, *c, x.conj());
        }
        r
    }
    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }
    /// Clifford action via `E_aE_bE_c − ⟨E_b,E_c⟩E_a + ⟨E_a,E_c⟩E_b − ⟨E_a,E_b⟩E_c`.
    pub fn act(&self, alpha: &Form<F>) -> Form<F> {
        let n = 2 * self.chart.dim();
        let basis: Vec<GenVec<F>> = (0..n).map(|k| GenVec::basis(&self.chart, k)).collect();
        let mut acc = Form::zero(alpha.chart());
        for ((a, b, c), x) in &self.t {
            let (ea, eb, ec) = (&basis[*a], &basis[*b], &basis[*c]);
            let mut t = ea.act(&eb.act(&ec.act(alpha)));
            let gbc = eb.pair(ec);
            if !gbc.is_zero() {
                t = t.sub(&ea.act(alpha).scale(&gbc));
            }
            let gac = ea.pair(ec);
            if !gac.is_zero() {
                t = t.add(&eb.act(alpha).scale(&gac));
            }
            let gab = ea.pair(eb);
            if !gab.is_zero() {
                t = t.sub(&ec.act(alpha).scale(&gab));
            }
            acc = acc.add(&t.scale(x));
        }
        acc
    }
}

impl TriVec<ScalarExpr> {
    pub fn is_real(&self) -> bool {
        self.t.values().all(|x| x.is_real())
    }
}

/// Clifford exponential of a bivector on T acting on a form (finite sum).
pub fn ad_beta_form<F: Field>(beta: &BiVec<F>, a: &Form<F>) -> GkResult<Form<F>> {
    beta.vector_part()?;
    let mut acc = a.clone();
    let mut term = a.clone();
    let mut k = 1i64;
    loop {
        term = beta.act(&term).scale(&F::from_cq(&cq_rat(1, k)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
        k += 1;
    }
    Ok(acc)
}

/// β-field action on a generalized vector: `v + θ ↦ v + θ + β(·, θ)`.
pub fn ad_beta_vec<F: Field>(beta: &BiVec<F>, e: &GenVec<F>) -> GkResult<GenVec<F>> {
    let m = beta.vector_part()?;
    Ok(apply(&ad_beta_matrix(&m), e))
}

/// `(L_e J)(a) = [e, Ja] − J[e, a]` (Dorfman), as a matrix on the frame.
pub fn gen_lie_j<F: Diff>(e: &GenVec<F>, j: &Mat<F>) -> Mat<F> {
    let chart = e.chart();
    let n = 2 * chart.dim();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let a = GenVec::basis(chart, k);
        let ja = apply(j, &a);
        let lhs = e.dorfman(&ja);
        let rhs = apply(j, &e.dorfman(&a));
        cols.push(lhs.sub(&rhs).components());
    }
    Mat::from_cols(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::cq_int;

    type G = GenVec<ScalarExpr>;
    type SF = Form<ScalarExpr>;

    #[test]
    fn pairing_examples() {
        let c = Chart::euclidean(1);
        let e = G::basis(&c, 0).add(&G::basis(&c, 2));
        assert_eq!(e.pair(&e), ScalarExpr::one());
        assert_eq!(G::basis(&c, 0).pair(&G::basis(&c, 1)), ScalarExpr::zero());
        assert_eq!(G::basis(&c, 0).pair(&G::basis(&c, 2)), ScalarExpr::rat(1, 2));
    }

    #[test]
    fn clifford_examples() {
        let c = Chart::euclidean(1);
        let w = SF::dxs(&c, &[0, 1]);
        assert_eq!(G::basis(&c, 0).act(&w), SF::dx(&c, 1));
        let e = G::basis(&c, 0).add(&G::basis(&c, 2));
        let a = SF::one(&c).add(&SF::dx(&c, 1).scale(&ScalarExpr::var(0))).add(&w);
        assert_eq!(e.act(&e.act(&a)), a);
        assert_eq!(G::basis(&c, 2).act(&G::basis(&c, 3).act(&SF::one(&c))), w);
    }

    #[test]
    fn bracket_examples() {
        let c = Chart::euclidean(1);
        let d1 = G::basis(&c, 0);
        let d2 = G::basis(&c, 1);
        assert!(d1.courant(&d2).is_zero());
        let x1dx2 = G::covector(&c, vec![ScalarExpr::zero(), ScalarExpr::var(0)]);
        assert_eq!(d1.courant(&x1dx2), G::basis(&c, 3));
        assert_eq!(d1.lie_form(&SF::dx(&c, 1).scale(&ScalarExpr::var(0))), SF::dx(&c, 1));
        let l = G::basis(&c, 2).lie_form(&SF::scalar(&c, ScalarExpr::var(1)));
        assert!(l.is_zero());
    }

    #[test]
    fn b_and_beta_examples() {
        let c = Chart::euclidean(1);
        let b = SF::dxs(&c, &[0, 1]).scale(&ScalarExpr::int(3));
        let d1 = G::basis(&c, 0);
        let expect = d1.add(&G::covector(&c, vec![ScalarExpr::zero(), ScalarExpr::int(-3)]));
        assert_eq!(d1.ad_b(&b).unwrap(), expect);
        let c2 = Chart::euclidean(2);
        let open = SF::dxs(&c2, &[1, 2]).scale(&ScalarExpr::var(0));
        assert_eq!(G::basis(&c2, 0).ad_b(&open), Err(GkError::NotClosed));
        assert_eq!(d1.ad_b(&SF::zero(&c)).unwrap(), d1);
        let beta = BiVec::wedge(&G::basis(&c, 2), &G::basis(&c, 0));
        assert_eq!(ad_beta_form(&beta, &SF::one(&c)), Err(GkError::NotBivector));
        let beta = BiVec::from_vector_bivector(&c, &Mat::from_fn(2, 2, |a, b| ScalarExpr::int([[0, 1], [-1, 0]][a][b])));
        let dx1 = G::basis(&c, 2);
        // dx_1 ↦ dx_1 + Σ_a β^{a1}∂_a = dx_1 − ∂_2
        assert_eq!(ad_beta_vec(&beta, &dx1).unwrap(), dx1.sub(&d1.map(|_| ScalarExpr::zero()).add(&G::basis(&c, 1))));
        let _ = cq_int(0);
    }

    #[test]
    fn quantization_is_antisymmetrization() {
        let c = Chart::euclidean(1);
        let n = 4;
        let basis: Vec<G> = (0..n).map(|k| G::basis(&c, k)).collect();
        let alpha = SF::one(&c).add(&SF::dx(&c, 0)).add(&SF::dxs(&c, &[0, 1]).scale(&ScalarExpr::int(5)));
        for a in 0..n {
            for b in 0..n {
                let biv = BiVec::wedge(&basis[a], &basis[b]);
                let lhs = biv.act(&alpha);
                let rhs = basis[a].act(&basis[b].act(&alpha)).sub(&basis[b].act(&basis[a].act(&alpha))).scale(&ScalarExpr::rat(1, 2));
                assert_eq!(lhs, rhs);
                for cc in 0..n {
                    let tri = TriVec::wedge(&basis[a], &basis[b], &basis[cc]);
                    let idx = [a, b, cc];
                    let mut rhs = SF::zero(&c);
                    for p in [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]] {
                        let (s, _) = perm_sign3(p[0], p[1], p[2]);
                        let t = basis[idx[p[0]]].act(&basis[idx[p[1]]].act(&basis[idx[p[2]]].act(&alpha)));
                        rhs = if s > 0 { rhs.add(&t) } else { rhs.sub(&t) };
                    }
                    assert_eq!(tri.act(&alpha), rhs.scale(&ScalarExpr::rat(1, 6)));
                }
            }
        }
    }

    #[test]
    fn ad_matrix_matches_commutator() {
        let c = Chart::euclidean(1);
        let n = 4;
        let basis: Vec<G> = (0..n).map(|k| G::basis(&c, k)).collect();
        let alpha = SF::one(&c).add(&SF::dx(&c, 1)).add(&SF::dxs(&c, &[0, 1]).scale(&ScalarExpr::int(2)));
        for a in 0..n {
            for b in 0..n {
                let biv = BiVec::wedge(&basis[a], &basis[b]);
                let ad = biv.ad_matrix();
                for x in &basis {
                    let lhs = biv.act(&x.act(&alpha)).sub(&x.act(&biv.act(&alpha)));
                    let rhs = apply(&ad, x).act(&alpha);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
