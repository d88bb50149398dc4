//! Exterior algebra on a coordinate chart of dimension 2n (at most 6).
//!
//! A [`Form`] is a sparse map from basis monomials `dx_I` (bitmask, bit j for
//! coordinate j) to coefficients. Mixed degrees are allowed.

use crate::error::{GkError, GkResult};
use crate::field::{Diff, Field};
use crate::linalg::Mat;
use crate::symexpr::{Cq, ScalarExpr, NV};
use num::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ChartData {
    pub names: Vec<String>,
    pub periodic: Vec<bool>,
}

/// Shared chart handle: coordinate names and periodicity flags.
#[derive(Clone, Debug)]
pub struct Chart(Arc<ChartData>);

impl PartialEq for Chart {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0 == o.0
    }
}
impl Eq for Chart {}

impl Chart {
    pub fn new(names: Vec<String>, periodic: Vec<bool>) -> GkResult<Self> {
        let d = names.len();
        if d == 0 || d % 2 != 0 || d > NV {
            return Err(GkError::DimensionMismatch(format!("chart dimension {} must be even and at most {}", d, NV)));
        }
        if periodic.len() != d {
            return Err(GkError::DimensionMismatch("periodicity flags do not match coordinates".into()));
        }
        Ok(Chart(Arc::new(ChartData { names, periodic })))
    }
    /// Coordinates `x1..x{2n}`, none periodic.
    pub fn euclidean(n: usize) -> Self {
        Self::new((1..=2 * n).map(|i| format!("x{}", i)).collect(), vec![false; 2 * n]).unwrap()
    }
    /// Coordinates `x1..x{2n}`, all periodic with period 2π.
    pub fn torus(n: usize) -> Self {
        Self::new((1..=2 * n).map(|i| format!("x{}", i)).collect(), vec![true; 2 * n]).unwrap()
    }
    pub fn named(names: &[&str], periodic: bool) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect(), vec![periodic; names.len()]).unwrap()
    }
    pub fn dim(&self) -> usize {
        self.0.names.len()
    }
    pub fn n(&self) -> usize {
        self.dim() / 2
    }
    pub fn names(&self) -> &[String] {
        &self.0.names
    }
    pub fn periodic(&self) -> &[bool] {
        &self.0.periodic
    }
    pub fn is_torus(&self) -> bool {
        self.0.periodic.iter().all(|&p| p)
    }
    pub fn top_mask(&self) -> u8 {
        ((1u16 << self.dim()) - 1) as u8
    }
    pub fn check(&self, o: &Chart) -> GkResult<()> {
        if self == o {
            Ok(())
        } else {
            Err(GkError::ChartMismatch)
        }
    }
}

/// Sign of `dx_a ∧ dx_b` relative to the sorted monomial, or 0 if they overlap.
pub fn wedge_sign(a: u8, b: u8) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn sigma_sign(deg: u32) -> i32 {
    if deg % 4 < 2 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<F: Field = ScalarExpr> {
    chart: Chart,
    terms: BTreeMap<u8, F>,
}

impl<F: Field> Form<F> {
    pub fn zero(chart: &Chart) -> Self {
        Form { chart: chart.clone(), terms: BTreeMap::new() }
    }
    pub fn scalar(chart: &Chart, f: F) -> Self {
        Self::monomial(chart, 0, f)
    }
    pub fn one(chart: &Chart) -> Self {
        Self::scalar(chart, F::one())
    }
    pub fn monomial(chart: &Chart, mask: u8, f: F) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(mask, f);
        }
        Form { chart: chart.clone(), terms }
    }
    pub fn dx(chart: &Chart, j: usize) -> Self {
        assert!(j < chart.dim());
        Self::monomial(chart, 1 << j, F::one())
    }
    /// `dx_i ∧ dx_j ∧ ...` in the given order.
    pub fn dxs(chart: &Chart, idx: &[usize]) -> Self {
        idx.iter().fold(Self::one(chart), |acc, &j| acc.wedge(&Self::dx(chart, j)))
    }
    /// The coordinate volume form.
    pub fn vol(chart: &Chart) -> Self {
        Self::monomial(chart, chart.top_mask(), F::one())
    }
    /// One-form `Σ c_j dx_j`.
    pub fn one_form(chart: &Chart, c: &[F]) -> Self {
        let mut f = Self::zero(chart);
        for (j, x) in c.iter().enumerate() {
            f.add_term(1 << j, x.clone());
        }
        f
    }
    /// Two-form `Σ_{a<b} m_ab dx_a ∧ dx_b` from an antisymmetric matrix.
    pub fn two_form_from_matrix(chart: &Chart, m: &Mat<F>) -> Self {
        let mut f = Self::zero(chart);
        for a in 0..chart.dim() {
            for b in a + 1..chart.dim() {
                f.add_term((1 << a) | (1 << b), m.get(a, b).clone());
            }
        }
        f
    }
    /// Antisymmetric matrix `m_ab = ω(∂_a, ∂_b)` of the degree-2 part.
    pub fn two_form_matrix(&self) -> Mat<F> {
        let d = self.chart.dim();
        let mut m = Mat::zeros(d, d);
        for a in 0..d {
            for b in a + 1..d {
                let c = self.coeff((1 << a) | (1 << b));
                m.set(b, a, c.neg());
                m.set(a, b, c);
            }
        }
        m
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    pub fn terms(&self) -> impl Iterator<Item = (u8, &F)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }
    pub fn coeff(&self, mask: u8) -> F {
        self.terms.get(&mask).cloned().unwrap_or_else(F::zero)
    }
    pub fn top_coeff(&self) -> F {
        self.coeff(self.chart.top_mask())
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|k| k.count_ones()).collect();
        d.dedup();
        d.sort();
        d.dedup();
        d
    }
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.count_ones()).min()
    }

    pub fn add_term(&mut self, mask: u8, f: F) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(c) => {
                let s = c.add(&f);
                if s.is_zero() {
                    self.terms.remove(&mask);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(mask, f);
            }
        }
    }

    pub fn try_add(&self, o: &Self) -> GkResult<Self> {
        self.chart.check(&o.chart)?;
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_term(*k, v.clone());
        }
        Ok(r)
    }
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("chart mismatch")
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(&self.chart);
        }
        self.map_coeffs(|c| c.mul(s))
    }
    pub fn scale_cq(&self, s: &Cq) -> Self {
        self.scale(&F::from_cq(s))
    }
    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        let mut r = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            r.add_term(*k, f(v));
        }
        r
    }
    /// Coefficientwise conversion to another field.
    pub fn convert<G: Field>(&self, f: impl Fn(&F) -> G) -> Form<G> {
        let mut r = Form::<G>::zero(&self.chart);
        for (k, v) in &self.terms {
            r.add_term(*k, f(v));
        }
        r
    }
    pub fn try_convert<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Form<G>, E> {
        let mut r = Form::<G>::zero(&self.chart);
        for (k, v) in &self.terms {
            r.add_term(*k, f(v)?);
        }
        Ok(r)
    }

    pub fn try_wedge(&self, o: &Self) -> GkResult<Self> {
        self.chart.check(&o.chart)?;
        let mut acc: BTreeMap<u8, F> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let s = wedge_sign(*a, *b);
                if s == 0 {
                    continue;
                }
                let p = x.mul(y);
                let p = if s < 0 { p.neg() } else { p };
                let e = acc.entry(a | b).or_insert_with(F::zero);
                *e = e.add(&p);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Form { chart: self.chart.clone(), terms: acc })
    }
    pub fn wedge(&self, o: &Self) -> Self {
        self.try_wedge(o).expect("chart mismatch")
    }

    /// Clifford involution: sign + on degrees 0,1 mod 4 and − on 2,3 mod 4.
    pub fn sigma(&self) -> Self {
        let mut r = self.clone();
        for (k, v) in r.terms.iter_mut() {
            if sigma_sign(k.count_ones()) < 0 {
                *v = v.neg();
            }
        }
        r
    }
    pub fn degree_part(&self, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.count_ones() == k).map(|(m, v)| (*m, v.clone())).collect();
        Form { chart: self.chart.clone(), terms }
    }
    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// `⟨α, β⟩ = (α ∧ σβ)_{[2n]}`.
    pub fn try_mukai(&self, o: &Self) -> GkResult<Self> {
        self.chart.check(&o.chart)?;
        let top = self.chart.top_mask();
        let mut acc = F::zero();
        for (a, x) in &self.terms {
            let b = top ^ a;
            if let Some(y) = o.terms.get(&b) {
                let s = wedge_sign(*a, b) * sigma_sign(b.count_ones());
                let p = x.mul(y);
                acc = if s > 0 { acc.add(&p) } else { acc.sub(&p) };
            }
        }
        Ok(Self::monomial(&self.chart, top, acc))
    }
    pub fn mukai(&self, o: &Self) -> Self {
        self.try_mukai(o).expect("chart mismatch")
    }
    /// Coefficient of the Mukai pairing against `dx_1 ∧ … ∧ dx_{2n}`.
    pub fn mukai_scalar(&self, o: &Self) -> F {
        self.mukai(o).top_coeff()
    }

    /// Interior product with `∂_j`.
    pub fn interior(&self, j: usize) -> Self {
        let bit = 1u8 << j;
        let mut r = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            if k & bit != 0 {
                let below = (k & (bit - 1)).count_ones();
                r.add_term(k ^ bit, if below % 2 == 0 { v.clone() } else { v.neg() });
            }
        }
        r
    }
    /// Interior product with the vector field `Σ v_j ∂_j`.
    pub fn interior_vec(&self, v: &[F]) -> Self {
        let mut r = Self::zero(&self.chart);
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                r = r.add(&self.interior(j).scale(c));
            }
        }
        r
    }

    /// Exponential of an even form without degree-0 part (a finite sum).
    pub fn exp(&self) -> Self {
        assert!(
            self.terms.keys().all(|k| k.count_ones() % 2 == 0 && *k != 0),
            "exp requires an even form with no constant part"
        );
        let mut acc = Self::one(&self.chart);
        let mut pow = Self::one(&self.chart);
        let mut k = 1i64;
        loop {
            pow = pow.wedge(self).scale(&F::from_cq(&crate::symexpr::cq_rat(1, k)));
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
            k += 1;
        }
        acc
    }
}

impl<F: Diff> Form<F> {
    pub fn ext_d(&self) -> Self {
        let mut r = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            for j in 0..self.chart.dim() {
                let bit = 1u8 << j;
                if k & bit != 0 {
                    continue;
                }
                let dv = v.partial(j);
                if dv.is_zero() {
                    continue;
                }
                let s = wedge_sign(bit, *k);
                r.add_term(k | bit, if s > 0 { dv } else { dv.neg() });
            }
        }
        r
    }
    pub fn is_closed(&self) -> bool {
        self.ext_d().is_zero()
    }
}

/// Differential of a scalar as a one-form.
pub fn d_scalar<F: Diff>(chart: &Chart, f: &F) -> Form<F> {
    Form::scalar(chart, f.clone()).ext_d()
}

impl Form<ScalarExpr> {
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }
    /// Real part, coefficientwise.
    pub fn re(&self) -> Self {
        self.map_coeffs(|c| c.re())
    }
    pub fn im(&self) -> Self {
        self.map_coeffs(|c| c.im())
    }

    /// Pullback along `F(x) = A x + t`.
    pub fn pullback_affine(&self, a: &[Vec<BigRational>], t: &[BigRational]) -> GkResult<Self> {
        let d = self.chart.dim();
        if a.len() != d || a.iter().any(|r| r.len() != d) || t.len() != d {
            return Err(GkError::DimensionMismatch("affine map size".into()));
        }
        let am = Mat::<Cq>::from_fn(d, d, |i, j| Cq::new(a[i][j].clone(), num::zero()));
        if Field::is_zero(&am.det()) {
            return Err(GkError::SingularMap);
        }
        let pulled_dx: Vec<Self> = (0..d)
            .map(|i| {
                let c: Vec<ScalarExpr> = (0..d).map(|j| ScalarExpr::constant(am.get(i, j).clone())).collect();
                Self::one_form(&self.chart, &c)
            })
            .collect();
        let mut r = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            let mut basis = Self::one(&self.chart);
            for (j, pdx) in pulled_dx.iter().enumerate() {
                if k & (1 << j) != 0 {
                    basis = basis.wedge(pdx);
                }
            }
            let c = v.substitute_affine(a, t)?;
            r = r.add(&basis.scale(&c));
        }
        Ok(r)
    }

    /// Canonical text, terms in degree then multi-index lex order.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.chart.names();
        let mut keys: Vec<u8> = self.terms.keys().copied().collect();
        keys.sort_by_key(|k| (k.count_ones(), mask_indices(*k)));
        let parts: Vec<String> = keys
            .iter()
            .map(|k| {
                let c = self.terms[k].to_string_with(names);
                if *k == 0 {
                    return c;
                }
                let basis: Vec<String> = mask_indices(*k).iter().map(|&j| format!("d{}", names[j])).collect();
                let basis = basis.join("^");
                if c == "1" {
                    basis
                } else {
                    format!("({})*{}", c, basis)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Form<ScalarExpr> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn mask_indices(k: u8) -> Vec<usize> {
    (0..8).filter(|j| k & (1 << j) != 0).collect()
}



impl Form<ScalarExpr> {
    /// Exact value at a rational point, `None` if a trig phase is nonzero.
    pub fn eval_exact(&self, p: &[BigRational]) -> GkResult<Option<Form<Cq>>> {
        let mut r = Form::<Cq>::zero(&self.chart);
        for (k, v) in &self.terms {
            match v.eval_exact(p)? {
                Some(c) => r.add_term(*k, c),
                None => return Ok(None),
            }
        }
        Ok(Some(r))
    }
    pub fn eval_f64(&self, p: &[f64]) -> GkResult<Form<crate::symexpr::C64>> {
        self.try_convert(|c| c.eval_f64(p))
    }
    /// Second-order jets of the coefficients at a point.
    pub fn jets(&self, p: &[f64]) -> Form<crate::field::Jet> {
        self.convert(|c| crate::field::Jet::of_expr(c, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{cq_i, cq_int};

    type SF = Form<ScalarExpr>;

    fn omega(c: &Chart) -> SF {
        SF::dxs(c, &[0, 1])
    }

    #[test]
    fn wedge_examples() {
        let c = Chart::euclidean(1);
        assert_eq!(SF::dx(&c, 1).wedge(&SF::dx(&c, 0)), SF::dxs(&c, &[0, 1]).neg());
        let eiw = omega(&c).scale_cq(&cq_i()).exp();
        let expected = SF::one(&c).add(&omega(&c).scale_cq(&Cq::new(num::zero(), num::BigRational::from_integer(2.into()))));
        assert_eq!(eiw.wedge(&eiw), expected);
        assert_eq!(eiw.wedge(&SF::one(&c)), eiw);
    }

    #[test]
    fn d_examples() {
        let c = Chart::euclidean(1);
        let x1 = ScalarExpr::var(0);
        assert_eq!(SF::dx(&c, 1).scale(&x1).ext_d(), omega(&c));
        let a = SF::dx(&c, 1).scale(&ScalarExpr::sin_k(&[1]));
        assert!(a.ext_d().ext_d().is_zero());
        assert!(omega(&c).scale_cq(&cq_i()).exp().is_closed());
    }

    #[test]
    fn sigma_and_mukai() {
        let c = Chart::euclidean(1);
        assert_eq!(omega(&c).sigma(), omega(&c).neg());
        let p = SF::one(&c).add(&SF::dx(&c, 0));
        assert_eq!(p.sigma(), p);
        let c2 = Chart::euclidean(2);
        assert_eq!(SF::vol(&c2).sigma(), SF::vol(&c2));
        assert_eq!(SF::dx(&c, 0).mukai(&SF::dx(&c, 1)), omega(&c));
        let w = omega(&c);
        let a = w.scale_cq(&cq_i()).exp();
        let b = w.scale_cq(&-cq_i()).exp();
        assert_eq!(a.mukai_scalar(&b), ScalarExpr::constant(cq_i() * cq_int(2)));
        assert_eq!(SF::one(&c).mukai(&w), w.neg());
    }

    #[test]
    fn degree_parts_and_pullback() {
        let c = Chart::euclidean(1);
        let w = omega(&c);
        let e = w.scale_cq(&cq_i()).exp();
        assert_eq!(e.degree_part(2), w.scale_cq(&cq_i()));
        assert!(SF::dx(&c, 0).degree_part(2).is_zero());
        let r = |p: i64| num::BigRational::from_integer(p.into());
        let a = vec![vec![r(2), r(0)], vec![r(0), r(1)]];
        let t = vec![r(0), r(0)];
        assert_eq!(SF::dx(&c, 0).pullback_affine(&a, &t).unwrap(), SF::dx(&c, 0).scale(&ScalarExpr::int(2)));
        let sing = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        assert_eq!(SF::dx(&c, 0).pullback_affine(&sing, &t), Err(GkError::SingularMap));
        let shift = vec![r(3), r(-1)];
        let id = vec![vec![r(1), r(0)], vec![r(0), r(1)]];
        assert_eq!(w.pullback_affine(&id, &shift).unwrap(), w);
    }

    #[test]
    fn chart_mismatch() {
        let a = Chart::euclidean(1);
        let b = Chart::named(&["u", "v"], false);
        assert_eq!(SF::dx(&a, 0).try_wedge(&SF::dx(&b, 0)), Err(GkError::ChartMismatch));
    }

    #[test]
    fn printing() {
        let c = Chart::named(&["x", "y"], false);
        let f = SF::dxs(&c, &[0, 1]).scale(&ScalarExpr::var(0)).add(&SF::one(&c));
        assert_eq!(f.to_text(), "1 + (x)*dx^dy");
    }
}
