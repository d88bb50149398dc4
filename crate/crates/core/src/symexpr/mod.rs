//! Exact scalar fields on a chart.
//!
//! A [`ScalarExpr`] is a reduced fraction of Laurent polynomials in the
//! coordinates `x_j` and `u_j = exp(i x_j)` with Gaussian-rational
//! coefficients. The denominator is a polynomial not divisible by any `u_j`,
//! coprime to the numerator, with leading coefficient one (lex order). This
//! normal form is unique, so structural equality is mathematical equality.

mod eval;
mod parse;
pub mod poly;
mod print;

pub use eval::{cq_to_c64, rat_to_decimal, Point, C64};
pub use parse::parse_expr;
pub use poly::{cq_i, cq_int, cq_rat, Cq, Mono, Poly, NV};

use crate::error::{GkError, GkResult};
use num::{BigInt, BigRational, One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&[]))
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&[]))
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> Self {
        Self::int(1)
    }
    pub fn int(n: i64) -> Self {
        Self::constant(cq_int(n))
    }
    pub fn rat(p: i64, q: i64) -> Self {
        Self::constant(cq_rat(p, q))
    }
    pub fn i() -> Self {
        Self::constant(cq_i())
    }
    pub fn constant(c: Cq) -> Self {
        ScalarExpr { num: Poly::constant(c), den: Poly::one() }
    }
    /// The coordinate `x_j`.
    pub fn var(j: usize) -> Self {
        assert!(j < NV);
        ScalarExpr { num: Poly::monomial(Mono::var(j, 1), cq_int(1)), den: Poly::one() }
    }
    /// `exp(i k.x)` for an integer frequency vector.
    pub fn expi(k: &[i64]) -> Self {
        let mut m = Mono::one();
        for (j, &kj) in k.iter().enumerate() {
            m.0[NV + j] = kj as i16;
        }
        ScalarExpr { num: Poly::monomial(m, cq_int(1)), den: Poly::one() }
    }
    pub fn cos_k(k: &[i64]) -> Self {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        (Self::expi(k) + Self::expi(&neg)).scale(&cq_rat(1, 2))
    }
    pub fn sin_k(k: &[i64]) -> Self {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        // (u^k - u^-k) / (2i) = -i/2 (u^k - u^-k)
        (Self::expi(k) - Self::expi(&neg)).scale(&(cq_i() * cq_rat(-1, 2)))
    }
    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr { num: p, den: Poly::one() }
    }
    /// Build `num/den` in canonical form.
    pub fn fraction(num: Poly, den: Poly) -> GkResult<Self> {
        normalize(num, den, true)
    }
    pub fn numer(&self) -> &Poly {
        &self.num
    }
    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    pub fn has_trig(&self) -> bool {
        self.num.has_trig() || self.den.has_trig()
    }
    pub fn const_value(&self) -> Option<Cq> {
        if self.den.is_one() {
            self.num.const_value()
        } else {
            None
        }
    }
    pub fn is_constant(&self) -> bool {
        self.const_value().is_some()
    }
    /// Number of stored terms; a crude size measure used for pivoting.
    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }
    pub fn conj(&self) -> Self {
        // conjugation preserves coprimality; only the shift and scale change
        normalize(self.num.conj(), self.den.conj(), false).expect("nonzero denominator")
    }
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(&cq_rat(1, 2))
    }
    pub fn im(&self) -> Self {
        (self - &self.conj()).scale(&(cq_i() * cq_rat(-1, 2)))
    }
    pub fn scale(&self, c: &Cq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr { num: self.num.scale(c), den: self.den.clone() }
    }
    pub fn checked_div(&self, o: &Self) -> GkResult<Self> {
        if o.is_zero() {
            return Err(GkError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = o.const_value() {
            return Ok(self.scale(&(Cq::one() / c)));
        }
        // (a/b) / (c/d) = (a d) / (b c)
        let g1 = laurent_gcd(&self.num, &o.num);
        let g2 = gcd_poly(&self.den, &o.den);
        let a = laurent_div(&self.num, &g1);
        let c = laurent_div(&o.num, &g1);
        let b = self.den.div_exact(&g2).unwrap();
        let d = o.den.div_exact(&g2).unwrap();
        normalize(a.mul(&d), b.mul(&c), false)
    }
    pub fn inv(&self) -> GkResult<Self> {
        Self::one().checked_div(self)
    }
    pub fn powi(&self, e: i32) -> GkResult<Self> {
        if e < 0 {
            return self.powi(-e)?.inv();
        }
        let num = self.num.pow(e as u32);
        let den = self.den.pow(e as u32);
        normalize(num, den, false)
    }
    /// Exact partial derivative in chart coordinate `k`.
    pub fn partial(&self, k: usize) -> Self {
        let dn = self.num.partial(k);
        if self.den.is_one() {
            return ScalarExpr { num: dn, den: Poly::one() };
        }
        let dd = self.den.partial(k);
        if dd.is_zero() {
            return normalize(dn, self.den.clone(), true).unwrap();
        }
        // (n' d - n d') / d^2, reduced against d only: gcd(n'd - nd', d) = gcd(n d', d)
        let top = dn.mul(&self.den).sub(&self.num.mul(&dd));
        normalize(top, self.den.mul(&self.den), true).unwrap()
    }
    /// Integral of a trigonometric polynomial over the torus `[0, 2pi]^m`
    /// divided by `(2pi)^m`, i.e. its mean; `None` if not a trig polynomial in
    /// the given periodic coordinates.
    pub fn torus_mean(&self, periodic: &[bool]) -> Option<Cq> {
        if !self.den.is_const() {
            return None;
        }
        let mut acc = Cq::zero();
        for (m, c) in &self.num.terms {
            for j in 0..NV {
                if m.x(j) != 0 && periodic.get(j).copied().unwrap_or(false) {
                    return None;
                }
                if m.k(j) != 0 && !periodic.get(j).copied().unwrap_or(false) {
                    return None;
                }
            }
            if (0..NV).all(|j| m.k(j) == 0) {
                if (0..NV).any(|j| m.x(j) != 0) {
                    return None;
                }
                acc += c.clone();
            }
        }
        let d = self.den.const_value().unwrap();
        Some(acc / d)
    }
    /// Substitute `x_i -> sum_j a[i][j] x_j + t[i]` for polynomial parts and
    /// `k -> A^T k` on frequencies (requires integrality and `k.t = 0`).
    pub fn substitute_affine(&self, a: &[Vec<BigRational>], t: &[BigRational]) -> GkResult<Self> {
        let n = sub_poly(&self.num, a, t)?;
        let d = sub_poly(&self.den, a, t)?;
        normalize(n, d, true)
    }
}

fn sub_poly(p: &Poly, a: &[Vec<BigRational>], t: &[BigRational]) -> GkResult<Poly> {
    let m = a.len();
    let images: Vec<Poly> = (0..m)
        .map(|i| {
            let mut q = Poly::constant(num::Complex::new(t[i].clone(), BigRational::zero()));
            for j in 0..m {
                if !a[i][j].is_zero() {
                    q = q.add(&Poly::monomial(
                        Mono::var(j, 1),
                        num::Complex::new(a[i][j].clone(), BigRational::zero()),
                    ));
                }
            }
            q
        })
        .collect();
    let mut out = Poly::zero();
    for (mono, c) in &p.terms {
        let mut term = Poly::constant(c.clone());
        for i in 0..m {
            let e = mono.x(i);
            if e > 0 {
                term = term.mul(&images[i].pow(e as u32));
            }
        }
        // frequency part: k.x -> k.(A x + t)
        let mut newk = vec![BigRational::zero(); m];
        let mut phase = BigRational::zero();
        let mut any = false;
        for i in 0..m {
            let ki = mono.k(i) as i64;
            if ki != 0 {
                any = true;
                let kb = BigRational::from_integer(BigInt::from(ki));
                for j in 0..m {
                    newk[j] += &kb * &a[i][j];
                }
                phase += &kb * &t[i];
            }
        }
        if any {
            if !phase.is_zero() {
                return Err(GkError::UnsupportedSubstitution("translation along a frequency".into()));
            }
            let mut mm = Mono::one();
            for j in 0..m {
                if !newk[j].is_integer() {
                    return Err(GkError::UnsupportedSubstitution("non-integral frequency".into()));
                }
                let v: i64 = num::ToPrimitive::to_i64(&newk[j].to_integer()).unwrap();
                mm.0[NV + j] = v as i16;
            }
            term = term.mul_mono(&mm);
        }
        out = out.add(&term);
    }
    Ok(out)
}

fn gcd_poly(a: &Poly, b: &Poly) -> Poly {
    if a.is_const() || b.is_const() {
        return Poly::one();
    }
    poly::gcd(a, b)
}

/// gcd of Laurent polynomials up to monomial units.
fn laurent_gcd(a: &Poly, b: &Poly) -> Poly {
    let sa = a.min_u().map(|e| -e);
    let sb = b.min_u().map(|e| -e);
    gcd_poly(&a.shift_u(&sa), &b.shift_u(&sb))
}

fn laurent_div(a: &Poly, g: &Poly) -> Poly {
    if g.is_one() {
        return a.clone();
    }
    let s = a.min_u();
    let neg = s.map(|e| -e);
    a.shift_u(&neg).div_exact(g).expect("exact division").shift_u(&s)
}

fn normalize(num: Poly, den: Poly, reduce: bool) -> GkResult<ScalarExpr> {
    if den.is_zero() {
        return Err(GkError::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(ScalarExpr::zero());
    }
    let s = den.min_u();
    let neg = s.map(|e| -e);
    let mut den = den.shift_u(&neg);
    let mut num = num.shift_u(&neg);
    if reduce && !den.is_const() {
        let g = laurent_gcd(&num, &den);
        if !g.is_const() {
            num = laurent_div(&num, &g);
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
    }
    let lc = den.lt().unwrap().1.clone();
    if !poly::cq_is_one(&lc) {
        let inv = Cq::one() / lc;
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Ok(ScalarExpr { num, den })
}

impl<'a> Add<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            if self.den.is_one() {
                return ScalarExpr { num: n, den: Poly::one() };
            }
            return normalize(n, self.den.clone(), true).unwrap();
        }
        if self.den.is_one() {
            return normalize(self.num.mul(&o.den).add(&o.num), o.den.clone(), false).unwrap();
        }
        if o.den.is_one() {
            return normalize(o.num.mul(&self.den).add(&self.num), self.den.clone(), false).unwrap();
        }
        let g = gcd_poly(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        let d = self.den.mul(&d1);
        if g.is_const() {
            normalize(n, d, false).unwrap()
        } else {
            normalize(n, d, true).unwrap()
        }
    }
}

impl<'a> Sub<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: &ScalarExpr) -> ScalarExpr {
        self + &(-o)
    }
}

impl<'a> Neg for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl<'a> Mul<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || o.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarExpr { num: self.num.mul(&o.num), den: Poly::one() };
        }
        if let Some(c) = self.const_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.const_value() {
            return self.scale(&c);
        }
        // cross-cancel: gcd(a, d) and gcd(c, b)
        let g1 = if o.den.is_one() { Poly::one() } else { laurent_gcd(&self.num, &o.den) };
        let g2 = if self.den.is_one() { Poly::one() } else { laurent_gcd(&o.num, &self.den) };
        let a = laurent_div(&self.num, &g1);
        let d = o.den.div_exact(&g1).unwrap();
        let c = laurent_div(&o.num, &g2);
        let b = self.den.div_exact(&g2).unwrap();
        normalize(a.mul(&c), b.mul(&d), false).unwrap()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: ScalarExpr) -> ScalarExpr {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: &ScalarExpr) -> ScalarExpr {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<ScalarExpr> for &'a ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: ScalarExpr) -> ScalarExpr {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

pub fn big_rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}



/// Exact printed form of a complex rational.
pub fn cq_string(c: &Cq) -> String {
    ScalarExpr::constant(c.clone()).to_string()
}

pub fn serialize_cq<S: serde::Serializer>(c: &Cq, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&cq_string(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras_cancels() {
        let s = ScalarExpr::sin_k(&[1]);
        let c = ScalarExpr::cos_k(&[1]);
        assert_eq!(&s * &s + &c * &c, ScalarExpr::one());
    }

    #[test]
    fn factor_cancellation() {
        let x = ScalarExpr::var(0);
        let n = &x * &x - ScalarExpr::one();
        let d = &x - &ScalarExpr::one();
        assert_eq!(n.checked_div(&d).unwrap(), x + ScalarExpr::one());
    }

    #[test]
    fn complex_product() {
        let a = ScalarExpr::one() + ScalarExpr::i();
        let b = ScalarExpr::one() - ScalarExpr::i();
        assert_eq!(a * b, ScalarExpr::int(2));
    }

    #[test]
    fn quotient_rule() {
        let x = ScalarExpr::var(0);
        let d = ScalarExpr::one() + &x * &x;
        let f = d.inv().unwrap();
        let expect = (x.scale(&cq_int(-2))).checked_div(&(&d * &d)).unwrap();
        assert_eq!(f.partial(0), expect);
        assert!(ScalarExpr::var(1).partial(0).is_zero());
        assert_eq!(ScalarExpr::sin_k(&[1]).partial(0), ScalarExpr::cos_k(&[1]));
    }

    #[test]
    fn division_by_zero() {
        let s = ScalarExpr::sin_k(&[1]);
        let c = ScalarExpr::cos_k(&[1]);
        let z = &s * &s + &c * &c - ScalarExpr::one();
        assert!(z.is_zero());
        assert_eq!(ScalarExpr::one().checked_div(&z), Err(GkError::DivisionByZero));
    }

    #[test]
    fn conj_and_reality() {
        let f = ScalarExpr::var(0) + ScalarExpr::i() * ScalarExpr::var(1);
        assert_eq!(f.conj(), ScalarExpr::var(0) - ScalarExpr::i() * ScalarExpr::var(1));
        assert!(!(ScalarExpr::i() * ScalarExpr::var(0)).is_real());
        assert!(ScalarExpr::sin_k(&[1, 2]).is_real());
        let g = ScalarExpr::one().checked_div(&(ScalarExpr::cos_k(&[1]) + ScalarExpr::int(2))).unwrap();
        assert!(g.is_real());
    }

    #[test]
    fn trig_denominator_cancels() {
        let c = ScalarExpr::cos_k(&[1]);
        let s = ScalarExpr::sin_k(&[1]);
        // sin(2x) / cos(x) = 2 sin(x)
        let s2 = ScalarExpr::sin_k(&[2]);
        assert_eq!(s2.checked_div(&c).unwrap(), s.scale(&cq_int(2)));
    }
}
