//! Coefficient fields shared by forms, generalized vectors and matrices.
//!
//! Three instances are used: [`ScalarExpr`] for exact symbolic fields,
//! [`Cq`] for exact values at a rational point, and [`Jet`] for
//! double-precision Taylor jets in the quadrature code.

use crate::symexpr::{cq_int, Cq, ScalarExpr, C64};
use num::{One, Zero};
use std::fmt::Debug;

pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_cq(c: &Cq) -> Self;
    /// Pivot preference for elimination; `None` means treat as zero.
    fn pivot_score(&self) -> Option<f64>;

    fn from_int(n: i64) -> Self {
        Self::from_cq(&cq_int(n))
    }
    fn scale_cq(&self, c: &Cq) -> Self {
        self.mul(&Self::from_cq(c))
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
}

/// Fields with partial derivatives in chart coordinates.
pub trait Diff: Field {
    fn partial(&self, j: usize) -> Self;
}

impl Field for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::one()
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        ScalarExpr::inv(self).ok()
    }
    fn conj(&self) -> Self {
        ScalarExpr::conj(self)
    }
    fn from_cq(c: &Cq) -> Self {
        ScalarExpr::constant(c.clone())
    }
    fn pivot_score(&self) -> Option<f64> {
        if ScalarExpr::is_zero(self) {
            None
        } else {
            Some(-(self.size() as f64))
        }
    }
    fn scale_cq(&self, c: &Cq) -> Self {
        self.scale(c)
    }
}

impl Diff for ScalarExpr {
    fn partial(&self, j: usize) -> Self {
        ScalarExpr::partial(self, j)
    }
}

impl Field for Cq {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(<Cq as One>::one() / self.clone())
        }
    }
    fn conj(&self) -> Self {
        Cq::conj(self)
    }
    fn from_cq(c: &Cq) -> Self {
        c.clone()
    }
    fn pivot_score(&self) -> Option<f64> {
        if Zero::is_zero(self) {
            None
        } else {
            let bits = self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits();
            Some(-(bits as f64))
        }
    }
}

/// Threshold below which a floating value is treated as zero in elimination.
pub const FLOAT_ZERO: f64 = 1e-11;

impl Field for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() < FLOAT_ZERO
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(C64::new(1.0, 0.0) / self)
        }
    }
    fn conj(&self) -> Self {
        C64::conj(self)
    }
    fn from_cq(c: &Cq) -> Self {
        crate::symexpr::poly::rat_to_f64(&c.re) * C64::new(1.0, 0.0)
            + crate::symexpr::poly::rat_to_f64(&c.im) * C64::new(0.0, 1.0)
    }
    fn pivot_score(&self) -> Option<f64> {
        let a = self.norm();
        if a < FLOAT_ZERO {
            None
        } else {
            Some(a)
        }
    }
}

/// Number of coordinates a [`Jet`] tracks.
pub const JET_M: usize = 4;
const HESS: usize = JET_M * (JET_M + 1) / 2;

fn hidx(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    a * JET_M - a * (a + 1) / 2 + b
}

/// Second-order Taylor jet of a complex function of `JET_M` real
/// coordinates at a fixed point. `ord` counts how many derivative orders
/// are valid (0, 1 or 2); arithmetic keeps the minimum.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Jet {
    pub ord: u8,
    pub v: C64,
    pub d: [C64; JET_M],
    pub h: [C64; HESS],
}

const CZ: C64 = C64 { re: 0.0, im: 0.0 };

impl Jet {
    pub fn constant(v: C64) -> Self {
        Jet { ord: 2, v, d: [CZ; JET_M], h: [CZ; HESS] }
    }
    pub fn hess(&self, i: usize, j: usize) -> C64 {
        self.h[hidx(i, j)]
    }
    pub fn set_hess(&mut self, i: usize, j: usize, x: C64) {
        self.h[hidx(i, j)] = x;
    }
    /// Jet of an exact expression at a point, by symbolic differentiation.
    pub fn of_expr(e: &ScalarExpr, p: &[f64]) -> Self {
        let mut j = Jet::constant(e.eval_f64(p).expect("no pole"));
        for a in 0..JET_M {
            let da = e.partial(a);
            j.d[a] = da.eval_f64(p).expect("no pole");
            for b in a..JET_M {
                j.h[hidx(a, b)] = da.partial(b).eval_f64(p).expect("no pole");
            }
        }
        j
    }
}

impl Field for Jet {
    fn zero() -> Self {
        Jet::constant(CZ)
    }
    fn one() -> Self {
        Jet::constant(C64::new(1.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.v.norm() < FLOAT_ZERO
            && (self.ord == 0 || self.d.iter().all(|x| x.norm() < FLOAT_ZERO))
            && (self.ord < 2 || self.h.iter().all(|x| x.norm() < FLOAT_ZERO))
    }
    fn add(&self, o: &Self) -> Self {
        let ord = self.ord.min(o.ord);
        let mut r = Jet { ord, v: self.v + o.v, d: [CZ; JET_M], h: [CZ; HESS] };
        if ord >= 1 {
            for i in 0..JET_M {
                r.d[i] = self.d[i] + o.d[i];
            }
        }
        if ord >= 2 {
            for i in 0..HESS {
                r.h[i] = self.h[i] + o.h[i];
            }
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let ord = self.ord.min(o.ord);
        let mut r = Jet { ord, v: self.v * o.v, d: [CZ; JET_M], h: [CZ; HESS] };
        if ord >= 1 {
            for i in 0..JET_M {
                r.d[i] = self.d[i] * o.v + self.v * o.d[i];
            }
        }
        if ord >= 2 {
            for i in 0..JET_M {
                for j in i..JET_M {
                    let k = hidx(i, j);
                    r.h[k] = self.h[k] * o.v + self.d[i] * o.d[j] + self.d[j] * o.d[i] + self.v * o.h[k];
                }
            }
        }
        r
    }
    fn neg(&self) -> Self {
        let mut r = *self;
        r.v = -r.v;
        for x in r.d.iter_mut() {
            *x = -*x;
        }
        for x in r.h.iter_mut() {
            *x = -*x;
        }
        r
    }
    fn inv(&self) -> Option<Self> {
        if self.v.norm() == 0.0 {
            return None;
        }
        let iv = C64::new(1.0, 0.0) / self.v;
        let iv2 = iv * iv;
        let mut r = Jet { ord: self.ord, v: iv, d: [CZ; JET_M], h: [CZ; HESS] };
        if self.ord >= 1 {
            for i in 0..JET_M {
                r.d[i] = -self.d[i] * iv2;
            }
        }
        if self.ord >= 2 {
            let iv3 = iv2 * iv;
            for i in 0..JET_M {
                for j in i..JET_M {
                    let k = hidx(i, j);
                    r.h[k] = -self.h[k] * iv2 + C64::new(2.0, 0.0) * self.d[i] * self.d[j] * iv3;
                }
            }
        }
        Some(r)
    }
    fn conj(&self) -> Self {
        let mut r = *self;
        r.v = r.v.conj();
        for x in r.d.iter_mut() {
            *x = x.conj();
        }
        for x in r.h.iter_mut() {
            *x = x.conj();
        }
        r
    }
    fn from_cq(c: &Cq) -> Self {
        Jet::constant(C64::from_cq(c))
    }
    fn pivot_score(&self) -> Option<f64> {
        let a = self.v.norm();
        if a < FLOAT_ZERO {
            None
        } else {
            Some(a)
        }
    }
}

impl Diff for Jet {
    fn partial(&self, j: usize) -> Self {
        assert!(self.ord >= 1, "jet differentiated beyond its order");
        let mut r = Jet { ord: self.ord - 1, v: self.d[j], d: [CZ; JET_M], h: [CZ; HESS] };
        if r.ord >= 1 {
            for i in 0..JET_M {
                r.d[i] = self.h[hidx(i, j)];
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_expr;

    #[test]
    fn jet_matches_symbolic_derivatives() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let f = parse_expr("(a^2*b + cos(c - d))/(2 + sin(a))", &names).unwrap();
        let g = parse_expr("b*d + i*a", &names).unwrap();
        let p = [0.3, -0.2, 0.7, 0.1];
        let jf = Jet::of_expr(&f, &p);
        let jg = Jet::of_expr(&g, &p);
        let prod = jf.mul(&jg.inv().unwrap());
        let exact = Jet::of_expr(&f.checked_div(&g).unwrap(), &p);
        assert!((prod.v - exact.v).norm() < 1e-12);
        for i in 0..JET_M {
            assert!((prod.d[i] - exact.d[i]).norm() < 1e-12);
            for j in 0..JET_M {
                assert!((prod.hess(i, j) - exact.hess(i, j)).norm() < 1e-11);
            }
        }
        let dp = prod.partial(2);
        let ex2 = Jet::of_expr(&f.checked_div(&g).unwrap().partial(2), &p);
        assert!((dp.v - ex2.v).norm() < 1e-12);
        assert!((dp.d[1] - ex2.d[1]).norm() < 1e-11);
    }
}
