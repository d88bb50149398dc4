use super::poly::{rat_to_f64, Cq, Poly, NV};
use super::ScalarExpr;
use crate::error::{GkError, GkResult};
use num::{BigInt, BigRational, Complex, One, Signed, Zero};

pub type C64 = Complex<f64>;

fn cq_from_rat(r: BigRational) -> Cq {
    Complex::new(r, BigRational::zero())
}

fn eval_poly_exact(p: &Poly, x: &[BigRational]) -> Option<Cq> {
    let mut acc = Cq::zero();
    for (m, c) in &p.terms {
        let mut phase = BigRational::zero();
        for j in 0..NV {
            if m.k(j) != 0 {
                phase += BigRational::from_integer(BigInt::from(m.k(j) as i64)) * &x[j];
            }
        }
        if !phase.is_zero() {
            return None;
        }
        let mut t = c.clone();
        for j in 0..NV {
            let e = m.x(j);
            if e > 0 {
                t = t * cq_from_rat(num::pow(x[j].clone(), e as usize));
            }
        }
        acc += t;
    }
    Some(acc)
}

/// cos and sin of a rational to absolute accuracy `tol` by Taylor series.
fn cos_sin_rat(r: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
    // reduce by halving until |r| <= 1/2, then double back
    let mut halvings = 0u32;
    let mut a = r.clone();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    while a.abs() > half {
        a = a / BigRational::from_integer(BigInt::from(2));
        halvings += 1;
    }
    let inner_tol = tol / BigRational::from_integer(BigInt::from(4u64).pow(halvings + 2));
    let mut c = BigRational::one();
    let mut s = BigRational::zero();
    let mut term = BigRational::one();
    let mut k = 1u64;
    loop {
        term = term * &a / BigRational::from_integer(BigInt::from(k));
        if k % 2 == 1 {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            s += &term * BigRational::from_integer(BigInt::from(sign));
        } else {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            c += &term * BigRational::from_integer(BigInt::from(sign));
        }
        if term.abs() < inner_tol {
            break;
        }
        k += 1;
        // keep denominators bounded by rounding to the tolerance grid
        if k % 8 == 0 {
            c = round_to(&c, &inner_tol);
            s = round_to(&s, &inner_tol);
            term = round_to(&term, &(inner_tol.clone() * &inner_tol));
        }
    }
    for _ in 0..halvings {
        let c2 = &c * &c - &s * &s;
        let s2 = BigRational::from_integer(BigInt::from(2)) * &s * &c;
        c = round_to(&c2, &inner_tol);
        s = round_to(&s2, &inner_tol);
    }
    (c, s)
}

fn round_to(x: &BigRational, tol: &BigRational) -> BigRational {
    // round x to a multiple of 2^-b where 2^-b < tol
    let bits = (tol.denom().bits() as i64 - tol.numer().bits() as i64 + 2).max(1) as usize;
    let scale = BigInt::one() << bits;
    let scaled = (x * BigRational::from_integer(scale.clone())).round();
    scaled / BigRational::from_integer(scale)
}

fn eval_poly_approx(p: &Poly, x: &[BigRational], tol: &BigRational) -> Cq {
    let mut acc = Cq::zero();
    for (m, c) in &p.terms {
        let mut phase = BigRational::zero();
        for j in 0..NV {
            if m.k(j) != 0 {
                phase += BigRational::from_integer(BigInt::from(m.k(j) as i64)) * &x[j];
            }
        }
        let mut t = c.clone();
        if !phase.is_zero() {
            let (co, si) = cos_sin_rat(&phase, tol);
            t = t * Complex::new(co, si);
        }
        for j in 0..NV {
            let e = m.x(j);
            if e > 0 {
                t = t * cq_from_rat(num::pow(x[j].clone(), e as usize));
            }
        }
        acc += t;
    }
    acc
}

fn eval_poly_f64(p: &Poly, x: &[f64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (m, c) in &p.terms {
        let mut phase = 0.0;
        let mut mag = 1.0;
        for j in 0..NV {
            if m.k(j) != 0 {
                phase += m.k(j) as f64 * x[j];
            }
            let e = m.x(j);
            if e > 0 {
                mag *= x[j].powi(e as i32);
            }
        }
        let cc = C64::new(rat_to_f64(&c.re), rat_to_f64(&c.im));
        acc += cc * C64::from_polar(mag, phase);
    }
    acc
}

fn pad(p: &[BigRational]) -> Vec<BigRational> {
    let mut v = p.to_vec();
    v.resize(NV, BigRational::zero());
    v
}

impl ScalarExpr {
    /// Exact value at a rational point. `Ok(None)` means a trigonometric
    /// factor with nonzero phase occurs, so no exact rational value exists.
    pub fn eval_exact(&self, p: &[BigRational]) -> GkResult<Option<Cq>> {
        let x = pad(p);
        let d = match eval_poly_exact(self.denom(), &x) {
            Some(d) => d,
            None => return Ok(None),
        };
        if d.is_zero() {
            return Err(GkError::EvaluationPole);
        }
        Ok(eval_poly_exact(self.numer(), &x).map(|n| n / d))
    }

    /// Value at a rational point as a rational approximation accurate to
    /// roughly `digits` decimal digits. Exact whenever `eval_exact` is.
    pub fn eval_approx(&self, p: &[BigRational], digits: u32) -> GkResult<Cq> {
        if let Some(v) = self.eval_exact(p)? {
            return Ok(v);
        }
        let x = pad(p);
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 12));
        let d = eval_poly_approx(self.denom(), &x, &tol);
        let floor = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 6));
        if d.re.abs() < floor && d.im.abs() < floor {
            return Err(GkError::EvaluationPole);
        }
        Ok(eval_poly_approx(self.numer(), &x, &tol) / d)
    }

    /// Double-precision evaluation.
    pub fn eval_f64(&self, p: &[f64]) -> GkResult<C64> {
        let mut x = p.to_vec();
        x.resize(NV, 0.0);
        let d = eval_poly_f64(self.denom(), &x);
        if d.norm() == 0.0 {
            return Err(GkError::EvaluationPole);
        }
        Ok(eval_poly_f64(self.numer(), &x) / d)
    }
}

pub fn cq_to_c64(c: &Cq) -> C64 {
    C64::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

/// Decimal rendering of a rational to `digits` significant digits.
pub fn rat_to_decimal(r: &BigRational, digits: u32) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // find exponent e with 10^e <= a < 10^(e+1)
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut e: i64 = 0;
    let mut s = a.clone();
    while s >= ten {
        s = s / &ten;
        e += 1;
    }
    while s < BigRational::one() {
        s = s * &ten;
        e -= 1;
    }
    let scaled = (s * BigRational::from_integer(BigInt::from(10u32).pow(digits.saturating_sub(1)))).round();
    let mut m = scaled.to_integer().to_string();
    if m.len() as u32 > digits {
        m.pop();
        e += 1;
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&m[..1]);
    if m.len() > 1 {
        out.push('.');
        out.push_str(&m[1..]);
    }
    out.push_str(&format!("e{}", e));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::big_rat;

    #[test]
    fn exact_values() {
        let x = ScalarExpr::var(0);
        assert_eq!((&x * &x).eval_exact(&[big_rat(3, 1)]).unwrap(), Some(super::super::cq_int(9)));
        let f = (ScalarExpr::one() + &x * &x).inv().unwrap();
        assert_eq!(f.eval_exact(&[big_rat(1, 1)]).unwrap(), Some(super::super::cq_rat(1, 2)));
        let g = (x - ScalarExpr::one()).inv().unwrap();
        assert_eq!(g.eval_exact(&[big_rat(1, 1)]), Err(GkError::EvaluationPole));
    }

    #[test]
    fn trig_fallback() {
        let s = ScalarExpr::sin_k(&[1]);
        assert_eq!(s.eval_exact(&[big_rat(1, 2)]).unwrap(), None);
        let v = s.eval_approx(&[big_rat(1, 2)], 30).unwrap();
        let f = rat_to_f64(&v.re);
        assert!((f - 0.5f64.sin()).abs() < 1e-15);
        let w = s.eval_f64(&[0.5]).unwrap();
        assert!((w.re - 0.5f64.sin()).abs() < 1e-15 && w.im.abs() < 1e-15);
        assert_eq!(rat_to_decimal(&v.re, 20), "4.7942553860420300027e-1");
    }
}

/// An evaluation point. Coordinate `j` is either a rational value `x[j]`
/// (trig factors in it must then have zero phase) or, when `u[j]` is set,
/// an angle given exactly by the unit complex number `u[j] = e^{i x_j}`;
/// polynomial dependence on such a coordinate has no exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x: Vec<BigRational>,
    pub u: Vec<Option<Cq>>,
}

impl Point {
    pub fn rational(x: &[BigRational]) -> Self {
        Point { x: x.to_vec(), u: vec![None; x.len()] }
    }
    pub fn dim(&self) -> usize {
        self.x.len()
    }
    /// Double-precision coordinates (angles via atan2).
    pub fn to_f64(&self) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.u)
            .map(|(x, u)| match u {
                Some(u) => rat_to_f64(&u.im).atan2(rat_to_f64(&u.re)),
                None => rat_to_f64(x),
            })
            .collect()
    }
}

fn eval_poly_point(p: &Poly, pt: &Point) -> Option<Cq> {
    let x = pad(&pt.x);
    let mut acc = Cq::zero();
    for (m, c) in &p.terms {
        let mut phase = BigRational::zero();
        let mut t = c.clone();
        for j in 0..NV {
            let ang = pt.u.get(j).and_then(|u| u.as_ref());
            let k = m.k(j);
            let e = m.x(j);
            match ang {
                Some(u) => {
                    if e > 0 {
                        return None;
                    }
                    if k != 0 {
                        let base = if k > 0 { u.clone() } else { u.conj() };
                        t = t * num::pow(base, k.unsigned_abs() as usize);
                    }
                }
                None => {
                    if k != 0 {
                        phase += BigRational::from_integer(BigInt::from(k as i64)) * &x[j];
                    }
                    if e > 0 {
                        t = t * cq_from_rat(num::pow(x[j].clone(), e as usize));
                    }
                }
            }
        }
        if !phase.is_zero() {
            return None;
        }
        acc += t;
    }
    Some(acc)
}

impl ScalarExpr {
    /// Exact value at a [`Point`]; `Ok(None)` when no exact value exists.
    pub fn eval_point(&self, pt: &Point) -> GkResult<Option<Cq>> {
        let d = match eval_poly_point(self.denom(), pt) {
            Some(d) => d,
            None => return Ok(None),
        };
        if d.is_zero() {
            return Err(GkError::EvaluationPole);
        }
        Ok(eval_poly_point(self.numer(), pt).map(|n| n / d))
    }
}
