//! Exact evaluation of symbolic objects at sample points, and seeded point
//! generation.

use crate::error::{GkError, GkResult};
use crate::field::Field;
use crate::forms::{Chart, Form};
use crate::genalg::GenVec;
use crate::linalg::Mat;
use crate::symexpr::{Cq, Point, ScalarExpr};
use num::{BigInt, BigRational, Complex};
use rand::Rng;

pub fn eval_cq(e: &ScalarExpr, pt: &Point) -> GkResult<Cq> {
    e.eval_point(pt)?.ok_or(GkError::NoExactValue)
}

pub fn mat_at(m: &Mat<ScalarExpr>, pt: &Point) -> GkResult<Mat<Cq>> {
    let data = m.data.iter().map(|x| eval_cq(x, pt)).collect::<GkResult<Vec<_>>>()?;
    Ok(Mat { rows: m.rows, cols: m.cols, data })
}

pub fn form_at(f: &Form, pt: &Point) -> GkResult<Form<Cq>> {
    f.try_convert(|x| eval_cq(x, pt))
}

pub fn genvec_at(e: &GenVec, pt: &Point) -> GkResult<GenVec<Cq>> {
    let c = e.components().iter().map(|x| eval_cq(x, pt)).collect::<GkResult<Vec<_>>>()?;
    Ok(GenVec::from_components(e.chart(), &c))
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random small rational, numerator in [-r, r], denominator in 1..=q.
pub fn random_rat<R: Rng>(rng: &mut R, r: i64, q: i64) -> BigRational {
    rat(rng.gen_range(-r..=r), rng.gen_range(1..=q))
}

pub fn random_cq<R: Rng>(rng: &mut R, r: i64) -> Cq {
    Complex::new(rat(rng.gen_range(-r..=r), 1), rat(rng.gen_range(-r..=r), 1))
}

/// A rational point on the unit circle from a Pythagorean parametrization.
pub fn random_angle<R: Rng>(rng: &mut R) -> Cq {
    let a: i64 = rng.gen_range(1..=4);
    let b: i64 = rng.gen_range(-4..=4);
    let n = a * a + b * b;
    Complex::new(rat(a * a - b * b, n), rat(2 * a * b, n))
}

/// Random sample point: rational coordinates on open charts, exact angles on
/// periodic coordinates.
pub fn random_point<R: Rng>(chart: &Chart, rng: &mut R) -> Point {
    let d = chart.dim();
    let mut x = Vec::with_capacity(d);
    let mut u = Vec::with_capacity(d);
    for j in 0..d {
        if chart.periodic()[j] {
            x.push(rat(0, 1));
            u.push(Some(random_angle(rng)));
        } else {
            x.push(random_rat(rng, 5, 4));
            u.push(None);
        }
    }
    Point { x, u }
}

/// Random sample points at which `probe` has an exact, nonvanishing value.
pub fn good_points<R: Rng>(chart: &Chart, rng: &mut R, count: usize, probe: &ScalarExpr) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 50 * count + 50 {
        tries += 1;
        let p = random_point(chart, rng);
        if let Ok(Some(v)) = probe.eval_point(&p) {
            if !v.is_zero() {
                out.push(p);
            }
        }
    }
    out
}

/// Smallest eigenvalue of a real symmetric matrix by cyclic Jacobi rotations.
pub fn min_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[i][j] * m[i][j];
                }
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_min_eigenvalue() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]];
        assert!((min_eigenvalue(&a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angle_points_are_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let u = random_angle(&mut rng);
        assert_eq!(u.clone() * u.conj(), Complex::new(rat(1, 1), rat(0, 1)));
        let c = Chart::torus(1);
        let p = random_point(&c, &mut rng);
        let e = ScalarExpr::cos_k(&[1, 0]).mul(&ScalarExpr::cos_k(&[1, 0])).add(&ScalarExpr::sin_k(&[1, 0]).mul(&ScalarExpr::sin_k(&[1, 0])));
        assert_eq!(eval_cq(&e, &p).unwrap(), Complex::new(rat(1, 1), rat(0, 1)));
    }
}
