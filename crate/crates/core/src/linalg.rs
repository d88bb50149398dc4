//! Dense matrices over a [`Field`] with fraction-free-enough Gaussian
//! elimination: rank, kernel, solve, inverse and leading principal minors.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }
    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }
    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn try_map<E>(&self, f: impl Fn(&F) -> Result<F, E>) -> Result<Self, E> {
        Ok(Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }
    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }
    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul(s))
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * r.cols + j;
                    r.data[idx] = r.data[idx].add(&a.mul(b));
                }
            }
        }
        r
    }
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }
    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in r..self.rows {
                if let Some(s) = self.get(i, c).pivot_score() {
                    if best.map_or(true, |(_, bs)| s > bs) {
                        best = Some((i, s));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("pivot invertible");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            self.set(r, c, F::one());
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).sub(&f.mul(rv));
                    self.set(i, j, v);
                }
                self.set(i, c, F::zero());
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = m.get(r, fc).neg();
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`; `None` if inconsistent. Free variables are zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Determinant by elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for i in c..n {
                if let Some(s) = m.get(i, c).pivot_score() {
                    if best.map_or(true, |(_, bs)| s > bs) {
                        best = Some((i, s));
                    }
                }
            }
            let Some((p, _)) = best else { return F::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            let pv = m.get(c, c).clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("pivot invertible");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Leading principal minors `det(A[..k, ..k])` for k = 1..=n.
    pub fn leading_minors(&self) -> Vec<F> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self.get(i, j).clone()).det())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{cq_int, cq_rat, Cq};

    fn m(rows: &[&[i64]]) -> Mat<Cq> {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| cq_int(rows[i][j]))
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), cq_int(18));
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai), Mat::identity(3));
        assert_eq!(a.leading_minors(), vec![cq_int(2), cq_int(5), cq_int(18)]);
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).iter().all(|x| x == &cq_int(0)));
        }
        let x = a.solve(&[cq_int(2), cq_int(4)]).unwrap();
        assert_eq!(a.apply(&x), vec![cq_int(2), cq_int(4)]);
        assert!(a.solve(&[cq_int(1), cq_int(1)]).is_none());
        let b = m(&[&[2, 0], &[0, 4]]);
        assert_eq!(b.solve(&[cq_int(1), cq_int(1)]).unwrap(), vec![cq_rat(1, 2), cq_rat(1, 4)]);
    }
}
