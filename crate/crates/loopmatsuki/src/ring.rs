//! Commutative Q(i)-algebras and dense square matrices over them.

use std::fmt::Debug;

use crate::scalar::GQ;

pub trait Ring: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_scalar(c: GQ) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &GQ) -> Self;
    /// True when the element is exactly zero (for truncated series: zero with unbounded precision).
    fn is_zero(&self) -> bool;
}

impl Ring for GQ {
    fn zero() -> Self {
        GQ::zero()
    }
    fn one() -> Self {
        GQ::one()
    }
    fn from_scalar(c: GQ) -> Self {
        c
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
    fn scale(&self, c: &GQ) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        GQ::is_zero(self)
    }
}

/// Dense n x n matrix, row-major.
#[derive(Clone, Debug)]
pub struct Mat<R: Ring> {
    pub n: usize,
    pub a: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        Mat { n, a }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat { n, a: rows.into_iter().flatten().collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn scalar(n: usize, c: &R) -> Self {
        Self::from_fn(n, |i, j| if i == j { c.clone() } else { R::zero() })
    }

    pub fn diag(d: Vec<R>) -> Self {
        let n = d.len();
        Self::from_fn(n, |i, j| if i == j { d[i].clone() } else { R::zero() })
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.a[i * self.n + j] = v;
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { n: self.n, a: self.a.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &GQ) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_by(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    let x = self.get(i, k);
                    let y = o.get(k, j);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y));
                }
                out.push(acc);
            }
        }
        Mat { n, a: out }
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Characteristic data via Faddeev-LeVerrier: returns (det, adjugate).
    /// Valid over any commutative Q-algebra.
    pub fn det_adj(&self) -> (R, Self) {
        let n = self.n;
        if n == 0 {
            return (R::one(), Mat::zero(0));
        }
        // M_1 = I, c_{n-1} = -tr(A)
        let mut mk = Mat::identity(n);
        let mut coeff = R::zero();
        let mut prev = Mat::identity(n);
        for k in 1..=n {
            let am = self.mul(&mk);
            coeff = am.trace().scale(&GQ::frac(-1, k as i64));
            prev = mk.clone();
            if k < n {
                mk = am.add(&Mat::scalar(n, &coeff));
            }
        }
        // after the loop: coeff = c_0, prev = M_n, and A M_n + c_0 I = 0
        let sign = if n % 2 == 0 { GQ::one() } else { GQ::int(-1) };
        let det = coeff.scale(&sign);
        let adj = prev.scale(&(-&sign));
        (det, adj)
    }

    pub fn det(&self) -> R {
        self.det_adj().0
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len());
        Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

/// Exact exponential of a nilpotent matrix (finite sum); `None` when not nilpotent.
pub fn nilpotent_exp<R: Ring>(x: &Mat<R>) -> Option<Mat<R>> {
    let n = x.n;
    let mut term = Mat::identity(n);
    let mut acc = Mat::identity(n);
    for k in 1..=n {
        term = term.mul(x).scale(&GQ::frac(1, k as i64));
        if term.is_zero() {
            return Some(acc);
        }
        acc = acc.add(&term);
    }
    if term.mul(x).is_zero() {
        Some(acc)
    } else {
        None
    }
}

/// Exact logarithm of a unipotent matrix (finite sum); `None` when u - I is not nilpotent.
pub fn unipotent_log<R: Ring>(u: &Mat<R>) -> Option<Mat<R>> {
    let n = u.n;
    let y = u.sub(&Mat::identity(n));
    let mut pw = Mat::identity(n);
    let mut acc = Mat::zero(n);
    for k in 1..=n {
        pw = pw.mul(&y);
        if pw.is_zero() {
            return Some(acc);
        }
        let c = if k % 2 == 1 { GQ::frac(1, k as i64) } else { GQ::frac(-1, k as i64) };
        acc = acc.add(&pw.scale(&c));
    }
    if pw.mul(&y).is_zero() {
        Some(acc)
    } else {
        None
    }
}

/// Square root exp(log(u) / 2) of a unipotent matrix; `None` when u - I is not nilpotent.
pub fn unipotent_sqrt<R: Ring>(u: &Mat<R>) -> Option<Mat<R>> {
    nilpotent_exp(&unipotent_log(u)?.scale(&GQ::frac(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<GQ> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| GQ::int(x)).collect()).collect())
    }

    #[test]
    fn det_and_adjugate() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let (d, adj) = a.det_adj();
        assert_eq!(d, GQ::int(18));
        assert!(a.mul(&adj).sub(&Mat::scalar(3, &d)).is_zero());
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(b.det(), GQ::int(-1));
    }

    #[test]
    fn exp_log_inverse() {
        let x = m(&[&[0, 2, 5], &[0, 0, 3], &[0, 0, 0]]);
        let u = nilpotent_exp(&x).unwrap();
        let l = unipotent_log(&u).unwrap();
        assert!(l.sub(&x).is_zero());
        assert!(nilpotent_exp(&m(&[&[1, 0], &[0, 0]])).is_none());
    }

    #[test]
    fn square_roots() {
        assert!(unipotent_sqrt(&Mat::<GQ>::identity(3)).unwrap().sub(&Mat::identity(3)).is_zero());
        let u = m(&[&[1, 6], &[0, 1]]);
        let v = unipotent_sqrt(&u).unwrap();
        assert!(v.sub(&m(&[&[1, 3], &[0, 1]])).is_zero());
        let w = m(&[&[1, 2, 7], &[0, 1, 4], &[0, 0, 1]]);
        let r = unipotent_sqrt(&w).unwrap();
        assert!(r.mul(&r).sub(&w).is_zero());
        assert!(unipotent_sqrt(&m(&[&[2, 0], &[0, 1]])).is_none());
    }
}
