//! Constant matrices over Q(i): Gaussian elimination, rank, inertia, Cayley transforms.

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Mat;
use crate::scalar::GQ;

pub type Matrix = Mat<GQ>;

impl PartialEq for Mat<GQ> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.a == o.a
    }
}

impl Eq for Mat<GQ> {}

impl Mat<GQ> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| GQ::int(x)).collect()).collect())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Scalar c when the matrix equals c * I.
    pub fn as_scalar(&self) -> Option<GQ> {
        if self.n == 0 {
            return Some(GQ::one());
        }
        let c = self.get(0, 0).clone();
        (*self == Mat::scalar(self.n, &c)).then_some(c)
    }

    /// Row echelon reduction; returns (rank, determinant).
    fn eliminate(&self) -> (usize, GQ) {
        let n = self.n;
        let mut m = self.clone();
        let mut rank = 0;
        let mut det = GQ::one();
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| !m.get(r, col).is_zero()) else {
                det = GQ::zero();
                continue;
            };
            if p != rank {
                for j in 0..n {
                    m.a.swap(p * n + j, rank * n + j);
                }
                det = -det;
            }
            let piv = m.get(rank, col).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for r in rank + 1..n {
                let f = m.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j) - &(&f * m.get(rank, j));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det_gauss(&self) -> GQ {
        self.eliminate().1
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !m.get(r, col).is_zero())
                .ok_or_else(|| Error::NonInvertible("singular constant matrix".into()))?;
            if p != col {
                for j in 0..n {
                    m.a.swap(p * n + j, col * n + j);
                    inv.a.swap(p * n + j, col * n + j);
                }
            }
            let pinv = m.get(col, col).inv().unwrap();
            for j in 0..n {
                m.set(col, j, m.get(col, j) * &pinv);
                inv.set(col, j, inv.get(col, j) * &pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.set(r, j, m.get(r, j) - &(&f * m.get(col, j)));
                    inv.set(r, j, inv.get(r, j) - &(&f * inv.get(col, j)));
                }
            }
        }
        Ok(inv)
    }

    /// Multiplicity of the eigenvalue `c` (geometric), i.e. nullity of (M - cI).
    pub fn eigenspace_dim(&self, c: &GQ) -> usize {
        self.n - self.sub(&Mat::scalar(self.n, c)).rank()
    }

    /// Inertia (p, q, zero) of a Hermitian matrix by symmetric elimination.
    pub fn hermitian_inertia(&self) -> Result<(usize, usize, usize)> {
        if *self != self.adjoint() {
            return Err(Error::InvalidArgument("matrix is not Hermitian".into()));
        }
        let mut m = self.clone();
        let mut idx: Vec<usize> = (0..self.n).collect();
        let (mut p, mut q) = (0, 0);
        while !idx.is_empty() {
            let k = idx.len();
            let sub = m.submatrix(&idx, &idx);
            if let Some(d) = (0..k).find(|&d| !sub.get(d, d).is_zero()) {
                let piv = sub.get(d, d).re.clone();
                if piv.is_positive() {
                    p += 1;
                } else {
                    q += 1;
                }
                // Schur complement on the remaining indices
                let pd = idx[d];
                let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != pd).collect();
                let pivq = GQ::from_rational(piv);
                let pinv = pivq.inv().unwrap();
                let mut next = m.clone();
                for &i in &rest {
                    for &j in &rest {
                        let v = m.get(i, j) - &(&(m.get(i, pd) * &pinv) * m.get(pd, j));
                        next.set(i, j, v);
                    }
                }
                m = next;
                idx = rest;
                continue;
            }
            // zero diagonal: find an off-diagonal nonzero and make a nonzero diagonal
            let found = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).find(|&(i, j)| !sub.get(i, j).is_zero());
            let Some((i, j)) = found else {
                return Ok((p, q, idx.len()));
            };
            let (ri, rj) = (idx[i], idx[j]);
            // congruence by I + c e_i e_j^T with c = h_ij makes the new (i, i) entry 2|c|^2
            let c = m.get(ri, rj).clone();
            let n = m.n;
            let mut next = m.clone();
            for col in 0..n {
                next.set(ri, col, m.get(ri, col) + &(&c * m.get(rj, col)));
            }
            let snapshot = next.clone();
            for row in 0..n {
                next.set(row, ri, snapshot.get(row, ri) + &(snapshot.get(row, rj) * &c.conj()));
            }
            m = next;
        }
        Ok((p, q, 0))
    }

    /// Row-major entries as strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        let mut out = Vec::with_capacity(n * n);
        for r in rows {
            for s in r {
                out.push(s.parse::<GQ>()?);
            }
        }
        Ok(Mat { n, a: out })
    }

    /// Permutation matrix with 1 at (perm[j], j).
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        Mat::from_fn(n, |i, j| if perm[j] == i { GQ::one() } else { GQ::zero() })
    }

    /// Signed permutation test: every row and column has exactly one entry in {1, -1, i, -i}.
    pub fn is_monomial_unit(&self) -> bool {
        let n = self.n;
        let row_ok = (0..n).all(|i| {
            let nz: Vec<&GQ> = (0..n).map(|j| self.get(i, j)).filter(|x| !x.is_zero()).collect();
            nz.len() == 1 && nz[0].unit_exponent().is_some()
        });
        let col_ok = (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1);
        row_ok && col_ok
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).is_identity()
    }
}

/// Reduced row echelon form of a rectangular matrix given by rows; returns (rref, pivot columns).
pub fn rref(rows: &[Vec<GQ>], cols: usize) -> (Vec<Vec<GQ>>, Vec<usize>) {
    let mut m: Vec<Vec<GQ>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let v = &m[i][j] - &(&f * &m[r][j]);
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (m, pivots)
}

/// Rank of a rectangular matrix given by rows with `cols` columns.
pub fn rank_of_rows(rows: &[Vec<GQ>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of the right kernel {v : M v = 0} of a rectangular matrix.
pub fn kernel_basis(rows: &[Vec<GQ>], cols: usize) -> Vec<Vec<GQ>> {
    let (m, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GQ::zero(); cols];
            v[f] = GQ::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

/// Cayley transform k = (I - S)(I + S)^{-1} of a skew-Hermitian S; k is unitary.
pub fn cayley_unitary(s: &Matrix) -> Result<Matrix> {
    if *s != s.adjoint().neg() {
        return Err(Error::InvalidArgument("S is not skew-Hermitian".into()));
    }
    let n = s.n;
    let id = Mat::identity(n);
    let plus = id.add(s);
    let inv = plus
        .inverse()
        .map_err(|_| Error::NonInvertible("I + S is singular".into()))?;
    Ok(id.sub(s).mul(&inv))
}

/// Real part test for a rational matrix.
pub fn is_real(m: &Matrix) -> bool {
    m.a.iter().all(|x| x.im == BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let b = a.inverse().unwrap();
        assert!(a.mul(&b).is_identity());
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(a.det_gauss(), GQ::int(-2));
        assert_eq!(a.det_gauss(), a.det());
    }

    #[test]
    fn inertia_of_hermitian_forms() {
        let h = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(h.hermitian_inertia().unwrap(), (1, 1, 0));
        assert_eq!(Matrix::identity(2).hermitian_inertia().unwrap(), (2, 0, 0));
        assert_eq!(Matrix::identity(2).neg().hermitian_inertia().unwrap(), (0, 2, 0));
        let mut g = Matrix::zero(2);
        g.set(0, 1, GQ::i());
        g.set(1, 0, -GQ::i());
        assert_eq!(g.hermitian_inertia().unwrap(), (1, 1, 0));
        let z = Matrix::from_ints(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -3]]);
        assert_eq!(z.hermitian_inertia().unwrap(), (1, 1, 1));
    }

    #[test]
    fn kernel_of_rectangular() {
        let rows = vec![
            vec![GQ::int(1), GQ::int(2), GQ::int(3)],
            vec![GQ::int(2), GQ::int(4), GQ::int(6)],
        ];
        assert_eq!(rank_of_rows(&rows, 3), 1);
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(GQ::zero(), |acc, j| acc + &rows[0][j] * &v[j]);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn cayley_examples() {
        assert!(cayley_unitary(&Matrix::zero(2)).unwrap().is_identity());
        let s = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let k = cayley_unitary(&s).unwrap();
        assert!(k.transpose().mul(&k).is_identity());
        assert_eq!(k, Matrix::from_ints(&[&[0, -1], &[1, 0]]));
        let mut d = Matrix::zero(2);
        d.set(0, 0, GQ::i());
        let k = cayley_unitary(&d).unwrap();
        assert_eq!(k, Matrix::diag(vec![-GQ::i(), GQ::one()]));
        assert!(cayley_unitary(&Matrix::identity(2)).is_err());
    }
}
