//! Birkhoff factorization G[t] t^lambda G[t^-1] of Laurent matrices.

use crate::error::{Error, Result};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::{kernel_basis, rank_of_rows, Matrix};
use crate::ring::Mat;
use crate::scalar::GQ;

#[derive(Clone, Debug)]
pub struct Birkhoff {
    pub g_plus: LaurentMatrix,
    pub lambda: Vec<i64>,
    pub g_minus: LaurentMatrix,
}

fn col_degree(m: &LaurentMatrix, j: usize) -> i64 {
    (0..m.n).filter_map(|i| m.get(i, j).max_exp()).max().expect("zero column in an invertible matrix")
}

/// Column-reduce a polynomial matrix over C[t]: returns (P U, U, column degrees) with
/// an invertible leading coefficient matrix.
fn column_reduce(p: &LaurentMatrix) -> (LaurentMatrix, LaurentMatrix, Vec<i64>) {
    let n = p.n;
    let mut m = p.clone();
    let mut u: LaurentMatrix = Mat::identity(n);
    loop {
        let deg: Vec<i64> = (0..n).map(|j| col_degree(&m, j)).collect();
        let lead = Matrix::from_fn(n, |i, j| m.get(i, j).coeff(deg[j]));
        let rows: Vec<Vec<GQ>> = (0..n).map(|i| (0..n).map(|j| lead.get(i, j).clone()).collect()).collect();
        let ker = kernel_basis(&rows, n);
        let Some(alpha) = ker.first() else {
            return (m, u, deg);
        };
        let j0 = (0..n)
            .filter(|&j| !alpha[j].is_zero())
            .max_by(|&a, &b| deg[a].cmp(&deg[b]).then(b.cmp(&a)))
            .unwrap();
        let a0 = alpha[j0].inv().unwrap();
        // col_j0 <- sum_j (alpha_j / alpha_j0) t^(d_j0 - d_j) col_j, which lowers its degree
        let mut op: LaurentMatrix = Mat::identity(n);
        for j in 0..n {
            if j != j0 && !alpha[j].is_zero() {
                op.set(j, j0, Laurent::monomial(&alpha[j] * &a0, deg[j0] - deg[j]));
            }
        }
        m = m.mul(&op);
        u = u.mul(&op);
    }
}

fn check_unit_det(x: &LaurentMatrix) -> Result<()> {
    x.unit_det().map(|_| ())
}

/// Exact factorization x = g_plus t^lambda g_minus with lambda weakly decreasing.
pub fn birkhoff_factor(x: &LaurentMatrix) -> Result<Birkhoff> {
    check_unit_det(x)?;
    let n = x.n;
    let xi = x.inverse()?;
    let a = (-xi.min_exp().unwrap_or(0)).max(0);
    let p = xi.map(|e| e.shift(a));
    let (pu, u, k) = column_reduce(&p);
    let r = Mat::from_fn(n, |i, j| pu.get(i, j).shift(-k[j]));
    let r_inv = r.inverse()?;
    let lam: Vec<i64> = k.iter().map(|kj| a - kj).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lam[j].cmp(&lam[i]).then(i.cmp(&j)));
    let g_plus = Mat::from_fn(n, |i, j| u.get(i, order[j]).clone());
    let g_minus = Mat::from_fn(n, |i, j| r_inv.get(order[i], j).clone());
    let lambda: Vec<i64> = order.iter().map(|&i| lam[i]).collect();
    let out = Birkhoff { g_plus, lambda, g_minus };
    if out.g_plus.mul(&LaurentMatrix::t_lambda(&out.lambda)).mul(&out.g_minus) != *x
        || !out.g_plus.is_polynomial_in_t()
        || !out.g_minus.is_polynomial_in_tinv()
        || out.g_plus.unit_det()?.1 != 0
    {
        return Err(Error::CheckFailed("Birkhoff factorization did not reconstruct its input".into()));
    }
    Ok(out)
}

/// dim { v in C[t^-1]^n : t^m x v has no negative powers of t }.
fn nullity_at(x: &LaurentMatrix, xinv_min: i64, m: i64) -> usize {
    let n = x.n;
    let dmax = (m - xinv_min).max(0);
    let (xlo, xhi) = (x.min_exp().unwrap(), x.max_exp().unwrap());
    let unknowns = n * (dmax as usize + 1);
    let mut rows = Vec::new();
    // coefficient of t^e in t^m x v, v = sum_k v_k t^-k
    for e in (m + xlo - dmax)..0 {
        for i in 0..n {
            let mut row = vec![GQ::zero(); unknowns];
            for k in 0..=dmax {
                let ex = e - m + k;
                if ex < xlo || ex > xhi {
                    continue;
                }
                for j in 0..n {
                    row[k as usize * n + j] = x.get(i, j).coeff(ex);
                }
            }
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    unknowns - rank_of_rows(&rows, unknowns)
}

/// Splitting type from dimension jumps of polynomial solution spaces. Independent of
/// `birkhoff_factor`.
pub fn birkhoff_type(x: &LaurentMatrix) -> Result<Vec<i64>> {
    check_unit_det(x)?;
    let n = x.n;
    let xinv_min = x.inverse()?.min_exp().unwrap_or(0);
    // d(m) = sum_i max(0, m + lambda_i + 1), so d(m) - d(m-1) counts lambda_i >= -m
    let mut m = -x.max_exp().unwrap() - 1;
    let mut prev_d = nullity_at(x, xinv_min, m);
    let mut prev_delta = 0usize;
    let mut lambda = Vec::with_capacity(n);
    while lambda.len() < n {
        m += 1;
        let d = nullity_at(x, xinv_min, m);
        let delta = d - prev_d;
        for _ in prev_delta..delta {
            lambda.push(-m);
        }
        prev_d = d;
        prev_delta = delta;
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mono(c: i64, e: i64) -> Laurent {
        Laurent::monomial(GQ::int(c), e)
    }

    /// Product of random elementary matrices I + p E_ij with p polynomial in t^sign.
    fn random_one_sided(rng: &mut ChaCha8Rng, n: usize, sign: i64) -> LaurentMatrix {
        let mut m: LaurentMatrix = Mat::identity(n);
        if n == 1 {
            return m.scale(&GQ::int(rng.gen_range(1..=3)));
        }
        for _ in 0..3 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let mut p = Laurent::default();
            for e in 0..=rng.gen_range(0..=2) {
                p.add_term(sign * e, &GQ::int(rng.gen_range(-2..=2)));
            }
            let mut el: LaurentMatrix = Mat::identity(n);
            el.set(i, j, p);
            m = m.mul(&el);
        }
        m
    }

    #[test]
    fn diagonal_and_antidiagonal_types() {
        let d = Mat::diag(vec![mono(1, 3), mono(1, -1)]);
        assert_eq!(birkhoff_type(&d).unwrap(), vec![3, -1]);
        let a = Mat::from_rows(vec![vec![Laurent::zero(), mono(1, 1)], vec![mono(-1, 1), Laurent::zero()]]);
        assert_eq!(birkhoff_type(&a).unwrap(), vec![1, 1]);
        let f = birkhoff_factor(&a).unwrap();
        assert_eq!(f.lambda, vec![1, 1]);
    }

    #[test]
    fn factor_examples() {
        let d = Mat::diag(vec![mono(1, 1), mono(1, 0)]);
        let f = birkhoff_factor(&d).unwrap();
        assert_eq!(f.lambda, vec![1, 0]);
        let m = Mat::from_rows(vec![vec![mono(1, 0), mono(1, -1)], vec![Laurent::zero(), mono(1, 0)]]);
        let f = birkhoff_factor(&m).unwrap();
        assert_eq!(f.lambda, vec![0, 0]);
        assert_eq!(birkhoff_type(&m).unwrap(), vec![0, 0]);
    }

    #[test]
    fn non_unit_determinant_rejected() {
        let m = Mat::diag(vec![mono(1, 0).add(&mono(1, 1)), mono(1, 0)]);
        assert!(birkhoff_type(&m).is_err());
        assert!(birkhoff_factor(&m).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100))]
        #[test]
        fn type_invariant_under_one_sided_units(seed in 0u64..u64::MAX, n in 1usize..=3, a in -2i64..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut lam: Vec<i64> = (0..n).map(|i| if i == 0 { a } else { i as i64 - 1 }).collect();
            lam.sort_by(|x, y| y.cmp(x));
            let gp = random_one_sided(&mut rng, n, 1);
            let gm = random_one_sided(&mut rng, n, -1);
            let x = gp.mul(&LaurentMatrix::t_lambda(&lam)).mul(&gm);
            proptest::prop_assert_eq!(birkhoff_type(&x).unwrap(), lam.clone());
            let f = birkhoff_factor(&x).unwrap();
            proptest::prop_assert_eq!(f.lambda, lam);
        }
    }
}
