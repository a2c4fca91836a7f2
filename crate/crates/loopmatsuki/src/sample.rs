//! Seeded random group elements used by property checks and the self-test.

use rand::Rng;

use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::{Mat, Ring};
use crate::scalar::GQ;

fn small_scalar<R: Rng>(rng: &mut R) -> GQ {
    match rng.gen_range(0..6) {
        0 => GQ::zero(),
        1 => GQ::complex(rng.gen_range(-2..=2), 1, rng.gen_range(-1..=1), 1),
        2 => GQ::frac(rng.gen_range(-3..=3), 2),
        _ => GQ::int(rng.gen_range(-2..=2)),
    }
}

fn unit_scalar<R: Rng>(rng: &mut R) -> GQ {
    match rng.gen_range(0..5) {
        0 => GQ::int(2),
        1 => GQ::frac(-1, 2),
        2 => GQ::i(),
        3 => GQ::int(-1),
        _ => GQ::one(),
    }
}

/// Invertible constant matrix: unit diagonal times random elementary factors.
pub fn random_constant_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut m = Matrix::diag((0..n).map(|_| unit_scalar(rng)).collect());
    if n > 1 {
        for _ in 0..n + 1 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let mut e = Matrix::identity(n);
            e.set(i, j, small_scalar(rng));
            m = m.mul(&e);
        }
    }
    m
}

/// Polynomial matrix with invertible constant term: a unit of the arc ring modulo t^(degree+1).
pub fn random_arc<R: Rng>(rng: &mut R, n: usize, degree: i64) -> LaurentMatrix {
    let mut m = LaurentMatrix::from_const(&random_constant_invertible(rng, n));
    for k in 1..=degree {
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.4) {
                    let v = m.get(i, j).add(&Laurent::monomial(small_scalar(rng), k));
                    m.set(i, j, v);
                }
            }
        }
    }
    m
}

/// Unit of the polynomial loop ring G[t] of degree at most `degree`: constant invertible
/// factor times elementary matrices with linear entries.
pub fn random_poly_unit<R: Rng>(rng: &mut R, n: usize, degree: i64) -> LaurentMatrix {
    let mut m = LaurentMatrix::from_const(&random_constant_invertible(rng, n));
    if n == 1 {
        return m;
    }
    for _ in 0..degree {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e: LaurentMatrix = Mat::identity(n);
        let mut p = Laurent::constant(small_scalar(rng));
        p.add_term(1, &small_scalar(rng));
        e.set(i, j, p);
        m = m.mul(&e);
    }
    m
}

/// Constant signed permutation matrix.
pub fn random_signed_permutation<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let signs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    Matrix::from_fn(n, |i, j| {
        if perm[j] == i {
            GQ::i_pow(signs[j])
        } else {
            GQ::zero()
        }
    })
}
