//! Elementary divisors over the formal arc ring C[[t]].

use crate::error::{Error, Result};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::ring::{Mat, Ring};
use crate::series::{Series, SeriesMatrix};

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal valuation over the k x k minors, certified against the precision of each minor.
fn minor_valuation(g: &SeriesMatrix, k: usize) -> Result<i64> {
    let idx = combinations(g.n, k);
    let mut certified: Option<i64> = None;
    let mut floor: Option<i64> = None;
    for rows in &idx {
        for cols in &idx {
            let d = g.submatrix(rows, cols).det();
            if d.is_zero() {
                continue;
            }
            match d.certified_val() {
                Some(v) => certified = Some(certified.map_or(v, |c| c.min(v))),
                None => {
                    let p = d.prec.expect("non-zero series without terms carries a precision");
                    floor = Some(floor.map_or(p, |f: i64| f.min(p)));
                }
            }
        }
    }
    match (certified, floor) {
        (Some(c), Some(f)) if f <= c => Err(Error::PrecisionFloor(format!(
            "a {k}x{k} minor is only known to vanish below t^{f}, cannot certify valuation {c}"
        ))),
        (Some(c), _) => Ok(c),
        (None, _) => Err(Error::PrecisionFloor(format!("no {k}x{k} minor is certified nonzero"))),
    }
}

/// Dominant coweight of the double coset G(O) g G(O), from valuations of minors.
pub fn valuation_coweight(g: &SeriesMatrix) -> Result<Vec<i64>> {
    let n = g.n;
    let mut prev = 0;
    let mut ascending = Vec::with_capacity(n);
    for k in 1..=n {
        let v = minor_valuation(g, k)?;
        ascending.push(v - prev);
        prev = v;
    }
    ascending.reverse();
    Ok(ascending)
}

pub fn valuation_coweight_laurent(g: &LaurentMatrix) -> Result<Vec<i64>> {
    valuation_coweight(&SeriesMatrix::from_laurent(g, None))
}

/// Cartan factorization g = g1 t^lambda g2 over the arc ring.
#[derive(Clone, Debug)]
pub struct DvrSmith {
    /// Exact polynomial row transform with determinant +-1 and h g = t^lambda g2.
    pub h: LaurentMatrix,
    pub g1: LaurentMatrix,
    pub lambda: Vec<i64>,
    pub g2: SeriesMatrix,
}

/// Known coefficients of a series as an exact element.
fn exact_part(s: &Series) -> Series {
    Series { terms: s.terms.clone(), prec: None }
}

fn swap_rows<R: Ring>(m: &mut Mat<R>, i: usize, j: usize) {
    let n = m.n;
    for c in 0..n {
        m.a.swap(i * n + c, j * n + c);
    }
}

fn swap_cols<R: Ring>(m: &mut Mat<R>, i: usize, j: usize) {
    let n = m.n;
    for r in 0..n {
        m.a.swap(r * n + i, r * n + j);
    }
}

/// row_i -= q row_j
fn row_axpy<R: Ring>(m: &mut Mat<R>, i: usize, j: usize, q: &R) {
    for c in 0..m.n {
        let v = m.get(i, c).sub(&q.mul(m.get(j, c)));
        m.set(i, c, v);
    }
}

/// col_i -= q col_j
fn col_axpy<R: Ring>(m: &mut Mat<R>, i: usize, j: usize, q: &R) {
    for r in 0..m.n {
        let v = m.get(r, i).sub(&m.get(r, j).mul(q));
        m.set(r, i, v);
    }
}

/// Elimination with pivots of least valuation. Row operations are polynomial and
/// recorded exactly; column operations only steer the pivot search.
pub fn smith_over_dvr(g: &SeriesMatrix) -> Result<DvrSmith> {
    let n = g.n;
    let mut w = g.clone();
    let mut h: Mat<Series> = Mat::identity(n);
    let mut vals = vec![0i64; n];
    for t in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        let mut floor: Option<i64> = None;
        for i in t..n {
            for j in t..n {
                let x = w.get(i, j);
                match x.certified_val() {
                    Some(v) if best.map_or(true, |b| v < b.0) => best = Some((v, i, j)),
                    Some(_) => {}
                    None => {
                        if let Some(p) = x.prec {
                            floor = Some(floor.map_or(p, |f: i64| f.min(p)));
                        }
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return Err(Error::PrecisionFloor("trailing block has no certified nonzero entry".into()));
        };
        if floor.map_or(false, |f| f <= v) {
            return Err(Error::PrecisionFloor(format!("cannot certify pivot valuation {v}")));
        }
        swap_rows(&mut w, t, pi);
        swap_rows(&mut h, t, pi);
        swap_cols(&mut w, t, pj);
        let pinv = w.get(t, t).inv()?;
        for i in t + 1..n {
            let q = exact_part(&w.get(i, t).mul(&pinv));
            if q.is_zero() {
                continue;
            }
            row_axpy(&mut w, i, t, &q);
            row_axpy(&mut h, i, t, &q);
        }
        for j in t + 1..n {
            let q = exact_part(&pinv.mul(w.get(t, j)));
            if q.is_zero() {
                continue;
            }
            col_axpy(&mut w, j, t, &q);
        }
        vals[t] = v;
    }
    // dominant order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].cmp(&vals[a]).then(a.cmp(&b)));
    let lambda: Vec<i64> = order.iter().map(|&i| vals[i]).collect();
    let h = Mat::from_fn(n, |i, j| h.get(order[i], j).to_laurent());
    let g1 = h.inverse()?;
    let hg = SeriesMatrix::from_laurent(&h, None).mul(g);
    let neg: Vec<i64> = lambda.iter().map(|x| -x).collect();
    let g2 = hg.row_shift(&neg);
    for i in 0..n {
        for j in 0..n {
            let x = g2.get(i, j);
            if x.terms.keys().next().map_or(false, |&e| e < 0) || x.prec.map_or(false, |p| p <= 0) {
                return Err(Error::PrecisionFloor("Cartan cofactor is not certified integral".into()));
            }
        }
    }
    if g2.det().certified_val() != Some(0) {
        return Err(Error::PrecisionFloor("Cartan cofactor is not certified invertible".into()));
    }
    Ok(DvrSmith { h, g1, lambda, g2 })
}

/// Exact polynomial truncation of a matrix of series below t^prec.
pub fn truncate_exact(m: &SeriesMatrix, prec: i64) -> LaurentMatrix {
    m.map(|x| Laurent { terms: x.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GQ;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lm(rows: Vec<Vec<Vec<(i64, i64)>>>) -> LaurentMatrix {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|terms| {
                            let mut l = Laurent::default();
                            for (e, c) in terms {
                                l.add_term(e, &GQ::int(c));
                            }
                            l
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Random element of G(O) truncated to degree < deg, with an integer constant term of nonzero determinant.
    fn random_arc_unit(rng: &mut ChaCha8Rng, n: usize, deg: i64) -> LaurentMatrix {
        loop {
            let m: LaurentMatrix = Mat::from_fn(n, |_, _| Laurent::zero());
            let mut m = m;
            for i in 0..n {
                for j in 0..n {
                    let mut l = Laurent::default();
                    for e in 0..deg {
                        l.add_term(e, &GQ::int(rng.gen_range(-3..=3)));
                    }
                    m.set(i, j, l);
                }
            }
            if !m.coeff_matrix(0).det_gauss().is_zero() {
                return m;
            }
        }
    }

    #[test]
    fn diagonal_and_antidiagonal() {
        let d = lm(vec![vec![vec![(2, 1)], vec![]], vec![vec![], vec![(1, 1)]]]);
        assert_eq!(valuation_coweight_laurent(&d).unwrap(), vec![2, 1]);
        let a = lm(vec![vec![vec![], vec![(1, 1)]], vec![vec![(1, -1)], vec![]]]);
        assert_eq!(valuation_coweight_laurent(&a).unwrap(), vec![1, 1]);
    }

    #[test]
    fn smith_reconstructs_upper_triangular_example() {
        // [[t, 1], [0, t]]: v1 = 0, v2 = 2
        let m = lm(vec![vec![vec![(1, 1)], vec![(0, 1)]], vec![vec![], vec![(1, 1)]]]);
        let s = SeriesMatrix::from_laurent(&m, Some(10));
        assert_eq!(valuation_coweight(&s).unwrap(), vec![2, 0]);
        let f = smith_over_dvr(&s).unwrap();
        assert_eq!(f.lambda, vec![2, 0]);
        let back = SeriesMatrix::from_laurent(&f.g1.mul(&LaurentMatrix::t_lambda(&f.lambda)), None).mul(&f.g2);
        assert!(back.sub(&s).vanishes_below(10));
        assert_eq!(back.prec(), Some(10));
    }

    #[test]
    fn unit_matrix_has_zero_coweight() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_arc_unit(&mut rng, 3, 4);
        let s = SeriesMatrix::from_laurent(&u, Some(8));
        let f = smith_over_dvr(&s).unwrap();
        assert_eq!(f.lambda, vec![0, 0, 0]);
    }

    #[test]
    fn insufficient_precision_raises() {
        let m = lm(vec![vec![vec![(5, 1)], vec![]], vec![vec![], vec![(0, 1)]]]);
        let s = SeriesMatrix::from_laurent(&m, Some(3));
        assert!(matches!(valuation_coweight(&s), Err(Error::PrecisionFloor(_))));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100))]
        #[test]
        fn coweight_invariant_under_arc_units(seed in 0u64..u64::MAX, n in 1usize..=3, a in 0i64..=3, b in -2i64..=0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g1 = random_arc_unit(&mut rng, n, 3);
            let g2 = random_arc_unit(&mut rng, n, 3);
            let mut lam: Vec<i64> = (0..n).map(|i| if i == 0 { a } else if i == n - 1 { b } else { (a + b) / 2 }).collect();
            lam.sort_by(|x, y| y.cmp(x));
            let x = g1.mul(&LaurentMatrix::t_lambda(&lam)).mul(&g2);
            let s = SeriesMatrix::from_laurent(&x, Some(12));
            proptest::prop_assert_eq!(valuation_coweight(&s).unwrap(), lam.clone());
            let f = smith_over_dvr(&s).unwrap();
            proptest::prop_assert_eq!(&f.lambda, &lam);
            let back = SeriesMatrix::from_laurent(&f.g1.mul(&LaurentMatrix::t_lambda(&f.lambda)), None).mul(&f.g2);
            proptest::prop_assert!(back.sub(&s).vanishes_below(12));
        }
    }
}
