//! Truncated Laurent series over Q(i) with explicit absolute precision.
//!
//! A `Series` with precision `Some(p)` is known modulo t^p: every coefficient of
//! exponent below `p` is exact, nothing is claimed at or beyond `p`. Precision
//! `None` marks an exact (finitely supported) element.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::{Mat, Ring};
use crate::scalar::GQ;

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    pub terms: BTreeMap<i64, GQ>,
    pub prec: Option<i64>,
}

pub type SeriesMatrix = Mat<Series>;

impl std::fmt::Debug for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})t^{e}")).collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        match self.prec {
            Some(p) => write!(f, "{body} + O(t^{p})"),
            None => write!(f, "{body}"),
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl Series {
    pub fn exact(l: &Laurent) -> Self {
        Series { terms: l.terms.clone(), prec: None }
    }

    pub fn truncated(l: &Laurent, prec: i64) -> Self {
        Series { terms: l.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect(), prec: Some(prec) }
    }

    pub fn zero_to(prec: i64) -> Self {
        Series { terms: BTreeMap::new(), prec: Some(prec) }
    }

    pub fn coeff(&self, e: i64) -> GQ {
        self.terms.get(&e).cloned().unwrap_or_else(GQ::zero)
    }

    /// Lower bound for the valuation: lowest known nonzero exponent, else the precision.
    /// `None` for the exact zero.
    pub fn val(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.prec)
    }

    /// Certified valuation: `Some(v)` only when a nonzero coefficient is known.
    pub fn certified_val(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn with_prec(&self, p: Option<i64>) -> Self {
        let prec = min_opt(self.prec, p);
        let terms = match prec {
            Some(q) => self.terms.range(..q).map(|(e, c)| (*e, c.clone())).collect(),
            None => self.terms.clone(),
        };
        Series { terms, prec }
    }

    pub fn to_laurent(&self) -> Laurent {
        Laurent { terms: self.terms.clone() }
    }

    pub fn conj(&self) -> Self {
        Series { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(), prec: self.prec }
    }

    /// Substitution t -> c t for a unit scalar c.
    pub fn subst_scale(&self, c: &GQ) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, a)| (*e, a * &c.pow(*e).unwrap())).collect(),
            prec: self.prec,
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// All known coefficients strictly below `p` vanish and precision reaches `p`.
    pub fn vanishes_below(&self, p: i64) -> bool {
        self.prec.map_or(true, |q| q >= p) && self.terms.range(..p).next().is_none()
    }

    /// Multiplicative inverse when a nonzero coefficient is known.
    pub fn inv(&self) -> Result<Self> {
        let v = self
            .certified_val()
            .ok_or_else(|| Error::PrecisionFloor("cannot certify a nonzero series".into()))?;
        let u0 = self.coeff(v).inv().unwrap();
        let Some(p) = self.prec else {
            if self.terms.len() == 1 {
                return Ok(Series { terms: [(-v, u0)].into_iter().collect(), prec: None });
            }
            return Err(Error::InvalidArgument("exact non-monomial series; use inv_to".into()));
        };
        // u = self / t^v is a unit known modulo t^(p - v)
        let rel = p - v;
        let mut inv: Vec<GQ> = Vec::with_capacity(rel.max(0) as usize);
        for k in 0..rel {
            if k == 0 {
                inv.push(u0.clone());
                continue;
            }
            let mut acc = GQ::zero();
            for j in 1..=k {
                let uj = self.coeff(v + j);
                if !uj.is_zero() {
                    acc = acc + &uj * &inv[(k - j) as usize];
                }
            }
            inv.push(-(&acc * &u0));
        }
        let terms = inv
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 - v, c))
            .collect();
        Ok(Series { terms, prec: Some(rel - v) })
    }

    /// Inverse truncated below `prec`, returned as an exact element.
    /// Used to build exact conjugators from truncated quotients.
    pub fn inv_to(&self, prec: i64) -> Result<Self> {
        let v = self.certified_val().unwrap_or(0);
        let work = match self.prec {
            Some(p) => p,
            None => prec + 2 * v.abs() + 1,
        };
        let inv = self.with_prec(Some(work)).inv()?;
        if inv.prec.map_or(false, |q| q < prec) {
            return Err(Error::PrecisionFloor("insufficient precision for inverse".into()));
        }
        Ok(Series { terms: inv.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect(), prec: None })
    }
}

impl Ring for Series {
    fn zero() -> Self {
        Series { terms: BTreeMap::new(), prec: None }
    }
    fn one() -> Self {
        Series { terms: [(0, GQ::one())].into_iter().collect(), prec: None }
    }
    fn from_scalar(c: GQ) -> Self {
        Series::exact(&Laurent::constant(c))
    }
    fn add(&self, o: &Self) -> Self {
        let prec = min_opt(self.prec, o.prec);
        let mut l = self.to_laurent().add(&o.to_laurent());
        if let Some(p) = prec {
            l.terms = l.terms.range(..p).map(|(e, c)| (*e, c.clone())).collect();
        }
        Series { terms: l.terms, prec }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Series::zero();
        }
        let prec = min_opt(add_opt(self.prec, o.val()), add_opt(o.prec, self.val()));
        let mut out = Laurent::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                if prec.map_or(true, |p| e < p) {
                    out.add_term(e, &(c1 * c2));
                }
            }
        }
        Series { terms: out.terms, prec }
    }
    fn neg(&self) -> Self {
        Series { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), prec: self.prec }
    }
    fn scale(&self, c: &GQ) -> Self {
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(e, a)| (*e, a * c)).collect()
        };
        Series { terms, prec: self.prec }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }
}

impl PartialEq for Mat<Series> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.a == o.a
    }
}

impl Mat<Series> {
    pub fn from_laurent(m: &LaurentMatrix, prec: Option<i64>) -> Self {
        m.map(|x| match prec {
            Some(p) => Series::truncated(x, p),
            None => Series::exact(x),
        })
    }

    pub fn from_const(m: &Matrix) -> Self {
        m.map(|c| Series::exact(&Laurent::constant(c.clone())))
    }

    pub fn to_laurent(&self) -> LaurentMatrix {
        self.map(|x| x.to_laurent())
    }

    /// Minimum precision over entries (`None` when exact).
    pub fn prec(&self) -> Option<i64> {
        self.a.iter().fold(None, |acc, x| min_opt(acc, x.prec))
    }

    pub fn with_prec(&self, p: Option<i64>) -> Self {
        self.map(|x| x.with_prec(p))
    }

    pub fn val(&self) -> Option<i64> {
        self.a.iter().filter_map(|x| x.val()).min()
    }

    pub fn coeff_matrix(&self, e: i64) -> Matrix {
        self.map(|x| x.coeff(e))
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn subst_scale(&self, c: &GQ) -> Self {
        self.map(|x| x.subst_scale(c))
    }

    /// Left multiplication by t^lambda (row i scaled by t^{lambda_i}).
    pub fn row_shift(&self, lambda: &[i64]) -> Self {
        Mat::from_fn(self.n, |i, j| self.get(i, j).shift(lambda[i]))
    }

    pub fn vanishes_below(&self, p: i64) -> bool {
        self.a.iter().all(|x| x.vanishes_below(p))
    }

    pub fn inverse(&self) -> Result<Self> {
        let (d, adj) = self.det_adj();
        let dinv = d.inv()?;
        Ok(adj.scale_by(&dinv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[(i64, i64)]) -> Laurent {
        let mut l = Laurent::default();
        for &(e, c) in cs {
            l.add_term(e, &GQ::int(c));
        }
        l
    }

    #[test]
    fn precision_rules() {
        let a = Series::truncated(&poly(&[(1, 1), (2, 3)]), 5);
        let b = Series::truncated(&poly(&[(-1, 2)]), 4);
        let c = a.mul(&b);
        // min(5 + (-1), 4 + 1)
        assert_eq!(c.prec, Some(4));
        assert_eq!(c.coeff(0), GQ::int(2));
        let s = a.add(&b);
        assert_eq!(s.prec, Some(4));
    }

    #[test]
    fn inverse_of_unit_series() {
        let u = Series::truncated(&poly(&[(0, 1), (1, 1)]), 6);
        let v = u.inv().unwrap();
        assert_eq!(v.prec, Some(6));
        let p = u.mul(&v);
        assert!(p.sub(&Series::one()).vanishes_below(6));
        let w = Series::truncated(&poly(&[(2, 1), (3, 1)]), 6);
        let wi = w.inv().unwrap();
        assert_eq!(wi.prec, Some(2));
        assert_eq!(wi.coeff(-2), GQ::one());
        assert_eq!(wi.coeff(-1), GQ::int(-1));
    }

    #[test]
    fn exact_zero_absorbs() {
        let a = Series::zero();
        let b = Series::truncated(&poly(&[(0, 1)]), 3);
        assert!(a.mul(&b).is_zero());
    }
}
