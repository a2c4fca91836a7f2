//! Laurent polynomials over Q(i) and matrices over them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Mat, Ring};
use crate::scalar::GQ;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    /// exponent -> nonzero coefficient
    pub terms: BTreeMap<i64, GQ>,
}

pub type LaurentMatrix = Mat<Laurent>;

impl std::fmt::Debug for Laurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})t^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Laurent {
    pub fn monomial(c: GQ, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    pub fn t_pow(e: i64) -> Self {
        Self::monomial(GQ::one(), e)
    }

    pub fn constant(c: GQ) -> Self {
        Self::monomial(c, 0)
    }

    pub fn coeff(&self, e: i64) -> GQ {
        self.terms.get(&e).cloned().unwrap_or_else(GQ::zero)
    }

    pub fn add_term(&mut self, e: i64, c: &GQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let v = &*slot.get() + c;
                if v.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = v;
                }
            }
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// c * t^k when the element is a monomial.
    pub fn as_monomial(&self) -> Option<(GQ, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *e))
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    /// Substitution t -> c * t^s with s = +1 or -1.
    pub fn subst(&self, c: &GQ, s: i64) -> Self {
        let mut out = Laurent::default();
        for (e, a) in &self.terms {
            out.add_term(s * e, &(a * &c.pow(*e).expect("nonzero substitution scalar")));
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    /// Inverse of a monomial.
    pub fn inv_monomial(&self) -> Option<Self> {
        let (c, e) = self.as_monomial()?;
        Some(Laurent::monomial(c.inv()?, -e))
    }
}

impl Ring for Laurent {
    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Laurent::t_pow(0)
    }
    fn from_scalar(c: GQ) -> Self {
        Laurent::constant(c)
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, &-c);
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = Laurent::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
    fn scale(&self, c: &GQ) -> Self {
        if c.is_zero() {
            return Laurent::default();
        }
        Laurent { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl PartialEq for Mat<Laurent> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.a == o.a
    }
}

impl Eq for Mat<Laurent> {}

impl Mat<Laurent> {
    pub fn from_const(m: &Matrix) -> Self {
        m.map(|c| Laurent::constant(c.clone()))
    }

    /// t^lambda = diag(t^{lambda_i}).
    pub fn t_lambda(lambda: &[i64]) -> Self {
        Mat::diag(lambda.iter().map(|&e| Laurent::t_pow(e)).collect())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn subst(&self, c: &GQ, s: i64) -> Self {
        self.map(|x| x.subst(c, s))
    }

    /// Constant matrix when all entries are constants.
    pub fn as_const(&self) -> Option<Matrix> {
        if self.a.iter().all(|x| x.is_constant()) {
            Some(self.map(|x| x.coeff(0)))
        } else {
            None
        }
    }

    /// Coefficient matrix of t^e.
    pub fn coeff_matrix(&self, e: i64) -> Matrix {
        self.map(|x| x.coeff(e))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.a.iter().filter_map(|x| x.min_exp()).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.a.iter().filter_map(|x| x.max_exp()).max()
    }

    /// Determinant as (c, k) when it is a unit c t^k of the Laurent ring.
    pub fn unit_det(&self) -> Result<(GQ, i64)> {
        self.det()
            .as_monomial()
            .ok_or_else(|| Error::NonInvertible("determinant is not a unit of the Laurent ring".into()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let (d, adj) = self.det_adj();
        let dinv = d
            .inv_monomial()
            .ok_or_else(|| Error::NonInvertible("determinant is not a unit of the Laurent ring".into()))?;
        Ok(adj.scale_by(&dinv))
    }

    pub fn is_polynomial_in_t(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    pub fn is_polynomial_in_tinv(&self) -> bool {
        self.max_exp().map_or(true, |e| e <= 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_and_inverse() {
        let p = Laurent::t_pow(2).add(&Laurent::constant(GQ::int(3)));
        let q = p.subst(&GQ::int(-1), -1);
        assert_eq!(q, Laurent::t_pow(-2).add(&Laurent::constant(GQ::int(3))));
        let m = Mat::from_rows(vec![
            vec![Laurent::one(), Laurent::t_pow(1)],
            vec![Laurent::zero(), Laurent::t_pow(2)],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.unit_det().unwrap(), (GQ::one(), 2));
        let sing = Mat::from_rows(vec![
            vec![Laurent::one(), Laurent::t_pow(1)],
            vec![Laurent::one(), Laurent::one()],
        ]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn laurent_unipotent_square_root() {
        use crate::ring::unipotent_sqrt;
        let mut u: LaurentMatrix = Mat::identity(3);
        u.set(0, 1, Laurent::t_pow(1));
        u.set(0, 2, Laurent::t_pow(2));
        u.set(1, 2, Laurent::constant(GQ::int(3)));
        let v = unipotent_sqrt(&u).unwrap();
        assert_eq!(v.mul(&v), u);
        assert!(v.is_polynomial_in_t());
    }
}
