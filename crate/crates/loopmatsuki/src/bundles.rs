//! Eta-side classes read as real bundles on the projective line (splitting type, gluing
//! matrix, optional lines at 0 and infinity) and as points of the Kottwitz set.

use crate::canonical::{canonicalize_eta, iwahori_reduce_eta};
use crate::error::{Error, Result};
use crate::group::GroupDatum;
use crate::iwahori::AffineWeylElement;
use crate::laurent::LaurentMatrix;
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::scalar::GQ;
use crate::spherical::{classify_eta, enumerate_admissible, eps_lambda, eta_anti_fixed, SphericalClass};

/// Standard coordinate lines at 0 and at infinity, as 0/1 vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lines {
    pub l0: Vec<i64>,
    pub linf: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBundleDatum {
    pub epsilon: i64,
    pub z: GQ,
    /// Dominant splitting type: the bundle is the sum of O(lambda_i).
    pub splitting: Vec<i64>,
    /// Constant gluing matrix.
    pub c: Matrix,
    pub lines: Option<Lines>,
    pub aut_label: String,
}

pub const UNLABELED: &str = "unlabeled";

fn unit_vector(n: usize, k: usize) -> Vec<i64> {
    (0..n).map(|i| i64::from(i == k)).collect()
}

/// Bundle of an eta-class representative: splitting lambda, gluing c = g0 w1^-1.
pub fn class_to_bundle(cls: &SphericalClass) -> Result<RealBundleDatum> {
    let d = &cls.datum;
    let c = cls.g0.mul(&d.w1.inverse()?);
    let glued = LaurentMatrix::t_lambda(&cls.lambda.lambda).mul(&LaurentMatrix::from_const(&c));
    if !eta_anti_fixed(d, &glued)? {
        return Err(Error::CheckFailed("gluing datum is not anti-fixed".into()));
    }
    Ok(RealBundleDatum {
        epsilon: d.epsilon,
        z: d.z.clone(),
        splitting: cls.lambda.lambda.clone(),
        c,
        lines: None,
        aut_label: cls.aut_label.clone().unwrap_or_else(|| UNLABELED.to_string()),
    })
}

/// Real bundle attached to an eta-anti-fixed loop through its canonical class.
pub fn loop_to_bundle(d: &GroupDatum, x: &LaurentMatrix) -> Result<RealBundleDatum> {
    class_to_bundle(&canonicalize_eta(d, x)?.class)
}

/// Coordinate permutation and kind of eta_0 on the diagonal torus: eta_0(diag(h))_j is
/// conj(h_perm[j]), inverted when the flag is set. `None` if eta_0 does not preserve the torus
/// monomially.
fn eta0_on_torus(d: &GroupDatum) -> Result<Option<(Vec<usize>, bool)>> {
    const PRIMES: [i64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let n = d.n;
    if n > PRIMES.len() {
        return Ok(None);
    }
    let img = d.eta0(&Matrix::diag(PRIMES[..n].iter().map(|&p| GQ::int(p)).collect()))?;
    if !img.is_diagonal() {
        return Ok(None);
    }
    let mut perm = Vec::with_capacity(n);
    let mut inverted = None;
    for j in 0..n {
        let v = img.get(j, j);
        let hit = PRIMES[..n].iter().enumerate().find_map(|(k, &p)| {
            if *v == GQ::int(p) {
                Some((k, false))
            } else if *v == GQ::frac(1, p) {
                Some((k, true))
            } else {
                None
            }
        });
        let Some((k, inv)) = hit else { return Ok(None) };
        if inverted.is_some_and(|f| f != inv) {
            return Ok(None);
        }
        inverted = Some(inv);
        perm.push(k);
    }
    Ok(Some((perm, inverted.unwrap_or(false))))
}

/// Reductive automorphisms of the parabolic bundle over tw: torus elements h with
/// h_w(j) = eta_0(h)_j, one factor per cycle of the induced coordinate permutation.
fn parabolic_aut_label(d: &GroupDatum, tw: &AffineWeylElement) -> Result<String> {
    let Some((perm, inverted)) = eta0_on_torus(d)? else {
        return Ok(UNLABELED.to_string());
    };
    let n = d.n;
    // h_{rho(k)} = f(h_k) with rho = w o perm^-1
    let mut perm_inv = vec![0; n];
    for (j, &k) in perm.iter().enumerate() {
        perm_inv[k] = j;
    }
    let rho: Vec<usize> = (0..n).map(|k| tw.w[perm_inv[k]]).collect();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = rho[k];
            len += 1;
        }
        let part = match (inverted, len % 2 == 1) {
            (false, true) => "R^x",
            (true, true) => "U(1)",
            (_, false) => "C^x",
        };
        parts.push(part);
    }
    Ok(parts.join(" x "))
}

/// Parabolic bundle of the loop t~w g, with g an Iwahori-positioned cofactor. The gluing
/// matrix is that of the underlying spherical class; in the positioned frame the line at 0 is
/// the first coordinate line and the line at infinity is its image under w.
pub fn loop_to_parabolic_bundle(d: &GroupDatum, tw: &AffineWeylElement, g: &LaurentMatrix) -> Result<RealBundleDatum> {
    iwahori_reduce_eta(d, tw, g)?;
    let mut b = loop_to_bundle(d, &tw.loop_matrix().mul(g))?;
    let n = d.n;
    b.lines = Some(Lines { l0: unit_vector(n, 0), linf: unit_vector(n, tw.w[0]) });
    b.aut_label = parabolic_aut_label(d, tw)?;
    Ok(b)
}

/// A pair (lambda, g) with z: a point of the (z-twisted) Kottwitz set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KottwitzPoint {
    pub lambda: Vec<i64>,
    pub g: Matrix,
    pub z: GQ,
}

/// g eta_0(g) = lambda(epsilon) z and g^-1 lambda(t) g = theta_0(lambda(t^-1)), exactly.
pub fn kottwitz_validate(p: &KottwitzPoint, d: &GroupDatum) -> bool {
    let n = d.n;
    if p.lambda.len() != n || p.g.n != n || p.z != d.z || p.g.det_gauss().is_zero() {
        return false;
    }
    let cocycle = || -> Result<bool> {
        let lhs = p.g.mul(&d.eta0(&p.g)?);
        let rhs = eps_lambda(d.epsilon, &p.lambda).scale(&p.z);
        if lhs != rhs {
            return Ok(false);
        }
        let gl = LaurentMatrix::from_const(&p.g);
        let conj = gl.inverse()?.mul(&LaurentMatrix::t_lambda(&p.lambda)).mul(&gl);
        let neg: Vec<i64> = p.lambda.iter().map(|v| -v).collect();
        Ok(conj == d.theta0_gen(&LaurentMatrix::t_lambda(&neg))?)
    };
    cocycle().unwrap_or(false)
}

/// gamma(t) = lambda(t) g, checked to be anti-fixed.
pub fn kottwitz_to_loop(p: &KottwitzPoint, d: &GroupDatum) -> Result<LaurentMatrix> {
    if !kottwitz_validate(p, d) {
        return Err(Error::InvalidArgument("point violates the Kottwitz conditions".into()));
    }
    let gamma = LaurentMatrix::t_lambda(&p.lambda).mul(&LaurentMatrix::from_const(&p.g));
    if !eta_anti_fixed(d, &gamma)? {
        return Err(Error::CheckFailed("lambda(t) g is not anti-fixed".into()));
    }
    Ok(gamma)
}

/// The equivalent point (h lambda h^-1, h g eta_0(h)^-1); h must conjugate lambda to a
/// diagonal cocharacter.
pub fn kottwitz_act(d: &GroupDatum, p: &KottwitzPoint, h: &Matrix) -> Result<KottwitzPoint> {
    let hl = LaurentMatrix::from_const(h);
    let moved = hl.mul(&LaurentMatrix::t_lambda(&p.lambda)).mul(&hl.inverse()?);
    let mut lambda = Vec::with_capacity(d.n);
    for i in 0..d.n {
        for j in 0..d.n {
            if i != j && !moved.get(i, j).is_zero() {
                return Err(Error::InvalidArgument("h lambda h^-1 is not diagonal".into()));
            }
        }
        let (c, e) = moved
            .get(i, i)
            .as_monomial()
            .filter(|(c, _)| c.is_one())
            .ok_or_else(|| Error::InvalidArgument("h lambda h^-1 is not a coordinate cocharacter".into()))?;
        debug_assert!(c.is_one());
        lambda.push(e);
    }
    let g = h.mul(&p.g).mul(&d.eta0(h)?.inverse()?);
    Ok(KottwitzPoint { lambda, g, z: p.z.clone() })
}

/// One point per eta-class with |lambda_i| <= bound, from the classifier representatives.
pub fn enumerate_kottwitz(d: &GroupDatum, bound: i64) -> Result<Vec<KottwitzPoint>> {
    if bound < 0 {
        return Err(Error::InvalidArgument("bound must be nonnegative".into()));
    }
    let w1_inv = d.w1.inverse()?;
    let mut out = Vec::new();
    for cw in enumerate_admissible(d, bound)? {
        for cls in classify_eta(d, &cw)? {
            let p = KottwitzPoint { lambda: cw.lambda.clone(), g: cls.g0.mul(&w1_inv), z: d.z.clone() };
            if !kottwitz_validate(&p, d) {
                return Err(Error::CheckFailed(format!("class {} at {:?} gives an invalid point", cls.label, cw.lambda)));
            }
            out.push(p);
        }
    }
    Ok(out)
}
