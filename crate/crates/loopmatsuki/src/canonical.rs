//! Canonical forms of twisted-conjugation orbits: the layer-by-layer reduction on the
//! theta side, Birkhoff positioning plus unipotent square roots on the eta side, the
//! Iwahori-level reductions and the maps gamma -> gamma theta(gamma)^-1, gamma eta(gamma)^-1.

use num::{BigInt, BigRational, Zero};
use serde::Serialize;

use crate::birkhoff::birkhoff_factor;
use crate::dvr::{smith_over_dvr, truncate_exact, valuation_coweight};
use crate::error::{Error, Result};
use crate::group::GroupDatum;
use crate::iwahori::{
    classify_iwahori, torus_character_rows, torus_class_key, torus_equation_holds, torus_problem,
    AffineWeylElement, IwahoriClass,
};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::{nilpotent_exp, unipotent_log, Mat, Ring};
use crate::scalar::GQ;
use crate::series::{Series, SeriesMatrix};
use crate::spherical::{
    classify_eta, classify_theta, eta_equation_holds, is_admissible, label_from_rep, theta_equation_holds,
    AdmissibleCoweight, Side, SphericalClass,
};

/// Smallest residual precision accepted by the theta-side canonicalizer.
pub const MIN_RESIDUAL: i64 = 4;
/// Extra precision given to exact theta-side inputs beyond the spread of their coweight.
pub const EXACT_EXTRA: i64 = 12;
/// Working precision for exact Iwahori theta-side inputs.
pub const IWAHORI_EXACT_PREC: i64 = 16;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub lambda: Vec<i64>,
    pub g0: Matrix,
    pub class: SphericalClass,
    /// Polynomial conjugator h with h . x = t^lambda g0 w1^-1.
    pub certificate: LaurentMatrix,
    /// `None` when the reduction is exact.
    pub residual_precision: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct IwahoriCanonicalForm {
    pub tw: AffineWeylElement,
    pub g0: Matrix,
    pub class: IwahoriClass,
    pub certificate: LaurentMatrix,
    pub residual_precision: Option<i64>,
}

/// Serializable summary of a canonical form.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalSummary {
    pub lambda: Vec<i64>,
    pub label: String,
    pub residual_precision: Option<i64>,
}

impl CanonicalForm {
    pub fn summary(&self) -> CanonicalSummary {
        CanonicalSummary {
            lambda: self.lambda.clone(),
            label: self.class.label.clone(),
            residual_precision: self.residual_precision,
        }
    }
}

fn identity_plus(n: usize, k: i64, m: &Matrix) -> LaurentMatrix {
    Mat::from_fn(n, |i, j| {
        let mut l = Laurent::monomial(m.get(i, j).clone(), k);
        if i == j {
            l.add_term(0, &GQ::one());
        }
        l
    })
}

/// gamma theta(gamma)^-1. Exact when det gamma is a unit of the Laurent ring, otherwise the
/// inverse is expanded to absolute precision `prec`.
pub fn tau_theta(d: &GroupDatum, gamma: &LaurentMatrix, prec: i64) -> Result<SeriesMatrix> {
    if gamma.det().is_zero() {
        return Err(Error::NonInvertible("loop is singular".into()));
    }
    if gamma.unit_det().is_ok() {
        let th = d.apply_theta(gamma)?;
        return Ok(SeriesMatrix::from_laurent(&gamma.mul(&th.inverse()?), None));
    }
    let th = d.apply_theta_series(&SeriesMatrix::from_laurent(gamma, Some(prec)))?;
    Ok(SeriesMatrix::from_laurent(gamma, None).mul(&th.inverse()?))
}

/// gamma eta(gamma)^-1 on Laurent loops with unit determinant.
pub fn tau_eta(d: &GroupDatum, gamma: &LaurentMatrix) -> Result<LaurentMatrix> {
    gamma.unit_det()?;
    Ok(gamma.mul(&d.apply_eta(gamma)?.inverse()?))
}

/// h x theta(h)^-1 for a polynomial h, with theta(h)^-1 expanded to precision `cap`.
pub fn twist_theta(d: &GroupDatum, h: &LaurentMatrix, x: &SeriesMatrix, cap: i64) -> Result<SeriesMatrix> {
    let th = d.apply_theta_series(&SeriesMatrix::from_laurent(h, Some(cap)))?;
    Ok(SeriesMatrix::from_laurent(h, None).mul(x).mul(&th.inverse()?))
}

/// h x eta(h)^-1, exact.
pub fn twist_eta(d: &GroupDatum, h: &LaurentMatrix, x: &LaurentMatrix) -> Result<LaurentMatrix> {
    Ok(h.mul(x).mul(&d.apply_eta(h)?.inverse()?))
}

/// Applies the certificate of `cf` to `x` and compares with the canonical loop
/// t^lambda g0 w1^-1, exactly on the eta side and modulo the residual precision on the theta side.
pub fn replay_theta(d: &GroupDatum, cf: &CanonicalForm, x: &SeriesMatrix) -> Result<bool> {
    let lam = &cf.lambda;
    let residual = cf.residual_precision.unwrap_or(MIN_RESIDUAL);
    let prec = x.prec().unwrap_or(lam[0] + (lam[0] - lam[lam.len() - 1]) + EXACT_EXTRA);
    let cap = prec - lam[lam.len() - 1].min(0) + 1;
    let neg: Vec<i64> = lam.iter().map(|v| -v).collect();
    let moved = twist_theta(d, &cf.certificate, &x.with_prec(Some(prec)), cap)?;
    let diff = moved
        .row_shift(&neg)
        .mul(&SeriesMatrix::from_const(&d.w1))
        .with_prec(Some(residual))
        .sub(&SeriesMatrix::from_const(&cf.g0));
    Ok(diff.prec().map_or(true, |p| p >= residual) && diff.vanishes_below(residual))
}

pub fn replay_eta(d: &GroupDatum, cf: &CanonicalForm, x: &LaurentMatrix) -> Result<bool> {
    let target = LaurentMatrix::t_lambda(&cf.lambda).mul(&LaurentMatrix::from_const(&cf.g0.mul(&d.w1.inverse()?)));
    Ok(twist_eta(d, &cf.certificate, x)? == target)
}

/// Differential of theta_0 at the identity, read off from theta_0(1 + tY) modulo t^2.
fn d_theta0(d: &GroupDatum, y: &Matrix) -> Result<Matrix> {
    let arg: SeriesMatrix =
        Mat::from_fn(y.n, |i, j| Series::truncated(identity_plus(y.n, 1, y).get(i, j), 2));
    Ok(d.theta0_gen(&arg)?.coeff_matrix(1))
}

/// Block index of each coordinate: maximal runs of equal entries of lambda.
fn block_index(lambda: &[i64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(lambda.len());
    let mut b = 0;
    for (i, v) in lambda.iter().enumerate() {
        if i > 0 && *v != lambda[i - 1] {
            b += 1;
        }
        out.push(b);
    }
    out
}

/// (block diagonal part, strictly block upper part, whether the block lower part vanishes).
fn split_blocks(m: &Matrix, blk: &[usize]) -> (Matrix, Matrix, bool) {
    let n = m.n;
    let diag = Matrix::from_fn(n, |i, j| if blk[i] == blk[j] { m.get(i, j).clone() } else { GQ::zero() });
    let upper = Matrix::from_fn(n, |i, j| if blk[i] < blk[j] { m.get(i, j).clone() } else { GQ::zero() });
    let lower_zero = (0..n).all(|i| (0..n).all(|j| blk[i] <= blk[j] || m.get(i, j).is_zero()));
    (diag, upper, lower_zero)
}

fn find_class(classes: Vec<SphericalClass>, label: &str) -> Result<SphericalClass> {
    classes
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::CheckFailed(format!("reduced representative has label {label} outside the class list")))
}

/// Canonical form of a theta-anti-fixed loop known to finite precision. Exact inputs are
/// truncated to `EXACT_EXTRA` layers beyond the spread of their coweight.
pub fn canonicalize_theta(d: &GroupDatum, x: &SeriesMatrix) -> Result<CanonicalForm> {
    let n = d.n;
    if x.n != n {
        return Err(Error::InvalidArgument(format!("expected a {n}x{n} loop")));
    }
    let x = match x.prec() {
        Some(_) => x.clone(),
        None => {
            let l = valuation_coweight(x)?;
            x.with_prec(Some(l[0] + (l[0] - l[n - 1]) + EXACT_EXTRA))
        }
    };
    let big_n = x.prec().unwrap();
    let defect = x.mul(&d.apply_theta_series(&x)?).sub(&SeriesMatrix::from_const(&d.z_matrix()));
    if !defect.vanishes_below(defect.prec().unwrap_or(i64::MAX)) {
        return Err(Error::NotAntiFixed("x theta(x) differs from z".into()));
    }
    let sm = smith_over_dvr(&x)?;
    let lam = sm.lambda.clone();
    if !is_admissible(d, &lam)? {
        return Err(Error::NotAntiFixed(format!("coweight {lam:?} is not admissible")));
    }
    // the cofactor t^-lambda x is only known to N - lambda_1
    let residual = (big_n - (lam[0] - lam[n - 1])).min(big_n - lam[0]);
    if residual < MIN_RESIDUAL {
        return Err(Error::PrecisionFloor(format!(
            "residual precision {residual} is below {MIN_RESIDUAL}; supply more terms"
        )));
    }
    let cap = big_n - lam[n - 1].min(0) + 1;
    let w1 = d.w1.clone();
    let w1i = w1.inverse()?;
    let neg: Vec<i64> = lam.iter().map(|v| -v).collect();
    let normal =
        |c: &SeriesMatrix| c.row_shift(&neg).with_prec(Some(residual)).mul(&SeriesMatrix::from_const(&w1));
    let blk = block_index(&lam);

    let mut cert = sm.h.clone();
    let mut cur = twist_theta(d, &sm.h, &x, cap)?;
    let g = normal(&cur);
    if !g.vanishes_below(0) {
        return Err(Error::CheckFailed("cofactor is not integral after positioning".into()));
    }
    let c0 = g.coeff_matrix(0);
    let (ell, _, lower_zero) = split_blocks(&c0, &blk);
    if !lower_zero {
        return Err(Error::NotAntiFixed("constant term has a lower block part".into()));
    }
    let u = ell.inverse()?.mul(&c0);
    if !u.is_identity() {
        let h = LaurentMatrix::from_const(&w1i.mul(&d.theta0(&u)?).mul(&w1));
        cur = twist_theta(d, &h, &cur, cap)?;
        cert = h.mul(&cert);
    }
    let g0 = normal(&cur).coeff_matrix(0);
    if !split_blocks(&g0, &blk).1.is_zero() {
        return Err(Error::CheckFailed("upper block part of the constant term survived".into()));
    }
    if !theta_equation_holds(d, &lam, &g0)? {
        return Err(Error::NotAntiFixed("constant term fails its twisted equation".into()));
    }
    let g0i = g0.inverse()?;
    let half = GQ::frac(1, 2);
    let mut layer = g0i.mul(&normal(&cur).coeff_matrix(1));
    for k in 1..residual {
        let ek = GQ::sign_pow(d.epsilon, k);
        let (_, x2, lower_zero) = split_blocks(&layer, &blk);
        if !lower_zero {
            return Err(Error::NotAntiFixed(format!("layer {k} has a lower block part")));
        }
        if !x2.is_zero() {
            let z = w1i.mul(&d_theta0(d, &x2)?).mul(&w1).scale(&ek);
            let h = identity_plus(n, k, &z);
            cur = twist_theta(d, &h, &cur, cap)?;
            cert = h.mul(&cert);
            layer = g0i.mul(&normal(&cur).coeff_matrix(k));
        }
        let (x1, _, _) = split_blocks(&layer, &blk);
        if !x1.is_zero() {
            let q = d_theta0(d, &w1.mul(&x1).mul(&w1i))?.scale(&(&ek * &half));
            let h = identity_plus(n, k, &q);
            cur = twist_theta(d, &h, &cur, cap)?;
            cert = h.mul(&cert);
        }
        let next = normal(&cur);
        if !next.coeff_matrix(k).is_zero() {
            return Err(Error::CheckFailed(format!("layer {k} survived its conjugators")));
        }
        if k + 1 < residual {
            layer = g0i.mul(&next.coeff_matrix(k + 1));
        }
    }
    // replay the certificate on the input
    let replay = normal(&twist_theta(d, &cert, &x, cap)?).sub(&SeriesMatrix::from_const(&g0));
    if replay.prec().map_or(false, |p| p < residual) {
        return Err(Error::PrecisionFloor("certificate replay lost precision".into()));
    }
    if !replay.vanishes_below(residual) {
        return Err(Error::CheckFailed("certificate replay does not reproduce the canonical loop".into()));
    }
    let cw = AdmissibleCoweight::new(lam.clone());
    let label = label_from_rep(d, &cw, Side::Theta, &g0)?;
    let class = find_class(classify_theta(d, &cw)?, &label)?;
    Ok(CanonicalForm { lambda: lam, g0, class, certificate: cert, residual_precision: Some(residual) })
}

/// Exact canonical form of an eta-anti-fixed Laurent loop.
pub fn canonicalize_eta(d: &GroupDatum, x: &LaurentMatrix) -> Result<CanonicalForm> {
    let n = d.n;
    if x.n != n {
        return Err(Error::InvalidArgument(format!("expected a {n}x{n} loop")));
    }
    x.unit_det()?;
    if x.mul(&d.apply_eta(x)?) != d.z_loop() {
        return Err(Error::NotAntiFixed("x eta(x) differs from z".into()));
    }
    let b = birkhoff_factor(x)?;
    let lam = b.lambda.clone();
    if !is_admissible(d, &lam)? {
        return Err(Error::NotAntiFixed(format!("coweight {lam:?} is not admissible")));
    }
    let h1 = b.g_plus.inverse()?;
    let x1 = twist_eta(d, &h1, x)?;
    let neg: Vec<i64> = lam.iter().map(|v| -v).collect();
    let w1 = LaurentMatrix::from_const(&d.w1);
    let g = LaurentMatrix::t_lambda(&neg).mul(&x1).mul(&w1);
    if !g.is_polynomial_in_tinv() {
        return Err(Error::CheckFailed("Birkhoff positioning left positive powers".into()));
    }
    let blk = block_index(&lam);
    let ell = split_blocks(&g.coeff_matrix(0), &blk).0;
    let u = g.mul(&LaurentMatrix::from_const(&ell.inverse()?));
    let s = unipotent_log(&u)
        .and_then(|a| nilpotent_exp(&a.scale(&GQ::frac(-1, 2))))
        .ok_or_else(|| Error::NotUnipotent("unipotent part after positioning is not unipotent".into()))?;
    let k = LaurentMatrix::t_lambda(&lam).mul(&s).mul(&LaurentMatrix::t_lambda(&neg));
    if !k.is_polynomial_in_t() {
        return Err(Error::CheckFailed("square-root conjugator is not polynomial".into()));
    }
    let cert = k.mul(&h1);
    let target = LaurentMatrix::t_lambda(&lam).mul(&LaurentMatrix::from_const(&ell.mul(&d.w1.inverse()?)));
    if twist_eta(d, &cert, x)? != target {
        return Err(Error::CheckFailed("certificate replay does not reproduce the canonical loop".into()));
    }
    if !eta_equation_holds(d, &lam, &ell)? {
        return Err(Error::CheckFailed("reduced constant term fails its equation".into()));
    }
    let cw = AdmissibleCoweight::new(lam.clone());
    let label = label_from_rep(d, &cw, Side::Eta, &ell)?;
    let class = find_class(classify_eta(d, &cw)?, &label)?;
    Ok(CanonicalForm { lambda: lam, g0: ell, class, certificate: cert, residual_precision: None })
}

fn diagonal_part(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.n, |i, j| if i == j { m.get(i, i).clone() } else { GQ::zero() })
}

/// Phase of a nonzero real or purely imaginary number as a fraction of a turn.
fn quarter_phase(c: &GQ) -> Option<BigRational> {
    let k = if c.is_zero() {
        return None;
    } else if c.im.is_zero() {
        if c.re > BigRational::zero() { 0 } else { 2 }
    } else if c.re.is_zero() {
        if c.im > BigRational::zero() { 1 } else { 3 }
    } else {
        return None;
    };
    Some(BigRational::new(BigInt::from(k), BigInt::from(4)))
}

/// Class key of an arbitrary torus solution: phases of the characters that separate classes.
fn torus_key_of_matrix(d: &GroupDatum, tw: &AffineWeylElement, side: Side, g0: &Matrix) -> Result<Vec<BigRational>> {
    let p = torus_problem(d, tw, side)?;
    let rows = torus_character_rows(&p);
    rows.iter()
        .map(|row| {
            let mut v = GQ::one();
            for (j, e) in row.iter().enumerate() {
                v = &v * &g0.get(j, j).pow(*e).ok_or_else(|| Error::Membership("torus entry vanishes".into()))?;
            }
            quarter_phase(&v)
                .map(|q| &q - q.floor())
                .ok_or_else(|| Error::Unsupported(format!("character value {v} is not a fourth root of unity")))
        })
        .collect()
}

fn match_torus_class(
    d: &GroupDatum,
    tw: &AffineWeylElement,
    side: Side,
    g0: &Matrix,
) -> Result<IwahoriClass> {
    let key = torus_key_of_matrix(d, tw, side, g0)?;
    let p = torus_problem(d, tw, side)?;
    classify_iwahori(d, tw, side)?
        .into_iter()
        .find(|c| torus_class_key(&p, &c.g0) == key)
        .ok_or_else(|| Error::CheckFailed("reduced torus element matches no listed class".into()))
}

fn trunc(m: &LaurentMatrix, k: i64) -> LaurentMatrix {
    m.map(|x| Laurent { terms: x.terms.range(..k).map(|(e, c)| (*e, c.clone())).collect() })
}

/// log(1 + y) modulo t^k for y with nilpotent constant term.
fn trunc_log(u: &LaurentMatrix, k: i64) -> Result<LaurentMatrix> {
    let n = u.n;
    let y = u.sub(&Mat::identity(n));
    let mut pw: LaurentMatrix = Mat::identity(n);
    let mut acc: LaurentMatrix = Mat::zero(n);
    for m in 1..=(n as i64 * k.max(1) + 1) {
        pw = trunc(&pw.mul(&y), k);
        if pw.is_zero() {
            return Ok(acc);
        }
        let c = GQ::frac(if m % 2 == 1 { 1 } else { -1 }, m);
        acc = acc.add(&pw.scale(&c));
    }
    Err(Error::Membership("cofactor is not pro-unipotent".into()))
}

fn trunc_exp(a: &LaurentMatrix, k: i64) -> Result<LaurentMatrix> {
    let n = a.n;
    let mut term: LaurentMatrix = Mat::identity(n);
    let mut acc: LaurentMatrix = Mat::identity(n);
    for m in 1..=(n as i64 * k.max(1) + 1) {
        term = trunc(&term.mul(a), k).scale(&GQ::frac(1, m));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::Membership("exponent is not topologically nilpotent".into()))
}

fn check_positioned(g: &Matrix) -> Result<Matrix> {
    let g0 = diagonal_part(g);
    if g0.det_gauss().is_zero() {
        return Err(Error::Membership("torus part of the constant term is singular".into()));
    }
    Ok(g0)
}

/// Reduces t~w g, with g in the theta-side Iwahori stabilizer position, to t~w g0.
pub fn iwahori_reduce_theta(d: &GroupDatum, tw: &AffineWeylElement, g: &SeriesMatrix) -> Result<IwahoriCanonicalForm> {
    let n = d.n;
    if g.n != n {
        return Err(Error::InvalidArgument(format!("expected a {n}x{n} loop")));
    }
    let g = match g.prec() {
        Some(_) => g.clone(),
        None => g.with_prec(Some(IWAHORI_EXACT_PREC)),
    };
    let big_n = g.prec().unwrap();
    if !g.vanishes_below(0) {
        return Err(Error::Membership("cofactor has negative powers of t".into()));
    }
    let xt = tw.loop_matrix();
    let x = SeriesMatrix::from_laurent(&xt, None).mul(&g);
    let defect = x.mul(&d.apply_theta_series(&x)?).sub(&SeriesMatrix::from_const(&d.z_matrix()));
    if !defect.vanishes_below(defect.prec().unwrap_or(i64::MAX)) {
        return Err(Error::Membership("t~w g is not theta-anti-fixed".into()));
    }
    let g0 = check_positioned(&g.coeff_matrix(0))?;
    if !torus_equation_holds(d, tw, &g0)? {
        return Err(Error::Membership("torus part fails the torus equation".into()));
    }
    let x0 = xt.mul(&LaurentMatrix::from_const(&g0));
    let x0i = x0.inverse()?;
    let u = truncate_exact(&SeriesMatrix::from_const(&g0.inverse()?).mul(&g), big_n);
    let s = trunc_exp(&trunc_log(&u, big_n)?.scale(&GQ::frac(-1, 2)), big_n)?;
    let h = x0.mul(&s).mul(&x0i);
    if !h.is_polynomial_in_t() {
        return Err(Error::Membership("conjugator leaves the arc group".into()));
    }
    let spread = tw.lambda.iter().max().unwrap() - tw.lambda.iter().min().unwrap();
    let cap = big_n + spread + 1;
    let replay = SeriesMatrix::from_laurent(&xt.inverse()?, None)
        .mul(&twist_theta(d, &h, &x, cap)?)
        .sub(&SeriesMatrix::from_const(&g0));
    let residual = replay.prec().unwrap_or(big_n);
    if residual < 1 {
        return Err(Error::PrecisionFloor("no precision left after the Iwahori reduction".into()));
    }
    if !replay.vanishes_below(residual) {
        return Err(Error::CheckFailed("certificate replay does not reproduce t~w g0".into()));
    }
    let class = match_torus_class(d, tw, Side::Theta, &g0)?;
    Ok(IwahoriCanonicalForm { tw: tw.clone(), g0, class, certificate: h, residual_precision: Some(residual) })
}

/// Exact analogue on the eta side.
pub fn iwahori_reduce_eta(d: &GroupDatum, tw: &AffineWeylElement, g: &LaurentMatrix) -> Result<IwahoriCanonicalForm> {
    let n = d.n;
    if g.n != n {
        return Err(Error::InvalidArgument(format!("expected a {n}x{n} loop")));
    }
    let xt = tw.loop_matrix();
    let x = xt.mul(g);
    x.unit_det()?;
    if x.mul(&d.apply_eta(&x)?) != d.z_loop() {
        return Err(Error::Membership("t~w g is not eta-anti-fixed".into()));
    }
    let g0 = check_positioned(&g.coeff_matrix(0))?;
    let x0 = xt.mul(&LaurentMatrix::from_const(&g0));
    if x0.mul(&d.apply_eta(&x0)?) != d.z_loop() {
        return Err(Error::Membership("torus part fails the torus equation".into()));
    }
    let u = LaurentMatrix::from_const(&g0.inverse()?).mul(g);
    let s = unipotent_log(&u)
        .and_then(|a| nilpotent_exp(&a.scale(&GQ::frac(-1, 2))))
        .ok_or_else(|| Error::Membership("cofactor is not unipotent".into()))?;
    let h = x0.mul(&s).mul(&x0.inverse()?);
    if twist_eta(d, &h, &x)? != x0 {
        return Err(Error::CheckFailed("certificate replay does not reproduce t~w g0".into()));
    }
    let class = match_torus_class(d, tw, Side::Eta, &g0)?;
    Ok(IwahoriCanonicalForm { tw: tw.clone(), g0, class, certificate: h, residual_precision: None })
}

/// The spherical class containing an Iwahori class, via the theta-side canonicalizer.
pub fn spherical_projection(cls: &IwahoriClass) -> Result<SphericalClass> {
    let d = &cls.datum;
    let rep = cls
        .loop_rep
        .as_ref()
        .ok_or_else(|| Error::Unsupported("representative has entries outside Q(i)".into()))?;
    let lam = cls.tw.dominant_lambda();
    let spread = lam[0] - lam[lam.len() - 1];
    let x = SeriesMatrix::from_laurent(rep, None).with_prec(Some(lam[0] + spread + 8));
    let cf = canonicalize_theta(d, &x)?;
    if cf.lambda != lam {
        return Err(Error::CheckFailed("projection landed on a different coweight".into()));
    }
    Ok(cf.class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_datum, Family};
    use crate::sample::{random_arc, random_poly_unit};
    use crate::spherical::enumerate_admissible;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mono(c: i64, e: i64) -> Laurent {
        Laurent::monomial(GQ::int(c), e)
    }

    fn lm(rows: Vec<Vec<Laurent>>) -> LaurentMatrix {
        Mat::from_rows(rows)
    }

    fn exact(m: &LaurentMatrix) -> SeriesMatrix {
        SeriesMatrix::from_laurent(m, None)
    }

    fn theta_twist(d: &GroupDatum, h: &LaurentMatrix, x: &LaurentMatrix, prec: i64) -> SeriesMatrix {
        let lo = x.min_exp().unwrap_or(0).min(0);
        twist_theta(d, h, &exact(x), prec - lo).unwrap().with_prec(Some(prec))
    }

    #[test]
    fn split_regular_row() {
        let d = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let x = Mat::diag(vec![mono(1, 2), mono(1, 1)]);
        let cf = canonicalize_theta(&d, &exact(&x)).unwrap();
        assert_eq!(cf.lambda, vec![2, 1]);
        assert_eq!(cf.class.component_group, vec![2, 2]);
        assert_eq!(classify_theta(&d, &AdmissibleCoweight::new(vec![2, 1])).unwrap().len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = random_arc(&mut rng, 2, 7);
            let y = theta_twist(&d, &h, &x, 12);
            let c = canonicalize_theta(&d, &y).unwrap();
            assert_eq!((c.lambda, c.class.label), (cf.lambda.clone(), cf.class.label.clone()));
        }
    }

    #[test]
    fn identity_loops() {
        for fam in [Family::SplitGl, Family::Unitary] {
            let d = build_datum(fam, 2, 1, None).unwrap();
            let one: LaurentMatrix = Mat::identity(2);
            let c = canonicalize_theta(&d, &exact(&one)).unwrap();
            assert_eq!(c.lambda, vec![0, 0]);
            let e = canonicalize_eta(&d, &one).unwrap();
            assert_eq!(e.lambda, vec![0, 0]);
            assert_eq!(tau_eta(&d, &one).unwrap(), one);
            assert_eq!(tau_theta(&d, &one, 8).unwrap(), exact(&one));
        }
    }

    #[test]
    fn quaternionic_line_on_split_minus() {
        let d = build_datum(Family::SplitGl, 2, -1, None).unwrap();
        let x = lm(vec![vec![Laurent::zero(), mono(1, 1)], vec![mono(-1, 1), Laurent::zero()]]);
        let cf = canonicalize_eta(&d, &x).unwrap();
        assert_eq!(cf.lambda, vec![1, 1]);
        assert_eq!(cf.class.aut_label.as_deref(), Some("GL1(H)"));
        assert!(cf.class.component_group.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let h = random_poly_unit(&mut rng, 2, 3);
            let y = twist_eta(&d, &h, &x).unwrap();
            let c = canonicalize_eta(&d, &y).unwrap();
            assert_eq!((c.lambda, c.class.label), (cf.lambda.clone(), cf.class.label.clone()));
        }
    }

    #[test]
    fn closing_remark_cosets() {
        let d = build_datum(Family::Unitary, 2, -1, None).unwrap();
        let tau = |g: &LaurentMatrix| tau_theta(&d, g, 16).unwrap();
        let dt1 = Mat::diag(vec![mono(1, 1), mono(1, 0)]);
        let dtt = Mat::diag(vec![mono(1, 1), mono(1, 1)]);
        let one: LaurentMatrix = Mat::identity(2);
        assert_eq!(tau(&dt1), exact(&Mat::diag(vec![mono(-1, 0), mono(1, 0)])));
        assert_eq!(tau(&dtt), exact(&Mat::diag(vec![mono(-1, 0), mono(-1, 0)])));
        let label = |x: &SeriesMatrix| {
            let c = canonicalize_theta(&d, x).unwrap();
            (c.lambda, c.class.label)
        };
        let swap = lm(vec![vec![Laurent::zero(), mono(1, 0)], vec![mono(1, 0), Laurent::zero()]]);
        let a = label(&tau(&dt1));
        assert_eq!(a, label(&exact(&swap)));
        let b = label(&tau(&one));
        let c = label(&tau(&dtt));
        assert_eq!(c, label(&exact(&one.neg())));
        let mut seen = vec![a, b, c];
        for mu in 1..=3 {
            let g = lm(vec![vec![mono(1, 0), mono(1, 1)], vec![Laurent::zero(), mono(1, mu + 1)]]);
            let r = label(&tau(&g));
            assert_eq!(r.0, vec![mu, -mu]);
            let sign = if mu % 2 == 0 { 1 } else { -1 };
            let rep = lm(vec![vec![Laurent::zero(), mono(1, mu)], vec![mono(sign, -mu), Laurent::zero()]]);
            assert_eq!(r, label(&exact(&rep)));
            seen.push(r);
        }
        let mut uniq = seen.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), seen.len());
    }

    /// Catalog representatives are fixed points of both canonicalizers.
    #[test]
    fn representatives_are_canonical() {
        for fam in [Family::SplitGl, Family::Unitary, Family::QuaternionicGl] {
            for eps in [1, -1] {
                let n = if fam == Family::QuaternionicGl { 4 } else { 3 };
                let d = build_datum(fam, n, eps, None).unwrap();
                for cw in enumerate_admissible(&d, 2).unwrap() {
                    for cls in classify_theta(&d, &cw).unwrap() {
                        let c = canonicalize_theta(&d, &exact(&cls.loop_rep)).unwrap();
                        assert_eq!((c.lambda.clone(), c.class.label.clone()), (cls.lambda.lambda.clone(), cls.label.clone()));
                        let e = canonicalize_eta(&d, &cls.loop_rep).unwrap();
                        assert_eq!((e.lambda, e.class.label), (cls.lambda.lambda.clone(), cls.label.clone()));
                    }
                }
            }
        }
    }

    fn in_iwahori(m: &LaurentMatrix) -> bool {
        m.is_polynomial_in_t() && {
            let c = m.coeff_matrix(0);
            (0..c.n).all(|i| !c.get(i, i).is_zero() && (0..i).all(|j| c.get(i, j).is_zero()))
        }
    }

    /// Random element of I intersected with Ad_tw theta(I), built from root subgroups and the torus.
    fn random_stabilizer(d: &GroupDatum, tw: &AffineWeylElement, rng: &mut ChaCha8Rng) -> LaurentMatrix {
        let n = d.n;
        let xt = tw.loop_matrix();
        let xti = xt.inverse().unwrap();
        let ok = |h: &LaurentMatrix| {
            in_iwahori(h) && in_iwahori(&d.apply_theta(&xti.mul(h).mul(&xt)).unwrap())
        };
        let mut h: LaurentMatrix = Mat::diag((0..n).map(|_| Laurent::constant(GQ::int([1, -1, 2][rng.gen_range(0..3)]))).collect());
        let mut added = 0;
        while added < 4 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let mut e: LaurentMatrix = Mat::identity(n);
            e.set(i, j, mono(rng.gen_range(1..=3), rng.gen_range(0..4)));
            if ok(&e) {
                h = h.mul(&e);
                added += 1;
            }
        }
        assert!(ok(&h));
        h
    }

    #[test]
    fn iwahori_perturbed_representative() {
        let d = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mu in 0..=2 {
            let tw = AffineWeylElement::new(vec![mu, mu], vec![1, 0]);
            let x = lm(vec![vec![Laurent::zero(), mono(1, mu)], vec![mono(1, mu), Laurent::zero()]]);
            let xti = tw.loop_matrix().inverse().unwrap();
            let g = xti.mul(&x).as_const().unwrap();
            let base = match_torus_class(&d, &tw, Side::Theta, &g).unwrap();
            for _ in 0..10 {
                let h = random_stabilizer(&d, &tw, &mut rng);
                let y = h.mul(&x).mul(&d.apply_theta(&h).unwrap().inverse().unwrap());
                let gp = xti.mul(&y);
                let r = iwahori_reduce_theta(&d, &tw, &exact(&gp)).unwrap();
                assert_eq!(r.class.g0, base.g0);
                assert!(r.residual_precision.unwrap() >= 1);
            }
        }
    }

    #[test]
    fn iwahori_identity_and_violation() {
        let d = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let tw = AffineWeylElement::identity(2);
        let one: LaurentMatrix = Mat::identity(2);
        let r = iwahori_reduce_theta(&d, &tw, &exact(&one)).unwrap();
        assert!(r.g0.is_identity());
        let e = iwahori_reduce_eta(&d, &tw, &one).unwrap();
        assert!(e.g0.is_identity());
        let bad = lm(vec![vec![mono(1, 0), mono(1, 1)], vec![Laurent::zero(), mono(1, 0)]]);
        assert!(matches!(iwahori_reduce_theta(&d, &tw, &exact(&bad)), Err(Error::Membership(_))));
        assert!(matches!(iwahori_reduce_eta(&d, &tw, &bad), Err(Error::Membership(_))));
    }

    #[test]
    fn precision_and_anti_fixed_errors() {
        let d = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let x = Mat::diag(vec![mono(1, 2), mono(1, 1)]);
        let short = exact(&x).with_prec(Some(4));
        assert!(matches!(canonicalize_theta(&d, &short), Err(Error::PrecisionFloor(_))));
        let bad = lm(vec![vec![mono(1, 0), mono(1, 1)], vec![Laurent::zero(), mono(1, 0)]]);
        assert!(matches!(canonicalize_theta(&d, &exact(&bad)), Err(Error::NotAntiFixed(_))));
        assert!(matches!(canonicalize_eta(&d, &bad), Err(Error::NotAntiFixed(_))));
    }
}
