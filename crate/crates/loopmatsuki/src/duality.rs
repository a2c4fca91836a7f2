//! Matching of theta-side and eta-side classes, sampled intersection checks and the
//! finite-dimensional specialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::{canonicalize_eta, canonicalize_theta, iwahori_reduce_eta, iwahori_reduce_theta, twist_eta};
use crate::error::{Error, Result};
use crate::group::GroupDatum;
use crate::iwahori::{classify_iwahori, enumerate_admissible_tw, IwahoriClass};
use crate::laurent::LaurentMatrix;
use crate::matrix::{cayley_unitary, Matrix};
use crate::sample::random_signed_permutation;
use crate::scalar::GQ;
use crate::series::SeriesMatrix;
use crate::spherical::{
    classify_eta, classify_theta, enumerate_admissible, eta_anti_fixed, theta_anti_fixed, Side, SphericalClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Spherical,
    Iwahori,
}

#[derive(Clone, Debug)]
pub enum PairClasses {
    Spherical { theta: SphericalClass, eta: SphericalClass },
    Iwahori { theta: IwahoriClass, eta: IwahoriClass },
}

#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub level: Level,
    pub classes: PairClasses,
    /// Shared representative, anti-fixed for both involutions.
    pub common_rep: Option<LaurentMatrix>,
}

impl MatchedPair {
    pub fn datum(&self) -> &GroupDatum {
        match &self.classes {
            PairClasses::Spherical { theta, .. } => &theta.datum,
            PairClasses::Iwahori { theta, .. } => &theta.datum,
        }
    }

    pub fn component_group(&self) -> &[i64] {
        match &self.classes {
            PairClasses::Spherical { theta, .. } => &theta.component_group,
            PairClasses::Iwahori { theta, .. } => &theta.component_group,
        }
    }
}

fn check_common(d: &GroupDatum, x: &LaurentMatrix) -> Result<()> {
    if !theta_anti_fixed(d, x)? || !eta_anti_fixed(d, x)? {
        return Err(Error::CheckFailed("common representative is not anti-fixed for both involutions".into()));
    }
    Ok(())
}

/// Pairs theta and eta spherical classes with |lambda_i| <= bound by label.
pub fn match_spherical(d: &GroupDatum, bound: i64) -> Result<Vec<MatchedPair>> {
    let mut out = Vec::new();
    for cw in enumerate_admissible(d, bound)? {
        let th = classify_theta(d, &cw)?;
        let mut et = classify_eta(d, &cw)?;
        if th.len() != et.len() {
            return Err(Error::LabelMismatch(format!("class counts differ at {:?}", cw.lambda)));
        }
        for t in th {
            let pos = et
                .iter()
                .position(|e| e.label == t.label)
                .ok_or_else(|| Error::LabelMismatch(format!("no eta class labelled {} at {:?}", t.label, cw.lambda)))?;
            let e = et.remove(pos);
            if e.component_group != t.component_group {
                return Err(Error::LabelMismatch(format!("component groups differ for {}", t.label)));
            }
            check_common(d, &t.loop_rep)?;
            out.push(MatchedPair {
                level: Level::Spherical,
                common_rep: Some(t.loop_rep.clone()),
                classes: PairClasses::Spherical { theta: t, eta: e },
            });
        }
    }
    Ok(out)
}

/// Pairs Iwahori classes over every admissible t~w with |lambda_i| <= bound.
pub fn match_iwahori(d: &GroupDatum, bound: i64) -> Result<Vec<MatchedPair>> {
    let mut out = Vec::new();
    for tw in enumerate_admissible_tw(d, bound)? {
        let th = classify_iwahori(d, &tw, Side::Theta)?;
        let et = classify_iwahori(d, &tw, Side::Eta)?;
        if th.len() != et.len() {
            return Err(Error::LabelMismatch(format!("class counts differ at {:?} {:?}", tw.lambda, tw.w)));
        }
        for (t, e) in th.into_iter().zip(et) {
            if t.g0 != e.g0 || t.component_group != e.component_group {
                return Err(Error::LabelMismatch(format!("torus classes differ at {:?} {:?}", tw.lambda, tw.w)));
            }
            if let Some(x) = &t.loop_rep {
                check_common(d, x)?;
            }
            out.push(MatchedPair {
                level: Level::Iwahori,
                common_rep: t.loop_rep.clone(),
                classes: PairClasses::Iwahori { theta: t, eta: e },
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IntersectionReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

impl IntersectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn small_skew_hermitian<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut s = Matrix::zero(n);
    for i in 0..n {
        s.set(i, i, GQ::complex(0, 1, rng.gen_range(-5..=5), rng.gen_range(1..=5)));
        for j in i + 1..n {
            let v = GQ::complex(rng.gen_range(-5..=5), rng.gen_range(1..=5), rng.gen_range(-5..=5), rng.gen_range(1..=5));
            s.set(i, j, v.clone());
            s.set(j, i, -v.conj());
        }
    }
    s
}

/// Compact constant samples: signed permutations, and Cayley unitaries for spherical pairs;
/// diagonal unitaries for Iwahori pairs. The first sample is always the identity.
fn compact_sample<R: Rng>(rng: &mut R, n: usize, level: Level, idx: usize) -> Result<Matrix> {
    if idx == 0 {
        return Ok(Matrix::identity(n));
    }
    match level {
        Level::Iwahori => {
            let units = [GQ::one(), GQ::i(), GQ::int(-1), -GQ::i(), GQ::complex(3, 5, 4, 5), GQ::complex(-5, 13, 12, 13)];
            Ok(Matrix::diag((0..n).map(|_| units[rng.gen_range(0..units.len())].clone()).collect()))
        }
        Level::Spherical => {
            if idx % 2 == 1 {
                Ok(random_signed_permutation(rng, n))
            } else {
                cayley_unitary(&small_skew_hermitian(rng, n))
            }
        }
    }
}

fn check_sample(pair: &MatchedPair, x: &LaurentMatrix, k: &Matrix) -> Result<()> {
    let d = pair.datum();
    let kl = LaurentMatrix::from_const(k);
    let via_theta = kl.mul(x).mul(&LaurentMatrix::from_const(&d.theta0(k)?.inverse()?));
    let via_eta = twist_eta(d, &kl, x)?;
    if via_theta != via_eta {
        return Err(Error::CheckFailed("theta and eta twists by a compact element differ".into()));
    }
    match &pair.classes {
        PairClasses::Spherical { theta, eta } => {
            let ct = canonicalize_theta(d, &SeriesMatrix::from_laurent(&via_theta, None))?;
            let ce = canonicalize_eta(d, &via_eta)?;
            if ct.class.label != theta.label || ce.class.label != eta.label || ct.lambda != theta.lambda.lambda {
                return Err(Error::LabelMismatch(format!(
                    "twist canonicalizes to {} / {} instead of {}",
                    ct.class.label, ce.class.label, theta.label
                )));
            }
        }
        PairClasses::Iwahori { theta, eta } => {
            let xti = theta.tw.loop_matrix().inverse()?;
            let g = xti.mul(&via_theta);
            let rt = iwahori_reduce_theta(d, &theta.tw, &SeriesMatrix::from_laurent(&g, None))?;
            let re = iwahori_reduce_eta(d, &eta.tw, &g)?;
            if rt.class.g0 != theta.g0 || re.class.g0 != eta.g0 {
                return Err(Error::LabelMismatch("torus twist lands in another class".into()));
            }
        }
    }
    Ok(())
}

/// Twists the common representative by compact elements and checks that both twists agree
/// and stay in the paired classes.
pub fn verify_intersection(pair: &MatchedPair, samples: usize, seed: u64) -> Result<IntersectionReport> {
    let x = pair
        .common_rep
        .as_ref()
        .ok_or_else(|| Error::Unsupported("pair has no exact common representative".into()))?;
    let n = x.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IntersectionReport { samples, failures: Vec::new() };
    for idx in 0..samples {
        let k = compact_sample(&mut rng, n, pair.level, idx)?;
        if let Err(e) = check_sample(pair, x, &k) {
            report.failures.push(format!("sample {idx}: {e}"));
        }
    }
    Ok(report)
}

/// The lambda = 0 part of both matchings: classes on G / K and on the flag variety.
#[derive(Clone, Debug)]
pub struct FiniteMatsuki {
    pub spherical: Vec<MatchedPair>,
    pub borel: Vec<MatchedPair>,
}

pub fn finite_matsuki(d: &GroupDatum) -> Result<FiniteMatsuki> {
    Ok(FiniteMatsuki { spherical: match_spherical(d, 0)?, borel: match_iwahori(d, 0)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::spherical_projection;
    use crate::group::{build_datum, Family};

    fn datum(f: Family, n: usize, eps: i64) -> GroupDatum {
        build_datum(f, n, eps, None).unwrap()
    }

    #[test]
    fn split_one_pair_per_coweight() {
        let d = datum(Family::SplitGl, 2, 1);
        let pairs = match_spherical(&d, 2).unwrap();
        let cws = enumerate_admissible(&d, 2).unwrap();
        assert_eq!(pairs.len(), cws.len());
    }

    #[test]
    fn small_matchings() {
        let u = datum(Family::Unitary, 2, 1);
        let p = match_spherical(&u, 0).unwrap();
        assert_eq!(p.len(), 3);
        let q = datum(Family::QuaternionicGl, 2, 1);
        assert_eq!(match_spherical(&q, 0).unwrap().len(), 1);
        let id = match_iwahori(&datum(Family::SplitGl, 2, 1), 0).unwrap();
        assert!(id.iter().any(|p| match &p.classes {
            PairClasses::Iwahori { theta, .. } => theta.tw.w == vec![0, 1] && theta.g0.exps.iter().all(|e| e == &num::BigRational::from_integer(0.into())),
            _ => false,
        }));
        let ui = match_iwahori(&u, 1).unwrap();
        let tws: Vec<(Vec<i64>, Vec<usize>)> = ui
            .iter()
            .map(|p| match &p.classes {
                PairClasses::Iwahori { theta, .. } => (theta.tw.lambda.clone(), theta.tw.w.clone()),
                _ => unreachable!(),
            })
            .collect();
        assert!(tws.contains(&(vec![0, 0], vec![0, 1])));
        assert!(tws.contains(&(vec![1, -1], vec![1, 0])));
    }

    #[test]
    fn finite_counts() {
        assert_eq!(finite_matsuki(&datum(Family::SplitGl, 2, 1)).unwrap().borel.len(), 2);
        assert_eq!(finite_matsuki(&datum(Family::Unitary, 2, 1)).unwrap().spherical.len(), 3);
        let one = finite_matsuki(&datum(Family::SplitGl, 1, 1)).unwrap();
        assert_eq!(one.spherical.len(), 1);
        assert_eq!(one.borel.len(), 1);
    }

    #[test]
    fn intersections_pass() {
        let d = datum(Family::SplitGl, 2, 1);
        let pairs = match_spherical(&d, 1).unwrap();
        let p = pairs
            .iter()
            .find(|p| matches!(&p.classes, PairClasses::Spherical { theta, .. } if theta.lambda.lambda == vec![1, 1]))
            .unwrap();
        let r = verify_intersection(p, 20, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let u = datum(Family::Unitary, 2, 1);
        for p in match_spherical(&u, 1).unwrap() {
            let r = verify_intersection(&p, 8, 1).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            // w1 itself is compact
            let x = p.common_rep.as_ref().unwrap();
            check_sample(&p, x, &u.w1).unwrap();
        }
        for p in match_iwahori(&u, 1).unwrap() {
            let r = verify_intersection(&p, 6, 2).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    /// Iwahori classes project onto spherical classes, and every spherical class is reached.
    #[test]
    fn iwahori_refines_spherical() {
        for (f, n) in [(Family::SplitGl, 2), (Family::Unitary, 2), (Family::SplitGl, 3), (Family::Unitary, 3)] {
            for eps in [1, -1] {
                let d = datum(f, n, eps);
                let sph = match_spherical(&d, 2).unwrap();
                let mut hit = vec![false; sph.len()];
                for p in match_iwahori(&d, 2).unwrap() {
                    let PairClasses::Iwahori { theta, eta } = &p.classes else { unreachable!() };
                    if theta.loop_rep.is_none() {
                        continue;
                    }
                    let a = spherical_projection(theta).unwrap();
                    let b = spherical_projection(eta).unwrap();
                    assert_eq!(a.label, b.label);
                    let i = sph
                        .iter()
                        .position(|s| match &s.classes {
                            PairClasses::Spherical { theta, .. } => theta.lambda == a.lambda && theta.label == a.label,
                            _ => false,
                        })
                        .unwrap();
                    hit[i] = true;
                }
                assert!(hit.iter().all(|h| *h), "{f:?} n={n} eps={eps}");
            }
        }
    }
}
