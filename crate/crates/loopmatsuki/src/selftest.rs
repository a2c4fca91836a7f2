//! The rank-two reproduction suite: worked tables for the four real forms of GL2, the
//! coset example, and the duality, canonicalizer, Kottwitz and finite-level property suites.
//! Shared by the `selftest` command and the acceptance test target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bundles::{
    class_to_bundle, enumerate_kottwitz, kottwitz_act, kottwitz_to_loop, kottwitz_validate, loop_to_parabolic_bundle,
    Lines,
};
use crate::canonical::{
    canonicalize_eta, canonicalize_theta, iwahori_reduce_eta, iwahori_reduce_theta, replay_eta, replay_theta, tau_theta,
    twist_eta, twist_theta,
};
use crate::duality::{finite_matsuki, match_iwahori, match_spherical, verify_intersection, PairClasses};
use crate::error::Result;
use crate::group::{build_datum, pure_inner_twist, Family, GroupDatum};
use crate::io::parse_laurent;
use crate::iwahori::{classify_iwahori, enumerate_admissible_tw};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::Mat;
use crate::sample::{random_arc, random_poly_unit, random_signed_permutation};
use crate::scalar::GQ;
use crate::series::SeriesMatrix;
use crate::spherical::{classify_eta, classify_theta, enumerate_admissible, AdmissibleCoweight, Side};

const MAX_LISTED_FAILURES: usize = 40;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("[{status}] {:>2}. {} ({} checks, {} failed)", self.id, self.title, self.checks, self.failed)
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(msg);
        }
    }
}

fn run(id: u32, title: &str, body: impl FnOnce(&mut Tally) -> Result<()>) -> CriterionReport {
    let mut t = Tally::default();
    if let Err(e) = body(&mut t) {
        t.checks += 1;
        t.fail(format!("aborted: {e}"));
    }
    CriterionReport { id, title: title.to_string(), checks: t.checks, failed: t.failed, failures: t.failures }
}

/// Loop from row-major entries in the text form of the io module.
fn lm(entries: &[&str]) -> LaurentMatrix {
    let n = (entries.len() as f64).sqrt() as usize;
    let parsed: Vec<Laurent> = entries.iter().map(|s| parse_laurent(s).expect("well-formed literal")).collect();
    Mat::from_fn(n, |i, j| parsed[i * n + j].clone())
}

fn texp(e: i64) -> String {
    format!("t^{e}")
}

fn neg_texp(e: i64) -> String {
    format!("-t^{e}")
}

fn int_matrix(rows: &[&[i64]]) -> Matrix {
    Matrix::from_ints(rows)
}

fn exact(x: &LaurentMatrix) -> SeriesMatrix {
    SeriesMatrix::from_laurent(x, None)
}

fn cg_name(v: &[i64]) -> String {
    format!("{v:?}")
}

/// GL2 real forms at one epsilon: split, quaternionic, U(2) and its pure inner twist U(1,1).
pub fn catalog(epsilon: i64) -> Result<Vec<(String, GroupDatum)>> {
    let u2 = build_datum(Family::Unitary, 2, epsilon, None)?;
    let u11 = pure_inner_twist(&u2, &int_matrix(&[&[1, 0], &[0, -1]]))?;
    Ok(vec![
        ("GL2(R)".into(), build_datum(Family::SplitGl, 2, epsilon, None)?),
        ("GL1(H)".into(), build_datum(Family::QuaternionicGl, 2, epsilon, None)?),
        ("U(2)".into(), u2),
        ("U(1,1)".into(), u11),
    ])
}

/// Expected spherical row at lambda: (representative, component group, gluing matrix, aut label).
type Expected = Option<(LaurentMatrix, Vec<i64>, Matrix, String)>;

fn check_spherical_table(t: &mut Tally, d: &GroupDatum, bound: i64, expected: impl Fn(i64, i64) -> Expected) -> Result<()> {
    let all: Vec<Vec<i64>> = (-bound..=bound).flat_map(|a| (-bound..=a).map(move |b| vec![a, b])).collect();
    let admissible: Vec<Vec<i64>> = enumerate_admissible(d, bound)?.into_iter().map(|c| c.lambda).collect();
    for lam in all {
        let exp = expected(lam[0], lam[1]);
        if !admissible.contains(&lam) {
            t.check(exp.is_none(), || format!("{lam:?} should be admissible"));
            continue;
        }
        let cw = AdmissibleCoweight::new(lam.clone());
        let th = classify_theta(d, &cw)?;
        let et = classify_eta(d, &cw)?;
        match exp {
            None => {
                t.check(th.is_empty() && et.is_empty(), || format!("{lam:?} should be empty"));
            }
            Some((rep, cg, c, aut)) => {
                t.check(th.len() == 1 && et.len() == 1, || format!("{lam:?}: {} / {} classes", th.len(), et.len()));
                if th.len() != 1 || et.len() != 1 {
                    continue;
                }
                t.check(th[0].loop_rep == rep, || format!("{lam:?}: representative {:?}", th[0].loop_rep));
                t.check(et[0].loop_rep == rep, || format!("{lam:?}: eta representative {:?}", et[0].loop_rep));
                t.check(th[0].component_group == cg && et[0].component_group == cg, || {
                    format!("{lam:?}: component groups {} / {}", cg_name(&th[0].component_group), cg_name(&et[0].component_group))
                });
                let b = class_to_bundle(&et[0])?;
                t.check(b.splitting == lam, || format!("{lam:?}: splitting {:?}", b.splitting));
                t.check(b.c == c, || format!("{lam:?}: gluing {:?}", b.c));
                t.check(b.aut_label == aut, || format!("{lam:?}: aut {}", b.aut_label));
            }
        }
    }
    Ok(())
}

fn diag_loop(a: i64, b: i64) -> LaurentMatrix {
    lm(&[&texp(a), "0", "0", &texp(b)])
}

/// Split real form, epsilon = 1: spherical, Iwahori and bundle rows.
pub fn criterion_1(_seed: u64) -> CriterionReport {
    run(1, "GL2(R), epsilon=1: spherical and Iwahori tables, bundle and parabolic rows", |t| {
        let d = build_datum(Family::SplitGl, 2, 1, None)?;
        check_spherical_table(t, &d, 3, |a, b| {
            let (cg, aut) = if a == b { (vec![2], "GL2(R)") } else { (vec![2, 2], "R^x x R^x") };
            Some((diag_loop(a, b), cg, Matrix::identity(2), aut.into()))
        })?;
        let tws = enumerate_admissible_tw(&d, 3)?;
        let mut got: Vec<(Vec<i64>, Vec<usize>)> = tws.iter().map(|w| (w.lambda.clone(), w.w.clone())).collect();
        let mut want = Vec::new();
        for a in -3..=3 {
            for b in -3..=3 {
                want.push((vec![a, b], vec![0, 1]));
            }
            want.push((vec![a, a], vec![1, 0]));
        }
        got.sort();
        want.sort();
        t.check(got == want, || format!("admissible t~w: {} elements", got.len()));
        for tw in &tws {
            let swap = tw.w[0] == 1;
            let mu = tw.lambda[0];
            let x = if swap { lm(&["0", &texp(mu), &texp(mu), "0"]) } else { diag_loop(tw.lambda[0], tw.lambda[1]) };
            let g = tw.loop_matrix().inverse()?.mul(&x);
            let cg: Vec<i64> = if swap { vec![] } else { vec![2, 2] };
            for side in [Side::Theta, Side::Eta] {
                let cls = classify_iwahori(&d, tw, side)?;
                t.check(cls.len() == 1, || format!("{:?} {:?}: {} classes", tw.lambda, tw.w, cls.len()));
                if cls.len() != 1 {
                    continue;
                }
                t.check(cls[0].component_group == cg, || format!("{:?} {:?}: stabilizer {:?}", tw.lambda, tw.w, cls[0].component_group));
                let g0 = match side {
                    Side::Theta => iwahori_reduce_theta(&d, tw, &exact(&g))?.class.g0,
                    Side::Eta => iwahori_reduce_eta(&d, tw, &g)?.class.g0,
                };
                t.check(g0 == cls[0].g0, || format!("{:?} {:?}: listed representative lies in another class", tw.lambda, tw.w));
            }
            let b = loop_to_parabolic_bundle(&d, tw, &g)?;
            let (lines, aut) = if swap {
                (Lines { l0: vec![1, 0], linf: vec![0, 1] }, "C^x")
            } else {
                (Lines { l0: vec![1, 0], linf: vec![1, 0] }, "R^x x R^x")
            };
            t.check(b.c.is_identity(), || format!("{:?} {:?}: parabolic gluing {:?}", tw.lambda, tw.w, b.c));
            t.check(b.lines.as_ref() == Some(&lines), || format!("{:?} {:?}: lines {:?}", tw.lambda, tw.w, b.lines));
            t.check(b.aut_label == aut, || format!("{:?} {:?}: aut {}", tw.lambda, tw.w, b.aut_label));
        }
        Ok(())
    })
}

/// Split real form, epsilon = -1.
pub fn criterion_2(_seed: u64) -> CriterionReport {
    run(2, "GL2(R), epsilon=-1: parity emptiness, representatives, twistor bundle rows", |t| {
        let d = build_datum(Family::SplitGl, 2, -1, None)?;
        check_spherical_table(t, &d, 3, |a, b| {
            let even = a % 2 == 0 && b % 2 == 0;
            if a == b && !even {
                Some((lm(&["0", &texp(a), &neg_texp(a), "0"]), vec![], int_matrix(&[&[0, 1], &[-1, 0]]), "GL1(H)".into()))
            } else if a == b {
                Some((diag_loop(a, b), vec![2], Matrix::identity(2), "GL2(R)".into()))
            } else if even {
                Some((diag_loop(a, b), vec![2, 2], Matrix::identity(2), "R^x x R^x".into()))
            } else {
                None
            }
        })
    })
}

/// Quaternionic real form, both epsilon.
pub fn criterion_3(_seed: u64) -> CriterionReport {
    run(3, "GL1(H): epsilon=1 and epsilon=-1 tables and bundle rows", |t| {
        let d = build_datum(Family::QuaternionicGl, 2, 1, None)?;
        check_spherical_table(t, &d, 3, |a, b| {
            (a == b).then(|| (diag_loop(a, b), vec![], Matrix::identity(2), "GL1(H)".to_string()))
        })?;
        let d = build_datum(Family::QuaternionicGl, 2, -1, None)?;
        check_spherical_table(t, &d, 3, |a, b| {
            let odd = a % 2 != 0 && b % 2 != 0;
            if a == b && !odd && b % 2 == 0 {
                Some((diag_loop(a, b), vec![], Matrix::identity(2), "GL1(H)".into()))
            } else if a == b && odd {
                Some((lm(&[&texp(a), "0", "0", &neg_texp(a)]), vec![2], int_matrix(&[&[1, 0], &[0, -1]]), "GL2(R)".into()))
            } else if odd {
                Some((lm(&["0", &neg_texp(a), &texp(b), "0"]), vec![2, 2], int_matrix(&[&[0, -1], &[1, 0]]), "R^x x R^x".into()))
            } else {
                None
            }
        })
    })
}

type Row = (Side, Vec<i64>, String, Vec<i64>, Option<String>);

fn table_rows(d: &GroupDatum, bound: i64) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for cw in enumerate_admissible(d, bound)? {
        for c in classify_theta(d, &cw)?.into_iter().chain(classify_eta(d, &cw)?) {
            rows.push((c.side, cw.lambda.clone(), c.label.clone(), c.component_group.clone(), c.aut_label.clone()));
        }
    }
    rows.sort();
    Ok(rows)
}

/// Unitary forms, both epsilon, and the pure inner twist to U(1,1).
pub fn criterion_4(_seed: u64) -> CriterionReport {
    run(4, "U(2) and U(1,1): lambda=0 forms, (mu,-mu) rows, pure inner twist", |t| {
        for eps in [1, -1] {
            let d = build_datum(Family::Unitary, 2, eps, None)?;
            let lams: Vec<Vec<i64>> = enumerate_admissible(&d, 3)?.into_iter().map(|c| c.lambda).collect();
            t.check(lams == vec![vec![0, 0], vec![1, -1], vec![2, -2], vec![3, -3]], || format!("eps {eps}: admissible {lams:?}"));
            let zero = AdmissibleCoweight::new(vec![0, 0]);
            let th = classify_theta(&d, &zero)?;
            let et = classify_eta(&d, &zero)?;
            t.check(th.len() == 3 && et.len() == 3, || format!("eps {eps}: {} / {} classes at 0", th.len(), et.len()));
            let mut got: Vec<(String, Matrix, Vec<i64>)> = Vec::new();
            for c in &et {
                let b = class_to_bundle(c)?;
                got.push((b.aut_label, b.c, c.component_group.clone()));
            }
            got.sort_by(|a, b| a.0.cmp(&b.0));
            let want = vec![
                ("U(0,2)".to_string(), Matrix::identity(2).neg(), vec![]),
                ("U(1,1)".to_string(), int_matrix(&[&[0, 1], &[1, 0]]), vec![]),
                ("U(2,0)".to_string(), Matrix::identity(2), vec![]),
            ];
            t.check(got == want, || format!("eps {eps}: lambda=0 bundle rows {got:?}"));
            let mut reps: Vec<Matrix> = th.iter().filter_map(|c| c.loop_rep.as_const()).collect();
            reps.sort_by_key(|m| m.to_strings());
            let mut listed = vec![int_matrix(&[&[0, 1], &[1, 0]]), Matrix::identity(2), Matrix::identity(2).neg()];
            listed.sort_by_key(|m| m.to_strings());
            t.check(reps == listed, || format!("eps {eps}: theta representatives at 0"));
            for mu in 1..=3 {
                let cw = AdmissibleCoweight::new(vec![mu, -mu]);
                let th = classify_theta(&d, &cw)?;
                let et = classify_eta(&d, &cw)?;
                t.check(th.len() == 1 && et.len() == 1, || format!("eps {eps}, mu {mu}: class counts"));
                if th.len() != 1 || et.len() != 1 {
                    continue;
                }
                let sign = if eps == -1 && mu % 2 == 1 { -1 } else { 1 };
                let lower = if sign == 1 { texp(-mu) } else { neg_texp(-mu) };
                let rep = lm(&["0", &texp(mu), &lower, "0"]);
                t.check(th[0].loop_rep == rep, || format!("eps {eps}, mu {mu}: representative {:?}", th[0].loop_rep));
                t.check(th[0].component_group.is_empty() && et[0].component_group.is_empty(), || {
                    format!("eps {eps}, mu {mu}: component group not trivial")
                });
                let b = class_to_bundle(&et[0])?;
                t.check(b.aut_label == "{(z,conj z)}", || format!("eps {eps}, mu {mu}: aut {}", b.aut_label));
                t.check(b.c == int_matrix(&[&[0, 1], &[sign, 0]]), || format!("eps {eps}, mu {mu}: gluing {:?}", b.c));
            }
            let twisted = pure_inner_twist(&d, &int_matrix(&[&[1, 0], &[0, -1]]))?;
            t.check(twisted.names.real_form == "U(1,1)", || format!("twisted datum is {}", twisted.names.real_form));
            let (a, b) = (table_rows(&d, 3)?, table_rows(&twisted, 3)?);
            t.check(a == b, || format!("eps {eps}: U(1,1) table differs from U(2)"));
        }
        Ok(())
    })
}

/// The four GL2 cosets of the epsilon = -1 unitary example under tau_theta.
pub fn criterion_5(_seed: u64) -> CriterionReport {
    run(5, "tau_theta cosets for U(2), epsilon=-1, land in four distinct classes", |t| {
        let d = build_datum(Family::Unitary, 2, -1, None)?;
        let label = |x: &SeriesMatrix| -> Result<(Vec<i64>, String)> {
            let c = canonicalize_theta(&d, x)?;
            Ok((c.lambda, c.class.label))
        };
        let tau = |g: &LaurentMatrix| tau_theta(&d, g, 16);
        let cases: Vec<(LaurentMatrix, LaurentMatrix)> = vec![
            (diag_loop(1, 0), lm(&["0", "1", "1", "0"])),
            (diag_loop(0, 0), lm(&["1", "0", "0", "1"])),
            (diag_loop(1, 1), lm(&["-1", "0", "0", "-1"])),
        ];
        let mut seen = Vec::new();
        for (g, rep) in &cases {
            let got = label(&tau(g)?)?;
            t.check(got == label(&exact(rep))?, || format!("coset {g:?} lands in {got:?}"));
            seen.push(got);
        }
        for mu in 1..=3 {
            let g = lm(&["1", "t", "0", &texp(mu + 1)]);
            let lower = if mu % 2 == 0 { texp(-mu) } else { neg_texp(-mu) };
            let rep = lm(&["0", &texp(mu), &lower, "0"]);
            let got = label(&tau(&g)?)?;
            t.check(got.0 == vec![mu, -mu] && got == label(&exact(&rep))?, || format!("mu {mu}: lands in {got:?}"));
            seen.push(got);
        }
        let mut uniq = seen.clone();
        uniq.sort();
        uniq.dedup();
        t.check(uniq.len() == seen.len(), || "coset images are not distinct".into());
        Ok(())
    })
}

/// Duality suite: every matched pair up to bound 2, four data, both epsilon.
pub fn criterion_6(seed: u64) -> CriterionReport {
    run(6, "duality: matched pairs to bound 2, equal component groups, 20 compact samples each", |t| {
        let mut k = 0u64;
        for eps in [1, -1] {
            for (name, d) in catalog(eps)? {
                let mut pairs = match_spherical(&d, 2)?;
                pairs.extend(match_iwahori(&d, 2)?);
                t.check(!pairs.is_empty(), || format!("{name} eps {eps}: no pairs"));
                for p in &pairs {
                    let same = match &p.classes {
                        PairClasses::Spherical { theta, eta } => theta.component_group == eta.component_group,
                        PairClasses::Iwahori { theta, eta } => theta.component_group == eta.component_group,
                    };
                    t.check(same, || format!("{name} eps {eps}: component groups differ"));
                    if p.common_rep.is_none() {
                        continue;
                    }
                    k += 1;
                    let r = verify_intersection(p, 20, seed.wrapping_add(k))?;
                    t.check(r.passed(), || format!("{name} eps {eps}: {}", r.failures.join("; ")));
                }
            }
        }
        Ok(())
    })
}

/// Polynomial theta-twist of an exact loop, known modulo t^prec.
pub fn theta_twist_truncated(d: &GroupDatum, h: &LaurentMatrix, x: &LaurentMatrix, prec: i64) -> Result<SeriesMatrix> {
    let lo = x.min_exp().unwrap_or(0).min(0);
    Ok(twist_theta(d, h, &exact(x), prec - lo)?.with_prec(Some(prec)))
}

/// Canonicalizer invariance on random twists of every representative.
pub fn criterion_7(seed: u64) -> CriterionReport {
    run(7, "canonicalizers: 100 theta-twists (precision 8) and 50 eta-twists per representative", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for eps in [1, -1] {
            for (name, d) in catalog(eps)? {
                for cw in enumerate_admissible(&d, 2)? {
                    for cls in classify_theta(&d, &cw)? {
                        let key = (cw.lambda.clone(), cls.label.clone());
                        let x = &cls.loop_rep;
                        for _ in 0..100 {
                            let h = random_arc(&mut rng, d.n, 7);
                            let y = theta_twist_truncated(&d, &h, x, 8)?;
                            match canonicalize_theta(&d, &y) {
                                Ok(cf) => {
                                    t.check((cf.lambda.clone(), cf.class.label.clone()) == key, || {
                                        format!("{name} eps {eps} {key:?}: theta twist gave {:?} {}", cf.lambda, cf.class.label)
                                    });
                                    t.check(replay_theta(&d, &cf, &y)?, || format!("{name} eps {eps} {key:?}: theta replay"));
                                }
                                Err(e) => t.fail(format!("{name} eps {eps} {key:?}: {e}")),
                            }
                        }
                        for _ in 0..50 {
                            let h = random_poly_unit(&mut rng, d.n, 3);
                            let y = twist_eta(&d, &h, x)?;
                            match canonicalize_eta(&d, &y) {
                                Ok(cf) => {
                                    t.check((cf.lambda.clone(), cf.class.label.clone()) == key, || {
                                        format!("{name} eps {eps} {key:?}: eta twist gave {:?} {}", cf.lambda, cf.class.label)
                                    });
                                    t.check(replay_eta(&d, &cf, &y)?, || format!("{name} eps {eps} {key:?}: eta replay"));
                                }
                                Err(e) => t.fail(format!("{name} eps {eps} {key:?}: {e}")),
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

/// eta(t^lambda) = theta(t^lambda).
pub fn criterion_8(seed: u64) -> CriterionReport {
    run(8, "eta and theta agree on coweights: 50 random lambda per datum", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for eps in [1, -1] {
            let mut data = catalog(eps)?;
            data.push(("GL3(R)".into(), build_datum(Family::SplitGl, 3, eps, None)?));
            data.push(("U(3)".into(), build_datum(Family::Unitary, 3, eps, None)?));
            data.push(("GL2(H)".into(), build_datum(Family::QuaternionicGl, 4, eps, None)?));
            for (name, d) in data {
                for _ in 0..50 {
                    let lam: Vec<i64> = (0..d.n).map(|_| rng.gen_range(-5..=5)).collect();
                    let x = LaurentMatrix::t_lambda(&lam);
                    t.check(d.apply_eta(&x)? == d.apply_theta(&x)?, || format!("{name} eps {eps}: {lam:?}"));
                }
            }
        }
        Ok(())
    })
}

/// Kottwitz points: counts, round trip, equivalence.
pub fn criterion_9(seed: u64) -> CriterionReport {
    run(9, "Kottwitz set: counts to bound 2, round trip, equivalent points collapse", |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for eps in [1, -1] {
            for (name, d) in catalog(eps)? {
                let mut classes = Vec::new();
                for cw in enumerate_admissible(&d, 2)? {
                    for c in classify_eta(&d, &cw)? {
                        classes.push((cw.lambda.clone(), c.label));
                    }
                }
                let pts = enumerate_kottwitz(&d, 2)?;
                t.check(pts.len() == classes.len(), || format!("{name} eps {eps}: {} points, {} classes", pts.len(), classes.len()));
                let mut hit = Vec::new();
                for p in &pts {
                    t.check(kottwitz_validate(p, &d), || format!("{name} eps {eps}: invalid point {:?}", p.lambda));
                    let cf = canonicalize_eta(&d, &kottwitz_to_loop(p, &d)?)?;
                    let key = (cf.lambda.clone(), cf.class.label.clone());
                    hit.push(key.clone());
                    let cw = AdmissibleCoweight::new(p.lambda.clone());
                    for _ in 0..20 {
                        let perm = random_signed_permutation(&mut rng, d.n);
                        let entries: Vec<i64> = (0..d.n * d.n).map(|_| rng.gen_range(-2..=2)).collect();
                        let levi = Matrix::from_fn(d.n, |i, j| {
                            let same = cw.blocks.iter().any(|b| b.contains(&i) && b.contains(&j));
                            if i == j {
                                GQ::int(if entries[i * d.n + j] >= 0 { 1 + entries[i * d.n + j] } else { entries[i * d.n + j] })
                            } else if same {
                                GQ::int(entries[i * d.n + j])
                            } else {
                                GQ::zero()
                            }
                        });
                        if levi.det_gauss().is_zero() {
                            continue;
                        }
                        let q = kottwitz_act(&d, p, &perm.mul(&levi))?;
                        t.check(kottwitz_validate(&q, &d), || format!("{name} eps {eps}: moved point invalid"));
                        let c = canonicalize_eta(&d, &kottwitz_to_loop(&q, &d)?)?;
                        t.check((c.lambda.clone(), c.class.label.clone()) == key, || {
                            format!("{name} eps {eps} {key:?}: equivalent point gave {:?} {}", c.lambda, c.class.label)
                        });
                    }
                }
                let mut a = hit.clone();
                a.sort();
                let mut b = classes.clone();
                b.sort();
                t.check(a == b, || format!("{name} eps {eps}: round trip is not a bijection"));
            }
        }
        Ok(())
    })
}

/// Finite-level counts.
pub fn criterion_10(_seed: u64) -> CriterionReport {
    run(10, "finite level: GL2(R) Borel count 2, U(2) count 3, invariant under pure inner twist", |t| {
        let s = build_datum(Family::SplitGl, 2, 1, None)?;
        let fs = finite_matsuki(&s)?;
        t.check(fs.borel.len() == 2, || format!("GL2(R) Borel count {}", fs.borel.len()));
        let flip = int_matrix(&[&[1, 0], &[0, -1]]);
        for eps in [1, -1] {
            let u = build_datum(Family::Unitary, 2, eps, None)?;
            let fu = finite_matsuki(&u)?;
            t.check(fu.spherical.len() == 3, || format!("U(2) eps {eps} spherical count {}", fu.spherical.len()));
            for d in [u, build_datum(Family::SplitGl, 2, eps, None)?] {
                let tw = pure_inner_twist(&d, &flip)?;
                let (a, b) = (finite_matsuki(&d)?, finite_matsuki(&tw)?);
                t.check(a.spherical.len() == b.spherical.len() && a.borel.len() == b.borel.len(), || {
                    format!("{} eps {eps}: counts change under the twist", d.names.real_form)
                });
            }
        }
        Ok(())
    })
}

/// The criteria in order.
pub const CRITERIA: [fn(u64) -> CriterionReport; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
];

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|f| f(seed)).collect()
}
