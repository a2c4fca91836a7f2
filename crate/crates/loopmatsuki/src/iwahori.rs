//! Iwahori-level orbits: admissible affine Weyl elements and twisted torus problems.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::GroupDatum;
use crate::laurent::LaurentMatrix;
use crate::matrix::Matrix;
use crate::scalar::GQ;
use crate::snf::{snf_int, torsion_factors, IntMatrix};
use crate::spherical::{torus_exponents, Probe, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylElement {
    pub lambda: Vec<i64>,
    /// The lift sends e_j to signs[j] e_{w[j]}.
    pub w: Vec<usize>,
    pub signs: Vec<i64>,
    pub lift: Matrix,
}

fn perm_sign(w: &[usize]) -> i64 {
    let mut seen = vec![false; w.len()];
    let mut sign = 1;
    for s in 0..w.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            j = w[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl AffineWeylElement {
    /// Determinant-one signed permutation lift: an odd w gets its -1 in the last row.
    pub fn new(lambda: Vec<i64>, w: Vec<usize>) -> Self {
        let n = w.len();
        let mut signs = vec![1i64; n];
        if perm_sign(&w) == -1 {
            let j = w.iter().position(|&r| r == n - 1).expect("w is a permutation");
            signs[j] = -1;
        }
        let lift = Matrix::from_fn(n, |i, j| if w[j] == i { GQ::int(signs[j]) } else { GQ::zero() });
        AffineWeylElement { lambda, w, signs, lift }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![0; n], (0..n).collect())
    }

    /// The loop t^lambda w.
    pub fn loop_matrix(&self) -> LaurentMatrix {
        LaurentMatrix::t_lambda(&self.lambda).mul(&LaurentMatrix::from_const(&self.lift))
    }

    pub fn dominant_lambda(&self) -> Vec<i64> {
        let mut l = self.lambda.clone();
        l.sort_by(|a, b| b.cmp(a));
        l
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Permutation underlying a monomial matrix: column j has its entry in row p[j].
fn monomial_perm(m: &Matrix) -> Option<Vec<usize>> {
    if !m.is_monomial_unit() {
        return None;
    }
    Some((0..m.n).map(|j| (0..m.n).find(|&i| !m.get(i, j).is_zero()).unwrap()).collect())
}

fn inverse_perm(w: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; w.len()];
    for (j, &i) in w.iter().enumerate() {
        inv[i] = j;
    }
    inv
}

fn apply_int(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Exponent matrix of theta_0 on the diagonal torus.
pub fn theta0_exponents(d: &GroupDatum) -> Result<Vec<Vec<i64>>> {
    torus_exponents(d.n, Probe::Real, |g| d.theta0(g))
}

/// Checks theta_0(w) = w^-1 in the Weyl group and theta_0(lambda) = -w^-1 lambda.
pub fn is_admissible_tw(d: &GroupDatum, tw: &AffineWeylElement) -> Result<bool> {
    let th = theta0_exponents(d)?;
    let Some(p) = monomial_perm(&d.theta0(&tw.lift)?) else {
        return Ok(false);
    };
    if p != inverse_perm(&tw.w) {
        return Ok(false);
    }
    // (w^-1 lambda)_j = lambda_{w(j)}
    let wl: Vec<i64> = (0..d.n).map(|j| -tw.lambda[tw.w[j]]).collect();
    Ok(apply_int(&th, &tw.lambda) == wl)
}

/// All admissible t^lambda w with entries of lambda bounded by `bound`, sorted by (lambda, w).
pub fn enumerate_admissible_tw(d: &GroupDatum, bound: i64) -> Result<Vec<AffineWeylElement>> {
    let n = d.n;
    let th = theta0_exponents(d)?;
    let mut out = Vec::new();
    for w in permutations(n) {
        let probe = AffineWeylElement::new(vec![0; n], w.clone());
        match monomial_perm(&d.theta0(&probe.lift)?) {
            Some(p) if p == inverse_perm(&w) => {}
            _ => continue,
        }
        let mut lam = vec![-bound; n];
        loop {
            let wl: Vec<i64> = (0..n).map(|j| -lam[w[j]]).collect();
            if apply_int(&th, &lam) == wl {
                out.push(AffineWeylElement::new(lam.clone(), w.clone()));
            }
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if lam[k] < bound {
                    lam[k] += 1;
                    for x in lam.iter_mut().skip(k + 1) {
                        *x = -bound;
                    }
                    k = usize::MAX;
                    break;
                }
            }
            if k != usize::MAX {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.lambda.cmp(&b.lambda).then(a.w.cmp(&b.w)));
    Ok(out)
}

fn const_diagonal(m: &LaurentMatrix) -> Result<Matrix> {
    let c = m
        .as_const()
        .ok_or_else(|| Error::Inadmissible(vec![]))?;
    if !c.is_diagonal() {
        return Err(Error::Inadmissible(vec![]));
    }
    Ok(c)
}

/// t_tw = (tw theta(tw))^-1, a constant torus element for admissible tw.
pub fn t_tw(tw: &AffineWeylElement, d: &GroupDatum) -> Result<Matrix> {
    if !is_admissible_tw(d, tw)? {
        return Err(Error::Inadmissible(tw.lambda.clone()));
    }
    let x = tw.loop_matrix();
    let p = x.mul(&d.apply_theta(&x)?);
    const_diagonal(&p)
        .map_err(|_| Error::Inadmissible(tw.lambda.clone()))?
        .inverse()
}

/// The same element computed through eta.
pub fn t_tw_eta(tw: &AffineWeylElement, d: &GroupDatum) -> Result<Matrix> {
    if !is_admissible_tw(d, tw)? {
        return Err(Error::Inadmissible(tw.lambda.clone()));
    }
    let x = tw.loop_matrix();
    let p = x.mul(&d.apply_eta(&x)?);
    const_diagonal(&p)
        .map_err(|_| Error::Inadmissible(tw.lambda.clone()))?
        .inverse()
}

/// Torus element with root-of-unity entries exp(2 pi i q_j), q_j in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    pub exps: Vec<BigRational>,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl TorusElement {
    pub fn new(exps: Vec<BigRational>) -> Self {
        TorusElement { exps: exps.iter().map(frac).collect() }
    }

    pub fn identity(n: usize) -> Self {
        TorusElement { exps: vec![BigRational::zero(); n] }
    }

    /// Reads a diagonal matrix with entries in {1, i, -1, -i}.
    pub fn from_matrix(m: &Matrix) -> Option<Self> {
        if !m.is_diagonal() {
            return None;
        }
        let exps = (0..m.n)
            .map(|i| m.get(i, i).unit_exponent().map(|k| BigRational::new(BigInt::from(k), BigInt::from(4))))
            .collect::<Option<Vec<_>>>()?;
        Some(TorusElement::new(exps))
    }

    /// Least common multiple of the entry orders.
    pub fn order(&self) -> BigInt {
        self.exps.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Exact matrix when every entry lies in Q(i).
    pub fn to_matrix(&self) -> Option<Matrix> {
        let entries = self
            .exps
            .iter()
            .map(|q| {
                let four = q * BigRational::from_integer(BigInt::from(4));
                four.is_integer().then(|| GQ::i_pow(four.to_integer().to_i64().unwrap()))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::diag(entries))
    }

    /// Human-readable entries: exact values in Q(i), otherwise zeta_m^k.
    pub fn entry_strings(&self) -> Vec<String> {
        self.exps
            .iter()
            .map(|q| {
                let four = q * BigRational::from_integer(BigInt::from(4));
                if four.is_integer() {
                    GQ::i_pow(four.to_integer().to_i64().unwrap()).to_string()
                } else {
                    format!("zeta_{}^{}", q.denom(), q.numer())
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TorusTwistProblem {
    /// Exponent matrix of g -> Ad_w(g) theta_0(g).
    pub m_eq: IntMatrix,
    /// Entries of t_tw z as fractions of a full turn.
    pub target: Vec<BigRational>,
    /// Exponent matrix of h -> Ad_{w^-1}(h) theta_0(h)^-1.
    pub m_act: IntMatrix,
}

fn int_matrix(a: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(a)
}

fn target_of(t: &Matrix, z: &GQ) -> Result<Vec<BigRational>> {
    (0..t.n)
        .map(|i| {
            let v = t.get(i, i) * z;
            v.unit_exponent()
                .map(|k| BigRational::new(BigInt::from(k), BigInt::from(4)))
                .ok_or_else(|| Error::Unsupported(format!("torus target entry {v} is not a fourth root of unity")))
        })
        .collect()
}

/// Builds the torus problem of tw on the chosen side. The theta side probes the holomorphic
/// involution with real values, the eta side probes eta_0 on the compact torus.
pub fn torus_problem(d: &GroupDatum, tw: &AffineWeylElement, side: Side) -> Result<TorusTwistProblem> {
    if !is_admissible_tw(d, tw)? {
        return Err(Error::Inadmissible(tw.lambda.clone()));
    }
    let w = &tw.lift;
    let wi = w.inverse()?;
    let (probe, inv0, t): (Probe, Box<dyn Fn(&Matrix) -> Result<Matrix>>, Matrix) = match side {
        Side::Theta => (Probe::Real, Box::new(|g: &Matrix| d.theta0(g)), t_tw(tw, d)?),
        Side::Eta => (Probe::Compact, Box::new(|g: &Matrix| d.eta0(g)), t_tw_eta(tw, d)?),
    };
    let m_eq = torus_exponents(d.n, probe, |g| Ok(w.mul(g).mul(&wi).mul(&inv0(g)?)))?;
    let m_act = torus_exponents(d.n, probe, |h| Ok(wi.mul(h).mul(w).mul(&inv0(h)?.inverse()?)))?;
    Ok(TorusTwistProblem { m_eq: int_matrix(&m_eq), target: target_of(&t, &d.z)?, m_act: int_matrix(&m_act) })
}

#[derive(Clone, Debug)]
pub struct TorusClass {
    pub rep: TorusElement,
    pub component_group: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct TorusSolution {
    pub nonempty: bool,
    pub classes: Vec<TorusClass>,
}

fn big(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn mat_vec(m: &IntMatrix, x: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows)
        .map(|i| (0..m.cols).fold(BigRational::zero(), |acc, j| acc + big(m.get(i, j)) * &x[j]))
        .collect()
}

/// Integer inverse of a unimodular matrix via its adjugate.
fn unimodular_inverse(v: &IntMatrix) -> IntMatrix {
    let n = v.rows;
    let det = v.det();
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            for (a, &r) in rows.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    minor.set(a, b, v.get(r, c).clone());
                }
            }
            let sign = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            inv.set(i, j, sign * minor.det() * &det);
        }
    }
    inv
}

/// Decides solvability of g^M_eq = target on the torus and lists the classes modulo the
/// twisted action, each with a root-of-unity representative and its stabilizer component group.
pub fn solve_torus_classes(p: &TorusTwistProblem) -> Result<TorusSolution> {
    let n = p.m_eq.cols;
    let s = snf_int(&p.m_eq);
    let diag = s.diagonal();
    let r = s.rank();
    let c = mat_vec(&s.u, &p.target);
    for ci in c.iter().skip(r) {
        if !frac(ci).is_zero() {
            return Ok(TorusSolution { nonempty: false, classes: Vec::new() });
        }
    }
    if r + snf_int(&p.m_act).rank() != n {
        return Err(Error::CheckFailed("twisted action does not fill the solution torus".into()));
    }
    let v_inv = unimodular_inverse(&s.v);
    let key = |x: &[BigRational]| -> Vec<BigRational> { mat_vec(&v_inv, x).into_iter().take(r).map(|y| frac(&y)).collect() };
    let solves = |x: &[BigRational]| mat_vec(&p.m_eq, x).iter().zip(&p.target).all(|(a, b)| frac(&(a - b)).is_zero());
    let total: usize = diag.iter().take(r).map(|d| d.to_usize().expect("class count fits in usize")).product();
    let cg = torsion_factors(&p.m_act);
    let mut found: Vec<(Vec<BigRational>, TorusElement)> = Vec::new();
    for grid in [1u32, 2, 4, 8] {
        if found.len() == total || (grid as f64).powi(n as i32) > 65536.0 {
            break;
        }
        let mut idx = vec![0u32; n];
        loop {
            let x: Vec<BigRational> = idx.iter().map(|&k| BigRational::new(BigInt::from(k), BigInt::from(grid))).collect();
            if solves(&x) {
                let k = key(&x);
                if !found.iter().any(|(f, _)| *f == k) {
                    found.push((k, TorusElement::new(x)));
                }
            }
            let mut pos = n;
            while pos > 0 && idx[pos - 1] + 1 == grid {
                idx[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
        }
    }
    if found.len() < total {
        // direct construction y_i = (c_i + k_i) / d_i, x = V y
        let mut ks = vec![0usize; r];
        loop {
            let y: Vec<BigRational> = (0..n)
                .map(|i| {
                    if i < r {
                        (&c[i] + BigRational::from_integer(BigInt::from(ks[i]))) / big(&diag[i])
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            let x = mat_vec(&s.v, &y);
            let k = key(&x);
            if !found.iter().any(|(f, _)| *f == k) {
                found.push((k, TorusElement::new(x)));
            }
            let mut pos = r;
            while pos > 0 && BigInt::from(ks[pos - 1] + 1) == diag[pos - 1] {
                ks[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            ks[pos - 1] += 1;
        }
    }
    if found.len() != total {
        return Err(Error::CheckFailed(format!("expected {total} torus classes, found {}", found.len())));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(TorusSolution {
        nonempty: true,
        classes: found.into_iter().map(|(_, rep)| TorusClass { rep, component_group: cg.clone() }).collect(),
    })
}

/// Class index of an arbitrary torus solution, in the order used by `solve_torus_classes`.
pub fn torus_class_key(p: &TorusTwistProblem, x: &TorusElement) -> Vec<BigRational> {
    let s = snf_int(&p.m_eq);
    let r = s.rank();
    let v_inv = unimodular_inverse(&s.v);
    mat_vec(&v_inv, &x.exps).into_iter().take(r).map(|y| frac(&y)).collect()
}

/// Integer characters whose values on a torus solution determine its class.
pub fn torus_character_rows(p: &TorusTwistProblem) -> Vec<Vec<i64>> {
    let s = snf_int(&p.m_eq);
    let v_inv = unimodular_inverse(&s.v);
    (0..s.rank()).map(|i| (0..v_inv.cols).map(|j| v_inv.get_i64(i, j)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct IwahoriClass {
    pub datum: GroupDatum,
    pub tw: AffineWeylElement,
    pub side: Side,
    pub g0: TorusElement,
    /// t^lambda w g0 when g0 has entries in Q(i).
    pub loop_rep: Option<LaurentMatrix>,
    pub component_group: Vec<i64>,
    pub spherical_parent: Vec<i64>,
}

/// Ad_w(g0) = theta_0(g0)^-1 t_tw z, checked exactly.
pub fn torus_equation_holds(d: &GroupDatum, tw: &AffineWeylElement, g0: &Matrix) -> Result<bool> {
    let lhs = tw.lift.mul(g0).mul(&tw.lift.inverse()?);
    let rhs = d.theta0(g0)?.inverse()?.mul(&t_tw(tw, d)?).mul(&d.z_matrix());
    Ok(lhs == rhs)
}

/// Iwahori classes over tw on one side.
pub fn classify_iwahori(d: &GroupDatum, tw: &AffineWeylElement, side: Side) -> Result<Vec<IwahoriClass>> {
    let p = torus_problem(d, tw, side)?;
    let sol = solve_torus_classes(&p)?;
    let mut out = Vec::new();
    for c in sol.classes {
        let g = c.rep.to_matrix();
        let loop_rep = match &g {
            Some(g) => {
                if !torus_equation_holds(d, tw, g)? {
                    return Err(Error::CheckFailed("torus representative fails its equation".into()));
                }
                Some(tw.loop_matrix().mul(&LaurentMatrix::from_const(g)))
            }
            None => None,
        };
        out.push(IwahoriClass {
            datum: d.clone(),
            tw: tw.clone(),
            side,
            g0: c.rep,
            loop_rep,
            component_group: c.component_group,
            spherical_parent: tw.dominant_lambda(),
        });
    }
    Ok(out)
}

/// All Iwahori classes with bounded lambda; both sides are computed and must agree.
pub fn iwahori_table(d: &GroupDatum, bound: i64) -> Result<Vec<IwahoriClass>> {
    let mut out = Vec::new();
    for tw in enumerate_admissible_tw(d, bound)? {
        let th = classify_iwahori(d, &tw, Side::Theta)?;
        let et = classify_iwahori(d, &tw, Side::Eta)?;
        let same = th.len() == et.len()
            && th.iter().zip(&et).all(|(a, b)| a.g0 == b.g0 && a.component_group == b.component_group);
        if !same {
            return Err(Error::LabelMismatch(format!("theta and eta torus problems differ at {:?} {:?}", tw.lambda, tw.w)));
        }
        out.extend(th);
    }
    Ok(out)
}

pub fn is_negative_free(v: &[BigRational]) -> bool {
    v.iter().all(|q| !q.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_datum, Family};
    use crate::spherical::{eta_anti_fixed, theta_anti_fixed};

    fn catalog() -> Vec<GroupDatum> {
        let mut v = Vec::new();
        for eps in [1, -1] {
            for n in 1..=3 {
                for z in [GQ::one(), GQ::int(-1)] {
                    v.push(build_datum(Family::SplitGl, n, eps, Some(z.clone())).unwrap());
                    v.push(build_datum(Family::Unitary, n, eps, Some(z.clone())).unwrap());
                    if n % 2 == 0 {
                        v.push(build_datum(Family::QuaternionicGl, n, eps, Some(z)).unwrap());
                    }
                }
            }
            v.push(build_datum(Family::QuaternionicGl, 4, eps, None).unwrap());
        }
        v
    }

    #[test]
    fn split_admissible_set() {
        let s = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let all = enumerate_admissible_tw(&s, 1).unwrap();
        let plain = all.iter().filter(|t| t.w == vec![0, 1]).count();
        let swapped: Vec<Vec<i64>> = all.iter().filter(|t| t.w == vec![1, 0]).map(|t| t.lambda.clone()).collect();
        assert_eq!(plain, 9);
        assert_eq!(swapped, vec![vec![-1, -1], vec![0, 0], vec![1, 1]]);
        assert_eq!(all.len(), 12);
        for d in catalog() {
            assert!(enumerate_admissible_tw(&d, 0).unwrap().contains(&AffineWeylElement::identity(d.n)));
        }
    }

    #[test]
    fn unitary_admissible_contains_expected() {
        let u = build_datum(Family::Unitary, 2, 1, None).unwrap();
        let all = enumerate_admissible_tw(&u, 1).unwrap();
        assert!(all.contains(&AffineWeylElement::new(vec![1, -1], vec![1, 0])));
        assert!(all.contains(&AffineWeylElement::identity(2)));
        // direct evaluation of both conditions
        for tw in &all {
            let x = tw.loop_matrix();
            let y = x.mul(&u.apply_theta(&x).unwrap());
            assert!(y.as_const().map_or(false, |c| c.is_diagonal()));
        }
        assert!(!all.contains(&AffineWeylElement::new(vec![1, 0], vec![0, 1])));
    }

    #[test]
    fn t_tw_examples() {
        let s = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        assert!(t_tw(&AffineWeylElement::new(vec![3, -2], vec![0, 1]), &s).unwrap().is_identity());
        let s2 = build_datum(Family::SplitGl, 2, -1, None).unwrap();
        assert_eq!(
            t_tw(&AffineWeylElement::new(vec![1, 0], vec![0, 1]), &s2).unwrap(),
            Matrix::diag(vec![GQ::int(-1), GQ::one()])
        );
        let q = build_datum(Family::QuaternionicGl, 2, 1, None).unwrap();
        let tw = AffineWeylElement::new(vec![0, 0], vec![1, 0]);
        assert_eq!(tw.lift, Matrix::from_ints(&[&[0, 1], &[-1, 0]]));
        // direct evaluation: (w theta_0(w))^-1
        let w = &tw.lift;
        let direct = w.mul(&q.theta0(w).unwrap()).inverse().unwrap();
        assert_eq!(t_tw(&tw, &q).unwrap(), direct);
        assert!(t_tw(&AffineWeylElement::new(vec![1, 0], vec![0, 1]), &q).is_err());
        assert!(t_tw(&AffineWeylElement::new(vec![1, 0], vec![1, 0]), &q).is_ok());
    }

    #[test]
    fn split_torus_classes() {
        let s = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        let c = classify_iwahori(&s, &AffineWeylElement::new(vec![2, -1], vec![0, 1]), Side::Theta).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].g0.to_matrix().unwrap().is_identity());
        assert_eq!(c[0].component_group, vec![2, 2]);
        for mu in -1..=1 {
            let c = classify_iwahori(&s, &AffineWeylElement::new(vec![mu, mu], vec![1, 0]), Side::Theta).unwrap();
            assert_eq!(c.len(), 1);
            assert!(c[0].component_group.is_empty());
        }
    }

    #[test]
    fn unsolvable_problem() {
        let p = TorusTwistProblem {
            m_eq: IntMatrix::zeros(2, 2),
            target: vec![BigRational::new(1.into(), 2.into()), BigRational::zero()],
            m_act: IntMatrix::zeros(2, 2),
        };
        assert!(!solve_torus_classes(&p).unwrap().nonempty);
    }

    #[test]
    fn finite_flag_counts() {
        let count = |d: &GroupDatum| -> usize {
            enumerate_admissible_tw(d, 0)
                .unwrap()
                .iter()
                .map(|tw| classify_iwahori(d, tw, Side::Theta).unwrap().len())
                .sum()
        };
        assert_eq!(count(&build_datum(Family::Unitary, 2, 1, None).unwrap()), 5);
        assert_eq!(count(&build_datum(Family::SplitGl, 2, 1, None).unwrap()), 2);
    }

    #[test]
    fn catalog_invariants() {
        for d in catalog() {
            let table = iwahori_table(&d, 1).unwrap();
            for c in &table {
                let x = c.loop_rep.as_ref().expect("catalog torus reps stay in Q(i)");
                assert!(theta_anti_fixed(&d, x).unwrap(), "{:?} {:?}", d.family, c.tw);
                assert!(eta_anti_fixed(&d, x).unwrap());
            }
        }
    }
}
