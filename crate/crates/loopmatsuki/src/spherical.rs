//! Admissible coweights and spherical twisted-orbit classes on both sides.

use crate::error::{Error, Result};
use crate::group::{antidiagonal, Family, GroupDatum};
use crate::laurent::LaurentMatrix;
use crate::matrix::Matrix;
use crate::scalar::GQ;
use crate::snf::{invariant_factors, torsion_factors, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Theta,
    Eta,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Theta => "theta",
            Side::Eta => "eta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleCoweight {
    pub lambda: Vec<i64>,
    /// Maximal runs of equal entries, as index lists (Levi blocks).
    pub blocks: Vec<Vec<usize>>,
}

impl AdmissibleCoweight {
    pub fn new(lambda: Vec<i64>) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, x) in lambda.iter().enumerate() {
            match blocks.last_mut() {
                Some(b) if lambda[b[0]] == *x => b.push(i),
                _ => blocks.push(vec![i]),
            }
        }
        AdmissibleCoweight { lambda, blocks }
    }

    pub fn is_dominant(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] >= w[1])
    }
}

#[derive(Clone, Debug)]
pub struct SphericalClass {
    pub datum: GroupDatum,
    pub lambda: AdmissibleCoweight,
    pub side: Side,
    pub label: String,
    pub g0: Matrix,
    pub loop_rep: LaurentMatrix,
    pub component_group: Vec<i64>,
    pub aut_label: Option<String>,
}

/// Probe values for reading off the exponent matrix of a torus endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// Positive real probe 2; valid for holomorphic maps.
    Real,
    /// Unit (3 + 4i) / 5 of infinite order on the compact torus; valid for maps agreeing with a
    /// holomorphic one there.
    Compact,
}

const MAX_TORUS_EXPONENT: i64 = 4;

/// Integer matrix A with f(diag(s^x)) = diag(s^(A x)), for a map f that sends the diagonal
/// torus to itself with small exponents.
pub fn torus_exponents(n: usize, probe: Probe, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<Vec<Vec<i64>>> {
    let s = match probe {
        Probe::Real => GQ::int(2),
        Probe::Compact => GQ::complex(3, 5, 4, 5),
    };
    let values: Vec<(GQ, i64)> = (-MAX_TORUS_EXPONENT..=MAX_TORUS_EXPONENT)
        .map(|e| (s.pow(e).expect("probe is invertible"), e))
        .collect();
    let mut a = vec![vec![0i64; n]; n];
    for k in 0..n {
        let probe = Matrix::diag((0..n).map(|i| if i == k { s.clone() } else { GQ::one() }).collect());
        let img = f(&probe)?;
        if !img.is_diagonal() {
            return Err(Error::Unsupported("involution does not preserve the diagonal torus".into()));
        }
        for (j, row) in a.iter_mut().enumerate() {
            let v = img.get(j, j);
            row[k] = values
                .iter()
                .find(|(u, _)| u == v)
                .map(|(_, e)| *e)
                .ok_or_else(|| Error::CheckFailed("torus map has an unexpected exponent".into()))?;
        }
    }
    Ok(a)
}

/// Integer matrix A with alpha_theta(diag(s^x)) = diag(s^(A x)) on the diagonal torus.
pub fn torus_exponent_matrix(d: &GroupDatum) -> Result<Vec<Vec<i64>>> {
    torus_exponents(d.n, Probe::Real, |g| d.alpha_theta(g))
}

fn satisfies_lambda_equation(a: &[Vec<i64>], lambda: &[i64]) -> bool {
    a.iter()
        .zip(lambda)
        .all(|(row, l)| row.iter().zip(lambda).map(|(x, y)| x * y).sum::<i64>() == -l)
}

pub fn is_admissible(d: &GroupDatum, lambda: &[i64]) -> Result<bool> {
    if lambda.len() != d.n {
        return Ok(false);
    }
    let a = torus_exponent_matrix(d)?;
    Ok(AdmissibleCoweight::new(lambda.to_vec()).is_dominant() && satisfies_lambda_equation(&a, lambda))
}

/// Dominant coweights with entries bounded by `bound` that satisfy the admissibility equation,
/// in ascending lexicographic order.
pub fn enumerate_admissible(d: &GroupDatum, bound: i64) -> Result<Vec<AdmissibleCoweight>> {
    let a = torus_exponent_matrix(d)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d.n);
    fn go(n: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for x in lo..=top {
            cur.push(x);
            go(n, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    go(d.n, -bound, bound, &mut cur, &mut all);
    for l in all {
        if satisfies_lambda_equation(&a, &l) {
            out.push(l);
        }
    }
    out.sort();
    Ok(out.into_iter().map(AdmissibleCoweight::new).collect())
}

/// Diagonal sign matrix eps^lambda.
pub fn eps_lambda(epsilon: i64, lambda: &[i64]) -> Matrix {
    Matrix::diag(lambda.iter().map(|&l| GQ::sign_pow(epsilon, l)).collect())
}

/// g0 = z w2 alpha_theta(g0)^-1 eps^lambda.
pub fn theta_equation_holds(d: &GroupDatum, lambda: &[i64], g0: &Matrix) -> Result<bool> {
    let rhs = d
        .z_matrix()
        .mul(&d.w2)
        .mul(&d.alpha_theta(g0)?.inverse()?)
        .mul(&eps_lambda(d.epsilon, lambda));
    Ok(rhs == *g0)
}

/// g0 = z w2 alpha_eta(g0^-1) eps^lambda.
pub fn eta_equation_holds(d: &GroupDatum, lambda: &[i64], g0: &Matrix) -> Result<bool> {
    let rhs = d
        .z_matrix()
        .mul(&d.w2)
        .mul(&d.alpha_eta(&g0.inverse()?)?)
        .mul(&eps_lambda(d.epsilon, lambda));
    Ok(rhs == *g0)
}

/// x theta(x) = z.
pub fn theta_anti_fixed(d: &GroupDatum, x: &LaurentMatrix) -> Result<bool> {
    Ok(x.mul(&d.apply_theta(x)?) == d.z_loop())
}

/// x eta(x) = z.
pub fn eta_anti_fixed(d: &GroupDatum, x: &LaurentMatrix) -> Result<bool> {
    Ok(x.mul(&d.apply_eta(x)?) == d.z_loop())
}

pub fn loop_rep(d: &GroupDatum, lambda: &[i64], g0: &Matrix) -> Result<LaurentMatrix> {
    let x = LaurentMatrix::t_lambda(lambda).mul(&LaurentMatrix::from_const(&g0.mul(&d.w1.inverse()?)));
    Ok(x)
}

fn place_block(g: &mut Matrix, idx: &[usize], blk: &Matrix) {
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            g.set(i, j, blk.get(a, b).clone());
        }
    }
}

/// Consecutive [[0, 1], [-1, 0]] blocks.
fn alternating_rep(m: usize) -> Matrix {
    crate::group::j_matrix(m)
}

/// Symmetric representative on a block: the identity, except that a quaternionic datum uses
/// [[0, 1], [1, 0]] on every J-pair lying inside the block.
fn symmetric_rep(family: Family, idx: &[usize]) -> Matrix {
    let m = idx.len();
    let mut g = Matrix::identity(m);
    if family == Family::QuaternionicGl {
        let mut a = 0;
        while a + 1 < m {
            if idx[a] % 2 == 0 && idx[a + 1] == idx[a] + 1 {
                g.set(a, a, GQ::zero());
                g.set(a + 1, a + 1, GQ::zero());
                g.set(a, a + 1, GQ::one());
                g.set(a + 1, a, GQ::one());
                a += 2;
            } else {
                a += 1;
            }
        }
    }
    g
}

/// Sign sigma_b with g_b = sigma_b transpose(g_b) (theta side) and g_b conj(g_b) = sigma_b (eta side).
fn gl_block_sign(d: &GroupDatum, lam_b: i64) -> i64 {
    let s = if d.family == Family::QuaternionicGl { -1 } else { 1 };
    let z = if d.z.is_one() { 1 } else { -1 };
    z * s * if lam_b % 2 == 0 { 1 } else { d.epsilon }
}

#[derive(Clone, Debug)]
enum BlockKind {
    Sym,
    Alt,
}

#[derive(Clone, Debug)]
struct GlSolution {
    label: String,
    g0: Matrix,
    kinds: Vec<BlockKind>,
}

fn solve_gl(d: &GroupDatum, lam: &AdmissibleCoweight) -> Option<GlSolution> {
    let mut g0 = Matrix::identity(d.n);
    let mut tokens = Vec::new();
    let mut kinds = Vec::new();
    for b in &lam.blocks {
        let m = b.len();
        if gl_block_sign(d, lam.lambda[b[0]]) == 1 {
            place_block(&mut g0, b, &symmetric_rep(d.family, b));
            tokens.push(format!("Sym{m}"));
            kinds.push(BlockKind::Sym);
        } else {
            if m % 2 == 1 {
                return None;
            }
            place_block(&mut g0, b, &alternating_rep(m));
            tokens.push(format!("Alt{m}"));
            kinds.push(BlockKind::Alt);
        }
    }
    Some(GlSolution { label: tokens.join(","), g0, kinds })
}

/// Unitary block structure: mirror pairs (b, b') with b before b', and the optional middle block.
fn unitary_pairs(lam: &AdmissibleCoweight) -> (Vec<(usize, usize)>, Option<usize>) {
    let k = lam.blocks.len();
    let mut pairs = Vec::new();
    let mut middle = None;
    for b in 0..k {
        let mb = k - 1 - b;
        if b < mb {
            pairs.push((b, mb));
        } else if b == mb {
            middle = Some(b);
        }
    }
    (pairs, middle)
}

/// Middle-block matrix c0: min(p, q) outer swapped pairs, then +-1 on the remaining diagonal.
fn signature_form(p: usize, q: usize) -> Matrix {
    let m = p + q;
    let k = p.min(q);
    let mut c = Matrix::zero(m);
    for i in 0..k {
        c.set(i, m - 1 - i, GQ::one());
        c.set(m - 1 - i, i, GQ::one());
    }
    let sign = if p >= q { GQ::one() } else { GQ::int(-1) };
    for i in k..m - k {
        c.set(i, i, sign.clone());
    }
    c
}

struct UnitarySolution {
    label: String,
    g0: Matrix,
    signature: Option<(usize, usize)>,
}

fn solve_unitary(d: &GroupDatum, lam: &AdmissibleCoweight) -> Result<Vec<UnitarySolution>> {
    let (pairs, middle) = unitary_pairs(lam);
    let mut base = Matrix::identity(d.n);
    let mut tokens = Vec::new();
    for &(b, mb) in &pairs {
        let idx = &lam.blocks[b];
        let other = &lam.blocks[mb];
        let s = &d.z * &GQ::sign_pow(d.epsilon, lam.lambda[idx[0]]);
        place_block(&mut base, other, &Matrix::scalar(other.len(), &s));
        tokens.push(format!("pair{}", idx.len()));
    }
    let Some(mid) = middle else {
        return Ok(vec![UnitarySolution { label: tokens.join(","), g0: base, signature: None }]);
    };
    let unit = if d.z.is_one() {
        GQ::one()
    } else if d.z == GQ::int(-1) {
        GQ::i()
    } else {
        return Err(Error::Unsupported(format!(
            "central twist {} with a zero block: the middle forms need eighth roots of unity",
            d.z
        )));
    };
    let idx = &lam.blocks[mid];
    let m = idx.len();
    let w = antidiagonal(m);
    let mut out = Vec::new();
    for p in (0..=m).rev() {
        let q = m - p;
        let c = signature_form(p, q).scale(&unit);
        let mut g0 = base.clone();
        place_block(&mut g0, idx, &c.mul(&w));
        let mut t = tokens.clone();
        t.push(format!("sig({p},{q})"));
        out.push(UnitarySolution { label: t.join(","), g0, signature: Some((p, q)) });
    }
    Ok(out)
}

fn check_admissible(d: &GroupDatum, lam: &AdmissibleCoweight) -> Result<()> {
    if !is_admissible(d, &lam.lambda)? {
        return Err(Error::Inadmissible(lam.lambda.clone()));
    }
    Ok(())
}

/// Component group on the theta side: torus lattice rule on size-one blocks, plus one Z/2 per
/// orthogonal block of size at least two.
fn theta_component_group(d: &GroupDatum, lam: &AdmissibleCoweight, kinds: Option<&[BlockKind]>) -> Result<Vec<i64>> {
    let a = torus_exponent_matrix(d)?;
    let singles: Vec<usize> = lam.blocks.iter().filter(|b| b.len() == 1).map(|b| b[0]).collect();
    let k = singles.len();
    let mut m = IntMatrix::zeros(k, k);
    for (r, &i) in singles.iter().enumerate() {
        for (c, &j) in singles.iter().enumerate() {
            let v = if i == j { 1 } else { 0 } - a[i][j];
            m.set(r, c, v.into());
        }
    }
    let mut orders = torsion_factors(&m);
    if let Some(kinds) = kinds {
        for (b, kind) in lam.blocks.iter().zip(kinds) {
            if b.len() >= 2 && matches!(kind, BlockKind::Sym) {
                orders.push(2);
            }
        }
    }
    Ok(invariant_factors(&orders))
}

/// Component group on the eta side from the real form of each block: GL_m(R) has two
/// components, GL(H), GL_m(C) and U(p, q) are connected.
fn eta_component_group(d: &GroupDatum, lam: &AdmissibleCoweight) -> Vec<i64> {
    if d.family == Family::Unitary {
        return Vec::new();
    }
    let orders: Vec<i64> = lam
        .blocks
        .iter()
        .filter(|b| gl_block_sign(d, lam.lambda[b[0]]) == 1)
        .map(|_| 2)
        .collect();
    invariant_factors(&orders)
}

fn gl_factor(m: usize, real: bool) -> String {
    match (real, m) {
        (true, 1) => "R^x".into(),
        (true, _) => format!("GL{m}(R)"),
        (false, _) => format!("GL{}(H)", m / 2),
    }
}

/// Reductive automorphism group of the bundle attached to an eta-side class.
fn aut_label(d: &GroupDatum, lam: &AdmissibleCoweight, signature: Option<(usize, usize)>) -> String {
    let parts: Vec<String> = match d.family {
        Family::Unitary => {
            let (pairs, _) = unitary_pairs(lam);
            let mut v: Vec<String> = pairs
                .iter()
                .map(|&(b, _)| match lam.blocks[b].len() {
                    1 => "{(z,conj z)}".to_string(),
                    m => format!("GL{m}(C)"),
                })
                .collect();
            if let Some((p, q)) = signature {
                v.push(format!("U({p},{q})"));
            }
            v
        }
        _ => lam
            .blocks
            .iter()
            .map(|b| gl_factor(b.len(), gl_block_sign(d, lam.lambda[b[0]]) == 1))
            .collect(),
    };
    parts.join(" x ")
}

fn build_class(
    d: &GroupDatum,
    lam: &AdmissibleCoweight,
    side: Side,
    label: String,
    g0: Matrix,
    component_group: Vec<i64>,
    aut: Option<String>,
) -> Result<SphericalClass> {
    let ok = match side {
        Side::Theta => theta_equation_holds(d, &lam.lambda, &g0)?,
        Side::Eta => eta_equation_holds(d, &lam.lambda, &g0)?,
    };
    if !ok {
        return Err(Error::CheckFailed(format!("representative for {label} fails its defining equation")));
    }
    let loop_rep = loop_rep(d, &lam.lambda, &g0)?;
    Ok(SphericalClass {
        datum: d.clone(),
        lambda: lam.clone(),
        side,
        label,
        g0,
        loop_rep,
        component_group,
        aut_label: aut,
    })
}

/// Classes of L_lambda-twisted conjugation on the theta side at lambda.
pub fn classify_theta(d: &GroupDatum, lam: &AdmissibleCoweight) -> Result<Vec<SphericalClass>> {
    check_admissible(d, lam)?;
    match d.family {
        Family::Unitary => solve_unitary(d, lam)?
            .into_iter()
            .map(|s| {
                let cg = theta_component_group(d, lam, None)?;
                build_class(d, lam, Side::Theta, s.label, s.g0, cg, None)
            })
            .collect(),
        _ => match solve_gl(d, lam) {
            None => Ok(Vec::new()),
            Some(s) => {
                let cg = theta_component_group(d, lam, Some(&s.kinds))?;
                Ok(vec![build_class(d, lam, Side::Theta, s.label, s.g0, cg, None)?])
            }
        },
    }
}

/// Classes of the eta-twisted action at lambda, labeled by real-form invariants.
pub fn classify_eta(d: &GroupDatum, lam: &AdmissibleCoweight) -> Result<Vec<SphericalClass>> {
    check_admissible(d, lam)?;
    let cg = eta_component_group(d, lam);
    match d.family {
        Family::Unitary => solve_unitary(d, lam)?
            .into_iter()
            .map(|s| {
                let aut = aut_label(d, lam, s.signature);
                build_class(d, lam, Side::Eta, s.label, s.g0, cg.clone(), Some(aut))
            })
            .collect(),
        _ => match solve_gl(d, lam) {
            None => Ok(Vec::new()),
            Some(s) => {
                let aut = aut_label(d, lam, None);
                Ok(vec![build_class(d, lam, Side::Eta, s.label, s.g0, cg, Some(aut))?])
            }
        },
    }
}

pub fn component_group(c: &SphericalClass) -> Vec<i64> {
    c.component_group.clone()
}

/// Label recomputed from the representative alone: form type per block (GL families) or
/// eigenvalue multiplicities / Hermitian inertia of the middle block (unitary).
pub fn label_from_rep(d: &GroupDatum, lam: &AdmissibleCoweight, side: Side, g0: &Matrix) -> Result<String> {
    let sub = |idx: &[usize]| Matrix::from_fn(idx.len(), |a, b| g0.get(idx[a], idx[b]).clone());
    match d.family {
        Family::Unitary => {
            let (pairs, middle) = unitary_pairs(lam);
            let mut tokens: Vec<String> = pairs.iter().map(|&(b, _)| format!("pair{}", lam.blocks[b].len())).collect();
            if let Some(mid) = middle {
                let idx = &lam.blocks[mid];
                let c = sub(idx).mul(&antidiagonal(idx.len()));
                let c = if d.z.is_one() { c } else { c.scale(&GQ::i().conj()) };
                let (p, q) = match side {
                    Side::Theta => (c.eigenspace_dim(&GQ::one()), c.eigenspace_dim(&GQ::int(-1))),
                    Side::Eta => {
                        let (p, q, _) = c.hermitian_inertia()?;
                        (p, q)
                    }
                };
                tokens.push(format!("sig({p},{q})"));
            }
            Ok(tokens.join(","))
        }
        _ => {
            let mut tokens = Vec::new();
            for b in &lam.blocks {
                let g = sub(b);
                let m = b.len();
                let kind = match side {
                    Side::Theta => {
                        if g.transpose() == g {
                            "Sym"
                        } else if g.transpose() == g.neg() {
                            "Alt"
                        } else {
                            return Err(Error::CheckFailed("block is neither symmetric nor alternating".into()));
                        }
                    }
                    Side::Eta => {
                        let sq = g.mul(&g.conj());
                        if sq.is_identity() {
                            "Sym"
                        } else if sq.neg().is_identity() {
                            "Alt"
                        } else {
                            return Err(Error::CheckFailed("block does not square to a sign".into()));
                        }
                    }
                };
                tokens.push(format!("{kind}{m}"));
            }
            Ok(tokens.join(","))
        }
    }
}
