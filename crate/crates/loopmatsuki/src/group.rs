//! Configured classical groups and their involutions on constant and loop matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::{Mat, Ring};
use crate::scalar::GQ;
use crate::series::SeriesMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SplitGl,
    QuaternionicGl,
    Unitary,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::SplitGl => "split_gl",
            Family::QuaternionicGl => "quaternionic_gl",
            Family::Unitary => "unitary",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split_gl" => Ok(Family::SplitGl),
            "quaternionic_gl" => Ok(Family::QuaternionicGl),
            "unitary" => Ok(Family::Unitary),
            other => Err(Error::InvalidConfig(format!("unknown family {other:?}"))),
        }
    }
}

/// Informational names of the real form, the complexified fixed group of theta_0 and the compact form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Names {
    pub real_form: String,
    pub k: String,
    pub compact: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDatum {
    pub family: Family,
    pub n: usize,
    pub epsilon: i64,
    pub z: GQ,
    pub w1: Matrix,
    pub w2: Matrix,
    /// Accumulated pure inner twist g: theta_0 and eta_0 are replaced by Ad_g of the base maps.
    pub twist: Matrix,
    pub names: Names,
}

/// Block-diagonal symplectic matrix with blocks [[0, 1], [-1, 0]].
pub fn j_matrix(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            GQ::one()
        } else if i % 2 == 1 && j + 1 == i {
            GQ::int(-1)
        } else {
            GQ::zero()
        }
    })
}

/// Antidiagonal permutation matrix (longest Weyl element).
pub fn antidiagonal(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| if i + j + 1 == n { GQ::one() } else { GQ::zero() })
}

/// Matrices that can be inverted over their coefficient ring.
pub trait InvertMat: Sized {
    fn inv_mat(&self) -> Result<Self>;
}

impl InvertMat for Matrix {
    fn inv_mat(&self) -> Result<Self> {
        self.inverse()
    }
}

impl InvertMat for LaurentMatrix {
    fn inv_mat(&self) -> Result<Self> {
        self.inverse()
    }
}

impl InvertMat for SeriesMatrix {
    fn inv_mat(&self) -> Result<Self> {
        self.inverse()
    }
}

fn lift<R: Ring>(m: &Matrix) -> Mat<R> {
    m.map(|c| R::from_scalar(c.clone()))
}

fn default_names(family: Family, n: usize) -> Names {
    match family {
        Family::SplitGl => Names {
            real_form: format!("GL{n}(R)"),
            k: format!("O{n}(C)"),
            compact: format!("U({n})"),
        },
        Family::QuaternionicGl => Names {
            real_form: format!("GL{}(H)", n / 2),
            k: format!("Sp{n}(C)"),
            compact: format!("U({n})"),
        },
        Family::Unitary => Names {
            real_form: format!("U({n})"),
            k: format!("GL{n}(C)"),
            compact: format!("U({n})"),
        },
    }
}

/// Central twists allowed for a family: fourth roots of unity fixed by both theta_0 and eta_0.
fn z_allowed(family: Family, z: &GQ) -> bool {
    match z.unit_exponent() {
        None => false,
        Some(k) => match family {
            Family::Unitary => true,
            _ => k % 2 == 0,
        },
    }
}

pub fn build_datum(family: Family, n: usize, epsilon: i64, z: Option<GQ>) -> Result<GroupDatum> {
    if n == 0 {
        return Err(Error::InvalidConfig("rank must be positive".into()));
    }
    if family == Family::QuaternionicGl && n % 2 == 1 {
        return Err(Error::InvalidConfig("quaternionic_gl needs even n".into()));
    }
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::InvalidConfig("epsilon must be 1 or -1".into()));
    }
    let z = z.unwrap_or_else(GQ::one);
    if z.unit_exponent().is_none() {
        return Err(Error::Unsupported(format!("central twist {z} is not a fourth root of unity")));
    }
    if !z_allowed(family, &z) {
        return Err(Error::Unsupported(format!(
            "central twist {z} is not fixed by the involutions of {}",
            family.as_str()
        )));
    }
    let w1 = match family {
        Family::SplitGl => Matrix::identity(n),
        Family::QuaternionicGl => j_matrix(n),
        Family::Unitary => antidiagonal(n),
    };
    let mut d = GroupDatum {
        family,
        n,
        epsilon,
        z,
        w1: w1.clone(),
        w2: Matrix::identity(n),
        twist: Matrix::identity(n),
        names: default_names(family, n),
    };
    d.w2 = d.theta0(&w1)?.mul(&w1);
    Ok(d)
}

impl GroupDatum {
    /// Family involution before any inner twist.
    fn theta0_base<R: Ring>(&self, x: &Mat<R>) -> Result<Mat<R>>
    where
        Mat<R>: InvertMat,
    {
        match self.family {
            Family::SplitGl => x.transpose().inv_mat(),
            Family::QuaternionicGl => {
                let j = j_matrix(self.n);
                Ok(lift::<R>(&j).mul(&x.transpose().inv_mat()?).mul(&lift::<R>(&j.neg())))
            }
            Family::Unitary => Ok(x.clone()),
        }
    }

    /// Holomorphic part of eta_0: eta_0(x) = eta0_lin(conj(x)).
    fn eta0_lin_base<R: Ring>(&self, x: &Mat<R>) -> Result<Mat<R>>
    where
        Mat<R>: InvertMat,
    {
        match self.family {
            Family::SplitGl => Ok(x.clone()),
            Family::QuaternionicGl => {
                let j = j_matrix(self.n);
                Ok(lift::<R>(&j).mul(x).mul(&lift::<R>(&j.neg())))
            }
            Family::Unitary => x.transpose().inv_mat(),
        }
    }

    fn ad_twist<R: Ring>(&self, x: Mat<R>) -> Result<Mat<R>> {
        if self.twist.is_identity() {
            return Ok(x);
        }
        let g = lift::<R>(&self.twist);
        let gi = lift::<R>(&self.twist.inverse()?);
        Ok(g.mul(&x).mul(&gi))
    }

    pub fn theta0_gen<R: Ring>(&self, x: &Mat<R>) -> Result<Mat<R>>
    where
        Mat<R>: InvertMat,
    {
        let y = self.theta0_base(x)?;
        self.ad_twist(y)
    }

    fn eta0_lin<R: Ring>(&self, x: &Mat<R>) -> Result<Mat<R>>
    where
        Mat<R>: InvertMat,
    {
        let y = self.eta0_lin_base(x)?;
        self.ad_twist(y)
    }

    pub fn theta0(&self, g: &Matrix) -> Result<Matrix> {
        self.theta0_gen(g)
    }

    pub fn eta0(&self, g: &Matrix) -> Result<Matrix> {
        self.eta0_lin(&g.conj())
    }

    /// Compact involution: inverse conjugate transpose.
    pub fn eta_c0(&self, g: &Matrix) -> Result<Matrix> {
        g.adjoint().inverse()
    }

    /// Ad_{w1^-1} theta_0.
    pub fn alpha_theta(&self, g: &Matrix) -> Result<Matrix> {
        let wi = self.w1.inverse()?;
        Ok(wi.mul(&self.theta0(g)?).mul(&self.w1))
    }

    /// Ad_{w1^-1} eta_0.
    pub fn alpha_eta(&self, g: &Matrix) -> Result<Matrix> {
        let wi = self.w1.inverse()?;
        Ok(wi.mul(&self.eta0(g)?).mul(&self.w1))
    }

    /// theta on Laurent loops: theta_0 applied to gamma(eps t).
    pub fn apply_theta(&self, g: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.theta0_gen(&g.subst(&GQ::int(self.epsilon), 1))
    }

    /// theta on truncated arcs.
    pub fn apply_theta_series(&self, g: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.theta0_gen(&g.subst_scale(&GQ::int(self.epsilon)))
    }

    /// eta on Laurent loops: eta_0 applied to gamma(eps / conj(t)).
    pub fn apply_eta(&self, g: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.eta0_lin(&g.conj().subst(&GQ::int(self.epsilon), -1))
    }

    pub fn z_matrix(&self) -> Matrix {
        Matrix::scalar(self.n, &self.z)
    }

    pub fn z_loop(&self) -> LaurentMatrix {
        LaurentMatrix::from_const(&self.z_matrix())
    }

    pub fn is_twisted(&self) -> bool {
        !self.twist.is_identity()
    }
}

/// Pure inner twist by g with g theta_0(g) = 1 and g eta_0(g) = z: both involutions are
/// conjugated by g, w1 becomes g w1, and w2 and the compact form are unchanged.
pub fn pure_inner_twist(d: &GroupDatum, g: &Matrix) -> Result<GroupDatum> {
    if g.n != d.n {
        return Err(Error::InvalidTwist("dimension mismatch".into()));
    }
    if g.det_gauss().is_zero() {
        return Err(Error::InvalidTwist("twisting element is singular".into()));
    }
    let ge = g.mul(&d.eta0(g)?);
    if ge != d.z_matrix() {
        return Err(Error::InvalidTwist(format!("g eta_0(g) is not {} times the identity", d.z)));
    }
    let gt = g.mul(&d.theta0(g)?);
    if !gt.is_identity() {
        return Err(Error::InvalidTwist("g theta_0(g) is not the identity".into()));
    }
    let mut out = d.clone();
    out.twist = g.mul(&d.twist);
    out.w1 = g.mul(&d.w1);
    out.w2 = out.theta0(&out.w1)?.mul(&out.w1);
    if out.family == Family::Unitary {
        out.names.real_form = unitary_name(&out.twist, &out.z, out.n)?;
    }
    Ok(out)
}

/// Real form of a twisted unitary datum: U(p, q) from the Hermitian form attached to the twist.
fn unitary_name(g: &Matrix, z: &GQ, n: usize) -> Result<String> {
    let h = if z.is_one() {
        g.clone()
    } else if *z == GQ::int(-1) {
        g.scale(&GQ::i())
    } else {
        return Ok(format!("twisted U({n})"));
    };
    let (p, q, _) = h.hermitian_inertia()?;
    if p == 0 || q == 0 {
        Ok(format!("U({n})"))
    } else {
        Ok(format!("U({p},{q})"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DatumReport {
    pub checks: Vec<CheckLine>,
}

impl DatumReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Random invertible matrices with small rational Gaussian entries.
pub fn random_test_matrices(n: usize, count: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let entries: Vec<GQ> = (0..n * n)
            .map(|_| {
                GQ::complex(rng.gen_range(-4..=4), rng.gen_range(1..=3), rng.gen_range(-4..=4), rng.gen_range(1..=3))
            })
            .collect();
        let m = Matrix { n, a: entries };
        if !m.det_gauss().is_zero() {
            out.push(m);
        }
    }
    out
}

pub fn verify_datum(d: &GroupDatum) -> DatumReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, r: Result<bool>, detail: &str| {
        let (pass, detail) = match r {
            Ok(p) => (p, detail.to_string()),
            Err(e) => (false, e.to_string()),
        };
        checks.push(CheckLine { name: name.into(), pass, detail });
    };
    let samples = random_test_matrices(d.n, 20, 0x5eed);
    push(
        "theta0_involution",
        samples.iter().try_fold(true, |acc, g| Ok(acc && d.theta0(&d.theta0(g)?)? == *g)),
        "theta_0 o theta_0 = id on 20 samples",
    );
    push(
        "eta0_involution",
        samples.iter().try_fold(true, |acc, g| Ok(acc && d.eta0(&d.eta0(g)?)? == *g)),
        "eta_0 o eta_0 = id on 20 samples",
    );
    push(
        "compose_to_compact",
        samples.iter().try_fold(true, |acc, g| {
            let c = d.eta_c0(g)?;
            Ok(acc && d.theta0(&d.eta0(g)?)? == c && d.eta0(&d.theta0(g)?)? == c)
        }),
        "theta_0 eta_0 = eta_0 theta_0 = eta_c0 on 20 samples",
    );
    push(
        "w2_relation",
        d.theta0(&d.w1).map(|t| t.mul(&d.w1) == d.w2),
        "w2 = theta_0(w1) w1",
    );
    let borel = (|| -> Result<bool> {
        for i in 0..d.n {
            for j in 0..i {
                let mut e = Matrix::identity(d.n);
                e.set(i, j, GQ::int(3));
                let a = d.alpha_theta(&e)?;
                if (0..d.n).any(|r| (0..r).any(|c| !a.get(r, c).is_zero())) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })();
    push("opposite_borel", borel, "Ad_{w1^-1} theta_0 maps lower unipotent generators to upper triangular");
    let zm = d.z_matrix();
    push(
        "z_central_fixed",
        (|| Ok(d.z.unit_exponent().is_some() && d.theta0(&zm)? == zm && d.eta0(&zm)? == zm))(),
        "z is a fourth root of unity fixed by theta_0 and eta_0",
    );
    let cochar = (|| -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1a);
        for _ in 0..10 {
            let lam: Vec<i64> = (0..d.n).map(|_| rng.gen_range(-5..=5)).collect();
            let t = LaurentMatrix::t_lambda(&lam);
            if d.apply_eta(&t)? != d.apply_theta(&t)? {
                return Ok(false);
            }
        }
        Ok(true)
    })();
    push("eta_theta_on_cocharacters", cochar, "eta(t^lambda) = theta(t^lambda) on 10 random lambda");
    DatumReport { checks }
}

/// Lift of an exact constant matrix to a Laurent loop.
pub fn const_loop(m: &Matrix) -> LaurentMatrix {
    m.map(|c| Laurent::constant(c.clone()))
}
