//! Gaussian rationals: exact elements of Q(i).

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GQ { re, im }
    }

    pub fn zero() -> Self {
        GQ { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        GQ { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn int(n: i64) -> Self {
        GQ { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn frac(num: i64, den: i64) -> Self {
        GQ {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GQ {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        GQ { re: q, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GQ { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus |x|^2 as a rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GQ { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 {
            return self.inv().and_then(|v| v.pow(-e));
        }
        let mut acc = GQ::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Some(acc)
    }

    /// `eps^k` for `eps` = +1 or -1.
    pub fn sign_pow(eps: i64, k: i64) -> Self {
        if eps == -1 && k.rem_euclid(2) == 1 {
            GQ::int(-1)
        } else {
            GQ::one()
        }
    }

    /// Returns k in 0..4 when self = i^k.
    pub fn unit_exponent(&self) -> Option<u8> {
        let units = [GQ::one(), GQ::i(), GQ::int(-1), -GQ::i()];
        units.iter().position(|u| u == self).map(|p| p as u8)
    }

    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GQ::one(),
            1 => GQ::i(),
            2 => GQ::int(-1),
            _ => -GQ::i(),
        }
    }

    fn fmt_rational(q: &BigRational) -> String {
        if q.denom().is_one() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }
}

impl fmt::Display for GQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = Self::fmt_rational(&self.re);
        if self.im.is_zero() {
            return write!(f, "{re}");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{re}{sign}{}*i", Self::fmt_rational(&self.im.abs()))
    }
}

impl fmt::Debug for GQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl FromStr for GQ {
    type Err = Error;

    /// Accepts `a`, `a/b`, `a/b+c/d*i`, `a/b-c/d*i`, `c/d*i`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GQ::from_rational(parse_rational(&t)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not in leading position
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_s, im_s) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_s {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(GQ { re: parse_rational(re_s)?, im })
    }
}

fn add_rat(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a + b
    }
}

impl std::ops::Add for &GQ {
    type Output = GQ;
    fn add(self, o: &GQ) -> GQ {
        GQ { re: add_rat(&self.re, &o.re), im: add_rat(&self.im, &o.im) }
    }
}

impl std::ops::Sub for &GQ {
    type Output = GQ;
    fn sub(self, o: &GQ) -> GQ {
        GQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl std::ops::Mul for &GQ {
    type Output = GQ;
    fn mul(self, o: &GQ) -> GQ {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => GQ { re: &self.re * &o.re, im: BigRational::zero() },
            (true, false) => GQ { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => GQ { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => {
                if self.re.is_zero() && o.re.is_zero() {
                    return GQ { re: -(&self.im * &o.im), im: BigRational::zero() };
                }
                GQ {
                    re: &self.re * &o.re - &self.im * &o.im,
                    im: &self.re * &o.im + &self.im * &o.re,
                }
            }
        }
    }
}

impl std::ops::Neg for GQ {
    type Output = GQ;
    fn neg(self) -> GQ {
        GQ { re: -self.re, im: -self.im }
    }
}

impl std::ops::Neg for &GQ {
    type Output = GQ;
    fn neg(self) -> GQ {
        GQ { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for GQ {
            type Output = GQ;
            fn $m(self, o: GQ) -> GQ {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "3", "-1/2", "1/2+3/4*i", "0-1*i", "5+1*i"] {
            let x: GQ = s.parse().unwrap();
            let y: GQ = x.to_string().parse().unwrap();
            assert_eq!(x, y);
        }
        assert_eq!("i".parse::<GQ>().unwrap(), GQ::i());
        assert_eq!("-i".parse::<GQ>().unwrap(), -GQ::i());
        assert_eq!("2/4-1/3*i".parse::<GQ>().unwrap(), GQ::complex(1, 2, -1, 3));
        assert!("1/0".parse::<GQ>().is_err());
        assert!("abc".parse::<GQ>().is_err());
    }

    #[test]
    fn field_operations() {
        let a = GQ::complex(1, 2, 3, 1);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(&GQ::i() * &GQ::i(), GQ::int(-1));
        assert_eq!(GQ::i().unit_exponent(), Some(1));
        assert_eq!(GQ::i_pow(-1), -GQ::i());
    }
}
