//! JSON and TSV forms of data, configurations, loops, orbit tables, canonical forms,
//! bundles and Kottwitz points.
//!
//! Scalars are strings such as `3`, `-1/2` or `1/2+3/4*i`. A Laurent polynomial is written
//! as terms joined by ` + `, each term `c`, `c*t` or `c*t^e` with `c` a scalar string, for
//! example `1/2*t^-1 + 2 + 0+1*i*t`. Matrices are arrays of rows.

use num::{BigInt, BigRational, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bundles::{KottwitzPoint, Lines, RealBundleDatum};
use crate::canonical::CanonicalForm;
use crate::error::{Error, Result};
use crate::group::{build_datum, pure_inner_twist, Family, GroupDatum};
use crate::iwahori::{classify_iwahori, enumerate_admissible_tw, IwahoriClass};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Matrix;
use crate::ring::{Mat, Ring};
use crate::scalar::GQ;
use crate::series::{Series, SeriesMatrix};
use crate::spherical::{
    classify_eta, classify_theta, enumerate_admissible, eta_anti_fixed, theta_anti_fixed, Side, SphericalClass,
};

pub type StringMatrix = Vec<Vec<String>>;

/// Central element as four integers: (num_re / den_re) + (num_im / den_im) i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZConfig {
    pub num_re: i64,
    pub den_re: i64,
    pub num_im: i64,
    pub den_im: i64,
}

impl ZConfig {
    pub fn from_gq(z: &GQ) -> Result<Self> {
        let part = |q: &BigRational| -> Result<(i64, i64)> {
            match (q.numer().to_i64(), q.denom().to_i64()) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(Error::Unsupported("central element does not fit in 64-bit integers".into())),
            }
        };
        let (num_re, den_re) = part(&z.re)?;
        let (num_im, den_im) = part(&z.im)?;
        Ok(ZConfig { num_re, den_re, num_im, den_im })
    }

    pub fn to_gq(&self) -> Result<GQ> {
        if self.den_re == 0 || self.den_im == 0 {
            return Err(Error::Parse("zero denominator in z".into()));
        }
        Ok(GQ::new(
            BigRational::new(BigInt::from(self.num_re), BigInt::from(self.den_re)),
            BigRational::new(BigInt::from(self.num_im), BigInt::from(self.den_im)),
        ))
    }
}

/// Datum configuration document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    pub family: String,
    pub n: usize,
    pub epsilon: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ZConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_twist: Option<StringMatrix>,
}

impl DatumConfig {
    pub fn build(&self) -> Result<GroupDatum> {
        let family: Family = self.family.parse()?;
        let z = self.z.as_ref().map(ZConfig::to_gq).transpose()?;
        let d = build_datum(family, self.n, self.epsilon, z)?;
        match &self.inner_twist {
            None => Ok(d),
            Some(rows) => {
                let g = Matrix::from_strings(rows)?;
                if g.n != d.n {
                    return Err(Error::InvalidConfig("inner twist has the wrong size".into()));
                }
                pure_inner_twist(&d, &g).map_err(|e| Error::InvalidConfig(e.to_string()))
            }
        }
    }
}

pub fn parse_config(text: &str) -> Result<DatumConfig> {
    serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
}

pub fn format_laurent(l: &Laurent) -> String {
    if l.terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = l
        .terms
        .iter()
        .map(|(e, c)| match e {
            0 => c.to_string(),
            1 => format!("{c}*t"),
            _ => format!("{c}*t^{e}"),
        })
        .collect();
    parts.join(" + ")
}

pub fn parse_laurent(s: &str) -> Result<Laurent> {
    let mut out = Laurent::zero();
    for term in s.split(" + ") {
        let term = term.trim();
        let (coeff, exp) = match term.rfind('t') {
            Some(k) => {
                let c = term[..k].trim_end_matches('*');
                let rest = &term[k + 1..];
                let e = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?,
                    None if rest.is_empty() => 1,
                    None => return Err(Error::Parse(format!("bad term '{term}'"))),
                };
                let c = match c {
                    "" => GQ::one(),
                    "-" => GQ::int(-1),
                    c => c.parse::<GQ>()?,
                };
                (c, e)
            }
            None => (term.parse::<GQ>()?, 0),
        };
        out.add_term(exp, &coeff);
    }
    Ok(out)
}

pub fn laurent_matrix_to_strings(m: &LaurentMatrix) -> StringMatrix {
    (0..m.n).map(|i| (0..m.n).map(|j| format_laurent(m.get(i, j))).collect()).collect()
}

pub fn laurent_matrix_from_strings(rows: &StringMatrix) -> Result<LaurentMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("loop matrix must be square and nonempty".into()));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_laurent(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_rows(parsed))
}

/// Loop known modulo t^precision; `precision: null` means exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub precision: Option<i64>,
    pub entries: StringMatrix,
}

pub fn series_matrix_to_json(m: &SeriesMatrix) -> SeriesJson {
    SeriesJson { precision: m.prec(), entries: laurent_matrix_to_strings(&m.to_laurent()) }
}

pub fn series_matrix_from_json(s: &SeriesJson) -> Result<SeriesMatrix> {
    let m = laurent_matrix_from_strings(&s.entries)?;
    Ok(m.map(|x| match s.precision {
        Some(p) => Series::truncated(x, p),
        None => Series::exact(x),
    }))
}

/// Loop input for the canonicalizer: either a bare matrix of Laurent strings or an object
/// with an optional precision.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LoopInput {
    Bare(StringMatrix),
    WithPrecision(SeriesJson),
}

impl LoopInput {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn series(&self, precision: Option<i64>) -> Result<SeriesMatrix> {
        match self {
            LoopInput::Bare(rows) => {
                Ok(SeriesMatrix::from_laurent(&laurent_matrix_from_strings(rows)?, None).with_prec(precision))
            }
            LoopInput::WithPrecision(s) => {
                let m = series_matrix_from_json(s)?;
                Ok(match precision {
                    Some(p) => m.with_prec(Some(p.min(s.precision.unwrap_or(p)))),
                    None => m,
                })
            }
        }
    }

    /// Exact loop; rejects truncated input.
    pub fn exact(&self) -> Result<LaurentMatrix> {
        match self {
            LoopInput::Bare(rows) => laurent_matrix_from_strings(rows),
            LoopInput::WithPrecision(s) if s.precision.is_none() => laurent_matrix_from_strings(&s.entries),
            LoopInput::WithPrecision(_) => Err(Error::Parse("the eta side needs an exact loop".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwJson {
    pub lambda: Vec<i64>,
    pub w: Vec<usize>,
}

/// One row of an orbit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub family: String,
    pub n: usize,
    pub epsilon: i64,
    pub z: ZConfig,
    pub side: Side,
    pub level: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tw: Option<TwJson>,
    pub lambda: Vec<i64>,
    pub label: String,
    pub component_group: Vec<i64>,
    pub representative: Option<StringMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_label: Option<String>,
}

pub fn spherical_row(c: &SphericalClass) -> Result<OrbitRow> {
    let d = &c.datum;
    Ok(OrbitRow {
        family: d.family.as_str().into(),
        n: d.n,
        epsilon: d.epsilon,
        z: ZConfig::from_gq(&d.z)?,
        side: c.side,
        level: "spherical".into(),
        tw: None,
        lambda: c.lambda.lambda.clone(),
        label: c.label.clone(),
        component_group: c.component_group.clone(),
        representative: Some(laurent_matrix_to_strings(&c.loop_rep)),
        aut_label: c.aut_label.clone(),
    })
}

/// Iwahori rows carry the torus part of the representative as their label.
pub fn iwahori_row(c: &IwahoriClass) -> Result<OrbitRow> {
    let d = &c.datum;
    Ok(OrbitRow {
        family: d.family.as_str().into(),
        n: d.n,
        epsilon: d.epsilon,
        z: ZConfig::from_gq(&d.z)?,
        side: c.side,
        level: "iwahori".into(),
        tw: Some(TwJson { lambda: c.tw.lambda.clone(), w: c.tw.w.clone() }),
        lambda: c.spherical_parent.clone(),
        label: format!("diag({})", c.g0.entry_strings().join(",")),
        component_group: c.component_group.clone(),
        representative: c.loop_rep.as_ref().map(laurent_matrix_to_strings),
        aut_label: None,
    })
}

fn sort_rows(rows: &mut [OrbitRow]) {
    rows.sort_by(|a, b| {
        let tw = |r: &OrbitRow| r.tw.as_ref().map(|t| (t.lambda.clone(), t.w.clone()));
        a.lambda.cmp(&b.lambda).then(tw(a).cmp(&tw(b))).then(a.label.cmp(&b.label))
    });
}

/// Spherical orbit table for |lambda_i| <= bound, ordered by lambda then label.
pub fn spherical_rows(d: &GroupDatum, bound: i64, side: Side) -> Result<Vec<OrbitRow>> {
    let mut rows = Vec::new();
    for cw in enumerate_admissible(d, bound)? {
        let classes = match side {
            Side::Theta => classify_theta(d, &cw)?,
            Side::Eta => classify_eta(d, &cw)?,
        };
        for c in &classes {
            rows.push(spherical_row(c)?);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn iwahori_rows(d: &GroupDatum, bound: i64, side: Side) -> Result<Vec<OrbitRow>> {
    let mut rows = Vec::new();
    for tw in enumerate_admissible_tw(d, bound)? {
        for c in &classify_iwahori(d, &tw, side)? {
            rows.push(iwahori_row(c)?);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// "(a,b,...)"; the tuple format used by every TSV projection.
pub fn fmt_list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

/// TSV projection: no matrices.
pub fn rows_to_tsv(rows: &[OrbitRow]) -> String {
    let mut out = String::from("side\tlevel\ttw\tlambda\tlabel\tcomponent_group\taut_label\n");
    for r in rows {
        let tw = r.tw.as_ref().map(|t| format!("{};{}", fmt_list(&t.lambda), fmt_list(&t.w))).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.side.as_str(),
            r.level,
            tw,
            fmt_list(&r.lambda),
            r.label,
            fmt_list(&r.component_group),
            r.aut_label.as_deref().unwrap_or("-")
        ));
    }
    out
}

/// Re-ingests a row: rebuilds its datum, parses the representative, checks it is anti-fixed
/// on the row's side and that the classifier still lists the row.
pub fn validate_row(row: &OrbitRow) -> Result<()> {
    let cfg = DatumConfig { family: row.family.clone(), n: row.n, epsilon: row.epsilon, z: Some(row.z.clone()), inner_twist: None };
    let d = cfg.build()?;
    if let Some(rep) = &row.representative {
        let x = laurent_matrix_from_strings(rep)?;
        let ok = match row.side {
            Side::Theta => theta_anti_fixed(&d, &x)?,
            Side::Eta => eta_anti_fixed(&d, &x)?,
        };
        if !ok {
            return Err(Error::NotAntiFixed("row representative".into()));
        }
    }
    let bound = row.tw.as_ref().map_or(&row.lambda, |t| &t.lambda).iter().map(|v| v.abs()).max().unwrap_or(0);
    let table = match row.level.as_str() {
        "spherical" => spherical_rows(&d, bound, row.side)?,
        "iwahori" => iwahori_rows(&d, bound, row.side)?,
        other => return Err(Error::Parse(format!("unknown level {other:?}"))),
    };
    if !table.contains(row) {
        return Err(Error::CheckFailed(format!("row {:?} {} is not in the recomputed table", row.lambda, row.label)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalJson {
    pub side: Side,
    pub lambda: Vec<i64>,
    pub g0: StringMatrix,
    pub class: OrbitRow,
    pub residual_precision: Option<i64>,
    pub certificate: StringMatrix,
}

pub fn canonical_to_json(cf: &CanonicalForm, side: Side) -> Result<CanonicalJson> {
    Ok(CanonicalJson {
        side,
        lambda: cf.lambda.clone(),
        g0: cf.g0.to_strings(),
        class: spherical_row(&cf.class)?,
        residual_precision: cf.residual_precision,
        certificate: laurent_matrix_to_strings(&cf.certificate),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinesJson {
    pub l0: Vec<i64>,
    pub linf: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub splitting: Vec<i64>,
    pub c: StringMatrix,
    pub z: ZConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<LinesJson>,
    pub aut_label: String,
}

pub fn bundle_to_json(b: &RealBundleDatum) -> Result<BundleJson> {
    Ok(BundleJson {
        splitting: b.splitting.clone(),
        c: b.c.to_strings(),
        z: ZConfig::from_gq(&b.z)?,
        lines: b.lines.as_ref().map(|l| LinesJson { l0: l.l0.clone(), linf: l.linf.clone() }),
        aut_label: b.aut_label.clone(),
    })
}

pub fn bundle_from_json(j: &BundleJson, epsilon: i64) -> Result<RealBundleDatum> {
    Ok(RealBundleDatum {
        epsilon,
        z: j.z.to_gq()?,
        splitting: j.splitting.clone(),
        c: Matrix::from_strings(&j.c)?,
        lines: j.lines.as_ref().map(|l| Lines { l0: l.l0.clone(), linf: l.linf.clone() }),
        aut_label: j.aut_label.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KottwitzJson {
    pub lambda: Vec<i64>,
    pub g: StringMatrix,
    pub z: ZConfig,
}

pub fn kottwitz_to_json(p: &KottwitzPoint) -> Result<KottwitzJson> {
    Ok(KottwitzJson { lambda: p.lambda.clone(), g: p.g.to_strings(), z: ZConfig::from_gq(&p.z)? })
}

pub fn kottwitz_from_json(j: &KottwitzJson) -> Result<KottwitzPoint> {
    Ok(KottwitzPoint { lambda: j.lambda.clone(), g: Matrix::from_strings(&j.g)?, z: j.z.to_gq()? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{enumerate_kottwitz, kottwitz_validate};

    #[test]
    fn laurent_text_round_trip() {
        let l = parse_laurent("1/2*t^-1 + 2 + 0+1*i*t + -3*t^4").unwrap();
        assert_eq!(l.coeff(-1), GQ::frac(1, 2));
        assert_eq!(l.coeff(0), GQ::int(2));
        assert_eq!(l.coeff(1), GQ::i());
        assert_eq!(l.coeff(4), GQ::int(-3));
        assert_eq!(parse_laurent(&format_laurent(&l)).unwrap(), l);
        assert_eq!(parse_laurent("t").unwrap(), Laurent::t_pow(1));
        assert_eq!(parse_laurent("-t^-2").unwrap(), Laurent::monomial(GQ::int(-1), -2));
        assert_eq!(parse_laurent("i*t^2").unwrap(), Laurent::monomial(GQ::i(), 2));
        assert_eq!(parse_laurent("0").unwrap(), Laurent::zero());
        assert!(parse_laurent("t^x").is_err());
        assert!(parse_laurent("q").is_err());
    }

    #[test]
    fn config_parsing() {
        let c = parse_config(r#"{"family":"unitary","n":2,"epsilon":1,"inner_twist":[["1","0"],["0","-1"]]}"#).unwrap();
        assert_eq!(c.build().unwrap().names.real_form, "U(1,1)");
        let c = parse_config(r#"{"family":"split_gl","n":2,"epsilon":-1,"z":{"num_re":1,"den_re":1,"num_im":0,"den_im":1}}"#).unwrap();
        assert!(c.build().unwrap().z.is_one());
        assert!(matches!(parse_config(r#"{"family":"split_gl"}"#), Err(Error::InvalidConfig(_))));
        let c = parse_config(r#"{"family":"so","n":2,"epsilon":1}"#).unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn rows_reingest() {
        let d = build_datum(Family::Unitary, 2, 1, None).unwrap();
        let rows = spherical_rows(&d, 1, Side::Eta).unwrap();
        assert_eq!(rows.iter().filter(|r| r.lambda == vec![0, 0]).count(), 3);
        for r in &rows {
            let text = serde_json::to_string(r).unwrap();
            let back: OrbitRow = serde_json::from_str(&text).unwrap();
            assert_eq!(&back, r);
            validate_row(&back).unwrap();
        }
        let tsv = rows_to_tsv(&rows);
        assert_eq!(tsv.lines().count(), rows.len() + 1);
        let s = build_datum(Family::SplitGl, 2, 1, None).unwrap();
        for r in iwahori_rows(&s, 1, Side::Theta).unwrap() {
            validate_row(&r).unwrap();
        }
    }

    #[test]
    fn kottwitz_json_round_trip() {
        let d = build_datum(Family::SplitGl, 2, -1, None).unwrap();
        for p in enumerate_kottwitz(&d, 2).unwrap() {
            let j = kottwitz_to_json(&p).unwrap();
            let back = kottwitz_from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
            assert_eq!(back, p);
            assert!(kottwitz_validate(&back, &d));
        }
    }
}
