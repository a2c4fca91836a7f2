use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loopmatsuki::bundles::{
    class_to_bundle, enumerate_kottwitz, kottwitz_to_loop, kottwitz_validate, loop_to_bundle, loop_to_parabolic_bundle,
};
use loopmatsuki::canonical::{canonicalize_eta, canonicalize_theta};
use loopmatsuki::duality::{match_iwahori, match_spherical, verify_intersection, MatchedPair, PairClasses};
use loopmatsuki::group::GroupDatum;
use loopmatsuki::io::{
    bundle_to_json, canonical_to_json, iwahori_row, kottwitz_to_json, laurent_matrix_to_strings, parse_config,
    fmt_list, rows_to_tsv, spherical_row, spherical_rows, iwahori_rows, BundleJson, CanonicalJson, DatumConfig, KottwitzJson,
    LoopInput, OrbitRow, StringMatrix, ZConfig,
};
use loopmatsuki::iwahori::AffineWeylElement;
use loopmatsuki::scalar::GQ;
use loopmatsuki::selftest::{CriterionReport, CRITERIA};
use loopmatsuki::spherical::{classify_eta, enumerate_admissible, Side};
use loopmatsuki::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "loopmatsuki", version, about = "Twisted-conjugation orbits of loop groups and their Matsuki duality")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Opts {
    /// Datum configuration (JSON); flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// split_gl, quaternionic_gl or unitary.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<i64>,
    /// Central element, e.g. "1", "-1", "i", "-i".
    #[arg(long, global = true, allow_hyphen_values = true)]
    z: Option<String>,
    /// JSON matrix of scalar strings g with g theta0(g) central.
    #[arg(long, global = true, value_name = "FILE")]
    inner_twist: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = LevelArg::Spherical)]
    level: LevelArg,
    #[arg(long, global = true, value_enum)]
    side: Option<SideArg>,
    /// Bound on |lambda_i|.
    #[arg(long, global = true)]
    bound: Option<i64>,
    /// Truncation order for theta-side inputs.
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Compact samples per matched pair.
    #[arg(long, global = true, alias = "verify-samples", default_value_t = 20)]
    samples: usize,
    #[arg(long, global = true, env = "LOOPMATSUKI_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit table up to --bound (theta side unless --side says otherwise).
    Orbits,
    /// Canonical form and certificate of a loop read from INPUT.
    Canonicalize { input: PathBuf },
    /// Matched theta/eta pairs with sampled intersection checks.
    Match,
    /// Real bundle data: of INPUT when given, else of every eta-side class up to --bound.
    Bundle {
        input: Option<PathBuf>,
        /// Translation part of t^lambda w; INPUT is then the cofactor g of t^lambda w g.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        tw_lambda: Option<Vec<i64>>,
        /// Permutation part of t^lambda w, zero-based images.
        #[arg(long, value_delimiter = ',')]
        tw_w: Option<Vec<usize>>,
    },
    /// Points of the Kottwitz set up to --bound.
    Kottwitz,
    /// Acceptance suite.
    Selftest {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum LevelArg {
    Spherical,
    Iwahori,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum SideArg {
    Theta,
    Eta,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Theta => vec![Side::Theta],
            SideArg::Eta => vec![Side::Eta],
            SideArg::Both => vec![Side::Theta, Side::Eta],
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

/// Result of a command: rendered output plus whether every check passed.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn datum(o: &Opts) -> Result<GroupDatum> {
    let mut cfg = match &o.config {
        Some(p) => parse_config(&read(p)?)?,
        None => DatumConfig { family: String::new(), n: 2, epsilon: 1, z: None, inner_twist: None },
    };
    if let Some(f) = &o.family {
        cfg.family = f.clone();
    }
    if cfg.family.is_empty() {
        return Err(Error::InvalidConfig("no family given (use --family or --config)".into()));
    }
    if let Some(n) = o.n {
        cfg.n = n;
    }
    if let Some(e) = o.epsilon {
        cfg.epsilon = e;
    }
    if let Some(z) = &o.z {
        let z: GQ = z.parse().map_err(|e: Error| Error::InvalidConfig(e.to_string()))?;
        cfg.z = Some(ZConfig::from_gq(&z)?);
    }
    if let Some(p) = &o.inner_twist {
        let rows: StringMatrix =
            serde_json::from_str(&read(p)?).map_err(|e| Error::InvalidConfig(format!("inner twist: {e}")))?;
        cfg.inner_twist = Some(rows);
    }
    cfg.build()
}

fn cmd_orbits(o: &Opts) -> Result<Outcome> {
    let d = datum(o)?;
    let bound = o.bound.unwrap_or(2);
    let mut rows = Vec::new();
    for side in o.side.unwrap_or(SideArg::Theta).sides() {
        rows.extend(match o.level {
            LevelArg::Spherical => spherical_rows(&d, bound, side)?,
            LevelArg::Iwahori => iwahori_rows(&d, bound, side)?,
        });
    }
    Ok(Outcome::ok(match o.format {
        Format::Json => to_json(&rows),
        Format::Tsv => rows_to_tsv(&rows),
    }))
}

fn canonical_tsv(rows: &[CanonicalJson]) -> String {
    let mut out = String::from("side\tlambda\tlabel\tcomponent_group\tresidual_precision\taut_label\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.side.as_str(),
            fmt_list(&r.lambda),
            r.class.label,
            fmt_list(&r.class.component_group),
            r.residual_precision.map_or("-".into(), |p| p.to_string()),
            r.class.aut_label.as_deref().unwrap_or("-")
        ));
    }
    out
}

fn cmd_canonicalize(o: &Opts, input: &Path) -> Result<Outcome> {
    let d = datum(o)?;
    let text = std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
    let x = LoopInput::parse(&text)?;
    let mut out = Vec::new();
    for side in o.side.unwrap_or(SideArg::Theta).sides() {
        let cf = match side {
            Side::Theta => canonicalize_theta(&d, &x.series(o.precision)?)?,
            Side::Eta => canonicalize_eta(&d, &x.exact()?)?,
        };
        out.push(canonical_to_json(&cf, side)?);
    }
    Ok(Outcome::ok(match o.format {
        Format::Json if out.len() == 1 => to_json(&out[0]),
        Format::Json => to_json(&out),
        Format::Tsv => canonical_tsv(&out),
    }))
}

#[derive(Serialize)]
struct PairReport {
    theta: OrbitRow,
    eta: OrbitRow,
    component_group: Vec<i64>,
    common_rep: Option<StringMatrix>,
    samples: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct MatchReport {
    level: &'static str,
    bound: i64,
    seed: u64,
    pairs: usize,
    failures: usize,
    matched: Vec<PairReport>,
}

fn pair_report(p: &MatchedPair, samples: usize, seed: u64) -> Result<PairReport> {
    let (theta, eta) = match &p.classes {
        PairClasses::Spherical { theta, eta } => (spherical_row(theta)?, spherical_row(eta)?),
        PairClasses::Iwahori { theta, eta } => (iwahori_row(theta)?, iwahori_row(eta)?),
    };
    let mut failures = Vec::new();
    if theta.component_group != eta.component_group {
        failures.push(format!("component groups differ: {:?} vs {:?}", theta.component_group, eta.component_group));
    }
    let done = if samples > 0 {
        match verify_intersection(p, samples, seed) {
            Ok(r) => {
                failures.extend(r.failures);
                r.samples
            }
            Err(e) => {
                failures.push(e.to_string());
                0
            }
        }
    } else {
        0
    };
    Ok(PairReport {
        theta,
        eta,
        component_group: p.component_group().to_vec(),
        common_rep: p.common_rep.as_ref().map(laurent_matrix_to_strings),
        samples: done,
        failures,
    })
}

fn cmd_match(o: &Opts) -> Result<Outcome> {
    let d = datum(o)?;
    let bound = o.bound.unwrap_or(1);
    let (level, pairs) = match o.level {
        LevelArg::Spherical => ("spherical", match_spherical(&d, bound)?),
        LevelArg::Iwahori => ("iwahori", match_iwahori(&d, bound)?),
    };
    let matched =
        pairs.iter().enumerate().map(|(k, p)| pair_report(p, o.samples, o.seed.wrapping_add(k as u64))).collect::<Result<Vec<_>>>()?;
    let failures = matched.iter().map(|p| p.failures.len()).sum();
    let report = MatchReport { level, bound, seed: o.seed, pairs: matched.len(), failures, matched };
    let text = match o.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::from("lambda\ttheta_label\teta_label\tcomponent_group\tsamples\tfailures\n");
            for p in &report.matched {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    fmt_list(&p.theta.lambda),
                    p.theta.label,
                    p.eta.label,
                    fmt_list(&p.component_group),
                    p.samples,
                    p.failures.len()
                ));
            }
            s
        }
    };
    Ok(Outcome { text, ok: failures == 0 })
}

#[derive(Serialize)]
struct ClassBundle {
    lambda: Vec<i64>,
    label: String,
    bundle: BundleJson,
}

fn bundle_tsv(rows: &[ClassBundle]) -> String {
    let mut s = String::from("lambda\tlabel\tsplitting\tlines\taut_label\n");
    for r in rows {
        let lines = r.bundle.lines.as_ref().map_or("-".into(), |l| format!("{};{}", fmt_list(&l.l0), fmt_list(&l.linf)));
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            fmt_list(&r.lambda),
            r.label,
            fmt_list(&r.bundle.splitting),
            lines,
            r.bundle.aut_label
        ));
    }
    s
}

fn cmd_bundle(o: &Opts, input: Option<&Path>, tw_lambda: Option<&[i64]>, tw_w: Option<&[usize]>) -> Result<Outcome> {
    let d = datum(o)?;
    let rows = match input {
        None => {
            let mut rows = Vec::new();
            for cw in enumerate_admissible(&d, o.bound.unwrap_or(2))? {
                for c in classify_eta(&d, &cw)? {
                    rows.push(ClassBundle { lambda: cw.lambda.clone(), label: c.label.clone(), bundle: bundle_to_json(&class_to_bundle(&c)?)? });
                }
            }
            rows
        }
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let g = LoopInput::parse(&text)?.exact()?;
            let b = match (tw_lambda, tw_w) {
                (None, None) => loop_to_bundle(&d, &g)?,
                (Some(lam), Some(w)) => {
                    let n = d.n;
                    let mut sorted = w.to_vec();
                    sorted.sort_unstable();
                    if lam.len() != n || sorted != (0..n).collect::<Vec<_>>() {
                        return Err(Error::InvalidConfig(format!("--tw-lambda needs {n} entries and --tw-w a permutation of 0..{n}")));
                    }
                    loop_to_parabolic_bundle(&d, &AffineWeylElement::new(lam.to_vec(), w.to_vec()), &g)?
                }
                _ => return Err(Error::InvalidConfig("--tw-lambda and --tw-w go together".into())),
            };
            let lambda = b.splitting.clone();
            vec![ClassBundle { lambda, label: "-".into(), bundle: bundle_to_json(&b)? }]
        }
    };
    Ok(Outcome::ok(match o.format {
        Format::Json if input.is_some() => to_json(&rows[0].bundle),
        Format::Json => to_json(&rows),
        Format::Tsv => bundle_tsv(&rows),
    }))
}

#[derive(Serialize)]
struct KottwitzRow {
    label: String,
    #[serde(flatten)]
    point: KottwitzJson,
}

#[derive(Serialize)]
struct KottwitzReport {
    bound: i64,
    classes: usize,
    points: Vec<KottwitzRow>,
}

fn cmd_kottwitz(o: &Opts) -> Result<Outcome> {
    let d = datum(o)?;
    let bound = o.bound.unwrap_or(1);
    let mut points = Vec::new();
    for p in enumerate_kottwitz(&d, bound)? {
        if !kottwitz_validate(&p, &d) {
            return Err(Error::CheckFailed(format!("enumerated point {:?} does not validate", p.lambda)));
        }
        let cf = canonicalize_eta(&d, &kottwitz_to_loop(&p, &d)?)?;
        points.push(KottwitzRow { label: cf.class.label, point: kottwitz_to_json(&p)? });
    }
    let report = KottwitzReport { bound, classes: points.len(), points };
    Ok(Outcome::ok(match o.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::from("lambda\tlabel\n");
            for p in &report.points {
                s.push_str(&format!("{}\t{}\n", fmt_list(&p.point.lambda), p.label));
            }
            s
        }
    }))
}

fn cmd_selftest(o: &Opts, criteria: Option<&[u32]>) -> Result<Outcome> {
    if let Some(ids) = criteria {
        if let Some(bad) = ids.iter().find(|&&k| k == 0 || k as usize > CRITERIA.len()) {
            return Err(Error::InvalidConfig(format!("no criterion {bad}")));
        }
    }
    let mut reports: Vec<CriterionReport> = Vec::new();
    for (k, f) in CRITERIA.iter().enumerate() {
        let id = k as u32 + 1;
        if criteria.map_or(true, |ids| ids.contains(&id)) {
            let r = f(o.seed);
            eprintln!("{}", r.line());
            reports.push(r);
        }
    }
    let ok = reports.iter().all(CriterionReport::passed);
    let text = match o.format {
        Format::Json => to_json(&reports),
        Format::Tsv => {
            let mut s = String::from("id\tstatus\tchecks\tfailed\ttitle\n");
            for r in &reports {
                let status = if r.passed() { "pass" } else { "fail" };
                s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.id, status, r.checks, r.failed, r.title));
            }
            for r in reports.iter().filter(|r| !r.passed()) {
                for f in &r.failures {
                    s.push_str(&format!("# {}: {}\n", r.id, f));
                }
            }
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn emit(o: &Opts, text: &str) -> Result<()> {
    match &o.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::CheckFailed(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let o = &cli.opts;
    match &cli.command {
        Command::Orbits => cmd_orbits(o),
        Command::Canonicalize { input } => cmd_canonicalize(o, input),
        Command::Match => cmd_match(o),
        Command::Bundle { input, tw_lambda, tw_w } => {
            cmd_bundle(o, input.as_deref(), tw_lambda.as_deref(), tw_w.as_deref())
        }
        Command::Kottwitz => cmd_kottwitz(o),
        Command::Selftest { criteria } => cmd_selftest(o, criteria.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| emit(&cli.opts, &outcome.text).map(|_| outcome.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some checks failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
