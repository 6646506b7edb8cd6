//! Command-line front end: each subcommand reads sets in the text format,
//! runs one procedure or check, and writes a set file or a CSV report.
//!
//! A run is fully determined by its flags; randomness comes only from
//! `--seed` (ChaCha8).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use nilbohr::avoider::{avoider_run, AvoiderOutcome, ChoicePolicy};
use nilbohr::checkers::{check_delta_star, check_shd_star_sampled, check_sumset_star, StarReport};
use nilbohr::counterexample::{counterexample_search, counterexample_verify, CounterexampleSpec};
use nilbohr::dynamics::{bohr_set, poly_return_set, Arc, BohrTarget, PolyTarget};
use nilbohr::piecewise::pw_witness;
use nilbohr::report::{join_seq, ProcedureRow, PROCEDURE_HEADER, STAR_HEADER};
use nilbohr::sets::{max_gap, upper_density, Gap};
use nilbohr::textfmt::{parse_set_file, serialize_set_text};
use nilbohr::torus::parse_rational;
use nilbohr::{sh_d, GapSumSpec, Interval, IntervalFamily, TorusAngle, WindowedSet};

#[derive(Debug, Parser)]
#[command(name = "nilbohr", version, about = "Experiments with Bohr, nil-Bohr and gap-sum sets")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bohr set of one or more rotations, written as a set file.
    GenBohr(GenBohr),
    /// Return times of a quadratic polynomial rotation, as a set file.
    GenPoly(GenPoly),
    /// Gap-sum set SH_d(P) up to a cap, as a set file.
    GenShd(GenShd),
    /// Build P with SH_d(P) inside a target set; CSV report.
    Avoid(Avoid),
    /// Greedy S whose differences avoid a quadratic return set.
    Counterexample(Counterexample),
    /// Finite star-membership check; CSV report.
    CheckStar(CheckStar),
    /// Longest clean intervals of a structured set inside A; CSV report.
    WitnessPw(WitnessPw),
    /// Densities of a set along an interval family; CSV report.
    Density(Density),
}

#[derive(Debug, Args)]
pub struct GenBohr {
    /// Comma-separated angles (`p/q` or `cf:<name>:<k>`).
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<String>,
    /// One radius for all coordinates or one per angle.
    #[arg(long, value_delimiter = ',', required = true)]
    pub radius: Vec<String>,
    /// Arc centers, one per angle; all zero when omitted.
    #[arg(long, value_delimiter = ',')]
    pub center: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
}

#[derive(Debug, Args)]
pub struct GenPoly {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub radius: String,
    /// `a,b,c` for `(a n² + b n + c) α`.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 0, 0], allow_negative_numbers = true)]
    pub coeffs: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
}

#[derive(Debug, Args)]
pub struct GenShd {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u64>,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct Avoid {
    #[arg(long)]
    pub b_file: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub steps: usize,
    /// `smallest`, `above:<t>` or `random`.
    #[arg(long, default_value = "smallest")]
    pub policy: String,
}

#[derive(Debug, Args)]
pub struct Counterexample {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub epsilon: String,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub bound: u64,
    /// Where `n² α` should land.
    #[arg(long, default_value = "1/3")]
    pub target: String,
    /// When given, also verify Δ(S) against the return set of this radius.
    #[arg(long)]
    pub radius: Option<String>,
    /// CSV report path (in addition to the set written to `--out`).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StarKind {
    Sumset,
    Delta,
    Shd,
}

#[derive(Debug, Args)]
pub struct CheckStar {
    #[arg(long, value_enum)]
    pub kind: StarKind,
    #[arg(long)]
    pub a_file: PathBuf,
    /// Size of E (sumset) or S (delta).
    #[arg(long)]
    pub r: Option<usize>,
    /// Universe bound for the exhaustive checks.
    #[arg(long)]
    pub m: Option<u64>,
    /// Gap bound for the sampled SH_d check.
    #[arg(long)]
    pub d: Option<usize>,
    /// Length of the sampled sequences.
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Family {
    /// Comma-separated `lo:hi` intervals.
    #[arg(long, value_delimiter = ',', conflicts_with = "growing", allow_hyphen_values = true)]
    pub intervals: Vec<String>,
    /// `start,first_len,step,count`: consecutive intervals of growing length.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub growing: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct WitnessPw {
    #[arg(long)]
    pub a_file: PathBuf,
    #[arg(long)]
    pub lambda_file: PathBuf,
    #[command(flatten)]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub min_len: u64,
}

#[derive(Debug, Args)]
pub struct Density {
    #[arg(long)]
    pub a_file: PathBuf,
    #[command(flatten)]
    pub family: Family,
}

/// How a completed run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Success, or the check holds.
    Ok,
    /// Refuted, stuck or not found.
    Negative,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 2,
        }
    }
}

/// Result of [`run`]: the artifact bytes have already been written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: Status,
    pub summary: String,
}

struct Artifact {
    bytes: Vec<u8>,
    status: Status,
    summary: String,
}

pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<RunOutcome> {
    let art = match &cfg.command {
        Command::GenBohr(a) => gen_bohr(a)?,
        Command::GenPoly(a) => gen_poly(a)?,
        Command::GenShd(a) => gen_shd(a)?,
        Command::Avoid(a) => avoid(a, cfg.seed)?,
        Command::Counterexample(a) => counterexample(a, cfg.seed)?,
        Command::CheckStar(a) => check_star(a, cfg.seed)?,
        Command::WitnessPw(a) => witness_pw(a)?,
        Command::Density(a) => density(a)?,
    };
    emit(cfg.out.as_deref(), &art.bytes)?;
    Ok(RunOutcome { status: art.status, summary: art.summary })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(bytes).context("writing to stdout"),
    }
}

/// First 16 hex digits of SHA-256 over `key=value` lines.
pub fn params_hash(pairs: &[(&str, String)]) -> String {
    let mut h = Sha256::new();
    for (k, v) in pairs {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_window(s: &str) -> anyhow::Result<Interval> {
    let (lo, hi) = s
        .split_once(':')
        .with_context(|| format!("window must look like lo:hi, got '{s}'"))?;
    let lo = lo.trim().parse().with_context(|| format!("bad window start '{lo}'"))?;
    let hi = hi.trim().parse().with_context(|| format!("bad window end '{hi}'"))?;
    Ok(Interval::new(lo, hi)?)
}

fn parse_angle(s: &str) -> anyhow::Result<TorusAngle> {
    Ok(TorusAngle::from_str(s)?)
}

fn parse_policy(s: &str, seed: u64) -> anyhow::Result<ChoicePolicy> {
    match s {
        "smallest" => Ok(ChoicePolicy::Smallest),
        "random" => Ok(ChoicePolicy::Random { seed }),
        _ => match s.strip_prefix("above:") {
            Some(t) => Ok(ChoicePolicy::SmallestAbove(
                t.parse().with_context(|| format!("bad threshold '{t}'"))?,
            )),
            None => bail!("unknown policy '{s}' (expected smallest, above:<t> or random)"),
        },
    }
}

fn read_set(path: &Path) -> anyhow::Result<WindowedSet> {
    parse_set_file(path).with_context(|| format!("reading {}", path.display()))
}

fn csv_bytes<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

fn set_artifact(set: &WindowedSet, what: &str) -> Artifact {
    Artifact {
        summary: format!("{what}: {} elements in [{},{})", set.len(), set.lo(), set.hi()),
        bytes: serialize_set_text(set).into_bytes(),
        status: Status::Ok,
    }
}

fn gen_bohr(a: &GenBohr) -> anyhow::Result<Artifact> {
    let window = parse_window(&a.window)?;
    let angles = a.alpha.iter().map(|s| parse_angle(s)).collect::<anyhow::Result<Vec<_>>>()?;
    let mut radii = a.radius.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
    if radii.len() == 1 {
        radii = vec![radii[0].clone(); angles.len()];
    }
    if radii.len() != angles.len() {
        bail!("got {} radii for {} angles", radii.len(), angles.len());
    }
    let centers = if a.center.is_empty() {
        vec![TorusAngle::zero(); angles.len()]
    } else {
        a.center.iter().map(|s| parse_angle(s)).collect::<anyhow::Result<Vec<_>>>()?
    };
    if centers.len() != angles.len() {
        bail!("got {} centers for {} angles", centers.len(), angles.len());
    }
    let coords = angles
        .into_iter()
        .zip(centers.into_iter().zip(radii))
        .map(|(alpha, (c, r))| Ok((alpha, Arc::new(c, r)?)))
        .collect::<nilbohr::Result<Vec<_>>>()?;
    let set = bohr_set(&BohrTarget::new(coords)?, window)?;
    Ok(set_artifact(&set, "gen-bohr"))
}

fn gen_poly(a: &GenPoly) -> anyhow::Result<Artifact> {
    let window = parse_window(&a.window)?;
    let &[c2, c1, c0] = a.coeffs.as_slice() else {
        bail!("--coeffs takes exactly three integers a,b,c");
    };
    let coeffs = (c2, c1, c0);
    let t = PolyTarget::new(parse_angle(&a.alpha)?, coeffs, parse_rational(&a.radius)?)?;
    let set = poly_return_set(&t, window)?;
    Ok(set_artifact(&set, "gen-poly"))
}

fn gen_shd(a: &GenShd) -> anyhow::Result<Artifact> {
    let spec = GapSumSpec::new(a.p.clone(), a.d)?;
    let set = sh_d(&spec, a.cap)?;
    Ok(set_artifact(&set, "gen-shd"))
}

fn avoid(a: &Avoid, seed: u64) -> anyhow::Result<Artifact> {
    let b = read_set(&a.b_file)?;
    let policy = parse_policy(&a.policy, seed)?;
    let outcome = avoider_run(&b, a.d, a.steps, policy)?;
    let hash = params_hash(&[
        ("command", "avoid".into()),
        ("b", serialize_set_text(&b)),
        ("d", a.d.to_string()),
        ("steps", a.steps.to_string()),
        ("policy", a.policy.clone()),
        ("seed", seed.to_string()),
    ]);
    let row = ProcedureRow::from_avoider(hash, &outcome);
    let (status, summary) = match &outcome {
        AvoiderOutcome::Success { p, .. } => (Status::Ok, format!("avoid: PASS P={}", join_seq(p))),
        AvoiderOutcome::Stuck { step, p } => (
            Status::Negative,
            format!("avoid: STUCK at j={step} after P={}", join_seq(p)),
        ),
    };
    Ok(Artifact {
        bytes: csv_bytes(PROCEDURE_HEADER, [row.fields().to_vec()])?,
        status,
        summary,
    })
}

fn counterexample(a: &Counterexample, seed: u64) -> anyhow::Result<Artifact> {
    let alpha = parse_angle(&a.alpha)?;
    let spec = CounterexampleSpec::new(alpha.clone(), parse_rational(&a.epsilon)?, a.count, a.bound)?
        .with_target(parse_angle(&a.target)?);
    let hash = params_hash(&[
        ("command", "counterexample".into()),
        ("alpha", alpha.to_string()),
        ("epsilon", a.epsilon.clone()),
        ("count", a.count.to_string()),
        ("bound", a.bound.to_string()),
        ("target", a.target.clone()),
        ("radius", a.radius.clone().unwrap_or_default()),
        ("seed", seed.to_string()),
    ]);
    let row = |steps: usize, verdict: &str, witness: String| ProcedureRow {
        procedure: "counterexample".into(),
        params_hash: hash.clone(),
        steps_completed: steps as u64,
        verdict: verdict.into(),
        witness,
    };
    let (set, status, verdict_row, summary) = match counterexample_search(&spec) {
        Err(nf) => {
            let r = row(nf.found.len(), "NOTFOUND", join_seq(&nf.found));
            let summary = format!(
                "counterexample: NOTFOUND, {} of {} below {}",
                nf.found.len(),
                a.count,
                a.bound
            );
            let set = WindowedSet::from_members(
                1,
                nf.found.last().map_or(2, |&x| x as i64 + 1),
                nf.found.iter().map(|&x| x as i64),
            )?;
            (set, Status::Negative, r, summary)
        }
        Ok(s) => {
            let members: Vec<i64> = s.iter().collect();
            match &a.radius {
                None => {
                    let summary = format!("counterexample: S={}", join_seq(&members));
                    (s, Status::Ok, row(members.len(), "FOUND", join_seq(&members)), summary)
                }
                Some(radius) => {
                    let radius = parse_rational(radius)?;
                    let t = PolyTarget::squares(alpha, radius)?;
                    let rep = counterexample_verify(&s, &t)?;
                    match rep.witness {
                        None => {
                            let summary =
                                format!("counterexample: EMPTY intersection, S={}", join_seq(&members));
                            (s, Status::Ok, row(members.len(), "EMPTY", join_seq(&members)), summary)
                        }
                        Some((x, y, diff)) => {
                            let summary = format!("counterexample: {y}-{x}={diff} is a return time");
                            let r = row(members.len(), "NONEMPTY", join_seq(&[x, y, diff]));
                            (s, Status::Negative, r, summary)
                        }
                    }
                }
            }
        }
    };
    if let Some(path) = &a.report {
        emit(Some(path), &csv_bytes(PROCEDURE_HEADER, [verdict_row.fields().to_vec()])?)?;
    }
    Ok(Artifact { bytes: serialize_set_text(&set).into_bytes(), status, summary })
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> anyhow::Result<T> {
    v.with_context(|| format!("--{flag} is required for --kind {kind}"))
}

fn check_star(a: &CheckStar, seed: u64) -> anyhow::Result<Artifact> {
    let set = read_set(&a.a_file)?;
    let (report, params): (StarReport, String) = match a.kind {
        StarKind::Sumset => {
            let (r, m) = (need(a.r, "r", "sumset")?, need(a.m, "m", "sumset")?);
            (check_sumset_star(&set, r, m)?, format!("r={r};m={m}"))
        }
        StarKind::Delta => {
            let (r, m) = (need(a.r, "r", "delta")?, need(a.m, "m", "delta")?);
            (check_delta_star(&set, r, m)?, format!("r={r};m={m}"))
        }
        StarKind::Shd => {
            let d = need(a.d, "d", "shd")?;
            let len = need(a.len, "len", "shd")?;
            let trials = need(a.trials, "trials", "shd")?;
            (
                check_shd_star_sampled(&set, d, len, trials, seed)?,
                format!("d={d};len={len};trials={trials}"),
            )
        }
    };
    let status = if report.holds() { Status::Ok } else { Status::Negative };
    let summary = format!(
        "{}: {} after {} candidates{}",
        report.check,
        report.verdict,
        report.enumerated,
        report
            .witness
            .as_deref()
            .map(|w| format!(", witness {{{}}}", join_seq(w)))
            .unwrap_or_default()
    );
    Ok(Artifact {
        bytes: csv_bytes(STAR_HEADER, [report.fields(&params).to_vec()])?,
        status,
        summary,
    })
}

fn family(f: &Family) -> anyhow::Result<IntervalFamily> {
    if !f.growing.is_empty() {
        let g = &f.growing;
        if g.len() != 4 {
            bail!("--growing takes exactly four integers start,first_len,step,count");
        }
        if g[1] < 1 || g[2] < 0 || g[3] < 1 {
            bail!("--growing needs first_len ≥ 1, step ≥ 0, count ≥ 1");
        }
        return Ok(IntervalFamily::growing(g[0], g[1] as u64, g[2] as u64, g[3] as usize)?);
    }
    if f.intervals.is_empty() {
        bail!("give --intervals lo:hi,... or --growing start,first_len,step,count");
    }
    let iv = f.intervals.iter().map(|s| parse_window(s)).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(IntervalFamily::new(iv)?)
}

fn witness_pw(a: &WitnessPw) -> anyhow::Result<Artifact> {
    let set = read_set(&a.a_file)?;
    let lambda = read_set(&a.lambda_file)?;
    let fam = family(&a.family)?;
    let header = ["lambda_id", "k", "lo", "hi", "len"];
    match pw_witness(&set, &lambda, &fam, a.min_len)? {
        None => Ok(Artifact {
            bytes: csv_bytes(header, [])?,
            status: Status::Negative,
            summary: format!("witness-pw: no clean interval of length ≥ {}", a.min_len),
        }),
        Some(w) => {
            let rows = w.picked.iter().map(|p| {
                vec![
                    w.lambda_id.clone(),
                    p.k.to_string(),
                    p.interval.lo.to_string(),
                    p.interval.hi.to_string(),
                    p.interval.len().to_string(),
                ]
            });
            let longest = w.picked.last().map_or(0, |p| p.interval.len());
            Ok(Artifact {
                bytes: csv_bytes(header, rows)?,
                status: Status::Ok,
                summary: format!(
                    "witness-pw: {} of {} intervals picked, longest {longest}",
                    w.picked.len(),
                    fam.intervals().len()
                ),
            })
        }
    }
}

fn density(a: &Density) -> anyhow::Result<Artifact> {
    let set = read_set(&a.a_file)?;
    let fam = family(&a.family)?;
    let upper = upper_density(&set, &fam)?;
    let mut rows = Vec::new();
    for &j in fam.intervals() {
        let gap = match max_gap(&set, j)? {
            Gap::Finite(g) => g.to_string(),
            Gap::Infinite => "inf".into(),
        };
        let count = set.count_in(j.lo, j.hi);
        let ratio = BigRational::new((count as i64).into(), (j.len() as i64).into());
        rows.push(vec![j.to_string(), count.to_string(), j.len().to_string(), ratio.to_string(), gap]);
    }
    Ok(Artifact {
        bytes: csv_bytes(["interval", "count", "len", "density", "max_gap"], rows)?,
        status: Status::Ok,
        summary: format!("density: upper {upper} over {} intervals", fam.intervals().len()),
    })
}
