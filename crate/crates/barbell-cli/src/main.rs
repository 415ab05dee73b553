//! `barbell`: compute the W3 invariant of barbell words, certify quotient
//! verdicts and linear independence, and batch-verify the reference results.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::process::ExitCode;
use std::time::Instant;

use barbell::freeword::{parse_word, BarbellWord, ThetaSpec};
use barbell::groupalg::{poly_from_json, poly_to_json, PolyM1, PolyM2};
use barbell::hexagon::{
    certify_nonzero_m1, certify_nonzero_m2, check_zero_m1, check_zero_m2, gen_label_m1,
    gen_label_m2, verdict_to_json, QuotientConfig, Verdict,
};
use barbell::independence::{
    family_theta, independent_m1, independent_m2, verdict_to_json as indep_to_json, FamilyPattern,
    IndependenceConfig, IndependenceVerdict,
};
use barbell::w3::{classify_counts, w3_m1, w3_m2, Convention, W3Value};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod suites;

#[derive(Parser)]
#[command(
    name = "barbell",
    version,
    about = "W3 invariant of unknotted barbell diffeomorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the raw W3 polynomial of a word and its quotient verdict.
    W3(W3Args),
    /// Run the reference verification suites.
    VerifyPaper(VerifyArgs),
    /// Certify linear independence of a family.
    Independence(IndependenceArgs),
    /// Open experiment: joint independence of two theta family members
    /// theta_k1(e_(k1-alpha), e_(k1-m)) and theta_k2(e_(k2-beta), e_(k2-n)).
    /// Reports the slice-heuristic dependence conditions alongside the
    /// engine's verdict; nothing here is asserted.
    JointTheta(JointThetaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionFlag {
    Mainformula,
    Wordform,
}

impl ConventionFlag {
    fn to_convention(self) -> Convention {
        match self {
            ConventionFlag::Mainformula => Convention::MainFormula,
            ConventionFlag::Wordform => Convention::WordForm,
        }
    }
}

#[derive(Args)]
struct W3Args {
    /// Ambient summand count (1 or 2).
    #[arg(long, default_value_t = 1)]
    m: u8,
    /// Barbell word, e.g. "t^-1 R t^-7 B t^-1".
    #[arg(long)]
    word: Option<String>,
    /// Theta parameter k (use with --v and --w).
    #[arg(long)]
    theta: Option<u32>,
    /// Red linking vector, comma-separated (length k-1).
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    /// Blue linking vector, comma-separated (length k-1).
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Raw-output convention (default: mainformula for m=1, wordform for m=2).
    #[arg(long)]
    convention: Option<ConventionFlag>,
    /// Maximum window margin for the zero search (env: BARBELL_MARGIN).
    #[arg(long)]
    margin: Option<i64>,
    /// Relation word-length bound for the m=2 zero search (env: BARBELL_LENGTH_BOUND).
    #[arg(long)]
    length_bound: Option<u64>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (hexagon-audit, antisym, route-equivalence, delta-prime-zero,
    /// slice-values, factorization-example, m2-example, independence). Repeatable.
    #[arg(long)]
    suite: Vec<String>,
    /// Run every suite.
    #[arg(long)]
    all: bool,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct IndependenceArgs {
    /// Comma-separated family patterns: delta, theta(k-a,k-b), tBtRu^k.
    #[arg(long)]
    family: Option<String>,
    /// Inclusive k-range, e.g. 6..12.
    #[arg(long)]
    k: Option<String>,
    /// Ambient summand count override (inferred from patterns by default).
    #[arg(long)]
    m: Option<u8>,
    /// JSON file with {"m": 1|2, "polys": [{key: "num/den", ...}, ...]}.
    #[arg(long)]
    poly_file: Option<String>,
    /// Window margin for the dependence search (env: BARBELL_MARGIN).
    #[arg(long)]
    margin: Option<i64>,
    /// Annihilation audit bound (env: BARBELL_AUDIT_BOUND).
    #[arg(long)]
    audit_bound: Option<u64>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct JointThetaArgs {
    /// First member: k1,alpha,m (with m > alpha >= 1).
    #[arg(long)]
    first: String,
    /// Second member: k2,beta,n (with n > beta >= 1).
    #[arg(long)]
    second: String,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

fn env_i64(name: &str) -> Option<i64> {
    std::env::var(name).ok()?.parse().ok()
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.parse().ok()
}

fn quotient_config(margin: Option<i64>, length_bound: Option<u64>) -> QuotientConfig {
    QuotientConfig {
        max_margin: margin.or_else(|| env_i64("BARBELL_MARGIN")),
        length_bound: length_bound.or_else(|| env_u64("BARBELL_LENGTH_BOUND")),
        ..QuotientConfig::default()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::W3(args) => cmd_w3(args),
        Command::VerifyPaper(args) => cmd_verify(args),
        Command::Independence(args) => cmd_independence(args),
        Command::JointTheta(args) => cmd_joint_theta(args),
    }
}

fn parse_triple(text: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| format!("bad entry `{s}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!(
            "expected three comma-separated integers, got `{text}`"
        )),
    }
}

fn cmd_joint_theta(args: JointThetaArgs) -> ExitCode {
    let ((k1, alpha, m), (k2, beta, n)) =
        match (parse_triple(&args.first), parse_triple(&args.second)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
    if alpha == 0 || beta == 0 || m <= alpha || n <= beta || k1 <= m || k2 <= n {
        eprintln!("error: need 1 <= alpha < m < k1 and 1 <= beta < n < k2");
        return ExitCode::from(2);
    }
    let member = |k: u32, a: u32, mm: u32| {
        let word = ThetaSpec::unit(k, k - a, k - mm)
            .expect("validated indices")
            .to_word();
        w3_m1(&word, Convention::MainFormula).expect("theta words classify")
    };
    let p1 = member(k1, alpha, m);
    let p2 = member(k2, beta, n);
    // the slice-projection heuristic: the two leading slice survivors are
    // proportional exactly when m - alpha = k2 - n and m - k1 = beta - n
    let (k1i, ai, mi) = (k1 as i64, alpha as i64, m as i64);
    let (k2i, bi, ni) = (k2 as i64, beta as i64, n as i64);
    let heuristic_applicable = (ni - bi) != (ai - mi)
        && (ni - bi) != (k1i - ai)
        && (ni - bi) != (k1i - mi)
        && (mi - ai) != (k2i - bi)
        && (mi - ai) != (k2i - ni);
    let heuristic_dependent = (mi - ai) == (k2i - ni) && (mi - k1i) == (bi - ni);
    let verdict = independent_m1(&[p1, p2], &IndependenceConfig::default());
    let verdict_json = indep_to_json(&verdict);
    if args.json {
        let report = serde_json::json!({
            "command": "joint-theta",
            "inputs": {"first": [k1, alpha, m], "second": [k2, beta, n]},
            "heuristic": {
                "applicable": heuristic_applicable,
                "predicts_dependent": heuristic_dependent,
                "conditions": "dependent iff m - alpha = k2 - n and m - k1 = beta - n",
            },
            "result": verdict_json,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!(
            "members: theta_{k1}(e_{}, e_{}) and theta_{k2}(e_{}, e_{})",
            k1 - alpha,
            k1 - m,
            k2 - beta,
            k2 - n
        );
        println!(
            "slice heuristic: applicable = {heuristic_applicable}, predicts dependent = {heuristic_dependent} (condition: m - alpha = k2 - n and m - k1 = beta - n)"
        );
        match &verdict {
            IndependenceVerdict::Independent(cert) => {
                println!("engine verdict: independent (rank {})", cert.rank)
            }
            IndependenceVerdict::Dependent { combination } => {
                let combo: Vec<String> = combination.iter().map(|c| c.to_string()).collect();
                println!(
                    "engine verdict: dependent (combination [{}])",
                    combo.join(", ")
                );
            }
            IndependenceVerdict::Inconclusive { reason } => {
                println!("engine verdict: inconclusive ({reason})")
            }
        }
    }
    ExitCode::SUCCESS
}

fn parse_vec(text: &str) -> Result<Vec<i64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad vector entry `{s}`: {e}"))
        })
        .collect()
}

fn resolve_word(args: &W3Args) -> Result<BarbellWord, String> {
    match (&args.word, args.theta) {
        (Some(text), None) => parse_word(text, args.m).map_err(|e| e.to_string()),
        (None, Some(k)) => {
            let v = parse_vec(args.v.as_deref().unwrap_or("")).map_err(|e| e.to_string())?;
            let w = parse_vec(args.w.as_deref().unwrap_or("")).map_err(|e| e.to_string())?;
            if args.m != 1 {
                return Err("--theta builds m=1 words".into());
            }
            Ok(ThetaSpec::new(k, v, w)
                .map_err(|e| e.to_string())?
                .to_word())
        }
        _ => Err("provide exactly one of --word or --theta (with --v/--w)".into()),
    }
}

fn cmd_w3(args: W3Args) -> ExitCode {
    let start = Instant::now();
    let word = match resolve_word(&args) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let convention = args
        .convention
        .map(ConventionFlag::to_convention)
        .unwrap_or_else(|| Convention::default_for(args.m));
    let config = quotient_config(args.margin, args.length_bound);

    let (poly_json, poly_text, verdict_json, verdict_text) = match args.m {
        1 => {
            let p = match w3_m1(&word, convention) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let verdict = match check_zero_m1(&p, &config) {
                Ok(Verdict::Inconclusive { .. }) => certify_nonzero_m1(&p),
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let vt = verdict_text_m1(&verdict);
            (
                poly_to_json(&p),
                p.to_string(),
                verdict_to_json(&verdict, gen_label_m1),
                vt,
            )
        }
        _ => {
            let p = match w3_m2(&word, convention) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let verdict = match check_zero_m2(&p, &config) {
                Ok(Verdict::Inconclusive { .. }) => certify_nonzero_m2(&p),
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let vt = verdict_text_m2(&verdict);
            (
                poly_to_json(&p),
                p.to_string(),
                verdict_to_json(&verdict, gen_label_m2),
                vt,
            )
        }
    };

    let counts = classify_counts(&word).ok();
    if args.json {
        let report = serde_json::json!({
            "command": "w3",
            "inputs": {
                "word": word.to_string(),
                "m": args.m,
                "convention": format!("{convention:?}"),
            },
            "degenerate": word.is_degenerate(),
            "counts": counts,
            "poly": poly_json,
            "verdict": verdict_json,
            "timing_ms": start.elapsed().as_millis() as u64,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("word: {word}  (m={})", args.m);
        if word.is_degenerate() {
            println!("note: degenerate word (missing a cuff); W3 = 0 by convention");
        }
        if let Some(c) = counts {
            println!(
                "counts: n1={} n2={} n3={} n4={} n5={} n6={}",
                c.n1, c.n2, c.n3, c.n4, c.n5, c.n6
            );
        }
        println!("w3 = {poly_text}");
        println!("verdict: {verdict_text}");
    }
    ExitCode::SUCCESS
}

fn verdict_text_m1(v: &Verdict<barbell::hexagon::RelationGenM1>) -> String {
    match v {
        Verdict::Zero { witness, .. } => {
            let parts: Vec<String> = witness
                .iter()
                .map(|(g, c)| format!("{} * {}", c, gen_label_m1(g)))
                .collect();
            format!(
                "zero  [witness: {}]",
                if parts.is_empty() {
                    "empty combination".into()
                } else {
                    parts.join(" + ")
                }
            )
        }
        Verdict::Nonzero { functional, value } => {
            format!("nonzero  [functional {functional:?} = {value}]")
        }
        Verdict::Inconclusive { .. } => "inconclusive".into(),
    }
}

fn verdict_text_m2(v: &Verdict<barbell::hexagon::RelationGenM2>) -> String {
    match v {
        Verdict::Zero { witness, .. } => {
            let parts: Vec<String> = witness
                .iter()
                .map(|(g, c)| format!("{} * {}", c, gen_label_m2(g)))
                .collect();
            format!(
                "zero  [witness: {}]",
                if parts.is_empty() {
                    "empty combination".into()
                } else {
                    parts.join(" + ")
                }
            )
        }
        Verdict::Nonzero { functional, value } => {
            format!("nonzero  [functional {functional:?} = {value}]")
        }
        Verdict::Inconclusive { .. } => "inconclusive".into(),
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let all_suites = suites::suite_names();
    let selected: Vec<String> = if args.all || args.suite.is_empty() {
        all_suites.iter().map(|s| s.to_string()).collect()
    } else {
        args.suite.clone()
    };
    let start = Instant::now();
    let mut results = Vec::new();
    let mut failed: Option<String> = None;
    for name in &selected {
        if !all_suites.contains(&name.as_str()) {
            eprintln!(
                "error: unknown suite `{name}` (available: {})",
                all_suites.join(", ")
            );
            return ExitCode::from(2);
        }
        let suite_start = Instant::now();
        let outcome = suites::run_suite(name);
        let elapsed = suite_start.elapsed();
        match &outcome {
            Ok(summary) => {
                if !args.json {
                    println!("PASS {name}: {summary} ({elapsed:.2?})");
                }
                results.push(serde_json::json!({
                    "suite": name, "status": "pass", "summary": summary,
                    "timing_ms": elapsed.as_millis() as u64,
                }));
            }
            Err(failure) => {
                if !args.json {
                    println!("FAIL {name}: {failure}");
                }
                results.push(serde_json::json!({
                    "suite": name, "status": "fail", "failure": failure,
                    "timing_ms": elapsed.as_millis() as u64,
                }));
                if failed.is_none() {
                    failed = Some(format!("{name}: {failure}"));
                }
                break;
            }
        }
    }
    if args.json {
        let report = serde_json::json!({
            "command": "verify-paper",
            "inputs": {"suites": selected},
            "results": results,
            "timing_ms": start.elapsed().as_millis() as u64,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
    match failed {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("verification failed at {f}");
            ExitCode::from(1)
        }
    }
}

/// Splits a comma-separated pattern list without breaking inside parentheses,
/// so `delta,theta(k-1,k-3)` yields two patterns.
fn split_patterns(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn parse_range(text: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("bad range `{text}`, expected lo..hi"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad range start: {e}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad range end: {e}"))?;
    Ok((lo, hi))
}

fn cmd_independence(args: IndependenceArgs) -> ExitCode {
    let start = Instant::now();
    let config = IndependenceConfig {
        margin: args
            .margin
            .or_else(|| env_i64("BARBELL_MARGIN"))
            .unwrap_or(2),
        audit_bound: args
            .audit_bound
            .or_else(|| env_u64("BARBELL_AUDIT_BOUND"))
            .unwrap_or(20),
        ..IndependenceConfig::default()
    };

    let (labels, verdict, m) = if let Some(path) = &args.poly_file {
        match load_poly_file(path, args.m) {
            Ok((labels, FamilyPolys::M1(f))) => (labels, independent_m1(&f, &config), 1),
            Ok((labels, FamilyPolys::M2(f))) => (labels, independent_m2(&f, &config), 2),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    } else {
        let Some(family_text) = &args.family else {
            eprintln!("error: provide --family or --poly-file");
            return ExitCode::from(2);
        };
        let Some(k_text) = &args.k else {
            eprintln!("error: --family needs --k lo..hi");
            return ExitCode::from(2);
        };
        let (k_lo, k_hi) = match parse_range(k_text) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        let mut labels = Vec::new();
        let mut m1_family = Vec::new();
        let mut m2_family = Vec::new();
        for pattern_text in split_patterns(family_text) {
            let pattern = match FamilyPattern::parse(&pattern_text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let members = match family_theta(&pattern, k_lo, k_hi) {
                Ok(ms) => ms,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            for member in members {
                if let Some(note) = &member.note {
                    eprintln!("note: {}: {note}", member.label);
                }
                labels.push(member.label);
                match member.value {
                    W3Value::M1(p) => m1_family.push(p),
                    W3Value::M2(p) => m2_family.push(p),
                }
            }
        }
        match (m1_family.is_empty(), m2_family.is_empty()) {
            (false, true) => {
                let v = independent_m1(&m1_family, &config);
                (labels, v, 1)
            }
            (true, false) => {
                let v = independent_m2(&m2_family, &config);
                (labels, v, 2)
            }
            (true, true) => {
                eprintln!("error: empty family");
                return ExitCode::from(2);
            }
            _ => {
                eprintln!("error: cannot mix m=1 and m=2 patterns in one family");
                return ExitCode::from(2);
            }
        }
    };

    if args.json {
        let report = serde_json::json!({
            "command": "independence",
            "inputs": {"family": labels, "m": m},
            "result": indep_to_json(&verdict),
            "timing_ms": start.elapsed().as_millis() as u64,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("family ({} members, m={m}):", labels.len());
        for l in &labels {
            println!("  {l}");
        }
        match &verdict {
            IndependenceVerdict::Independent(cert) => {
                println!(
                    "verdict: independent  (rank {}, audit bound {})",
                    cert.rank, cert.audit_bound
                );
            }
            IndependenceVerdict::Dependent { combination } => {
                let combo: Vec<String> = combination.iter().map(|c| c.to_string()).collect();
                println!("verdict: dependent  (combination [{}])", combo.join(", "));
            }
            IndependenceVerdict::Inconclusive { reason } => {
                println!("verdict: inconclusive  ({reason})");
            }
        }
    }
    match verdict {
        IndependenceVerdict::Inconclusive { .. } => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

enum FamilyPolys {
    M1(Vec<PolyM1>),
    M2(Vec<PolyM2>),
}

fn load_poly_file(
    path: &str,
    m_override: Option<u8>,
) -> Result<(Vec<String>, FamilyPolys), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let m = m_override
        .or_else(|| value.get("m").and_then(|v| v.as_u64()).map(|v| v as u8))
        .ok_or("poly file needs an \"m\" field (or pass --m)")?;
    let polys = value
        .get("polys")
        .and_then(|v| v.as_array())
        .ok_or("poly file needs a \"polys\" array")?;
    let labels: Vec<String> = (0..polys.len()).map(|i| format!("poly[{i}]")).collect();
    match m {
        1 => {
            let family: Result<Vec<PolyM1>, _> = polys.iter().map(poly_from_json).collect();
            Ok((labels, FamilyPolys::M1(family.map_err(|e| e.to_string())?)))
        }
        2 => {
            let family: Result<Vec<PolyM2>, _> = polys.iter().map(poly_from_json).collect();
            Ok((labels, FamilyPolys::M2(family.map_err(|e| e.to_string())?)))
        }
        other => Err(format!("bad m {other}")),
    }
}
