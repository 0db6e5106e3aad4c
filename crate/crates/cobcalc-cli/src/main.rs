//! Batch command-line front end for the cobcalc library.
//!
//! Every subcommand validates its parameters, runs one library operation,
//! and prints either human-readable text or a canonical JSON report.
//! Exit codes: 0 on success, 1 on a failed mathematical check (a witness is
//! printed), 2 on usage errors. Elapsed time goes to stderr so that JSON
//! output stays byte-identical across runs.

use clap::{Args, Parser, Subcommand};
use cobcalc::chern::ChernContext;
use cobcalc::fgl::{universal_fgl, FormalGroupLaw, LawKind};
use cobcalc::ring::{parse_series, series_from_json, series_to_json, CoeffRing, Series, Vars};
use cobcalc::rr::{
    hrr_projective_space, verify_geometric_series_identity, SpecializedTheory,
};
use cobcalc::selftest::{self, Mutation, Profile};
use cobcalc::zeta;
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;

const DEFAULT_DEGREE: u32 = 6;

#[derive(Parser)]
#[command(
    name = "cobcalc",
    about = "Exact formal-group-law and characteristic-class calculator",
    version
)]
struct Cli {
    /// Emit a canonical JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Formal group laws: the universal law, n-series, formal inverses,
    /// axiom checks.
    Fgl {
        #[command(subcommand)]
        command: FglCommand,
    },
    /// Subset decompositions of formal sums.
    Zeta {
        #[command(subcommand)]
        command: ZetaCommand,
    },
    /// Chern-root calculus and projective-bundle coefficients.
    Chern {
        #[command(subcommand)]
        command: ChernCommand,
    },
    /// Specializations and Riemann-Roch checks.
    Rr {
        #[command(subcommand)]
        command: RrCommand,
    },
    /// Run the module invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum FglCommand {
    /// Construct the universal formal group law over Z[b1..b_(N-1)].
    Universal {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// The n-series [n]x of a law.
    Nseries {
        #[arg(long)]
        law: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
    /// The formal inverse series of a law.
    Inverse {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
    /// Validate the formal-group-law axioms of a series.
    Check {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
}

#[derive(Subcommand)]
enum ZetaCommand {
    /// Decompose [n1]x1 +_F ... +_F [nr]xr by variable support.
    Decompose {
        #[arg(long)]
        law: String,
        #[arg(long, value_delimiter = ',')]
        mult: Vec<i64>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
    /// Verify reassembly, support, splitting and the single-divisor
    /// identity for the given multiplicities.
    Verify {
        #[arg(long)]
        law: String,
        #[arg(long, value_delimiter = ',')]
        mult: Vec<i64>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
}

#[derive(Subcommand)]
enum ChernCommand {
    /// Fundamental-class coefficients u_i, the matrix A and its inverse.
    Pbf {
        #[arg(long)]
        law: String,
        #[arg(long)]
        ranks: usize,
        #[arg(long)]
        caps: u32,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        law_file: Option<String>,
    },
    /// The coefficient matrix A and its inverse only.
    Matrix {
        #[arg(long)]
        law: String,
        #[arg(long)]
        ranks: usize,
        #[arg(long)]
        caps: u32,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        law_file: Option<String>,
    },
    /// Whitney sum formula on a split bundle of rank r1 + r2.
    Whitney {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
        #[arg(long, default_value_t = 2)]
        caps: u32,
        #[arg(long)]
        law_file: Option<String>,
    },
}

#[derive(Subcommand)]
enum RrCommand {
    /// Euler characteristic chi(P^n, O(d)) through the Todd class.
    Hrr {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Conner-Floyd pushforwards pi_!(t^i) on a split bundle.
    CfPush {
        #[arg(long)]
        ranks: usize,
        #[arg(long)]
        caps: u32,
    },
    /// Named power-series identities.
    Identity {
        /// Identity name; currently `geometric-series`.
        name: String,
        #[arg(long)]
        degree: Option<u32>,
    },
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value = "quick")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Inject a deliberate defect: d-sign, a-spec or todd-x2.
    #[arg(long)]
    mutation: Option<String>,
}

enum CliError {
    Usage(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn check_failure(e: impl std::fmt::Display) -> CliError {
    CliError::Check(e.to_string())
}

struct Report {
    precision: u32,
    result: Value,
    text: String,
}

fn default_degree(cli_degree: Option<u32>) -> Result<u32, CliError> {
    if let Some(d) = cli_degree {
        return Ok(d);
    }
    match std::env::var("COBCALC_DEFAULT_DEGREE") {
        Ok(v) => v
            .parse::<u32>()
            .map_err(|_| usage(format!("COBCALC_DEFAULT_DEGREE is not a number: {v}"))),
        Err(_) => Ok(DEFAULT_DEGREE),
    }
}

fn law_kind(name: &str, degree: u32) -> Option<LawKind> {
    match name {
        "add" | "additive" => Some(LawKind::Additive),
        "mult" | "multiplicative" => Some(LawKind::Multiplicative),
        "univ" | "universal" => Some(LawKind::Universal(degree)),
        _ => None,
    }
}

/// Resolve --law / --law-file into a validated law. A non-keyword --law
/// value is parsed as a series in x and y over an inferred ring.
fn resolve_law(
    law: Option<&str>,
    law_file: Option<&str>,
    degree: u32,
) -> Result<FormalGroupLaw, CliError> {
    if let Some(path) = law_file {
        let text = std::fs::read_to_string(path).map_err(usage)?;
        let value: Value = serde_json::from_str(&text).map_err(usage)?;
        let series = series_from_json(&value).map_err(usage)?;
        return FormalGroupLaw::from_series(series).map_err(check_failure);
    }
    let name = law.ok_or_else(|| usage("either --law or --law-file is required"))?;
    if let Some(kind) = law_kind(name, degree) {
        return kind.realize(degree).map_err(check_failure);
    }
    let series = parse_user_series(name, degree)?;
    FormalGroupLaw::from_series(series).map_err(check_failure)
}

/// Parse a user-supplied bivariate series, inferring the ring from the
/// text: b-generators select the graded integer polynomial ring, a slash
/// selects the rationals, everything else the integers.
fn parse_user_series(text: &str, degree: u32) -> Result<Series, CliError> {
    let max_gen = {
        let mut max = 0usize;
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'b' && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 {
                    if let Ok(n) = text[i + 1..j].parse::<usize>() {
                        max = max.max(n);
                    }
                }
            }
            i += 1;
        }
        max
    };
    let ring = if max_gen > 0 {
        CoeffRing::graded_int_poly(max_gen)
    } else if text.contains('/') {
        CoeffRing::rationals()
    } else {
        CoeffRing::integers()
    };
    let vars = Vars::new(["x", "y"]);
    parse_series(text, &ring, &vars, degree, vec![None, None]).map_err(usage)
}

fn run_fgl(cmd: FglCommand) -> Result<Report, CliError> {
    match cmd {
        FglCommand::Universal { degree } => {
            let degree = default_degree(degree)?;
            let model = universal_fgl(degree).map_err(check_failure)?;
            let f = model.law().f();
            Ok(Report {
                precision: degree,
                result: json!({ "law": series_to_json(f) }),
                text: format!("F(x,y) = {f}"),
            })
        }
        FglCommand::Nseries {
            law,
            n,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let law = resolve_law(Some(&law), law_file.as_deref(), degree)?;
            let series = law.n_series(n);
            Ok(Report {
                precision: degree,
                result: json!({ "n": n, "series": series_to_json(&series) }),
                text: format!("[{n}]x = {series}"),
            })
        }
        FglCommand::Inverse {
            law,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let law = resolve_law(law.as_deref(), law_file.as_deref(), degree)?;
            let inv = law.inverse();
            Ok(Report {
                precision: degree,
                result: json!({ "inverse": series_to_json(inv) }),
                text: format!("inv(x) = {inv}"),
            })
        }
        FglCommand::Check {
            law,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let law = resolve_law(law.as_deref(), law_file.as_deref(), degree)?;
            Ok(Report {
                precision: degree,
                result: json!({ "valid": true, "law": series_to_json(law.f()) }),
                text: "law satisfies unitality, commutativity, associativity and has a formal inverse".into(),
            })
        }
    }
}

fn run_zeta(cmd: ZetaCommand) -> Result<Report, CliError> {
    match cmd {
        ZetaCommand::Decompose {
            law,
            mult,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            if mult.is_empty() {
                return Err(usage("--mult needs at least one multiplicity"));
            }
            let law = resolve_law(Some(&law), law_file.as_deref(), degree)?;
            let dec = zeta::decompose(&law, &mult, degree).map_err(check_failure)?;
            let mut components = serde_json::Map::new();
            let mut lines = Vec::new();
            for (mask, series) in dec.components() {
                let label = zeta::subset_label(mask);
                components.insert(label.clone(), series_to_json(series));
                lines.push(format!("F_{label} = {series}"));
            }
            Ok(Report {
                precision: degree,
                result: json!({
                    "multiplicities": dec.multiplicities(),
                    "components": Value::Object(components),
                }),
                text: lines.join("\n"),
            })
        }
        ZetaCommand::Verify {
            law,
            mult,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            if mult.is_empty() {
                return Err(usage("--mult needs at least one multiplicity"));
            }
            let law = resolve_law(Some(&law), law_file.as_deref(), degree)?;
            let dec = zeta::decompose(&law, &mult, degree).map_err(check_failure)?;
            let mut checks = vec![dec.reassembly_check(), dec.support_check()];
            if mult.len() == 1 {
                checks.push(
                    zeta::verify_single_divisor_identity(&law, mult[0]).map_err(check_failure)?,
                );
            } else {
                checks.push(
                    zeta::verify_inductive_splitting(&law, &mult, degree)
                        .map_err(check_failure)?,
                );
            }
            render_checks(degree, checks)
        }
    }
}

fn context_for(
    law: &str,
    law_file: Option<&str>,
    ranks: usize,
    caps: u32,
    degree: u32,
) -> Result<ChernContext, CliError> {
    if ranks == 0 {
        return Err(usage("--ranks must be positive"));
    }
    if law_file.is_some() {
        let custom = resolve_law(Some(law), law_file, degree)?;
        return ChernContext::from_law(custom, &vec![caps; ranks]).map_err(check_failure);
    }
    let kind =
        law_kind(law, degree).ok_or_else(|| usage(format!("unknown law selector {law}")))?;
    ChernContext::new(kind, &vec![caps; ranks]).map_err(check_failure)
}

fn matrix_json(m: &cobcalc::chern::CoefficientMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .map(|row| Value::Array(row.iter().map(series_to_json).collect()))
        .collect();
    Value::Array(rows)
}

fn run_chern(cmd: ChernCommand) -> Result<Report, CliError> {
    match cmd {
        ChernCommand::Pbf {
            law,
            ranks,
            caps,
            degree,
            count,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let ctx = context_for(&law, law_file.as_deref(), ranks, caps, degree)?;
            let pb = ctx.projective_bundle().map_err(check_failure)?;
            let count = count.unwrap_or(2 * ranks + 1);
            let u = pb.fundamental_coefficients(count).map_err(check_failure)?;
            let a = pb.coefficient_matrix().map_err(check_failure)?;
            let inv = a.invert(&ctx).map_err(check_failure)?;
            let mut lines: Vec<String> = u
                .entries()
                .iter()
                .enumerate()
                .map(|(i, s)| format!("u_{i} = {s}"))
                .collect();
            lines.push(format!("A and inv(A) are {ranks}x{ranks}; A*inv(A) = I"));
            Ok(Report {
                precision: degree,
                result: json!({
                    "u": u.entries().iter().map(series_to_json).collect::<Vec<_>>(),
                    "matrix": matrix_json(&a),
                    "inverse": matrix_json(&inv),
                }),
                text: lines.join("\n"),
            })
        }
        ChernCommand::Matrix {
            law,
            ranks,
            caps,
            degree,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let ctx = context_for(&law, law_file.as_deref(), ranks, caps, degree)?;
            let pb = ctx.projective_bundle().map_err(check_failure)?;
            let a = pb.coefficient_matrix().map_err(check_failure)?;
            let inv = a.invert(&ctx).map_err(check_failure)?;
            if !(a.mul(&inv).is_identity(&ctx) && inv.mul(&a).is_identity(&ctx)) {
                return Err(check_failure("A * inv(A) differs from the identity"));
            }
            Ok(Report {
                precision: degree,
                result: json!({
                    "matrix": matrix_json(&a),
                    "inverse": matrix_json(&inv),
                }),
                text: format!("coefficient matrix of rank {ranks} inverts exactly"),
            })
        }
        ChernCommand::Whitney {
            law,
            degree,
            r1,
            r2,
            caps,
            law_file,
        } => {
            let degree = default_degree(degree)?;
            let ctx = context_for(&law, law_file.as_deref(), r1 + r2, caps, degree)?;
            let first: Vec<usize> = (1..=r1).collect();
            let second: Vec<usize> = (r1 + 1..=r1 + r2).collect();
            let whitney = ctx.whitney_check(&first, &second);
            let all: Vec<usize> = (1..=r1 + r2).collect();
            let normalization = ctx.normalization_check(&all);
            render_checks(degree, vec![whitney, normalization])
        }
    }
}

fn run_rr(cmd: RrCommand) -> Result<Report, CliError> {
    match cmd {
        RrCommand::Hrr { n, d } => {
            let chi = hrr_projective_space(n, d).map_err(check_failure)?;
            Ok(Report {
                precision: n,
                result: json!({ "n": n, "d": d, "chi": chi.to_string() }),
                text: format!("chi(P^{n}, O({d})) = {chi}"),
            })
        }
        RrCommand::CfPush { ranks, caps } => {
            if ranks == 0 {
                return Err(usage("--ranks must be positive"));
            }
            let theory = SpecializedTheory::multiplicative();
            let ctx = theory
                .context(&vec![caps; ranks])
                .map_err(check_failure)?;
            let pb = ctx.projective_bundle().map_err(check_failure)?;
            let powers = theory
                .pushforward_powers(&pb, ranks)
                .map_err(check_failure)?;
            let mut lines = Vec::new();
            for (i, p) in powers.iter().enumerate() {
                if p != &ctx.one() {
                    return Err(check_failure(format!(
                        "pi_!(t^{i}) = {p}, expected 1"
                    )));
                }
                lines.push(format!("pi_!(t^{i}) = 1"));
            }
            Ok(Report {
                precision: ChernContext::working_precision(&vec![caps; ranks]),
                result: json!({
                    "pushforwards": powers.iter().map(series_to_json).collect::<Vec<_>>(),
                }),
                text: lines.join("\n"),
            })
        }
        RrCommand::Identity { name, degree } => {
            let degree = default_degree(degree)?.max(12);
            match name.as_str() {
                "geometric-series" => {
                    let out = verify_geometric_series_identity(degree);
                    render_checks(degree, vec![out])
                }
                other => Err(usage(format!("unknown identity {other}"))),
            }
        }
    }
}

fn run_selftest(args: SelftestArgs) -> Result<Report, CliError> {
    let profile = Profile::parse(&args.profile)
        .ok_or_else(|| usage(format!("unknown profile {}", args.profile)))?;
    let mutation = match args.mutation.as_deref() {
        None => None,
        Some(m) => Some(
            Mutation::parse(m)
                .ok_or_else(|| usage(format!("unknown mutation {m}, try d-sign, a-spec, todd-x2")))?,
        ),
    };
    if args.threads == 0 {
        return Err(usage("--threads must be positive"));
    }
    let report = selftest::run(profile, args.seed, mutation, args.threads);
    let mut lines = Vec::new();
    for suite in &report.suites {
        lines.push(match (&suite.witness, suite.passed) {
            (_, true) => format!("{}: ok ({} cases)", suite.name, suite.cases),
            (Some(w), false) => format!("{}: FAILED ({w})", suite.name),
            (None, false) => format!("{}: FAILED", suite.name),
        });
    }
    lines.push(format!(
        "selftest {}: {}",
        args.profile,
        if report.passed { "ok" } else { "FAILED" }
    ));
    if report.passed {
        Ok(Report {
            precision: 0,
            result: serde_json::to_value(&report).expect("report serializes"),
            text: lines.join("\n"),
        })
    } else {
        let failures: Vec<String> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| {
                format!(
                    "{}: FAILED ({})",
                    s.name,
                    s.witness.as_deref().unwrap_or("no witness")
                )
            })
            .collect();
        Err(CliError::Check(failures.join("\n")))
    }
}

fn render_checks(
    precision: u32,
    checks: Vec<cobcalc::CheckOutcome>,
) -> Result<Report, CliError> {
    let failed: Vec<&cobcalc::CheckOutcome> = checks.iter().filter(|c| !c.passed).collect();
    if let Some(first) = failed.first() {
        return Err(CliError::Check(format!("{first}")));
    }
    let lines: Vec<String> = checks.iter().map(|c| c.to_string()).collect();
    Ok(Report {
        precision,
        result: json!({
            "checks": checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed }))
                .collect::<Vec<_>>(),
        }),
        text: lines.join("\n"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Fgl { command } => run_fgl(command),
        Command::Zeta { command } => run_zeta(command),
        Command::Chern { command } => run_chern(command),
        Command::Rr { command } => run_rr(command),
        Command::Selftest(args) => run_selftest(args),
    };
    let elapsed = started.elapsed();
    eprintln!("elapsed: {elapsed:?}");
    match outcome {
        Ok(report) => {
            if cli.json {
                let payload = json!({
                    "command": argv,
                    "precision": report.precision,
                    "result": report.result,
                });
                println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
            } else {
                println!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
