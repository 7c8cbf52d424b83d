use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use grandlorentz::families::ExtremalFamily;
use grandlorentz::grand::{default_inner_alpha, grand_fun_norm, optimize_eps, Extremum, StarredProfile};
use grandlorentz::io::{is_step_function, parse_sequence, parse_step_function};
use grandlorentz::kfun::{KCouple, KProfile};
use grandlorentz::norms::{
    lambda_norm, lorentz_fun_norm, lorentz_seq_norm, lorentz_seq_star_norm, lpqtau_fun_norm,
};
use grandlorentz::report::{float_17, write_csv, write_jsonl};
use grandlorentz::verify::{
    blowup_sweep, sort_reports, suite_jobs, Suite, SuiteConfig, SweepFamily, SystemChoice, SWEEP_DELTA,
    SWEEP_LEVEL,
};
use grandlorentz::{CheckReport, EpsGrid, Error, GrandParams, NormParams, Verdict};

const OUT_DIR_ENV: &str = "GRANDLORENTZ_OUT_DIR";
const WORKERS_ENV: &str = "GRANDLORENTZ_WORKERS";

#[derive(Parser)]
#[command(name = "grandlorentz", version, about = "Lorentz and grand Lorentz norms and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one norm of a sequence or step-function file.
    Norm(NormArgs),
    /// Run verification suites and write JSON-lines and CSV reports.
    Verify(VerifyArgs),
    /// Write parameter-sweep tables.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    LorentzSeq,
    LorentzStar,
    LorentzFun,
    Lpqtau,
    Lambda,
    GrandSeqStar,
    GrandFun,
}

#[derive(clap::Args)]
struct NormArgs {
    #[arg(long)]
    kind: NormKind,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    /// Outer exponent for `lpqtau` and `lambda`; defaults to q.
    #[arg(long)]
    tau: Option<f64>,
    /// Grand exponent.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Cesaro exponent of the starred norms.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 2048)]
    eps_samples: usize,
    /// Print a JSON object instead of plain text.
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Walsh,
    Trig,
}

impl From<SystemArg> for SystemChoice {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Walsh => SystemChoice::Walsh,
            SystemArg::Trig => SystemChoice::Trig,
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// hardy, bochkarev, imboch, remark38, hy, grand-hy, theorem16, kfun or all.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Corpus size; each suite has its own default.
    #[arg(long)]
    count: Option<usize>,
    /// Comma-separated q values replacing the suite defaults.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2048)]
    eps_samples: usize,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    system: SystemArg,
    #[arg(long, env = OUT_DIR_ENV, default_value = "grandlorentz-out")]
    out_dir: PathBuf,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Blowup,
    EpsProfile,
    KProfile,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Power family with `beta = 1/p - delta`.
    Power,
    Flat,
    Spike,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    kind: SweepKind,
    /// Comma-separated p grid (blowup) or the single p (eps-profile, k-profile).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    p: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Power)]
    family: FamilyArg,
    #[arg(long, default_value_t = SWEEP_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = SWEEP_LEVEL)]
    level: u32,
    #[arg(long, default_value_t = 256)]
    eps_samples: usize,
    /// Second exponent of the couple for k-profile.
    #[arg(long, default_value_t = f64::INFINITY)]
    q1: f64,
    /// `t` grid for k-profile: `2^j` for `j` in `-t_span..=t_span`.
    #[arg(long, default_value_t = 8)]
    t_span: i32,
    /// Input sequence for eps-profile and k-profile.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Divergent(String),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Divergent(msg) => Failure::Divergent(msg),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| config(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_norm(a: &NormArgs) -> Result<(), Failure> {
    let text = read(&a.file)?;
    let mut pr = NormParams::new(a.p, a.q);
    if let Some(t) = a.tau {
        pr = pr.with_tau(t);
    }
    let wants_function = matches!(a.kind, NormKind::LorentzFun | NormKind::Lpqtau | NormKind::GrandFun);
    if wants_function != is_step_function(&text) {
        return Err(config(if wants_function {
            "this norm needs a step-function file (first line \"L <level>\")"
        } else {
            "this norm needs a sequence file"
        }));
    }
    let grand = |alpha: f64| {
        let mut gp = GrandParams::new(a.theta, pr.with_alpha(alpha)).with_samples(a.eps_samples);
        gp.eps_grid = EpsGrid::with_samples(a.eps_samples);
        gp
    };
    let (value, radius) = match a.kind {
        NormKind::LorentzSeq => (lorentz_seq_norm(&parse_sequence(&text)?, &pr)?, 0.0),
        NormKind::LorentzStar => {
            let c = lorentz_seq_star_norm(&parse_sequence(&text)?, &pr.with_alpha(a.alpha.unwrap_or(2.0)))?;
            (c.value, c.radius())
        }
        NormKind::Lambda => {
            let c = lambda_norm(&parse_sequence(&text)?, &pr)?;
            (c.value, c.radius())
        }
        NormKind::LorentzFun => (lorentz_fun_norm(&parse_step_function(&text)?, &pr)?, 0.0),
        NormKind::Lpqtau => (lpqtau_fun_norm(&parse_step_function(&text)?, &pr)?, 0.0),
        NormKind::GrandSeqStar => {
            let alpha = a.alpha.unwrap_or_else(|| default_inner_alpha(a.p));
            let gp = grand(alpha);
            let (v, _) = grandlorentz::grand::grand_seq_star_norm(&parse_sequence(&text)?, &gp)?;
            (v, 0.0)
        }
        NormKind::GrandFun => {
            let (v, _) = grand_fun_norm(&parse_step_function(&text)?, &grand(2.0))?;
            (v, 0.0)
        }
    };
    if a.json {
        println!(
            "{{\"kind\":\"{}\",\"value\":{},\"radius\":{}}}",
            a.kind.to_possible_value().expect("named").get_name(),
            float_17(value),
            float_17(radius)
        );
    } else {
        println!("{value} \u{b1} {radius:e}");
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Result<Vec<CheckReport>, Failure> {
    let suites = Suite::parse_list(&a.suite)?;
    let cfg = SuiteConfig {
        seed: a.seed,
        count: a.count,
        q_values: a.q.clone(),
        eps_samples: a.eps_samples,
        system: a.system.into(),
    };
    let mut jobs = Vec::new();
    for s in suites {
        jobs.extend(suite_jobs(s, &cfg)?);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = a.workers {
        if w == 0 {
            return Err(config("worker count must be positive"));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| config(e.to_string()))?;
    let batches: Vec<_> = pool.install(|| jobs.par_iter().map(|j| j()).collect());
    let mut reports = Vec::new();
    for b in batches {
        reports.extend(b?);
    }
    sort_reports(&mut reports);
    Ok(reports)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let reports = run_verify(a)?;
    fs::create_dir_all(&a.out_dir).map_err(|e| config(format!("{}: {e}", a.out_dir.display())))?;
    let stem = a.out_dir.join(&a.suite);
    let io = |e: std::io::Error| config(e.to_string());
    let jsonl = stem.with_extension("jsonl");
    let csv = stem.with_extension("csv");
    write_jsonl(fs::File::create(&jsonl).map_err(io)?, &reports).map_err(io)?;
    write_csv(fs::File::create(&csv).map_err(io)?, &reports).map_err(io)?;

    let mut names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
    names.dedup();
    println!("{:<20} {:>7} {:>7} {:>12} {:>9}", "check", "pass", "fail", "report-only", "diverged");
    for n in names {
        let count = |v: Verdict| reports.iter().filter(|r| r.check == n && r.verdict == v).count();
        println!(
            "{:<20} {:>7} {:>7} {:>12} {:>9}",
            n,
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::ReportOnly),
            count(Verdict::Diverged)
        );
    }
    println!("seed {}; reports in {} and {}", a.seed, jsonl.display(), csv.display());
    let failed = reports.iter().filter(|r| r.verdict.is_failure()).count();
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

fn single_p(a: &SweepArgs) -> Result<f64, Failure> {
    match a.p.as_slice() {
        [p] => Ok(*p),
        [] => Err(config("empty p grid")),
        _ => Err(config("this sweep takes a single p")),
    }
}

fn input_sequence(a: &SweepArgs) -> Result<grandlorentz::Sequence, Failure> {
    let path = a.input.as_ref().ok_or_else(|| config("--input is required for this sweep"))?;
    Ok(parse_sequence(&read(path)?)?)
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let mut body = String::new();
    match a.kind {
        SweepKind::Blowup => {
            if a.p.is_empty() {
                return Err(config("empty p grid"));
            }
            let family = match a.family {
                FamilyArg::Power => SweepFamily::NearExtremal { delta: a.delta },
                FamilyArg::Flat => SweepFamily::Fixed(ExtremalFamily::Flat),
                FamilyArg::Spike => SweepFamily::Fixed(ExtremalFamily::Spike),
            };
            let t = blowup_sweep(family, &a.p, a.q, a.level)?;
            body.push_str("p,c_emp,c_emp_plain,scaled\n");
            for r in &t.rows {
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    float_17(r.p),
                    float_17(r.c_emp),
                    float_17(r.c_emp_plain),
                    float_17(r.scaled)
                ));
            }
            eprintln!(
                "family {} q {} level {}: slope {:.6} (plain {:.6}), max scaled {:.6}",
                t.family, t.q, t.level, t.slope, t.slope_plain, t.max_scaled
            );
        }
        SweepKind::EpsProfile => {
            let p = single_p(a)?;
            let seq = input_sequence(a)?;
            let alpha = a.alpha.unwrap_or_else(|| default_inner_alpha(p));
            let sp = StarredProfile::new(&seq, p, a.q, alpha)?;
            sp.check_summable()?;
            let grid = EpsGrid::with_samples(a.eps_samples);
            grid.validate()?;
            let theta = a.theta;
            let phi = |e: f64| Ok(e.powf(theta) * sp.at(e)?.mid());
            body.push_str("eps,phi\n");
            for e in grid.points() {
                body.push_str(&format!("{},{}\n", float_17(e), float_17(phi(e)?)));
            }
            let prof = optimize_eps(phi, &grid, Extremum::Max, 1e-10)?;
            eprintln!("sup {:.12} at eps {:.6e}", prof.sup_value, prof.argmax_eps);
        }
        SweepKind::KProfile => {
            let p = single_p(a)?;
            let seq = input_sequence(a)?;
            if a.t_span < 0 {
                return Err(config("t span must be non-negative"));
            }
            let c = KCouple::new(p, a.q, a.q1)?.with_grid(EpsGrid::with_samples(a.eps_samples));
            let prof = KProfile::new(&seq, &c)?;
            body.push_str("t,k_upper\n");
            for j in -a.t_span..=a.t_span {
                let t = (j as f64).exp2();
                body.push_str(&format!("{},{}\n", float_17(t), float_17(prof.k_upper(t))));
            }
        }
    }
    write_out(a.out.as_deref(), &body)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Norm(a) => cmd_norm(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Divergent(msg)) => {
            eprintln!("divergent: {msg}");
            ExitCode::from(3)
        }
    }
}
