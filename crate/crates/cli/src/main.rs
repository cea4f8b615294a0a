//! `gtcodes`: construct, verify, decode, simulate and bound non-adaptive
//! group testing codes.
//!
//! All output is line-oriented `key=value` (or plain index lists for
//! decoding) and every run is byte-reproducible given identical flags and
//! seed, at any thread count. Exit codes: 0 success / property holds,
//! 1 property fails, 2 ambiguous decode, 3 inconsistent decode, 4 build
//! retries exhausted, 64 usage error, 66 unreadable or malformed input file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use gtcodes_core::construct::{build_uffd2, CoverageThreshold, EnsembleParams, DEFAULT_MAX_RETRIES};
use gtcodes_core::decoders::{
    decode_bruteforce_with_budget, decode_comp, decode_dd, decode_uffd, simulate_batch,
    DecodeStatus, DecoderId, DEFAULT_BRUTEFORCE_BUDGET,
};
use gtcodes_core::properties::{
    check_hierarchy_with_budget, is_disjunctive, is_ssm_with_budget, is_uffd, is_union_free,
    PropertyReport, Witness, DEFAULT_SSM_SUBSET_BUDGET,
};
use gtcodes_core::ratebound::{
    collision_probs, known_bounds, optimize_rate, r0, r1, KnownBounds,
};
use gtcodes_core::{BitVector, CodeMatrix, DefectiveSet, Error};

const EX_OK: i32 = 0;
const EX_PROPERTY_FAILED: i32 = 1;
const EX_AMBIGUOUS: i32 = 2;
const EX_INCONSISTENT: i32 = 3;
const EX_RETRIES_EXHAUSTED: i32 = 4;
const EX_USAGE: i32 = 64;
const EX_IO: i32 = 66;

#[derive(Parser)]
#[command(name = "gtcodes", version, about = "Non-adaptive group testing codes: construct, verify, decode, simulate, bound")]
struct Cli {
    /// Thread budget for batch simulation (default: one worker per core)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a verified 2-UFFD code from the constant-weight random ensemble
    Construct {
        /// Number of tests (rows)
        #[arg(long)]
        t: usize,
        /// Column-weight fraction in (0,1); columns have weight floor(p*t)
        #[arg(long)]
        p: f64,
        /// Number of columns to sample before expurgation
        #[arg(long)]
        n: usize,
        /// RNG seed; retries use seed+1, seed+2, ...
        #[arg(long)]
        seed: u64,
        /// Coverage bound applied to every achievable outcome
        #[arg(long, value_enum, default_value_t = ThresholdArg::SqrtHalfN)]
        threshold: ThresholdArg,
        /// Output matrix file; the build report goes to <out>.report
        #[arg(long)]
        out: PathBuf,
        /// Fresh-seed retries after a rejected attempt
        #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
        max_retries: u32,
    },
    /// Verify a code-family property of a matrix
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        /// Defective-set size bound
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Cap on the SSM per-set subset enumeration
        #[arg(long, default_value_t = DEFAULT_SSM_SUBSET_BUDGET)]
        max_subsets: u64,
    },
    /// Decode one outcome vector
    Decode {
        #[arg(long)]
        matrix: PathBuf,
        /// Outcome as a bit string, e.g. 100110
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Cap on brute-force candidate subsets
        #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_BUDGET)]
        max_subsets: u64,
    },
    /// Run seeded decode trials with random planted defective sets
    Simulate {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Rate-bound computations: optimization, pointwise evaluation, exact
    /// collision probabilities, and the known-bounds table
    Bound {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Write the optimizer's (p, R0, R1) sweep as comma-separated lines
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    UnionFree,
    Disjunctive,
    Ssm,
    Uffd,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Comp,
    Dd,
    Uffd,
    Brute,
}

impl From<AlgoArg> for DecoderId {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Comp => DecoderId::Comp,
            AlgoArg::Dd => DecoderId::Dd,
            AlgoArg::Uffd => DecoderId::Uffd,
            AlgoArg::Brute => DecoderId::Brute,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ThresholdArg {
    SqrtHalfN,
    SqrtN,
}

impl From<ThresholdArg> for CoverageThreshold {
    fn from(t: ThresholdArg) -> Self {
        match t {
            ThresholdArg::SqrtHalfN => CoverageThreshold::SqrtHalfN,
            ThresholdArg::SqrtN => CoverageThreshold::SqrtN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Optimize,
    Eval,
    Probs,
    Known,
}

/// A failure with its process exit code; every diagnostic is a single line.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EX_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: EX_IO, message: message.into() }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EX_OK,
                _ => EX_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return EX_USAGE;
        }
        // ignored if a pool was already installed (tests call this twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Construct { t, p, n, seed, threshold, out, max_retries } => {
            run_construct(t, p, n, seed, threshold.into(), &out, max_retries)
        }
        Command::Verify { matrix, d, property, max_subsets } => {
            run_verify(&matrix, d, property, max_subsets)
        }
        Command::Decode { matrix, outcome, d, algo, max_subsets } => {
            run_decode(&matrix, &outcome, d, algo, max_subsets)
        }
        Command::Simulate { matrix, d, algo, trials, seed } => {
            run_simulate(&matrix, d, algo, trials, seed)
        }
        Command::Bound { mode, p, alpha, t, w, d, trace } => {
            run_bound(mode, p, alpha, t, w, d, trace.as_deref())
        }
    }
}

fn load_matrix(path: &Path) -> Result<CodeMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    CodeMatrix::from_text(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn require_d(d: usize) -> Result<(), Failure> {
    if d < 1 {
        return Err(Failure::usage("d must be at least 1"));
    }
    Ok(())
}

fn run_construct(
    t: usize,
    p: f64,
    n: usize,
    seed: u64,
    threshold: CoverageThreshold,
    out: &Path,
    max_retries: u32,
) -> Result<i32, Failure> {
    let params = EnsembleParams::new(t, p, n, seed).map_err(|e| Failure::usage(e.to_string()))?;
    match build_uffd2(&params, threshold, max_retries) {
        Ok(built) => {
            let report = built.report.to_key_values();
            fs::write(out, built.matrix.to_text())
                .map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
            let report_path = PathBuf::from(format!("{}.report", out.display()));
            fs::write(&report_path, &report)
                .map_err(|e| Failure::io(format!("{}: {e}", report_path.display())))?;
            print!("{report}");
            Ok(EX_OK)
        }
        Err(Error::RetriesExhausted { attempts }) => {
            eprintln!("construction rejected on all {attempts} attempts; no files written");
            Ok(EX_RETRIES_EXHAUSTED)
        }
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn witness_line(witness: &Witness) -> String {
    match witness {
        Witness::OutcomeCollision { first, second } => {
            format!("witness: D1={first} D2={second}")
        }
        Witness::CoveredColumn { defectives, column } => {
            format!("witness: D={defectives} covers column j={column}")
        }
        Witness::SsmIntersection { d0, intersection } => {
            format!("witness: D0={d0} intersection={intersection}")
        }
        Witness::OversizedCover { defectives, covered } => {
            format!(
                "witness: D={defectives} covers {} columns {}",
                covered.len(),
                DefectiveSet::new(covered.clone())
            )
        }
    }
}

fn print_single_report(report: &PropertyReport) {
    println!("property={}", report.property);
    println!("d={}", report.d);
    println!("holds={}", report.holds);
    if report.vacuous {
        println!("vacuous=true");
    }
    if let Some(witness) = &report.witness {
        println!("{}", witness_line(witness));
    }
}

fn run_verify(
    matrix: &Path,
    d: usize,
    property: PropertyArg,
    max_subsets: u64,
) -> Result<i32, Failure> {
    require_d(d)?;
    let c = load_matrix(matrix)?;
    let budget_err = |e: Error| match e {
        Error::BudgetExceeded { .. } => {
            Failure::usage(format!("{e}; raise --max-subsets to enumerate this matrix"))
        }
        other => Failure::usage(other.to_string()),
    };
    match property {
        PropertyArg::All => {
            let report = check_hierarchy_with_budget(&c, d, max_subsets).map_err(budget_err)?;
            println!("union-free={}", report.union_free.holds);
            println!("disjunctive={}", report.disjunctive.holds);
            println!("ssm={}", report.ssm.holds);
            println!("uffd={}", report.uffd.holds);
            for single in [&report.union_free, &report.disjunctive, &report.ssm, &report.uffd] {
                if let Some(witness) = &single.witness {
                    println!("{}: {}", single.property, witness_line(witness));
                }
            }
            for violation in &report.violations {
                eprintln!("internal-consistency error: {violation}");
            }
            let ok = report.all_hold() && report.violations.is_empty();
            Ok(if ok { EX_OK } else { EX_PROPERTY_FAILED })
        }
        single => {
            let report = match single {
                PropertyArg::UnionFree => is_union_free(&c, d),
                PropertyArg::Disjunctive => is_disjunctive(&c, d),
                PropertyArg::Ssm => is_ssm_with_budget(&c, d, max_subsets).map_err(budget_err)?,
                PropertyArg::Uffd => is_uffd(&c, d),
                PropertyArg::All => unreachable!(),
            };
            print_single_report(&report);
            Ok(if report.holds { EX_OK } else { EX_PROPERTY_FAILED })
        }
    }
}

fn indices_line(set: &DefectiveSet) -> String {
    let mut line = String::new();
    for (k, i) in set.iter().enumerate() {
        if k > 0 {
            line.push(' ');
        }
        let _ = write!(line, "{i}");
    }
    line
}

fn run_decode(
    matrix: &Path,
    outcome: &str,
    d: usize,
    algo: AlgoArg,
    max_subsets: u64,
) -> Result<i32, Failure> {
    require_d(d)?;
    let c = load_matrix(matrix)?;
    let r = BitVector::from_bits(outcome).map_err(|e| Failure::usage(e.to_string()))?;
    if r.len() != c.t() {
        return Err(Failure::usage(format!(
            "outcome has {} bits but the matrix has t={} tests",
            r.len(),
            c.t()
        )));
    }
    let status = match algo {
        AlgoArg::Comp => DecodeStatus::Ok(decode_comp(&c, &r).expect("length checked")),
        AlgoArg::Dd => DecodeStatus::Ok(decode_dd(&c, &r).expect("length checked")),
        AlgoArg::Uffd => decode_uffd(&c, &r, d).expect("length checked").status,
        AlgoArg::Brute => {
            decode_bruteforce_with_budget(&c, &r, d, max_subsets)
                .map_err(|e| Failure::usage(format!("{e}; raise --max-subsets")))?
                .status
        }
    };
    match status {
        DecodeStatus::Ok(set) => {
            println!("{}", indices_line(&set));
            Ok(EX_OK)
        }
        DecodeStatus::Ambiguous(first, second) => {
            println!("ambiguous");
            eprintln!("matches: D1={first} D2={second}");
            Ok(EX_AMBIGUOUS)
        }
        DecodeStatus::Inconsistent => {
            println!("inconsistent");
            Ok(EX_INCONSISTENT)
        }
    }
}

fn run_simulate(
    matrix: &Path,
    d: usize,
    algo: AlgoArg,
    trials: u64,
    seed: u64,
) -> Result<i32, Failure> {
    require_d(d)?;
    if trials < 1 {
        return Err(Failure::usage("trials must be at least 1"));
    }
    let c = load_matrix(matrix)?;
    let records = simulate_batch(&c, algo.into(), d, trials, seed)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let mut successes = 0u64;
    for (i, rec) in records.iter().enumerate() {
        let (status, recovered) = match &rec.status {
            DecodeStatus::Ok(set) => ("ok", format!("{set}")),
            DecodeStatus::Ambiguous(..) => ("ambiguous", "-".into()),
            DecodeStatus::Inconsistent => ("inconsistent", "-".into()),
        };
        if rec.success {
            successes += 1;
        }
        println!(
            "trial={i} defectives={} status={status} recovered={recovered} success={} step1_size={} examined={}",
            rec.defectives, rec.success, rec.step1_size, rec.candidates_examined
        );
    }
    println!(
        "trials={trials} successes={successes} success_rate={}",
        successes as f64 / trials as f64
    );
    Ok(EX_OK)
}

fn run_bound(
    mode: ModeArg,
    p: Option<f64>,
    alpha: Option<f64>,
    t: Option<usize>,
    w: Option<usize>,
    d: Option<usize>,
    trace: Option<&Path>,
) -> Result<i32, Failure> {
    match mode {
        ModeArg::Optimize => {
            let res = optimize_rate();
            println!("rate={:.10}", res.rate);
            println!("p_star={:.10}", res.p_star);
            println!("alpha_star_r0={:.10}", res.alpha_star_r0);
            println!("alpha_star_r1={:.10}", res.alpha_star_r1);
            println!("r0_min={:.10}", res.r0_min);
            println!("r1_min={:.10}", res.r1_min);
            if let Some(path) = trace {
                let mut text = String::with_capacity(res.trace.len() * 40);
                for point in &res.trace {
                    let _ = writeln!(text, "{:.10},{:.10},{:.10}", point.p, point.r0, point.r1);
                }
                fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            }
            Ok(EX_OK)
        }
        ModeArg::Eval => {
            let p = p.ok_or_else(|| Failure::usage("--mode eval requires --p"))?;
            let alpha = alpha.ok_or_else(|| Failure::usage("--mode eval requires --alpha"))?;
            let v0 = r0(p, alpha).map_err(|e| Failure::usage(e.to_string()))?;
            let v1 = r1(p, alpha).map_err(|e| Failure::usage(e.to_string()))?;
            println!("p={p}");
            println!("alpha={alpha}");
            println!("r0={v0:.10}");
            println!("r1={v1:.10}");
            Ok(EX_OK)
        }
        ModeArg::Probs => {
            let t = t.ok_or_else(|| Failure::usage("--mode probs requires --t"))?;
            let w = w.ok_or_else(|| Failure::usage("--mode probs requires --w"))?;
            let cp = collision_probs(t, w).map_err(|e| Failure::usage(e.to_string()))?;
            println!("t={t}");
            println!("w={w}");
            println!("p0={:e}", cp.p0_f64());
            println!("p1={:e}", cp.p1_f64());
            println!("p0_exact={}", cp.p0);
            println!("p1_exact={}", cp.p1);
            Ok(EX_OK)
        }
        ModeArg::Known => {
            let d = d.unwrap_or(2);
            if d < 2 {
                return Err(Failure::usage("--mode known requires d >= 2"));
            }
            match known_bounds(d) {
                KnownBounds::ForTwo { union_free, disjunctive, ssm, uffd } => {
                    println!("d=2");
                    println!("union_free_lower={}", union_free.lower);
                    println!("union_free_upper={}", union_free.upper);
                    println!("disjunctive_lower={}", disjunctive.lower);
                    println!("disjunctive_upper={}", disjunctive.upper);
                    println!("ssm_lower={}", ssm.lower);
                    println!("ssm_upper={}", ssm.upper);
                    println!("uffd_lower={}", uffd.lower);
                    println!("uffd_upper={}", uffd.upper);
                }
                KnownBounds::Asymptotic { d, lower, upper } => {
                    println!("d={d}");
                    println!("asymptotic=true");
                    println!("lower={lower:.10}");
                    println!("upper={upper:.10}");
                }
            }
            Ok(EX_OK)
        }
    }
}
