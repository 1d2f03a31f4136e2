//! Command-line surface: partition tables, dual-path moment computations
//! with verification verdicts, Wick expansions, symmetrizer checks, measure
//! grids and norm reports.
//!
//! Exit codes: 0 on success (and on verdict "equal"), 2 on a verification
//! mismatch, 1 on usage or data errors. Stdout carries only deterministic
//! payload; timing goes to stderr.

mod problem;

use std::fmt::Write as _;
use std::fs;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use problem::ProblemFile;
use typeb::algebra::{rational_to_string, Rational};
use typeb::fock::{apply_symmetrizer, apply_symmetrizer_recursive, FockVector};
use typeb::moments::MomentProblem;
use typeb::orthopoly::{cauchy_cf, stieltjes_density, MeixnerMeasure};
use typeb::partitions::{EpsLetter, ExtendedTypeBPartition, PartitionClass, TypeBPartition};
use typeb::spectral::{
    creation_norm_level_one, creation_norm_profile, creation_norm_upper_bound,
    recursion_factor_norm, recursion_factor_norm_bound, symmetrizer_spectrum, DEFAULT_BASIS_CAP,
};
use typeb::BivariatePoly;

#[derive(Parser)]
#[command(name = "typeb", version, about = "Type-B double Fock space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a partition class, optionally with statistics columns.
    Partitions(PartitionsArgs),
    /// Statistics of one partition given in canonical text form.
    Stats(StatsArgs),
    /// Mixed vacuum moment of a problem file, by either or both routes.
    Moment(MomentArgs),
    /// Wick expansion of an operator word against direct application.
    Wick(WickArgs),
    /// Symmetrizer checks: spectrum or exact decomposition.
    Symmetrizer(SymmetrizerArgs),
    /// Density grid of the q = 0 measure as CSV.
    Measure(MeasureArgs),
    /// Truncated creation norms and recursion-factor norm bounds.
    Norms(NormsArgs),
}

#[derive(Args)]
struct PartitionsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "B")]
    class: String,
    /// Append na/rc/cs columns.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = 6)]
    cap: usize,
}

#[derive(Args)]
struct StatsArgs {
    /// Canonical partition text, e.g. `{(-2,1),(-1,2)}`, with optional `E`
    /// marks per block.
    #[arg(long)]
    partition: String,
}

#[derive(Args)]
struct MomentArgs {
    /// Path to a JSON problem file.
    #[arg(long)]
    problem: String,
    /// combinatorial | oracle | both
    #[arg(long, default_value = "both")]
    method: String,
    /// Optional rational evaluation point for the first parameter.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Optional rational evaluation point for the second parameter.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

#[derive(Args)]
struct WickArgs {
    #[arg(long)]
    problem: String,
    /// Comma-separated letters, e.g. `create,act,gauge`.
    #[arg(long)]
    eps: String,
    /// combinatorial | operator | both
    #[arg(long, default_value = "both")]
    method: String,
}

#[derive(Args)]
struct SymmetrizerArgs {
    /// spectrum | decomposition
    #[arg(long, default_value = "spectrum")]
    check: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = DEFAULT_BASIS_CAP)]
    cap: usize,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    q: f64,
    /// Number of grid rows over the support interval.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Imaginary offset for the inversion column.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Continued-fraction depth for the inversion column when q != 0.
    #[arg(long, default_value_t = 200)]
    depth: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct NormsArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    /// Comma-separated rational coordinates of the left vector.
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    x: String,
    /// Comma-separated rational coordinates of the right vector.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    y: String,
    #[arg(long, default_value_t = 6)]
    max_level: usize,
    /// Highest level for the recursion-factor norm table.
    #[arg(long, default_value_t = 4)]
    factor_levels: usize,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if err.use_stderr() {
                eprint!("{err}");
                std::process::exit(1);
            }
            print!("{err}");
            std::process::exit(0);
        }
    };
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Partitions(args) => run_partitions(args),
        Command::Stats(args) => run_stats(args),
        Command::Moment(args) => run_moment(args),
        Command::Wick(args) => run_wick(args),
        Command::Symmetrizer(args) => run_symmetrizer(args),
        Command::Measure(args) => run_measure(args),
        Command::Norms(args) => run_norms(args),
    };
    eprintln!("time_ms: {}", started.elapsed().as_millis());
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("bad rational `{s}`: {e}"))
}

fn load_problem(path: &str) -> Result<MomentProblem, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    ProblemFile::parse(&text)?.into_problem()
}

fn run_partitions(args: PartitionsArgs) -> Result<i32, String> {
    let class = PartitionClass::from_str(&args.class).map_err(|e| e.to_string())?;
    let rows = TypeBPartition::enumerate_with_cap(args.n, class, args.cap)
        .map_err(|e| e.to_string())?;
    println!(
        "# command: partitions n={} class={} stats={}",
        args.n, args.class, args.stats
    );
    for p in &rows {
        if args.stats {
            let st = p.statistics();
            println!("{p} na={} rc={} cs={}", st.na, st.rc, st.cs);
        } else {
            println!("{p}");
        }
    }
    println!("count: {}", rows.len());
    Ok(0)
}

fn run_stats(args: StatsArgs) -> Result<i32, String> {
    let ext = ExtendedTypeBPartition::from_str(&args.partition).map_err(|e| e.to_string())?;
    let st = ext.base().statistics();
    println!("# command: stats partition={}", args.partition);
    println!("partition: {ext}");
    println!("na: {}", st.na);
    println!("rc: {}", st.rc);
    println!("cs: {}", st.cs);
    println!("minmax: {}", ext.minmax());
    Ok(0)
}

fn run_moment(args: MomentArgs) -> Result<i32, String> {
    let problem = load_problem(&args.problem)?;
    let point = match (&args.alpha, &args.q) {
        (Some(a), Some(q)) => Some((parse_rational_arg(a)?, parse_rational_arg(q)?)),
        (None, None) => None,
        _ => return Err("specialization needs both --alpha and --q".into()),
    };
    println!(
        "# command: moment problem={} method={}",
        args.problem, args.method
    );
    let mut results: Vec<(&str, BivariatePoly)> = Vec::new();
    match args.method.as_str() {
        "combinatorial" => {
            results.push(("combinatorial", problem.moment().map_err(|e| e.to_string())?))
        }
        "oracle" => results.push(("oracle", problem.oracle().map_err(|e| e.to_string())?)),
        "both" => {
            results.push(("combinatorial", problem.moment().map_err(|e| e.to_string())?));
            results.push(("oracle", problem.oracle().map_err(|e| e.to_string())?));
        }
        other => return Err(format!("unknown method `{other}`")),
    }
    for (name, poly) in &results {
        println!("{name}: {poly}");
        if let Some((a, q)) = &point {
            println!(
                "{name}_at(a={},q={}): {}",
                rational_to_string(a),
                rational_to_string(q),
                rational_to_string(&poly.eval(a, q))
            );
        }
    }
    if results.len() == 2 {
        let diff = &results[0].1 - &results[1].1;
        if diff.is_zero() {
            println!("verdict: equal");
        } else {
            println!("verdict: mismatch");
            println!("difference: {diff}");
            return Ok(2);
        }
    }
    Ok(0)
}

fn parse_eps(text: &str) -> Result<Vec<EpsLetter>, String> {
    text.split(',')
        .map(|part| EpsLetter::from_str(part.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn run_wick(args: WickArgs) -> Result<i32, String> {
    let problem = load_problem(&args.problem)?;
    let eps = parse_eps(&args.eps)?;
    println!(
        "# command: wick problem={} eps={} method={}",
        args.problem, args.eps, args.method
    );
    let mut results: Vec<(&str, FockVector)> = Vec::new();
    match args.method.as_str() {
        "combinatorial" => results.push((
            "combinatorial",
            problem.wick_vector(&eps).map_err(|e| e.to_string())?,
        )),
        "operator" => results.push((
            "operator",
            problem.operator_word(&eps).map_err(|e| e.to_string())?,
        )),
        "both" => {
            results.push((
                "combinatorial",
                problem.wick_vector(&eps).map_err(|e| e.to_string())?,
            ));
            results.push((
                "operator",
                problem.operator_word(&eps).map_err(|e| e.to_string())?,
            ));
        }
        other => return Err(format!("unknown method `{other}`")),
    }
    for (name, vector) in &results {
        println!("{name}:");
        println!("{vector}");
    }
    if results.len() == 2 {
        if results[0].1 == results[1].1 {
            println!("verdict: equal");
        } else {
            println!("verdict: mismatch");
            return Ok(2);
        }
    }
    Ok(0)
}

fn run_symmetrizer(args: SymmetrizerArgs) -> Result<i32, String> {
    match args.check.as_str() {
        "spectrum" => {
            let report = symmetrizer_spectrum(args.n, args.d, args.alpha, args.q, args.cap)
                .map_err(|e| e.to_string())?;
            println!(
                "# command: symmetrizer check=spectrum n={} d={} alpha={} q={}",
                args.n, args.d, args.alpha, args.q
            );
            println!("min_eigenvalue: {}", fmt_float(report.min_eigenvalue));
            println!("max_eigenvalue: {}", fmt_float(report.max_eigenvalue));
            println!("determinant: {}", fmt_float(report.determinant));
            println!("det_zero: {}", report.det_zero);
            Ok(0)
        }
        "decomposition" => {
            println!(
                "# command: symmetrizer check=decomposition n={} d={}",
                args.n, args.d
            );
            let size = args.d.pow(2 * args.n as u32);
            if size > args.cap {
                return Err(format!("basis of {size} words exceeds cap {}", args.cap));
            }
            let mut all_equal = true;
            for level in 1..=args.n {
                for idx in 0..args.d.pow(2 * level as u32) {
                    let word = decode_word(idx, 2 * level, args.d);
                    let mut v = FockVector::zero(args.d);
                    v.add_term(word, &BivariatePoly::one());
                    if apply_symmetrizer(&v) != apply_symmetrizer_recursive(&v) {
                        all_equal = false;
                    }
                }
                println!("level {level}: checked {} words", args.d.pow(2 * level as u32));
            }
            if all_equal {
                println!("verdict: equal");
                Ok(0)
            } else {
                println!("verdict: mismatch");
                Ok(2)
            }
        }
        other => Err(format!("unknown check `{other}`")),
    }
}

fn decode_word(mut idx: usize, len: usize, d: usize) -> Vec<u8> {
    let mut word = vec![0u8; len];
    for slot in (0..len).rev() {
        word[slot] = (idx % d) as u8 + 1;
        idx /= d;
    }
    word
}

fn run_measure(args: MeasureArgs) -> Result<i32, String> {
    if args.grid == 0 {
        return Err("grid must be positive".into());
    }
    let measure = MeixnerMeasure::new(args.alpha).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "kind,x,density_closed_form,density_inversion,atom_mass");
    let closed_form = args.q == 0.0;
    for i in 0..args.grid {
        let x = -1.0 + 4.0 * (i as f64 + 0.5) / args.grid as f64;
        let closed = if closed_form {
            fmt_float(measure.density(x))
        } else {
            String::new()
        };
        let inversion = if closed_form {
            fmt_float(stieltjes_density(args.alpha, x, args.eps))
        } else {
            match cauchy_cf(args.alpha, args.q, Complex64::new(x, args.eps), args.depth) {
                Ok(g) => fmt_float(-g.im / std::f64::consts::PI),
                Err(_) => String::new(),
            }
        };
        let _ = writeln!(out, "density,{},{},{},", fmt_float(x), closed, inversion);
    }
    if closed_form {
        if let Some(atom) = measure.atom {
            let _ = writeln!(
                out,
                "atom,{},,,{}",
                fmt_float(atom.location),
                fmt_float(atom.mass)
            );
        }
    }
    match &args.out {
        Some(path) => fs::write(path, out).map_err(|e| format!("cannot write `{path}`: {e}"))?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn parse_vector_arg(text: &str) -> Result<Vec<Rational>, String> {
    text.split(',').map(parse_rational_arg).collect()
}

fn run_norms(args: NormsArgs) -> Result<i32, String> {
    let x = parse_vector_arg(&args.x)?;
    let y = parse_vector_arg(&args.y)?;
    if x.len() != y.len() {
        return Err("x and y must have equal dimension".into());
    }
    println!(
        "# command: norms alpha={} q={} x={} y={} max_level={}",
        args.alpha, args.q, args.x, args.y, args.max_level
    );
    let profile = creation_norm_profile(&x, &y, args.alpha, args.q, args.max_level)
        .map_err(|e| e.to_string())?;
    for (i, value) in profile.iter().enumerate() {
        println!("creation_norm_level_{}: {}", i + 1, fmt_float(*value));
    }
    let lower = creation_norm_level_one(&x, &y, args.alpha);
    let upper = creation_norm_upper_bound(&x, &y, args.alpha, args.q);
    println!("lower_bound: {}", fmt_float(lower));
    println!("upper_bound: {}", fmt_float(upper));
    let norm = *profile.last().expect("nonempty profile");
    let mut ok = norm >= lower - 1e-9 && norm <= upper + 1e-8;
    for n in 1..=args.factor_levels {
        let value = recursion_factor_norm(n, x.len().min(2), args.alpha, args.q);
        let bound = recursion_factor_norm_bound(n, args.alpha, args.q);
        let within = value <= bound + 1e-9;
        ok &= within;
        println!(
            "recursion_factor_level_{n}: norm={} bound={} ok={within}",
            fmt_float(value),
            fmt_float(bound)
        );
    }
    if ok {
        println!("verdict: within_bounds");
        Ok(0)
    } else {
        println!("verdict: bound_violation");
        Ok(2)
    }
}
