use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mpk::branching::GraphContext;
use mpk::group::{cycle_notation, parse_cycle_notation};
use mpk::measures::{
    check_coherence, check_harmonicity, check_mps_consistency, ewens_level, ewens_multi, CheckReport, EwensParams,
    LevelMeasure,
};
use mpk::rational::{format_rational, parse_rational, parse_rational_list, to_f64};
use mpk::sampling::{mc_estimate_ewens, sample_mpd_many, DEFAULT_EPSILON};
use mpk::symfunc::{jack_p, pieri_check, DEFAULT_DEGREE_BOUND};
use mpk::thoma::{kernel_theta, ThomaPoint};
use mpk::wreath::{conjugacy_type, WreathElement};
use mpk::{
    enumerate_multipartitions, enumerate_partitions, Error, FiniteGroupData, MultiPartition, Rational, YoungDiagram,
};

#[derive(Parser)]
#[command(name = "mpk", version, about = "Multiple partition structures, Jack branching graphs and Ewens measures")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Worker threads for parallel reductions (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the multipartitions of n with k components
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Level measures
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Exact verification suites; exit status 1 on failure
    #[command(subcommand)]
    Check(CheckCmd),
    /// Branching graph quantities
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Boundary kernels
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Symmetric functions
    #[command(subcommand)]
    Symfunc(SymfuncCmd),
    /// Random samples
    #[command(subcommand)]
    Sample(SampleCmd),
    /// Monte Carlo estimates
    #[command(subcommand)]
    Estimate(EstimateCmd),
    /// Wreath product elements
    #[command(subcommand)]
    Wreath(WreathCmd),
}

#[derive(Args)]
struct GroupArg {
    /// Builtin group (trivial, Z2, Z3, S3) or path to a group JSON file
    #[arg(long, default_value = "trivial")]
    group: String,
}

#[derive(Args)]
struct EwensArgs {
    #[command(flatten)]
    group: GroupArg,
    /// One parameter per conjugacy class, e.g. 1/2,2,3
    #[arg(long)]
    t: String,
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Multiple Ewens measure on level n
    Ewens {
        #[command(flatten)]
        ewens: EwensArgs,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Ewens levels are coherent along the branching graph
    Coherence {
        #[command(flatten)]
        ewens: EwensArgs,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "0")]
        theta: String,
    },
    /// Ewens measure divided by DIM is harmonic
    Harmonicity {
        #[command(flatten)]
        ewens: EwensArgs,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "0")]
        theta: String,
    },
    /// Ewens levels are consistent under uniform deletion of a ball
    Consistency {
        #[command(flatten)]
        ewens: EwensArgs,
        #[arg(long)]
        max_n: usize,
    },
    /// Character table orthogonality
    Orthogonality {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Pieri rule against the Jack multiplicities
    Pieri {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        theta: String,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// DIM between two multipartitions
    Dim {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Martin kernel K(from, to)
    Martin {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    /// Kernel at a Thoma point read from JSON
    Theta {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Path to a JSON file {"alpha": [[..]], "beta": [[..]], "delta": [..]}
        #[arg(long)]
        omega: String,
    },
}

#[derive(Subcommand)]
enum SymfuncCmd {
    /// Monomial expansion of the Jack polynomial P_lambda
    Jack {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        theta: String,
    },
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Multiple Poisson-Dirichlet draws as JSON lines
    Mpd {
        #[arg(long)]
        t: String,
        #[arg(long)]
        zeta: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum EstimateCmd {
    /// Monte Carlo estimate of a multiple Ewens weight against its exact value
    Ewens {
        #[command(flatten)]
        ewens: EwensArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
}

#[derive(Subcommand)]
enum WreathCmd {
    /// Conjugacy type of (colors; permutation)
    Type {
        #[command(flatten)]
        group: GroupArg,
        /// One-line permutation, 1-based, e.g. 3,2,1
        #[arg(long)]
        perm: String,
        /// Group element labels separated by ';'
        #[arg(long)]
        colors: String,
    },
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(msg) => Failure::Verification(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

struct Output {
    format: Format,
    out: BufWriter<io::Stdout>,
}

impl Output {
    fn table(&mut self, header: &[&str], rows: Vec<Vec<String>>) -> io::Result<()> {
        match self.format {
            Format::Tsv => {
                for row in rows {
                    writeln!(self.out, "{}", row.join("\t"))?;
                }
            }
            Format::Json => {
                let items: Vec<Value> = rows
                    .into_iter()
                    .map(|row| {
                        Value::Object(
                            header.iter().map(|h| h.to_string()).zip(row.into_iter().map(Value::String)).collect(),
                        )
                    })
                    .collect();
                writeln!(self.out, "{}", Value::Array(items))?;
            }
        }
        Ok(())
    }

    fn record(&mut self, value: Value) -> io::Result<()> {
        match self.format {
            Format::Tsv => {
                if let Value::Object(map) = &value {
                    for (key, v) in map {
                        let text = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        writeln!(self.out, "{key}\t{text}")?;
                    }
                }
            }
            Format::Json => writeln!(self.out, "{value}")?,
        }
        Ok(())
    }

    fn report(&mut self, name: &str, report: &CheckReport) -> CmdResult {
        self.record(json!({
            "check": name,
            "passed": report.passed,
            "checked": report.checked,
            "witness": report.witness,
        }))?;
        match &report.witness {
            Some(w) if !report.passed => Err(Failure::Verification(format!("{name} failed: {w}"))),
            _ if !report.passed => Err(Failure::Verification(format!("{name} failed"))),
            _ => Ok(()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load_group(arg: &GroupArg) -> std::result::Result<FiniteGroupData, Failure> {
    let group = FiniteGroupData::load(&arg.group)?;
    for w in group.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(group)
}

fn ewens_params(args: &EwensArgs) -> std::result::Result<(FiniteGroupData, EwensParams), Failure> {
    let group = load_group(&args.group)?;
    let params = EwensParams::new(parse_rational_list(&args.t)?, &group)?;
    Ok((group, params))
}

fn multipartition(text: &str, k: usize) -> std::result::Result<MultiPartition, Failure> {
    let lambda: MultiPartition = text.parse()?;
    if lambda.k() != k {
        return Err(Error::ComponentMismatch { expected: k, got: lambda.k() }.into());
    }
    Ok(lambda)
}

fn levels(params: &EwensParams, max_n: usize) -> Vec<LevelMeasure> {
    (0..=max_n).map(|n| ewens_level(n, params)).collect()
}

/// Resolves a color given as a label, a 0-based index, or cycle notation
/// equivalent to a permutation label.
fn resolve_element(group: &FiniteGroupData, token: &str) -> std::result::Result<usize, Failure> {
    let token = token.trim();
    if let Some(i) = group.element_index(token) {
        return Ok(i);
    }
    if let Ok(i) = token.parse::<usize>() {
        if i < group.order() {
            return Ok(i);
        }
    }
    if let Ok(perm) = parse_cycle_notation(token, 9) {
        if let Some(i) = group.element_index(&cycle_notation(&perm)) {
            return Ok(i);
        }
    }
    Err(usage(format!("unknown element {token:?} of group {}", group.name())))
}

fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn run(cli: Cli) -> CmdResult {
    let mut out = Output { format: cli.format, out: BufWriter::new(io::stdout()) };
    match cli.command {
        Command::Enumerate { n, k } => {
            if k == 0 {
                return Err(usage("k must be at least 1"));
            }
            let rows = enumerate_multipartitions(n, k).into_iter().map(|l| vec![l.to_string()]).collect();
            out.table(&["lambda"], rows)?;
        }
        Command::Measure(MeasureCmd::Ewens { ewens, n }) => {
            let (_, params) = ewens_params(&ewens)?;
            let level = ewens_level(n, &params);
            let rows = enumerate_multipartitions(n, params.t().len())
                .into_iter()
                .map(|l| vec![l.to_string(), format_rational(&level.weight(&l))])
                .collect();
            out.table(&["lambda", "weight"], rows)?;
        }
        Command::Check(check) => run_check(check, &mut out)?,
        Command::Graph(cmd) => {
            let (group, theta, from, to, martin) = match cmd {
                GraphCmd::Dim { group, theta, from, to } => (group, theta, from, to, false),
                GraphCmd::Martin { group, theta, from, to } => (group, theta, from, to, true),
            };
            let group = load_group(&group)?;
            let ctx = GraphContext::new(&group, parse_rational(&theta)?)?;
            let lower = multipartition(&from, group.k())?;
            let upper = multipartition(&to, group.k())?;
            let value = if martin { ctx.martin_kernel(&lower, &upper)? } else { ctx.big_dim(&lower, &upper)? };
            out.record(json!({ if martin { "martin" } else { "dim" }: rational_json(&value) }))?;
        }
        Command::Kernel(KernelCmd::Theta { group, theta, lambda, omega }) => {
            let group = load_group(&group)?;
            let ctx = GraphContext::new(&group, parse_rational(&theta)?)?;
            let lambda = multipartition(&lambda, group.k())?;
            let omega = ThomaPoint::<Rational>::from_json(&std::fs::read_to_string(&omega)?)?;
            let value = kernel_theta(&lambda, &omega, &ctx)?;
            out.record(json!({ "kernel": rational_json(&value), "float": to_f64(&value) }))?;
        }
        Command::Symfunc(SymfuncCmd::Jack { lambda, theta }) => {
            let lambda: YoungDiagram = lambda.parse()?;
            if lambda.size() > DEFAULT_DEGREE_BOUND {
                return Err(usage(format!("degree {} exceeds the bound {DEFAULT_DEGREE_BOUND}", lambda.size())));
            }
            let theta = parse_rational(&theta)?;
            if theta < Rational::from_integer(0.into()) {
                return Err(usage("theta must be non-negative"));
            }
            let p = jack_p(&lambda, &theta);
            match out.format {
                Format::Tsv => writeln!(out.out, "{p}")?,
                Format::Json => {
                    let terms: serde_json::Map<String, Value> =
                        p.terms().iter().map(|(mu, c)| (mu.to_string(), rational_json(c))).collect();
                    writeln!(
                        out.out,
                        "{}",
                        json!({ "lambda": lambda.to_string(), "basis": "monomial", "terms": terms })
                    )?;
                }
            }
        }
        Command::Sample(SampleCmd::Mpd { t, zeta, count, seed, epsilon, out: path }) => {
            let t: Vec<f64> = parse_rational_list(&t)?.iter().map(to_f64).collect();
            let zeta: Vec<f64> = parse_rational_list(&zeta)?.iter().map(to_f64).collect();
            let draws = sample_mpd_many(&t, &zeta, seed, count, epsilon)?;
            let mut sink: Box<dyn Write> = match path {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(io::stdout().lock()),
            };
            for d in &draws {
                writeln!(sink, "{}", serde_json::to_string(d).map_err(|e| usage(e.to_string()))?)?;
            }
            sink.flush()?;
        }
        Command::Estimate(EstimateCmd::Ewens { ewens, lambda, samples, seed, epsilon }) => {
            let (group, params) = ewens_params(&ewens)?;
            let lambda = multipartition(&lambda, group.k())?;
            let exact = ewens_multi(&lambda, &params)?;
            let est = mc_estimate_ewens(&lambda, params.t(), &group, seed, samples, epsilon)?;
            let exact_f = to_f64(&exact);
            out.record(json!({
                "lambda": lambda.to_string(),
                "estimate": est.estimate,
                "std_error": est.std_error,
                "samples": est.samples,
                "exact": rational_json(&exact),
                "exact_float": exact_f,
                "z_score": (est.estimate - exact_f) / est.std_error,
            }))?;
        }
        Command::Wreath(WreathCmd::Type { group, perm, colors }) => {
            let group = load_group(&group)?;
            let perm: Vec<usize> = perm
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| usage(format!("bad permutation entry {p:?}"))))
                .collect::<std::result::Result<_, _>>()?;
            let colors: Vec<usize> =
                colors.split(';').map(|c| resolve_element(&group, c)).collect::<std::result::Result<_, _>>()?;
            let x = WreathElement::from_one_based(colors, &perm)?;
            out.record(json!({ "type": conjugacy_type(&x, &group).to_string() }))?;
        }
    }
    out.out.flush()?;
    Ok(())
}

fn run_check(check: CheckCmd, out: &mut Output) -> CmdResult {
    match check {
        CheckCmd::Coherence { ewens, max_n, theta } => {
            let (group, params) = ewens_params(&ewens)?;
            let ctx = GraphContext::new(&group, parse_rational(&theta)?)?;
            let report = check_coherence(&levels(&params, max_n), &ctx)?;
            out.report("coherence", &report)
        }
        CheckCmd::Harmonicity { ewens, max_n, theta } => {
            let (group, params) = ewens_params(&ewens)?;
            let ctx = GraphContext::new(&group, parse_rational(&theta)?)?;
            let mut phi = HashMap::new();
            for n in 0..=max_n {
                for lambda in enumerate_multipartitions(n, group.k()) {
                    let value = ewens_multi(&lambda, &params)? / ctx.dim(&lambda)?;
                    phi.insert(lambda, value);
                }
            }
            let mut report = CheckReport { passed: true, checked: 0, witness: None };
            for n in 1..=max_n {
                let level = check_harmonicity(&phi, n, &ctx)?;
                report.checked += level.checked;
                if !level.passed {
                    report.passed = false;
                    report.witness = level.witness;
                    break;
                }
            }
            out.report("harmonicity", &report)
        }
        CheckCmd::Consistency { ewens, max_n } => {
            let (_, params) = ewens_params(&ewens)?;
            let report = check_mps_consistency(&levels(&params, max_n))?;
            out.report("consistency", &report)
        }
        CheckCmd::Orthogonality { group, tol } => {
            let group = load_group(&group)?;
            let r = group.check_orthogonality(tol)?;
            let report = CheckReport {
                passed: r.passed,
                checked: group.k() * group.k(),
                witness: (!r.passed).then(|| {
                    format!("rows {} and {} deviate by {:e}", r.worst_pair.0 + 1, r.worst_pair.1 + 1, r.max_deviation)
                }),
            };
            out.report("orthogonality", &report)
        }
        CheckCmd::Pieri { max_size, theta } => {
            if max_size >= DEFAULT_DEGREE_BOUND {
                return Err(usage(format!("max size must be below {DEFAULT_DEGREE_BOUND}")));
            }
            let theta = parse_rational(&theta)?;
            let mut report = CheckReport { passed: true, checked: 0, witness: None };
            for size in 0..=max_size {
                for mu in enumerate_partitions(size) {
                    report.checked += 1;
                    if let Err(e) = pieri_check(&mu, &theta) {
                        report.passed = false;
                        report.witness = Some(format!("mu = {mu}: {e}"));
                        return out.report("pieri", &report);
                    }
                }
            }
            out.report("pieri", &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
