use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use surfval::explorer::{self, EnumBudget};
use surfval::fixtures::paper_examples;
use surfval::{
    asymptotic_lct, asymptotic_multiplicities, classify, computes_mld, fingen_degree, lct_ideal,
    mld_at_origin, plt_check, rees_valuations, valuation_ideal, BaseGerm, Cluster, CompleteIdeal,
    CurveId, ExcDivisor, GermError, PairSpec, QVector, Rational,
};

#[derive(Parser)]
#[command(
    name = "surfval",
    version,
    about = "Divisorial valuations over surface germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one curve: D*, degree, lct, gap, verdict.
    Analyze(CurveArgs),
    /// Asymptotic lct of a curve, or the lct of an ideal given with --ideal.
    Lct {
        #[command(flatten)]
        curve: CurveArgs,
        /// Ideal as comma-separated coefficients, one per curve.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Valuation ideal of a curve in degree m.
    Ideal {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Minimal log discrepancy of a pair; with a curve, whether it attains it.
    Mld {
        #[command(flatten)]
        curve: CurveArgs,
        /// Pair JSON file: {"ideal": [...], "lambda": "p/q"}.
        #[arg(long, conflicts_with_all = ["ideal", "lambda"])]
        pair: Option<PathBuf>,
        #[arg(long, requires = "lambda")]
        ideal: Option<String>,
        #[arg(long, requires = "ideal")]
        lambda: Option<String>,
    },
    /// Classify one curve, or every curve when none is selected.
    Classify(CurveArgs),
    /// Finite-generation degree of a curve's graded sequence.
    Fingen(CurveArgs),
    /// Dual graph in Graphviz DOT.
    Dot { cluster: PathBuf },
    /// Enumerate clusters within a budget.
    Enumerate(EnumerateArgs),
    /// Run the built-in worked examples.
    PaperExamples {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// Cluster JSON file, or `-` for standard input.
    cluster: PathBuf,
    /// Curve id.
    #[arg(long, conflicts_with = "last")]
    divisor: Option<CurveId>,
    /// Use the curve of the final blowup.
    #[arg(long)]
    last: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also print floating-point approximations, labelled as such.
    #[arg(long)]
    approx: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 3)]
    max_steps: usize,
    /// Comma-separated bases, e.g. `smooth,A2,E6`.
    #[arg(long, default_value = "smooth")]
    bases: String,
    #[arg(long, default_value_t = 1)]
    ideal_bound: u32,
    #[arg(long, default_value_t = 4)]
    lambda_denominator: u32,
    #[arg(long, default_value_t = 0)]
    extension_depth: usize,
    /// Write the atlas CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run the property suites and print the report.
    #[arg(long)]
    verify: bool,
    /// Print the N rows with the largest gap.
    #[arg(long)]
    extremal: Option<usize>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

type CliResult = Result<Output, String>;

struct Output {
    value: Value,
    format: Format,
}

fn read_input(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("IoError: standard input: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("IoError: {}: {e}", path.display()))
    }
}

fn load_cluster(path: &Path) -> Result<Cluster, String> {
    let text = read_input(path)?;
    Cluster::from_json(&text).map_err(|e| format!("{e} (in {})", path.display()))
}

impl CurveArgs {
    fn load(&self) -> Result<(Cluster, Option<CurveId>), String> {
        let c = load_cluster(&self.cluster)?;
        let curve = if self.last {
            Some(c.last_curve().ok_or_else(|| {
                GermError::UnknownCurve { curve: 0, count: 0 }.to_string() + " (--last)"
            })?)
        } else {
            self.divisor
        };
        if let Some(e) = curve {
            c.check_curve(e).map_err(|e| format!("{e} (--divisor)"))?;
        }
        Ok((c, curve))
    }

    fn load_with_curve(&self) -> Result<(Cluster, CurveId), String> {
        match self.load()? {
            (c, Some(e)) => Ok((c, e)),
            (_, None) => Err("UsageError: select a curve with --divisor or --last".to_string()),
        }
    }

    fn output(&self, value: Value) -> Output {
        Output {
            value,
            format: self.format,
        }
    }
}

fn parse_coeffs(s: &str, flag: &str) -> Result<QVector, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<Rational>()
                .map_err(|e| format!("{e} ({flag})"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(QVector)
}

fn parse_ideal(c: &Cluster, s: &str) -> Result<CompleteIdeal, String> {
    let v = parse_coeffs(s, "--ideal")?;
    let d = ExcDivisor::new(v).map_err(|e| format!("{e} (--ideal)"))?;
    CompleteIdeal::new(c, d).map_err(|e| format!("{e} (--ideal)"))
}

fn approx(values: &[(&str, &Rational)]) -> Value {
    let mut m = Map::new();
    for (k, v) in values {
        m.insert((*k).to_string(), json!(v.approx()));
    }
    Value::Object(m)
}

fn str_vec(v: &QVector) -> Value {
    json!(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn analyze(args: &CurveArgs) -> CliResult {
    let (c, e) = args.load_with_curve()?;
    let dstar = asymptotic_multiplicities(&c, e).map_err(|x| x.to_string())?;
    let report = asymptotic_lct(&c, e).map_err(|x| x.to_string())?;
    let cl = classify(&c, e).map_err(|x| x.to_string())?;
    let generator = valuation_ideal(&c, e, cl.fingen_degree).map_err(|x| x.to_string())?;
    let rees = rees_valuations(&c, &generator).map_err(|x| x.to_string())?;
    let plt = plt_check(&c, e).map_err(|x| x.to_string())?;
    let prime = report.prime_blowup_lct.clone().expect("asymptotic report");
    let mut v = json!({
        "base": c.base_germ().to_string(),
        "curve": e,
        "k": cl.k,
        "dstar": str_vec(&dstar),
        "fingen_degree": cl.fingen_degree,
        "generator_ideal": str_vec(generator.coeffs()),
        "rees_valuations": rees,
        "lct": cl.lct.to_string(),
        "lct_argmin": report.argmin,
        "gap": cl.gap.to_string(),
        "prime_blowup_lct": prime.to_string(),
        "computes_lct": cl.gap.is_zero(),
        "plt_model_curves_only": plt,
        "verdict": cl.verdict.name(),
        "witness": cl.verdict.witness(),
        "pruned_curves": cl.pruned_curves,
    });
    if args.approx {
        v["approx"] = approx(&[
            ("lct", &cl.lct),
            ("gap", &cl.gap),
            ("prime_blowup_lct", &prime),
        ]);
    }
    Ok(args.output(v))
}

fn lct_cmd(args: &CurveArgs, ideal: Option<&str>) -> CliResult {
    if let Some(s) = ideal {
        let (c, _) = args.load()?;
        let a = parse_ideal(&c, s)?;
        let r = lct_ideal(&c, &a);
        let mut v = json!({
            "ideal": str_vec(a.coeffs()),
            "lct": r.value.to_string(),
            "argmin": r.argmin,
        });
        if args.approx {
            if let Some(x) = r.value.finite() {
                v["approx"] = approx(&[("lct", x)]);
            }
        }
        return Ok(args.output(v));
    }
    let (c, e) = args.load_with_curve()?;
    let r = asymptotic_lct(&c, e).map_err(|x| x.to_string())?;
    let value = r.value.finite().cloned().expect("asymptotic lct is finite");
    let gap = Rational::from_int(c.k(e) + 1) - &value;
    let prime = r.prime_blowup_lct.clone().expect("asymptotic report");
    let mut v = json!({
        "curve": e,
        "k": c.k(e),
        "lct": value.to_string(),
        "argmin": r.argmin,
        "gap": gap.to_string(),
        "prime_blowup_lct": prime.to_string(),
    });
    if args.approx {
        v["approx"] = approx(&[("lct", &value), ("gap", &gap), ("prime_blowup_lct", &prime)]);
    }
    Ok(args.output(v))
}

fn ideal_cmd(args: &CurveArgs, m: u64) -> CliResult {
    let (c, e) = args.load_with_curve()?;
    let d = valuation_ideal(&c, e, m).map_err(|x| format!("{x} (--m)"))?;
    Ok(args.output(json!({
        "curve": e,
        "m": m,
        "ideal": str_vec(d.coeffs()),
    })))
}

fn mld_cmd(
    args: &CurveArgs,
    pair: Option<&Path>,
    ideal: Option<&str>,
    lambda: Option<&str>,
) -> CliResult {
    let (c, e) = args.load()?;
    let p = match (pair, ideal, lambda) {
        (Some(path), _, _) => {
            let text = read_input(path)?;
            PairSpec::from_json(&c, &text).map_err(|x| format!("{x} (in {})", path.display()))?
        }
        (None, Some(i), Some(l)) => {
            let a = parse_ideal(&c, i)?;
            let lambda: Rational = l.parse().map_err(|x| format!("{x} (--lambda)"))?;
            PairSpec::new(a, lambda).map_err(|x| format!("{x} (--lambda)"))?
        }
        _ => return Err("UsageError: give a pair with --pair or --ideal and --lambda".to_string()),
    };
    let mld = mld_at_origin(&c, &p).map_err(|x| x.to_string())?;
    let mut v = json!({
        "ideal": str_vec(p.ideal.coeffs()),
        "lambda": p.lambda.to_string(),
        "mld": mld.to_string(),
    });
    if let Some(e) = e {
        v["curve"] = json!(e);
        v["computes_mld"] = match computes_mld(&c, e, &p) {
            Ok(b) => json!(b),
            Err(_) => json!(false),
        };
    }
    if args.approx {
        if let Some(x) = mld.finite() {
            v["approx"] = approx(&[("mld", x)]);
        }
    }
    Ok(args.output(v))
}

fn classification_json(c: &Cluster, e: CurveId, with_approx: bool) -> Result<Value, String> {
    let cl = classify(c, e).map_err(|x| x.to_string())?;
    let mut v = json!({
        "curve": e,
        "k": cl.k,
        "lct": cl.lct.to_string(),
        "gap": cl.gap.to_string(),
        "fingen_degree": cl.fingen_degree,
        "verdict": cl.verdict.name(),
        "witness": cl.verdict.witness(),
        "pruned_curves": cl.pruned_curves,
    });
    if with_approx {
        v["approx"] = approx(&[("lct", &cl.lct), ("gap", &cl.gap)]);
    }
    Ok(v)
}

fn classify_cmd(args: &CurveArgs) -> CliResult {
    let (c, e) = args.load()?;
    let v = match e {
        Some(e) => classification_json(&c, e, args.approx)?,
        None => {
            let all = c
                .curves()
                .map(|e| classification_json(&c, e, args.approx))
                .collect::<Result<Vec<_>, _>>()?;
            json!({ "classifications": all })
        }
    };
    Ok(args.output(v))
}

fn fingen_cmd(args: &CurveArgs) -> CliResult {
    let (c, e) = args.load_with_curve()?;
    let dstar = asymptotic_multiplicities(&c, e).map_err(|x| x.to_string())?;
    let m0 = fingen_degree(&c, e).map_err(|x| x.to_string())?;
    Ok(args.output(json!({
        "curve": e,
        "dstar": str_vec(&dstar),
        "fingen_degree": m0,
    })))
}

fn parse_bases(s: &str) -> Result<Vec<BaseGerm>, String> {
    s.split(',')
        .map(|b| {
            b.trim()
                .parse::<BaseGerm>()
                .map_err(|e| format!("{e} (--bases)"))
        })
        .collect()
}

fn enumerate_cmd(a: &EnumerateArgs) -> CliResult {
    if let Some(j) = a.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| format!("ThreadPool: {e}"))?;
    }
    if a.max_steps == 0 {
        return Err("InvalidBudget: --max-steps must be at least 1".to_string());
    }
    if a.lambda_denominator == 0 {
        return Err("InvalidBudget: --lambda-denominator must be at least 1".to_string());
    }
    let budget = EnumBudget {
        max_steps: a.max_steps,
        bases: parse_bases(&a.bases)?,
        ideal_coeff_bound: a.ideal_bound,
        lambda_denominator_bound: a.lambda_denominator,
        extension_depth: a.extension_depth,
    };
    let clusters = explorer::enumerate_clusters(&budget);
    let mut out = json!({
        "clusters": clusters.len(),
        "curves": clusters.iter().map(Cluster::num_curves).sum::<usize>(),
    });
    if let Some(path) = &a.csv {
        let rows = explorer::atlas(&budget);
        let file =
            fs::File::create(path).map_err(|e| format!("IoError: {}: {e}", path.display()))?;
        explorer::write_atlas_csv(&rows, file)
            .map_err(|e| format!("IoError: {}: {e}", path.display()))?;
        out["csv"] = json!(path.display().to_string());
        out["atlas_rows"] = json!(rows.len());
    }
    if let Some(n) = a.extremal {
        let rows: Vec<_> = explorer::extremal_gaps(&budget)
            .into_iter()
            .take(n)
            .collect();
        out["extremal"] = serde_json::to_value(rows).expect("rows serialize");
    }
    if a.verify {
        let report = explorer::verify_theorems(&budget);
        out["clean"] = json!(report.is_clean());
        out["verification"] = serde_json::to_value(&report).expect("report serializes");
    }
    Ok(Output {
        value: out,
        format: a.format,
    })
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}

fn render(out: &Output) -> String {
    match out.format {
        Format::Json => serde_json::to_string_pretty(&out.value).expect("serializable"),
        Format::Text => match &out.value {
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| format!("{k}: {}", text_value(v)))
                .collect::<Vec<_>>()
                .join("\n"),
            other => text_value(other),
        },
    }
}

fn run(cli: Cli) -> Result<String, String> {
    let out = match &cli.command {
        Command::Analyze(a) => analyze(a)?,
        Command::Lct { curve, ideal } => lct_cmd(curve, ideal.as_deref())?,
        Command::Ideal { curve, m } => ideal_cmd(curve, *m)?,
        Command::Mld {
            curve,
            pair,
            ideal,
            lambda,
        } => mld_cmd(curve, pair.as_deref(), ideal.as_deref(), lambda.as_deref())?,
        Command::Classify(a) => classify_cmd(a)?,
        Command::Fingen(a) => fingen_cmd(a)?,
        Command::Dot { cluster } => {
            return Ok(load_cluster(cluster)?
                .dual_graph()
                .to_dot()
                .trim_end()
                .to_string())
        }
        Command::Enumerate(a) => enumerate_cmd(a)?,
        Command::PaperExamples { format } => {
            let report = paper_examples();
            if !report.all_pass() {
                return Err(format!(
                    "FixtureMismatch: a worked example disagrees\n{report}"
                ));
            }
            match format {
                Format::Text => {
                    return Ok(format!("{report}all examples pass"));
                }
                Format::Json => Output {
                    value: serde_json::to_value(&report).expect("report serializes"),
                    format: Format::Json,
                },
            }
        }
    };
    Ok(render(&out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(s) => match writeln!(io::stdout().lock(), "{s}") {
            Ok(()) => ExitCode::SUCCESS,
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: IoError: standard output: {e}");
                ExitCode::from(1)
            }
        },
        Err(msg) if msg.starts_with("UsageError") => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
