mod check;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use equivol::adhm::{AdhmSpec, Group, Rescale, SoMomentExponent};
use equivol::cache::Cache;
use equivol::json;
use equivol::nekrasov::{self, NekrasovError, SeriesOptions};
use equivol::quotient::{equivariant_volume_traced, QuotientError, VolumeOptions, WeightSystem};
use equivol::render::latex_function;
use equivol::residue::{res_plus_iterated, ResidueError, ResidueOptions};
use equivol::{Rational, RationalFunction};

/// Print to stdout; a closed pipe ends the process quietly.
macro_rules! emit {
    ($($t:tt)*) => { emit_raw(format!("{}\n", format_args!($($t)*))) };
}

fn emit_raw(s: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(2);
    }
}

#[derive(Parser, Debug)]
#[command(name = "equivol", version, about = "Exact equivariant volumes by iterated residues")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Coefficient cache directory.
    #[arg(long, global = true, env = "EQUIVOL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Recompute instead of reading or writing the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Volume of a generated ADHM system or a weight-system file.
    Volume(VolumeArgs),
    /// Instanton series up to a given charge.
    Series(SeriesArgs),
    /// Res+ of a weight system or rational function file.
    Residue(ResidueArgs),
    /// Run a verification suite.
    Check(CheckArgs),
    /// Residue branch tree of a volume computation.
    Trace(TraceArgs),
    /// Write a generated weight system as JSON.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Args, Debug, Clone)]
struct Source {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    charge: Option<usize>,
    /// `paper` keeps eps as lifted, `halved` substitutes eps/2 (Sp and SO only).
    #[arg(long, default_value = "paper")]
    rescale: String,
    /// Use `prod alpha (-alpha)` for the squared Vandermonde.
    #[arg(long)]
    signed_roots: bool,
    /// SO moment-map exponent, `charge` or `printed`.
    #[arg(long, default_value = "charge")]
    so_exponent: String,
    /// Weight-system JSON file instead of a generator.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Common {
    /// Residue order of the gauge symbols, comma separated; the last is taken first.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Evaluate at `sym=value,...` with rational values.
    #[arg(long, value_delimiter = ',')]
    assign: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    n: usize,
    /// Highest charge.
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value = "paper")]
    rescale: String,
    #[arg(long)]
    signed_roots: bool,
    #[arg(long, default_value = "charge")]
    so_exponent: String,
    /// Output `eps1 eps2 log Z` instead of `Z`.
    #[arg(long)]
    prepotential: bool,
    #[arg(long, value_delimiter = ',')]
    assign: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct ResidueArgs {
    /// Weight-system or rational-function JSON file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// `paper-examples`, `oracles` or `all`.
    #[arg(long, default_value = "paper-examples")]
    suite: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// `json` or `text` (path diagram).
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    source: Source,
}

/// Failure class, mapped to the exit status.
#[derive(Debug)]
enum Failure {
    Validation(anyhow::Error),
    Computation(anyhow::Error),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Computation(_) => 2,
            Failure::Check(_) => 3,
        }
    }
}

fn validation(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Validation(e.into())
}

fn classify_quotient(e: QuotientError) -> Failure {
    match e {
        QuotientError::Validation(_) => Failure::Validation(e.into()),
        _ => Failure::Computation(e.into()),
    }
}

fn classify_nekrasov(e: NekrasovError) -> Failure {
    match e {
        NekrasovError::Quotient(q) => classify_quotient(q),
        NekrasovError::Assignment(_) => Failure::Validation(e.into()),
        _ => Failure::Computation(e.into()),
    }
}

fn classify_residue(e: ResidueError) -> Failure {
    Failure::Computation(e.into())
}

enum Input {
    Generated(AdhmSpec),
    System(WeightSystem<Rational>),
    Function(RationalFunction),
}

fn spec_from(group: &str, n: usize, c: usize, rescale: &str, signed: bool, so_exp: &str) -> Result<AdhmSpec, Failure> {
    let spec = AdhmSpec {
        group: Group::from_str(group).map_err(|e| validation(anyhow!(e)))?,
        n,
        c,
        rescale: Rescale::from_str(rescale).map_err(|e| validation(anyhow!(e)))?,
        signed_roots: signed,
        so_exponent: SoMomentExponent::from_str(so_exp).map_err(|e| validation(anyhow!(e)))?,
    };
    spec.validate().map_err(classify_quotient)?;
    Ok(spec)
}

fn read_input(path: &PathBuf) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(validation)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| validation(anyhow!("{}: malformed JSON: {e}", path.display())))?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or("");
    let ctx = |e: json::JsonError| validation(anyhow!("{}: {e}", path.display()));
    match schema {
        s if s == json::WEIGHT_SYSTEM_SCHEMA => Ok(Input::System(json::weight_system_from_str(&text).map_err(ctx)?)),
        s if s == json::FUNCTION_SCHEMA => Ok(Input::Function(json::function_from_str(&text).map_err(ctx)?)),
        other => Err(validation(anyhow!(
            "{}: unknown schema `{other}` (expected {} or {})",
            path.display(),
            json::WEIGHT_SYSTEM_SCHEMA,
            json::FUNCTION_SCHEMA
        ))),
    }
}

fn source_input(s: &Source) -> Result<Input, Failure> {
    let generated = s.group.is_some() || s.n.is_some() || s.charge.is_some();
    match (&s.input, generated) {
        (Some(_), true) => Err(validation(anyhow!("give either --input or --group/--n/--charge, not both"))),
        (Some(p), false) => read_input(p),
        (None, true) => {
            let (Some(g), Some(n), Some(c)) = (&s.group, s.n, s.charge) else {
                return Err(validation(anyhow!("--group, --n and --charge are all required")));
            };
            Ok(Input::Generated(spec_from(g, n, c, &s.rescale, s.signed_roots, &s.so_exponent)?))
        }
        (None, false) => Err(validation(anyhow!("no input: give --input or --group/--n/--charge"))),
    }
}

fn residue_order(table: &equivol::algebra::SymbolTable, names: &Option<Vec<String>>) -> Result<Option<Vec<usize>>, Failure> {
    let Some(names) = names else { return Ok(None) };
    let mut out = Vec::new();
    for n in names {
        out.push(table.require(n.trim()).map_err(validation)?);
    }
    let mut want = table.gauge_order().to_vec();
    let mut got = out.clone();
    want.sort_unstable();
    got.sort_unstable();
    if want != got {
        return Err(validation(anyhow!("--order must list every gauge symbol exactly once")));
    }
    Ok(Some(out))
}

fn parse_assignment(items: &[String]) -> Result<BTreeMap<String, Rational>, Failure> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| validation(anyhow!("assignment `{item}` is not sym=value")))?;
        let r = Rational::from_str(v.trim()).map_err(|_| validation(anyhow!("`{v}` is not a rational number")))?;
        out.insert(k.trim().to_string(), r);
    }
    Ok(out)
}

struct Ctx {
    cache: Option<Cache>,
    parallel: bool,
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("equivol"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("equivol"))
}

fn print_function(f: &RationalFunction, assign: &Option<Vec<String>>, format: Format) -> Result<(), Failure> {
    if let Some(items) = assign {
        let a = parse_assignment(items)?;
        let v = nekrasov::evaluate(f, &a).map_err(classify_nekrasov)?;
        match format {
            Format::Json => {
                let j = serde_json::json!({ "value": json::rational_to_json(&v) });
                emit!("{}", serde_json::to_string_pretty(&j).expect("serializable"));
            }
            Format::Text => emit!("{v}"),
            Format::Latex => emit!("{}", equivol::render::latex_function(&RationalFunction::constant(f.table(), v))),
        }
        return Ok(());
    }
    let f = f.canonical();
    match format {
        Format::Json => emit!("{}", json::function_to_string(&f)),
        Format::Text => emit!("{f}"),
        Format::Latex => emit!("{}", latex_function(&f)),
    }
    Ok(())
}

fn volume_of(input: Input, order: &Option<Vec<String>>, ctx: &Ctx) -> Result<RationalFunction, Failure> {
    match input {
        Input::Generated(spec) => {
            let ws = spec.system().map_err(classify_quotient)?;
            let order = residue_order(&ws.table, order)?;
            let opts = SeriesOptions {
                rescale: spec.rescale,
                signed_roots: spec.signed_roots,
                so_exponent: spec.so_exponent,
                volume: VolumeOptions { residue: ResidueOptions { parallel: ctx.parallel, order: order.clone() }, skip_validation: false },
                // A non-default order is an experiment; keep it out of the cache.
                cache: if order.is_some() { None } else { ctx.cache.clone() },
                parallel: ctx.parallel,
            };
            nekrasov::adhm_volume(&spec, &opts).map_err(classify_nekrasov)
        }
        Input::System(ws) => {
            let order = residue_order(&ws.table, order)?;
            let opts = VolumeOptions { residue: ResidueOptions { parallel: ctx.parallel, order }, skip_validation: false };
            Ok(equivariant_volume_traced(&ws, &opts).map_err(classify_quotient)?.0)
        }
        Input::Function(f) => {
            let order = residue_order(f.table(), order)?;
            let opts = ResidueOptions { parallel: ctx.parallel, order };
            Ok(res_plus_iterated(&f, &opts).map_err(classify_residue)?.0)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = if cli.no_cache { None } else { cli.cache_dir.clone().or_else(default_cache_dir).map(Cache::new) };
    let ctx = Ctx { cache, parallel: cli.jobs != Some(1) };
    match cli.command {
        Command::Volume(a) => {
            let input = source_input(&a.source)?;
            if matches!(input, Input::Function(_)) {
                return Err(validation(anyhow!("volume needs a weight system; use `residue` for a rational function")));
            }
            let v = volume_of(input, &a.common.order, &ctx)?;
            print_function(&v, &a.common.assign, a.common.format)
        }
        Command::Residue(a) => {
            let v = volume_of(read_input(&a.input)?, &a.common.order, &ctx)?;
            print_function(&v, &a.common.assign, a.common.format)
        }
        Command::Series(a) => {
            let spec = spec_from(&a.group, a.n, 1, &a.rescale, a.signed_roots, &a.so_exponent)?;
            let opts = SeriesOptions {
                rescale: spec.rescale,
                signed_roots: spec.signed_roots,
                so_exponent: spec.so_exponent,
                volume: VolumeOptions { residue: ResidueOptions { parallel: ctx.parallel, order: None }, skip_validation: false },
                cache: ctx.cache.clone(),
                parallel: ctx.parallel,
            };
            let mut z = nekrasov::zinst(spec.group, a.n, a.kmax, &opts).map_err(classify_nekrasov)?;
            if a.prepotential {
                z = nekrasov::finst(&z).map_err(classify_nekrasov)?;
            }
            if let Some(items) = &a.assign {
                let vals = z.evaluate(&parse_assignment(items)?).map_err(classify_nekrasov)?;
                match a.format {
                    Format::Json => {
                        let j: Vec<_> = vals.iter().map(json::rational_to_json).collect();
                        emit!("{}", serde_json::to_string_pretty(&j).expect("serializable"));
                    }
                    _ => {
                        for (k, v) in vals.iter().enumerate() {
                            emit!("{k}: {v}");
                        }
                    }
                }
                return Ok(());
            }
            match a.format {
                Format::Json => emit!("{}", serde_json::to_string_pretty(&z.to_json()).expect("serializable")),
                Format::Latex => emit!("{}", z.latex()),
                Format::Text => {
                    for (k, c) in z.coeffs.iter().enumerate() {
                        emit!("{k}: {c}");
                    }
                }
            }
            Ok(())
        }
        Command::Trace(a) => {
            let ws = match source_input(&a.source)? {
                Input::Generated(spec) => spec.system().map_err(classify_quotient)?,
                Input::System(ws) => ws,
                Input::Function(_) => return Err(validation(anyhow!("trace needs a weight system"))),
            };
            let order = residue_order(&ws.table, &a.order)?;
            let opts = VolumeOptions { residue: ResidueOptions { parallel: ctx.parallel, order }, skip_validation: false };
            let (_, trace) = equivariant_volume_traced(&ws, &opts).map_err(classify_quotient)?;
            match a.format {
                Format::Json => emit!("{}", json::trace_to_string(&trace)),
                _ => emit_raw(trace.diagram()),
            }
            Ok(())
        }
        Command::Export(a) => {
            let ws = match source_input(&a.source)? {
                Input::Generated(spec) => spec.system().map_err(classify_quotient)?,
                Input::System(ws) => ws,
                Input::Function(_) => return Err(validation(anyhow!("export needs a weight system"))),
            };
            emit!("{}", json::weight_system_to_string(&ws));
            Ok(())
        }
        Command::Check(a) => {
            let report = check::run_suite(&a.suite).map_err(validation)?;
            match a.format {
                Format::Json => emit!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
                _ => {
                    for r in &report {
                        let mark = if r.pass { "PASS" } else { "FAIL" };
                        if r.detail.is_empty() {
                            emit!("{mark} {}", r.name);
                        } else {
                            emit!("{mark} {}: {}", r.name, r.detail);
                        }
                    }
                }
            }
            let failed = report.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} of {} checks failed", report.len())));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(e) | Failure::Computation(e) => eprintln!("error: {e:#}"),
                Failure::Check(m) => eprintln!("check failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
