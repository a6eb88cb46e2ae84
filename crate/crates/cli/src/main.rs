use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kcore::achievable::build_atlas;
use kcore::corevert::CoreVariant;
use kcore::io::{atlas_to_value, game_to_value, parse_game, parse_order, to_pretty, GameForm};
use kcore::oracle::OracleGuard;
use kcore::orders::{classify, enumerate_orders, EnumerationGuard, OrderFilter, SubsetOrder};
use kcore::report::{
    classification_to_value, compare_runs, comparison_to_value, game_profile, profile_to_value, render_atlas,
    render_classification, render_comparison, render_profile, render_run, run_to_value, run_vertices, RunLimits,
    VertexMode,
};
use kcore::setfn::{random_totally_monotone_game, seeded_monotone_game};
use kcore::{Error, GroundSet};

/// Exact k-additive core toolkit.
#[derive(Parser)]
#[command(name = "kcore", version)]
struct Cli {
    /// Worker threads for the parallel enumerators (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a game as worths and Möbius coefficients with its monotonicity profile.
    Transform {
        #[arg(long)]
        game: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// List orders on coalitions of at most k players with their classification.
    Orders(OrdersArgs),
    /// Generate and certify vertices of a k-additive core.
    Vertices(VerticesArgs),
    /// Emit a random game as JSON.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RandomKind::Monotone)]
        kind: RandomKind,
        /// Largest coalition with a nonzero coefficient (totally monotone games).
        #[arg(long)]
        k_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrdersArgs {
    #[arg(long, required_unless_present = "order")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "order")]
    k: Option<usize>,
    /// Classify the order in this file instead of enumerating.
    #[arg(long, conflicts_with_all = ["n", "k", "filter", "cap"])]
    order: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Filter::All)]
    filter: Filter,
    #[arg(long)]
    cap: Option<usize>,
    /// Also dump the achievable families of each order.
    #[arg(long)]
    atlas: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerticesArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Orders, conflicts_with = "compare")]
    mode: Mode,
    /// Run two modes and compare their vertex sets.
    #[arg(long, value_enum, num_args = 2, value_names = ["MODE", "MODE"])]
    compare: Option<Vec<Mode>>,
    #[arg(long, value_enum, default_value_t = Variant::Plain)]
    variant: Variant,
    /// Stop after this many orders in orders mode.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    All,
    Compatible,
    #[value(alias = "strongly_compatible")]
    StronglyCompatible,
}

impl From<Filter> for OrderFilter {
    fn from(f: Filter) -> Self {
        match f {
            Filter::All => OrderFilter::All,
            Filter::Compatible => OrderFilter::Compatible,
            Filter::StronglyCompatible => OrderFilter::StronglyCompatible,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Orders,
    #[value(name = "theorem-n-1")]
    TheoremNMinus1,
    Oracle,
}

impl From<Mode> for VertexMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Orders => VertexMode::Orders,
            Mode::TheoremNMinus1 => VertexMode::TheoremNMinus1,
            Mode::Oracle => VertexMode::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Plain,
    Monotone,
    Infinite,
}

impl From<Variant> for CoreVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Plain => CoreVariant::Plain,
            Variant::Monotone => CoreVariant::Monotone,
            Variant::Infinite => CoreVariant::Infinite,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RandomKind {
    Monotone,
    TotallyMonotone,
}

/// Guards raised to their limits when KCORE_GUARD_OVERRIDE is set. Large
/// instances may then run for a very long time.
fn guards() -> (EnumerationGuard, OracleGuard) {
    match std::env::var_os("KCORE_GUARD_OVERRIDE") {
        Some(v) if !v.is_empty() && v != "0" => (EnumerationGuard::relaxed(), OracleGuard::relaxed()),
        _ => (EnumerationGuard::default(), OracleGuard::default()),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    }
}

fn emit(output: &Output, json: impl FnOnce() -> Value, text: impl FnOnce() -> String) -> Result<(), Error> {
    let body = match output.format {
        Format::Json => to_pretty(&json()),
        Format::Text => text(),
    };
    write_out(output.out.as_deref(), &body)
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn transform(game: &Path, output: &Output) -> Result<(), Error> {
    let v = parse_game(&read(game)?).map_err(|e| in_file(game, e))?;
    let profile = game_profile(&v);
    emit(
        output,
        || profile_to_value(&v, &profile),
        || render_profile(&v, &profile),
    )
}

fn orders(args: &OrdersArgs) -> Result<(), Error> {
    let (guard, _) = guards();
    let (list, truncated) = match &args.order {
        Some(path) => (vec![parse_order(&read(path)?).map_err(|e| in_file(path, e))?], false),
        None => {
            let ground = GroundSet::new(args.n.expect("required by clap"))?;
            let mut stream = enumerate_orders(
                ground,
                args.k.expect("required by clap"),
                args.filter.into(),
                args.cap,
                guard,
            )?;
            let list: Vec<SubsetOrder> = stream.by_ref().collect();
            (list, stream.truncated())
        }
    };
    let atlases = if args.atlas {
        list.iter().map(build_atlas).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    if truncated {
        eprintln!("truncated: stopped after {} orders", list.len());
    }
    emit(
        &args.output,
        || {
            let items: Vec<Value> = list
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let mut item = classification_to_value(o, &classify(o));
                    if let Some(atlas) = atlases.get(i) {
                        item["families"] = atlas_to_value(atlas)["families"].take();
                    }
                    item
                })
                .collect();
            json!({ "orders": items, "truncated": truncated })
        },
        || {
            let mut out = String::new();
            for (i, o) in list.iter().enumerate() {
                out.push_str(&render_classification(o, &classify(o)));
                out.push('\n');
                if let Some(atlas) = atlases.get(i) {
                    out.push_str(&render_atlas(atlas));
                }
            }
            out
        },
    )
}

fn vertices(args: &VerticesArgs) -> Result<(), Error> {
    let v = parse_game(&read(&args.game)?).map_err(|e| in_file(&args.game, e))?;
    let (orders, oracle) = guards();
    let limits = RunLimits {
        cap: args.cap,
        orders,
        oracle,
    };
    let variant = args.variant.into();
    match &args.compare {
        Some(modes) => {
            let a = run_vertices(&v, args.k, modes[0].into(), variant, limits)?;
            let b = run_vertices(&v, args.k, modes[1].into(), variant, limits)?;
            let cmp = compare_runs(&a, &b);
            emit(
                &args.output,
                || comparison_to_value(&a, &b, &cmp),
                || render_comparison(&a, &b, &cmp),
            )
        }
        None => {
            let run = run_vertices(&v, args.k, args.mode.into(), variant, limits)?;
            emit(&args.output, || run_to_value(&run), || render_run(&run))
        }
    }
}

fn random(n: usize, seed: u64, kind: RandomKind, k_cap: Option<usize>, out: Option<&Path>) -> Result<(), Error> {
    let v = match kind {
        RandomKind::Monotone => seeded_monotone_game(seed, n)?,
        RandomKind::TotallyMonotone => random_totally_monotone_game(seed, n, k_cap.unwrap_or(n))?,
    };
    write_out(out, &to_pretty(&game_to_value(&v, GameForm::Game)))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Domain(_) | Error::DegreeUndefined => 2,
        Error::Guard(_) => 3,
        Error::Structure(_) | Error::Internal(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("kcore: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Transform { game, output } => transform(game, output),
        Command::Orders(args) => orders(args),
        Command::Vertices(args) => vertices(args),
        Command::Random {
            n,
            seed,
            kind,
            k_cap,
            out,
        } => random(*n, *seed, *kind, *k_cap, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kcore: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
