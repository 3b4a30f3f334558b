//! `polypa`: generate preferential-attachment graphs, run the verification
//! matrix, and record benchmark rows.

use std::fs::{self, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polypa_core::em::generate_em;
use polypa_core::io::{parse_weight_table, write_edges_to};
use polypa_core::par::{generate_par_with, Executor};
use polypa_core::seq::generate_seq_instrumented;
use polypa_core::verify::{ref_generate, run_matrix, Algorithm, VerifyRecord};
use polypa_core::{
    make_seed_graph, EdgeFormat, EntryLayout, GenConfig, Graph, RandomSource, SeedSpec, TailRule,
    WeightFunction,
};

const WORKERS_ENV: &str = "POLYPA_WORKERS";

const BENCH_HEADER: &str = "algo,alpha,ell,n0,N,workers,seed,wall_ns,proposal_len,batches,pq_ops,\
pq_m_push,pq_m_pop,pq_u_push,pq_u_pop,sorted_items";

#[derive(Parser, Debug)]
#[command(name = "polypa", version, about = "Preferential attachment graph generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write its edge list.
    Generate(GenerateArgs),
    /// Run the statistical verification matrix.
    Verify(VerifyArgs),
    /// Time one generator run and append a CSV row.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Seq,
    Par,
    Em,
    Ref,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Tail {
    Extend,
    Error,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "seq")]
    algo: Algo,
    /// `ring:<n0>`, `1regular:<n0>` or `file:<path>`.
    #[arg(long = "seed-graph")]
    seed_graph: Option<String>,
    /// Nodes to add.
    #[arg(long = "n")]
    n: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Exponent of the polynomial weight `d^alpha`.
    #[arg(long, conflicts_with = "f_table")]
    alpha: Option<f64>,
    /// CSV file of `degree,weight` rows for a general weight function.
    #[arg(long = "f-table")]
    f_table: Option<PathBuf>,
    #[arg(long = "f-tail", value_enum, default_value = "extend")]
    f_tail: Tail,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker count for `par` (default: POLYPA_WORKERS, else all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Proposal-list draws per single-step test.
    #[arg(long, default_value_t = 1_000_000)]
    draws: u64,
    /// Runs per generator per edge-set comparison.
    #[arg(long, default_value_t = 200_000)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the records as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// CSV file to append to; standard output if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<polypa_core::Error> for Failure {
    fn from(e: polypa_core::Error) -> Self {
        use polypa_core::Error as E;
        match e {
            E::InvalidConfig(_) | E::InvalidSpec(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

struct Model {
    algo: Algo,
    seed: Graph,
    cfg: GenConfig,
    alpha: Option<f64>,
}

fn workers(flag: Option<usize>) -> Result<usize, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{WORKERS_ENV}={v:?} is not a worker count")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(Failure::Usage("worker count must be at least 1".into()));
    }
    Ok(n)
}

fn model(a: &ModelArgs, default_seed: impl FnOnce(usize) -> String) -> Result<Model, Failure> {
    if a.algo == Algo::Par && a.f_table.is_some() {
        return Err(Failure::Usage(
            "--algo par needs a polynomial weight (--alpha), not --f-table".into(),
        ));
    }
    let weight = match (&a.f_table, a.alpha) {
        (Some(path), None) => {
            let tail = match a.f_tail {
                Tail::Extend => TailRule::Extend,
                Tail::Error => TailRule::Error,
            };
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            parse_weight_table(&text, tail)?
        }
        (None, Some(alpha)) => WeightFunction::polynomial(alpha)
            .map_err(|e| Failure::Usage(e.to_string()))?,
        (None, None) => return Err(Failure::Usage("one of --alpha or --f-table is required".into())),
        (Some(_), Some(_)) => {
            return Err(Failure::Usage("--alpha and --f-table are exclusive".into()))
        }
    };
    let spec_text = a.seed_graph.clone().unwrap_or_else(|| default_seed(a.ell));
    let spec: SeedSpec = spec_text
        .parse()
        .map_err(|e: polypa_core::Error| Failure::Usage(e.to_string()))?;
    let seed = make_seed_graph(&spec).map_err(|e| match e {
        polypa_core::Error::InvalidSpec(m) => Failure::Usage(m),
        other => Failure::Runtime(format!("seed graph: {other}")),
    })?;
    let cfg = GenConfig::new(a.n, a.ell, weight)
        .with_seed(a.seed)
        .with_workers(workers(a.workers)?);
    cfg.validate(&seed)?;
    Ok(Model {
        algo: a.algo,
        seed,
        cfg,
        alpha: a.alpha,
    })
}

fn algorithm(a: Algo) -> Algorithm {
    match a {
        Algo::Seq => Algorithm::Seq,
        Algo::Par => Algorithm::Par,
        Algo::Em => Algorithm::Em,
        Algo::Ref => Algorithm::Ref,
    }
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let m = model(&a.model, |ell| format!("1regular:{}", 10 * ell))?;
    let g = algorithm(m.algo).generate(&m.seed, &m.cfg)?;
    let format = match a.format {
        Format::Text => EdgeFormat::Text,
        Format::Binary => EdgeFormat::Binary,
    };
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_edges_to(&g, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_edges_to(&g, format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.draws == 0 || a.runs == 0 {
        return Err(Failure::Usage("--draws and --runs must be positive".into()));
    }
    let records = run_matrix(a.draws, a.runs, a.seed)?;
    for r in &records {
        println!("{}", r.text_line());
    }
    if let Some(path) = &a.csv {
        let mut text = String::from(VerifyRecord::CSV_HEADER);
        text.push('\n');
        for r in &records {
            text.push_str(&r.csv_row());
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    println!("{} of {} checks passed", records.len() - failed, records.len());
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} verification checks failed")));
    }
    Ok(())
}

#[derive(Default)]
struct BenchRow {
    wall_ns: u128,
    proposal_len: Option<usize>,
    batches: Option<u64>,
    pq: Option<polypa_core::em::OpCounts>,
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let m = model(&a.model, |ell| format!("1regular:{}", 10 * ell))?;
    let mut row = BenchRow::default();
    let start = Instant::now();
    match m.algo {
        Algo::Seq => {
            let mut rng = RandomSource::new(m.cfg.seed);
            let (_, trace) =
                generate_seq_instrumented(&m.seed, &m.cfg, EntryLayout::default(), &mut rng)?;
            row.wall_ns = trace.wall.as_nanos();
            row.proposal_len = trace.final_stats.map(|s| s.total_len);
        }
        Algo::Par => {
            let (_, trace) = generate_par_with(&m.seed, &m.cfg, Executor::Threads)?;
            row.wall_ns = trace.wall.as_nanos();
            row.proposal_len = Some(trace.proposal_len);
            row.batches = Some(trace.batches);
        }
        Algo::Em => {
            let (_, counts) = generate_em(&m.seed, &m.cfg)?;
            row.wall_ns = start.elapsed().as_nanos();
            row.pq = Some(counts);
        }
        Algo::Ref => {
            ref_generate(&m.seed, &m.cfg, &mut RandomSource::new(m.cfg.seed))?;
            row.wall_ns = start.elapsed().as_nanos();
        }
    }
    let workers = if m.algo == Algo::Par { m.cfg.workers } else { 1 };
    let opt = |v: Option<String>| v.unwrap_or_default();
    let line = format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        algorithm(m.algo).name(),
        opt(m.alpha.map(|x| x.to_string())),
        m.cfg.ell,
        m.seed.node_count(),
        m.cfg.nodes,
        workers,
        m.cfg.seed,
        row.wall_ns,
        opt(row.proposal_len.map(|x| x.to_string())),
        opt(row.batches.map(|x| x.to_string())),
        opt(row.pq.map(|c| c.pq_ops().to_string())),
        opt(row.pq.map(|c| c.pq_m_push.to_string())),
        opt(row.pq.map(|c| c.pq_m_pop.to_string())),
        opt(row.pq.map(|c| c.pq_u_push.to_string())),
        opt(row.pq.map(|c| c.pq_u_pop.to_string())),
        opt(row.pq.map(|c| c.sorted_items.to_string())),
    );
    match &a.csv {
        Some(path) => append_row(path, &line)?,
        None => println!("{BENCH_HEADER}\n{line}"),
    }
    Ok(())
}

/// Appends `line`, writing the header first if the file is new or empty.
fn append_row(path: &Path, line: &str) -> Result<(), Failure> {
    let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    if fresh {
        writeln!(file, "{BENCH_HEADER}")?;
    }
    writeln!(file, "{line}")?;
    Ok(())
}
