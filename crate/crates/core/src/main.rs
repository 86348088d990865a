use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use supertree::enumerate::{enumerate_with, filter_class, rank_by_q, EnumerateOptions, SupertreeClass};
use supertree::families::{self, bfs_supertree, pendant_degree_sequence, DegreeSequence};
use supertree::harness::{self, ClaimId, Grid, Report, VerifyOptions};
use supertree::hypergraph::{Hypergraph, Supertree};
use supertree::io;
use supertree::spectral::{spectral_radius, Shift, SolverOptions, SpectralError, Tensor};
use supertree::surgery;

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "supertree", version, about = "Signless Laplacian spectra of uniform supertrees")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Bracket width at which the power iteration stops.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iter", global = true, default_value_t = 200_000)]
    max_iter: usize,
    #[arg(long, global = true, default_value_t = harness::DEFAULT_SEED)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named supertree.
    Families {
        #[command(subcommand)]
        action: FamiliesCmd,
    },
    /// Apply a surgery operation to a graph file.
    Surgery {
        #[command(subcommand)]
        action: SurgeryCmd,
    },
    /// Spectral radius of a graph file.
    Spectral {
        #[command(subcommand)]
        action: SpectralCmd,
    },
    /// List all supertrees with m edges, optionally ranked by q.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// all, hypertree, diameter=D, pendent-edges=P, pendent-vertices=Q or degrees=...
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        rank: bool,
        /// Raise the m*(k-1) limit.
        #[arg(long, default_value_t = supertree::enumerate::DEFAULT_SIZE_LIMIT)]
        size_limit: usize,
    },
    /// Check one claim over a parameter grid.
    Verify {
        #[arg(long)]
        claim: String,
        /// Grid such as "k=3,4;d=3..5;m=d+1..d+3"; unset axes use the claim's defaults.
        #[arg(long, default_value = "")]
        grid: String,
        /// Random instances per randomized claim.
        #[arg(long, default_value_t = harness::DEFAULT_INSTANCES)]
        instances: usize,
    },
    /// Rank supertrees of diameter d and inspect the runner-up.
    ConjectureScan {
        #[arg(long)]
        d: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        k: String,
    },
}

#[derive(Subcommand)]
enum FamiliesCmd {
    Build {
        /// loose-path, hyperstar, s1, s2, s3, s4, t1, power, bfs or pendant-bfs
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        /// Degree sequence for `bfs`, comma separated.
        #[arg(long)]
        degrees: Option<String>,
        /// Tree edges for `power`, e.g. "0-1,1-2".
        #[arg(long)]
        tree: Option<String>,
    },
}

#[derive(Subcommand)]
enum SurgeryCmd {
    Apply {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long = "in")]
        input: PathBuf,
        /// Operation arguments, e.g. "u=3;moves=0:1,2:4".
        #[arg(long)]
        args: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Move,
    Release,
    Collapse,
    Switch,
    Graft,
}

#[derive(Subcommand)]
enum SpectralCmd {
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "q")]
        tensor: Tensor,
        /// auto or a nonnegative number.
        #[arg(long, default_value = "auto")]
        shift: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<SpectralError>(), Some(SpectralError::NoConvergence { .. })));
            ExitCode::from(if numerical { 2 } else { USAGE_ERROR })
        }
    }
}

fn solver(g: &Global) -> Result<SolverOptions> {
    let opts = SolverOptions {
        tolerance: g.tol,
        max_iterations: g.max_iter,
        shift: Shift::Auto,
    };
    opts.validate()?;
    Ok(opts)
}

fn output(g: &Global) -> Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    match cli.command {
        Command::Families { action } => {
            let FamiliesCmd::Build { family, m, d, k, n, p, q, degrees, tree } = action;
            let need = |v: Option<usize>, name: &str| v.ok_or_else(|| anyhow!("--{name} is required for {family}"));
            let t = match family.as_str() {
                "loose-path" | "path" => families::loose_path(need(m, "m")?, k)?,
                "hyperstar" | "star" => families::hyperstar(need(m, "m")?, k)?,
                "s1" => families::s1(need(m, "m")?, need(d, "d")?, k)?,
                "s2" => families::s2(need(m, "m")?, need(d, "d")?, k)?,
                "s3" => families::s3(need(m, "m")?, need(d, "d")?, k)?,
                "s4" => families::s4(need(m, "m")?, k)?,
                "t1" => families::t1(need(n, "n")?, need(p, "p")?, k)?,
                "power" => {
                    let spec = tree.ok_or_else(|| anyhow!("--tree is required for power"))?;
                    families::power_k(&parse_tree_edges(&spec)?, k)?
                }
                "bfs" => {
                    let spec = degrees.ok_or_else(|| anyhow!("--degrees is required for bfs"))?;
                    bfs_supertree(&DegreeSequence::new(parse_list(&spec)?, k)?)?.0
                }
                "pendant-bfs" => bfs_supertree(&pendant_degree_sequence(need(n, "n")?, need(q, "q")?, k)?)?.0,
                other => bail!("unknown family `{other}`"),
            };
            write_graph(g, t.graph())?;
            Ok(0)
        }
        Command::Surgery { action } => {
            let SurgeryCmd::Apply { op, input, args } = action;
            let graph = io::load_graph(&input)?;
            let kv = KeyValues::parse(&args)?;
            let result = apply(op, graph, &kv)?;
            write_graph(g, &result)?;
            Ok(0)
        }
        Command::Spectral { action } => {
            let SpectralCmd::Solve { input, tensor, shift } = action;
            let graph = io::load_graph(&input)?;
            let mut opts = solver(g)?;
            opts.shift = match shift.as_str() {
                "auto" => Shift::Auto,
                s => Shift::Fixed(s.parse().with_context(|| format!("bad shift `{s}`"))?),
            };
            opts.validate()?;
            let r = spectral_radius(&graph, tensor, &opts)?;
            let mut out = output(g)?;
            match g.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
                Format::Csv => {
                    writeln!(out, "value,lower,upper,residual,iterations")?;
                    writeln!(out, "{:.12},{:.12},{:.12},{:.3e},{}", r.value, r.lower, r.upper, r.residual, r.iterations)?;
                }
            }
            Ok(0)
        }
        Command::Enumerate { m, k, class, rank, size_limit } => {
            let class: SupertreeClass = class.parse()?;
            let mut opts = EnumerateOptions::default().size_limit(size_limit);
            if let SupertreeClass::Diameter(d) = class {
                opts = opts.max_diameter(d);
            }
            let trees = filter_class(enumerate_with(m, k, &opts)?, &class);
            let ranking = if rank { Some(rank_by_q(&trees, &solver(g)?)?) } else { None };
            if g.format == Format::Json {
                bail!("enumerate writes CSV only");
            }
            io::write_enumeration_csv(&trees, ranking.as_ref(), output(g)?)?;
            eprintln!("{} supertrees", trees.len());
            Ok(0)
        }
        Command::Verify { claim, grid, instances } => {
            let claim: ClaimId = claim.parse()?;
            let opts = VerifyOptions {
                grid: Grid::parse(&grid)?,
                solver: solver(g)?,
                seed: g.seed,
                instances,
            };
            let report = harness::verify(claim, &opts)?;
            emit(g, &report)
        }
        Command::ConjectureScan { d, m, k } => {
            let grid = Grid::parse(&format!("d={d};m={m};k={k}"))?;
            let report = harness::conjecture_scan(&grid, &solver(g)?)?;
            emit(g, &report)
        }
    }
}

fn emit(g: &Global, report: &Report) -> Result<u8> {
    let mut out = output(g)?;
    match g.format {
        Format::Csv => io::write_report_csv(report, &mut out)?,
        Format::Json => writeln!(out, "{}", io::report_to_json(report)?)?,
    }
    eprintln!(
        "{}: {} ({} rows, {:.2} s)",
        report.claim_id,
        report.verdict_label(),
        report.rows.len(),
        report.runtime_secs
    );
    Ok(report.verdict.exit_code() as u8)
}

fn write_graph(g: &Global, graph: &Hypergraph) -> Result<()> {
    let mut out = output(g)?;
    writeln!(out, "{}", io::graph_to_json(graph))?;
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split([',', ' '])
        .filter(|x| !x.is_empty())
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad number `{x}`")))
        .collect()
}

fn parse_pair(s: &str, sep: char) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(sep).ok_or_else(|| anyhow!("expected `a{sep}b`, got `{s}`"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_tree_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',').map(|e| parse_pair(e, '-')).collect()
}

/// `key=value` pairs separated by `;`.
struct KeyValues(Vec<(String, String)>);

impl KeyValues {
    fn parse(s: &str) -> Result<Self> {
        let pairs = s
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("expected key=value, got `{p}`"))?;
                Ok((k.trim().to_string(), v.trim().to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(KeyValues(pairs))
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| anyhow!("missing argument `{key}`"))
    }

    fn num(&self, key: &str) -> Result<usize> {
        let v = self.raw(key)?;
        v.parse().with_context(|| format!("bad value for `{key}`: `{v}`"))
    }

    fn list(&self, key: &str) -> Result<Vec<usize>> {
        parse_list(self.raw(key)?)
    }
}

fn apply(op: Op, graph: Hypergraph, kv: &KeyValues) -> Result<Hypergraph> {
    let tree = || Supertree::new(graph.clone()).context("this operation needs a supertree");
    Ok(match op {
        Op::Move => {
            let moves = kv
                .raw("moves")?
                .split(',')
                .map(|m| parse_pair(m, ':'))
                .collect::<Result<Vec<_>>>()?;
            surgery::move_edges(&graph, kv.num("u")?, &moves)?
        }
        Op::Release => surgery::edge_release(&tree()?, kv.num("e")?, kv.num("u")?)?.into_inner(),
        Op::Collapse => {
            let keep = kv.list("keep")?;
            let [a, b] = keep[..] else { bail!("keep needs two vertices") };
            surgery::branch_collapse(&tree()?, kv.num("e")?, (a, b))?.into_inner()
        }
        Op::Switch => surgery::two_switch(&graph, kv.num("e")?, kv.num("f")?, &kv.list("u1")?, &kv.list("v1")?)?,
        Op::Graft => surgery::graft_step(&graph, kv.num("u")?, kv.num("p")?, kv.num("q")?)?,
    })
}
