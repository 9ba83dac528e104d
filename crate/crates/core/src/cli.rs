//! The `gp` command line.
//!
//! Exit codes: `0` success or a positive verdict, `1` a negative verdict
//! (the input is not in general position), `2` usage, parse or range
//! errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::construction::{construct, construct_streaming, extremal_size, table_csv, MAX_DIM};
use crate::erdos_szekeres::witness_triple_traced;
use crate::error::Error;
use crate::format::{self, Format, BOX_CONVENTION, TORUS_CONVENTION};
use crate::lattice::{
    find_violating_triple_with, sample_violating_triple, GridKind, GridSpec, PointSet, ScanOptions,
    WitnessTriple,
};
use crate::solver::{
    count_max_gp_grid_2d, max_gp, SolveMode, SolveResult, SolverConfig, DEFAULT_VERTEX_CAP,
};

/// Seed used by every randomized check unless `--seed` says otherwise.
pub const DEFAULT_SEED: u64 = 0x5EED_2020;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "gp",
    version,
    about = "General position sets in integer lattices, boxes and tori"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format for point sets.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Reproducible search order (same witness and node counts every run).
    #[arg(long, global = true)]
    deterministic: bool,

    /// Refuse grids with more vertices than this.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: u64,

    /// Worker threads for parallel scans and searches.
    #[arg(long, global = true, env = "GP_THREADS")]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    One,
    Count,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the extremal general position set of dimension n.
    Construct {
        #[arg(short = 'n')]
        n: usize,
        /// Row-per-coordinate CSV table instead of a point list.
        #[arg(long)]
        table: bool,
        /// Only points A..B (1-based, inclusive), computed one at a time.
        #[arg(long, value_name = "A..B")]
        stream: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check whether a point set is in general position.
    Verify {
        /// Point-set file (JSON or CSV), `-` for stdin.
        input: PathBuf,
        /// Ambient grid; defaults to the lattice of the set's dimension.
        #[arg(long)]
        grid: Option<String>,
        /// Test this many random triples instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Find three points on a common geodesic in a large enough set.
    Witness {
        input: PathBuf,
        /// Include the survivors of every reduction stage.
        #[arg(long)]
        trace: bool,
    },
    /// Exact gp number of a box or torus.
    Solve {
        #[arg(long, required_unless_present = "table")]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::One)]
        mode: ModeArg,
        /// Also count maximum sets up to box symmetries (count mode).
        #[arg(long)]
        symmetry: bool,
        /// CSV table of gp(P_r x P_s) for 2 <= r <= RMAX, 2 <= s <= SMAX.
        #[arg(long, num_args = 2, value_names = ["RMAX", "SMAX"], conflicts_with = "grid")]
        table: Option<Vec<u64>>,
    },
    /// gp number and number of maximum sets of a 2D box.
    Count {
        #[arg(long)]
        grid: String,
    },
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub output_format: Format,
    pub deterministic: bool,
    pub vertex_cap: u64,
    pub trace: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            output_format: Format::Json,
            deterministic: false,
            vertex_cap: DEFAULT_VERTEX_CAP,
            trace: false,
            threads: None,
        }
    }
}

impl RunArgs {
    fn config(&self, trace: bool) -> RunConfig {
        RunConfig {
            seed: self.seed,
            output_format: match self.format {
                OutputFormat::Json => Format::Json,
                OutputFormat::Csv => Format::Csv,
            },
            deterministic: self.deterministic,
            vertex_cap: self.cap,
            trace,
            threads: self.threads,
        }
    }
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let trace = matches!(cli.command, Command::Witness { trace: true, .. });
    let config = cli.run.config(trace);

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(cli.command, &config, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(
    cmd: Command,
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    match cmd {
        Command::Construct {
            n,
            table,
            stream,
            output,
        } => cmd_construct(n, table, stream.as_deref(), output.as_deref(), config, out),
        Command::Verify {
            input,
            grid,
            sample,
        } => cmd_verify(&input, grid.as_deref(), sample, config, out),
        Command::Witness { input, .. } => cmd_witness(&input, config, out),
        Command::Solve {
            grid,
            mode,
            symmetry,
            table,
        } => match table {
            Some(t) => cmd_solve_table(t[0], t[1], config, out),
            None => cmd_solve(
                grid.as_deref().unwrap_or_default(),
                mode,
                symmetry,
                config,
                out,
                err,
            ),
        },
        Command::Count { grid } => cmd_count(&grid, out),
    }
}

/// `A..B` or `A..=B`, both inclusive and 1-based.
fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| usage(format!("range `{s}` should look like 1..10")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("bad range bound `{t}`")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 || a > b {
        return Err(usage(format!("empty or 0-based range `{s}`")));
    }
    Ok((a, b))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_construct(
    n: usize,
    table: bool,
    stream: Option<&str>,
    output: Option<&Path>,
    config: &RunConfig,
    out: &mut dyn Write,
) -> CmdResult {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(usage(format!("-n must be in 1..={MAX_DIM}")));
    }
    if table {
        if stream.is_some() {
            return Err(usage("--table and --stream are exclusive"));
        }
        emit(&table_csv(n)?, output, out)?;
        return Ok(EXIT_OK);
    }
    let set = match stream {
        Some(range) => {
            let (a, b) = parse_range(range)?;
            let size = extremal_size(n)?;
            if b > size {
                return Err(Error::IndexOutOfRange {
                    index: b,
                    max: size,
                }
                .into());
            }
            let points = (a..=b)
                .map(|i| construct_streaming(n, i))
                .collect::<Result<Vec<_>, _>>()?;
            PointSet::new(points)?
        }
        None if n == MAX_DIM => {
            return Err(usage(format!("n = {MAX_DIM} needs --stream A..B")));
        }
        None => construct(n)?.into_point_set(),
    };
    emit(
        &format::write(&set, config.output_format, Some(BOX_CONVENTION)),
        output,
        out,
    )?;
    Ok(EXIT_OK)
}

fn read_point_set(path: &Path) -> Result<PointSet, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
    };
    let fmt = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => Format::sniff(&text),
    };
    Ok(format::parse(&text, fmt)?)
}

fn triple_json(t: &WitnessTriple) -> Value {
    json!({ "u": t.u.coords(), "w": t.w.coords(), "v": t.v.coords() })
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    writeln!(out, "{value}")?;
    Ok(())
}

fn cmd_verify(
    input: &Path,
    grid: Option<&str>,
    sample: Option<u64>,
    config: &RunConfig,
    out: &mut dyn Write,
) -> CmdResult {
    let set = read_point_set(input)?;
    let grid = match grid {
        Some(g) => g.parse::<GridSpec>()?,
        None => GridSpec::lattice(set.dim())?,
    };
    let (hit, mut verdict) = match sample {
        Some(samples) => {
            let hit = sample_violating_triple(&set, &grid, samples, config.seed)?;
            let meta = json!({ "method": "sampled", "samples": samples, "seed": config.seed });
            (hit, meta)
        }
        None => {
            let opts = ScanOptions {
                parallel: true,
                deterministic: true,
            };
            (find_violating_triple_with(&set, &grid, opts)?, json!({}))
        }
    };
    let fields = verdict.as_object_mut().expect("object literal");
    fields.insert("general_position".into(), Value::Bool(hit.is_none()));
    if let Some(t) = &hit {
        fields.insert("witness".into(), triple_json(t));
    }
    write_json(out, &verdict)?;
    Ok(if hit.is_none() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_witness(input: &Path, config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let set = read_point_set(input)?;
    let (triple, trace) = witness_triple_traced(&set)?;
    let mut value = triple_json(&triple);
    if config.trace {
        value["trace"] = serde_json::to_value(&trace).expect("trace serializes");
    }
    write_json(out, &value)?;
    Ok(EXIT_OK)
}

fn solve_json(grid: &GridSpec, mode: SolveMode, res: &SolveResult) -> Value {
    let convention = match grid.kind() {
        GridKind::Torus => TORUS_CONVENTION,
        _ => BOX_CONVENTION,
    };
    let mut v = json!({
        "grid": grid.to_string(),
        "mode": match mode { SolveMode::OneWitness => "one", SolveMode::CountAll => "count" },
        "gp": res.gp,
        "nodes_explored": res.nodes_explored,
    });
    if let Some(c) = res.count_maximum {
        v["count_maximum"] = json!(c);
    }
    if let Some(c) = res.count_up_to_symmetry {
        v["count_up_to_symmetry"] = json!(c);
    }
    v["witness_sets"] = Value::Array(
        res.witness_sets
            .iter()
            .map(|s| format::to_json_value(s, Some(convention)))
            .collect(),
    );
    v
}

fn solver_config(mode: SolveMode, symmetry: bool, config: &RunConfig) -> SolverConfig {
    SolverConfig {
        mode,
        vertex_cap: config.vertex_cap,
        deterministic: config.deterministic,
        seed_lower_bound: true,
        count_symmetry_classes: symmetry,
    }
}

fn cmd_solve(
    grid: &str,
    mode: ModeArg,
    symmetry: bool,
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let grid: GridSpec = grid.parse()?;
    let mode = match mode {
        ModeArg::One => SolveMode::OneWitness,
        ModeArg::Count => SolveMode::CountAll,
    };
    let res = max_gp(&grid, &solver_config(mode, symmetry, config))?;
    write_json(out, &solve_json(&grid, mode, &res))?;
    let _ = writeln!(err, "elapsed: {:.3}s", res.elapsed.as_secs_f64());
    Ok(EXIT_OK)
}

fn cmd_solve_table(rmax: u64, smax: u64, config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    if rmax < 2 || smax < 2 {
        return Err(usage("table bounds must be at least 2"));
    }
    let cfg = solver_config(SolveMode::OneWitness, false, config);
    let mut text = String::from("r\\s");
    for s in 2..=smax {
        text.push_str(&format!(",{s}"));
    }
    text.push('\n');
    for r in 2..=rmax {
        text.push_str(&r.to_string());
        for s in 2..=smax {
            let res = max_gp(&GridSpec::boxed(vec![r, s])?, &cfg)?;
            text.push_str(&format!(",{}", res.gp));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_count(grid: &str, out: &mut dyn Write) -> CmdResult {
    let spec: GridSpec = grid.parse()?;
    if spec.kind() != GridKind::Box || spec.dim() != 2 {
        return Err(usage(format!(
            "count takes a 2D box such as box:4x4; use `solve --mode count --grid {grid}` otherwise"
        )));
    }
    let (gp, count) = count_max_gp_grid_2d(spec.sides()[0], spec.sides()[1])?;
    write_json(
        out,
        &json!({ "grid": spec.to_string(), "gp": gp, "count": count }),
    )?;
    Ok(EXIT_OK)
}
