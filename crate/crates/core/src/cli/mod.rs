//! Command-line interface. `run` parses arguments, performs one command and
//! returns the process exit code: 0 on success, 1 when a verification check
//! fails, 2 on malformed input or any other error.

pub mod render;
pub mod serve;
pub mod session;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::seeds::{assert_monomial_lemma, explore_from, Limits, SeedError};
use crate::surface::{enumerate_basis, expand_in_basis, ArcAlgebra, Curve, SurfaceError, SurfaceModel};
use crate::verify::{
    multiple_arrow_in_class, verify_disjoint_union_property, verify_surface, verify_unistructural_finite, Check, Status, SurfaceContext,
    VerificationReport, VerifyError,
};
use session::{Session, SessionError, Snapshot, StartSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Parser)]
#[command(name = "clusterkit", version, about = "Exact cluster algebra computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Seed file: {"n": 2, "arrows": [[1, 2, 1]], "cluster": [...]}
    #[arg(long, value_name = "FILE", conflicts_with_all = ["surface", "preset"])]
    quiver: Option<PathBuf>,
    /// Triangulation file: {"surface": {"kind": "disk", "m": 6}, "arcs": [...]}
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    surface: Option<PathBuf>,
    /// Built-in example, e.g. A2, A3, kronecker, hexagon, annulus11
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 10_000)]
    max_seeds: usize,
    #[arg(long, default_value_t = 100_000)]
    max_terms: usize,
    #[arg(long, default_value_t = 64)]
    max_depth: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits { max_seeds: self.max_seeds, max_terms: self.max_terms, max_depth: self.max_depth }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Print JSON to standard output
    #[arg(long)]
    json: bool,
    /// Write the result to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the exchange graph (JSON, or DOT when --out ends in .dot)
    Explore {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Check unistructurality on a finite exchange graph, or skein relations on a surface
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        output: Output,
        /// Largest winding of annulus arcs and bracelet index used by surface checks
        #[arg(long, default_value_t = 2)]
        winding: u32,
    },
    /// List the truncated bracelet basis, or expand a product of two arcs in it
    Basis {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        winding: u32,
        /// Two arcs in compact syntax, e.g. --expand 1-3 2-6
        #[arg(long, num_args = 2, value_names = ["ARC1", "ARC2"], allow_hyphen_values = true)]
        expand: Option<Vec<String>>,
    },
    /// Mutate a seed (and flip its triangulation) along a sequence of vertices
    Mutate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        output: Output,
        /// Comma-separated 1-based vertices, e.g. 1,2,1
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<usize>,
        /// Start from a saved session
        #[arg(long, value_name = "FILE")]
        load: Option<PathBuf>,
        /// Save the session after mutating
        #[arg(long, value_name = "FILE")]
        save: Option<PathBuf>,
    },
    /// Draw a triangulation (or a quiver) as SVG
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Serve the explorer protocol over HTTP
    Serve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn parse<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json { path: path.into(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

impl Input {
    fn start(&self) -> Result<Option<StartSpec>, CliError> {
        Ok(match (&self.quiver, &self.surface, &self.preset) {
            (Some(p), _, _) => Some(StartSpec::Seed(parse(p)?)),
            (_, Some(p), _) => Some(StartSpec::Surface(parse(p)?)),
            (_, _, Some(name)) => Some(StartSpec::Preset { preset: name.clone() }),
            _ => None,
        })
    }

    fn require(&self) -> Result<StartSpec, CliError> {
        self.start()?.ok_or_else(|| CliError::Usage("one of --quiver, --surface or --preset is required".into()))
    }
}

/// What a command printed and which exit code it asks for.
struct Done {
    stdout: String,
    code: i32,
}

fn emit(output: &Output, json: String, text: String) -> Result<Done, CliError> {
    if let Some(p) = &output.out {
        write(p, &json)?;
    }
    Ok(Done { stdout: if output.json { json } else { text }, code: 0 })
}

fn explore_cmd(input: &Input, limits: Limits, output: &Output) -> Result<Done, CliError> {
    let (seed, _) = input.require()?.build()?;
    let g = explore_from(&seed, limits)?;
    let summary = format!(
        "{} seeds, {} cluster variables, {} edges{}\n",
        g.num_seeds(),
        g.num_variables(),
        g.edges.len(),
        if g.truncated { " (truncated)" } else { "" }
    );
    if let Some(p) = output.out.as_ref().filter(|p| p.extension().is_some_and(|e| e == "dot")) {
        write(p, &g.to_dot())?;
        return Ok(Done { stdout: if output.json { to_json(&g.to_json()) } else { summary }, code: 0 });
    }
    emit(output, to_json(&g.to_json()), summary)
}

fn verify_cmd(input: &Input, limits: Limits, output: &Output, winding: u32) -> Result<Done, CliError> {
    let report = verify_start(&input.require()?, limits, winding)?;
    let mut done = emit(output, to_json(&report), report.to_text())?;
    done.code = if report.passed() { 0 } else { 1 };
    Ok(done)
}

/// Everything `verify` checks for one starting point. Infinite or
/// truncated mutation classes skip the unistructurality checks; surface
/// checks run whenever the start is a disk or annulus triangulation.
pub fn verify_start(start: &StartSpec, limits: Limits, winding: u32) -> Result<VerificationReport, CliError> {
    let (seed, surface) = start.build()?;
    let mut report = VerificationReport::new(format!("seed of rank {}", seed.rank()));
    let skip = |detail: String| Check {
        name: "unistructural_finite".into(),
        status: Status::Skipped,
        detail,
        witness: None,
        millis: 0.0,
    };
    if let Some(q) = multiple_arrow_in_class(seed.quiver(), limits.max_seeds)? {
        let arrows = serde_json::to_string(&q).expect("quivers serialize");
        report.push(skip(format!("infinite type: the mutation class contains {arrows}")));
    } else {
        let g = explore_from(&seed, limits)?;
        if g.truncated {
            report.push(skip(format!("exchange graph truncated after {} seeds", g.num_seeds())));
        } else {
            let mut ctx = match &surface {
                Some(SurfaceModel::Geometric(t)) => Some(SurfaceContext::new(t.clone(), &g, winding)?),
                _ => None,
            };
            report.merge(verify_unistructural_finite(&g, ctx.as_mut())?);
            let lemma = assert_monomial_lemma(&g);
            report.push(Check {
                name: "monomial_lemma".into(),
                status: if lemma.is_empty() { Status::Pass } else { Status::Fail },
                detail: format!("{} non-initial variables are unit Laurent monomials", lemma.len()),
                witness: (!lemma.is_empty()).then(|| serde_json::json!(lemma)),
                millis: 0.0,
            });
            let parts = seed.quiver().component_quivers();
            if parts.len() > 1 {
                let (first, rest) = (&parts[0].1, parts[1..].iter().map(|(_, q)| q.clone()));
                let rest = rest.reduce(|a, b| a.disjoint_union(&b)).expect("at least two components");
                report.merge(verify_disjoint_union_property(first, &rest, limits)?);
            }
        }
    }
    if let Some(SurfaceModel::Geometric(t)) = &surface {
        report.merge(verify_surface(t.clone(), winding)?);
    }
    Ok(report)
}

fn basis_cmd(input: &Input, output: &Output, degree: usize, winding: u32, expand: Option<&[String]>) -> Result<Done, CliError> {
    let (_, surface) = input.require()?.build()?;
    let Some(SurfaceModel::Geometric(t)) = surface else {
        return Err(CliError::Usage("basis needs a disk or annulus triangulation".into()));
    };
    let mut alg = ArcAlgebra::new(t);
    let basis = enumerate_basis(&mut alg, degree, winding)?;
    if let Some([a, b]) = expand {
        let (a, b): (Curve, Curve) = (a.parse()?, b.parse()?);
        let p = &alg.curve_value(&a)? * &alg.curve_value(&b)?;
        let x = expand_in_basis(&p, &basis)?;
        let mut text = format!("{a} * {b} = {p}\n");
        for t in &x.terms {
            let _ = writeln!(text, "  {} * [{}]  ({:?})", t.coefficient, t.label, t.flavor);
        }
        return emit(output, to_json(&x), text);
    }
    let mut text = String::new();
    for e in &basis {
        let _ = writeln!(text, "{:?}\t{}\t{}", e.flavor, e.label(), e.value);
    }
    emit(output, to_json(&basis), text)
}

fn mutate_cmd(
    input: &Input,
    limits: Limits,
    output: &Output,
    sequence: &[usize],
    load: Option<&Path>,
    save: Option<&Path>,
) -> Result<Done, CliError> {
    let mut s = match load {
        Some(p) => Session::from_snapshot(&parse::<Snapshot>(p)?)?,
        None => Session::new(input.require()?, limits)?,
    };
    for &v in sequence {
        s.mutate(v)?;
    }
    if let Some(p) = save {
        write(p, &to_json(&s.snapshot()))?;
    }
    let mut text = String::new();
    let arcs = s.surface().map(SurfaceModel::arc_labels);
    for (i, x) in s.seed().cluster().iter().enumerate() {
        let arc = arcs.as_ref().map(|a| format!(" [{}]", a[i])).unwrap_or_default();
        let _ = writeln!(text, "x{}{arc} = {x}", i + 1);
    }
    emit(output, to_json(&s.state()), text)
}

fn render_cmd(input: &Input, out: Option<&Path>) -> Result<Done, CliError> {
    let (seed, surface) = input.require()?.build()?;
    let svg = match &surface {
        Some(m) => render::render_surface(m),
        None => render::render_quiver(seed.quiver(), &[]),
    };
    match out {
        Some(p) => {
            write(p, &svg)?;
            Ok(Done { stdout: String::new(), code: 0 })
        }
        None => Ok(Done { stdout: svg, code: 0 }),
    }
}

fn serve_cmd(input: &Input, limits: Limits, host: &str, port: u16, workers: usize) -> Result<Done, CliError> {
    let start = input.start()?.unwrap_or(StartSpec::Preset { preset: "A2".into() });
    let service = Arc::new(serve::Service::new(start, limits)?);
    let addr = format!("{host}:{port}");
    let server = serve::bind(&addr).map_err(|source| CliError::Io { path: addr.clone().into(), source })?;
    eprintln!("listening on http://{addr}");
    serve::run(Arc::new(server), service, workers);
    Ok(Done { stdout: String::new(), code: 0 })
}

fn dispatch(cli: &Cli) -> Result<Done, CliError> {
    match &cli.command {
        Command::Explore { input, limits, output } => explore_cmd(input, limits.limits(), output),
        Command::Verify { input, limits, output, winding } => verify_cmd(input, limits.limits(), output, *winding),
        Command::Basis { input, output, degree, winding, expand } => {
            basis_cmd(input, output, *degree, *winding, expand.as_deref())
        }
        Command::Mutate { input, limits, output, sequence, load, save } => {
            mutate_cmd(input, limits.limits(), output, sequence, load.as_deref(), save.as_deref())
        }
        Command::Render { input, out } => render_cmd(input, out.as_deref()),
        Command::Serve { input, limits, port, host, workers } => serve_cmd(input, limits.limits(), host, *port, *workers),
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl std::io::Write, stderr: &mut impl std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if code == 0 { stdout as &mut dyn std::io::Write } else { stderr }, "{e}");
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(done) => {
            let _ = stdout.write_all(done.stdout.as_bytes());
            if !done.stdout.is_empty() && !done.stdout.ends_with('\n') {
                let _ = writeln!(stdout);
            }
            done.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
