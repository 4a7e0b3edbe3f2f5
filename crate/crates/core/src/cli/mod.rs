//! The `toroidal` command line: argument parsing, dispatch and reports.
//!
//! Exit codes: 0 on success, 1 when the computation fails for a mathematical
//! reason, 2 when an input document or argument is malformed.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::blowup::{
    blowup_charts, coarse_kummer_blowup, kummer_blowup_charts, strict_transform_coarse, verify_principalization,
    BlowupChart, PermissibleCenter,
};
use crate::chart::{coarse_space, coarsen_toroidal, ToroidalChart};
use crate::format::{inline_kummer, monomial_with_names, ordinary_with_names, parse_inline_ideal, ChartDocument, FormatError, IdealDocument};
use crate::ideal::kummer_descend_je;
use crate::lattice::LatticeVector;
use report::{int, matrix, subgroup, u64s, vector, vectors, Obj};

/// Environment variable selecting the number of worker threads.
pub const THREADS_ENV: &str = "TOROIDAL_THREADS";

#[derive(Parser, Debug)]
#[command(name = "toroidal", version, about = "Chart-level computations for toroidal orbifolds")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (overrides TOROIDAL_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert basis, faces and lattice of the chart monoid.
    Saturate { chart: PathBuf },
    /// Root ideal I^[1/d] of a monomial ideal.
    RootIdeal {
        chart: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        d: u64,
    },
    /// Charts of the normalized blowup along a permissible center.
    Blowup {
        chart: PathBuf,
        #[arg(long)]
        center: String,
        /// Directory receiving one chart document per output chart.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Charts of the Kummer blowup along a Kummer ideal.
    KummerBlowup {
        chart: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Charts of the coarse Kummer blowup, the blowup along J_e.
    CoarseBlowup {
        chart: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        e: Option<u64>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Stabilizers at every combinatorial point.
    Stabilizers { chart: PathBuf },
    /// Total toroidal coarsening.
    Coarsen {
        chart: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Invariants of the full group action.
    CoarseSpace { chart: PathBuf },
    /// Whether all inertia of the chart is toroidal.
    Destackified { chart: PathBuf },
    /// Coarse strict transform on the stratum cut out by a subchart ideal.
    StrictTransform {
        chart: PathBuf,
        #[arg(long)]
        subchart: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Moves regular coordinates into the monoid.
    Enlarge {
        chart: PathBuf,
        /// Comma-separated coordinate names.
        #[arg(long)]
        t: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Saturate { .. } => "saturate",
            Command::RootIdeal { .. } => "root-ideal",
            Command::Blowup { .. } => "blowup",
            Command::KummerBlowup { .. } => "kummer-blowup",
            Command::CoarseBlowup { .. } => "coarse-blowup",
            Command::Stabilizers { .. } => "stabilizers",
            Command::Coarsen { .. } => "coarsen",
            Command::CoarseSpace { .. } => "coarse-space",
            Command::Destackified { .. } => "destackified",
            Command::StrictTransform { .. } => "strict-transform",
            Command::Enlarge { .. } => "enlarge",
        }
    }
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the command line with the given arguments (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let threads = cli.threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    };
    let name = cli.command.name();
    match pool.install(|| execute(&cli.command)) {
        Ok(result) => {
            let doc = report::document(name, result);
            let stdout = match cli.format {
                Format::Text => report::to_text(&doc),
                Format::Json => report::to_json(&doc),
            };
            Outcome { stdout, stderr: String::new(), code: 0 }
        }
        Err(e) => {
            let code = if e.is_schema() { 2 } else { 1 };
            let msg = e.to_string();
            let stderr = format!("error[{}]: {msg}\n", e.name());
            let stdout = match cli.format {
                Format::Json => report::to_json(&report::error_document(name, e.name(), e.code(), &msg)),
                Format::Text => String::new(),
            };
            Outcome { stdout, stderr, code }
        }
    }
}

/// Errors of a CLI run: document problems, I/O problems or library errors.
#[derive(Debug)]
pub enum CliError {
    Format(FormatError),
    Io(String),
}

impl CliError {
    fn is_schema(&self) -> bool {
        match self {
            CliError::Format(e) => e.is_schema(),
            CliError::Io(_) => true,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CliError::Format(e) => e.name(),
            CliError::Io(_) => "IoError",
        }
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Format(e) => e.code(),
            CliError::Io(_) => 40,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Format(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "{s}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Format(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_chart(path: &Path) -> CliResult<(ChartDocument, ToroidalChart)> {
    let text = read(path)?;
    let doc = ChartDocument::parse(&text)?;
    let chart = doc.to_chart()?;
    Ok((doc, chart))
}

/// An ideal given inline or as the path of an ideal document.
fn load_ideal(spec: &str, doc: &ChartDocument) -> CliResult<IdealDocument> {
    let p = Path::new(spec);
    if spec.ends_with(".ideal") && p.is_file() {
        return Ok(IdealDocument::parse(&read(p)?)?);
    }
    Ok(parse_inline_ideal(spec, doc)?)
}

fn write_chart(dir: &Path, name: &str, chart: &ToroidalChart) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{name}.chart"));
    std::fs::write(&path, ChartDocument::from_chart(chart).print())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn named(v: &LatticeVector, doc: &ChartDocument) -> Value {
    Value::String(monomial_with_names(v, &doc.names().0))
}

/// The named form of an extended-lattice vector of a chart described by `doc`.
fn named_ext(v: &LatticeVector, doc: &ChartDocument) -> Value {
    let (mut names, t) = doc.names();
    names.extend((1..=doc.unit_rank).map(|j| format!("u{j}")));
    names.extend(t);
    Value::String(monomial_with_names(v, &names))
}

fn execute(cmd: &Command) -> CliResult<Value> {
    match cmd {
        Command::Saturate { chart } => {
            let (_, c) = load_chart(chart)?;
            let m = &c.monoid;
            let faces: Vec<Value> = m
                .faces()
                .iter()
                .map(|f| Obj::new().put("dim", f.dim).put("generators", vectors(&f.generators)).into())
                .collect();
            Ok(Obj::new()
                .put("rank", m.rank())
                .put("generators", vectors(m.generators()))
                .put("lattice", vectors(m.lattice().rows()))
                .put("facets", vectors(m.facets()))
                .put("faces", Value::Array(faces))
                .into())
        }
        Command::RootIdeal { chart, ideal, d } => {
            let (doc, c) = load_chart(chart)?;
            let i = load_ideal(ideal, &doc)?.to_monomial(&c)?;
            let r = i.root(*d)?;
            let named_gens: Vec<Value> = r.generators().iter().map(|g| named(g, &doc)).collect();
            Ok(Obj::new()
                .put("ideal", vectors(i.generators()))
                .put("d", *d)
                .put("generators", vectors(r.generators()))
                .put("monomials", Value::Array(named_gens))
                .put("principal", r.is_principal())
                .put("invertible", r.is_invertible()?)
                .into())
        }
        Command::Blowup { chart, center, emit } => {
            let (doc, c) = load_chart(chart)?;
            let z = load_ideal(center, &doc)?;
            if z.denom != 1 {
                return Err(FormatError::Schema { line: 0, msg: "a blowup center has no roots; use kummer-blowup".into() }.into());
            }
            z.to_kummer(&c)?;
            let set = blowup_charts(&c, &PermissibleCenter::new(z.smooth_count, z.monomials.clone()))?;
            let charts: Vec<Value> = set.charts.iter().map(|bc| blowup_chart_value(bc, &doc)).collect();
            if let Some(dir) = emit {
                for bc in &set.charts {
                    write_chart(dir, &bc.label.to_string(), &bc.chart)?;
                }
            }
            Ok(Obj::new().put("center", vectors(&set.center_monomials)).put("smooth_count", z.smooth_count).put("charts", Value::Array(charts)).into())
        }
        Command::KummerBlowup { chart, ideal, emit } => {
            let (doc, c) = load_chart(chart)?;
            let k = load_ideal(ideal, &doc)?.to_kummer(&c)?;
            let kb = kummer_blowup_charts(&c, &k)?;
            let pr = verify_principalization(&c, &k, &kb);
            let cover = Obj::new()
                .put("galois", u64s(&kb.cover.galois().orders))
                .put("chart", report::chart(&kb.cover.chart))
                .put("to_base", matrix(&kb.cover.to_base.rows))
                .put("denominator", int(&kb.cover.to_base.denom));
            let mut charts = Vec::new();
            for sc in &kb.charts {
                let map = sc.to_base(&kb.cover);
                let (ok, witness) = sc.chart().is_destackified()?;
                charts.push(
                    Obj::new()
                        .put("label", sc.label().to_string())
                        .put("kind", if sc.blowup.is_t_chart() { "t" } else { "m" })
                        .put("residual_order", sc.residual_order)
                        .put("relative_stabilizer", subgroup(&sc.rel_stabilizer))
                        .put("chart", report::chart(sc.chart()))
                        .put("to_base", matrix(&map.rows))
                        .put("denominator", int(&map.denom))
                        .put("destackified", ok)
                        .put("witness", witness.map(|p| Value::String(p.to_string())).unwrap_or(Value::Null))
                        .into(),
                );
            }
            if let Some(dir) = emit {
                for sc in &kb.charts {
                    write_chart(dir, &sc.label().to_string(), sc.chart())?;
                }
            }
            Ok(Obj::new()
                .put("ideal", inline_kummer(&k, &doc))
                .put("cover", cover)
                .put("charts", Value::Array(charts))
                .put(
                    "principalization",
                    Obj::new().put("ok", pr.ok).put("witness", pr.witness.map(Value::String).unwrap_or(Value::Null)),
                )
                .into())
        }
        Command::CoarseBlowup { chart, ideal, e, emit } => {
            let (doc, c) = load_chart(chart)?;
            let k = load_ideal(ideal, &doc)?.to_kummer(&c)?;
            let e = e.unwrap_or(k.denom);
            let j = kummer_descend_je(&c.monoid, &k, e)?;
            let cb = coarse_kummer_blowup(&c, &k, Some(e))?;
            let charts: Vec<Value> = cb
                .set
                .charts
                .iter()
                .map(|bc| {
                    let map = cb.to_base(bc);
                    Obj::new()
                        .put("label", bc.label.to_string())
                        .put("generator", named_ext(&map.apply_scaled(&bc.generator), &doc))
                        .put("chart", report::chart(&bc.chart))
                        .put("to_base", matrix(&map.rows))
                        .into()
                })
                .collect();
            if let Some(dir) = emit {
                for bc in &cb.set.charts {
                    write_chart(dir, &bc.label.to_string(), &bc.chart)?;
                }
            }
            Ok(Obj::new().put("e", e).put("ideal", ordinary_with_names(&j, &doc)).put("charts", Value::Array(charts)).into())
        }
        Command::Stabilizers { chart } => {
            let (_, c) = load_chart(chart)?;
            let reports = c.points().iter().map(|p| c.toroidal_stabilizer(p)).collect::<crate::Result<Vec<_>>>()?;
            Ok(Obj::new()
                .put("group", u64s(&c.group().orders))
                .put("lattice_automorphisms", c.action.has_autos())
                .put("points", Value::Array(reports.iter().map(report::stabilizers).collect()))
                .into())
        }
        Command::Coarsen { chart, emit } => {
            let (_, c) = load_chart(chart)?;
            let co = coarsen_toroidal(&c)?;
            if let Some(dir) = emit {
                write_chart(dir, "coarsened", co.chart())?;
            }
            Ok(Obj::new()
                .put("subgroup", subgroup(co.subgroup()))
                .put("chart", report::chart(co.chart()))
                .put("to_parent", matrix(&co.invariant.to_parent))
                .into())
        }
        Command::CoarseSpace { chart } => {
            let (doc, c) = load_chart(chart)?;
            let cs = coarse_space(&c)?;
            let named_gens: Vec<Value> = cs.generators.iter().map(|g| named_ext(g, &doc)).collect();
            Ok(Obj::new()
                .put("generators", vectors(&cs.generators))
                .put("monomials", Value::Array(named_gens))
                .put("units", vectors(&cs.units))
                .into())
        }
        Command::Destackified { chart } => {
            let (_, c) = load_chart(chart)?;
            let (ok, w) = c.is_destackified()?;
            Ok(Obj::new()
                .put("destackified", ok)
                .put("witness", w.map(|p| Value::String(p.to_string())).unwrap_or(Value::Null))
                .into())
        }
        Command::StrictTransform { chart, subchart, ideal, n, m } => {
            let (doc, c) = load_chart(chart)?;
            let k = load_ideal(ideal, &doc)?.to_kummer(&c)?;
            let sub = load_ideal(subchart, &doc)?.to_monomial(&c)?;
            let s = strict_transform_coarse(&c, &sub, &k, *n, *m)?;
            let named_gens: Vec<Value> = s.generators().iter().map(|g| named(g, &doc)).collect();
            Ok(Obj::new()
                .put("n", *n)
                .put("m", *m)
                .put("generators", vectors(s.generators()))
                .put("monomials", Value::Array(named_gens))
                .into())
        }
        Command::Enlarge { chart, t, emit } => {
            let (doc, c) = load_chart(chart)?;
            let tnames = doc.names().1;
            let mut idx = Vec::new();
            for name in t.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i = tnames
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| FormatError::Schema { line: 0, msg: format!("unknown coordinate `{name}`") })?;
                idx.push(i);
            }
            let (e, rows) = c.enlarge_structure(&idx)?;
            if let Some(dir) = emit {
                write_chart(dir, "enlarged", &e)?;
            }
            Ok(Obj::new().put("chart", report::chart(&e)).put("to_parent", matrix(&rows)).into())
        }
    }
}

fn blowup_chart_value(bc: &BlowupChart, doc: &ChartDocument) -> Value {
    Obj::new()
        .put("label", bc.label.to_string())
        .put("generator", named_ext(&bc.label_parent, doc))
        .put("generator_coordinates", vector(&bc.generator))
        .put("chart", report::chart(&bc.chart))
        .put("to_parent", matrix(&bc.to_parent))
        .into()
}
