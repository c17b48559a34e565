//! The `el` command line.
//!
//! Exit codes: 0 success, 1 nonzero residuals in `verify`, 2 usage or input
//! errors, 3 build failures, 4 inapplicable reflection.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cartan::{CartanError, CartanFile, CartanSpec, EquivalenceWitness, REGISTRY_SIZE};
use crate::contragredient::{self, BuildError, RootReport};
use crate::reflections::{self, ClassLabel, OrbitGraph, ReflectError};
use crate::relations::{self, RelationError, RelationSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUILD: i32 = 3;
pub const EXIT_NOT_ISOTROPIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "el",
    version,
    about = "Cartan matrices and contragredient Lie superalgebras over GF(p)"
)]
pub struct Cli {
    /// Print the built-in registry as JSON and exit.
    #[arg(long)]
    pub dump_registry: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print registry matrices with diagonals and parities.
    List {
        #[arg(short = 'm')]
        matrix: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Build g(A) and report its superdimension and roots.
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Inverse of the Cartan matrix mod p.
    Invert {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Odd reflection at a 1-based root index.
    Reflect {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'i')]
        index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Closure under odd reflections.
    Orbit {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Table of reflections numbered against the registry.
    Table {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate relations in g(A).
    Verify {
        #[command(flatten)]
        source: Source,
        /// paper:<k>, serre or file:<path>
        #[arg(long, value_parser = parse_relation_source)]
        relations: RelationSource,
        #[arg(long)]
        json: bool,
    },
    /// Draw the Dynkin diagram or print the matrix.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find defining relations degree by degree.
    Discover {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        height: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Registry matrix 1..=7.
    #[arg(short = 'm', conflicts_with = "file")]
    pub matrix: Option<u32>,
    /// JSON matrix file.
    #[arg(short = 'f')]
    pub file: Option<PathBuf>,
    /// Prime overriding the one in the file.
    #[arg(long = "p")]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = contragredient::DEFAULT_MAX_HEIGHT)]
    pub max_height: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Ascii,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationSource {
    Paper(u32),
    Serre,
    File(PathBuf),
}

fn parse_relation_source(s: &str) -> Result<RelationSource, String> {
    if s == "serre" {
        return Ok(RelationSource::Serre);
    }
    if let Some(k) = s.strip_prefix("paper:") {
        return k
            .parse()
            .map(RelationSource::Paper)
            .map_err(|_| format!("bad list id {k:?}"));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(RelationSource::File(PathBuf::from(path)));
    }
    Err("expected paper:<k>, serre or file:<path>".to_string())
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        Failure {
            code: EXIT_BUILD,
            message: e.to_string(),
        }
    }
}

impl From<ReflectError> for Failure {
    fn from(e: ReflectError) -> Self {
        let code = match &e {
            ReflectError::NotIsotropic { .. } => EXIT_NOT_ISOTROPIC,
            ReflectError::Build(_) | ReflectError::Degenerate(_) => EXIT_BUILD,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        let code = match &e {
            RelationError::Build(_) => EXIT_BUILD,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Source {
    fn load_or(&self, default: Option<u32>) -> Result<CartanSpec, Failure> {
        if self.prime.is_some() && self.file.is_none() {
            return Err(Failure::usage("--p is only valid with -f"));
        }
        match (&self.matrix, &self.file) {
            (Some(id), None) => Ok(CartanSpec::registry(*id)?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
                let mut file: CartanFile =
                    serde_json::from_str(&text).map_err(|e| CartanError::Json(e.to_string()))?;
                if let Some(p) = self.prime {
                    file.p = p;
                }
                Ok(CartanSpec::from_file(&file)?)
            }
            (None, None) => match default {
                Some(id) => Ok(CartanSpec::registry(id)?),
                None => Err(Failure::usage("one of -m <id> or -f <path> is required")),
            },
            (Some(_), Some(_)) => Err(Failure::usage("-m and -f are mutually exclusive")),
        }
    }

    fn load(&self) -> Result<CartanSpec, Failure> {
        self.load_or(None)
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn tuple(xs: &[u32]) -> String {
    let parts: Vec<String> = xs.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Registry numbering when every node matches, discovery numbering otherwise.
fn labels_for(graph: &OrbitGraph) -> Vec<ClassLabel> {
    reflections::number_against_registry(graph).unwrap_or_else(|_| {
        graph
            .nodes
            .iter()
            .enumerate()
            .map(|(k, node)| ClassLabel {
                id: k as u32 + 1,
                witness: EquivalenceWitness::identity(node.spec.n()),
            })
            .collect()
    })
}

fn registry_match(spec: &CartanSpec) -> Option<(u32, EquivalenceWitness)> {
    (1..=REGISTRY_SIZE).find_map(|id| {
        let r = CartanSpec::registry(id).ok()?;
        spec.equivalent(&r).map(|w| (id, w))
    })
}

#[derive(Serialize)]
struct ReflectOutput {
    index: usize,
    matrix: CartanFile,
    class: Option<u32>,
    witness: Option<EquivalenceWitness>,
}

#[derive(Serialize)]
struct OrbitOutput {
    classes: Vec<OrbitClass>,
    edges: Vec<[usize; 3]>,
}

#[derive(Serialize)]
struct OrbitClass {
    id: u32,
    matrix: CartanFile,
}

#[derive(Serialize)]
struct DiscoverOutput<'a> {
    weights: &'a [relations::WeightStats],
    relations: Vec<LabelledExpr>,
}

#[derive(Serialize)]
struct LabelledExpr {
    label: String,
    expr: String,
}

fn execute(command: Command, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::List {
            matrix,
            json: as_json,
        } => {
            let ids: Vec<u32> = match matrix {
                Some(id) => {
                    CartanSpec::registry(id)?;
                    vec![id]
                }
                None => (1..=REGISTRY_SIZE).collect(),
            };
            let specs: Vec<CartanSpec> = ids
                .iter()
                .map(|&id| CartanSpec::registry(id))
                .collect::<Result<_, _>>()?;
            if as_json {
                let files: Vec<CartanFile> = specs.iter().map(CartanSpec::to_file).collect();
                out.push_str(&json(&files));
            } else {
                for (id, s) in ids.iter().zip(&specs) {
                    let diag: Vec<String> = s
                        .matrix()
                        .signed_rows()
                        .iter()
                        .enumerate()
                        .map(|(i, r)| r[i].to_string())
                        .collect();
                    let _ = writeln!(out, "{id})  diagonal ({})", diag.join(","));
                    let _ = writeln!(out, "{s}");
                }
            }
        }
        Command::Build {
            source,
            json: as_json,
        } => {
            let spec = source.load()?;
            let model = contragredient::build(&spec, source.max_height)?;
            let report = model.report();
            if as_json {
                out.push_str(&json(&report));
            } else {
                let even = report.roots.iter().filter(|r| !r.parity.is_odd()).count();
                let _ = writeln!(out, "superdimension {}", report.superdimension);
                let _ = writeln!(
                    out,
                    "positive roots {} (even {}, odd {})",
                    report.root_count,
                    even,
                    report.root_count - even
                );
                match &report.maximal_root {
                    Some(RootReport {
                        coeffs,
                        height,
                        weight_mod_p,
                        ..
                    }) => {
                        let _ = writeln!(
                            out,
                            "maximal root {coeffs} height {height} weight mod {} {}",
                            spec.p().get(),
                            tuple(weight_mod_p)
                        );
                    }
                    None => {
                        let _ = writeln!(out, "maximal root not unique");
                    }
                }
            }
        }
        Command::Invert {
            source,
            json: as_json,
        } => {
            let spec = source.load()?;
            let inv = spec.invert_mod_p().map_err(CartanError::from)?;
            if as_json {
                out.push_str(&json(&inv.residue_rows()));
            } else {
                for row in inv.residue_rows() {
                    let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                    let _ = writeln!(out, "{}", cells.join(" "));
                }
            }
        }
        Command::Reflect {
            source,
            index,
            json: as_json,
        } => {
            let spec = source.load()?;
            if index == 0 || index > spec.n() {
                return Err(ReflectError::IndexOutOfRange { index, n: spec.n() }.into());
            }
            let model = contragredient::build(&spec, source.max_height)?;
            let reflected = reflections::odd_reflect_in(&model, index - 1)?;
            let matched = registry_match(&reflected);
            if as_json {
                out.push_str(&json(&ReflectOutput {
                    index,
                    matrix: reflected.to_file(),
                    class: matched.as_ref().map(|m| m.0),
                    witness: matched.map(|m| m.1),
                }));
            } else {
                let _ = writeln!(out, "reflected at root {index}:");
                let _ = write!(out, "{reflected}");
                match matched {
                    Some((id, w)) => {
                        let _ = writeln!(out, "class {id} via {w}");
                    }
                    None => {
                        let _ = writeln!(out, "no registry class");
                    }
                }
            }
        }
        Command::Orbit { source, format } => {
            let spec = source.load_or(Some(1))?;
            let graph = reflections::orbit(&spec, source.max_height)?;
            let labels = labels_for(&graph);
            match format {
                Format::Dot => out.push_str(&graph.to_dot(Some(&labels))),
                Format::Json => {
                    let classes = graph
                        .nodes
                        .iter()
                        .zip(&labels)
                        .map(|(node, l)| OrbitClass {
                            id: l.id,
                            matrix: node.spec.to_file(),
                        })
                        .collect();
                    let edges = graph
                        .edges
                        .iter()
                        .map(|e| {
                            [
                                labels[e.from].id as usize,
                                e.index + 1,
                                labels[e.to].id as usize,
                            ]
                        })
                        .collect();
                    out.push_str(&json(&OrbitOutput { classes, edges }));
                }
                Format::Text | Format::Ascii => {
                    let _ = writeln!(out, "{} classes", graph.len());
                    for e in &graph.edges {
                        let _ = writeln!(
                            out,
                            "{} --{}--> {}",
                            labels[e.from].id,
                            e.index + 1,
                            labels[e.to].id
                        );
                    }
                }
            }
        }
        Command::Table {
            source,
            json: as_json,
        } => {
            let spec = source.load_or(Some(1))?;
            let graph = reflections::orbit(&spec, source.max_height)?;
            let labels = labels_for(&graph);
            let table = reflections::reflection_table(&graph, &labels);
            if as_json {
                out.push_str(&json(&table));
            } else {
                out.push_str(&table.to_text());
            }
        }
        Command::Verify {
            source,
            relations: which,
            json: as_json,
        } => {
            let spec = source.load()?;
            let set: RelationSet = match which {
                RelationSource::Paper(k) => relations::paper_relations(k)?,
                RelationSource::Serre => relations::serre_relations(&spec)?,
                RelationSource::File(path) => relations::load_relation_file(&path)?,
            };
            let model = contragredient::build(&spec, source.max_height)?;
            let report = relations::verify(&model, &set);
            if as_json {
                out.push_str(&json(&report));
            } else {
                for e in &report.entries {
                    let _ = write!(out, "{}", e.label);
                    if let (Some(w), Some(h)) = (&e.weight, e.height) {
                        let _ = write!(out, "  weight {w} height {h}");
                    }
                    if let Some(err) = &e.error {
                        let _ = writeln!(out, "  error: {err}");
                    } else if e.zero {
                        let _ = writeln!(out, "  zero");
                    } else {
                        let r = e.residual.as_deref().unwrap_or(&[]);
                        let _ = writeln!(out, "  nonzero residual {}", tuple(r));
                    }
                }
                let zero = report.entries.iter().filter(|e| e.zero).count();
                let _ = writeln!(out, "{zero}/{} relations vanish", report.entries.len());
            }
            return Ok(if report.all_zero() {
                EXIT_OK
            } else {
                EXIT_RESIDUAL
            });
        }
        Command::Render { source, format } => {
            let spec = source.load()?;
            match format {
                Format::Text => {
                    let _ = write!(out, "{spec}");
                }
                Format::Json => out.push_str(&json(&spec.to_file())),
                Format::Dot => out.push_str(&spec.to_dynkin().to_dot()),
                Format::Ascii => out.push_str(&spec.to_dynkin().to_ascii()),
            }
        }
        Command::Discover {
            source,
            height,
            json: as_json,
        } => {
            let spec = source.load()?;
            let model = contragredient::build(&spec, source.max_height)?;
            let found = relations::discover(&model, height)?;
            if as_json {
                let relations = found
                    .relations
                    .relations
                    .iter()
                    .map(|r| LabelledExpr {
                        label: r.label.clone(),
                        expr: r.expr.to_string(),
                    })
                    .collect();
                out.push_str(&json(&DiscoverOutput {
                    weights: &found.weights,
                    relations,
                }));
            } else {
                for w in found.weights.iter().filter(|w| w.new_dim > 0) {
                    let _ = writeln!(
                        out,
                        "weight {}  free {}  model {}  ideal {}  new {}",
                        w.weight, w.free_dim, w.model_dim, w.ideal_dim, w.new_dim
                    );
                }
                for r in &found.relations.relations {
                    let _ = writeln!(out, "{}  {}", r.label, r.expr);
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut out = String::new();
    let result = if cli.dump_registry {
        let files: Vec<CartanFile> = CartanSpec::registry_all()
            .iter()
            .map(CartanSpec::to_file)
            .collect();
        out.push_str(&json(&files));
        Ok(EXIT_OK)
    } else {
        match cli.command {
            Some(command) => execute(command, &mut out),
            None => Err(Failure::usage("no subcommand given; try --help")),
        }
    };
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
