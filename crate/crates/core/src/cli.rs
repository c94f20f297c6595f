//! Command-line front end. Reports are `key: value` lines on stdout;
//! failures print `error: <category>` and `detail: <message>` on stderr.
//!
//! | exit | category |
//! |------|----------|
//! | 0 | ok |
//! | 1 | usage, io |
//! | 2 | parse |
//! | 3 | validate (∂² ≠ 0, not a chain map, not acyclic, bad parameters) |
//! | 4 | indeterminate (no certified pivot) |

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::io::{self, Document, NamedComplex};
use crate::series::parse_rational;
use crate::torsion::{BasedComplex, TorsionError, TorsionOptions, DEFAULT_CUTOFF};
use crate::torus::{self, TorusError, DEFAULT_GRID, DEFAULT_NEWTON_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Usage,
    Io,
    Parse,
    Validate,
    Indeterminate,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Usage | Category::Io => 1,
            Category::Parse => 2,
            Category::Validate => 3,
            Category::Indeterminate => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Io => "io",
            Category::Parse => "parse",
            Category::Validate => "validate",
            Category::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    category: Category,
    detail: String,
}

impl Failure {
    fn new(category: Category, detail: impl ToString) -> Self {
        Failure {
            category,
            detail: detail.to_string(),
        }
    }
}

impl From<TorsionError> for Failure {
    fn from(e: TorsionError) -> Self {
        let category = if e.is_indeterminate() {
            Category::Indeterminate
        } else {
            Category::Validate
        };
        Failure::new(category, e)
    }
}

impl From<TorusError> for Failure {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::Torsion(t) => t.into(),
            TorusError::Conditions { .. } | TorusError::NoEquilibria { .. } => Failure::new(Category::Usage, e),
            other => Failure::new(Category::Validate, other),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "symtorsion", version, about = "Torsion of based complexes over Novikov rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check ∂² = 0 for every complex and the chain-map identity for every map.
    Validate { file: PathBuf },
    /// Homology ranks of every complex.
    Ranks {
        file: PathBuf,
        #[arg(long, value_name = "p/q")]
        cutoff: Option<String>,
    },
    /// Milnor torsion of a complex (the first one unless --complex is given).
    Torsion {
        file: PathBuf,
        #[arg(long, value_name = "p/q")]
        cutoff: Option<String>,
        #[arg(long)]
        complex: Option<String>,
    },
    /// Relative torsion of a chain map, the torsion of its mapping cone.
    RelTorsion {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, value_name = "p/q")]
        cutoff: Option<String>,
    },
    /// Periodic orbits, indices, Floer complex and torsion of the torus example.
    TorusExample {
        #[arg(long, value_name = "p/q")]
        b: Option<String>,
        #[arg(long, value_name = "float")]
        tol: Option<f64>,
        #[arg(long, value_name = "p/q")]
        cutoff: Option<String>,
    },
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => failure(Failure::new(Category::Usage, text.trim_end())),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    let mut stderr = String::new();
    let _ = writeln!(stderr, "error: {}", f.category.name());
    for (i, line) in f.detail.lines().enumerate() {
        let key = if i == 0 { "detail" } else { "detail+" };
        let _ = writeln!(stderr, "{key}: {line}");
    }
    Outcome {
        code: f.category.exit_code(),
        stdout: String::new(),
        stderr,
    }
}

fn cutoff_option(text: Option<&str>) -> Result<TorsionOptions, Failure> {
    let w = match text {
        None => BigRational::from_integer(BigInt::from(DEFAULT_CUTOFF)),
        Some(t) => match parse_rational(t) {
            Some(q) if q.is_positive() => q,
            _ => return Err(Failure::new(Category::Usage, format!("invalid cutoff '{t}', expected positive p/q"))),
        },
    };
    Ok(TorsionOptions::with_cutoff(w))
}

fn load(path: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(Category::Io, format!("{}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Failure::new(Category::Parse, format!("{}: {e}", path.display())))
}

fn dispatch(command: Command) -> Result<String, Failure> {
    let mut out = String::new();
    match command {
        Command::Validate { file } => {
            let doc = load(&file)?;
            for c in &doc.complexes {
                let r = c.complex.validate()?;
                let _ = writeln!(out, "complex: {}", c.name);
                let _ = writeln!(out, "generators: {}", r.generators);
                let _ = writeln!(out, "certified: {}", r.certified);
            }
            for m in &doc.maps {
                let certified = m.map.validate()?;
                let _ = writeln!(out, "map: {}", m.name);
                let _ = writeln!(out, "certified: {certified}");
            }
            let _ = writeln!(out, "status: ok");
        }
        Command::Ranks { file, cutoff } => {
            let opts = cutoff_option(cutoff.as_deref())?;
            let doc = load(&file)?;
            for c in &doc.complexes {
                let h = c.complex.homology_ranks(&opts.working_cutoff)?;
                let _ = writeln!(out, "complex: {}", c.name);
                for (d, r) in &h.ranks {
                    let _ = writeln!(out, "rank[{d}]: {r}");
                }
                let _ = writeln!(out, "acyclic: {}", h.is_acyclic());
                let _ = writeln!(out, "cutoff: {}", opts.working_cutoff);
                let _ = writeln!(out, "certified: {}", h.certified);
            }
        }
        Command::Torsion { file, cutoff, complex } => {
            let opts = cutoff_option(cutoff.as_deref())?;
            let doc = load(&file)?;
            let c = pick_complex(&doc, complex.as_deref())?;
            let _ = writeln!(out, "complex: {}", c.name);
            torsion_report(&mut out, &c.complex, &opts)?;
        }
        Command::RelTorsion { file, map, cutoff } => {
            let opts = cutoff_option(cutoff.as_deref())?;
            let doc = load(&file)?;
            let m = doc
                .map(&map)
                .ok_or_else(|| Failure::new(Category::Usage, format!("no map named '{map}'")))?;
            let class = m.map.relative_torsion(&opts)?;
            let rep = class
                .representative(&opts.working_cutoff)
                .map_err(TorsionError::from)?;
            let _ = writeln!(out, "map: {}", m.name);
            let _ = writeln!(out, "source: {}", m.source);
            let _ = writeln!(out, "target: {}", m.target);
            let _ = writeln!(out, "relative_torsion: {rep}");
            let _ = writeln!(out, "trivial: {}", class.is_trivial());
            let _ = writeln!(out, "leading_coefficient: {}", class.leading_coefficient());
            let _ = writeln!(out, "cutoff: {}", opts.working_cutoff);
            let _ = writeln!(out, "certified: {}", class.cutoff());
        }
        Command::TorusExample { b, tol, cutoff } => {
            let opts = cutoff_option(cutoff.as_deref())?;
            let b = match b {
                None => torus::TorusSystem::default_b(),
                Some(t) => parse_rational(&t)
                    .ok_or_else(|| Failure::new(Category::Usage, format!("invalid rational '{t}' for --b")))?,
            };
            let tol = tol.unwrap_or(DEFAULT_NEWTON_TOL);
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Failure::new(Category::Usage, "--tol must be a positive number"));
            }
            torus_report(&mut out, b, tol, &opts)?;
        }
    }
    Ok(out)
}

fn pick_complex<'d>(doc: &'d Document, name: Option<&str>) -> Result<&'d NamedComplex, Failure> {
    match name {
        Some(n) => doc
            .complexes
            .iter()
            .find(|c| c.name == n)
            .ok_or_else(|| Failure::new(Category::Usage, format!("no complex named '{n}'"))),
        None => doc
            .complexes
            .first()
            .ok_or_else(|| Failure::new(Category::Usage, "document contains no complex")),
    }
}

fn torsion_report(out: &mut String, c: &BasedComplex, opts: &TorsionOptions) -> Result<(), Failure> {
    let (even, odd) = c.euler_parity();
    let t = c.torsion(opts)?;
    let rep = t
        .class
        .representative(&opts.working_cutoff)
        .map_err(TorsionError::from)?;
    let _ = writeln!(out, "generators: {}", c.len());
    let _ = writeln!(out, "euler_parity: {even} {odd}");
    let _ = writeln!(out, "torsion: {rep}");
    let _ = writeln!(out, "trivial: {}", t.class.is_trivial());
    let _ = writeln!(out, "leading_coefficient: {}", t.class.leading_coefficient());
    let _ = writeln!(out, "in_lambda0: {}", t.class.in_lambda0());
    let _ = writeln!(out, "cutoff: {}", opts.working_cutoff);
    let _ = writeln!(out, "certified: {}", t.certified);
    Ok(())
}

fn torus_report(out: &mut String, b: BigRational, tol: f64, opts: &TorsionOptions) -> Result<(), Failure> {
    let report = torus::run_example(b, tol, opts)?;
    let _ = writeln!(out, "b: {}", report.system.b());
    let _ = writeln!(out, "newton_tol: {tol:e}");
    let _ = writeln!(out, "grid: {DEFAULT_GRID}x{DEFAULT_GRID}");
    let _ = writeln!(out, "seeds_converged: {}/{}", report.search.converged, report.search.seeds);
    let _ = writeln!(out, "orbits: {}", report.search.orbits.len());
    for (i, o) in report.search.orbits.iter().enumerate() {
        let kind = if o.monodromy.trace().abs() < 2.0 { "elliptic" } else { "hyperbolic" };
        let _ = writeln!(out, "orbit.x{i}.x: {:.10}", o.x);
        let _ = writeln!(out, "orbit.x{i}.y: {:.10}", o.y.abs());
        let _ = writeln!(out, "orbit.x{i}.type: {kind}");
        let _ = writeln!(out, "orbit.x{i}.det_i_minus_m: {:.10}", o.det_i_minus_m);
        let _ = writeln!(out, "orbit.x{i}.cz_index: {}", report.indices[i]);
        let _ = writeln!(out, "orbit.x{i}.monodromy_error: {:.3e}", report.monodromy_error[i]);
        let _ = writeln!(out, "orbit.x{i}.symplectic_error: {:.3e}", report.symplectic_error[i]);
        let _ = writeln!(out, "orbit.x{i}.richardson: {:.3e}", o.richardson);
    }
    let _ = writeln!(out, "connecting: {}", report.connecting.total());
    let labels: Vec<String> = report.connecting.labels().iter().map(|l| l.to_string()).collect();
    let _ = writeln!(out, "connecting.labels: {}", labels.join(" "));
    let mut doc_complexes = Vec::new();
    for v in &report.variants {
        let name = format!("floer_{}", v.convention);
        let (src, tgt) = (0..v.complex.len())
            .flat_map(|s| (0..v.complex.len()).map(move |t| (s, t)))
            .find(|&(s, t)| !v.complex.differential().get(t, s).is_zero())
            .unwrap_or((0, 0));
        let entry = v.complex.differential().get(tgt, src);
        let rep = v
            .torsion
            .representative(&opts.working_cutoff)
            .map_err(TorsionError::from)?;
        let (even, odd) = v.complex.euler_parity();
        let _ = writeln!(out, "{name}.differential: {entry}");
        let _ = writeln!(out, "{name}.euler_parity: {even} {odd}");
        let _ = writeln!(out, "{name}.torsion: {rep}");
        let _ = writeln!(out, "{name}.trivial: {}", v.torsion.is_trivial());
        let _ = writeln!(out, "{name}.leading_coefficient: {}", v.torsion.leading_coefficient());
        doc_complexes.push(NamedComplex {
            name,
            complex: std::sync::Arc::new(v.complex.clone()),
        });
    }
    let _ = writeln!(out, "cutoff: {}", opts.working_cutoff);
    let lattice = doc_complexes[0].complex.lattice().clone();
    let grading = doc_complexes[0].complex.grading();
    let doc = Document {
        lattice,
        grading,
        complexes: doc_complexes,
        maps: Vec::new(),
    };
    let _ = writeln!(out, "document: begin");
    out.push_str(&io::render(&doc));
    let _ = writeln!(out, "document: end");
    Ok(())
}
