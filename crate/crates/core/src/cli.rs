//! The `ffframes` command line: argument parsing, descriptors, and the six
//! subcommands. Exit codes are 0 for success, 1 for a negative verdict and 2
//! for errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::{self, CatalogEntry};
use crate::construct::{
    exemplar, gabor_frame, harmonic_frame, sphere_ntf, zauner_fiducial, zauner_frame, DiffSet,
    GaborGroup,
};
use crate::cyclotomic::{
    cyclotomic_hom, hoggar_gram, project_gram, sic_fiducial_d2, table1_project, CycInt, CycMatrix,
    GaussianRational,
};
use crate::error::{Error, Result};
use crate::field::{unitary_field, Felt, Field};
use crate::form::{Case, DEFAULT_SEED};
use crate::frame::{
    factor_gram_orthogonal, factor_gram_orthogonal_auto, factor_gram_unitary_seeded, gerzon_bound,
    naimark_complement, FrameRecord,
};
use crate::io::{
    from_json_str, read_frame, read_json, CycMatrixJson, Entry, FieldRef, FormSpaceJson, FrameJson,
    MatrixJson,
};
use crate::search::{
    build_clique_instance, fiducial_scan, find_clique, modular_difference_sets, zauner_matrix,
    Budget,
};

#[derive(Parser, Debug)]
#[command(name = "ffframes", version, about = "Tight frames and ETFs over finite fields")]
pub struct Cli {
    /// Default field for descriptors without one, e.g. `9`, `3^2`, `F_25`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Seed for every randomized fallback.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Append certified ETFs to this JSON-lines catalog.
    #[arg(long, global = true, env = "FFFRAMES_CATALOG")]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a frame or matrix file.
    Verify {
        path: PathBuf,
        /// Geometry for bare matrix files.
        #[arg(long, default_value = "U")]
        case: CaseArg,
    },
    /// Factor a Gram matrix file into a frame.
    Factor {
        path: PathBuf,
        #[arg(long, default_value = "U")]
        case: CaseArg,
        /// Form-space file for the target geometry (Case O).
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Build a frame from a descriptor.
    Construct { descriptor: Vec<String> },
    /// Run a search from a descriptor.
    Search { descriptor: Vec<String> },
    /// Project a cyclotomic construction into a finite field.
    Project { descriptor: Vec<String> },
    /// Print the Gerzon bound.
    Bound { d: usize, case: CaseArg },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum CaseArg {
    #[value(name = "U", alias = "u")]
    U,
    #[value(name = "O", alias = "o")]
    O,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::U => Case::U,
            CaseArg::O => Case::O,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiducialSpec {
    Named(String),
    Entries(Vec<Entry>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructDesc {
    Exemplar {
        name: String,
    },
    Zauner {
        m: u32,
    },
    Gabor {
        factors: Vec<usize>,
        #[serde(default)]
        field: Option<FieldRef>,
        fiducial: FiducialSpec,
    },
    Harmonic {
        n: usize,
        set: Vec<usize>,
        #[serde(default)]
        field: Option<FieldRef>,
    },
    Sphere {
        d: usize,
        #[serde(default)]
        field: Option<FieldRef>,
    },
    Naimark {
        of: Box<ConstructDesc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchDesc {
    Clique {
        d: usize,
        #[serde(default)]
        field: Option<FieldRef>,
        #[serde(default)]
        target: Option<usize>,
    },
    Fiducial {
        d: usize,
        #[serde(default)]
        field: Option<FieldRef>,
    },
    DifferenceSets {
        n: usize,
        k: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProjectDesc {
    /// Hoggar's lines `S + 3I`, reduced with `i -> root_of_unity(4)`.
    Hoggar {
        #[serde(default = "three")]
        q: u64,
    },
    /// A cyclic Gabor fiducial over `Z[alpha_k]`, default the `d = 2` one.
    Table1 {
        #[serde(default = "twenty_four")]
        k: u32,
        q: u64,
        #[serde(default)]
        fiducial: Option<Vec<Vec<i64>>>,
    },
    Gram {
        q: u64,
        gram: CycMatrixJson,
    },
}

fn three() -> u64 {
    3
}
fn twenty_four() -> u32 {
    24
}

/// Reads a descriptor given as inline JSON, a file path, or `kind key=value ...`.
pub fn parse_descriptor<T: for<'de> Deserialize<'de>>(words: &[String]) -> Result<T> {
    let joined = words.join(" ");
    let t = joined.trim();
    if t.starts_with('{') {
        return from_json_str(t);
    }
    if let [single] = words {
        let p = Path::new(single);
        if p.is_file() {
            return read_json(p);
        }
    }
    let (kind, rest) = words
        .split_first()
        .ok_or_else(|| Error::Invalid("empty descriptor".into()))?;
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), Value::String(kind.clone()));
    for kv in rest {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected key=value, got {kv:?}")))?;
        let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        obj.insert(k.to_string(), v);
    }
    Ok(serde_json::from_value(Value::Object(obj))?)
}

struct Ctx {
    default_field: Option<String>,
    seed: u64,
    budget: Option<u64>,
    out: Option<PathBuf>,
    catalog: Option<PathBuf>,
}

impl Ctx {
    fn field(&self, r: &Option<FieldRef>) -> Result<Field> {
        match (r, &self.default_field) {
            (Some(r), _) => r.resolve(),
            (None, Some(s)) => crate::io::parse_field_shorthand(s),
            (None, None) => Err(Error::Invalid("no field given; use --field".into())),
        }
    }

    fn emit<T: Serialize>(&self, v: &T, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(p) => crate::io::write_json(p, v),
            None => {
                writeln!(stdout, "{}", serde_json::to_string_pretty(v)?)?;
                Ok(())
            }
        }
    }

    fn record(&self, fr: &FrameRecord, construction: Value) -> Result<()> {
        if let Some(path) = catalog::catalog_path(self.catalog.as_deref()) {
            if fr.classify().flags.is_etf {
                catalog::append(&path, &CatalogEntry::new(fr, construction))?;
            }
        }
        Ok(())
    }
}

/// Prime-subfield values as integers, everything else as `z^k`.
pub fn pretty(f: &Field, x: Felt) -> String {
    let c = f.coeffs(x);
    if c.iter().skip(1).all(|&v| v == 0) {
        c.first().copied().unwrap_or(0).to_string()
    } else {
        f.format(x)
    }
}

/// One-line verdict such as `(0,1,0)-ETF`.
pub fn verdict(fr: &FrameRecord) -> String {
    let f = fr.field();
    let p = fr.classify();
    let show = |x: Option<Felt>| x.map_or("-".into(), |v| pretty(f, v));
    if p.flags.is_etf {
        format!("({},{},{})-ETF", show(p.a), show(p.b), show(p.c))
    } else if p.flags.is_tight && p.flags.is_equal_norm {
        format!("({},{})-NTF, not equiangular", show(p.a), show(p.c))
    } else if p.flags.is_tight {
        format!("{}-tight frame, not equal-norm", show(p.c))
    } else if p.flags.is_frame {
        "frame, not tight".into()
    } else {
        "not a frame".into()
    }
}

fn construct(desc: &ConstructDesc, ctx: &Ctx) -> Result<FrameRecord> {
    match desc {
        ConstructDesc::Exemplar { name } => exemplar(name),
        ConstructDesc::Zauner { m } => zauner_frame(*m),
        ConstructDesc::Gabor {
            factors,
            field,
            fiducial,
        } => {
            let (g, phi) = match fiducial {
                FiducialSpec::Named(s) if s == "zauner" => {
                    if factors.iter().any(|&d| d != 2) {
                        return Err(Error::Invalid("zauner fiducial needs factors [2, ..., 2]".into()));
                    }
                    let m = factors.len() as u32;
                    let phi = zauner_fiducial(m)?;
                    (GaborGroup::new(factors, &crate::construct::f9())?, phi)
                }
                FiducialSpec::Named(s) => {
                    return Err(Error::Invalid(format!("unknown fiducial {s:?}")))
                }
                FiducialSpec::Entries(es) => {
                    let f = ctx.field(field)?;
                    let phi = es
                        .iter()
                        .map(|e| match e {
                            Entry::Int(n) => Ok(f.from_int(*n)),
                            Entry::Text(s) => f.parse(s),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (GaborGroup::new(factors, &f)?, phi)
                }
            };
            gabor_frame(&g, &phi)
        }
        ConstructDesc::Harmonic { n, set, field } => {
            let f = ctx.field(field)?;
            harmonic_frame(&DiffSet::new(*n, set.clone(), f.characteristic())?, &f)
        }
        ConstructDesc::Sphere { d, field } => sphere_ntf(*d, &ctx.field(field)?),
        ConstructDesc::Naimark { of } => {
            naimark_complement(&construct(of, ctx)?, None)
        }
    }
}

#[derive(Serialize)]
struct CliqueReportJson {
    field: crate::io::FieldSpec,
    d: usize,
    vertices: usize,
    size: usize,
    exhausted: bool,
    budget_exceeded: bool,
    nodes_explored: u64,
    elapsed_ms: u128,
    verified: bool,
    verdict: String,
    clique: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct EigenScanJson {
    eigenvalue: String,
    dimension: usize,
    lines: Option<u128>,
    fiducials: Vec<Vec<String>>,
}

fn search(desc: &SearchDesc, ctx: &Ctx, stdout: &mut dyn Write) -> Result<i32> {
    match desc {
        SearchDesc::Clique { d, field, target } => {
            let f = ctx.field(field)?;
            let space = crate::form::FormSpace::complex_model(&f, *d)?;
            let mut inst = build_clique_instance(&space)?.with_seed(ctx.seed);
            if let Some(t) = target {
                inst = inst.with_target(*t);
            }
            if let Some(nodes) = ctx.budget {
                inst = inst.with_budget(Budget {
                    nodes,
                    ..Budget::default()
                });
            }
            let rep = find_clique(&inst);
            let verified = inst.verify_clique(&rep.best_clique);
            let fr = inst.clique_frame(&rep.best_clique)?;
            let js = CliqueReportJson {
                field: crate::io::FieldSpec::of(&f),
                d: *d,
                vertices: inst.vertices.len(),
                size: rep.certified_size,
                exhausted: rep.exhausted,
                budget_exceeded: rep.budget_exceeded,
                nodes_explored: rep.nodes_explored,
                elapsed_ms: rep.elapsed.as_millis(),
                verified,
                verdict: verdict(&fr),
                clique: rep
                    .best_clique
                    .iter()
                    .map(|&i| inst.vertices[i].iter().map(|&x| f.format(x)).collect())
                    .collect(),
            };
            ctx.emit(&js, stdout)?;
            let reached = target.is_none_or(|t| rep.certified_size >= t);
            Ok(if reached && verified { 0 } else { 1 })
        }
        SearchDesc::Fiducial { d, field } => {
            let f = ctx.field(field)?;
            let g = GaborGroup::new(&[*d], &f)?;
            let z = zauner_matrix(&g)?;
            let mut out = Vec::new();
            let mut any = false;
            for (lambda, space) in z.eigen()? {
                let r = space.cols() as u32;
                let hits = fiducial_scan(&g, &space)?;
                any |= !hits.is_empty();
                let q = f.order() as u128;
                out.push(EigenScanJson {
                    eigenvalue: f.format(lambda),
                    dimension: space.cols(),
                    lines: q.checked_pow(r).map(|t| (t - 1) / (q - 1)),
                    fiducials: hits
                        .iter()
                        .map(|v| v.iter().map(|&x| f.format(x)).collect())
                        .collect(),
                });
            }
            ctx.emit(&out, stdout)?;
            Ok(if any { 0 } else { 1 })
        }
        SearchDesc::DifferenceSets { n, k } => {
            let sets: Vec<Vec<usize>> = modular_difference_sets(*n, *k)?
                .into_iter()
                .map(|s| s.elements().to_vec())
                .collect();
            ctx.emit(&sets, stdout)?;
            Ok(0)
        }
    }
}

fn project(desc: &ProjectDesc) -> Result<FrameRecord> {
    match desc {
        ProjectDesc::Hoggar { q } => {
            let quarter = GaussianRational::new(CycInt::one(4), 4);
            let lines = hoggar_gram().scale(&quarter);
            let g = CycMatrix::from_gauss(&lines).expect("S + 3I is integral");
            project_gram(&g, &cyclotomic_hom(4, &unitary_field(*q)?)?)
        }
        ProjectDesc::Table1 { k, q, fiducial } => {
            let phi = match fiducial {
                None if *k == 24 => sic_fiducial_d2(),
                None => return Err(Error::Invalid("fiducial required for k != 24".into())),
                Some(rows) => rows.iter().map(|c| CycInt::from_i64s(*k, c)).collect(),
            };
            table1_project(&phi, *k, *q)
        }
        ProjectDesc::Gram { q, gram } => {
            let g = gram.to_matrix()?;
            project_gram(&g, &cyclotomic_hom(g.k(), &unitary_field(*q)?)?)
        }
    }
}

fn emit_frame(fr: &FrameRecord, ctx: &Ctx, stdout: &mut dyn Write, construction: Value) -> Result<()> {
    ctx.emit(&FrameJson::of(fr, true), stdout)?;
    ctx.record(fr, construction)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    let ctx = Ctx {
        default_field: cli.field,
        seed: cli.seed,
        budget: cli.budget,
        out: cli.out,
        catalog: cli.catalog,
    };
    match cli.command {
        Command::Verify { path, case } => {
            let fr = read_frame(&path, case.into())?;
            let p = fr.classify();
            let bound = gerzon_bound(fr.d(), fr.space.case());
            writeln!(stdout, "{}x{} {}", fr.d(), fr.n(), verdict(&fr))?;
            let attained = if p.flags.gerzon_equality {
                "attained"
            } else {
                "not attained"
            };
            writeln!(stdout, "gerzon bound {bound}, {attained}")?;
            if p.flags.is_etf {
                writeln!(
                    stdout,
                    "welch identity {}, trace identity {}",
                    p.welch_check(fr.field()),
                    p.trace_check(fr.field())
                )?;
            }
            if let Some(out) = &ctx.out {
                crate::io::write_json(out, &FrameJson::of(&fr, true))?;
            }
            ctx.record(&fr, serde_json::json!({"kind": "file", "path": path}))?;
            Ok(if p.flags.is_etf { 0 } else { 1 })
        }
        Command::Factor { path, case, target } => {
            let g: MatrixJson = read_json(&path)?;
            let g = g.to_mat()?;
            let fr = match (Case::from(case), target) {
                (Case::U, None) => factor_gram_unitary_seeded(&g, ctx.seed)?,
                (Case::U, Some(_)) => {
                    return Err(Error::Invalid("--target applies to Case O only".into()))
                }
                (Case::O, None) => factor_gram_orthogonal_auto(&g)?,
                (Case::O, Some(t)) => {
                    let t: FormSpaceJson = read_json(&t)?;
                    factor_gram_orthogonal(&g, &t.to_space_in(g.field())?)?
                }
            };
            emit_frame(&fr, &ctx, stdout, serde_json::json!({"kind": "factor", "path": path}))?;
            Ok(0)
        }
        Command::Construct { descriptor } => {
            let desc: ConstructDesc = parse_descriptor(&descriptor)?;
            let fr = construct(&desc, &ctx)?;
            emit_frame(&fr, &ctx, stdout, serde_json::to_value(&desc)?)?;
            Ok(0)
        }
        Command::Search { descriptor } => {
            let desc: SearchDesc = parse_descriptor(&descriptor)?;
            search(&desc, &ctx, stdout)
        }
        Command::Project { descriptor } => {
            let desc: ProjectDesc = parse_descriptor(&descriptor)?;
            let fr = project(&desc)?;
            emit_frame(&fr, &ctx, stdout, serde_json::to_value(&desc)?)?;
            Ok(0)
        }
        Command::Bound { d, case } => {
            writeln!(stdout, "{}", gerzon_bound(d, case.into()))?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs one command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
