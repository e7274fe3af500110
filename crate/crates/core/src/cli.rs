//! The `graydeform` command-line tool: validation, cohomology, deformation
//! classification, the brute-force oracle comparison and model export.
//! Every command prints a single JSON document; exit codes are 0 success,
//! 1 validation (or oracle) failure, 2 parse failure, 3 resource cap.

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::defcomplex::{assemble_complex, AssembledComplex, ComplexSelection, DefComplex, Layer, DEFAULT_MAX_DEGREE};
use crate::deformations::{
    brute_force_classes, check_structural, ClassifyMode, DeformationSpaces, FirstOrderDeformation, DEFAULT_ENUMERATION_BOUND,
};
use crate::error::{Error, Result};
use crate::exactlinalg::{Field, SparseMatrix, SparseVec};
use crate::examples::{deloop, group_model, trivial_model, GroupModelSpec, MonoidalCategoryData};
use crate::gray::validate_gray;
use crate::pfcomplex::{cohomology_at, Cohomology, PfComplex};
use crate::schema::{gray_document, load_structure, two_category_document, Structure, SCHEMA_VERSION};
use crate::twocat::validate_two_category;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "graydeform", version, about = "Deformation cohomology of finite Gray semigroups over exact fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the 2-category (and Gray semigroup) axioms of a structure file.
    Validate(CommonArgs),
    /// Cohomology of a deformation complex in one or more degrees.
    Cohomology {
        #[command(flatten)]
        common: CommonArgs,
        /// Complex: unit, tens_ass, ass, tens, pent_restricted, pent_general, or pf:<n> for ⊗(n).
        #[arg(long, value_parser = parse_complex)]
        complex: ComplexArg,
        /// Degree `q`, range `a..b` (inclusive) or list `a,b,c`.
        #[arg(long, value_parser = parse_degrees)]
        degree: Degrees,
        /// Cap on the degrees the complex may build (default 3).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Include normalized cohomology representatives.
        #[arg(long)]
        representatives: bool,
    },
    /// Representatives of the first-order deformation classes.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_parser = parse_mode, default_value = "unit")]
        mode: ClassifyMode,
    },
    /// Compare linear-algebra class counts with exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_parser = parse_mode, default_value = "unit")]
        mode: ClassifyMode,
        /// Largest number of candidates (or witnesses) to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        enum_bound: u64,
        /// Test hook: corrupt the incoming coboundary before counting.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Write a generated model in the structure file format.
    Export {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: Field,
        /// Order of the cyclic group G of objects (group model).
        #[arg(long, default_value_t = 2)]
        g: usize,
        /// Order of the cyclic group H of 1-cells (group model).
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Bicharacter of the group model.
        #[arg(long, value_enum, default_value = "sign")]
        twist: TwistArg,
        /// Length of the meet chain.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Structure file (JSON, schema graydeform/v1).
    pub input: PathBuf,
    /// `q` for the rationals or `p=<prime>`; overrides the file's field.
    #[arg(long, value_parser = parse_field)]
    pub field: Option<Field>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexArg {
    Gray(ComplexSelection),
    /// The purely pseudofunctorial complex of `⊗(n)`.
    Pf(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Trivial,
    Group,
    MeetChain,
    DualNumbers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TwistArg {
    Untwisted,
    Sign,
}

pub fn parse_field(s: &str) -> std::result::Result<Field, String> {
    match s.trim() {
        "q" | "Q" => Ok(Field::Rational),
        t => {
            let p = t.strip_prefix("p=").ok_or_else(|| format!("expected 'q' or 'p=<prime>', got '{t}'"))?;
            let p: u64 = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<ComplexArg, String> {
    if let Some(n) = s.strip_prefix("pf:") {
        let n: usize = n.parse().map_err(|_| format!("bad arity in '{s}'"))?;
        return if n >= 1 { Ok(ComplexArg::Pf(n)) } else { Err("arity must be at least 1".into()) };
    }
    s.parse::<ComplexSelection>().map(ComplexArg::Gray).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<ClassifyMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Degrees requested on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees(pub Vec<usize>);

fn parse_degrees(s: &str) -> std::result::Result<Degrees, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree '{t}'"));
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => out.extend(num(a)?..=num(b.trim_start_matches('='))?),
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("no degrees given".into());
    }
    Ok(Degrees(out))
}

/// Resolved settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub field: Option<Field>,
    pub complex: Option<ComplexArg>,
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub enum_bound: u64,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn new(common: &CommonArgs) -> Self {
        RunConfig {
            input: common.input.clone(),
            field: common.field,
            complex: None,
            degrees: Vec::new(),
            max_degree: DEFAULT_MAX_DEGREE,
            enum_bound: DEFAULT_ENUMERATION_BOUND,
            workers: common.workers,
            out: common.out.clone(),
        }
    }

    fn check(&self) -> Result<()> {
        if let Some(&q) = self.degrees.iter().max() {
            if q > self.max_degree {
                return Err(Error::ResourceCap(format!("degree {q} exceeds the degree cap {}", self.max_degree)));
            }
        }
        Ok(())
    }

    fn load(&self) -> Result<Structure> {
        let text = fs::read_to_string(&self.input)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", self.input.display())))?;
        load_structure(&text, self.field)
    }

    fn load_gray(&self) -> Result<Structure> {
        let s = self.load()?;
        if s.gray().is_none() {
            return Err(Error::Precondition("this command needs a Gray semigroup (the file has no 'gray' section)".into()));
        }
        let report = validate_gray(s.gray().expect("checked"))?;
        if !report.is_valid() {
            return Err(Error::Structural(format!("input fails validation: {}", report.failed_axioms().join(", "))));
        }
        Ok(s)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.unwrap_or(0))
            .build()
            .map_err(|e| Error::Precondition(format!("worker pool: {e}")))
    }
}

/// Exit code for an error, per the stable contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidField(_) => EXIT_PARSE,
        Error::ResourceCap(_) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidField(_) => "invalid_field",
        Error::Parse(_) => "parse",
        Error::Structural(_) => "structural",
        Error::Dimension(_) => "dimension",
        Error::FieldMismatch(..) => "field_mismatch",
        Error::NotComposable(_) => "not_composable",
        Error::NotInvertible(_) => "not_invertible",
        Error::Padding(_) => "padding",
        Error::Precondition(_) => "precondition",
        Error::ResourceCap(_) => "resource_cap",
        Error::Invariant(_) => "invariant",
    }
}

fn header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn with(mut m: serde_json::Map<String, Value>, body: Value) -> Value {
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn field_json(f: Field) -> Value {
    serde_json::to_value(f).expect("fields serialize")
}

fn sparse_json(v: &SparseVec) -> Value {
    Value::Array(v.entries.iter().map(|(i, x)| json!([i, x.to_text()])).collect())
}

fn layer_vector_json(layer: &Layer, v: &SparseVec) -> Value {
    Value::Array(
        layer
            .summands
            .iter()
            .filter_map(|s| {
                let part = layer.restrict(v, s.kind)?;
                (!part.is_zero()).then(|| json!({"summand": s.kind.to_string(), "entries": sparse_json(&part)}))
            })
            .collect(),
    )
}

fn cohomology_json(c: &Cohomology) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("degree".into(), json!(c.degree));
    m.insert("dimSpace".into(), json!(c.dim_space));
    m.insert("dimKernel".into(), json!(c.dim_kernel));
    m.insert("rankIncoming".into(), json!(c.rank_prev));
    m.insert("betti".into(), json!(c.betti));
    m
}

fn class_count(field: Field, betti: usize) -> Value {
    match field.order() {
        _ if betti == 0 => json!("1"),
        Some(p) => json!(num_bigint::BigUint::from(p).pow(betti as u32).to_string()),
        None => Value::Null,
    }
}

fn cmd_validate(cfg: &RunConfig) -> Result<(i32, Value)> {
    let s = cfg.load()?;
    let (kind, report) = match &s {
        Structure::TwoCategory(c) => ("two_category", validate_two_category(c)),
        Structure::Gray(g) => ("gray_semigroup", validate_gray(g)?),
    };
    let code = if report.is_valid() { EXIT_OK } else { EXIT_INVALID };
    Ok((
        code,
        json!({
            "kind": kind,
            "field": field_json(s.field()),
            "valid": report.is_valid(),
            "failedAxioms": report.failed_axioms(),
            "violations": report.violations,
        }),
    ))
}

fn degree_range(degrees: &[usize]) -> RangeInclusive<usize> {
    let lo = degrees.iter().copied().min().unwrap_or(0);
    let hi = degrees.iter().copied().max().unwrap_or(0);
    lo..=hi
}

fn cmd_cohomology(cfg: &RunConfig, with_reps: bool) -> Result<(i32, Value)> {
    cfg.check()?;
    let s = cfg.load_gray()?;
    let gray = s.gray().expect("checked").clone();
    let dc = DefComplex::with_max_degree(gray.clone(), cfg.max_degree);
    let pool = cfg.pool()?;
    let complex = cfg.complex.ok_or_else(|| Error::Precondition("no complex selected".into()))?;
    let mut degrees = cfg.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    pool.install(|| match complex {
        ComplexArg::Gray(sel) => {
            let range = degree_range(&degrees);
            let lo = (*range.start()).max(sel.min_degree());
            let cx = assemble_complex(&dc, sel, lo.saturating_sub(1).max(sel.min_degree())..=*range.end())?;
            let mut out = Vec::new();
            for &q in &degrees {
                if q < sel.min_degree() {
                    return Err(Error::Precondition(format!("{} starts in degree {}", sel.title(), sel.min_degree())));
                }
                let c = cx.cohomology(q, with_reps)?;
                let layer = cx.layer(q)?;
                let mut m = cohomology_json(&c);
                m.insert(
                    "summands".into(),
                    Value::Array(layer.summands.iter().map(|s| json!({"summand": s.kind.to_string(), "freeDim": s.free_dim})).collect()),
                );
                if with_reps {
                    m.insert("representatives".into(), Value::Array(c.representatives.iter().map(|v| layer_vector_json(layer, v)).collect()));
                }
                out.push(Value::Object(m));
            }
            Ok((EXIT_OK, json!({"complex": sel.key(), "title": sel.title(), "field": field_json(dc.gray().field()), "degrees": out})))
        }
        ComplexArg::Pf(n) => {
            let t = dc.tensor(n)?;
            let cx = PfComplex::with_max_degree(&*t, cfg.max_degree)?;
            let mut out = Vec::new();
            for &q in &degrees {
                let c = cx.cohomology(q, with_reps)?;
                let mut m = cohomology_json(&c);
                if with_reps {
                    m.insert("representatives".into(), Value::Array(c.representatives.iter().map(sparse_json).collect()));
                }
                out.push(Value::Object(m));
            }
            Ok((
                EXIT_OK,
                json!({
                    "complex": format!("pf:{n}"),
                    "title": format!("purely pseudofunctorial deformation complex of ⊗({n})"),
                    "field": field_json(dc.gray().field()),
                    "degrees": out,
                }),
            ))
        }
    })
}

/// Class representatives of `mode`: the cohomology basis of the
/// classifying complex read back as deformations, each re-verified
/// against the structural conditions. Also returns the Betti number.
pub fn classify_representatives(dc: &DefComplex, sp: &DeformationSpaces, mode: ClassifyMode) -> Result<(usize, Vec<FirstOrderDeformation>)> {
    let q = mode.degree();
    let cx = assemble_complex(dc, mode.selection(), q - 1..=q)?;
    let c = cx.cohomology(q, true)?;
    let layer = cx.layer(q)?;
    let reps: Vec<FirstOrderDeformation> =
        c.representatives.iter().map(|v| FirstOrderDeformation::from_partial_layer(sp, layer, v)).collect();
    for (i, d) in reps.iter().enumerate() {
        let report = check_structural(sp, d)?;
        if !report.is_valid() {
            return Err(Error::Invariant(format!("representative {i} fails {}", report.failed_axioms().join(", "))));
        }
    }
    Ok((c.betti, reps))
}

fn cmd_classify(cfg: &RunConfig, mode: ClassifyMode) -> Result<(i32, Value)> {
    let s = cfg.load_gray()?;
    let dc = DefComplex::new(s.gray().expect("checked").clone());
    let sp = DeformationSpaces::new(&dc)?;
    let (betti, reps) = cfg.pool()?.install(|| classify_representatives(&dc, &sp, mode))?;
    let mut classes = vec![Value::Null];
    classes.extend(reps.iter().map(|d| sp.deformation_json(d)));
    Ok((
        EXIT_OK,
        json!({
            "mode": mode.key(),
            "title": mode.selection().title(),
            "field": field_json(dc.gray().field()),
            "degree": mode.degree(),
            "betti": betti,
            "classCount": class_count(dc.gray().field(), betti),
            "classes": classes,
        }),
    ))
}

/// Betti number of the classifying complex of `mode`; with `corrupt`, the
/// incoming coboundary is replaced by zero first (fault injection).
pub fn linear_algebra_betti(dc: &DefComplex, mode: ClassifyMode, corrupt: bool) -> Result<usize> {
    let q = mode.degree();
    let cx: AssembledComplex = assemble_complex(dc, mode.selection(), q - 1..=q)?;
    if !corrupt {
        return Ok(cx.cohomology(q, false)?.betti);
    }
    let layer = cx.layer(q)?;
    let basis = layer.basis.as_ref().ok_or_else(|| Error::Invariant("missing basis".into()))?;
    let zeroed = SparseMatrix::zero(basis.field, basis.rows, cx.layer(q - 1)?.dim());
    Ok(cohomology_at(q, basis, Some(&zeroed), &cx.coboundary(q)?, false)?.betti)
}

fn cmd_oracle(cfg: &RunConfig, mode: ClassifyMode, fault: bool) -> Result<(i32, Value)> {
    let s = cfg.load_gray()?;
    let field = s.field();
    let p = field.order().ok_or_else(|| Error::Precondition("the oracle enumerates over a prime field; pass --field p=<prime>".into()))?;
    let dc = DefComplex::new(s.gray().expect("checked").clone());
    let sp = DeformationSpaces::new(&dc)?;
    let betti = linear_algebra_betti(&dc, mode, fault)?;
    let report = brute_force_classes(&sp, mode, cfg.enum_bound, cfg.workers)?;
    let expected = (p as u128).checked_pow(betti as u32);
    let agree = expected == Some(report.classes as u128);
    Ok((
        if agree { EXIT_OK } else { EXIT_INVALID },
        json!({
            "mode": mode.key(),
            "field": field_json(field),
            "linearAlgebra": {"betti": betti, "classes": expected.map(|x| x.to_string())},
            "bruteForce": {
                "candidateDim": report.candidate_dim,
                "witnessDim": report.witness_dim,
                "candidates": report.candidates,
                "structural": report.structural,
                "equivalencesChecked": report.equivalences_checked,
                "classes": report.classes.to_string(),
            },
            "verdict": if agree { "AGREE" } else { "DISAGREE" },
        }),
    ))
}

fn cmd_export(model: ModelArg, field: Field, g: usize, h: usize, twist: TwistArg, k: usize) -> Result<Value> {
    let doc = match model {
        ModelArg::Trivial => gray_document(&trivial_model(field)),
        ModelArg::Group => {
            let spec = match twist {
                TwistArg::Untwisted => GroupModelSpec::untwisted(field, g, h),
                TwistArg::Sign if h == 2 => GroupModelSpec::sign(field, g),
                TwistArg::Sign => return Err(Error::Precondition("the sign bicharacter needs --h 2".into())),
            };
            gray_document(&group_model(&spec)?)
        }
        ModelArg::MeetChain => two_category_document(&deloop(&MonoidalCategoryData::meet_chain(field, k))?),
        ModelArg::DualNumbers => two_category_document(&deloop(&MonoidalCategoryData::graded_dual_numbers(field))?),
    };
    serde_json::to_value(doc).map_err(|e| Error::Invariant(e.to_string()))
}

/// Runs a parsed command line; returns the exit code and the JSON report.
pub fn run(cli: Cli) -> (i32, String, Option<PathBuf>) {
    let (name, out, result) = match cli.command {
        Command::Validate(common) => {
            let cfg = RunConfig::new(&common);
            ("validate", cfg.out.clone(), cmd_validate(&cfg))
        }
        Command::Cohomology { common, complex, degree, max_degree, representatives } => {
            let mut cfg = RunConfig::new(&common);
            cfg.complex = Some(complex);
            cfg.degrees = degree.0;
            if let Some(m) = max_degree {
                cfg.max_degree = m;
            }
            ("cohomology", cfg.out.clone(), cmd_cohomology(&cfg, representatives))
        }
        Command::Classify { common, mode } => {
            let cfg = RunConfig::new(&common);
            ("classify", cfg.out.clone(), cmd_classify(&cfg, mode))
        }
        Command::Oracle { common, mode, enum_bound, inject_fault } => {
            let mut cfg = RunConfig::new(&common);
            cfg.enum_bound = enum_bound;
            ("oracle", cfg.out.clone(), cmd_oracle(&cfg, mode, inject_fault))
        }
        Command::Export { model, field, g, h, twist, k, out } => {
            let r = cmd_export(model, field, g, h, twist, k);
            return match r {
                Ok(doc) => (EXIT_OK, serde_json::to_string_pretty(&doc).expect("json") + "\n", out),
                Err(e) => (exit_code(&e), error_report("export", &e), None),
            };
        }
    };
    match result {
        Ok((code, body)) => (code, serde_json::to_string_pretty(&with(header(name), body)).expect("json") + "\n", out),
        Err(e) => (exit_code(&e), error_report(name, &e), None),
    }
}

fn error_report(command: &str, e: &Error) -> String {
    let v = with(header(command), json!({"error": {"kind": error_kind(e), "message": e.to_string()}}));
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

/// Entry point of the binary: parses `args`, runs, writes the report and
/// returns the process exit code. Usage errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (code, text, out) = run(cli);
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_flags_parse() {
        assert_eq!(parse_field("q").unwrap(), Field::Rational);
        assert_eq!(parse_field("p=5").unwrap(), Field::prime(5).unwrap());
        assert!(parse_field("p=4").is_err());
        assert!(parse_field("5").is_err());
    }

    #[test]
    fn degree_lists_and_ranges_parse() {
        assert_eq!(parse_degrees("2").unwrap().0, vec![2]);
        assert_eq!(parse_degrees("1..3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_degrees("0,2").unwrap().0, vec![0, 2]);
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn complexes_parse_with_pf_arity() {
        assert_eq!(parse_complex("unit").unwrap(), ComplexArg::Gray(ComplexSelection::Unit));
        assert_eq!(parse_complex("pf:2").unwrap(), ComplexArg::Pf(2));
        assert!(parse_complex("pf:0").is_err());
        assert!(parse_complex("nope").is_err());
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_PARSE);
        assert_eq!(exit_code(&Error::ResourceCap("x".into())), EXIT_CAP);
        assert_eq!(exit_code(&Error::Structural("x".into())), EXIT_INVALID);
    }
}
