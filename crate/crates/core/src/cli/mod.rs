//! The `a4lift` command line.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 usage or parse
//! error, 3 precision exhausted.

pub mod certificate;
pub mod parse;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::artin_schreier::{break_mod6_check, classify, to_standard_form, AsError, GaloisType, StandardForm};
use crate::char2::{Char2Error, Gf, Gf2nField, TruncatedSeries, DEFAULT_FIELD_DEGREE, DEFAULT_SERIES_PRECISION};
use crate::deformation::{default_mu, verify_deformation, DeformError, DeformationParams, DeformationResult};
use crate::lifter::{base_lift_nu1, base_lift_nu5, verify_lift, LiftCertificate, LiftDatum, LiftError};
use crate::padic::{
    PadicConfig, PadicError, PadicRing, DEFAULT_PADIC_PRECISION, DEFAULT_RAM_INDEX, DEFAULT_RESIDUE_DEGREE,
};
use certificate::{
    series_text, ChainCertificate, ClassifyRecord, ConfigRecord, DeformationRecord, InputRecord, LiftRecord,
    StandardFormRecord, VerdictRecord, SCOPE,
};
use parse::{padic_polynomial_json, parse_padic_polynomial, parse_representative, parse_series, ParseError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Check,
    Usage,
    Precision,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Check => EXIT_CHECK_FAILED,
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Precision => EXIT_PRECISION,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Check,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<Char2Error> for CliError {
    fn from(e: Char2Error) -> Self {
        let kind = match e {
            Char2Error::PrecisionExhausted(_) => ErrorKind::Precision,
            Char2Error::UnsupportedFieldDegree(_) | Char2Error::BitsOutOfRange { .. } => ErrorKind::Usage,
            _ => ErrorKind::Check,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<AsError> for CliError {
    fn from(e: AsError) -> Self {
        match e {
            AsError::PrecisionExhausted(_) => CliError {
                kind: ErrorKind::Precision,
                message: e.to_string(),
            },
            AsError::Char2(c) => c.into(),
            other => CliError::check(other.to_string()),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::PrecisionExhausted(_) => CliError {
                kind: ErrorKind::Precision,
                message: e.to_string(),
            },
            DeformError::InvalidMu(_) => CliError::usage(e.to_string()),
            DeformError::Char2(c) => c.into(),
            other => CliError::check(other.to_string()),
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::PrecisionExhausted(_) | LiftError::IndeterminateAtPrecision(_) => CliError {
                kind: ErrorKind::Precision,
                message: e.to_string(),
            },
            LiftError::RamificationIndexIncompatible { .. } => CliError::usage(e.to_string()),
            LiftError::ArtinSchreier(a) => a.into(),
            other => CliError::check(other.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::InvalidConfig(_) | PadicError::MalformedElement(_) => CliError::usage(e.to_string()),
            PadicError::PrecisionExhausted(_) | PadicError::IndeterminateAtPrecision(_) => CliError {
                kind: ErrorKind::Precision,
                message: e.to_string(),
            },
            PadicError::Char2(c) => c.into(),
            other => CliError::check(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "a4lift", version, about = "Classify, deform and lift local A4-extensions in characteristic 2")]
pub struct Cli {
    #[command(flatten)]
    pub options: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOptions {
    /// n: coefficients of representatives live in GF(2^n)
    #[arg(long, global = true, default_value_t = DEFAULT_FIELD_DEGREE)]
    pub field_degree: u32,
    /// m: residue field GF(2^m) of the p-adic ring (pipeline: defaults to n)
    #[arg(long, global = true)]
    pub residue_degree: Option<u32>,
    /// P: absolute w-adic precision of mu
    #[arg(long, global = true, default_value_t = DEFAULT_SERIES_PRECISION)]
    pub series_precision: i64,
    /// N: p-adic elements are known modulo 2^N
    #[arg(long, global = true, default_value_t = DEFAULT_PADIC_PRECISION)]
    pub padic_precision: u32,
    /// e: ramification index, with pi^e = 2
    #[arg(long, global = true, default_value_t = DEFAULT_RAM_INDEX)]
    pub ram_index: u32,
    /// Deformation parameter as sparse terms `exp:coeff, ...` (default `2:1`)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Standard form, break, class dimension and Galois group
    Classify {
        /// Representative such as `t^-5 + g^3*t^-1`; `-` or omitted reads stdin
        representative: Option<String>,
    },
    /// Reduce a representative to its standard form
    StandardForm { representative: Option<String> },
    /// Deform a break-nu class (nu > 6) and audit the generic fiber
    Deform { representative: Option<String> },
    /// Build and verify the explicit lift for break 1 or 5 over GF(2^m)
    LiftBase {
        representative: Option<String>,
        /// Write F.json, H.json and A.json into this directory
        #[arg(long)]
        write_dir: Option<PathBuf>,
    },
    /// Verify a candidate lift read from polynomial files
    VerifyLift {
        #[arg(long = "f", value_name = "F.json")]
        f: PathBuf,
        #[arg(long = "h", value_name = "H.json")]
        h: PathBuf,
        #[arg(long = "a", value_name = "A.json")]
        a: PathBuf,
        #[arg(long)]
        nu: u32,
    },
    /// Deform down to break 1 or 5, then lift, with a chain certificate
    Pipeline { representative: Option<String> },
}

/// Settings shared by all commands, validated.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub field: &'static Gf2nField,
    pub residue_degree: u32,
    pub series_precision: i64,
    pub padic: PadicConfig,
    pub mu: TruncatedSeries,
}

impl PipelineConfig {
    /// `residue_degree` falls back to `default_residue` when not given.
    pub fn from_options(o: &GlobalOptions, default_residue: u32) -> Result<Self, CliError> {
        let field = Gf2nField::get(o.field_degree)?;
        if o.series_precision <= 2 {
            return Err(CliError::usage(format!(
                "series precision {} is too small to hold mu",
                o.series_precision
            )));
        }
        if o.padic_precision < 4 {
            return Err(CliError::usage(format!(
                "p-adic precision {} is below the minimum 4",
                o.padic_precision
            )));
        }
        let residue_degree = o.residue_degree.unwrap_or(default_residue);
        Gf2nField::get(residue_degree)?;
        let mu = match &o.mu {
            Some(text) => parse_series(text, field, o.series_precision)?,
            None => default_mu(field, o.series_precision),
        };
        Ok(PipelineConfig {
            field,
            residue_degree,
            series_precision: o.series_precision,
            padic: PadicConfig {
                residue_degree,
                precision: o.padic_precision,
                ram_index: o.ram_index,
            },
            mu,
        })
    }

    pub fn record(&self) -> ConfigRecord {
        ConfigRecord {
            field_degree: self.field.degree().to_string(),
            residue_degree: self.residue_degree.to_string(),
            series_precision: self.series_precision.to_string(),
            padic_precision: self.padic.precision.to_string(),
            ram_index: self.padic.ram_index.to_string(),
            mu: series_text(&self.mu),
        }
    }
}

pub fn classify_record(text: &str, field: &'static Gf2nField) -> Result<ClassifyRecord, CliError> {
    let rep = parse_representative(text, field)?;
    let c = classify(&rep)?;
    let a4 = c.galois_type == GaloisType::A4;
    let break_mod_6 = if a4 {
        break_mod6_check(&c.standard_form)?;
        Some((c.break_() % 6).to_string())
    } else {
        None
    };
    Ok(ClassifyRecord {
        input: InputRecord::new(text, &c),
        a4_degree_criterion: a4,
        break_mod_6,
    })
}

pub fn standard_form_record(text: &str, field: &'static Gf2nField) -> Result<StandardFormRecord, CliError> {
    let sf = to_standard_form(&parse_representative(text, field)?)?;
    Ok(StandardFormRecord {
        representative: text.to_string(),
        standard_form: sf.to_string(),
        brk: sf.break_().to_string(),
    })
}

fn a4_source(text: &str, field: &'static Gf2nField) -> Result<(InputRecord, StandardForm<Gf>), CliError> {
    let rep = parse_representative(text, field)?;
    let c = classify(&rep)?;
    if c.galois_type != GaloisType::A4 {
        return Err(CliError::check(format!(
            "{} is {}, not A4",
            c.standard_form, c.galois_type
        )));
    }
    Ok((InputRecord::new(text, &c), c.standard_form))
}

pub fn deform_source(
    source: &StandardForm<Gf>,
    mu: &TruncatedSeries,
) -> Result<(DeformationResult, DeformationRecord), CliError> {
    let params = DeformationParams::new(source.clone(), mu.clone())?;
    let result = verify_deformation(&params)?;
    let record = DeformationRecord::new(&result);
    Ok((result, record))
}

pub fn deform_record(text: &str, cfg: &PipelineConfig) -> Result<DeformationRecord, CliError> {
    let (_, source) = a4_source(text, cfg.field)?;
    Ok(deform_source(&source, &cfg.mu)?.1)
}

/// The explicit lift for a break-1 or break-5 standard form over the
/// residue field of `ring`.
pub fn base_lift(
    source: &StandardForm<Gf>,
    ring: &Arc<PadicRing>,
) -> Result<(LiftDatum, LiftCertificate), CliError> {
    let coeff = |d: i64| source.coeff(d).copied().unwrap_or(ring.residue_field().zero());
    let datum = match source.break_() {
        1 => base_lift_nu1(ring, coeff(1))?,
        5 => base_lift_nu5(ring, coeff(1), coeff(5), None)?,
        nu => {
            return Err(CliError::check(format!(
                "explicit lifts exist for breaks 1 and 5, not {nu}"
            )))
        }
    };
    let cert = verify_lift(&datum)?;
    Ok((datum, cert))
}

fn stage_error(
    config: ConfigRecord,
    input: Option<InputRecord>,
    chain: Vec<DeformationRecord>,
    stage: &str,
    e: &CliError,
) -> (ChainCertificate, ErrorKind) {
    (
        ChainCertificate {
            config,
            input,
            chain,
            base_lift: None,
            verdict: VerdictRecord {
                pass: false,
                failing_stage: Some(stage.to_string()),
                error: Some(e.message.clone()),
                scope: SCOPE.to_string(),
            },
        },
        e.kind,
    )
}

/// Runs the full chain. Failures inside a stage are recorded in the
/// certificate; the error kind is returned alongside for the exit code.
pub fn pipeline_certificate(text: &str, cfg: &PipelineConfig) -> (ChainCertificate, Option<ErrorKind>) {
    let config = cfg.record();
    let (input, mut source) = match a4_source(text, cfg.field) {
        Ok(x) => x,
        Err(e) => {
            let input = parse_representative(text, cfg.field)
                .ok()
                .and_then(|rep| classify(&rep).ok())
                .map(|c| InputRecord::new(text, &c));
            let (cert, kind) = stage_error(config, input, Vec::new(), "classify", &e);
            return (cert, Some(kind));
        }
    };
    let mut chain = Vec::new();
    while source.break_() > 5 {
        let stage = format!("deform break {}", source.break_());
        match deform_source(&source, &cfg.mu) {
            Ok((result, record)) => {
                let ok = record.pass;
                chain.push(record);
                if !ok {
                    let e = CliError::check("deformation audit failed");
                    let (cert, kind) = stage_error(config, Some(input), chain, &stage, &e);
                    return (cert, Some(kind));
                }
                source = result.next_source;
            }
            Err(e) => {
                let (cert, kind) = stage_error(config, Some(input), chain, &stage, &e);
                return (cert, Some(kind));
            }
        }
    }
    let stage = format!("base lift break {}", source.break_());
    let lifted = PadicRing::new(cfg.padic)
        .map_err(CliError::from)
        .and_then(|ring| base_lift(&source, &ring));
    match lifted {
        Ok((datum, cert)) => {
            let record = LiftRecord::new(&datum, &cert);
            let pass = record.pass;
            let failing_stage = (!pass).then(|| stage.clone());
            let error = (!pass).then(|| format!("failed checks: {}", cert.failed_checks().join(", ")));
            (
                ChainCertificate {
                    config,
                    input: Some(input),
                    chain,
                    base_lift: Some(record),
                    verdict: VerdictRecord {
                        pass,
                        failing_stage,
                        error,
                        scope: SCOPE.to_string(),
                    },
                },
                (!pass).then_some(ErrorKind::Check),
            )
        }
        Err(e) => {
            let (cert, kind) = stage_error(config, Some(input), chain, &stage, &e);
            (cert, Some(kind))
        }
    }
}

fn read_input(arg: &Option<String>) -> Result<String, CliError> {
    match arg.as_deref() {
        Some(s) if s != "-" => Ok(s.to_string()),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::usage(format!("reading stdin: {e}")))?;
            Ok(s.trim().to_string())
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize")
}

fn text_deformation(out: &mut String, r: &DeformationRecord) {
    let _ = writeln!(out, "deformation of break {} (mu = {})", r.nu, r.mu);
    let _ = writeln!(out, "  a~ = {}", r.a_tilde);
    let _ = writeln!(out, "  a~ mod w = {}", r.reduction_mod_w);
    for b in &r.branches {
        let _ = write!(
            out,
            "  place ({}): pole order {}, break {}, conjugate breaks {}, inertia {}",
            b.place,
            b.pole_order,
            b.brk,
            b.conjugate_breaks.join("/"),
            b.inertia
        );
        if let Some(c) = &b.leading_datum {
            let _ = write!(out, ", c = {c}");
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(
        out,
        "  different: generic {}, special {}",
        r.different_generic, r.different_special
    );
    let _ = writeln!(out, "  generic representative at (t): {}", r.generic_rep_at_t);
    let _ = writeln!(out, "  next source: {}", r.next_source);
    for c in &r.checks {
        let _ = writeln!(out, "  check {}: {}", c.name, verdict(c.pass));
    }
}

fn text_lift(out: &mut String, r: &LiftRecord) {
    let _ = writeln!(out, "lift for {} (break {})", r.target, r.nu);
    let _ = writeln!(
        out,
        "  p-adic ring: m = {}, N = {}, e = {}",
        r.padic.residue_degree, r.padic.padic_precision, r.padic.ram_index
    );
    let _ = writeln!(out, "  F = {}", r.f);
    let _ = writeln!(out, "  H = {}", r.h);
    let _ = writeln!(out, "  A = {}", r.a);
    let _ = writeln!(out, "  v(F coefficients) = {}", r.f_valuations.join(", "));
    let _ = writeln!(out, "  residual = {}", r.residual);
    let _ = writeln!(out, "  residual min valuation = {}", r.residual_min_valuation);
    let _ = writeln!(out, "  gcd degree = {} (expected {})", r.gcd_degree, r.expected_gcd_degree);
    let _ = writeln!(out, "  discriminant valuation = {}", r.discriminant_valuation);
    let _ = writeln!(
        out,
        "  (Phi - H^2)/4 mod m reduces to {}",
        r.reduced_form.as_deref().unwrap_or("(not divisible by 4)")
    );
    for c in &r.checks {
        let _ = writeln!(out, "  check {}: {}", c.name, verdict(c.pass));
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn text_chain(c: &ChainCertificate) -> String {
    let mut out = String::new();
    if let Some(i) = &c.input {
        let _ = writeln!(
            out,
            "input {}: standard form {}, break {}, d = {}, {}",
            i.representative, i.standard_form, i.brk, i.dimension, i.galois_type
        );
    }
    let breaks: Vec<String> = c.breaks().iter().map(u32::to_string).collect();
    let _ = writeln!(out, "chain: {}", breaks.join(" -> "));
    for d in &c.chain {
        text_deformation(&mut out, d);
    }
    if let Some(l) = &c.base_lift {
        text_lift(&mut out, l);
    }
    let _ = write!(out, "verdict: {} ({})", verdict(c.verdict.pass), c.verdict.scope);
    if let Some(s) = &c.verdict.failing_stage {
        let _ = write!(out, "\nfailing stage: {s}");
    }
    if let Some(e) = &c.verdict.error {
        let _ = write!(out, "\nerror: {e}");
    }
    out.push('\n');
    out
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let o = &cli.options;
    match &cli.command {
        Command::Classify { representative } => {
            let cfg = PipelineConfig::from_options(o, DEFAULT_RESIDUE_DEGREE)?;
            let r = classify_record(&read_input(representative)?, cfg.field)?;
            let text = if o.json {
                to_json(&r)
            } else {
                let mut s = format!(
                    "standard form: {}\nbreak: {}\nd: {}\nGalois group: {}",
                    r.input.standard_form, r.input.brk, r.input.dimension, r.input.galois_type
                );
                if let Some(m) = &r.break_mod_6 {
                    let _ = write!(s, "\nbreak mod 6: {m}");
                }
                s
            };
            Ok((text, EXIT_PASS))
        }
        Command::StandardForm { representative } => {
            let cfg = PipelineConfig::from_options(o, DEFAULT_RESIDUE_DEGREE)?;
            let r = standard_form_record(&read_input(representative)?, cfg.field)?;
            let text = if o.json {
                to_json(&r)
            } else {
                format!("{} (break {})", r.standard_form, r.brk)
            };
            Ok((text, EXIT_PASS))
        }
        Command::Deform { representative } => {
            let cfg = PipelineConfig::from_options(o, DEFAULT_RESIDUE_DEGREE)?;
            let r = deform_record(&read_input(representative)?, &cfg)?;
            let code = if r.pass { EXIT_PASS } else { EXIT_CHECK_FAILED };
            let text = if o.json {
                to_json(&r)
            } else {
                let mut s = String::new();
                text_deformation(&mut s, &r);
                s.trim_end().to_string()
            };
            Ok((text, code))
        }
        Command::LiftBase {
            representative,
            write_dir,
        } => {
            let cfg = PipelineConfig::from_options(o, DEFAULT_RESIDUE_DEGREE)?;
            let ring = PadicRing::new(cfg.padic)?;
            let (_, source) = a4_source(&read_input(representative)?, ring.residue_field())?;
            let (datum, cert) = base_lift(&source, &ring)?;
            if let Some(dir) = write_dir {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
                for (name, p) in [("F.json", &datum.f), ("H.json", &datum.h), ("A.json", &datum.a)] {
                    let path = dir.join(name);
                    std::fs::write(&path, padic_polynomial_json(p).to_string() + "\n")
                        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                }
            }
            lift_output(o.json, &datum, &cert)
        }
        Command::VerifyLift { f, h, a, nu } => {
            let cfg = PipelineConfig::from_options(o, DEFAULT_RESIDUE_DEGREE)?;
            let ring = PadicRing::new(cfg.padic)?;
            let f = parse_padic_polynomial(&read_file(f)?, &ring)?;
            let h = parse_padic_polynomial(&read_file(h)?, &ring)?;
            let a = parse_padic_polynomial(&read_file(a)?, &ring)?;
            let datum = LiftDatum::new(f, h, a, *nu)?;
            let cert = verify_lift(&datum)?;
            lift_output(o.json, &datum, &cert)
        }
        Command::Pipeline { representative } => {
            if o.residue_degree.is_some_and(|m| m != o.field_degree) {
                return Err(CliError::usage(format!(
                    "the pipeline lifts over the residue field GF(2^{}); --residue-degree must equal --field-degree",
                    o.field_degree
                )));
            }
            let cfg = PipelineConfig::from_options(o, o.field_degree)?;
            let (cert, kind) = pipeline_certificate(&read_input(representative)?, &cfg);
            let text = if o.json { cert.to_json() } else { text_chain(&cert).trim_end().to_string() };
            Ok((text, kind.map_or(EXIT_PASS, ErrorKind::exit_code)))
        }
    }
}

fn lift_output(json: bool, datum: &LiftDatum, cert: &LiftCertificate) -> Result<(String, i32), CliError> {
    let r = LiftRecord::new(datum, cert);
    let code = if r.pass { EXIT_PASS } else { EXIT_CHECK_FAILED };
    let text = if json {
        to_json(&r)
    } else {
        let mut s = String::new();
        text_lift(&mut s, &r);
        if let Err(e) = cert.ensure_reduction() {
            let _ = writeln!(s, "  {e}");
        }
        let _ = write!(s, "verdict: {}", verdict(r.pass));
        s
    };
    Ok((text, code))
}

/// Parses `args` (including the program name), runs the command, writes to
/// `out`/`err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.kind.exit_code()
        }
    }
}
