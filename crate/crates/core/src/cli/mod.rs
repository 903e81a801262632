//! Batch front end: reads a JSON problem file, runs one pipeline and writes
//! one record per disc (or per root in oracle mode) plus a summary.
//!
//! Problem file:
//!
//! ```json
//! {
//!   "coeffs": [["-2", "0"], ["0", "0"], ["1", "0"]],
//!   "discs": [{"cx": "1.5", "cy": "0", "r": "0.2", "isolation": 9}],
//!   "eps_bits": 128,
//!   "mode": "refine"
//! }
//! ```
//!
//! Coefficients are `[re, im]` pairs, lowest degree first, as decimal or
//! hexadecimal-float (`0x1.8p1`) strings. Exit status is 0 on success, 1 on
//! malformed input and 2 when some disc failed.

pub mod oracle;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::driver::{extract_factor, refine_all, refine_root, AllRootsPlan};
use crate::error::Error;
use crate::newton::RefinementRequest;
use crate::numctx::{Complex, PrecisionContext, Real};
use crate::poly::Polynomial;
use crate::powersum::IsolatedDisc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Each disc on its own.
    Refine,
    /// All discs in one batch.
    All,
    /// Monic factor for the roots in each disc.
    Factor,
    /// Every root by the reference solver; discs are ignored.
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Refine => "refine",
            Mode::All => "all",
            Mode::Factor => "factor",
            Mode::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

#[derive(Parser, Debug)]
#[command(name = "polyrefine", version, about = "Refine isolated polynomial roots to a certified precision")]
pub struct Args {
    /// Problem file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides the mode given in the file.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Target error 2^-n; overrides `eps_bits` in the file.
    #[arg(long)]
    pub eps_bits: Option<usize>,
    /// Working precision in bits instead of the automatic schedule.
    #[arg(long)]
    pub precision_bits: Option<usize>,
    /// Write results here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Emit JSON lines instead of plain text.
    #[arg(long)]
    pub json: bool,
}

/// A number given either as a JSON number or as a string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Value(f64),
}

impl Number {
    fn to_real(&self, prec: usize, field: &str) -> Result<Real, InputError> {
        match self {
            Number::Text(s) => Real::parse(s, prec).map_err(|e| InputError::field(field, e)),
            Number::Value(x) if x.is_finite() => Ok(Real::from_f64(*x, prec)),
            Number::Value(x) => Err(InputError(format!("{field}: {x} is not finite"))),
        }
    }

    fn len(&self) -> usize {
        match self {
            Number::Text(s) => s.len(),
            Number::Value(_) => 24,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscSpec {
    pub cx: Number,
    pub cy: Number,
    pub r: Number,
    pub isolation: f64,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub multiplicity: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub coeffs: Vec<[Number; 2]>,
    #[serde(default)]
    pub discs: Vec<DiscSpec>,
    #[serde(default)]
    pub eps_bits: Option<usize>,
    #[serde(default)]
    pub mode: Option<Mode>,
}

/// Malformed input, with the offending line or field in the message.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl InputError {
    fn field(field: &str, e: Error) -> Self {
        InputError(format!("{field}: {e}"))
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A problem ready to run: values rounded to the working precision.
#[derive(Clone, Debug)]
pub struct Problem {
    pub poly: Polynomial,
    pub discs: Vec<IsolatedDisc>,
    pub multiplicities: Vec<Option<usize>>,
    pub ctx: PrecisionContext,
    pub mode: Mode,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text)
            .map_err(|e| InputError(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    /// Parses all numbers, fixes ℓ and λ, and rounds everything to λ bits.
    pub fn resolve(
        &self,
        mode: Option<Mode>,
        eps_bits: Option<usize>,
        precision_bits: Option<usize>,
    ) -> Result<Problem, InputError> {
        let mode = mode.or(self.mode).ok_or_else(|| InputError("mode: missing (refine|all|factor|oracle)".into()))?;
        let ell = eps_bits.or(self.eps_bits).ok_or_else(|| InputError("eps_bits: missing".into()))?;
        if ell < 1 {
            return Err(InputError("eps_bits: must be at least 1".into()));
        }
        // Enough bits to hold every literal exactly before rounding to λ.
        let longest = self
            .coeffs
            .iter()
            .flat_map(|c| c.iter())
            .chain(self.discs.iter().flat_map(|d| [&d.cx, &d.cy, &d.r]))
            .map(Number::len)
            .max()
            .unwrap_or(1);
        let exact = 4 * longest + 64 + precision_bits.unwrap_or(0);

        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, [re, im]) in self.coeffs.iter().enumerate() {
            coeffs.push(Complex::new(
                re.to_real(exact, &format!("coeffs[{i}][0]"))?,
                im.to_real(exact, &format!("coeffs[{i}][1]"))?,
            ));
        }
        let poly = Polynomial::new(coeffs).map_err(|e| InputError::field("coeffs", e))?;
        if poly.degree() < 1 {
            return Err(InputError("coeffs: degree must be at least 1".into()));
        }
        let ctx = match precision_bits {
            Some(lambda) => PrecisionContext::with_lambda(lambda, ell, poly.tau()),
            None => PrecisionContext::new(ell, poly.tau(), poly.degree()),
        }
        .map_err(|e| InputError::field("precision", e))?;
        let lambda = ctx.lambda();

        let mut discs = Vec::with_capacity(self.discs.len());
        let mut multiplicities = Vec::with_capacity(self.discs.len());
        for (i, d) in self.discs.iter().enumerate() {
            let center = Complex::new(
                d.cx.to_real(exact, &format!("discs[{i}].cx"))?.round_to(lambda),
                d.cy.to_real(exact, &format!("discs[{i}].cy"))?.round_to(lambda),
            );
            let radius = d.r.to_real(exact, &format!("discs[{i}].r"))?.round_to(lambda);
            let mut disc = IsolatedDisc::new(center, radius, d.isolation)
                .map_err(|e| InputError::field(&format!("discs[{i}]"), e))?;
            if let Some(c) = d.count {
                disc = disc.with_root_count(c);
            }
            if let Some(m) = d.multiplicity {
                if m == 0 {
                    return Err(InputError(format!("discs[{i}].multiplicity: must be at least 1")));
                }
                disc = disc.with_root_count(m);
            }
            discs.push(disc);
            multiplicities.push(d.multiplicity);
        }
        Ok(Problem { poly: poly.round_to(lambda), discs, multiplicities, ctx, mode })
    }
}

/// Significant decimal digits printed for an `ell`-bit result.
pub fn output_digits(ell: usize) -> usize {
    (ell as f64 * 0.302).ceil() as usize
}

fn complex_strings(z: &Complex, digits: usize) -> [String; 2] {
    [z.re.to_decimal_string(digits), z.im.to_decimal_string(digits)]
}

fn ms_since(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// One output record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Record {
    Root {
        index: usize,
        root: [String; 2],
        err_exp: i64,
        iters: usize,
        q: usize,
        ms: f64,
    },
    Factor {
        index: usize,
        degree: usize,
        coeffs: Vec<[String; 2]>,
        residual_exp: i64,
        q: usize,
        ms: f64,
    },
    OracleRoot {
        index: usize,
        root: [String; 2],
        ms: f64,
    },
    Failure {
        index: usize,
        error: String,
    },
}

impl Record {
    fn is_failure(&self) -> bool {
        matches!(self, Record::Failure { .. })
    }

    fn text(&self) -> String {
        match self {
            Record::Root { index, root, err_exp, iters, q, ms } => format!(
                "#{index}: {} {:+}i  err <= 2^{err_exp}  iters {iters}  q {q}  {ms} ms",
                root[0],
                ImagPart(&root[1])
            ),
            Record::Factor { index, degree, coeffs, residual_exp, q, ms } => {
                let cs: Vec<String> = coeffs.iter().map(|c| format!("({} {:+}i)", c[0], ImagPart(&c[1]))).collect();
                format!("#{index}: degree {degree}  residual 2^{residual_exp}  q {q}  {ms} ms\n  {}", cs.join("\n  "))
            }
            Record::OracleRoot { index, root, ms } => format!("#{index}: {} {:+}i  {ms} ms", root[0], ImagPart(&root[1])),
            Record::Failure { index, error } => format!("#{index}: FAILED: {error}"),
        }
    }
}

struct ImagPart<'a>(&'a str);

impl fmt::Display for ImagPart<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.sign_plus() && !self.0.starts_with('-') {
            write!(f, "+{}", self.0)
        } else {
            f.write_str(self.0)
        }
    }
}

fn failure(index: usize, e: &Error) -> Record {
    Record::Failure { index, error: e.to_string() }
}

fn root_record(index: usize, r: &crate::newton::RefinementResult, digits: usize, ms: f64) -> Record {
    Record::Root {
        index,
        root: complex_strings(&r.root, digits),
        err_exp: r.error_log2.ceil() as i64,
        iters: r.iterations,
        q: r.q_used,
        ms,
    }
}

/// Runs the pipeline selected by `problem.mode`; `Err` only for input-level
/// contract violations.
pub fn execute(problem: &Problem) -> Result<Vec<Record>, InputError> {
    let ctx = &problem.ctx;
    let p = &problem.poly;
    let digits = output_digits(ctx.ell());
    let request = RefinementRequest::bits(ctx.ell()).map_err(|e| InputError::field("eps_bits", e))?;
    if problem.mode != Mode::Oracle && problem.discs.is_empty() {
        return Err(InputError("discs: no discs given".into()));
    }
    let mut out = Vec::new();
    match problem.mode {
        Mode::Refine => {
            for (i, disc) in problem.discs.iter().enumerate() {
                let t = Instant::now();
                let req = match problem.multiplicities[i] {
                    Some(m) => request.with_multiplicity(m).map_err(|e| InputError::field(&format!("discs[{i}]"), e))?,
                    None => request,
                };
                out.push(match refine_root(p, disc, &req, ctx) {
                    Ok(r) => root_record(i, &r, digits, ms_since(t)),
                    Err(e) => failure(i, &e),
                });
            }
        }
        Mode::All => {
            let t = Instant::now();
            let plan = AllRootsPlan::new(p, problem.discs.clone(), request)
                .map_err(|e| InputError::field("discs", e))?;
            let results = refine_all(p, &plan, ctx).map_err(|e| InputError::field("discs", e))?;
            let ms = ms_since(t);
            for (i, r) in results.iter().enumerate() {
                out.push(match r {
                    Ok(r) => root_record(i, r, digits, ms),
                    Err(e) => failure(i, e),
                });
            }
        }
        Mode::Factor => {
            for (i, disc) in problem.discs.iter().enumerate() {
                let t = Instant::now();
                out.push(match extract_factor(p, disc, ctx) {
                    Ok(f) => Record::Factor {
                        index: i,
                        degree: f.degree,
                        coeffs: f.coeffs.iter().map(|c| complex_strings(c, digits)).collect(),
                        residual_exp: f.residual_log2.ceil().max(-1e9) as i64,
                        q: f.q_used,
                        ms: ms_since(t),
                    },
                    Err(e) => failure(i, &e),
                });
            }
        }
        Mode::Oracle => {
            let t = Instant::now();
            match oracle::oracle_roots(p, ctx.lambda()) {
                Ok(roots) => {
                    let ms = ms_since(t);
                    for (i, z) in roots.iter().enumerate() {
                        out.push(Record::OracleRoot { index: i, root: complex_strings(z, digits), ms });
                    }
                }
                Err(e) => out.push(failure(0, &e)),
            }
        }
    }
    Ok(out)
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_args(&args, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn run_args(args: &Args, stdout: &mut dyn Write) -> Result<i32, InputError> {
    let start = Instant::now();
    let text = fs::read_to_string(&args.input)
        .map_err(|e| InputError(format!("{}: {e}", args.input.display())))?;
    let problem = ProblemFile::from_json(&text)?.resolve(args.mode, args.eps_bits, args.precision_bits)?;
    let records = execute(&problem)?;
    let failed = records.iter().filter(|r| r.is_failure()).count();

    let mut buf = Vec::new();
    let summary = json!({
        "summary": {
            "mode": problem.mode.to_string(),
            "degree": problem.poly.degree(),
            "records": records.len(),
            "failed": failed,
            "eps_bits": problem.ctx.ell(),
            "precision_bits": problem.ctx.lambda(),
            "ms": ms_since(start),
        }
    });
    for r in &records {
        if args.json {
            writeln!(buf, "{}", serde_json::to_string(r).expect("record serialises")).expect("in-memory write");
        } else {
            writeln!(buf, "{}", r.text()).expect("in-memory write");
        }
    }
    if args.json {
        writeln!(buf, "{summary}").expect("in-memory write");
    } else {
        let s = &summary["summary"];
        writeln!(
            buf,
            "{} of {} ok  (mode {}, degree {}, {} bits working, {} ms)",
            records.len() - failed,
            records.len(),
            s["mode"].as_str().unwrap_or(""),
            s["degree"],
            s["precision_bits"],
            s["ms"]
        )
        .expect("in-memory write");
    }
    match &args.output {
        Some(path) => fs::write(path, &buf).map_err(|e| InputError(format!("{}: {e}", path.display())))?,
        None => stdout.write_all(&buf).map_err(|e: io::Error| InputError(format!("stdout: {e}")))?,
    }
    Ok(if failed > 0 { 2 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<Problem, InputError> {
        ProblemFile::from_json(text)?.resolve(None, None, None)
    }

    #[test]
    fn parses_problem_file() {
        let p = resolve(
            r#"{"coeffs": [["-2", "0"], ["0x0p0", "0"], [1, 0]],
                "discs": [{"cx": "1.5", "cy": 0, "r": "0.2", "isolation": 9, "count": 1}],
                "eps_bits": 128, "mode": "refine"}"#,
        )
        .unwrap();
        assert_eq!(p.poly.degree(), 2);
        assert_eq!(p.discs.len(), 1);
        assert_eq!(p.discs[0].claimed_root_count, Some(1));
        assert_eq!(p.ctx.ell(), 128);
        assert_eq!(p.mode, Mode::Refine);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let e = resolve(r#"{"coeffs": [["1", "0"], ["abc", "0"]], "eps_bits": 8, "mode": "all"}"#).unwrap_err();
        assert!(e.0.contains("coeffs[1][0]"), "{}", e.0);
        let e = resolve("{\n\"coeffs\": [[\"1\", \"0\"]],\n\"eps_bits\": ,\n}").unwrap_err();
        assert!(e.0.starts_with("line 3"), "{}", e.0);
        let e = resolve(r#"{"coeffs": [["5", "0"]], "eps_bits": 8, "mode": "all"}"#).unwrap_err();
        assert!(e.0.contains("degree"), "{}", e.0);
    }

    #[test]
    fn digit_count() {
        assert_eq!(output_digits(128), 39);
        assert_eq!(output_digits(100), 31);
    }

    #[test]
    fn printed_values_round_trip() {
        let prec = 300;
        let x = Real::from_u64(2, prec).sqrt();
        let digits = output_digits(256);
        let s = x.to_decimal_string(digits);
        let back = Real::parse(&s, prec).unwrap();
        assert_eq!(back.to_decimal_string(digits), s);
    }
}
