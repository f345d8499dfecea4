//! The `hnstrata` command-line tool.
//!
//! Every command reads JSON and writes one line of JSON with sorted keys.
//! Exit status: `0` success, `1` validation or diagnostic failure (details as
//! JSON on standard error), `2` malformed input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::family::{
    check_semicontinuity, level_set, recursive_stratify, stratification_report, FamilyError,
    FamilySpec, SheafFamily,
};
use crate::hntype::{validate_hn_type, HnType, HnTypeError};
use crate::lattice::{
    hn_closed_form, hn_filtration, is_semistable, oracle, LatticeError, LatticeInput,
    SubobjectLattice,
};
use crate::numpoly::{NumPoly, RatPoly, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "hnstrata",
    version,
    about = "Harder-Narasimhan types, filtrations and stratifications"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a type against the three defining conditions.
    ValidateType {
        #[arg(long = "type", visible_alias = "input", value_name = "PATH")]
        ty: PathBuf,
    },
    /// Compare two types: LEQ, GEQ, EQ or INCOMPARABLE.
    CompareTypes {
        #[arg(long = "type", value_name = "PATH", num_args = 1, required = true)]
        types: Vec<PathBuf>,
    },
    /// Polygon vertices, evaluated at an integer.
    Polygon {
        #[arg(long = "type", visible_alias = "input", value_name = "PATH")]
        ty: PathBuf,
        /// Evaluation point; defaults to a bound past which all vertex
        /// polynomials are ordered as they are eventually.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<i64>,
        /// Also write a standalone SVG drawing to PATH.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// HN filtration and type of a lattice or splitting type.
    Hn {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Cross-check by brute-force chain enumeration (and the closed form
        /// for splitting types).
        #[arg(long)]
        oracle: bool,
    },
    /// Stratify a family by HN type and report every check.
    Stratify {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Also compute the stratum of this type by the recursive construction.
        #[arg(long, value_name = "PATH")]
        tau: Option<PathBuf>,
        /// Cross-check every fiber's filtration by brute force.
        #[arg(long)]
        oracle: bool,
    },
    /// Check semicontinuity of the HN type along specializations.
    CheckFamily {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
    /// Apply the quotient shift (f_2 - f_1, ..., f_p - f_1).
    Shift {
        #[arg(long = "type", visible_alias = "input", value_name = "PATH")]
        ty: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit 1, with a JSON diagnostic and optionally a JSON result for stdout.
    Diagnostic {
        detail: Value,
        stdout: Option<Value>,
    },
    /// Exit 2.
    Malformed(String),
}

impl Failure {
    fn diag(detail: Value) -> Self {
        Failure::Diagnostic {
            detail,
            stdout: None,
        }
    }
}

impl From<HnTypeError> for Failure {
    fn from(e: HnTypeError) -> Self {
        let mut detail = json!({ "error": e.code(), "message": e.to_string() });
        if let Some(i) = e.index() {
            detail["index"] = json!(i);
        }
        Failure::diag(detail)
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::diag(json!({ "error": e.code(), "message": e.to_string() }))
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        let mut detail = json!({ "error": e.code(), "message": e.to_string() });
        if let FamilyError::SemicontinuityRequired(v) = &e {
            detail["witness"] = v.to_json();
        }
        Failure::diag(detail)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn read_type(path: &Path) -> Result<HnType, Failure> {
    let raw: Vec<RatPoly> = read_json(path)?;
    let polys = raw
        .into_iter()
        .map(|p| {
            NumPoly::new(p).map_err(|e| {
                Failure::diag(json!({ "error": "NotNumerical", "message": e.to_string() }))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(validate_hn_type(polys)?)
}

fn read_lattice(path: &Path) -> Result<(LatticeInput, SubobjectLattice), Failure> {
    let input: LatticeInput = read_json(path)?;
    let lattice = input.build()?;
    crate::lattice::validate_lattice(&lattice)?;
    Ok((input, lattice))
}

fn read_family(path: &Path) -> Result<SheafFamily, Failure> {
    let spec: FamilySpec = read_json(path)?;
    Ok(spec.build()?)
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(v) => {
            let _ = writeln!(out, "{v}");
            0
        }
        Err(Failure::Diagnostic { detail, stdout }) => {
            if let Some(v) = stdout {
                let _ = writeln!(out, "{v}");
            }
            let _ = writeln!(err, "{detail}");
            1
        }
        Err(Failure::Malformed(msg)) => {
            let _ = writeln!(
                err,
                "{}",
                json!({ "error": "MalformedInput", "message": msg })
            );
            2
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn execute(command: &Command) -> Result<Value, Failure> {
    match command {
        Command::ValidateType { ty } => validate_type_cmd(ty),
        Command::CompareTypes { types } => {
            let [a, b] = types.as_slice() else {
                return Err(Failure::Malformed(format!(
                    "compare-types needs exactly two --type arguments, got {}",
                    types.len()
                )));
            };
            let (a, b) = (read_type(a)?, read_type(b)?);
            Ok(json!({ "relation": a.relation(&b).as_str() }))
        }
        Command::Polygon { ty, at, svg } => polygon_cmd(&read_type(ty)?, *at, svg.as_deref()),
        Command::Hn { input, oracle } => hn_cmd(input, *oracle),
        Command::Stratify { input, tau, oracle } => stratify_cmd(input, tau.as_deref(), *oracle),
        Command::CheckFamily { input } => {
            let family = read_family(input)?;
            match check_semicontinuity(&family)? {
                Ok(()) => Ok(json!({ "semicontinuous": true })),
                Err(v) => Err(Failure::Diagnostic {
                    detail: json!({ "error": "SemicontinuityViolation", "witness": v.to_json() }),
                    stdout: Some(json!({ "semicontinuous": false, "witness": v.to_json() })),
                }),
            }
        }
        Command::Shift { ty } => Ok(json!(read_type(ty)?.quotient_shift()?)),
    }
}

fn validate_type_cmd(path: &Path) -> Result<Value, Failure> {
    match read_type(path) {
        Ok(t) => Ok(json!({
            "valid": true,
            "type": t,
            "length": t.len(),
            "ranks": t.ranks().iter().map(BigInt::to_string).collect::<Vec<_>>(),
        })),
        Err(Failure::Diagnostic { detail, .. }) => {
            let mut shown = detail.clone();
            shown["valid"] = json!(false);
            Err(Failure::Diagnostic {
                detail,
                stdout: Some(shown),
            })
        }
        Err(e) => Err(e),
    }
}

/// Default evaluation point: past every pairwise stabilization bound of the
/// vertex polynomials (including `0`), and at least `0`.
pub fn default_evaluation_point(ty: &HnType) -> BigInt {
    let mut polys = vec![RatPoly::zero()];
    polys.extend(ty.polys().iter().map(|f| f.as_poly().clone()));
    let mut m = BigInt::zero();
    for (i, f) in polys.iter().enumerate() {
        for g in &polys[i + 1..] {
            if let Ok(b) = f.stabilization_bound(g) {
                m = m.max(b);
            }
        }
    }
    m
}

fn polygon_cmd(ty: &HnType, at: Option<i64>, svg: Option<&Path>) -> Result<Value, Failure> {
    let m = at
        .map(BigInt::from)
        .unwrap_or_else(|| default_evaluation_point(ty));
    let poly = ty.polygon();
    let points: Vec<(BigInt, Rational)> = poly
        .vertices()
        .iter()
        .map(|v| (v.a.to_integer(), v.f.evaluate(&m)))
        .collect();
    let vertices: Vec<Value> = poly
        .vertices()
        .iter()
        .zip(&points)
        .map(|(v, (r, value))| json!({ "r": r.to_string(), "f": v.f, "value": value.to_string() }))
        .collect();
    if let Some(path) = svg {
        fs::write(path, polygon_svg(&points, &m))
            .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    }
    Ok(json!({ "at": m.to_string(), "vertices": vertices }))
}

/// Fixed-point decimal rendering of a rational with `places` digits, using
/// integer arithmetic only.
fn decimal(x: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = (x * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let (q, r) = scaled.abs().div_rem(&scale);
    let sign = if scaled.is_negative() { "-" } else { "" };
    format!(
        "{sign}{q}.{:0>width$}",
        r.to_string(),
        width = places as usize
    )
}

/// A standalone SVG drawing of the polygon through the given `(r, value)`
/// points. The y axis is flipped so larger values are drawn higher.
pub fn polygon_svg(points: &[(BigInt, Rational)], at: &BigInt) -> String {
    let xs: Vec<Rational> = points
        .iter()
        .map(|(r, _)| Rational::from_integer(r.clone()))
        .collect();
    let ys: Vec<Rational> = points.iter().map(|(_, v)| -v.clone()).collect();
    let lo = |v: &[Rational]| v.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = |v: &[Rational]| v.iter().max().cloned().unwrap_or_else(Rational::zero);
    let (x0, x1, y0, y1) = (lo(&xs), hi(&xs), lo(&ys), hi(&ys));
    let one = Rational::from_integer(1.into());
    let w = (&x1 - &x0).max(one.clone());
    let h = (&y1 - &y0).max(one);
    // normalise into a 400 x 300 box
    let sx = Rational::from_integer(400.into()) / &w;
    let sy = Rational::from_integer(300.into()) / &h;
    let path: Vec<String> = xs
        .iter()
        .zip(&ys)
        .enumerate()
        .map(|(i, (x, y))| {
            let px = decimal(&((x - &x0) * &sx + Rational::from_integer(20.into())), 3);
            let py = decimal(&((y - &y0) * &sy + Rational::from_integer(20.into())), 3);
            format!("{}{px} {py}", if i == 0 { "M" } else { " L" })
        })
        .collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"340\" viewBox=\"0 0 440 340\">\n",
            "  <title>HN polygon evaluated at m = {}</title>\n",
            "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
            "</svg>\n"
        ),
        at,
        path.join("")
    )
}

fn hn_cmd(path: &Path, with_oracle: bool) -> Result<Value, Failure> {
    let (input, lattice) = read_lattice(path)?;
    let filtration = hn_filtration(&lattice)?;
    let ty = filtration.hn_type()?;
    let mut out = json!({
        "filtration": filtration,
        "type": ty,
        "length": filtration.len(),
        "semistable": is_semistable(&lattice)?,
    });
    if with_oracle {
        let chains = oracle::admissible_chains(&lattice);
        let names: Vec<Vec<&str>> = chains
            .iter()
            .map(|c| c.iter().map(|&x| lattice.name(x)).collect())
            .collect();
        let unique = names.len() == 1 && names[0] == filtration.steps;
        let mut report = json!({ "chains": names.len(), "unique_and_equal": unique });
        let mut ok = unique;
        if let LatticeInput::Splitting(s) = &input {
            let closed = hn_closed_form(s);
            let agrees = closed == filtration;
            report["closed_form_agrees"] = json!(agrees);
            ok &= agrees;
        }
        out["oracle"] = report;
        if !ok {
            return Err(Failure::Diagnostic {
                detail: json!({ "error": "OracleMismatch", "oracle": out["oracle"].clone() }),
                stdout: Some(out),
            });
        }
    }
    Ok(out)
}

fn stratify_cmd(path: &Path, tau: Option<&Path>, with_oracle: bool) -> Result<Value, Failure> {
    let family = read_family(path)?;
    let mut report = stratification_report(&family)?;
    let space = family.space();
    let mut ok = report["checks"]
        .as_object()
        .is_some_and(|c| c.values().all(|v| v == &Value::Bool(true)));
    if let Some(tau_path) = tau {
        let tau = read_type(tau_path)?;
        let recursive = recursive_stratify(&family, &tau)?;
        let direct = level_set(&family, &tau)?;
        report["tau"] = json!({
            "type": tau,
            "recursive": space.names_of(&recursive),
            "direct": space.names_of(&direct),
        });
    }
    if with_oracle {
        let mut agrees = true;
        for p in space.points() {
            let fiber = family.fiber(p);
            let chains = oracle::admissible_chains(fiber);
            let steps = hn_filtration(fiber)?.steps;
            agrees &= chains.len() == 1
                && chains[0]
                    .iter()
                    .map(|&x| fiber.name(x))
                    .eq(steps.iter().map(String::as_str));
        }
        report["oracle"] = json!({ "fibers_checked": space.len(), "agrees": agrees });
        ok &= agrees;
    }
    if ok {
        Ok(report)
    } else {
        Err(Failure::Diagnostic {
            detail: json!({ "error": "CheckFailed", "checks": report["checks"].clone() }),
            stdout: Some(report),
        })
    }
}
