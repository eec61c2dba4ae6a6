use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CliError, Family, EXIT_SCHEMA, EXIT_WRITE};
use crate::families::{AuxProfiles, Component, Regime, SolutionTuple};
use crate::func::Fn1D;
use crate::geometry::OpenInterval;
use crate::verify::ResidualReport;

pub const ARTIFACT_SCHEMA: &str = "pexider-kit/artifact/1";

/// Column order of exported samples.
pub const CSV_HEADER: [&str; 8] = ["x", "F", "f1", "f2", "g1", "g2", "u", "G"];

/// A built solution with its parameters, residuals and provenance. Contains
/// no timestamps, so identical runs produce identical files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Artifact {
    pub schema: String,
    pub family: Family,
    pub regime: Regime,
    pub bound: f64,
    pub residual: ResidualReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<[ResidualReport; 2]>,
    pub provenance: Provenance,
    /// The family parameters exactly as used.
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profiles: Option<AuxProfiles>,
    pub tuple: SolutionTuple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub n: usize,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: &str, n: usize, margin: f64, seed: Option<u64>) -> Self {
        Self {
            tool: "pexider-kit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            n,
            margin,
            seed,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(EXIT_WRITE, format!("cannot serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::new(EXIT_WRITE, format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(EXIT_WRITE, format!("cannot write to stdout: {e}"))),
    }
}

pub fn read_artifact(path: &Path) -> Result<Artifact, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_SCHEMA, format!("cannot read artifact {}: {e}", path.display())))?;
    read_artifact_str(&text).map_err(|e| CliError::new(e.code, format!("{}: {}", path.display(), e.message)))
}

pub fn read_artifact_str(text: &str) -> Result<Artifact, CliError> {
    let a: Artifact =
        serde_json::from_str(text).map_err(|e| CliError::new(EXIT_SCHEMA, format!("invalid artifact: {e}")))?;
    if a.schema != ARTIFACT_SCHEMA {
        return Err(CliError::new(EXIT_SCHEMA, format!("unsupported artifact schema {:?}", a.schema)));
    }
    Ok(a)
}

/// C's `%.17g`: 17 significant digits, trailing zeros removed, exponent
/// form outside `1e-4 ≤ |v| < 1e17`.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{:.*}", (16 - exp) as usize, v))
    }
}

/// Samples `(x, F, f1, f2, g1, g2)` on the `n`-point margin-shrunk grid of
/// `I`, and `(u, G)` on `n` evenly spaced points spanning the diagonal
/// values `g1(x) + g2(x)` at the first and last `x`.
pub fn export_csv(t: &SolutionTuple, n: usize, margin: f64) -> Result<String, CliError> {
    if n < 2 {
        return Err(CliError::new(EXIT_SCHEMA, format!("export needs n ≥ 2, got {n}")));
    }
    let i = t.interval();
    if !(margin >= 0.0 && 2.0 * margin < i.len()) {
        return Err(CliError::new(EXIT_SCHEMA, format!("margin {margin} does not fit inside {i}")));
    }
    let xs = i.grid(n, margin);
    let diag = |x: f64| t.g1().value_or_limit(x) + t.g2().value_or_limit(x);
    let (u0, u1) = (diag(xs[0]), diag(xs[n - 1]));
    let (ulo, uhi) = (u0.min(u1), u0.max(u1));
    let mut out = CSV_HEADER.join(",");
    out.push('\n');
    for (j, &x) in xs.iter().enumerate() {
        let u = if j == 0 {
            ulo
        } else if j == n - 1 {
            uhi
        } else {
            ulo + (uhi - ulo) * j as f64 / (n - 1) as f64
        };
        let mut row: Vec<String> = vec![fmt_g17(x)];
        for c in &Component::ALL[..5] {
            row.push(fmt_g17(t.component(*c).value_or_limit(x)));
        }
        row.push(fmt_g17(u));
        row.push(fmt_g17(t.big_g().value_or_limit(u)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Rebuilds a tuple from exported samples by monotone cubic interpolation.
pub fn import_csv(text: &str, regime: Regime) -> Result<SolutionTuple, CliError> {
    let bad = |m: String| CliError::new(EXIT_SCHEMA, m);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty CSV".into()))?.split(',').map(str::trim).collect();
    if header != CSV_HEADER {
        return Err(bad(format!("CSV header must be {}", CSV_HEADER.join(","))));
    }
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); CSV_HEADER.len()];
    for (ln, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_HEADER.len() {
            return Err(bad(format!("row {} has {} fields", ln + 2, fields.len())));
        }
        for (c, f) in fields.iter().enumerate() {
            let v: f64 = f.trim().parse().map_err(|_| bad(format!("row {}: cannot parse {f:?}", ln + 2)))?;
            cols[c].push(v);
        }
    }
    let n = cols[0].len();
    if n < 2 {
        return Err(bad("CSV needs at least two rows".into()));
    }
    let num = |e: crate::Error| CliError::from_lib(e);
    let domain = OpenInterval::new(cols[0][0], cols[0][n - 1]).map_err(num)?;
    let tab = |c: usize| -> Result<Arc<Fn1D>, CliError> {
        Ok(Arc::new(Fn1D::tabulated(domain, cols[0].clone(), cols[c].clone()).map_err(num)?))
    };
    let sumset = OpenInterval::new(cols[6][0], cols[6][n - 1]).map_err(num)?;
    let big_g = Arc::new(Fn1D::tabulated(sumset, cols[6].clone(), cols[7].clone()).map_err(num)?);
    SolutionTuple::new(domain, tab(1)?, tab(2)?, tab(3)?, tab(4)?, tab(5)?, big_g, regime).map_err(num)
}
