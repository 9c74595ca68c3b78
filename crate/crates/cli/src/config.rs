//! Run configuration: flags, an optional TOML file and defaults, resolved
//! into one record that is also written to the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use exwkb::potential::{parse_polynomial, Polynomial};
use exwkb::stokes::GraphOptions;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{module, CliError, Result};

pub const OUT_ENV: &str = "EXWKB_OUT";
const DEFAULT_OUT: &str = "exwkb-out";

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML run configuration; its values win over flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Potential V(x) as a polynomial expression.
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    /// File holding V(x): an expression, or one coefficient per line (ascending).
    #[arg(long)]
    pub potential_file: Option<PathBuf>,
    /// Energy as "re,im" or "re".
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    /// Large parameter λ, repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Tolerance override "name=value" (root, line, capture).
    #[arg(long = "tol")]
    pub tolerances: Vec<String>,
    /// Output directory (default: $EXWKB_OUT, else ./exwkb-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated: json, csv, svg.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Num(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    potential: Option<String>,
    potential_file: Option<PathBuf>,
    energy: Option<Scalar>,
    lambda: Option<OneOrMany<Scalar>>,
    tolerances: Option<BTreeMap<String, f64>>,
    output: Option<PathBuf>,
    format: Option<OneOrMany<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    pub root: f64,
    pub line: f64,
    pub capture: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let g = GraphOptions::default();
        Tolerances { root: g.root_tol, line: g.line_tol, capture: g.capture_factor }
    }
}

impl Tolerances {
    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Config(format!("tolerance {key} must be positive, got {value}")));
        }
        match key {
            "root" => self.root = value,
            "line" => self.line = value,
            "capture" => self.capture = value,
            _ => return Err(CliError::Config(format!("unknown tolerance '{key}' (expected root, line or capture)"))),
        }
        Ok(())
    }

    pub fn graph_options(&self) -> GraphOptions {
        GraphOptions { root_tol: self.root, line_tol: self.line, capture_factor: self.capture, ..GraphOptions::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Source text of the potential.
    pub potential_source: Option<String>,
    pub potential: Option<Polynomial>,
    #[serde(with = "exwkb::cjson::one")]
    pub energy: C,
    #[serde(with = "exwkb::cjson::vec")]
    pub lambda: Vec<C>,
    pub tolerances: Tolerances,
    pub output: PathBuf,
    pub format: Vec<Format>,
}

impl RunConfig {
    pub fn potential(&self) -> Result<&Polynomial> {
        self.potential.as_ref().ok_or_else(|| CliError::Config("a potential is required (--potential or --potential-file)".into()))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }
}

/// Parses "re,im" or "re".
pub fn parse_complex(s: &str) -> Result<C> {
    let bad = || CliError::Config(format!("cannot read '{s}' as a complex number \"re,im\""));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn scalar(s: &Scalar) -> Result<C> {
    match s {
        Scalar::Num(v) => Ok(C::new(*v, 0.0)),
        Scalar::Text(t) => parse_complex(t),
    }
}

fn parse_formats(items: &[String]) -> Result<Vec<Format>> {
    let mut out = vec![];
    for item in items {
        for f in item.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            out.push(match f {
                "json" => Format::Json,
                "csv" => Format::Csv,
                "svg" => Format::Svg,
                _ => return Err(CliError::Config(format!("unknown format '{f}' (expected json, csv or svg)"))),
            });
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Config("no output format selected".into()));
    }
    Ok(out)
}

/// Reads a potential file: one coefficient per line, ascending powers, or
/// else a single expression.
fn read_potential_file(path: &Path) -> Result<(String, Polynomial)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty()).collect();
    if let Ok(coeffs) = lines.iter().map(|l| parse_complex(l)).collect::<Result<Vec<_>>>() {
        if !coeffs.is_empty() {
            return Ok((text, Polynomial::new(coeffs)));
        }
    }
    let expr = lines.join(" ");
    let p = parse_polynomial(&expr).map_err(module("potential"))?;
    Ok((expr, p))
}

pub fn resolve(common: &Common, default_lambda: &[f64]) -> Result<RunConfig> {
    let file: FileConfig = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let expr = file.potential.clone().or_else(|| if file.potential_file.is_some() { None } else { common.potential.clone() });
    let pfile = file.potential_file.clone().or_else(|| if file.potential.is_some() { None } else { common.potential_file.clone() });
    let (potential_source, potential) = match (expr, pfile) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either a potential expression or a potential file, not both".into())),
        (Some(e), None) => {
            let p = parse_polynomial(&e).map_err(module("potential"))?;
            (Some(e), Some(p))
        }
        (None, Some(f)) => {
            let (src, p) = read_potential_file(&f)?;
            (Some(src), Some(p))
        }
        (None, None) => (None, None),
    };

    let energy = match (&file.energy, &common.energy) {
        (Some(s), _) => scalar(s)?,
        (None, Some(s)) => parse_complex(s)?,
        (None, None) => C::new(0.0, 0.0),
    };

    let lambda = match file.lambda {
        Some(l) => l.into_vec().iter().map(scalar).collect::<Result<Vec<_>>>()?,
        None if !common.lambda.is_empty() => common.lambda.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?,
        None => default_lambda.iter().map(|&l| C::new(l, 0.0)).collect(),
    };
    if lambda.iter().any(|l| l.norm() == 0.0) {
        return Err(CliError::Config("λ must be nonzero".into()));
    }

    let mut tolerances = Tolerances::default();
    for t in &common.tolerances {
        let (k, v) = t.split_once('=').ok_or_else(|| CliError::Config(format!("tolerance '{t}' is not name=value")))?;
        let v = v.trim().parse::<f64>().map_err(|_| CliError::Config(format!("tolerance '{t}' has no numeric value")))?;
        tolerances.set(k.trim(), v)?;
    }
    for (k, v) in file.tolerances.iter().flatten() {
        tolerances.set(k, *v)?;
    }

    let output = file
        .output
        .or_else(|| common.out.clone())
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    let format = match file.format {
        Some(f) => parse_formats(&f.into_vec())?,
        None => parse_formats(&[common.format.clone().unwrap_or_else(|| "json,svg".into())])?,
    };

    Ok(RunConfig { potential_source, potential, energy, lambda, tolerances, output, format })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_pairs() {
        assert_eq!(parse_complex("1.5").unwrap(), C::new(1.5, 0.0));
        assert_eq!(parse_complex(" -1, 2e-3 ").unwrap(), C::new(-1.0, 2e-3));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("one").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn file_wins_over_flags() {
        let dir = std::env::temp_dir().join(format!("exwkb-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "energy = \"0.5,0\"\nlambda = [5, \"10,1\"]\n[tolerances]\nroot = 1e-9\n").unwrap();
        let common = Common {
            config: Some(path),
            potential: Some("x^2/2".into()),
            energy: Some("2".into()),
            lambda: vec!["3".into()],
            ..Common::default()
        };
        let cfg = resolve(&common, &[1.0]).unwrap();
        assert_eq!(cfg.energy, C::new(0.5, 0.0));
        assert_eq!(cfg.lambda, vec![C::new(5.0, 0.0), C::new(10.0, 1.0)]);
        assert_eq!(cfg.tolerances.root, 1e-9);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("potentail = \"x\"").is_err());
        let mut t = Tolerances::default();
        assert!(t.set("roots", 1e-3).is_err());
        assert!(t.set("root", -1.0).is_err());
    }

    #[test]
    fn coefficient_file() {
        let dir = std::env::temp_dir().join(format!("exwkb-pot-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("v.txt");
        std::fs::write(&path, "# harmonic\n0\n0\n0.5\n").unwrap();
        let (_, p) = read_potential_file(&path).unwrap();
        assert_eq!(p, Polynomial::real(&[0.0, 0.0, 0.5]));
        std::fs::write(&path, "x^4/4 -\n x^2/2\n").unwrap();
        let (_, p) = read_potential_file(&path).unwrap();
        assert_eq!(p, Polynomial::real(&[0.0, 0.0, -0.5, 0.0, 0.25]));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
