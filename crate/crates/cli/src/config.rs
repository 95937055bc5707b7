//! Validated run configuration shared by all subcommands.

use std::path::PathBuf;
use std::str::FromStr;

use serde_json::{json, Value};
use wmds_core::finite_field::GaloisField;
use wmds_core::{FFPoly, RootSystem, TwistParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Symbolic,
    Numeric { q: u32 },
}

impl ScalarMode {
    pub fn from_q(q: Option<u32>) -> Self {
        q.map_or(ScalarMode::Symbolic, |q| ScalarMode::Numeric { q })
    }

    pub fn to_json(self) -> Value {
        match self {
            ScalarMode::Symbolic => json!("symbolic"),
            ScalarMode::Numeric { q } => json!({ "numeric": { "q": q } }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where a result goes and in which format.
#[derive(Debug, Clone)]
pub struct OutputTarget {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl OutputTarget {
    /// An explicit format wins; otherwise a `.csv` extension selects CSV.
    pub fn new(path: Option<PathBuf>, format: Option<Format>) -> Self {
        let inferred = match path.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        };
        OutputTarget {
            path,
            format: format.unwrap_or(inferred),
        }
    }
}

/// Limits enforced before any computation starts.
#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    pub max_weyl_order: u64,
    pub max_series_degree: u32,
}

/// A fully checked request for one subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: Option<RootSystem>,
    pub n: u32,
    pub ell: Option<TwistParams>,
    pub mode: ScalarMode,
    /// Echoed into reports; `None` for deterministic commands.
    pub seed: Option<u64>,
    pub budgets: Budgets,
    pub output: OutputTarget,
}

impl RunConfig {
    pub fn system(&self) -> Result<&RootSystem, String> {
        self.system.as_ref().ok_or_else(|| "this command needs --type".to_string())
    }

    pub fn q(&self) -> Result<u32, String> {
        match self.mode {
            ScalarMode::Numeric { q } => Ok(q),
            ScalarMode::Symbolic => Err("this command needs --q".to_string()),
        }
    }

    pub fn ell(&self) -> TwistParams {
        match (&self.ell, &self.system) {
            (Some(ell), _) => ell.clone(),
            (None, Some(rs)) => TwistParams::zero(rs.rank()),
            (None, None) => TwistParams::new(Vec::new()),
        }
    }

    pub fn metadata(&self) -> Value {
        json!({
            "tool": "wmds",
            "version": env!("CARGO_PKG_VERSION"),
            "type": self.system.as_ref().map(|rs| rs.code().to_string()),
            "n": self.n,
            "ell": self.ell().ell,
            "mode": self.mode.to_json(),
            "seed": self.seed,
        })
    }
}

/// Builds the root system and checks the Weyl group against the budget.
pub fn load_system(code: &str, n: u32, budgets: &Budgets) -> Result<RootSystem, String> {
    let rs = RootSystem::from_code(code, n).map_err(|e| e.to_string())?;
    let order = rs.weyl_order();
    if order > budgets.max_weyl_order {
        return Err(format!(
            "Weyl group of {code} has order {order}, above the budget of {} (raise WMDS_MAX_WEYL_ORDER)",
            budgets.max_weyl_order
        ));
    }
    Ok(rs)
}

pub fn check_ell(ell: &[u32], rs: &RootSystem) -> Result<TwistParams, String> {
    if ell.len() != rs.rank() {
        return Err(format!(
            "--ell has {} entries but {} has rank {}",
            ell.len(),
            rs.code(),
            rs.rank()
        ));
    }
    Ok(TwistParams::new(ell.to_vec()))
}

/// Comma-separated nonnegative integers, e.g. `1,0`.
pub fn parse_ell(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|part| {
            u32::from_str(part.trim()).map_err(|_| format!("`{part}` is not a nonnegative integer"))
        })
        .collect()
}

/// A polynomial in `t` such as `t^2 + 3t + 1`, `2t`, or `1`.
pub fn parse_poly(s: &str, field: &GaloisField) -> Result<FFPoly, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty polynomial".into());
    }
    let q = field.order();
    let mut coeffs: Vec<u32> = Vec::new();
    for term in compact.split('+') {
        let (coeff, power) = match term.find('t') {
            None => (term, 0usize),
            Some(at) => {
                let power = match &term[at + 1..] {
                    "" => 1,
                    rest => rest
                        .strip_prefix('^')
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| format!("bad term `{term}` in `{s}`"))?,
                };
                (&term[..at], power)
            }
        };
        let c: u32 = match coeff.trim_end_matches('*') {
            "" => 1,
            digits => digits.parse().map_err(|_| format!("bad coefficient `{digits}` in `{s}`"))?,
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = field.add(coeffs[power], c % q);
    }
    Ok(FFPoly::from_coeffs(coeffs))
}

/// Comma-separated monic polynomials, one per simple root.
pub fn parse_twist(s: &str, rank: usize, field: &GaloisField) -> Result<Vec<FFPoly>, String> {
    let polys = s
        .split(',')
        .map(|part| parse_poly(part, field))
        .collect::<Result<Vec<_>, _>>()?;
    if polys.len() != rank {
        return Err(format!("--twist has {} entries, expected {rank}", polys.len()));
    }
    if let Some(bad) = polys.iter().find(|p| !p.is_monic()) {
        return Err(format!("twist entry `{bad}` is not monic"));
    }
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_parse() {
        let f = GaloisField::new(5).unwrap();
        assert_eq!(parse_poly("1", &f).unwrap(), FFPoly::one());
        assert_eq!(parse_poly("t", &f).unwrap(), FFPoly::t());
        assert_eq!(parse_poly("t^2 + 3t + 1", &f).unwrap(), FFPoly::from_coeffs(vec![1, 3, 1]));
        assert_eq!(parse_poly("t+7", &f).unwrap(), FFPoly::from_coeffs(vec![2, 1]));
        assert!(parse_poly("t^", &f).is_err());
        assert!(parse_poly("x", &f).is_err());
        assert!(parse_twist("2t+1,1", 2, &f).is_err());
        assert!(parse_twist("1", 2, &f).is_err());
    }

    #[test]
    fn ell_and_budget() {
        assert_eq!(parse_ell("1, 0").unwrap(), vec![1, 0]);
        assert!(parse_ell("1,-1").is_err());
        let tight = Budgets {
            max_weyl_order: 10,
            max_series_degree: 6,
        };
        assert!(load_system("A2", 2, &tight).is_ok());
        assert!(load_system("G2", 2, &tight).unwrap_err().contains("budget"));
        assert!(load_system("H2", 2, &tight).is_err());
    }

    #[test]
    fn output_format_inference() {
        assert_eq!(OutputTarget::new(Some("z.csv".into()), None).format, Format::Csv);
        assert_eq!(OutputTarget::new(Some("z.json".into()), None).format, Format::Json);
        assert_eq!(OutputTarget::new(Some("z.csv".into()), Some(Format::Json)).format, Format::Json);
    }
}
