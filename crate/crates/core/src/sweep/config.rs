//! TOML sweep configuration.
//!
//! ```toml
//! model = "ZN"              # or a list: ["SU2", "ZN"]
//! N = [2, 3, 4]             # ℤ_N only
//! k = 0                     # ℤ_N only; combinations with k >= N are skipped
//! L = 4
//! g2_grid = { log10_min = -1.5, log10_max = 1.5, points = 25 }
//! # or explicit values: g2 = [0.1, 1.0, 10.0]
//! epsilon = [1.0, 0.0, 0.0] # D₃ only
//! boundary = "periodic"     # optional; per-model default otherwise
//! seed = 7
//! ```

use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::hilbert::Boundary;
use crate::models::{ModelConfig, ModelKind};
use crate::{Error, Result};

/// `10^lo … 10^hi` in `n` log-spaced points.
pub fn logspace(log10_min: f64, log10_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![10f64.powf(log10_min)],
        _ => (0..n)
            .map(|i| 10f64.powf(log10_min + (log10_max - log10_min) * i as f64 / (n - 1) as f64))
            .collect(),
    }
}

/// The default coupling grid, 25 points over `[10^-1.5, 10^1.5]`.
pub fn default_grid() -> Vec<f64> {
    logspace(-1.5, 1.5, 25)
}

pub const DEFAULT_SEED: u64 = 0x5eed;

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

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    log10_min: f64,
    log10_max: f64,
    points: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Spanned<OneOrMany<String>>,
    #[serde(rename = "N")]
    n: Option<Spanned<OneOrMany<usize>>>,
    k: Option<Spanned<OneOrMany<usize>>>,
    #[serde(rename = "L")]
    l: Spanned<OneOrMany<usize>>,
    g2: Option<Spanned<OneOrMany<f64>>>,
    g2_grid: Option<Spanned<GridSpec>>,
    epsilon: Option<Spanned<[f64; 3]>>,
    boundary: Option<Spanned<String>>,
    seed: Option<u64>,
}

/// A parsed sweep: the Cartesian product of its lists, `g2` innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub models: Vec<ModelKind>,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub g2: Vec<f64>,
    pub epsilon: [f64; 3],
    pub boundary: Option<Boundary>,
    pub seed: u64,
}

fn line_of(src: &str, span: Range<usize>) -> usize {
    src[..span.start.min(src.len())].matches('\n').count() + 1
}

fn field_error(src: &str, span: Range<usize>, field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {}, field `{field}`: {msg}", line_of(src, span)))
}

impl SweepConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;

        let span = raw.model.span();
        let models = raw
            .model
            .into_inner()
            .into_vec()
            .iter()
            .map(|m| m.parse::<ModelKind>().map_err(|e| field_error(src, span.clone(), "model", e)))
            .collect::<Result<Vec<_>>>()?;
        if models.is_empty() {
            return Err(field_error(src, span, "model", "empty list"));
        }

        let list = |v: Option<Spanned<OneOrMany<usize>>>, name: &str, default: usize| -> Result<Vec<usize>> {
            match v {
                None => Ok(vec![default]),
                Some(s) => {
                    let span = s.span();
                    let v = s.into_inner().into_vec();
                    if v.is_empty() {
                        Err(field_error(src, span, name, "empty list"))
                    } else {
                        Ok(v)
                    }
                }
            }
        };
        let n = list(raw.n, "N", 2)?;
        let k = list(raw.k, "k", 0)?;
        let l = list(Some(raw.l), "L", 0)?;

        let g2 = match (raw.g2, raw.g2_grid) {
            (Some(_), Some(grid)) => {
                return Err(field_error(src, grid.span(), "g2_grid", "give either `g2` or `g2_grid`, not both"))
            }
            (Some(g), None) => {
                let span = g.span();
                let v = g.into_inner().into_vec();
                if v.is_empty() {
                    return Err(field_error(src, span, "g2", "empty list"));
                }
                if let Some(bad) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                    return Err(field_error(src, span, "g2", format!("values must be positive and finite, got {bad}")));
                }
                v
            }
            (None, Some(grid)) => {
                let span = grid.span();
                let grid = grid.into_inner();
                if grid.points == 0 || !grid.log10_min.is_finite() || !grid.log10_max.is_finite() {
                    return Err(field_error(src, span, "g2_grid", "needs finite bounds and at least one point"));
                }
                logspace(grid.log10_min, grid.log10_max, grid.points)
            }
            (None, None) => default_grid(),
        };

        let boundary = raw
            .boundary
            .map(|b| {
                let span = b.span();
                b.into_inner().parse::<Boundary>().map_err(|e| field_error(src, span, "boundary", e))
            })
            .transpose()?;

        let epsilon = raw.epsilon.map(|e| e.into_inner()).unwrap_or([1.0, 0.0, 0.0]);
        let cfg = Self { models, n, k, l, g2, epsilon, boundary, seed: raw.seed.unwrap_or(DEFAULT_SEED) };
        let points = cfg.points();
        if points.is_empty() {
            return Err(Error::Config("the grid contains no valid points (check k < N)".into()));
        }
        for p in &points {
            p.validate().map_err(|e| Error::Config(format!("point {}: {e}", describe(p))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&src).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Grid points in deterministic order: model, N, k, L, then g².
    pub fn points(&self) -> Vec<ModelConfig> {
        let mut out = Vec::new();
        for &model in &self.models {
            let sectors: Vec<(usize, usize)> = match model {
                ModelKind::Zn => self
                    .n
                    .iter()
                    .flat_map(|&n| self.k.iter().filter(move |&&k| k < n).map(move |&k| (n, k)))
                    .collect(),
                _ => vec![(0, 0)],
            };
            for &(n, k) in &sectors {
                for &l in &self.l {
                    for &g2 in &self.g2 {
                        let base = match model {
                            ModelKind::Su2 => ModelConfig::su2(l, g2),
                            ModelKind::Zn => ModelConfig::zn(n, k, l, g2),
                            ModelKind::D3 => ModelConfig::d3(l, g2).with_epsilon(self.epsilon),
                        };
                        out.push(match self.boundary {
                            Some(b) => base.with_boundary(b),
                            None => base,
                        });
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn describe(p: &ModelConfig) -> String {
    match p.model {
        ModelKind::Zn => format!("ZN N={} k={} L={} g2={}", p.n, p.k, p.l, p.g2),
        m => format!("{m} L={} g2={}", p.l, p.g2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logspace_endpoints() {
        let g = default_grid();
        assert_eq!(g.len(), 25);
        assert!((g[0] - 10f64.powf(-1.5)).abs() < 1e-15);
        assert!((g[24] - 10f64.powf(1.5)).abs() < 1e-12);
        assert!((g[12] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parses_lists_and_scalars() {
        let cfg = SweepConfig::from_toml_str(
            "model = \"ZN\"\nN = [2, 3]\nk = [0, 2]\nL = 4\ng2 = [0.5, 2.0]\nseed = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        let pts = cfg.points();
        // (2,0), (3,0), (3,2) with two couplings each.
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[4].n, pts[4].k, pts[4].g2), (3, 2, 0.5));
    }

    #[test]
    fn grid_table_and_defaults() {
        let cfg = SweepConfig::from_toml_str(
            "model = [\"SU2\", \"D3\"]\nL = [3]\ng2_grid = { log10_min = -1, log10_max = 1, points = 3 }\n",
        )
        .unwrap();
        assert_eq!(cfg.g2.len(), 3);
        let pts = cfg.points();
        assert_eq!(pts[0].boundary, Boundary::Periodic);
        assert_eq!(pts[3].boundary, Boundary::Open);
        assert_eq!(SweepConfig::from_toml_str("model = \"SU2\"\nL = 4\n").unwrap().g2.len(), 25);
    }

    #[test]
    fn errors_carry_line_and_field() {
        let err = SweepConfig::from_toml_str("model = \"ZN\"\nN = 3\nL = 4\ng2 = [1.0, -2.0]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 4") && msg.contains("`g2`"), "{msg}");

        let msg = SweepConfig::from_toml_str("model = \"U1\"\nL = 4\n").unwrap_err().to_string();
        assert!(msg.contains("line 1") && msg.contains("`model`"), "{msg}");

        let msg = SweepConfig::from_toml_str("model = \"SU2\"\nL = 4\ncoupling = 3\n").unwrap_err().to_string();
        assert!(msg.contains("coupling") && msg.contains("line 3"), "{msg}");

        let msg = SweepConfig::from_toml_str("model = \"D3\"\nL = 3\nboundary = \"periodic\"\n").unwrap_err().to_string();
        assert!(msg.contains("open boundary"), "{msg}");

        assert!(SweepConfig::from_toml_str("model = \"ZN\"\nN = 2\nk = 2\nL = 4\n").is_err());
    }
}
