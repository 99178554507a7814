//! Bundled sweep presets and their plots.
//!
//! The system sizes are desk-scale choices, not exact reproductions of any
//! published curve.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::models::{ModelConfig, ModelKind};
use crate::zn_analytics::{degenerate_pairs, DegeneracyReport};
use crate::{Error, Result};

use super::svg::{line_plot, Series};
use super::{default_grid, SweepResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Plaquette, GGM, SRE and FAF densities for SU(2), ℤ₂ and D₃.
    Fig2,
    /// ℤ_N resources for `N = 2..6`, `k = 0, 1, 2`, `L = 4`.
    Fig3,
    /// Energy gaps for SU(2) and D₃.
    Fig4,
    /// Degenerate uniform configurations of the ℤ_N chain.
    Table1,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Table1];

    /// Grid points of the preset; empty for `table1`, which needs no diagonalization.
    pub fn points(self) -> Vec<ModelConfig> {
        let grid = default_grid();
        let mut cfgs = Vec::new();
        let su2_d3 = |cfgs: &mut Vec<ModelConfig>| {
            for l in [6, 8, 10] {
                cfgs.push(ModelConfig::su2(l, 1.0));
            }
            for l in [2, 3] {
                cfgs.push(ModelConfig::d3(l, 1.0));
            }
        };
        match self {
            Figure::Fig2 => {
                su2_d3(&mut cfgs);
                for l in [6, 8, 10] {
                    cfgs.push(ModelConfig::zn(2, 0, l, 1.0));
                }
            }
            Figure::Fig3 => {
                for k in 0..3 {
                    for n in 2..=6 {
                        if k < n {
                            cfgs.push(ModelConfig::zn(n, k, 4, 1.0));
                        }
                    }
                }
            }
            Figure::Fig4 => su2_d3(&mut cfgs),
            Figure::Table1 => {}
        }
        cfgs.into_iter().flat_map(|c| grid.iter().map(move |&g| c.clone().with_g2(g))).collect()
    }

    /// Columns plotted for this preset.
    pub fn columns(self) -> &'static [Column] {
        match self {
            Figure::Fig2 | Figure::Fig3 => {
                &[Column::Plaquette, Column::Ggm, Column::Sre2Density, Column::Faf2Density, Column::Gap, Column::GapSameSector]
            }
            Figure::Fig4 => &[Column::Gap, Column::GapSameSector],
            Figure::Table1 => &[],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Table1 => "table1",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown figure `{s}` (expected fig2, fig3, fig4 or table1)")))
    }
}

/// A plottable quantity of a [`SweepResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Plaquette,
    Ggm,
    Sre2Density,
    Faf2Density,
    Gap,
    GapSameSector,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Plaquette => "plaquette",
            Column::Ggm => "ggm",
            Column::Sre2Density => "sre2_density",
            Column::Faf2Density => "faf2_density",
            Column::Gap => "gap",
            Column::GapSameSector => "gap_same_sector",
        }
    }

    fn axis(self) -> &'static str {
        match self {
            Column::Plaquette => "<B_p>",
            Column::Ggm => "G2",
            Column::Sre2Density => "M2 / L",
            Column::Faf2Density => "F2 / L",
            Column::Gap => "E1 - E0",
            Column::GapSameSector => "E1 - E0 (trivial sector)",
        }
    }

    pub fn value(self, r: &SweepResult) -> Option<f64> {
        let l = r.l as f64;
        match self {
            Column::Plaquette => r.plaquette,
            Column::Ggm => r.ggm,
            Column::Sre2Density => r.sre2.map(|v| v / l),
            Column::Faf2Density => r.faf2.map(|v| v / l),
            Column::Gap => r.gap,
            Column::GapSameSector => r.gap_same_sector,
        }
    }
}

/// Legend label of the curve a row belongs to.
pub fn curve_label(r: &SweepResult) -> String {
    match r.model {
        ModelKind::Zn => format!("Z{} k={} L={}", r.n.unwrap_or(0), r.k.unwrap_or(0), r.l),
        m => format!("{m} L={}", r.l),
    }
}

/// One SVG per column that has at least one value, as `(column name, svg)`.
pub fn plots(rows: &[SweepResult], columns: &[Column]) -> Vec<(&'static str, String)> {
    columns
        .iter()
        .filter_map(|&c| {
            // Curves keep first-appearance order.
            let mut order: Vec<String> = Vec::new();
            let mut curves: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for r in rows {
                if let Some(v) = c.value(r) {
                    let label = curve_label(r);
                    if !curves.contains_key(&label) {
                        order.push(label.clone());
                    }
                    curves.entry(label).or_default().push((r.g2, v));
                }
            }
            if order.is_empty() {
                return None;
            }
            let series: Vec<Series> =
                order.into_iter().map(|label| Series { points: curves[&label].clone(), label }).collect();
            Some((c.name(), line_plot(c.name(), "g^2", c.axis(), &series)))
        })
        .collect()
}

/// Degeneracy reports for `N = 2..6`, `k = 0, 1, 2` with `k < N`.
pub fn table1() -> Result<Vec<DegeneracyReport>> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for k in 0..3.min(n) {
            out.push(degenerate_pairs(n, k)?);
        }
    }
    Ok(out)
}

fn set(v: &[usize]) -> String {
    format!("{{{}}}", v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

/// `N,k,degenerate_sets,ground_set`, sets written as `{a,b}` and separated by `;`.
pub fn table1_csv(reports: &[DegeneracyReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["N", "k", "degenerate_sets", "ground_set"]);
    for r in reports {
        let sets = r.degenerate_pairs.iter().map(|s| set(s)).collect::<Vec<_>>().join(";");
        let ground = r.ground_pair.as_deref().map(set).unwrap_or_default();
        let _ = w.write_record([r.n.to_string(), r.k.to_string(), sets, ground]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_sizes() {
        assert_eq!(Figure::Fig2.points().len(), 8 * 25);
        assert_eq!(Figure::Fig3.points().len(), 14 * 25);
        assert_eq!(Figure::Fig4.points().len(), 5 * 25);
        assert!(Figure::Table1.points().is_empty());
        assert!(Figure::Fig3.points().iter().all(|p| p.k < p.n && p.l == 4));
        assert_eq!("FIG3".parse::<Figure>().unwrap(), Figure::Fig3);
        assert!("fig5".parse::<Figure>().is_err());
    }

    #[test]
    fn table1_layout() {
        let reports = table1().unwrap();
        assert_eq!(reports.len(), 14);
        let csv = table1_csv(&reports);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("N,k,degenerate_sets,ground_set"));
        // ℤ₃, k = 0: E_1 = E_2 above E_0, so no degenerate ground set.
        assert!(csv.contains("3,0,\"{1,2}\",\n"), "{csv}");
        assert!(csv.contains("2,1,\"{0,1}\",\"{0,1}\""), "{csv}");
    }

    #[test]
    fn plots_group_by_curve() {
        let rows: Vec<SweepResult> = [0.1, 1.0, 10.0]
            .iter()
            .flat_map(|&g| {
                [4, 6].map(|l| {
                    let mut r = super::super::run_point(&ModelConfig::zn(2, 0, l, g), &Default::default()).result;
                    r.wall_time_ms = 0;
                    r
                })
            })
            .collect();
        let p = plots(&rows, Figure::Fig2.columns());
        assert!(p.iter().any(|(n, _)| *n == "ggm"));
        let ggm = &p.iter().find(|(n, _)| *n == "ggm").unwrap().1;
        assert_eq!(ggm.matches("<polyline").count(), 2);
        assert!(ggm.contains("Z2 k=0 L=4") && ggm.contains("Z2 k=0 L=6"));
    }
}
