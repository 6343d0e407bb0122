//! Rank sweeps over rectangles in chart coordinates.
//!
//! Cells are sampled at their centres, `min + (i + ½)·(max − min)/steps`, so
//! exact boundary values such as `|z| = 1` on a symmetric grid are never hit.

use std::str::FromStr;

use bp_core::linalg::{principal_minors, AMBIGUITY_FACTOR};
use bp_core::poisson::local::{cp2_p, fothlu_w_chart};
use bp_core::poisson::pi_rank;
use bp_core::strata::birkhoff_layer;
use bp_core::{CMatrix, Error};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::preset::Preset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn centers(&self) -> Vec<f64> {
        let h = (self.max - self.min) / self.steps as f64;
        (0..self.steps).map(|i| self.min + (i as f64 + 0.5) * h).collect()
    }
}

/// Parsed `--grid min,max,steps[,min,max,steps...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<Axis>);

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.is_empty() || parts.len() % 3 != 0 {
            return Err(CliError::Usage(format!("grid needs min,max,steps triples, got {s:?}")));
        }
        let mut axes = Vec::new();
        for t in parts.chunks(3) {
            let min: f64 = t[0].parse().map_err(|_| CliError::Usage(format!("bad grid min {:?}", t[0])))?;
            let max: f64 = t[1].parse().map_err(|_| CliError::Usage(format!("bad grid max {:?}", t[1])))?;
            let steps: usize = t[2].parse().map_err(|_| CliError::Usage(format!("bad grid steps {:?}", t[2])))?;
            if !(min.is_finite() && max.is_finite() && min < max) {
                return Err(CliError::Usage(format!("grid axis needs min < max, got {min}, {max}")));
            }
            if steps < 2 {
                return Err(CliError::Usage(format!("grid axis needs at least 2 steps, got {steps}")));
            }
            axes.push(Axis { min, max, steps });
        }
        Ok(Grid(axes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Missing,
}

impl Cell {
    fn json(&self) -> Value {
        match *self {
            Cell::Real(x) => json!(x),
            Cell::Int(k) => json!(k),
            Cell::Missing => Value::Null,
        }
    }

    fn csv(&self) -> String {
        match *self {
            Cell::Real(x) => format!("{x}"),
            Cell::Int(k) => format!("{k}"),
            Cell::Missing => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankGrid {
    pub preset: Preset,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl RankGrid {
    pub fn to_json(&self) -> Value {
        json!({
            "preset": self.preset.to_string(),
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Column names of the coordinate axes, and the number of axes accepted.
fn axis_names(preset: Preset, axes: usize) -> CliResult<Vec<String>> {
    let names: Vec<String> = match preset {
        Preset::Grassmannian { m: 1, n: 1 } => vec!["re_z".into(), "im_z".into()],
        Preset::Grassmannian { m: 1, n: 2 } if axes == 2 => vec!["re_z1".into(), "re_z2".into()],
        Preset::Grassmannian { m: 1, n: 2 } => ["re_z1", "im_z1", "re_z2", "im_z2"].map(String::from).to_vec(),
        Preset::Grassmannian { m, n } => (0..n)
            .flat_map(|j| (0..m).flat_map(move |k| [format!("re_z{}{}", j + 1, k + 1), format!("im_z{}{}", j + 1, k + 1)]))
            .take(axes.max(1))
            .collect(),
        Preset::Su2 | Preset::GroupSu2 => vec!["re_a".into(), "im_a".into()],
        Preset::FothLu => vec!["re_w".into(), "im_w".into()],
    };
    if let Preset::Grassmannian { m, n } = preset {
        if m * n > 1 && !(m == 1 && n == 2) && axes > 2 * m * n {
            return Err(CliError::Usage(format!("preset {preset} has {} real coordinates", 2 * m * n)));
        }
    }
    Ok(names)
}

/// Evaluates one cell: rank, min |principal minor| and |p|, or `None` to skip.
fn evaluate(preset: Preset, coords: &[f64], tol: f64) -> CliResult<Option<[Cell; 3]>> {
    let equivariant = |u: CMatrix, abs_p: Cell| -> CliResult<Option<[Cell; 3]>> {
        let space = preset.require_space()?;
        let phi = space.cartan_embed(&u);
        let min_minor = principal_minors(&phi).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let rank = match birkhoff_layer(&space, &u, tol) {
            Ok(_) => Cell::Int(pi_rank(&space, &u, tol) as i64),
            Err(Error::StratumAmbiguous { .. }) => Cell::Int(-1),
            Err(e) => return Err(e.into()),
        };
        Ok(Some([rank, Cell::Real(min_minor), abs_p]))
    };
    match preset {
        Preset::Grassmannian { m: 1, n: 2 } => {
            let (z1, z2) = if coords.len() == 2 {
                (Complex64::new(coords[0], 0.0), Complex64::new(coords[1], 0.0))
            } else {
                (Complex64::new(coords[0], coords[1]), Complex64::new(coords[2], coords[3]))
            };
            let u = preset.representative(&[z1, z2])?;
            equivariant(u, Cell::Real(cp2_p(z1, z2).abs()))
        }
        Preset::Grassmannian { m, n } => {
            let mut x = vec![0.0; 2 * m * n];
            x[..coords.len()].copy_from_slice(coords);
            let point: Vec<Complex64> = x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
            equivariant(preset.representative(&point)?, Cell::Missing)
        }
        Preset::Su2 | Preset::GroupSu2 => {
            let a = Complex64::new(coords[0], coords[1]);
            if a.norm_sqr() > 1.0 {
                return Ok(None);
            }
            let b = Complex64::new((1.0 - a.norm_sqr()).sqrt(), 0.0);
            equivariant(preset.representative(&[a, b])?, Cell::Missing)
        }
        Preset::FothLu => {
            let coeff = fothlu_w_chart(Complex64::new(coords[0], coords[1])).norm();
            let rank = if coeff <= tol {
                0
            } else if coeff <= AMBIGUITY_FACTOR * tol {
                -1
            } else {
                2
            };
            Ok(Some([Cell::Int(rank), Cell::Missing, Cell::Missing]))
        }
    }
}

/// Sweeps the grid in row-major order, the last axis varying fastest.
///
/// A single triple is reused for every axis the preset needs.
pub fn rank_grid(preset: Preset, grid: &Grid, tol: f64) -> CliResult<RankGrid> {
    let needed = match preset {
        Preset::Grassmannian { m: 1, n: 2 } if grid.0.len() == 4 => 4,
        Preset::Grassmannian { m, n } if m * n > 1 && !(m == 1 && n == 2) => grid.0.len(),
        _ => 2,
    };
    let axes: Vec<Axis> = match grid.0.len() {
        1 => vec![grid.0[0]; needed],
        k if k == needed => grid.0.clone(),
        k => return Err(CliError::Usage(format!("preset {preset} takes {needed} grid axes, got {k}"))),
    };
    let mut columns = axis_names(preset, axes.len())?;
    columns.extend(["rank", "min_abs_minor", "abs_p"].map(String::from));

    let centers: Vec<Vec<f64>> = axes.iter().map(Axis::centers).collect();
    let total: usize = centers.iter().map(Vec::len).product();
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; centers.len()];
            for (k, c) in centers.iter().enumerate().rev() {
                p[k] = c[idx % c.len()];
                idx /= c.len();
            }
            p
        })
        .collect();
    let evaluated: Vec<CliResult<Option<[Cell; 3]>>> = points.par_iter().map(|p| evaluate(preset, p, tol)).collect();
    let mut rows = Vec::with_capacity(total);
    for (p, cell) in points.iter().zip(evaluated) {
        if let Some(values) = cell? {
            let mut row: Vec<Cell> = p.iter().map(|&x| Cell::Real(x)).collect();
            row.extend(values);
            rows.push(row);
        }
    }
    Ok(RankGrid { preset, columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_avoid_boundaries() {
        let a = Axis { min: -2.0, max: 2.0, steps: 4 };
        assert_eq!(a.centers(), vec![-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn grid_parse_errors() {
        assert!("0,1".parse::<Grid>().is_err());
        assert!("1,0,5".parse::<Grid>().is_err());
        assert!("0,1,1".parse::<Grid>().is_err());
        assert_eq!("0,1,3,-1,1,2".parse::<Grid>().unwrap().0.len(), 2);
    }

    #[test]
    fn cp1_ring() {
        let grid: Grid = "-2,2,40".parse().unwrap();
        let g = rank_grid("cp1".parse().unwrap(), &grid, 1e-9).unwrap();
        assert_eq!(g.rows.len(), 1600);
        for row in &g.rows {
            let (Cell::Real(x), Cell::Real(y), Cell::Int(rank)) = (row[0], row[1], row[2]) else { panic!() };
            let r = x.hypot(y);
            if (r - 1.0).abs() > 0.1 {
                assert_eq!(rank, 2, "{x} {y}");
            }
        }
    }
}
