use std::fmt;
use std::str::FromStr;

use bp_core::linalg::identity;
use bp_core::poisson::group::su2_element;
use bp_core::poisson::jacobi::CoordBivector;
use bp_core::poisson::local::{Cp1Bivector, Cp1Kind, CpnBivector, FothLuBivector, GrassmannBivector};
use bp_core::symspace::{block_diag, canonical_rep, SymmetricSpace};
use bp_core::CMatrix;
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

/// Named model selected with `--preset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `gr:m,n`, `cp1`, `cp2` and `cpn:n`. Points are `n × m` chart matrices.
    Grassmannian { m: usize, n: usize },
    /// `SU(2)` with the Evens-Lu group structure. Points are `(a, b)`.
    Su2,
    /// `(SU(2) × SU(2)) / diag`. Points are `(a, b)`, placed as `(k, 1)`.
    GroupSu2,
    /// `CP¹` in the chart at the `SO(2)`-fixed base point. Points are `w`.
    FothLu,
}

impl Preset {
    pub fn space(&self) -> Option<SymmetricSpace> {
        match *self {
            Preset::Grassmannian { m, n } => Some(SymmetricSpace::grassmannian(m, n)),
            Preset::Su2 | Preset::GroupSu2 => Some(SymmetricSpace::group_case(2)),
            Preset::FothLu => None,
        }
    }

    pub fn require_space(&self) -> CliResult<SymmetricSpace> {
        self.space().ok_or_else(|| CliError::Usage(format!("preset {self} has only a coordinate model")))
    }

    /// Number of complex entries in a point.
    pub fn point_len(&self) -> usize {
        match *self {
            Preset::Grassmannian { m, n } => m * n,
            Preset::Su2 | Preset::GroupSu2 => 2,
            Preset::FothLu => 1,
        }
    }

    /// Chart bivector used by the `jacobi` command.
    pub fn coord_bivector(&self) -> CliResult<Box<dyn CoordBivector>> {
        match *self {
            Preset::Grassmannian { m: 1, n: 1 } => Ok(Box::new(Cp1Bivector(Cp1Kind::EvensLu))),
            Preset::Grassmannian { m: 1, n } => Ok(Box::new(CpnBivector { n })),
            Preset::Grassmannian { m, n } => Ok(Box::new(GrassmannBivector { m, n })),
            Preset::FothLu => Ok(Box::new(FothLuBivector)),
            Preset::Su2 | Preset::GroupSu2 => Err(CliError::Usage(format!("preset {self} has no chart bivector"))),
        }
    }

    /// Representative `u ∈ U` of the point.
    pub fn representative(&self, point: &[Complex64]) -> CliResult<CMatrix> {
        if point.len() != self.point_len() {
            return Err(CliError::Usage(format!(
                "preset {self} expects {} complex entries, got {}",
                self.point_len(),
                point.len()
            )));
        }
        match *self {
            Preset::Grassmannian { m, n } => Ok(canonical_rep(&CMatrix::from_row_slice(n, m, point))),
            Preset::Su2 | Preset::GroupSu2 => {
                let norm = (point[0].norm_sqr() + point[1].norm_sqr()).sqrt();
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(CliError::Usage(format!("|a|² + |b|² must be 1, got norm {norm}")));
                }
                let k = su2_element(point[0] / norm, point[1] / norm);
                Ok(block_diag(&k, &identity(2)))
            }
            Preset::FothLu => Err(CliError::Usage("preset fothlu has only a coordinate model".into())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Preset::Grassmannian { m: 1, n: 1 } => write!(f, "cp1"),
            Preset::Grassmannian { m: 1, n: 2 } => write!(f, "cp2"),
            Preset::Grassmannian { m: 1, n } => write!(f, "cpn:{n}"),
            Preset::Grassmannian { m, n } => write!(f, "gr:{m},{n}"),
            Preset::Su2 => write!(f, "su2"),
            Preset::GroupSu2 => write!(f, "group:su2"),
            Preset::FothLu => write!(f, "fothlu"),
        }
    }
}

fn positive(text: &str) -> CliResult<usize> {
    match text.trim().parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(CliError::Usage(format!("expected a positive integer, got {text:?}"))),
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        match s {
            "cp1" => return Ok(Preset::Grassmannian { m: 1, n: 1 }),
            "cp2" => return Ok(Preset::Grassmannian { m: 1, n: 2 }),
            "su2" => return Ok(Preset::Su2),
            "group:su2" => return Ok(Preset::GroupSu2),
            "fothlu" | "fothlu_w" => return Ok(Preset::FothLu),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("cpn:") {
            return Ok(Preset::Grassmannian { m: 1, n: positive(rest)? });
        }
        if let Some(rest) = s.strip_prefix("gr:") {
            if let Some((m, n)) = rest.split_once(',') {
                return Ok(Preset::Grassmannian { m: positive(m)?, n: positive(n)? });
            }
        }
        Err(CliError::Usage(format!(
            "unknown preset {s:?} (expected gr:m,n | cp1 | cpn:n | cp2 | su2 | group:su2 | fothlu)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for (text, shown) in [("cp1", "cp1"), ("gr:1,2", "cp2"), ("cpn:3", "cpn:3"), ("gr:2,2", "gr:2,2"), ("group:su2", "group:su2")] {
            assert_eq!(text.parse::<Preset>().unwrap().to_string(), shown);
        }
        assert!("gr:0,2".parse::<Preset>().is_err());
        assert!("cp".parse::<Preset>().is_err());
    }

    #[test]
    fn su2_point_must_be_on_the_sphere() {
        let p = Preset::Su2;
        assert!(p.representative(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).is_ok());
        assert!(p.representative(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.7)]).is_err());
    }
}
