//! File formats: body and kernel specs in, bodies, CSV tables and check
//! reports out. Everything is plain JSON/CSV; field order is fixed by the
//! struct definitions so reports are byte-reproducible.

use serde::{Deserialize, Serialize};

use convexcal_core::body::{BallBody, Polytope3, SupportSampleBody};
use convexcal_core::ellipsoid::Ellipsoid;
use convexcal_core::quad::{support_grid, SphereRule};
use convexcal_core::zonal::ZonalProfile;
use convexcal_core::{Error, Result};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Polytope { vertices: Vec<[f64; 3]> },
    Ball { center: [f64; 3], radius: f64 },
    Ellipsoid { semiaxes: [f64; 3] },
    ZonalSupport { profile: KernelSpec },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum KernelSpec {
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    Table {
        table: TableSpec,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct TableSpec {
    pub t: Vec<f64>,
    pub value: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MeasureFile {
    pub atoms: Vec<MeasureAtom>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MeasureAtom {
    pub normal: [f64; 3],
    pub weight: f64,
}

#[derive(Debug, Serialize)]
pub struct BodyOut {
    #[serde(rename = "type")]
    pub kind: String,
    pub vertices: Vec<[f64; 3]>,
    pub metadata: BodyMetadata,
}

#[derive(Debug, Serialize)]
pub struct BodyMetadata {
    pub volume: f64,
    pub surface_area: f64,
    pub facets: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

/// A loaded body, dispatched by kind.
pub enum LoadedBody {
    Poly(Polytope3),
    Ball(BallBody),
    Ellipsoid(Ellipsoid),
    Samples(SupportSampleBody),
}

impl KernelSpec {
    pub fn to_profile(&self) -> Result<ZonalProfile> {
        match self {
            KernelSpec::Builtin { builtin, alpha } => ZonalProfile::builtin(builtin, *alpha),
            KernelSpec::Table { table } => {
                ZonalProfile::from_table(table.t.clone(), table.value.clone(), "table")
            }
        }
    }
}

impl BodySpec {
    pub fn load(&self) -> Result<LoadedBody> {
        match self {
            BodySpec::Polytope { vertices } => {
                if vertices.len() < 4 {
                    return Err(Error::InvalidInput(
                        "polytope needs at least 4 vertices".into(),
                    ));
                }
                Ok(LoadedBody::Poly(Polytope3::from_points(vertices)?))
            }
            BodySpec::Ball { center, radius } => {
                Ok(LoadedBody::Ball(BallBody::new(*center, *radius)?))
            }
            BodySpec::Ellipsoid { semiaxes } => Ok(LoadedBody::Ellipsoid(Ellipsoid::new(
                semiaxes[0],
                semiaxes[1],
                semiaxes[2],
            )?)),
            BodySpec::ZonalSupport { profile } => {
                let g = profile.to_profile()?;
                let dirs = support_grid(302);
                let values: Vec<f64> = dirs.iter().map(|&u| g.eval(u[2])).collect();
                Ok(LoadedBody::Samples(SupportSampleBody::new(dirs, values)?))
            }
        }
    }
}

impl LoadedBody {
    /// Surface area measure used by the convolution commands. Polytopes are
    /// exact; ellipsoids are discretized on the quadrature grid; balls are
    /// handled exactly by their callers; zonal-support bodies are realized
    /// first.
    pub fn measure(
        &self,
        rule: &SphereRule,
    ) -> Result<convexcal_core::body::DiscreteSurfaceMeasure> {
        match self {
            LoadedBody::Poly(p) => p.surface_measure(),
            LoadedBody::Ellipsoid(e) => {
                let atoms: Vec<([f64; 3], f64)> = rule
                    .nodes
                    .iter()
                    .zip(rule.weights.iter())
                    .map(|(&u, &w)| (u, w * convexcal_core::OMEGA_3 * e.surface_density(u)))
                    .collect();
                convexcal_core::body::DiscreteSurfaceMeasure::new(atoms)
            }
            LoadedBody::Ball(_) => Err(Error::InvalidInput(
                "ball measures are handled analytically".into(),
            )),
            LoadedBody::Samples(s) => s.to_polytope()?.polytope.surface_measure(),
        }
    }
}

pub fn body_out(p: &Polytope3, residual: Option<f64>, iterations: Option<usize>) -> BodyOut {
    BodyOut {
        kind: "polytope".into(),
        vertices: p.vertices().to_vec(),
        metadata: BodyMetadata {
            volume: p.volume(),
            surface_area: p.surface_area(),
            facets: p.facets().len(),
            residual,
            iterations,
        },
    }
}

// --- reports ---------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub environment: Environment,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Serialize)]
pub struct Environment {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_override: Option<f64>,
    pub version: String,
}

#[derive(Debug, Serialize)]
pub struct CheckRow {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub status: String,
}

impl CheckRow {
    /// Identity row: passes when |lhs - rhs| <= tol (absolute, callers
    /// pre-scale).
    pub fn identity(id: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = (lhs - rhs).abs();
        CheckRow {
            id: id.into(),
            lhs,
            rhs,
            slack,
            tol,
            status: if slack <= tol { "pass" } else { "fail" }.into(),
        }
    }

    /// Inequality row: passes when lhs >= rhs - tol; flags the ball equality
    /// case when requested and |lhs - rhs| <= tol.
    pub fn inequality(
        id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        ball_equality: bool,
    ) -> Self {
        let slack = lhs - rhs;
        let status = if ball_equality && slack.abs() <= tol {
            "equality(ball)".to_string()
        } else if slack >= -tol {
            "pass".to_string()
        } else {
            "fail".to_string()
        };
        CheckRow {
            id: id.into(),
            lhs,
            rhs,
            slack,
            tol,
            status,
        }
    }

    /// Expectation row for detection checks: passes when `lhs > rhs`.
    pub fn exceeds(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            id: id.into(),
            lhs,
            rhs,
            slack: lhs - rhs,
            tol: rhs,
            status: if lhs > rhs { "pass" } else { "fail" }.into(),
        }
    }

    /// Boolean expectation row.
    pub fn expect(id: impl Into<String>, got: bool, want: bool) -> Self {
        CheckRow {
            id: id.into(),
            lhs: got as u8 as f64,
            rhs: want as u8 as f64,
            slack: 0.0,
            tol: 0.0,
            status: if got == want { "pass" } else { "fail" }.into(),
        }
    }

    pub fn ok(&self) -> bool {
        self.status != "fail"
    }
}
