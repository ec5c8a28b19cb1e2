//! Job configuration and deterministic file emission (CSV, OBJ, PLY,
//! JSON). Floats are written in Rust's shortest round-trip form, which
//! never exceeds 17 significant digits, so identical inputs always give
//! identical bytes.

use crate::geometry::{GeometryError, Model, SurfaceMesh};
use crate::profile::{
    ode_residual, profile, Branch, CaseId, CaseParams, ProfileError, Rotation, SpaceForm,
};
use crate::verify::{SuiteConfig, VerificationReport};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("field {field}: {message}")]
    Schema { field: &'static str, message: String },
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("mesh violates its quadric invariant by {residual}")]
    DirtyMesh { residual: f64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn io_err(path: &Path, source: std::io::Error) -> JobError {
    JobError::Io { path: path.display().to_string(), source }
}

/// One batch job. Unknown keys are rejected; exactly one of `p` and `c`
/// selects the row parameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub subcommand: String,
    /// "s3" or "h3".
    pub space: String,
    pub rotation: String,
    pub k: f64,
    pub branch: String,
    pub p: Option<f64>,
    pub c: Option<f64>,
    /// Profile samples per window (profile subcommand).
    pub samples: usize,
    pub period_multiples: f64,
    /// Surface grid dimensions.
    pub ns: usize,
    pub ntheta: usize,
    pub model: String,
    pub out: Option<String>,
    /// Normal offset distance (parallel subcommand).
    pub t_offset: f64,
    /// Winding count for the period subcommand.
    pub n_lobes: u32,
    pub suite: SuiteConfig,
    pub seed: u64,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            subcommand: "surface".into(),
            space: "s3".into(),
            rotation: "elliptic".into(),
            k: 1.0,
            branch: "dn".into(),
            p: None,
            c: None,
            samples: 400,
            period_multiples: 1.0,
            ns: 400,
            ntheta: 120,
            model: "auto".into(),
            out: None,
            t_offset: 0.0,
            n_lobes: 2,
            suite: SuiteConfig::default(),
            seed: 0,
        }
    }
}

/// Parse and validate a JSON job description.
pub fn parse_config(text: &str) -> Result<JobConfig, JobError> {
    let config: JobConfig = serde_json::from_str(text)?;
    validate(&config)?;
    Ok(config)
}

fn validate(config: &JobConfig) -> Result<(), JobError> {
    const SUBCOMMANDS: &[&str] = &["special", "profile", "surface", "parallel", "period", "verify"];
    if !SUBCOMMANDS.contains(&config.subcommand.as_str()) {
        return Err(JobError::Schema {
            field: "subcommand",
            message: format!(
                "unknown subcommand {:?}; admissible: {}",
                config.subcommand,
                SUBCOMMANDS.join(", ")
            ),
        });
    }
    if config.model != "auto" && Model::parse(&config.model).is_none() {
        return Err(JobError::Schema {
            field: "model",
            message: format!(
                "unknown model {:?}; admissible: auto, stereo, ball, halfspace, raw4",
                config.model
            ),
        });
    }
    if matches!(config.subcommand.as_str(), "verify" | "period" | "special") {
        return Ok(());
    }
    build_case(config).map(|_| ())
}

fn parse_space(config: &JobConfig) -> Result<SpaceForm, JobError> {
    let rotation = Rotation::parse(&config.rotation).ok_or_else(|| JobError::Schema {
        field: "rotation",
        message: format!(
            "unknown rotation {:?}; admissible: elliptic, hyperbolic, parabolic",
            config.rotation
        ),
    })?;
    let kappa = match config.space.as_str() {
        "s3" => 1,
        "h3" => -1,
        other => {
            return Err(JobError::Schema {
                field: "space",
                message: format!("unknown space {other:?}; admissible: s3, h3"),
            })
        }
    };
    SpaceForm::new(kappa, rotation).map_err(|e| JobError::Schema {
        field: "rotation",
        message: e.to_string(),
    })
}

/// Resolve a config into a fully constructed catalogue row instance.
pub fn build_case(config: &JobConfig) -> Result<CaseParams, JobError> {
    let space = parse_space(config)?;
    let branch = Branch::parse(&config.branch).ok_or_else(|| JobError::Schema {
        field: "branch",
        message: format!(
            "unknown branch {:?}; admissible: cn, dn, cd1, cd2, nc1, nc2, sc1, sc2, dc1, dc2, \
             flat, clifford, snowman, hourglass, peach",
            config.branch
        ),
    })?;
    let case = CaseId::new(space, config.k, branch).map_err(|e| JobError::Schema {
        field: "branch",
        message: e.to_string(),
    })?;
    match (config.p, config.c) {
        (Some(_), Some(_)) => Err(JobError::Schema {
            field: "p",
            message: "exactly one of p and C may be supplied".into(),
        }),
        (None, None) => Err(JobError::Schema {
            field: "p",
            message: "one of p and C is required".into(),
        }),
        (Some(p), None) => {
            let (lo, hi) = case.modulus_interval();
            if !(p > lo && p < hi) {
                let hi_text = if hi.is_finite() { format!("{hi}") } else { "inf".into() };
                return Err(JobError::Schema {
                    field: "p",
                    message: format!(
                        "p = {p} outside the open [{lo},{hi_text}] interval of branch {}",
                        case.branch().name()
                    ),
                });
            }
            CaseParams::from_modulus(case, p).map_err(JobError::from)
        }
        (None, Some(c)) => CaseParams::from_c(case, c).map_err(|e| JobError::Schema {
            field: "c",
            message: e.to_string(),
        }),
    }
}

/// Resolve a model name, with "auto" picking the natural projection of
/// the ambient space (stereographic for S^3, the ball for H^3).
pub fn resolve_model(name: &str, space: SpaceForm) -> Option<Model> {
    if name == "auto" {
        return Some(if space.kappa() > 0.0 {
            Model::Stereographic
        } else {
            Model::PoincareBall
        });
    }
    Model::parse(name)
}

/// One evaluated profile point together with its equation residuals.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProfileRow {
    pub s: f64,
    pub r: f64,
    pub psi: f64,
    pub d: f64,
    pub res_r: f64,
    pub res_psi: f64,
}

/// Sample the profile over `multiples` default windows.
pub fn profile_rows(
    params: &CaseParams,
    samples: usize,
    multiples: f64,
) -> Result<Vec<ProfileRow>, JobError> {
    let (lo, hi) = params.default_window();
    let width = (hi - lo) * multiples;
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = lo + width * (i as f64 + 0.5) / samples as f64;
        let sample = profile(params, s)?;
        let (res_r, res_psi) = ode_residual(params, s)?;
        rows.push(ProfileRow { s, r: sample.r, psi: sample.psi, d: sample.d, res_r, res_psi });
    }
    Ok(rows)
}

/// Shortest round-trip float text (never more than 17 significant
/// digits; distinguishes -0 from 0 for stability of the byte stream).
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Fixed 17-significant-digit scientific form for single-value output.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_string(rows: &[ProfileRow]) -> String {
    let mut out = String::from("s,r,psi,d,res_r,res_psi\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float(row.s),
            format_float(row.r),
            format_float(row.psi),
            format_float(row.d),
            format_float(row.res_r),
            format_float(row.res_psi),
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "obj" => Some(MeshFormat::Obj),
            "ply" => Some(MeshFormat::Ply),
            _ => None,
        }
    }
}

pub fn mesh_to_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = write!(out, "v {} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]));
        if mesh.model == Model::Raw4 {
            let _ = write!(out, " {}", format_float(v[3]));
        }
        out.push('\n');
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    out
}

pub fn mesh_to_ply(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ply\nformat ascii 1.0");
    let _ = writeln!(out, "element vertex {}", mesh.vertices.len());
    out.push_str(
        "property float x\nproperty float y\nproperty float z\n\
         property float k_est\nproperty float h_est\n",
    );
    let _ = writeln!(out, "element face {}", mesh.faces.len());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for (i, v) in mesh.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            format_float(v[0]),
            format_float(v[1]),
            format_float(v[2]),
            format_float(mesh.k_est[i]),
            format_float(mesh.h_est[i]),
        );
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "4 {} {} {} {}", f[0], f[1], f[2], f[3]);
    }
    out
}

pub fn report_to_json(report: &VerificationReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

/// Write a mesh, asserting the upstream quadric invariant first.
pub fn emit_mesh(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<(), JobError> {
    if mesh.quality.max_quadric_violation > 1e-9 {
        return Err(JobError::DirtyMesh { residual: mesh.quality.max_quadric_violation });
    }
    let text = match format {
        MeshFormat::Obj => mesh_to_obj(mesh),
        MeshFormat::Ply => mesh_to_ply(mesh),
    };
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn emit_csv(rows: &[ProfileRow], path: &Path) -> Result<(), JobError> {
    std::fs::write(path, csv_string(rows)).map_err(|e| io_err(path, e))
}

pub fn emit_report(report: &VerificationReport, path: &Path) -> Result<(), JobError> {
    std::fs::write(path, report_to_json(report)).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MeshQuality, Model, SurfaceMesh};

    #[test]
    fn minimal_job_gets_defaults() {
        let config = parse_config(r#"{"p": 0.5}"#).unwrap();
        assert_eq!(config.subcommand, "surface");
        assert_eq!(config.ns, 400);
        assert_eq!(config.ntheta, 120);
        assert_eq!(config.model, "auto");
        build_case(&config).unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config(r#"{"p": 0.5, "verbose": true}"#).is_err());
    }

    #[test]
    fn modulus_out_of_interval_names_the_bound() {
        let err = parse_config(r#"{"p": 1.5}"#).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("[0,1]"), "message was: {text}");
    }

    #[test]
    fn p_and_c_are_exclusive() {
        let err = parse_config(r#"{"p": 0.5, "c": 0.2}"#).unwrap_err();
        assert!(err.to_string().contains("exactly one"));
    }

    #[test]
    fn tiny_grid_obj_layout() {
        let mesh = SurfaceMesh {
            ns: 2,
            ntheta: 2,
            model: Model::PoincareBall,
            vertices: vec![[0.0; 4], [0.25, 0.0, 0.0, 0.0], [0.0, 0.25, 0.0, 0.0], [0.25; 4]],
            k_est: vec![1.0; 4],
            h_est: vec![0.0; 4],
            faces: vec![[0, 1, 3, 2]],
            quality: MeshQuality::default(),
        };
        let obj = mesh_to_obj(&mesh);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 1);
        assert!(obj.contains("f 1 2 4 3"));
    }

    #[test]
    fn csv_round_trips_without_drift() {
        let case = CaseId::new(SpaceForm::s3(), 1.0, Branch::Dn).unwrap();
        let params = CaseParams::from_modulus(case, 0.5).unwrap();
        let rows = profile_rows(&params, 16, 1.0).unwrap();
        let text = csv_string(&rows);
        for (line, row) in text.lines().skip(1).zip(&rows) {
            let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(vals[0], row.s);
            assert_eq!(vals[1], row.r);
            assert_eq!(vals[2], row.psi);
            assert_eq!(vals[3], row.d);
        }
    }
}
