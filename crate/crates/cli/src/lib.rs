//! Subcommands of the `sigmasurf` binary, usable as a library.
//!
//! Every command returns its full output as a string together with an exit
//! code; the binary only parses flags and writes the result.

pub mod config;
mod output;

use rayon::prelude::*;
use serde::Serialize;
use sigmasurf::geometry::{
    conformality_check, curvature_report_on, metric_constant_residual, CurvatureReport,
    CONSTANT_TOL,
};
use sigmasurf::projector::{
    check_suite, euler_lagrange_residual, reduced_structure_report, sum_with,
};
use sigmasurf::surface::{embed, path_independence, square_grid, SurfacePoint, PATH_TOL};
use sigmasurf::symalg::identity::sample_points;
use sigmasurf::symalg::RESIDUAL_TOL;
use sigmasurf::{canonical_chart, tower, Complex64, Composition, IdentityCheck, ProjectorField};

pub use config::{parse_point, Format, Input, JobConfig};
use output::{fmt17, matrix_rows};

/// Exit code when every check passes.
pub const EXIT_PASS: i32 = 0;
/// Exit code when an identity check fails.
pub const EXIT_IDENTITY: i32 = 1;
/// Exit code for invalid flags or input files.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for poles and other numerical breakdowns.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(sigmasurf::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<sigmasurf::Error> for CliError {
    fn from(e: sigmasurf::Error) -> Self {
        use sigmasurf::Error as E;
        match e {
            E::DimensionTooSmall { .. }
            | E::IndexOutOfRange { .. }
            | E::DuplicateIndex(_)
            | E::LengthMismatch { .. }
            | E::RankOutOfRange { .. }
            | E::NotHolomorphic { .. }
            | E::ZeroVector => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

/// Rendered output and exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
}

fn projector(cfg: &JobConfig) -> Result<ProjectorField, CliError> {
    let t = tower(&cfg.holomorphic()?)?;
    Ok(sum_with(&t, cfg.composition.clone())?)
}

fn grid(cfg: &JobConfig) -> Vec<Complex64> {
    square_grid(cfg.grid_radius, cfg.grid_res)
}

#[derive(Clone, Copy)]
enum Task {
    Suite,
    Conformal,
    Quadric,
    Path,
    Metric,
}

fn run_task(
    task: Task,
    cfg: &JobConfig,
    p: &ProjectorField,
) -> Result<Vec<IdentityCheck>, CliError> {
    let check = |name: &str, r: f64, tol: f64| vec![IdentityCheck::new(name, r, tol)];
    Ok(match task {
        Task::Suite => check_suite(p),
        Task::Conformal => vec![conformality_check(p)],
        Task::Quadric => {
            let chart = canonical_chart(cfg.n, p.rank())?;
            let mut worst = 0.0f64;
            for z in sample_points(64, cfg.grid_radius, cfg.seed) {
                worst = worst.max(embed(p, &chart, z)?.quadratic_residual(&chart));
            }
            check("surface_on_quadric", worst, RESIDUAL_TOL)
        }
        Task::Path => {
            let to = sample_points(1, 0.5 * cfg.grid_radius, cfg.seed ^ 0x9a7)[0];
            let pi = path_independence(p, Complex64::new(0.0, 0.0), to)?;
            check("path_independence", pi.max_gap, PATH_TOL)
        }
        Task::Metric => match curvature_constant(cfg, p) {
            Some(a) => check(
                "metric_constant",
                metric_constant_residual(p, a),
                RESIDUAL_TOL,
            ),
            None => Vec::new(),
        },
    })
}

fn curvature_constant(cfg: &JobConfig, p: &ProjectorField) -> Option<f64> {
    if cfg.is_veronese() {
        sigmasurf::geometry::veronese_metric_constant(cfg.n, &p.composition).ok()
    } else {
        None
    }
}

/// JSON shape of `verify`.
#[derive(Serialize)]
pub struct VerifyReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub input: &'static str,
    pub composition: Composition,
    pub pass: bool,
    pub checks: Vec<IdentityCheck>,
    pub curvature: CurvatureReport,
}

/// Runs every applicable identity check on the configured projector.
pub fn verify_report(cfg: &JobConfig) -> Result<VerifyReport, CliError> {
    let p = projector(cfg)?;
    let mut tasks = vec![Task::Suite, Task::Conformal, Task::Path, Task::Metric];
    if p.is_orthogonal_sum() {
        tasks.push(Task::Quadric);
    }
    let (checks, curvature) = rayon::join(
        || {
            tasks
                .par_iter()
                .map(|&t| run_task(t, cfg, &p))
                .collect::<Result<Vec<_>, _>>()
        },
        || curvature_report_on(&p, cfg.is_veronese(), &grid(cfg)),
    );
    let mut checks: Vec<IdentityCheck> = checks?.into_iter().flatten().collect();
    let curvature = curvature?;
    if cfg.is_veronese() {
        checks.push(IdentityCheck::new(
            "curvature_constant",
            curvature.spread,
            CONSTANT_TOL,
        ));
    }
    Ok(VerifyReport {
        n: cfg.n,
        input: cfg.input.label(),
        composition: p.composition.clone(),
        pass: checks.iter().all(|c| c.holds),
        checks,
        curvature,
    })
}

pub fn cmd_verify(cfg: &JobConfig, format: Format) -> Result<Outcome, CliError> {
    let report = verify_report(cfg)?;
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("identity_name,holds,residual\n");
            for c in &report.checks {
                s += &format!("{},{},{}\n", c.identity_name, c.holds, fmt17(c.residual));
            }
            s
        }
    };
    Ok(Outcome {
        code: if report.pass {
            EXIT_PASS
        } else {
            EXIT_IDENTITY
        },
        body,
    })
}

#[derive(Serialize)]
struct Cloud<'a> {
    #[serde(rename = "N")]
    n: usize,
    r: usize,
    #[serde(rename = "C")]
    c: f64,
    points: &'a [SurfacePoint],
}

/// Surface coordinates at every grid point, in grid order.
pub fn sample_points_on_grid(cfg: &JobConfig) -> Result<(usize, f64, Vec<SurfacePoint>), CliError> {
    let p = projector(cfg)?;
    if !p.is_orthogonal_sum() {
        return Err(CliError::Config(
            "sampling needs 0/1 weights so the sum is a projector".into(),
        ));
    }
    let chart = canonical_chart(cfg.n, p.rank())?;
    let pts = grid(cfg)
        .par_iter()
        .map(|&z| embed(&p, &chart, z))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((chart.r, chart.c, pts))
}

pub fn cmd_sample(cfg: &JobConfig, format: Format) -> Result<Outcome, CliError> {
    let (r, c, pts) = sample_points_on_grid(cfg)?;
    let body = match format {
        Format::Json => to_json(&Cloud {
            n: cfg.n,
            r,
            c,
            points: &pts,
        }),
        Format::Csv => output::cloud_csv(cfg.n, r, c, &pts),
    };
    Ok(Outcome {
        code: EXIT_PASS,
        body,
    })
}

#[derive(Serialize)]
struct IntegrateReport {
    #[serde(rename = "N")]
    n: usize,
    composition: Composition,
    from: [f64; 2],
    to: [f64; 2],
    straight: Vec<Vec<[f64; 2]>>,
    detour: Vec<Vec<[f64; 2]>>,
    max_gap: f64,
    independent: bool,
    euler_lagrange_residual: f64,
}

/// Integrates the surface 1-form along a straight and a detour contour.
pub fn cmd_integrate(
    cfg: &JobConfig,
    from: Complex64,
    to: Complex64,
    format: Format,
) -> Result<Outcome, CliError> {
    let p = projector(cfg)?;
    let (pi, el) = rayon::join(
        || path_independence(&p, from, to),
        || euler_lagrange_residual(&p),
    );
    let pi = pi?;
    let body = match format {
        Format::Json => to_json(&IntegrateReport {
            n: cfg.n,
            composition: p.composition.clone(),
            from: [from.re, from.im],
            to: [to.re, to.im],
            straight: matrix_rows(&pi.straight),
            detour: matrix_rows(&pi.detour),
            max_gap: pi.max_gap,
            independent: pi.independent,
            euler_lagrange_residual: el,
        }),
        Format::Csv => output::integral_csv(&pi, el),
    };
    Ok(Outcome {
        code: if pi.independent {
            EXIT_PASS
        } else {
            EXIT_IDENTITY
        },
        body,
    })
}

/// Plain-text summary of the tower, checks, curvature and structure.
pub fn cmd_report(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let t = tower(&cfg.holomorphic()?)?;
    let report = verify_report(cfg)?;
    let p = sum_with(&t, cfg.composition.clone())?;
    let mut s = format!(
        "N = {}, input {}, P = {}\n",
        cfg.n,
        cfg.input.label(),
        report.composition
    );
    s += &format!(
        "tower: {} members, orthogonality {:.3e}\n",
        t.members().len(),
        t.orthogonality_residual()
    );
    s += "checks:\n";
    for c in &report.checks {
        let verdict = if c.holds { "holds" } else { "FAILS" };
        s += &format!(
            "  {:<34} {:<5} {:.3e}\n",
            c.identity_name, verdict, c.residual
        );
    }
    let cv = &report.curvature;
    s += &format!(
        "curvature: K mean {} over {}x{} grid, spread {:.3e}, {}\n",
        fmt17(cv.k),
        cfg.grid_res,
        cfg.grid_res,
        cv.spread,
        if cv.constant {
            "constant"
        } else {
            "not constant"
        }
    );
    if let Some(a) = cv.a {
        s += &format!("metric constant A = {}\n", fmt17(a));
    }
    if cfg.is_veronese() && cfg.n >= 3 {
        let st = reduced_structure_report(&p);
        s += &format!(
            "structure: {} real coordinates after symmetries (formula {}), affine span {}\n",
            st.orbit_count, st.formula_count, st.affine_span_dim
        );
    }
    s += if report.pass {
        "verdict: pass\n"
    } else {
        "verdict: FAIL\n"
    };
    Ok(Outcome {
        code: EXIT_PASS,
        body: s,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
