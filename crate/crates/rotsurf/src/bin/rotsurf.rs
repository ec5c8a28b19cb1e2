//! Batch tool for generating and verifying rotational constant
//! Gauss-curvature surfaces. All output is deterministic: identical
//! invocations produce identical bytes.

use clap::{Args, Parser, Subcommand};
use rotsurf::elliptic::{
    complete_e, complete_f, complete_pi, e_am, jacobi, pi_am, Modulus,
};
use rotsurf::geometry::{
    build_mesh_with, default_theta_range, embed, lw_fit, parallel_offset, period_solve,
    period_value,
};
use rotsurf::jobio::{
    build_case, csv_string, emit_csv, emit_mesh, emit_report, format_float, format_g17,
    parse_config, profile_rows, report_to_json, resolve_model, JobConfig, MeshFormat,
};
use rotsurf::profile::CaseParams;
use rotsurf::verify::{curvature_fd_oriented, offset_curvature_samples, run_suite, SuiteConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const BRANCH_HELP: &str = "\
Branch tags and where they apply (p in the open interval shown, \
or the row is driven by the constant C):
  cn         S3 K>1 and H3 elliptic K>1 (p in (0,1))
  dn         S3 K>1, K<0 and H3 (all rotations), various K regimes (p in (0,1))
  cd1, cd2   S3 0<K<1 rows (p in (0,1))
  nc1, nc2   S3 K<0 and H3 hyperbolic 0<K<1, K>1 rows (pole-limited)
  sc1, sc2   S3 K<0 rows (pole-limited)
  dc1, dc2   H3 elliptic/hyperbolic K<1 rows (pole-limited)
  flat       intrinsically flat rows (S3 K=-1, H3 parabolic K=1), driven by C
  clifford   constant-radius flat tori in S3 (K=-1, C=0)
  snowman    H3 elliptic K=1 front, C>1
  hourglass  H3 elliptic K=1 front, 0<C<1
  peach      H3 hyperbolic K=1 front, C<0";

#[derive(Parser)]
#[command(
    name = "rotsurf",
    about = "Rotational constant-Gauss-curvature surfaces in S3 and H3",
    after_help = BRANCH_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate special functions (Jacobi elliptic, elliptic integrals).
    Special {
        #[command(subcommand)]
        action: SpecialAction,
    },
    /// Sample a profile curve to CSV (s, r, psi, d, res_r, res_psi).
    Profile {
        #[command(flatten)]
        row: RowArgs,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long = "period-multiples", default_value_t = 1.0)]
        period_multiples: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mesh a surface and export it as OBJ or PLY.
    Surface {
        #[command(flatten)]
        row: RowArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mesh a parallel offset surface at normal distance t.
    Parallel {
        #[command(flatten)]
        row: RowArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Normal offset distance.
        #[arg(long)]
        t: f64,
        /// Print the fitted linear Weingarten relation of the offset.
        #[arg(long, default_value_t = false)]
        fit: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the closure condition P(n, p) = 2 pi for p.
    Period {
        #[arg(long = "K", allow_hyphen_values = true)]
        k: f64,
        #[arg(long)]
        n: u32,
    },
    /// Run the verification suite and emit the JSON report.
    Verify {
        /// Path to a JSON config, or the literal "default".
        #[arg(long, default_value = "default")]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpecialAction {
    /// Print one function value at 17 significant digits.
    Eval {
        /// One of: sn, cn, dn, am, e, pi, cf, ce, cpi.
        #[arg(long = "fn")]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        s: f64,
        /// Characteristic of the third-kind integral.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
    },
    /// Emit a CSV table with columns s, sn, cn, dn, am.
    Table {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long = "max-s", default_value_t = 4.0)]
        max_s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Case selection shared by the geometry subcommands.
#[derive(Args)]
struct RowArgs {
    /// Ambient space: s3 or h3.
    #[arg(long, default_value = "s3")]
    space: String,
    /// Rotation type: elliptic, hyperbolic or parabolic.
    #[arg(long, default_value = "elliptic")]
    rotation: String,
    /// Target Gauss curvature of the row.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: f64,
    #[arg(long)]
    branch: String,
    /// Modulus of the Jacobi functions.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Integration constant (alternative to p).
    #[arg(long = "C", allow_hyphen_values = true)]
    c: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 400)]
    ns: usize,
    #[arg(long, default_value_t = 120)]
    ntheta: usize,
    /// Projection model: auto, stereo, ball, halfspace or raw4.
    #[arg(long, default_value = "auto")]
    model: String,
}

fn row_config(row: &RowArgs) -> JobConfig {
    JobConfig {
        space: row.space.clone(),
        rotation: row.rotation.clone(),
        k: row.k,
        branch: row.branch.clone(),
        p: row.p,
        c: row.c,
        ..JobConfig::default()
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_special(action: &SpecialAction) -> Result<(), String> {
    match action {
        SpecialAction::Eval { name, p, s, k } => {
            let m = Modulus::new(*p).map_err(|e| e.to_string())?;
            let value = match name.as_str() {
                "sn" => jacobi(*s, &m).map(|ev| ev.sn),
                "cn" => jacobi(*s, &m).map(|ev| ev.cn),
                "dn" => jacobi(*s, &m).map(|ev| ev.dn),
                "am" => jacobi(*s, &m).map(|ev| ev.am),
                "e" => e_am(*s, &m),
                "pi" => {
                    let k = k.ok_or("--k is required for fn = pi")?;
                    pi_am(k, *s, &m)
                }
                "cf" => complete_f(&m),
                "ce" => complete_e(&m),
                "cpi" => {
                    let k = k.ok_or("--k is required for fn = cpi")?;
                    complete_pi(k, &m)
                }
                other => {
                    return Err(format!(
                        "unknown function {other:?}; admissible: sn, cn, dn, am, e, pi, cf, ce, cpi"
                    ))
                }
            }
            .map_err(|e| e.to_string())?;
            println!("{}", format_g17(value));
            Ok(())
        }
        SpecialAction::Table { p, samples, max_s, out } => {
            let m = Modulus::new(*p).map_err(|e| e.to_string())?;
            let mut text = String::from("s,sn,cn,dn,am\n");
            for i in 0..*samples {
                let s = if *samples > 1 {
                    -max_s + 2.0 * max_s * i as f64 / (*samples - 1) as f64
                } else {
                    0.0
                };
                let ev = jacobi(s, &m).map_err(|e| e.to_string())?;
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_float(s),
                    format_float(ev.sn),
                    format_float(ev.cn),
                    format_float(ev.dn),
                    format_float(ev.am),
                ));
            }
            write_or_print(&text, out.as_deref())
        }
    }
}

fn mesh_ranges(params: &CaseParams) -> ((f64, f64), (f64, f64), bool) {
    let s_range = params.default_window();
    let theta_range = default_theta_range(params.case().space());
    let wrap = theta_range.1 - theta_range.0 >= 2.0 * std::f64::consts::PI - 1e-12;
    (s_range, theta_range, wrap)
}

fn run_surface(row: &RowArgs, grid: &GridArgs, out: &Path) -> Result<(), String> {
    let params = build_case(&row_config(row)).map_err(|e| e.to_string())?;
    let model = resolve_model(&grid.model, params.case().space())
        .ok_or_else(|| format!("unknown model {:?}", grid.model))?;
    let (s_range, theta_range, wrap) = mesh_ranges(&params);
    let estimator = |s: f64, theta: f64| {
        curvature_fd_oriented(&|a, b| embed(&params, a, b), s, theta, 3e-4, None)
            .ok()
            .map(|est| (est.k, est.h_mean))
    };
    let mesh = build_mesh_with(
        &|s, theta| embed(&params, s, theta),
        s_range,
        theta_range,
        grid.ns,
        grid.ntheta,
        model,
        wrap,
        &estimator,
        params.case().k_target(),
    )
    .map_err(|e| e.to_string())?;
    let format = MeshFormat::from_path(out)
        .ok_or_else(|| format!("{}: expected a .obj or .ply extension", out.display()))?;
    emit_mesh(&mesh, format, out).map_err(|e| e.to_string())?;
    eprintln!(
        "wrote {} ({} vertices, max quadric violation {:.3e}, {} singular vertices skipped)",
        out.display(),
        mesh.vertices.len(),
        mesh.quality.max_quadric_violation,
        mesh.quality.skipped_singular,
    );
    Ok(())
}

fn run_parallel(row: &RowArgs, grid: &GridArgs, t: f64, fit: bool, out: &Path) -> Result<(), String> {
    let params = build_case(&row_config(row)).map_err(|e| e.to_string())?;
    let model = resolve_model(&grid.model, params.case().space())
        .ok_or_else(|| format!("unknown model {:?}", grid.model))?;
    let (s_range, theta_range, wrap) = mesh_ranges(&params);
    let point = |s: f64, theta: f64| parallel_offset(&params, t, s, theta);
    let estimator = |s: f64, theta: f64| {
        curvature_fd_oriented(&point, s, theta, 3e-4, None)
            .ok()
            .map(|est| (est.k, est.h_mean))
    };
    let mesh = build_mesh_with(
        &point,
        s_range,
        theta_range,
        grid.ns,
        grid.ntheta,
        model,
        wrap,
        &estimator,
        params.case().k_target(),
    )
    .map_err(|e| e.to_string())?;
    let format = MeshFormat::from_path(out)
        .ok_or_else(|| format!("{}: expected a .obj or .ply extension", out.display()))?;
    emit_mesh(&mesh, format, out).map_err(|e| e.to_string())?;
    if fit {
        let samples =
            offset_curvature_samples(&params, t, 24, 3e-4, 1e-7).map_err(|e| e.to_string())?;
        let fit = lw_fit(&samples).map_err(|e| e.to_string())?;
        println!(
            "{{\"a\": {}, \"b\": {}, \"c\": {}, \"residual\": {}}}",
            format_float(fit.a),
            format_float(fit.b),
            format_float(fit.c),
            format_float(fit.residual),
        );
    }
    Ok(())
}

fn run_period(k: f64, n: u32) -> Result<(), String> {
    let p = period_solve(k, n).map_err(|e| e.to_string())?;
    let residual = period_value(n, k, p.p()).map_err(|e| e.to_string())?
        - 2.0 * std::f64::consts::PI;
    println!(
        "{{\"p\": {}, \"residual\": {}}}",
        format_float(p.p()),
        format_float(residual)
    );
    Ok(())
}

fn run_verify(config: &str, out: Option<&Path>) -> Result<bool, String> {
    let suite = if config == "default" {
        SuiteConfig::default()
    } else {
        let text = std::fs::read_to_string(config).map_err(|e| format!("{config}: {e}"))?;
        parse_config(&text).map_err(|e| e.to_string())?.suite
    };
    let report = run_suite(&suite);
    let text = report_to_json(&report);
    print!("{text}");
    if let Some(path) = out {
        emit_report(&report, path).map_err(|e| e.to_string())?;
    }
    Ok(report.all_pass())
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::Special { action } => run_special(action).map(|_| true),
        Command::Profile { row, samples, period_multiples, out } => {
            let params = build_case(&row_config(row)).map_err(|e| e.to_string())?;
            let rows = profile_rows(&params, *samples, *period_multiples)
                .map_err(|e| e.to_string())?;
            match out {
                Some(path) => emit_csv(&rows, path).map_err(|e| e.to_string())?,
                None => print!("{}", csv_string(&rows)),
            }
            Ok(true)
        }
        Command::Surface { row, grid, out } => run_surface(row, grid, out).map(|_| true),
        Command::Parallel { row, grid, t, fit, out } => {
            run_parallel(row, grid, *t, *fit, out).map(|_| true)
        }
        Command::Period { k, n } => run_period(*k, *n).map(|_| true),
        Command::Verify { config, out } => run_verify(config, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
