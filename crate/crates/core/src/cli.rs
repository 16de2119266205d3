//! Command-line front end. Exit codes: 0 success, 1 other failure, 2 usage or
//! invalid input, 3 numerical blow-up.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::diagnostics::{corner_points_algebraic, error_tables, riemann_phi_uniform, scaling_sweep, TablesConfig};
use crate::error::{Error, Result};
use crate::io::{write_artifact, Format, Horizon, RunConfig, TrajectoryRow};
use crate::polygon::{algebraic_solution, c_l, center_of_mass_algebraic, PolygonSpec, RationalTime};
use crate::selfsimilar::{integrate_profile_at, vertical_integral, AsymptoticTangent, PROFILE_TOL};
use crate::solver::{run, AtTimes, Grid, SolverState, TimeStepper, RHO_DEFAULT, RHO_MAX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hypervfe", version, about = "Binormal flow of planar l-polygons in Minkowski 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Output {
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    /// csv (with a .json sidecar) or json.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate the flow numerically and dump snapshots.
    Evolve {
        #[arg(long)]
        l: f64,
        #[arg(long = "M")]
        m: usize,
        /// Grid subintervals per side (N/M).
        #[arg(long)]
        nps: usize,
        /// Δt/Δs².
        #[arg(long, default_value_t = RHO_DEFAULT)]
        rho: f64,
        /// `period` or a time.
        #[arg(long, default_value = "period")]
        horizon: Horizon,
        /// Snapshot times (default: start, quarters and end of the horizon).
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Algebraic solution at t = (l²/2π)(p/q).
    Algebraic {
        #[arg(long)]
        l: f64,
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Trajectory of the corner X(0, t) from the algebraic solution.
    Corner {
        #[arg(long)]
        l: f64,
        /// Number of subintervals of the period.
        #[arg(long, default_value_t = 960)]
        samples: usize,
        /// Skip times with larger reduced denominators.
        #[arg(long)]
        max_q: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Centre-of-mass speed c_l, optionally with the algebraic time series.
    Speed {
        #[arg(long)]
        l: f64,
        /// Rational times per period for the time series (needs --out).
        #[arg(long, default_value_t = 0)]
        subdivisions: usize,
        #[arg(long = "M", default_value_t = 8)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-corner self-similar profile and its asymptotic tangents.
    Onecorner {
        #[arg(long)]
        c0: f64,
        #[arg(long, default_value_t = 200.0)]
        smax: f64,
        #[arg(long, default_value_t = PROFILE_TOL)]
        tol: f64,
        /// Output spacing in s.
        #[arg(long, default_value_t = 0.05)]
        ds: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Error tables (trimmed mean, numerical vs algebraic, c₀ recovery).
    Tables {
        /// Also run the N/M = 2⁸ cells.
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Riemann's function φ and, with --fit, the λ_l scaling sweep.
    Riemann {
        #[arg(long, default_value_t = 2048)]
        terms: usize,
        #[arg(long, default_value_t = 7561)]
        points: usize,
        /// Fit φ against corner trajectories for Me = 3..=20.
        #[arg(long)]
        fit: bool,
        /// Period subintervals of the corner sweep used by --fit.
        #[arg(long, default_value_t = 960)]
        fit_samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn config(name: &str, params: serde_json::Value, out: &Output) -> RunConfig {
    RunConfig { subcommand: name.into(), params, out: out.out.clone(), format: out.format.into() }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BlowUp { .. } => EXIT_BLOWUP,
                Error::InvalidArgument(_) | Error::NotCoprime { .. } => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

pub fn execute(cmd: Command) -> Result<()> {
    let clock = Instant::now();
    match cmd {
        Command::Evolve { l, m, nps, rho, horizon, times, output } => {
            let spec = PolygonSpec::new(l, m)?;
            let grid = Grid::new(&spec, nps)?;
            if !(rho > 0.0) {
                return Err(usage("rho must be positive"));
            }
            if rho > RHO_MAX {
                eprintln!("warning: Δt/Δs² = {rho} is above the stability bound {RHO_MAX}");
            }
            let h = horizon.resolve(spec.period());
            let stepper = TimeStepper::from_rho(&grid, h, rho, 4)?;
            let times = if times.is_empty() { (0..=4).map(|i| h * i as f64 / 4.0).collect() } else { times };
            let nodes = grid.nodes();
            let mut rows = Vec::new();
            let mut obs = AtTimes {
                times: times.clone(),
                f: |s: &SolverState| {
                    for j in 0..=grid.n {
                        rows.push(TrajectoryRow::new(s.t, nodes[j], s.x[j], s.tangent[j]));
                    }
                    Ok(())
                },
            };
            let last = run(&spec, &grid, &stepper, &mut [&mut obs])?;
            let params = json!({ "l": l, "M": m, "nps": nps, "rho": rho, "horizon": horizon, "times": times });
            let summary = json!({
                "steps": stepper.steps, "dt": stepper.dt, "rho_actual": stepper.rho,
                "final_t": last.t, "period": spec.period(), "c_l": c_l(l),
            });
            write_artifact(&config("evolve", params, &output), &rows, &summary, clock.elapsed().as_secs_f64())
        }
        Command::Algebraic { l, m, p, q, output } => {
            let spec = PolygonSpec::new(l, m)?;
            let time = RationalTime::new(p, q)?;
            let sol = algebraic_solution(&spec, time)?;
            #[derive(Serialize)]
            struct Row {
                s: f64,
                #[serde(rename = "X1")]
                x1: f64,
                #[serde(rename = "X2")]
                x2: f64,
                #[serde(rename = "X3")]
                x3: f64,
                #[serde(rename = "T1")]
                t1: f64,
                #[serde(rename = "T2")]
                t2: f64,
                #[serde(rename = "T3")]
                t3: f64,
                e1_1: f64,
                e1_2: f64,
                e1_3: f64,
                e2_1: f64,
                e2_2: f64,
                e2_3: f64,
            }
            // one record per side: its starting vertex and its frame
            let rows: Vec<Row> = (0..sol.corners())
                .map(|k| {
                    let (x, f) = (sol.x[k], sol.frames[k]);
                    Row {
                        s: sol.s[k],
                        x1: x.x1,
                        x2: x.x2,
                        x3: x.x3,
                        t1: f.t.x1,
                        t2: f.t.x2,
                        t3: f.t.x3,
                        e1_1: f.e1.x1,
                        e1_2: f.e1.x2,
                        e1_3: f.e1.x3,
                        e2_1: f.e2.x1,
                        e2_2: f.e2.x2,
                        e2_3: f.e2.x3,
                    }
                })
                .collect();
            let params = json!({ "l": l, "M": m, "p": p, "q": q });
            let summary = json!({
                "t": time.value(l), "sides": sol.corners(), "end_vertex": sol.x[sol.corners()],
                "vertical_offset": sol.vertical_offset, "corner": sol.corner_point(),
            });
            write_artifact(&config("algebraic", params, &output), &rows, &summary, clock.elapsed().as_secs_f64())
        }
        Command::Corner { l, samples, max_q, output } => {
            if samples == 0 {
                return Err(usage("samples must be positive"));
            }
            let spec = PolygonSpec::new(l, 2)?;
            let pts = corner_points_algebraic(l, samples, max_q)?;
            #[derive(Serialize)]
            struct Row {
                t: f64,
                t_over_period: f64,
                #[serde(rename = "X1")]
                x1: f64,
                #[serde(rename = "X2")]
                x2: f64,
                #[serde(rename = "X3")]
                x3: f64,
            }
            let rows: Vec<Row> = pts
                .iter()
                .map(|(u, x)| Row { t: u * spec.period(), t_over_period: *u, x1: x.x1, x2: x.x2, x3: x.x3 })
                .collect();
            let params = json!({ "l": l, "samples": samples, "max_q": max_q });
            let summary = json!({ "points": rows.len(), "c_l": c_l(l) });
            write_artifact(&config("corner", params, &output), &rows, &summary, clock.elapsed().as_secs_f64())
        }
        Command::Speed { l, subdivisions, m, out } => {
            let spec = PolygonSpec::new(l, m)?;
            println!("c_l = {:.15}", c_l(l));
            println!("c_l - 1 = {:.6e}", c_l(l) - 1.0);
            if subdivisions > 0 {
                let out = out.ok_or_else(|| usage("--subdivisions needs --out"))?;
                let series = center_of_mass_algebraic(&spec, subdivisions)?;
                #[derive(Serialize)]
                struct Row {
                    t: f64,
                    rate1: f64,
                    rate2: f64,
                    rate3: f64,
                    com1: f64,
                    com2: f64,
                    com3: f64,
                }
                let rows: Vec<Row> = series
                    .iter()
                    .map(|c| Row {
                        t: c.t,
                        rate1: c.rate.x1,
                        rate2: c.rate.x2,
                        rate3: c.rate.x3,
                        com1: c.position.x1,
                        com2: c.position.x2,
                        com3: c.position.x3,
                    })
                    .collect();
                let slope = series.last().unwrap().position.x3 / spec.period();
                println!("mean vertical speed over one period = {slope:.12}");
                let o = Output { out, format: FormatArg::Csv };
                let params = json!({ "l": l, "M": m, "subdivisions": subdivisions });
                let summary = json!({ "c_l": c_l(l), "period_mean_speed": slope });
                write_artifact(&config("speed", params, &o), &rows, &summary, clock.elapsed().as_secs_f64())?;
            }
            Ok(())
        }
        Command::Onecorner { c0, smax, tol, ds, output } => {
            let p = integrate_profile_at(c0, 1.0, smax, ds, tol)?;
            let a = AsymptoticTangent::new(c0)?;
            let last = p.len() - 1;
            let (raw, est) = (p.tangent[last], p.tangent_limit(last));
            println!("closed form  A = ({:.10}, {:.10}, {:.10})", a.a1, a.a2, a.a3);
            println!("T(s_max)       = ({:.10}, {:.10}, {:.10})", raw.x1, raw.x2, raw.x3);
            println!("T + 2c0 b/s    = ({:.10}, {:.10}, {:.10})", est.x1, est.x2, est.x3);
            println!("-A1²+A2²+A3²   = {:.3e}", a.plus().norm2());
            println!("∫X_rot,3 ds    = {:.10} (closed form {:.10})", p.x3rot_integral, vertical_integral(c0));
            #[derive(Serialize)]
            struct Row {
                s: f64,
                #[serde(rename = "X1")]
                x1: f64,
                #[serde(rename = "X2")]
                x2: f64,
                #[serde(rename = "X3")]
                x3: f64,
                #[serde(rename = "T1")]
                t1: f64,
                #[serde(rename = "T2")]
                t2: f64,
                #[serde(rename = "T3")]
                t3: f64,
                n1: f64,
                n2: f64,
                n3: f64,
                b1: f64,
                b2: f64,
                b3: f64,
            }
            let rows: Vec<Row> = (0..p.len())
                .map(|i| {
                    let (x, t, n, b) = (p.x[i], p.tangent[i], p.normal[i], p.binormal[i]);
                    Row {
                        s: p.s[i],
                        x1: x.x1,
                        x2: x.x2,
                        x3: x.x3,
                        t1: t.x1,
                        t2: t.x2,
                        t3: t.x3,
                        n1: n.x1,
                        n2: n.x2,
                        n3: n.x3,
                        b1: b.x1,
                        b2: b.x2,
                        b3: b.x3,
                    }
                })
                .collect();
            let params = json!({ "c0": c0, "smax": smax, "tol": tol, "ds": ds });
            let summary = json!({
                "closed_form": a, "tangent_at_smax": raw, "tangent_limit_estimate": est,
                "integral": p.x3rot_integral, "integral_closed_form": vertical_integral(c0),
                "frame_defect": p.frame_defect(), "steps": p.steps,
            });
            write_artifact(&config("onecorner", params, &output), &rows, &summary, clock.elapsed().as_secs_f64())
        }
        Command::Tables { extended, output } => {
            let mut cfg = TablesConfig::desk();
            if extended {
                cfg.table1.push((0.1, 96, 256));
                cfg.table2.push((0.1, 48, 128));
            }
            let t = error_tables(&cfg)?;
            #[derive(Serialize)]
            struct Row {
                table: u8,
                l: f64,
                #[serde(rename = "M")]
                m: usize,
                nps: usize,
                q: i64,
                error: f64,
            }
            let mut rows = Vec::new();
            for c in &t.table1 {
                println!("table1 l={} M={} N/M={} error={:.4e}", c.l, c.m, c.nodes_per_side, c.error);
                rows.push(Row { table: 1, l: c.l, m: c.m, nps: c.nodes_per_side, q: 0, error: c.error });
            }
            for c in &t.table2 {
                println!("table2 l={} M={} N/M={} error={:.4e}", c.l, c.m, c.nodes_per_side, c.error);
                rows.push(Row { table: 2, l: c.l, m: c.m, nps: c.nodes_per_side, q: 0, error: c.error });
            }
            for c in &t.table3 {
                println!("table3 l={} q={} error={:.4e}", c.l, c.q, c.error);
                rows.push(Row { table: 3, l: c.l, m: 0, nps: 0, q: c.q, error: c.error });
            }
            let params = json!({ "extended": extended, "tables": cfg });
            write_artifact(&config("tables", params, &output), &rows, &t, clock.elapsed().as_secs_f64())
        }
        Command::Riemann { terms, points, fit, fit_samples, output } => {
            if points < 2 {
                return Err(usage("points must be at least 2"));
            }
            let phi = riemann_phi_uniform(terms, points - 1)?;
            #[derive(Serialize)]
            struct Row {
                t: f64,
                re: f64,
                im: f64,
            }
            let rows: Vec<Row> =
                phi.t.iter().zip(&phi.values).map(|(t, v)| Row { t: *t, re: v.re, im: v.im }).collect();
            let sweep = if fit {
                let mes: Vec<u32> = (3..=20).collect();
                let s = scaling_sweep(&mes, fit_samples, terms, None)?;
                println!("ln|λ_l| ≈ {:.4} ln l + {:.4}", s.slope, s.intercept);
                Some(s)
            } else {
                None
            };
            let params = json!({ "terms": terms, "points": points, "fit": fit, "fit_samples": fit_samples });
            let summary = json!({ "tail_bound": 1.0 / terms as f64, "fit": sweep });
            write_artifact(&config("riemann", params, &output), &rows, &summary, clock.elapsed().as_secs_f64())
        }
    }
}
