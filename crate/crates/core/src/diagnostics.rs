//! Corner trajectories, Riemann's function, scaling fits, stereographic
//! projection and the error tables.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::MinkVec3;
use crate::polygon::{
    algebraic_solution, c_l, center_of_mass_numeric, AlgebraicSolution, PolygonSpec, PolygonState, RationalTime,
};
use crate::selfsimilar::c0_recover;
use crate::solver::{run, EveryNth, Grid, SolverState, TimeStepper};

/// Samples |φ| below this are left out of relative errors.
pub const REL_ERR_FLOOR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSeries {
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn new(t: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if t.len() != values.len() {
            return Err(Error::InvalidArgument("sample and value counts differ".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("t samples must increase strictly".into()));
        }
        Ok(ComplexSeries { t, values })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// z − i c t.
    pub fn detrended(&self, c: f64) -> ComplexSeries {
        let values = self.t.iter().zip(&self.values).map(|(t, z)| z - Complex64::new(0.0, c * t)).collect();
        ComplexSeries { t: self.t.clone(), values }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub lambda: f64,
    pub mu: Complex64,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
}

/// z(t) = X₂(0,t) + i X₃(0,t) from corner samples.
pub fn corner_series(t: Vec<f64>, corner: &[MinkVec3]) -> Result<ComplexSeries> {
    ComplexSeries::new(t, corner.iter().map(|x| Complex64::new(x.x2, x.x3)).collect())
}

/// Corner X(0, t) of a numerical run, sampled `samples` + 1 times over one period.
pub fn corner_trajectory_numeric(
    spec: &PolygonSpec,
    nodes_per_side: usize,
    rho: f64,
    samples: usize,
) -> Result<(ComplexSeries, Vec<MinkVec3>)> {
    let grid = Grid::new(spec, nodes_per_side)?;
    let stepper = TimeStepper::from_rho(&grid, spec.period(), rho, samples)?;
    let mid = grid.n / 2;
    let mut ts = Vec::new();
    let mut pts = Vec::new();
    let mut obs = EveryNth {
        every: stepper.steps / samples,
        f: |s: &SolverState| {
            ts.push(s.t);
            pts.push(s.x[mid]);
            Ok(())
        },
    };
    run(spec, &grid, &stepper, &mut [&mut obs])?;
    Ok((corner_series(ts, &pts)?, pts))
}

/// Algebraic corner X(0, t) at t = (n/samples) T_f, n = 0..=samples, skipping
/// times whose reduced denominator exceeds `max_q`. Only two sides are built
/// on each side of the corner, which is all the alignment needs.
pub fn corner_points_algebraic(l: f64, samples: usize, max_q: Option<i64>) -> Result<Vec<(f64, MinkVec3)>> {
    let spec = PolygonSpec::new(l, 2)?;
    let qq = samples as i64;
    let pool = crate::thread_pool();
    let out: Vec<Result<Option<(f64, MinkVec3)>>> = pool.install(|| {
        use rayon::prelude::*;
        (0..=qq)
            .into_par_iter()
            .map(|n| {
                let time = RationalTime::reduced(n, qq)?;
                if max_q.is_some_and(|m| time.q > m) {
                    return Ok(None);
                }
                let sol = algebraic_solution(&spec, time)?;
                Ok(Some((n as f64 / qq as f64, sol.corner_point())))
            })
            .collect()
    });
    Ok(out.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

/// Corner trajectory of the algebraic solution in the orientation used for the
/// comparison with φ: −X₂(0,t) + i X₃(0,t), with t in units of the period.
pub fn corner_trajectory_algebraic(l: f64, samples: usize, max_q: Option<i64>) -> Result<ComplexSeries> {
    let pts = corner_points_algebraic(l, samples, max_q)?;
    let (t, v) = pts.into_iter().map(|(t, x)| (t, Complex64::new(-x.x2, x.x3))).unzip();
    ComplexSeries::new(t, v)
}

/// φ(t) = −Σ_{k=1}^{terms} e^{2πi k² t}/k²; the neglected tail is below 1/terms.
pub fn riemann_phi(terms: usize, t_points: &[f64]) -> Result<ComplexSeries> {
    if terms == 0 {
        return Err(Error::InvalidArgument("terms must be ≥ 1".into()));
    }
    let values = t_points
        .iter()
        .map(|&t| {
            let mut sum = Complex64::new(0.0, 0.0);
            // add small terms first
            for k in (1..=terms).rev() {
                let k2 = (k * k) as f64;
                let ph = (k2 * t).fract();
                let (s, c) = (TAU * ph).sin_cos();
                sum += Complex64::new(c, s) / k2;
            }
            -sum
        })
        .collect();
    ComplexSeries::new(t_points.to_vec(), values)
}

/// φ at t = n/q for n = 0..=q with exact reduction of k² n modulo q.
pub fn riemann_phi_uniform(terms: usize, q: usize) -> Result<ComplexSeries> {
    if terms == 0 || q == 0 {
        return Err(Error::InvalidArgument("terms and q must be ≥ 1".into()));
    }
    let roots: Vec<Complex64> = (0..q)
        .map(|k| {
            let (s, c) = (TAU * k as f64 / q as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    let t: Vec<f64> = (0..=q).map(|n| n as f64 / q as f64).collect();
    let values = (0..=q as u64)
        .map(|n| {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in (1..=terms as u64).rev() {
                let idx = ((k * k) % q as u64 * n) % q as u64;
                sum += roots[idx as usize] / (k * k) as f64;
            }
            -sum
        })
        .collect();
    ComplexSeries::new(t, values)
}

/// l = 2 arccosh(sec(π/Me)): the polygon whose angle matches the Euclidean Me-gon.
pub fn l_from_me(me: u32) -> Result<f64> {
    if me < 3 {
        return Err(Error::InvalidArgument(format!("Me = {me} must be ≥ 3")));
    }
    Ok(2.0 * (1.0 / (PI / me as f64).cos()).acosh())
}

/// Least squares φ ≈ λ z + μ with λ real and μ complex.
pub fn fit_scaling(z: &ComplexSeries, phi: &ComplexSeries) -> Result<FitResult> {
    if z.len() != phi.len() || z.t.iter().zip(&phi.t).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::InvalidArgument("series must share their t samples".into()));
    }
    let n = z.len() as f64;
    let zm = z.values.iter().sum::<Complex64>() / n;
    let pm = phi.values.iter().sum::<Complex64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in z.values.iter().zip(&phi.values) {
        let dz = a - zm;
        num += (dz.conj() * (b - pm)).re;
        den += dz.norm_sqr();
    }
    if den <= f64::EPSILON * n * (zm.norm_sqr() + 1.0) * 1e-6 {
        return Err(Error::Degenerate("z is constant".into()));
    }
    let lambda = num / den;
    let mu = pm - zm * lambda;
    let mut max_abs_err = 0.0f64;
    let mut max_rel_err = 0.0f64;
    for (a, b) in z.values.iter().zip(&phi.values) {
        let r = (b - a * lambda - mu).norm();
        max_abs_err = max_abs_err.max(r);
        if b.norm() >= REL_ERR_FLOOR {
            max_rel_err = max_rel_err.max(r / b.norm());
        }
    }
    Ok(FitResult { lambda, mu, max_abs_err, max_rel_err })
}

/// Ordinary least squares y ≈ slope·x + intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingRow {
    pub me: u32,
    pub l: f64,
    pub fit: FitResult,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingSweep {
    pub rows: Vec<ScalingRow>,
    /// OLS fit of ln|λ| against ln l.
    pub slope: f64,
    pub intercept: f64,
}

/// Fits φ against the algebraic corner trajectory for each Me and regresses
/// ln|λ_l| on ln l. λ comes out negative in this orientation (see
/// [`corner_trajectory_algebraic`]), so the magnitude is regressed.
pub fn scaling_sweep(mes: &[u32], samples: usize, terms: usize, max_q: Option<i64>) -> Result<ScalingSweep> {
    let phi_all = riemann_phi_uniform(terms, samples)?;
    let mut rows = Vec::new();
    for &me in mes {
        let l = l_from_me(me)?;
        let z = corner_trajectory_algebraic(l, samples, max_q)?;
        let keep: Vec<usize> = z.t.iter().map(|t| (t * samples as f64).round() as usize).collect();
        let phi = ComplexSeries { t: z.t.clone(), values: keep.iter().map(|&i| phi_all.values[i]).collect() };
        rows.push(ScalingRow { me, l, fit: fit_scaling(&z, &phi)? });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.l.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.fit.lambda.abs().ln()).collect();
    let (slope, intercept) = linear_fit(&x, &y);
    Ok(ScalingSweep { rows, slope, intercept })
}

/// Projection of H² from (−1, 0, 0): (T₂ + i T₃)/(1 + T₁).
pub fn stereographic(t: MinkVec3) -> Complex64 {
    Complex64::new(t.x2, t.x3) / (1.0 + t.x1)
}

/// Stereographic images of all side tangents of an algebraic solution.
pub fn stereographic_curve(sol: &AlgebraicSolution) -> Vec<Complex64> {
    sol.frames.iter().map(|f| stereographic(f.t)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Cell {
    pub l: f64,
    pub m: usize,
    pub nodes_per_side: usize,
    pub r: usize,
    pub steps: usize,
    pub rho: f64,
    /// max_n |X₃,ᵣ^mean(tⁿ) − c_l tⁿ|.
    pub error: f64,
    pub c_l_minus_1: f64,
    pub seconds: f64,
}

/// Trimmed vertical-mean error over one period (r = M/8).
pub fn table1_cell(l: f64, m: usize, nodes_per_side: usize, rho: f64) -> Result<Table1Cell> {
    let clock = Instant::now();
    let spec = PolygonSpec::new(l, m)?;
    let grid = Grid::new(&spec, nodes_per_side)?;
    let stepper = TimeStepper::from_rho(&grid, spec.period(), rho, 1)?;
    let (r, cl) = (m / 8, c_l(l));
    let mut err = 0.0f64;
    let mut obs = EveryNth {
        every: 1,
        f: |s: &SolverState| {
            let c = trimmed_mean(&spec, &s.x, r)?;
            err = err.max((c.x3 - cl * s.t).abs());
            Ok(())
        },
    };
    run(&spec, &grid, &stepper, &mut [&mut obs])?;
    Ok(Table1Cell {
        l,
        m,
        nodes_per_side,
        r,
        steps: stepper.steps,
        rho: stepper.rho,
        error: err,
        c_l_minus_1: cl - 1.0,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

fn trimmed_mean(spec: &PolygonSpec, x: &[MinkVec3], r: usize) -> Result<MinkVec3> {
    let st = PolygonState { s: Vec::new(), x: x.to_vec(), tangent: Vec::new(), t: 0.0 };
    center_of_mass_numeric(spec, &st, r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2Cell {
    pub l: f64,
    pub m: usize,
    pub nodes_per_side: usize,
    pub samples: usize,
    pub steps: usize,
    pub rho: f64,
    /// Max over sampled times and the inner half of the nodes.
    pub error: f64,
    /// Same maximum over all nodes, boundary layers included.
    pub error_all_nodes: f64,
    pub seconds: f64,
}

/// Numerical vs algebraic solution at `samples` + 1 equispaced times of one
/// period: ‖X_num − (0, X₂ᵣ^mean, c_l t) − X_alg‖, where X_alg is interpolated
/// onto the grid and centred with its own trimmed X₂, X₃ means.
pub fn table2_cell(l: f64, m: usize, nodes_per_side: usize, samples: usize, rho: f64) -> Result<Table2Cell> {
    let clock = Instant::now();
    let spec = PolygonSpec::new(l, m)?;
    let grid = Grid::new(&spec, nodes_per_side)?;
    let stepper = TimeStepper::from_rho(&grid, spec.period(), rho, samples)?;
    let every = stepper.steps / samples;
    let (r, cl) = (m / 8, c_l(l));
    let nodes = grid.nodes();
    let (lo, hi) = (grid.n / 4, 3 * grid.n / 4);
    let (mut inner, mut all) = (0.0f64, 0.0f64);
    let mut obs = EveryNth {
        every,
        f: |s: &SolverState| {
            let n = (s.step / every) as i64;
            let alg = algebraic_solution(&spec, RationalTime::reduced(n, samples as i64)?)?;
            let xa: Vec<MinkVec3> = nodes.iter().map(|&sj| alg.sample(sj)).collect();
            let cn = trimmed_mean(&spec, &s.x, r)?;
            let ca = trimmed_mean(&spec, &xa, r)?;
            let shift = MinkVec3::new(0.0, cn.x2 - ca.x2, cl * s.t - ca.x3);
            for j in 0..=grid.n {
                let d = (s.x[j] - shift - xa[j]).euclid();
                all = all.max(d);
                if (lo..=hi).contains(&j) {
                    inner = inner.max(d);
                }
            }
            Ok(())
        },
    };
    run(&spec, &grid, &stepper, &mut [&mut obs])?;
    Ok(Table2Cell {
        l,
        m,
        nodes_per_side,
        samples,
        steps: stepper.steps,
        rho: stepper.rho,
        error: inner,
        error_all_nodes: all,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table3Cell {
    pub l: f64,
    pub q: i64,
    pub c0: f64,
    pub c0_approx: f64,
    pub error: f64,
}

pub fn table3_cell(l: f64, q: i64) -> Result<Table3Cell> {
    let spec = PolygonSpec::new(l, 2)?;
    let approx = c0_recover(&spec, q)?;
    Ok(Table3Cell { l, q, c0: spec.c0(), c0_approx: approx, error: (approx - spec.c0()).abs() })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TablesConfig {
    pub table1: Vec<(f64, usize, usize)>,
    pub table2: Vec<(f64, usize, usize)>,
    pub table3: Vec<(f64, i64)>,
    pub rho: f64,
    pub samples: usize,
}

impl TablesConfig {
    /// Desk-scale cells: trimmed vertical mean at M = 96 and trajectory error at
    /// M = 48 for l = 0.1, N/M = 2⁶, 2⁷; c₀ recovery for l = 0.6.
    pub fn desk() -> Self {
        TablesConfig {
            table1: vec![(0.1, 96, 64), (0.1, 96, 128)],
            table2: vec![(0.1, 48, 64)],
            table3: vec![(0.6, 502), (0.6, 1002), (0.6, 2002)],
            rho: 0.5,
            samples: 1260,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ErrorTables {
    pub table1: Vec<Table1Cell>,
    pub table2: Vec<Table2Cell>,
    pub table3: Vec<Table3Cell>,
}

pub fn error_tables(cfg: &TablesConfig) -> Result<ErrorTables> {
    let mut out = ErrorTables::default();
    for &(l, m, nps) in &cfg.table1 {
        out.table1.push(table1_cell(l, m, nps, cfg.rho)?);
    }
    for &(l, m, nps) in &cfg.table2 {
        out.table2.push(table2_cell(l, m, nps, cfg.samples, cfg.rho)?);
    }
    for &(l, q) in &cfg.table3 {
        out.table3.push(table3_cell(l, q)?);
    }
    Ok(out)
}
