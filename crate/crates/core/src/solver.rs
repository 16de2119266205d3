//! Method-of-lines integration of T_t = T ∧ T_ss, X_t = T ∧ T_s with
//! fourth-order finite differences, classical RK4, Dirichlet data on T and
//! projection of T back onto H² after every step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::MinkVec3;
use crate::polygon::{initial_curve, PolygonSpec};

/// Largest Δt/Δs² accepted by [`TimeStepper::new`].
pub const RHO_MAX: f64 = 0.53;
/// Default Δt/Δs² for production runs.
pub const RHO_DEFAULT: f64 = 0.5;
/// Any component beyond this magnitude aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Number of subintervals.
    pub n: usize,
    pub nodes_per_side: usize,
    pub s0: f64,
    pub ds: f64,
}

impl Grid {
    pub fn new(spec: &PolygonSpec, nodes_per_side: usize) -> Result<Grid> {
        if nodes_per_side == 0 {
            return Err(Error::InvalidArgument("nodes per side must be positive".into()));
        }
        let n = spec.m * nodes_per_side;
        if n < 6 {
            return Err(Error::InvalidArgument(format!("N = {n} is too small for the stencils")));
        }
        Ok(Grid { n, nodes_per_side, s0: -0.5 * spec.length(), ds: spec.length() / n as f64 })
    }

    pub fn s(&self, j: usize) -> f64 {
        self.s0 + j as f64 * self.ds
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.s(j)).collect()
    }
}

/// Finite-difference weights for derivatives of order 0..=m at `z` on nodes `x`.
/// Returns `w[k][i]`, the weight of `x[i]` in the k-th derivative.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Banded first/second derivative operator: five-point central stencils inside,
/// one-sided stencils (5 points for D1, 6 for D2) at the two nodes next to each end.
#[derive(Clone, Debug, PartialEq)]
pub struct FdOperator {
    pub n: usize,
    pub ds: f64,
    d1_mid: [f64; 5],
    d2_mid: [f64; 5],
    /// Rows for nodes 0 and 1, acting on nodes 0..5 / 0..6.
    d1_left: [[f64; 5]; 2],
    d2_left: [[f64; 6]; 2],
}

impl FdOperator {
    pub fn new(grid: &Grid) -> FdOperator {
        let h = grid.ds;
        let mid: Vec<f64> = (-2..=2).map(|k| k as f64).collect();
        let w = fornberg_weights(0.0, &mid, 2);
        let mut d1_mid = [0.0; 5];
        let mut d2_mid = [0.0; 5];
        for i in 0..5 {
            d1_mid[i] = w[1][i] / h;
            d2_mid[i] = w[2][i] / (h * h);
        }
        let p5: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let p6: Vec<f64> = (0..6).map(|k| k as f64).collect();
        let mut d1_left = [[0.0; 5]; 2];
        let mut d2_left = [[0.0; 6]; 2];
        for r in 0..2 {
            let w5 = fornberg_weights(r as f64, &p5, 1);
            let w6 = fornberg_weights(r as f64, &p6, 2);
            for i in 0..5 {
                d1_left[r][i] = w5[1][i] / h;
            }
            for i in 0..6 {
                d2_left[r][i] = w6[2][i] / (h * h);
            }
        }
        FdOperator { n: grid.n, ds: h, d1_mid, d2_mid, d1_left, d2_left }
    }

    /// (D1 f)_j and (D2 f)_j for a scalar or vector field given as a closure.
    #[inline]
    fn apply_at<V, F>(&self, j: usize, f: F) -> (V, V)
    where
        V: Copy + std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V>,
        F: Fn(usize) -> V,
    {
        let n = self.n;
        if j >= 2 && j + 2 <= n {
            let a = [f(j - 2), f(j - 1), f(j), f(j + 1), f(j + 2)];
            let mut d1 = a[0] * self.d1_mid[0];
            let mut d2 = a[0] * self.d2_mid[0];
            for i in 1..5 {
                d1 = d1 + a[i] * self.d1_mid[i];
                d2 = d2 + a[i] * self.d2_mid[i];
            }
            (d1, d2)
        } else if j < 2 {
            let mut d1 = f(0) * self.d1_left[j][0];
            let mut d2 = f(0) * self.d2_left[j][0];
            for i in 1..6 {
                if i < 5 {
                    d1 = d1 + f(i) * self.d1_left[j][i];
                }
                d2 = d2 + f(i) * self.d2_left[j][i];
            }
            (d1, d2)
        } else {
            // mirror of the left rows: D1 changes sign, D2 does not
            let r = n - j;
            let mut d1 = f(n) * -self.d1_left[r][0];
            let mut d2 = f(n) * self.d2_left[r][0];
            for i in 1..6 {
                if i < 5 {
                    d1 = d1 + f(n - i) * -self.d1_left[r][i];
                }
                d2 = d2 + f(n - i) * self.d2_left[r][i];
            }
            (d1, d2)
        }
    }

    /// First and second derivatives of a scalar field.
    pub fn derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (0..=self.n).map(|j| self.apply_at(j, |i| f[i])).unzip()
    }
}

/// Time step control. ρ = Δt/Δs².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeStepper {
    pub dt: f64,
    pub steps: usize,
    pub rho: f64,
}

impl TimeStepper {
    /// `steps` equal steps over `horizon`, rejecting ρ above [`RHO_MAX`].
    pub fn new(grid: &Grid, horizon: f64, steps: usize) -> Result<TimeStepper> {
        let st = TimeStepper::new_unchecked(grid, horizon, steps)?;
        if st.rho > RHO_MAX {
            return Err(Error::InvalidArgument(format!(
                "Δt/Δs² = {:.4} exceeds the stability bound {RHO_MAX}",
                st.rho
            )));
        }
        Ok(st)
    }

    /// Same as [`TimeStepper::new`] without the stability check (for scans).
    pub fn new_unchecked(grid: &Grid, horizon: f64, steps: usize) -> Result<TimeStepper> {
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon {horizon} must be ≥ 0")));
        }
        if steps == 0 {
            return Ok(TimeStepper { dt: 0.0, steps: 0, rho: 0.0 });
        }
        let dt = horizon / steps as f64;
        Ok(TimeStepper { dt, steps, rho: dt / (grid.ds * grid.ds) })
    }

    /// Smallest step count with ρ ≤ `rho` that is a multiple of `multiple`.
    pub fn from_rho(grid: &Grid, horizon: f64, rho: f64, multiple: usize) -> Result<TimeStepper> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!("rho = {rho} must be positive")));
        }
        let mult = multiple.max(1);
        let min_steps = (horizon / (rho * grid.ds * grid.ds)).ceil() as usize;
        let steps = min_steps.div_ceil(mult).max(1) * mult;
        TimeStepper::new_unchecked(grid, horizon, steps)
    }
}

/// Node tangents from the piecewise constant side tangents: averages of
/// neighbouring segments, one-sided at the ends, projected onto H².
pub fn node_tangent_init(spec: &PolygonSpec, grid: &Grid) -> Vec<MinkVec3> {
    let m2 = (spec.m / 2) as i64;
    let seg: Vec<MinkVec3> = (0..grid.n).map(|j| spec.side_tangent((j / grid.nodes_per_side) as i64 - m2)).collect();
    let mut t = Vec::with_capacity(grid.n + 1);
    t.push(seg[0]);
    for j in 0..grid.n - 1 {
        t.push((seg[j] + seg[j + 1]) * 0.5);
    }
    t.push(seg[grid.n - 1]);
    t.into_iter().map(project_h2).map(|r| r.unwrap_or(MinkVec3::ZERO)).collect()
}

/// Radial projection onto H²: T / √(T₁² − T₂² − T₃²).
#[inline]
pub fn project_h2(t: MinkVec3) -> Option<MinkVec3> {
    let r = -t.norm2();
    (r > 0.0).then(|| t / r.sqrt())
}

/// Right-hand side: dT_j = T_j ∧ (T_ss)_j (zero at both ends), dX_j = T_j ∧ (T_s)_j.
pub fn rhs(t: &[MinkVec3], fd: &FdOperator, dt_out: &mut [MinkVec3], dx_out: &mut [MinkVec3]) {
    let n = fd.n;
    for j in 0..=n {
        let (d1, d2) = fd.apply_at(j, |i| t[i]);
        dx_out[j] = t[j].cross(d1);
        dt_out[j] = if j == 0 || j == n { MinkVec3::ZERO } else { t[j].cross(d2) };
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverState {
    pub t: f64,
    pub step: usize,
    pub x: Vec<MinkVec3>,
    pub tangent: Vec<MinkVec3>,
    /// Largest | |T_j|₀² + 1 | seen before projection in the last step.
    pub drift: f64,
}

impl SolverState {
    /// Initial polygon on the grid with averaged node tangents.
    pub fn initial(spec: &PolygonSpec, grid: &Grid) -> Result<SolverState> {
        let st = initial_curve(spec, grid.nodes_per_side)?;
        Ok(SolverState { t: 0.0, step: 0, x: st.x, tangent: node_tangent_init(spec, grid), drift: 0.0 })
    }

    pub fn as_polygon_state(&self, grid: &Grid) -> crate::polygon::PolygonState {
        crate::polygon::PolygonState { s: grid.nodes(), x: self.x.clone(), tangent: self.tangent.clone(), t: self.t }
    }
}

/// Scratch buffers for RK4.
pub struct Workspace {
    kt: [Vec<MinkVec3>; 4],
    kx: [Vec<MinkVec3>; 4],
    tmp: Vec<MinkVec3>,
}

impl Workspace {
    pub fn new(n: usize) -> Workspace {
        let v = || vec![MinkVec3::ZERO; n + 1];
        Workspace { kt: [v(), v(), v(), v()], kx: [v(), v(), v(), v()], tmp: v() }
    }
}

/// One classical RK4 step followed by projection of interior tangents onto H².
/// The end values of T are left untouched (Dirichlet data).
pub fn step_rk4(state: &mut SolverState, fd: &FdOperator, dt: f64, ws: &mut Workspace) -> Result<()> {
    let n = fd.n;
    let Workspace { kt, kx, tmp } = ws;
    let coef = [0.0, 0.5, 0.5, 1.0];
    for s in 0..4 {
        if s > 0 {
            let c = coef[s] * dt;
            for j in 0..=n {
                tmp[j] = state.tangent[j] + kt[s - 1][j] * c;
            }
        }
        let src: &[MinkVec3] = if s == 0 { &state.tangent } else { tmp };
        rhs(src, fd, &mut kt[s], &mut kx[s]);
    }
    let w = dt / 6.0;
    let mut drift = 0.0f64;
    for j in 0..=n {
        state.x[j] += (kx[0][j] + kx[1][j] * 2.0 + kx[2][j] * 2.0 + kx[3][j]) * w;
        if j == 0 || j == n {
            continue;
        }
        let t = state.tangent[j] + (kt[0][j] + kt[1][j] * 2.0 + kt[2][j] * 2.0 + kt[3][j]) * w;
        drift = drift.max((t.norm2() + 1.0).abs());
        state.tangent[j] = match project_h2(t) {
            Some(p) if p.max_abs() < BLOWUP_LIMIT => p,
            _ => {
                return Err(Error::BlowUp {
                    step: state.step + 1,
                    t: state.t + dt,
                    detail: format!("tangent at node {j} left the hyperboloid: {t:?}"),
                })
            }
        };
        if !state.x[j].is_finite() || state.x[j].max_abs() > BLOWUP_LIMIT {
            return Err(Error::BlowUp {
                step: state.step + 1,
                t: state.t + dt,
                detail: format!("position at node {j} diverged"),
            });
        }
    }
    state.drift = drift;
    state.step += 1;
    state.t = state.step as f64 * dt;
    Ok(())
}

/// Receives the state at scheduled steps. Must not mutate solver state.
pub trait Observer {
    /// Steps at which [`Observer::observe`] is called.
    fn steps(&self, stepper: &TimeStepper) -> Vec<usize>;
    fn observe(&mut self, state: &SolverState) -> Result<()>;
}

/// Converts requested times to the nearest step indices.
pub fn snap_times(times: &[f64], stepper: &TimeStepper) -> Vec<usize> {
    times
        .iter()
        .map(|&t| if stepper.dt == 0.0 { 0 } else { ((t / stepper.dt).round().max(0.0) as usize).min(stepper.steps) })
        .collect()
}

/// Calls a closure every `every` steps (and at the last step).
pub struct EveryNth<F> {
    pub every: usize,
    pub f: F,
}

impl<F: FnMut(&SolverState) -> Result<()>> Observer for EveryNth<F> {
    fn steps(&self, st: &TimeStepper) -> Vec<usize> {
        let e = self.every.max(1);
        let mut v: Vec<usize> = (0..=st.steps).step_by(e).collect();
        if v.last() != Some(&st.steps) {
            v.push(st.steps);
        }
        v
    }
    fn observe(&mut self, state: &SolverState) -> Result<()> {
        (self.f)(state)
    }
}

/// Calls a closure at given times, snapped to the nearest step.
pub struct AtTimes<F> {
    pub times: Vec<f64>,
    pub f: F,
}

impl<F: FnMut(&SolverState) -> Result<()>> Observer for AtTimes<F> {
    fn steps(&self, st: &TimeStepper) -> Vec<usize> {
        snap_times(&self.times, st)
    }
    fn observe(&mut self, state: &SolverState) -> Result<()> {
        (self.f)(state)
    }
}

/// Integrates from the initial polygon for `stepper.steps` steps, calling the
/// observers at their scheduled steps. Returns the final state.
pub fn run(
    spec: &PolygonSpec,
    grid: &Grid,
    stepper: &TimeStepper,
    observers: &mut [&mut dyn Observer],
) -> Result<SolverState> {
    if grid.n != spec.m * grid.nodes_per_side {
        return Err(Error::InvalidArgument("grid does not match the polygon".into()));
    }
    let fd = FdOperator::new(grid);
    let mut state = SolverState::initial(spec, grid)?;
    let mut schedule: Vec<Vec<usize>> = observers
        .iter()
        .map(|o| {
            let mut s = o.steps(stepper);
            s.sort_unstable();
            s.dedup();
            s.reverse();
            s
        })
        .collect();
    let mut ws = Workspace::new(grid.n);
    let notify =
        |state: &SolverState, schedule: &mut Vec<Vec<usize>>, observers: &mut [&mut dyn Observer]| -> Result<()> {
            for (o, s) in observers.iter_mut().zip(schedule.iter_mut()) {
                while s.last() == Some(&state.step) {
                    s.pop();
                    o.observe(state)?;
                }
            }
            Ok(())
        };
    notify(&state, &mut schedule, observers)?;
    for _ in 0..stepper.steps {
        step_rk4(&mut state, &fd, stepper.dt, &mut ws)?;
        notify(&state, &mut schedule, observers)?;
    }
    Ok(state)
}
