//! Planar l-polygons: initial data, the algebraic solution at rational times and
//! centre-of-mass computations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{corner_coefficients, gcd, l_q};
use crate::minkowski::{transition_matrix, HypRotation, MinkVec3, ETA};

/// Frames are re-orthonormalized after this many corner products.
pub const REORTHO_EVERY: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    /// Hyperbolic angle at each corner.
    pub l: f64,
    /// Number of sides kept in the truncated polygon (even).
    pub m: usize,
}

impl PolygonSpec {
    pub fn new(l: f64, m: usize) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidArgument(format!("l = {l} must be positive and finite")));
        }
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("M = {m} must be even and at least 2")));
        }
        Ok(PolygonSpec { l, m })
    }

    /// Total length L = l·M.
    pub fn length(&self) -> f64 {
        self.l * self.m as f64
    }

    pub fn c0(&self) -> f64 {
        c0_of_l(self.l)
    }

    /// Time period l²/2π.
    pub fn period(&self) -> f64 {
        self.l * self.l / (2.0 * PI)
    }

    /// Tangent on side n, i.e. on (n l, (n+1) l).
    pub fn side_tangent(&self, n: i64) -> MinkVec3 {
        let a = self.l * (0.5 + n as f64);
        MinkVec3::new(a.cosh(), a.sinh(), 0.0)
    }

    /// Vertex X(n l, 0).
    pub fn vertex(&self, n: i64) -> MinkVec3 {
        let h = 0.5 * self.l;
        let k = h / h.sinh();
        let s = self.l * n as f64;
        MinkVec3::new(k * s.sinh(), k * s.cosh(), 0.0)
    }
}

/// c₀ = √((2/π) ln cosh(l/2)).
pub fn c0_of_l(l: f64) -> f64 {
    let lnc = (2.0 * (0.25 * l).sinh().powi(2)).ln_1p();
    (2.0 / PI * lnc).sqrt()
}

/// Vertical speed of the centre of mass, −ln(1 − tanh²(l/2)) / ((l/2) tanh(l/2)).
pub fn c_l(l: f64) -> f64 {
    let h = 0.5 * l;
    let th = h.tanh();
    // −ln(1 − tanh²) = 2 ln cosh
    let lnc = (2.0 * (0.5 * h).sinh().powi(2)).ln_1p();
    2.0 * lnc / (h * th)
}

/// Same quantity written as 4 ln cosh(l/2) / (l √(1 − sech²(l/2))).
pub fn c_l_alt(l: f64) -> f64 {
    let h = 0.5 * l;
    let ch = h.cosh();
    let sech = 1.0 / ch;
    // cosh − 1 and 1 − sech without cancellation
    let chm1 = 2.0 * (0.5 * h).sinh().powi(2);
    let one_minus_sech = chm1 / ch;
    4.0 * chm1.ln_1p() / (l * (one_minus_sech * (1.0 + sech)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalTime {
    pub p: i64,
    pub q: i64,
}

impl RationalTime {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidArgument(format!("q = {q} must be positive")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(RationalTime { p, q })
    }

    /// Reduces n/d to lowest terms.
    pub fn reduced(n: i64, d: i64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidArgument(format!("denominator {d} must be positive")));
        }
        let g = gcd(n, d).max(1);
        RationalTime::new(n / g, d / g)
    }

    /// t_pq = (l²/2π)(p/q).
    pub fn value(&self, l: f64) -> f64 {
        l * l / (2.0 * PI) * self.p as f64 / self.q as f64
    }
}

/// Stacked frame with rows T, e₁, e₂.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoFrame {
    pub t: MinkVec3,
    pub e1: MinkVec3,
    pub e2: MinkVec3,
}

impl OrthoFrame {
    pub const IDENTITY: OrthoFrame = OrthoFrame { t: MinkVec3::E1, e1: MinkVec3::E2, e2: MinkVec3::E3 };

    /// Left multiplication of the stacked frame by `h`: rows mix among themselves.
    pub fn transported(&self, h: &HypRotation) -> OrthoFrame {
        let m = h.matrix();
        let rows = [self.t, self.e1, self.e2];
        let mix = |i: usize| rows[0] * m[i][0] + rows[1] * m[i][1] + rows[2] * m[i][2];
        OrthoFrame { t: mix(0), e1: mix(1), e2: mix(2) }
    }

    /// Applies a rotation to every row vector.
    pub fn rotated(&self, r: &HypRotation) -> OrthoFrame {
        OrthoFrame { t: r.apply(self.t), e1: r.apply(self.e1), e2: r.apply(self.e2) }
    }

    /// Largest deviation of the Gram matrix from diag(−1, 1, 1).
    pub fn defect(&self) -> f64 {
        let rows = [self.t, self.e1, self.e2];
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { ETA[i] } else { 0.0 };
                d = d.max((rows[i].dot(rows[j]) - want).abs());
            }
        }
        d
    }

    /// Minkowski Gram–Schmidt starting from T.
    pub fn reorthonormalized(&self) -> OrthoFrame {
        let t = self.t / self.t.norm();
        let e1 = self.e1 + t * self.e1.dot(t);
        let e1 = e1 / e1.norm();
        let e2 = self.e2 + t * self.e2.dot(t) - e1 * self.e2.dot(e1);
        let e2 = e2 / e2.norm();
        OrthoFrame { t, e1, e2 }
    }
}

/// Sampled curve and tangent on a uniform arclength grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonState {
    pub s: Vec<f64>,
    pub x: Vec<MinkVec3>,
    pub tangent: Vec<MinkVec3>,
    pub t: f64,
}

/// Piecewise constant initial tangent. At a vertex the value to the right is
/// returned, except at s = L/2 where only the left side exists.
pub fn initial_tangent(spec: &PolygonSpec, s: f64) -> Result<MinkVec3> {
    let half = 0.5 * spec.length();
    if !(s >= -half - 1e-12 && s <= half + 1e-12) {
        return Err(Error::InvalidArgument(format!("s = {s} outside [−L/2, L/2]")));
    }
    let m2 = (spec.m / 2) as i64;
    let n = ((s / spec.l).floor() as i64).clamp(-m2, m2 - 1);
    Ok(spec.side_tangent(n))
}

/// Vertices X(n l, 0) for n = −M/2..=M/2.
pub fn initial_vertices(spec: &PolygonSpec) -> Vec<MinkVec3> {
    let m2 = (spec.m / 2) as i64;
    (-m2..=m2).map(|n| spec.vertex(n)).collect()
}

/// Initial polygon sampled with `nodes_per_side` subintervals per side. Node
/// tangents are the one-sided side tangents (right side, left at the last node).
pub fn initial_curve(spec: &PolygonSpec, nodes_per_side: usize) -> Result<PolygonState> {
    if nodes_per_side == 0 {
        return Err(Error::InvalidArgument("nodes_per_side must be positive".into()));
    }
    let n = spec.m * nodes_per_side;
    let half = 0.5 * spec.length();
    let ds = spec.length() / n as f64;
    let m2 = (spec.m / 2) as i64;
    let mut s = Vec::with_capacity(n + 1);
    let mut x = Vec::with_capacity(n + 1);
    let mut tangent = Vec::with_capacity(n + 1);
    for j in 0..=n {
        s.push(-half + j as f64 * ds);
        let side = (j / nodes_per_side) as i64 - m2;
        let side = side.min(m2 - 1);
        let frac = (j - ((side + m2) as usize) * nodes_per_side) as f64 / nodes_per_side as f64;
        let (a, b) = (spec.vertex(side), spec.vertex(side + 1));
        x.push(a + (b - a) * frac);
        tangent.push(spec.side_tangent(side));
    }
    Ok(PolygonState { s, x, tangent, t: 0.0 })
}

/// Unaligned frames after each corner and the vertices X̃, both indexed by
/// k = 0..=Mq (corner k sits at s_k = −L/2 + k l/q).
pub fn algebraic_frames(spec: &PolygonSpec, time: RationalTime) -> Result<(Vec<OrthoFrame>, Vec<MinkVec3>)> {
    let q = time.q;
    let coeffs = corner_coefficients(time.p, q, spec.l)?;
    let lq = l_q(spec.l, q);
    let h: Vec<Option<HypRotation>> =
        coeffs.iter().map(|c| (!c.vanishing).then(|| transition_matrix(c.theta, lq))).collect();
    let corners = spec.m * q as usize;
    let step = spec.l / q as f64;
    // the first corner at −L/2 has residue (−Mq/2) mod q = 0 since M is even
    let mut frame = OrthoFrame::IDENTITY;
    let mut frames = Vec::with_capacity(corners + 1);
    let mut x = Vec::with_capacity(corners + 1);
    let mut pos = MinkVec3::ZERO;
    x.push(pos);
    for k in 0..=corners {
        if let Some(hm) = &h[k % q as usize] {
            frame = frame.transported(hm);
        }
        if k > 0 && k % REORTHO_EVERY == 0 {
            frame = frame.reorthonormalized();
        }
        frames.push(frame);
        if k < corners {
            pos += frame.t * step;
            x.push(pos);
        }
    }
    Ok((frames, x))
}

/// Algebraic solution at a rational time, rotated and translated into the
/// orientation of the initial polygon.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraicSolution {
    pub spec: PolygonSpec,
    pub time: RationalTime,
    /// Corner positions s_k, k = 0..=Mq.
    pub s: Vec<f64>,
    /// Vertices X(s_k).
    pub x: Vec<MinkVec3>,
    /// Frames just after each corner; `frames[k].t` = T(s_k⁺).
    pub frames: Vec<OrthoFrame>,
    /// T(−L/2⁻), the image of the starting frame's tangent.
    pub tangent_before: MinkVec3,
    /// The aligning rotation.
    pub rotation: HypRotation,
    /// Constant removed from X₃ so that its mean over one period vanishes.
    pub vertical_offset: f64,
}

impl AlgebraicSolution {
    pub fn corners(&self) -> usize {
        self.x.len() - 1
    }

    /// Index of the vertex at s = 0.
    pub fn center(&self) -> usize {
        self.corners() / 2
    }

    /// X(0, t).
    pub fn corner_point(&self) -> MinkVec3 {
        self.x[self.center()]
    }

    /// T(s_k⁻).
    pub fn tangent_left(&self, k: usize) -> MinkVec3 {
        if k == 0 {
            self.tangent_before
        } else {
            self.frames[k - 1].t
        }
    }

    /// Linear interpolation of the vertices at arclength s.
    pub fn sample(&self, s: f64) -> MinkVec3 {
        let h = self.s[1] - self.s[0];
        let u = ((s - self.s[0]) / h).clamp(0.0, self.corners() as f64);
        let k = (u.floor() as usize).min(self.corners() - 1);
        let f = u - k as f64;
        self.x[k] + (self.x[k + 1] - self.x[k]) * f
    }

    /// Rate of change of the centre of mass,
    /// (1/L)(l_q / sinh l_q) Σ_k T(s_k⁻) ∧ T(s_k⁺), end corners weighted by 1/2.
    pub fn com_rate(&self) -> MinkVec3 {
        let n = self.corners();
        let lq = l_q(self.spec.l, self.time.q);
        let mut sum = MinkVec3::ZERO;
        for k in 0..=n {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            sum += self.tangent_left(k).cross(self.frames[k].t) * w;
        }
        sum * (lq / lq.sinh() / self.spec.length())
    }
}

/// Aligns frames and vertices returned by [`algebraic_frames`].
///
/// The rotation maps u = w⁺ ∧ w⁻ to the x₃ axis and the symmetrized chord
/// w⁺ − w⁻ to (1, 0, 0), where w± are the unit chords from X̃(0) to X̃(±l).
/// It is built directly from the orthonormal basis (w, u ∧ w, u), which gives
/// the same matrix as composing the two separate rotations L₂·L₁.
/// The translation makes X(l) the boost of X(0) by angle l about x₃, and puts
/// the one-period mean of X₃ at zero.
pub fn align(
    spec: &PolygonSpec,
    time: RationalTime,
    frames: Vec<OrthoFrame>,
    vertices: Vec<MinkVec3>,
) -> Result<AlgebraicSolution> {
    let q = time.q as usize;
    let n = vertices.len() - 1;
    if n != spec.m * q || frames.len() != n + 1 {
        return Err(Error::InvalidArgument("frames/vertices do not match the polygon".into()));
    }
    let c = n / 2;
    let x0 = vertices[c];
    let wp = (vertices[c + q] - x0).normalized()?;
    let wm = (vertices[c - q] - x0).normalized()?;
    let u = wp.cross(wm);
    if u.euclid() < 1e-14 {
        return Err(Error::Degenerate("w⁺ and w⁻ are parallel".into()));
    }
    let u = u.normalized()?;
    let w = (wp - wm).normalized()?;
    let mut e1 = u.cross(w).normalized()?;
    let det = |a: MinkVec3, b: MinkVec3, c: MinkVec3| {
        a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - b.x1 * (a.x2 * c.x3 - a.x3 * c.x2) + c.x1 * (a.x2 * b.x3 - a.x3 * b.x2)
    };
    if det(w, e1, u) < 0.0 {
        e1 = -e1;
    }
    // L = η Bᵀ η with B = [w e1 u] as columns
    let cols = [w, e1, u];
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = ETA[i] * cols[i].to_array()[j] * ETA[j];
        }
    }
    let rot = HypRotation::from_matrix_unchecked(m);

    let mut x: Vec<MinkVec3> = vertices.iter().map(|v| rot.apply(*v)).collect();
    let frames: Vec<OrthoFrame> = frames.iter().map(|f| f.rotated(&rot)).collect();

    // translation in the x1-x2 plane from X(l) = R_l X(0)
    let r = HypRotation::boost_z(spec.l).matrix();
    let rhs = x[c + q] - HypRotation::boost_z(spec.l).apply(x[c]);
    let (a, b, cc, d) = (r[0][0] - 1.0, r[0][1], r[1][0], r[1][1] - 1.0);
    let dt = a * d - b * cc;
    let d1 = (d * rhs.x1 - b * rhs.x2) / dt;
    let d2 = (a * rhs.x2 - cc * rhs.x1) / dt;
    let seg = &x[c..=c + q];
    let mean3 = seg.windows(2).map(|p| 0.5 * (p[0].x3 + p[1].x3)).sum::<f64>() / q as f64;
    let shift = MinkVec3::new(d1, d2, -mean3);
    for v in x.iter_mut() {
        *v += shift;
    }

    let half = 0.5 * spec.length();
    let step = spec.l / q as f64;
    let s = (0..=n).map(|k| -half + k as f64 * step).collect();
    Ok(AlgebraicSolution {
        spec: *spec,
        time,
        s,
        x,
        frames,
        tangent_before: rot.apply(MinkVec3::E1),
        rotation: rot,
        vertical_offset: mean3,
    })
}

/// Frames, alignment and translation in one call.
pub fn algebraic_solution(spec: &PolygonSpec, time: RationalTime) -> Result<AlgebraicSolution> {
    let (f, x) = algebraic_frames(spec, time)?;
    align(spec, time, f, x)
}

/// Trimmed mean of X over s ∈ [−L/2 + 2rl, L/2 − 2rl] by the trapezoid rule.
pub fn center_of_mass_numeric(spec: &PolygonSpec, state: &PolygonState, r: usize) -> Result<MinkVec3> {
    if r + 1 > spec.m / 4 && r != 0 {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds M/4 − 1")));
    }
    let n = state.x.len() - 1;
    let per_side = n / spec.m;
    let (lo, hi) = (2 * r * per_side, n - 2 * r * per_side);
    let mut sum = MinkVec3::ZERO;
    for j in lo..=hi {
        let w = if j == lo || j == hi { 0.5 } else { 1.0 };
        sum += state.x[j] * w;
    }
    Ok(sum / (hi - lo) as f64)
}

/// Centre-of-mass velocity at t_pq; the third component is exact from a
/// single period because boosts about x₃ leave it unchanged.
pub fn com_rate(spec: &PolygonSpec, time: RationalTime) -> Result<MinkVec3> {
    Ok(algebraic_solution(spec, time)?.com_rate())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComSample {
    pub t: f64,
    pub rate: MinkVec3,
    /// Time integral of the rate from 0 to t.
    pub position: MinkVec3,
}

/// Centre-of-mass velocity at the Q+1 rational times n T_f / Q and its
/// cumulative time integral (Simpson, with a 3/8 panel at odd indices).
pub fn center_of_mass_algebraic(spec: &PolygonSpec, subdivisions: usize) -> Result<Vec<ComSample>> {
    if subdivisions == 0 {
        return Err(Error::InvalidArgument("subdivisions must be positive".into()));
    }
    let qq = subdivisions as i64;
    let pool = crate::thread_pool();
    let rates: Vec<Result<MinkVec3>> = pool.install(|| {
        use rayon::prelude::*;
        (0..=qq).into_par_iter().map(|n| com_rate(spec, RationalTime::reduced(n, qq)?)).collect()
    });
    let rates = rates.into_iter().collect::<Result<Vec<_>>>()?;
    let h = spec.period() / qq as f64;
    let pos = cumulative_simpson(&rates, h);
    Ok(rates
        .into_iter()
        .zip(pos)
        .enumerate()
        .map(|(n, (rate, position))| ComSample { t: n as f64 * h, rate, position })
        .collect())
}

/// Cumulative integral of uniformly spaced samples. Even indices use composite
/// Simpson; odd indices finish with a Simpson 3/8 panel (trapezoid for n = 1).
pub fn cumulative_simpson(y: &[MinkVec3], h: f64) -> Vec<MinkVec3> {
    let mut out = vec![MinkVec3::ZERO; y.len()];
    let mut even = MinkVec3::ZERO;
    for n in 1..y.len() {
        if n % 2 == 0 {
            even += (y[n - 2] + y[n - 1] * 4.0 + y[n]) * (h / 3.0);
            out[n] = even;
        } else if n == 1 {
            out[n] = (y[0] + y[1]) * (0.5 * h);
        } else {
            let base = out[n - 3];
            out[n] = base + (y[n - 3] + y[n - 2] * 3.0 + y[n - 1] * 3.0 + y[n]) * (3.0 * h / 8.0);
        }
    }
    out
}
