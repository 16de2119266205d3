//! One-corner self-similar solutions: curvature c₀/√t, torsion s/2t.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{corner_coefficients, l_q};
use crate::minkowski::{hyp_angle, rotation_about_axis, transition_matrix, HypRotation, MinkVec3};
use crate::polygon::{c0_of_l, PolygonSpec, RationalTime};
use crate::special::gamma;

/// Default local error tolerance of the profile integrator.
pub const PROFILE_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 20_000_000;

/// A1 = e^{π c₀²/2}.
pub fn a1(c0: f64) -> f64 {
    (PI * c0 * c0 / 2.0).exp()
}

/// (A2, A3) from Υ = e^{iπ/4} Γ(1 − i c₀²/4) Γ(1/2 + i c₀²/4).
pub fn a2_a3(c0: f64) -> Result<(f64, f64)> {
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::InvalidArgument(format!("c0 = {c0} must be positive")));
    }
    let y = 0.25 * c0 * c0;
    let ups = Complex64::from_polar(1.0, FRAC_PI_4) * gamma(Complex64::new(1.0, -y)) * gamma(Complex64::new(0.5, y));
    let pre = 2.0 / (PI * c0) * (PI * y).exp() * (PI * c0 * c0 / 2.0).sinh();
    Ok((pre * ups.re, pre * ups.im))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTangent {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AsymptoticTangent {
    pub fn new(c0: f64) -> Result<Self> {
        let (a2, a3) = a2_a3(c0)?;
        Ok(AsymptoticTangent { a1: a1(c0), a2, a3 })
    }

    /// A⁺ = (A1, A2, A3), the limit of T(s) as s → +∞.
    pub fn plus(&self) -> MinkVec3 {
        MinkVec3::new(self.a1, self.a2, self.a3)
    }

    /// A⁻ = (A1, −A2, −A3).
    pub fn minus(&self) -> MinkVec3 {
        MinkVec3::new(self.a1, -self.a2, -self.a3)
    }
}

/// Integrated profile X(s, t) with its Frenet frame on a symmetric s grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfSimilarProfile {
    pub c0: f64,
    pub t: f64,
    pub s: Vec<f64>,
    pub x: Vec<MinkVec3>,
    pub tangent: Vec<MinkVec3>,
    pub normal: Vec<MinkVec3>,
    pub binormal: Vec<MinkVec3>,
    /// ∫ X_rot,3 ds over [−s_max, s_max], accumulated by the integrator.
    pub x3rot_integral: f64,
    pub steps: usize,
}

impl SelfSimilarProfile {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Estimate of lim T as s → ±∞ from the sample at `i`: T + 2c₀ b/s removes
    /// the leading oscillation, which has amplitude 2c₀/|s|.
    pub fn tangent_limit(&self, i: usize) -> MinkVec3 {
        let s = self.s[i] / self.t.sqrt();
        self.tangent[i] + self.binormal[i] * (2.0 * self.c0 / s)
    }

    /// Largest deviation of the frame from Minkowski orthonormality.
    pub fn frame_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.len() {
            let (t, n, b) = (self.tangent[i], self.normal[i], self.binormal[i]);
            let g = [
                (t.norm2() + 1.0).abs(),
                (n.norm2() - 1.0).abs(),
                (b.norm2() - 1.0).abs(),
                t.dot(n).abs(),
                t.dot(b).abs(),
                n.dot(b).abs(),
            ];
            d = g.iter().fold(d, |a, x| a.max(*x));
        }
        d
    }
}

type State = [f64; 13];

fn vec_at(y: &State, k: usize) -> MinkVec3 {
    MinkVec3::new(y[3 * k], y[3 * k + 1], y[3 * k + 2])
}

/// Frenet system X' = T, T' = κ n, n' = κ T + τ b, b' = −τ n, with
/// κ = c₀/√t, τ = s/2t; the last slot integrates (A2 X3 − A3 X2)/√(A2²+A3²).
fn deriv(s: f64, y: &State, kappa: f64, inv2t: f64, rot: (f64, f64)) -> State {
    let tau = s * inv2t;
    let mut d = [0.0; 13];
    for i in 0..3 {
        let (t, n, b) = (y[3 + i], y[6 + i], y[9 + i]);
        d[i] = t;
        d[3 + i] = kappa * n;
        d[6 + i] = kappa * t + tau * b;
        d[9 + i] = -tau * n;
    }
    d[12] = rot.0 * y[2] - rot.1 * y[1];
    d
}

// Dormand–Prince 5(4) coefficients
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Integrates from s = 0 to `s_end` (either sign), recording every `ds_out`.
fn integrate_branch<F: Fn(f64, &State) -> State>(
    f: F,
    y0: State,
    s_end: f64,
    ds_out: f64,
    tol: f64,
) -> Result<(Vec<(f64, State)>, usize)> {
    let dir = s_end.signum();
    let n_out = (s_end.abs() / ds_out).round() as usize;
    let mut out = Vec::with_capacity(n_out + 1);
    out.push((0.0, y0));
    let (mut s, mut y) = (0.0f64, y0);
    let mut h = dir * ds_out.min(1e-3);
    let mut k1 = f(s, &y);
    let mut steps = 0usize;
    for i in 1..=n_out {
        let target = dir * i as f64 * ds_out;
        while (target - s) * dir > 1e-14 {
            if steps >= MAX_STEPS {
                return Err(Error::Tolerance { tol, steps });
            }
            let last = (target - s - h) * dir <= 0.0;
            let hh = if last { target - s } else { h };
            let mut k = [[0.0; 13]; 7];
            k[0] = k1;
            for st in 1..7 {
                let mut yi = y;
                for (j, kj) in k.iter().enumerate().take(st) {
                    let a = A[st][j];
                    if a != 0.0 {
                        for m in 0..13 {
                            yi[m] += hh * a * kj[m];
                        }
                    }
                }
                k[st] = f(s + C[st] * hh, &yi);
                if st == 6 {
                    // yi is the fifth-order solution (FSAL)
                    let mut err = 0.0f64;
                    for m in 0..13 {
                        let mut e = 0.0;
                        for (j, kj) in k.iter().enumerate() {
                            e += E[j] * kj[m];
                        }
                        let sc = tol * (1.0 + y[m].abs().max(yi[m].abs()));
                        err = err.max((hh * e).abs() / sc);
                    }
                    steps += 1;
                    if err <= 1.0 {
                        s = if last { target } else { s + hh };
                        y = yi;
                        k1 = k[6];
                    }
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if !(err <= 1.0) || !last {
                        h = hh * fac;
                    }
                    if !h.is_finite() || h.abs() < 1e-14 {
                        return Err(Error::Tolerance { tol, steps });
                    }
                }
            }
        }
        out.push((s, y));
    }
    Ok((out, steps))
}

/// Profile at time `t`: curvature c₀/√t, torsion s/2t, X(0) = 2c₀√t (0,0,1) and
/// the identity frame at s = 0. Samples every `ds_out` on [−s_max, s_max].
pub fn integrate_profile_at(c0: f64, t: f64, s_max: f64, ds_out: f64, tol: f64) -> Result<SelfSimilarProfile> {
    if !(c0 >= 0.0) || !(t > 0.0) || !(s_max > 0.0) || !(ds_out > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument("c0 ≥ 0, t, s_max, ds_out, tol > 0 required".into()));
    }
    let rot = if c0 > 0.0 {
        let (a2, a3) = a2_a3(c0)?;
        let r = a2.hypot(a3);
        (a2 / r, a3 / r)
    } else {
        (1.0, 0.0)
    };
    let mut y0 = [0.0; 13];
    y0[2] = 2.0 * c0 * t.sqrt();
    y0[3] = 1.0;
    y0[7] = 1.0;
    y0[11] = 1.0;
    let (kappa, inv2t) = (c0 / t.sqrt(), 0.5 / t);
    let f = |s: f64, y: &State| deriv(s, y, kappa, inv2t, rot);
    let (fwd, n1) = integrate_branch(f, y0, s_max, ds_out, tol)?;
    let (bwd, n2) = integrate_branch(f, y0, -s_max, ds_out, tol)?;
    let samples: Vec<(f64, State)> = bwd.into_iter().skip(1).rev().chain(fwd).collect();
    let integral = samples.last().unwrap().1[12] - samples[0].1[12];
    let mut p = SelfSimilarProfile {
        c0,
        t,
        s: Vec::with_capacity(samples.len()),
        x: Vec::with_capacity(samples.len()),
        tangent: Vec::with_capacity(samples.len()),
        normal: Vec::with_capacity(samples.len()),
        binormal: Vec::with_capacity(samples.len()),
        x3rot_integral: integral,
        steps: n1 + n2,
    };
    for (s, y) in samples {
        p.s.push(s);
        p.x.push(vec_at(&y, 0));
        p.tangent.push(vec_at(&y, 1));
        p.normal.push(vec_at(&y, 2));
        p.binormal.push(vec_at(&y, 3));
    }
    Ok(p)
}

/// Profile at t = 1 sampled every 0.01.
pub fn integrate_profile(c0: f64, s_max: f64, tol: f64) -> Result<SelfSimilarProfile> {
    integrate_profile_at(c0, 1.0, s_max, 0.01, tol)
}

/// The rotation taking A⁻, A⁺ to the tangents (cosh(l/2), ∓sinh(l/2), 0) of
/// the polygon sides meeting at s = 0. Built as a rotation taking the bisector
/// of A± to the target bisector followed by a circular rotation about it.
pub fn rotation_k(spec: &PolygonSpec) -> Result<HypRotation> {
    let a = AsymptoticTangent::new(spec.c0())?;
    let h = 0.5 * spec.l;
    let (pp, pm) = (MinkVec3::new(h.cosh(), h.sinh(), 0.0), MinkVec3::new(h.cosh(), -h.sinh(), 0.0));
    let (ap, am) = (a.plus(), a.minus());
    let (bs, bd) = ((ap + am).normalized()?, (pp + pm).normalized()?);
    let pick = |cands: [Result<HypRotation>; 2], score: &dyn Fn(&HypRotation) -> f64| -> Result<HypRotation> {
        let [c1, c2] = cands;
        let (c1, c2) = (c1?, c2?);
        Ok(if score(&c1) <= score(&c2) { c1 } else { c2 })
    };
    let r1 = if (bs - bd).max_abs() < 1e-15 {
        HypRotation::IDENTITY
    } else {
        let axis = bs.cross(bd);
        let ang = hyp_angle(bs, bd)?;
        pick([rotation_about_axis(axis, ang), rotation_about_axis(axis, -ang)], &|r| (r.apply(bs) - bd).max_abs())?
    };
    // circular rotation about the target bisector
    let ap1 = r1.apply(ap);
    let proj = |v: MinkVec3| v + bd * v.dot(bd);
    let (u, w) = (proj(ap1), proj(pp));
    let cos = (u.dot(w) / (u.norm() * w.norm())).clamp(-1.0, 1.0);
    let ang = cos.acos();
    let r2 = pick([rotation_about_axis(bd, ang), rotation_about_axis(bd, -ang)], &|r| (r.apply(ap1) - pp).max_abs())?;
    Ok(r2.compose(&r1))
}

/// Point of the rotated one-corner solution that starts at the vertex X(0, 0):
/// 2c₀√(t/(A2²+A3²)) (0, A3, A2) + X(0, 0).
pub fn x_rot_corner(spec: &PolygonSpec, t: f64) -> Result<MinkVec3> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be ≥ 0")));
    }
    let c0 = spec.c0();
    let (a2, a3) = a2_a3(c0)?;
    let k = 2.0 * c0 * (t / (a2 * a2 + a3 * a3)).sqrt();
    Ok(MinkVec3::new(0.0, k * a3, k * a2) + spec.vertex(0))
}

/// c₀ estimated from the algebraic tangents at s = ±2l/q and t = t_{1,q}:
/// √t |T(2l/q) − T(−2l/q)|₀ / (4l/q). Requires q ≡ 2 (mod 4), for which
/// s = 0 carries no corner; tangents are transported from an identity frame at 0.
pub fn c0_recover(spec: &PolygonSpec, q: i64) -> Result<f64> {
    if q.rem_euclid(4) != 2 {
        return Err(Error::InvalidArgument(format!("q = {q} must be ≡ 2 mod 4")));
    }
    let coeffs = corner_coefficients(1, q, spec.l)?;
    let lq = l_q(spec.l, q);
    let (c1, cm) = (&coeffs[1], &coeffs[(q - 1) as usize]);
    if coeffs[0].vanishing && !c1.vanishing && !cm.vanishing {
        let tp = transition_matrix(c1.theta, lq).row(0);
        let tm = transition_matrix(cm.theta, lq).inverse().row(0);
        let t = RationalTime::new(1, q)?.value(spec.l);
        Ok(t.sqrt() * (tp - tm).norm() / (4.0 * spec.l / q as f64))
    } else {
        Err(Error::Degenerate("unexpected corner pattern near s = 0".into()))
    }
}

/// 2πc₀² / √(1 − e^{−πc₀²}).
pub fn vertical_integral(c0: f64) -> f64 {
    2.0 * PI * c0 * c0 / (-(-PI * c0 * c0).exp_m1()).sqrt()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Size of the neglected oscillatory tail beyond ±s_max.
    pub tail_bound: f64,
}

/// ∫ X_rot,3 ds over [−s_max, s_max] along the integrated profile. The tail is
/// set to zero; its size is bounded by |X_rot,3(±s_max)|·2/s_max.
pub fn vertical_integral_quadrature(c0: f64, s_max: f64, tol: f64) -> Result<QuadratureResult> {
    let p = integrate_profile_at(c0, 1.0, s_max, 0.05, tol)?;
    let (a2, a3) = a2_a3(c0)?;
    let r = a2.hypot(a3);
    let f = |x: MinkVec3| (a2 * x.x3 - a3 * x.x2) / r;
    let ends = f(p.x[0]).abs() + f(*p.x.last().unwrap()).abs();
    Ok(QuadratureResult { value: p.x3rot_integral, tail_bound: ends * 2.0 / s_max })
}

/// c_l written through the vertical integral: 2πc₀² / (l √(1 − e^{−πc₀²})).
pub fn c_l_from_integral(l: f64) -> f64 {
    vertical_integral(c0_of_l(l)) / l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::c_l;

    const C0: f64 = 0.168_012_531_844_667_52;

    #[test]
    fn a1_examples() {
        assert_eq!(a1(0.0), 1.0);
        assert!((c0_of_l(0.6) - C0).abs() < 1e-15);
        assert!((a1(C0) - 0.3f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn unit_closure() {
        for &c0 in &[0.05, C0, 0.5, 1.0] {
            let a = AsymptoticTangent::new(c0).unwrap();
            assert!((a.plus().norm2() + 1.0).abs() < 1e-12, "c0={c0}");
        }
    }

    #[test]
    fn ratio_tends_to_one() {
        let (a2, a3) = a2_a3(1e-3).unwrap();
        assert!((a2 / a3 - 1.0).abs() < 1e-5);
        let mut prev = 1.0;
        for &c0 in &[0.05, 0.1, 0.2, 0.4] {
            let (a2, a3) = a2_a3(c0).unwrap();
            assert!(a2 / a3 > prev);
            prev = a2 / a3;
        }
    }

    #[test]
    fn straight_line_when_c0_zero() {
        let p = integrate_profile_at(0.0, 1.0, 5.0, 0.5, 1e-10).unwrap();
        for (s, t) in p.s.iter().zip(&p.tangent) {
            assert_eq!(*t, MinkVec3::E1);
            let _ = s;
        }
        assert!((p.x.last().unwrap().x1 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_integral_value() {
        assert!((vertical_integral(C0) - 0.6088).abs() < 1e-3);
    }

    #[test]
    fn c_l_chain() {
        for &l in &[0.01, 0.1, 0.6, 2.0] {
            assert!((c_l_from_integral(l) - c_l(l)).abs() < 1e-13 * c_l(l), "l={l}");
        }
    }

    #[test]
    fn k_maps_asymptotes() {
        let spec = PolygonSpec::new(0.6, 8).unwrap();
        let k = rotation_k(&spec).unwrap();
        let a = AsymptoticTangent::new(spec.c0()).unwrap();
        assert!((k.apply(a.plus()) - spec.side_tangent(0)).max_abs() < 1e-10);
        assert!((k.apply(a.minus()) - spec.side_tangent(-1)).max_abs() < 1e-10);
        assert!(HypRotation::new(k.matrix()).is_ok());
        let l = hyp_angle(k.apply(a.plus()), k.apply(a.minus())).unwrap();
        assert!((l - 0.6).abs() < 1e-10);
    }

    #[test]
    fn x_rot_corner_line() {
        let spec = PolygonSpec::new(0.6, 8).unwrap();
        assert_eq!(x_rot_corner(&spec, 0.0).unwrap(), spec.vertex(0));
        let (a2, a3) = a2_a3(spec.c0()).unwrap();
        let p0 = x_rot_corner(&spec, 0.0).unwrap();
        for &t in &[0.1, 1.0, 7.0] {
            let p = x_rot_corner(&spec, t).unwrap();
            assert_eq!(p.x1, 0.0);
            assert!(((p.x3 - p0.x3) / (p.x2 - p0.x2) - a2 / a3).abs() < 1e-12);
        }
    }

    #[test]
    fn c0_recover_rejects_bad_q() {
        let spec = PolygonSpec::new(0.6, 8).unwrap();
        assert!(c0_recover(&spec, 500).is_err());
        assert!(c0_recover(&spec, 502).is_ok());
    }
}
