//! Vectors, products and rotations of R^{1,2} with metric diag(-1, 1, 1).

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric signature of R^{1,2}.
pub const ETA: [f64; 3] = [-1.0, 1.0, 1.0];

/// Relative tolerance used to decide that a vector sits on the light cone.
pub const LIGHT_CONE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MinkVec3 {
    /// Time-like coordinate.
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    SpaceLike,
    LightLike,
    TimeLikePositive,
    TimeLikeNegative,
}

impl CausalClass {
    pub fn is_time_like(self) -> bool {
        matches!(self, CausalClass::TimeLikePositive | CausalClass::TimeLikeNegative)
    }
}

impl MinkVec3 {
    pub const ZERO: MinkVec3 = MinkVec3::new(0.0, 0.0, 0.0);
    pub const E1: MinkVec3 = MinkVec3::new(1.0, 0.0, 0.0);
    pub const E2: MinkVec3 = MinkVec3::new(0.0, 1.0, 0.0);
    pub const E3: MinkVec3 = MinkVec3::new(0.0, 0.0, 1.0);

    /// Unchecked constructor for internal arithmetic.
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MinkVec3 { x1, x2, x3 }
    }

    /// Checked constructor: rejects NaN and infinities.
    pub fn try_new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = MinkVec3::new(x1, x2, x3);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("MinkVec3"))
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkVec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    #[inline]
    pub fn dot(self, b: MinkVec3) -> f64 {
        -self.x1 * b.x1 + self.x2 * b.x2 + self.x3 * b.x3
    }

    #[inline]
    pub fn cross(self, b: MinkVec3) -> MinkVec3 {
        let a = self;
        MinkVec3::new(-(a.x2 * b.x3 - a.x3 * b.x2), a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1)
    }

    /// Squared pseudo-norm `a∘a` (negative for time-like vectors).
    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    /// `√|a∘a|`.
    #[inline]
    pub fn norm(self) -> f64 {
        self.norm2().abs().sqrt()
    }

    pub fn class(self) -> CausalClass {
        let q = self.norm2();
        let scale = self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3;
        if q.abs() <= LIGHT_CONE_TOL * scale || scale == 0.0 {
            CausalClass::LightLike
        } else if q > 0.0 {
            CausalClass::SpaceLike
        } else if self.x1 > 0.0 {
            CausalClass::TimeLikePositive
        } else {
            CausalClass::TimeLikeNegative
        }
    }

    /// Unit vector along `self`; light-like input is rejected.
    pub fn normalized(self) -> Result<MinkVec3> {
        if self.class() == CausalClass::LightLike {
            return Err(Error::Degenerate("cannot normalize a light-like vector".into()));
        }
        Ok(self / self.norm())
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    /// Euclidean length, used for off-axis checks.
    pub fn euclid(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }
}

impl Add for MinkVec3 {
    type Output = MinkVec3;
    #[inline]
    fn add(self, b: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x1 + b.x1, self.x2 + b.x2, self.x3 + b.x3)
    }
}

impl Sub for MinkVec3 {
    type Output = MinkVec3;
    #[inline]
    fn sub(self, b: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x1 - b.x1, self.x2 - b.x2, self.x3 - b.x3)
    }
}

impl Neg for MinkVec3 {
    type Output = MinkVec3;
    #[inline]
    fn neg(self) -> MinkVec3 {
        MinkVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MinkVec3 {
    type Output = MinkVec3;
    #[inline]
    fn mul(self, k: f64) -> MinkVec3 {
        MinkVec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<MinkVec3> for f64 {
    type Output = MinkVec3;
    #[inline]
    fn mul(self, v: MinkVec3) -> MinkVec3 {
        v * self
    }
}

impl Div<f64> for MinkVec3 {
    type Output = MinkVec3;
    #[inline]
    fn div(self, k: f64) -> MinkVec3 {
        MinkVec3::new(self.x1 / k, self.x2 / k, self.x3 / k)
    }
}

impl AddAssign for MinkVec3 {
    #[inline]
    fn add_assign(&mut self, b: MinkVec3) {
        *self = *self + b;
    }
}

impl SubAssign for MinkVec3 {
    #[inline]
    fn sub_assign(&mut self, b: MinkVec3) {
        *self = *self - b;
    }
}

pub fn mink_dot(a: MinkVec3, b: MinkVec3) -> f64 {
    a.dot(b)
}

pub fn mink_cross(a: MinkVec3, b: MinkVec3) -> MinkVec3 {
    a.cross(b)
}

/// Magnitude `√|a∘a|` together with the causal class.
pub fn mink_norm(a: MinkVec3) -> (f64, CausalClass) {
    (a.norm(), a.class())
}

/// `arccosh(1 + u)` without cancellation for small `u`.
pub fn acosh1p(u: f64) -> f64 {
    (u + (u * (2.0 + u)).sqrt()).ln_1p()
}

/// Hyperbolic angle between two time-like vectors of equal orientation.
pub fn hyp_angle(a: MinkVec3, b: MinkVec3) -> Result<f64> {
    let (ca, cb) = (a.class(), b.class());
    if !ca.is_time_like() || ca != cb {
        return Err(Error::NotTimeLike);
    }
    let (ua, ub) = (a / a.norm(), b / b.norm());
    let u = -ua.dot(ub) - 1.0;
    if u < -1e-12 {
        return Err(Error::InvalidArgument(format!("arccosh argument {} below 1", 1.0 + u)));
    }
    if u < 1e-4 {
        // chord form: |ua - ub|² = 4 sinh²(σ/2)
        let d = (ua - ub).norm2().max(0.0).sqrt();
        return Ok(2.0 * (0.5 * d).asinh());
    }
    Ok(acosh1p(u))
}

/// Proper orthochronous Minkowski rotation stored as a 3×3 matrix acting on columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypRotation {
    m: [[f64; 3]; 3],
}

impl HypRotation {
    pub const IDENTITY: HypRotation = HypRotation { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Validates mᵀηm = η, det = 1 and time orientation (tolerance 1e-12, relative
    /// to the squared entry scale for large boosts).
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = HypRotation { m };
        let scale = r.entry_scale().powi(2).max(1.0);
        let defect = r.metric_defect().max((r.det() - 1.0).abs());
        if !m.iter().flatten().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("HypRotation"));
        }
        if defect > 1e-12 * scale || m[0][0] <= 0.0 {
            return Err(Error::NotRotation(defect));
        }
        Ok(r)
    }

    /// Skips validation; for matrices built from known rotations.
    pub fn from_matrix_unchecked(m: [[f64; 3]; 3]) -> Self {
        HypRotation { m }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn row(&self, i: usize) -> MinkVec3 {
        MinkVec3::from_array(self.m[i])
    }

    fn entry_scale(&self) -> f64 {
        self.m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    /// max |mᵀηm − η| entrywise.
    pub fn metric_defect(&self) -> f64 {
        let m = &self.m;
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m[k][i] * ETA[k] * m[k][j];
                }
                let target = if i == j { ETA[i] } else { 0.0 };
                d = d.max((s - target).abs());
            }
        }
        d
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[inline]
    pub fn apply(&self, v: MinkVec3) -> MinkVec3 {
        let m = &self.m;
        MinkVec3::new(
            m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
            m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
            m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3,
        )
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &HypRotation) -> HypRotation {
        HypRotation { m: matmul(&self.m, &other.m) }
    }

    /// η mᵀ η.
    pub fn inverse(&self) -> HypRotation {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = ETA[i] * self.m[j][i] * ETA[j];
            }
        }
        HypRotation { m: r }
    }

    /// Boost of rapidity `mu` in the x1-x2 plane (rotation about the x3 axis).
    pub fn boost_z(mu: f64) -> HypRotation {
        let (c, s) = (mu.cosh(), mu.sinh());
        HypRotation { m: [[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }
}

pub(crate) fn matmul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    r
}

/// One-parameter rotation `exp(angle·G)` with `G v = axis ∧ v`.
///
/// Space-like axes give boosts (hyperbolic functions), time-like axes give
/// circular rotations. The axis is normalized first; light-like axes are rejected.
pub fn rotation_about_axis(axis: MinkVec3, angle: f64) -> Result<HypRotation> {
    if !axis.is_finite() || !angle.is_finite() {
        return Err(Error::NonFinite("rotation_about_axis"));
    }
    let class = axis.class();
    if class == CausalClass::LightLike {
        return Err(Error::LightLikeAxis);
    }
    let u = axis / axis.norm();
    let (a, b) = if class == CausalClass::SpaceLike {
        (angle.sinh(), angle.cosh() - 1.0)
    } else {
        (angle.sin(), 1.0 - angle.cos())
    };
    let basis = [MinkVec3::E1, MinkVec3::E2, MinkVec3::E3];
    let mut m = [[0.0; 3]; 3];
    for (j, e) in basis.iter().enumerate() {
        let g = u.cross(*e);
        let gg = u.cross(g);
        let col = *e + g * a + gg * b;
        m[0][j] = col.x1;
        m[1][j] = col.x2;
        m[2][j] = col.x3;
    }
    Ok(HypRotation { m })
}

/// Corner transition matrix: a boost of angle `lq` about the axis (0, −sin θ, cos θ).
pub fn transition_matrix(theta: f64, lq: f64) -> HypRotation {
    let (s, c) = theta.sin_cos();
    let (ch, sh) = (lq.cosh(), lq.sinh());
    let k = ch - 1.0;
    HypRotation {
        m: [[ch, c * sh, s * sh], [c * sh, 1.0 + c * c * k, s * c * k], [s * sh, s * c * k, 1.0 + s * s * k]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: MinkVec3, b: MinkVec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn dot_examples() {
        assert_eq!(mink_dot(MinkVec3::E1, MinkVec3::E1), -1.0);
        assert_eq!(mink_dot(MinkVec3::E2, MinkVec3::E2), 1.0);
        let l = MinkVec3::new(1.0, 1.0, 0.0);
        assert_eq!(mink_dot(l, l), 0.0);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(mink_cross(MinkVec3::E1, MinkVec3::E2), MinkVec3::E3);
        assert_eq!(mink_cross(MinkVec3::E2, MinkVec3::E3), -MinkVec3::E1);
        let a = MinkVec3::new(0.3, -1.2, 2.5);
        assert_eq!(mink_cross(a, a), MinkVec3::ZERO);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(mink_norm(MinkVec3::E1), (1.0, CausalClass::TimeLikePositive));
        assert_eq!(mink_norm(MinkVec3::new(0.0, 3.0, 4.0)), (5.0, CausalClass::SpaceLike));
        assert_eq!(mink_norm(MinkVec3::new(1.0, 1.0, 0.0)), (0.0, CausalClass::LightLike));
        assert_eq!(MinkVec3::new(-2.0, 0.5, 0.0).class(), CausalClass::TimeLikeNegative);
    }

    #[test]
    fn try_new_rejects_nan() {
        assert!(MinkVec3::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(MinkVec3::try_new(1.0, f64::INFINITY, 0.0).is_err());
        assert!(MinkVec3::try_new(1.0, 2.0, 3.0).is_ok());
    }

    #[test]
    fn angle_examples() {
        assert_eq!(hyp_angle(MinkVec3::E1, MinkVec3::E1).unwrap(), 0.0);
        let l: f64 = 0.6;
        let b = MinkVec3::new(l.cosh(), l.sinh(), 0.0);
        assert!((hyp_angle(MinkVec3::E1, b).unwrap() - l).abs() < 1e-14);
        // tiny angles keep full relative accuracy
        let e: f64 = 1e-9;
        let b = MinkVec3::new(e.cosh(), 0.0, e.sinh());
        assert!((hyp_angle(MinkVec3::E1, b).unwrap() / e - 1.0).abs() < 1e-9);
        assert!(hyp_angle(MinkVec3::E1, MinkVec3::E2).is_err());
        assert!(hyp_angle(MinkVec3::E1, -MinkVec3::E1).is_err());
    }

    #[test]
    fn acosh1p_matches_std() {
        for &u in &[1e-6, 0.1, 3.0] {
            assert!((acosh1p(u) - (1.0 + u).acosh()).abs() < 1e-6 * acosh1p(u).max(1e-6));
        }
        assert!((acosh1p(1e-16) - (2e-16f64).sqrt()).abs() < 1e-20);
    }

    #[test]
    fn boost_about_z() {
        let mu: f64 = 0.7;
        let r = rotation_about_axis(MinkVec3::E3, mu).unwrap();
        let want = HypRotation::boost_z(mu);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.matrix()[i][j] - want.matrix()[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn circular_about_x1() {
        let r = rotation_about_axis(MinkVec3::E1, std::f64::consts::FRAC_PI_2).unwrap();
        let v = r.apply(MinkVec3::E2);
        assert!(close(v, MinkVec3::E3, 1e-15) || close(v, -MinkVec3::E3, 1e-15));
        assert!(close(r.apply(MinkVec3::E1), MinkVec3::E1, 1e-15));
        assert!(HypRotation::new(r.matrix()).is_ok());
    }

    #[test]
    fn light_like_axis_rejected() {
        assert!(matches!(rotation_about_axis(MinkVec3::new(1.0, 1.0, 0.0), 0.3), Err(Error::LightLikeAxis)));
    }

    #[test]
    fn transition_examples() {
        let lq = 0.4;
        let h = transition_matrix(0.0, lq);
        let b = HypRotation::boost_z(lq);
        assert_eq!(h.matrix()[0], b.matrix()[0]);
        let h = transition_matrix(std::f64::consts::FRAC_PI_2, lq).matrix();
        assert!(h[0][1].abs() < 1e-15 && h[1][0].abs() < 1e-15);
        assert!((h[1][1] - 1.0).abs() < 1e-15);
        assert!((h[0][2] - lq.sinh()).abs() < 1e-15);
    }

    #[test]
    fn transition_is_rotation_about_axis() {
        for i in 0..40 {
            let th = -3.0 + 0.15 * i as f64;
            let lq = 0.01 + 0.05 * i as f64;
            let h = transition_matrix(th, lq);
            let r = rotation_about_axis(MinkVec3::new(0.0, -th.sin(), th.cos()), lq).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert!((h.matrix()[a][b] - r.matrix()[a][b]).abs() < 1e-13);
                }
            }
            assert!(HypRotation::new(h.matrix()).is_ok());
        }
    }

    #[test]
    fn inverse_and_validation() {
        let r = transition_matrix(0.4, 1.3).compose(&rotation_about_axis(MinkVec3::E1, 2.0).unwrap());
        let id = r.compose(&r.inverse()).matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - want).abs() < 1e-13);
            }
        }
        assert!(HypRotation::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]).is_err());
        assert!(HypRotation::new([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
        assert!(HypRotation::new([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    }
}
