//! Quadratic Gauss sums and the corner structure of the polygon at rational times.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::acosh1p;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Inverse of `a` modulo `m` (m ≥ 1, gcd(a, m) = 1). Modulo 1 everything is 0.
fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (a.rem_euclid(m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m as i128) as i64
}

/// e^{2πi k/m} for an exact residue k, reduced to the symmetric range first.
fn unit_root(k: i64, m: i64, sign: f64) -> Complex64 {
    let k = k.rem_euclid(m);
    let k = if 2 * k > m { k - m } else { k };
    let (s, c) = (sign * TAU * (k as f64 / m as f64)).sin_cos();
    Complex64::new(c, s)
}

/// G(a, b, c) = Σ_{n=0}^{|c|-1} exp(2πi (a n² + b n)/c) by direct summation.
///
/// The phase index is tracked exactly in integers, so no precision is lost
/// for large `c`.
pub fn gauss_sum(a: i64, b: i64, c: i64) -> Result<Complex64> {
    if c == 0 {
        return Err(Error::InvalidArgument("Gauss sum with c = 0".into()));
    }
    let m = c.abs();
    let sign = c.signum() as f64;
    let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
    // k_n = a n² + b n, d_n = k_{n+1} - k_n = a(2n+1) + b
    let mut k = 0i64;
    let mut d = (a + b) % m;
    let step = (2 * a) % m;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..m {
        sum += unit_root(k, m, sign);
        k = (k + d) % m;
        d = (d + step) % m;
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerCoefficient {
    /// Residue of the corner index modulo q.
    pub m: i64,
    /// Arclength position l·m/q within the first period.
    pub s_pos: f64,
    /// arg G(−p, m, q).
    pub theta: f64,
    /// |G| times the normalizing prefactor; equals l_q for non-vanishing corners.
    pub modulus: f64,
    pub vanishing: bool,
    pub value: Complex64,
}

/// Hyperbolic angle between adjacent sides at a rational time with denominator q.
pub fn l_q(l: f64, q: i64) -> f64 {
    assert!(q >= 1, "q must be positive");
    let e = if q % 2 == 1 { 1.0 / q as f64 } else { 2.0 / q as f64 };
    // ln cosh(l/2) = ln(1 + 2 sinh²(l/4))
    let lnc = (2.0 * (0.25 * l).sinh().powi(2)).ln_1p();
    2.0 * acosh1p((lnc * e).exp_m1())
}

/// Corner coefficients G(−p, m, q), m = 0..q−1.
///
/// Two base sums G(−p, 0, q), G(−p, 1, q) are summed directly; every other
/// m follows from the shift n → n + d, which multiplies the sum by an exactly
/// computed root of unity. Cost is O(q) instead of O(q²).
pub fn corner_coefficients(p: i64, q: i64, l: f64) -> Result<Vec<CornerCoefficient>> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("q = {q} must be positive")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidArgument(format!("l = {l} must be positive")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let pr = p.rem_euclid(q);
    let base = [gauss_sum(-pr, 0, q)?, gauss_sum(-pr, 1, q)?];
    let lq = l_q(l, q);
    let norm = if q % 2 == 1 { (q as f64).sqrt() } else { (2.0 * q as f64).sqrt() };
    let threshold = 1e-9 * (q as f64).sqrt();
    let (inv, half) = if q % 2 == 1 { (mod_inverse(2 * pr, q), q) } else { (mod_inverse(pr, q / 2), q / 2) };
    let out = (0..q)
        .map(|m| {
            let (b0, d) = if q % 2 == 1 {
                (0, ((m as i128 * inv as i128) % q as i128) as i64)
            } else {
                let b0 = m % 2;
                (b0, ((((m - b0) / 2) as i128 * inv as i128) % half as i128) as i64)
            };
            // G(−p, m, q) = e(md − pd²) G(−p, b0, q)
            let d128 = d as i128;
            let k = (m as i128 * d128 - pr as i128 * d128 * d128).rem_euclid(q as i128) as i64;
            let value = unit_root(k, q, 1.0) * base[b0 as usize];
            let vanishing = value.norm() < threshold;
            CornerCoefficient {
                m,
                s_pos: l * m as f64 / q as f64,
                theta: if vanishing { 0.0 } else { value.arg() },
                modulus: value.norm() * lq / norm,
                vanishing,
                value,
            }
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_examples() {
        let g = gauss_sum(0, 0, 3).unwrap();
        assert!((g - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        let g = gauss_sum(-1, 0, 3).unwrap();
        assert!((g - Complex64::new(0.0, -(3f64).sqrt())).norm() < 1e-14);
        let g = gauss_sum(-1, 1, 2).unwrap();
        assert!((g - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(gauss_sum(1, 1, 0).is_err());
    }

    #[test]
    fn negative_modulus_conjugates() {
        let g = gauss_sum(2, 3, 7).unwrap();
        let h = gauss_sum(2, 3, -7).unwrap();
        assert!((g.conj() - h).norm() < 1e-13);
    }

    #[test]
    fn lq_examples() {
        assert!((l_q(0.6, 1) - 0.6).abs() < 1e-15);
        assert!((l_q(0.6, 2) - 0.6).abs() < 1e-15);
        // mpmath: 2*acosh(cosh(0.3)**(1/3))
        assert!((l_q(0.6, 3) - 0.344_711_109_835_711_6).abs() < 1e-13);
        let lq = l_q(0.6, 7);
        assert!(((0.5 * lq).cosh().powi(7) - 0.3f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn corner_examples() {
        let c = corner_coefficients(0, 1, 0.6).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].theta.abs() < 1e-15 && (c[0].modulus - 0.6).abs() < 1e-15);

        let c = corner_coefficients(1, 2, 0.6).unwrap();
        let live: Vec<_> = c.iter().filter(|c| !c.vanishing).collect();
        assert_eq!(live.len(), 1);
        assert!((live[0].s_pos - 0.3).abs() < 1e-15);

        let c = corner_coefficients(1, 3, 0.6).unwrap();
        assert!(c.iter().all(|c| !c.vanishing && (c.modulus - l_q(0.6, 3)).abs() < 1e-13));
        assert!(matches!(corner_coefficients(2, 4, 0.6), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn shift_identity_matches_direct_sum() {
        for q in 1..=64i64 {
            for p in -3..=q {
                if gcd(p, q) != 1 {
                    continue;
                }
                let c = corner_coefficients(p, q, 0.5).unwrap();
                for cc in &c {
                    let g = gauss_sum(-p, cc.m, q).unwrap();
                    assert!((g - cc.value).norm() < 1e-11, "p={p} q={q} m={}", cc.m);
                }
            }
        }
    }

    #[test]
    fn large_q_still_unimodular() {
        let q = 27993;
        let c = corner_coefficients(10327, q, 0.6).unwrap();
        let s = (q as f64).sqrt();
        for i in [0usize, 1, 17, 9000, 27992] {
            assert!((c[i].value.norm() / s - 1.0).abs() < 1e-10);
            let g = gauss_sum(-10327, i as i64, q).unwrap();
            assert!((g - c[i].value).norm() < 1e-9);
        }
    }
}
