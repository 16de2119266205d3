//! Complex Gamma function (Lanczos, g = 7, nine coefficients).

use std::f64::consts::PI;

use num_complex::Complex64;

const G: f64 = 7.0;
const P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z away from the poles. Uses reflection for Re z < 1/2.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::from(PI) / (s * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::from(P[0]);
    for (i, p) in P.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}
