//! One-corner self-similar solution: integrated tangent at large s against
//! the closed-form asymptotic directions, and the vertical integral.
use hypervfe::selfsimilar::{integrate_profile, vertical_integral, AsymptoticTangent, PROFILE_TOL};
use hypervfe::Result;

fn main() -> Result<()> {
    for c0 in [0.1, 0.168, 0.4] {
        let p = integrate_profile(c0, 200.0, PROFILE_TOL)?;
        let a = AsymptoticTangent::new(c0)?;
        let i = p.len() - 1;
        let (raw, est) = (p.tangent[i], p.tangent_limit(i));
        println!("c0 = {c0}");
        println!("  A+         = ({:.9}, {:.9}, {:.9})", a.a1, a.a2, a.a3);
        println!("  T(200)     = ({:.9}, {:.9}, {:.9})", raw.x1, raw.x2, raw.x3);
        println!("  T + 2c0b/s = ({:.9}, {:.9}, {:.9})", est.x1, est.x2, est.x3);
        println!("  ∫X_rot,3   = {:.9}  closed form {:.9}", p.x3rot_integral, vertical_integral(c0));
    }
    Ok(())
}
