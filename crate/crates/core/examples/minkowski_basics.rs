//! Minkowski products, causal classes, hyperbolic angles and rotations.
use hypervfe::minkowski::{hyp_angle, rotation_about_axis};
use hypervfe::{MinkVec3, Result};

fn main() -> Result<()> {
    let a = MinkVec3::new(2.0, 1.0, 0.5);
    let b = MinkVec3::new(1.0_f64.cosh(), 1.0_f64.sinh(), 0.0);
    println!("a∘b = {}", a.dot(b));
    println!("a∧b = {:?}", a.cross(b));
    println!("class(a) = {:?}, class(e2) = {:?}", a.class(), MinkVec3::E2.class());

    let e1 = MinkVec3::E1;
    println!("angle(e1, b) = {:.15} (expected 1)", hyp_angle(e1, b)?);

    // boost about e3 and a circular rotation about e1
    let boost = rotation_about_axis(MinkVec3::E3, 0.7)?;
    let spin = rotation_about_axis(MinkVec3::E1, 0.3)?;
    let r = boost.compose(&spin);
    println!("metric defect of R = {:.2e}, det = {:.15}", r.metric_defect(), r.det());
    let (ra, rb) = (r.apply(a), r.apply(b));
    println!("a∘b after R = {}", ra.dot(rb));
    println!("R(a∧b) − Ra∧Rb = {:.2e}", (r.apply(a.cross(b)) - ra.cross(rb)).euclid());
    Ok(())
}
