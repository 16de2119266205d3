//! Vertical speed of the centre of mass: closed form, integral form and the
//! period average of the algebraic rate.
use hypervfe::polygon::{c_l, center_of_mass_algebraic, PolygonSpec};
use hypervfe::selfsimilar::c_l_from_integral;
use hypervfe::Result;

fn main() -> Result<()> {
    for l in [0.05, 0.1, 0.15, 0.3, 0.6] {
        println!("l = {l:<5} c_l = {:.15}  via integral = {:.15}", c_l(l), c_l_from_integral(l));
    }
    let spec = PolygonSpec::new(0.3, 8)?;
    let series = center_of_mass_algebraic(&spec, 480)?;
    let end = series.last().unwrap();
    println!("\nl = 0.3: rate at t = 0 is {:.12}", series[0].rate.x3);
    println!("mean rate over one period (480 rational times) = {:.8}", end.position.x3 / spec.period());
    Ok(())
}
