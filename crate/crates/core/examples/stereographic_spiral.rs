//! Stereographic image of the tangent indicatrix at t = (10327/27993)T for
//! M = 8, l = 0.6. Writes `spiral.csv` (re, im) for plotting.
use hypervfe::diagnostics::stereographic_curve;
use hypervfe::polygon::{algebraic_solution, PolygonSpec, RationalTime};
use hypervfe::Result;
use std::io::Write;

fn main() -> Result<()> {
    let spec = PolygonSpec::new(0.6, 8)?;
    let sol = algebraic_solution(&spec, RationalTime::new(10327, 27993)?)?;
    let z = stereographic_curve(&sol);
    let mut f = std::io::BufWriter::new(std::fs::File::create("spiral.csv")?);
    writeln!(f, "re,im")?;
    for p in &z {
        writeln!(f, "{},{}", p.re, p.im)?;
    }
    let rmax = z.iter().map(|p| p.norm()).fold(0.0, f64::max);
    println!("{} sides, max |z| = {rmax:.6}, written to spiral.csv", sol.corners());
    Ok(())
}
