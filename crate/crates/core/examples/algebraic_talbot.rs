//! Algebraic solution at rational times: refined polygon, corner angles, and
//! the return of the initial polygon after one period.
use hypervfe::gauss::l_q;
use hypervfe::minkowski::hyp_angle;
use hypervfe::polygon::{algebraic_solution, PolygonSpec, RationalTime};
use hypervfe::Result;

fn main() -> Result<()> {
    let spec = PolygonSpec::new(0.6, 8)?;
    for (p, q) in [(0, 1), (1, 2), (1, 3), (1, 1), (7, 12)] {
        let time = RationalTime::new(p, q)?;
        let sol = algebraic_solution(&spec, time)?;
        let mut ang = 0.0_f64;
        for k in 1..sol.corners() {
            ang = ang.max(hyp_angle(sol.frames[k - 1].t, sol.frames[k].t)?);
        }
        println!(
            "t = ({p}/{q})T  sides = {:3}  X(0,t) = ({:+.6}, {:+.6}, {:+.6})  largest corner angle = {:.10} (l_q = {:.10})  offset = {:.4e}",
            sol.corners(),
            sol.corner_point().x1,
            sol.corner_point().x2,
            sol.corner_point().x3,
            ang,
            l_q(spec.l, q),
            sol.vertical_offset,
        );
    }
    Ok(())
}
