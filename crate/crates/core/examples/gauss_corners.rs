//! Generalized quadratic Gauss sums and the corner coefficients at t = t_{p,q}.
use hypervfe::gauss::{corner_coefficients, gauss_sum, l_q};
use hypervfe::Result;

fn main() -> Result<()> {
    for q in [5_i64, 7, 12] {
        let g = gauss_sum(-1, 0, q)?;
        println!("G(-1,0,{q}) = {:.6} + {:.6}i   |G| = {:.6}", g.re, g.im, g.norm());
    }

    let (p, q, l) = (1, 4, 0.6);
    println!("\nl = {l}, t = t_{{{p},{q}}}: l_q = {:.12}", l_q(l, q));
    for c in corner_coefficients(p, q, l)? {
        if c.vanishing {
            println!("m = {}  vanishing", c.m);
        } else {
            println!("m = {}  s = {:+.3}  θ = {:+.6}  |A| = {:.6}", c.m, c.s_pos, c.theta, c.modulus);
        }
    }
    Ok(())
}
