//! Fits Riemann's function to algebraic corner trajectories and regresses the
//! scale factor λ_l against l.
use hypervfe::diagnostics::{riemann_phi, scaling_sweep};
use hypervfe::Result;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let phi = riemann_phi(2048, &[0.0, 0.5])?;
    println!("φ(0) = {:.6} (−π²/6 = {:.6})", phi.values[0].re, -PI * PI / 6.0);
    println!("φ(1/2) = {:.6} (π²/12 = {:.6})", phi.values[1].re, PI * PI / 12.0);

    let samples: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(960);
    let mes: Vec<u32> = (3..=20).collect();
    let sweep = scaling_sweep(&mes, samples, 2048, None)?;
    for r in &sweep.rows {
        println!("Me = {:2}  l = {:.5}  λ = {:+.5}  max |err| = {:.3e}", r.me, r.l, r.fit.lambda, r.fit.max_abs_err);
    }
    println!("ln|λ_l| = {:.4} ln l + {:.4}", sweep.slope, sweep.intercept);
    Ok(())
}
