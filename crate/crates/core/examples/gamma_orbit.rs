//! Enumerate matrices of norm n and compare their disk angles with the
//! even-x lattice points on x² + y² = n² − 4.

use hyperlattice::hyperbolic;

fn main() -> hyperlattice::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let gammas = hyperbolic::enumerate_gamma_fast(n)?;
    println!("|Γ^{n}| = {}, hyperbolic radius {:.6}", gammas.len(), hyperbolic::hyperbolic_distance(n)?);
    for g in &gammas {
        let (x3, x2) = g.gamma_point();
        let p = g.disk_point()?;
        println!("  ({:>3} {:>3}; {:>3} {:>3})  γ(i) = ({x3} + i)/{x2}  direction ({}, {})", g.a, g.b, g.c, g.d, p.x, p.y);
    }
    if n <= hyperbolic::BRUTE_FORCE_CAP {
        println!("{}", hyperbolic::verify_keyprop(n)?);
    }
    Ok(())
}
