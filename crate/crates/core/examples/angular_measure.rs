//! Build μₙ, print its Fourier coefficients and discrepancy, export as CSV.

use hyperlattice::angular;

fn main() -> hyperlattice::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1011);
    let mu = angular::mu_n(n)?;
    println!("μ_{n}: {} atoms", mu.len());
    for k in [1i64, 2, 3, 4, 8] {
        let c = mu.fourier(k);
        match &c.exact {
            Some(z) => println!("  μ̂({k}) = {} + {}i", z.re, z.im),
            None => println!("  μ̂({k}) ≈ {:.3e}", c.approx),
        }
    }
    let d = angular::discrepancy(&mu);
    println!("discrepancy {:.12} (± {:.0e})", d.value, d.tolerance);
    for k in [4, 16, 64] {
        println!("Erdős–Turán bound at K={k}: {:.6}", angular::erdos_turan_bound(&mu, k)?);
    }
    mu.write_csv(std::io::stdout().lock())?;
    Ok(())
}
