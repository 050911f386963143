//! Count 𝒩 up to X and summarize how r*(n² − 4) grows.

use hyperlattice::hunt;

fn main() -> hyperlattice::Result<()> {
    let x: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1);
    let c = hunt::census(x, workers)?;
    println!("|𝒩({x})| = {}  (x/log x = {:.0})", c.count, x as f64 / (x as f64).ln());
    println!("median log r*/log log n = {:.4}", c.median_exponent);
    println!("median ω₁ log 2/log log n = {:.4}  (log 2 = {:.4})", c.median_omega_exponent, std::f64::consts::LN_2);
    println!("median discrepancy, r* ≥ 64: {:?}; r* ≤ 8: {:?}", c.median_discrepancy_r_star_ge_64, c.median_discrepancy_r_star_le_8);
    c.exponent_histogram.write_csv(std::io::stdout().lock())?;
    Ok(())
}
