//! Searches: asymmetric radii, singular configurations, small-angle primes,
//! and products of small-angle primes.

use hyperlattice::hunt;

fn main() -> hyperlattice::Result<()> {
    let asym = hunt::find_asymmetric(20_000, 0.1, 2)?;
    println!("{} odd n ≤ 20000 with |μ̂ₙ(2)| ≥ 0.1; top by r*:", asym.len());
    for r in asym.iter().take(5) {
        println!("  n={} r*={} W₂={} |μ̂(2)|={:.4}", r.n, r.r_star_m.unwrap(), r.w2_m.as_deref().unwrap(), r.c2_abs.unwrap());
    }
    let sing = hunt::find_singular(20_000, 3, 8, hunt::DEFAULT_SINGULAR_CUTOFF, 2)?;
    println!("{} singular candidates, for example:", sing.len());
    for r in sing.iter().take(5) {
        println!("  n={} r*={} Ω₁={} discrepancy={:.4}", r.n, r.r_star_m.unwrap(), r.big_omega1_m.unwrap(), r.discrepancy.unwrap());
    }
    let small = hunt::find_small_angle_primes(1000, 0.1)?;
    let list: Vec<String> = small.iter().map(|s| format!("{} ({}²+{}²)", s.p, s.rep.x, s.rep.y)).collect();
    println!("primes ≤ 1000 with ϑ_p ≤ 0.1: {}", list.join(", "));
    for e in hunt::construct_exceptional(0.1, 100, 700, 1_000_000)? {
        println!("  n = {}·{} + 2 = {}: r*={} discrepancy {:.4}", e.p1, e.p2, e.n, e.r_star_m, e.discrepancy);
    }
    Ok(())
}
