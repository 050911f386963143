//! The limiting density of Re γ(i) mod 1 and how well real parts fit it.

use hyperlattice::density;

fn main() -> hyperlattice::Result<()> {
    for x in [0.0, 0.25, 0.5] {
        println!("p({x}) = {:.13}  series {:.13}", density::p_closed(x), density::p_series(x, 1e-12)?);
    }
    let mass = density::integrate(&density::p_closed, 0.0, 1.0, 1e-12);
    println!("∫p = {mass:.15}");
    for n0 in [1_000u64, 10_000, 100_000] {
        let parts = density::aggregated_real_parts(n0, n0 + n0 / 50)?;
        let sample: Vec<f64> = parts.iter().map(|p| p.to_f64()).collect();
        let ks = density::ks_statistic(&sample, density::p_cdf)?;
        println!("n in [{n0}, {}]: {} real parts, KS = {ks:.4}", n0 + n0 / 50, sample.len());
    }
    let parts = density::real_parts_mod1(3)?;
    let fr: Vec<String> = parts.iter().map(|p| p.frac.to_string()).collect();
    println!("Γ³ real parts mod 1: {}", fr.join(" "));
    Ok(())
}
