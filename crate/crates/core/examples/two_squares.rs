//! Representations as sums of two squares, r(n), r*(n) and prime angles.

use hyperlattice::zint;

fn main() -> hyperlattice::Result<()> {
    for n in [5u128, 25, 32, 45, 65, 1105, 12] {
        let reps = zint::repr_two_squares(n)?;
        let shown: Vec<String> = reps.iter().filter(|r| r.x >= 0 && r.y >= 0).map(|r| format!("{}²+{}²", r.x, r.y)).collect();
        println!("n={n:<5} r={:<3} r*={:<3} first quadrant: {}", zint::r(n)?, zint::r_star(n)?, shown.join(", "));
    }
    println!();
    for p in [5u128, 13, 101, 197, 1_000_000_009] {
        let (theta, pi) = zint::theta_p(p)?;
        let (vt, rep) = zint::vartheta_p(p)?;
        println!("p={p}: primary prime {pi}, θ_p={theta:.6}, ϑ_p={vt:.6} from {}²+{}²", rep.x, rep.y);
    }
    Ok(())
}
