//! Convolving circle measures: angles add, so directions multiply.

use hyperlattice::angular::{self, AngularMeasure};
use hyperlattice::zint::GaussInt;

fn main() -> hyperlattice::Result<()> {
    let a = angular::nu_n(5)?;
    let b = angular::convolve(&a, &a)?;
    println!("ν₅ has {} atoms, ν₅ ⋆ ν₅ has {}", a.len(), b.len());
    for k in [2i64, 4] {
        let (x, y) = (a.fourier(k).exact.unwrap(), b.fourier(k).exact.unwrap());
        println!("k={k}: ν̂₅ = {}, (ν₅⋆ν₅)^ = {}", x.re, y.re);
    }
    let tilted = AngularMeasure::from_points([GaussInt::new(10, 1), GaussInt::new(-10, -1)])?;
    let s = angular::symmetry_defect(&tilted);
    println!(
        "two antipodal atoms near angle 0: μ̂(−2) = {} + {}i, quarter-turn symmetric: {}",
        s.c2.re,
        s.c2.im,
        tilted.is_quarter_turn_symmetric()
    );
    let mu3 = angular::mu_n(3)?;
    println!("μ₃ quarter-turn symmetric: {}, μ̂₃(−2) = {}", mu3.is_quarter_turn_symmetric(), angular::symmetry_defect(&mu3).c2.re);
    Ok(())
}
