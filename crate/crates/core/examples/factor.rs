//! Factor a few integers up to 2^126 and test primality.
//!
//!     cargo run --example factor -- 1000000016000000063

use hyperlattice::zint;

fn main() -> hyperlattice::Result<()> {
    let args: Vec<u128> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let inputs = if args.is_empty() {
        vec![360, 999_999_999_989, 1_000_000_016_000_000_063, (1u128 << 61) - 1, 561 * 1105 * 1729]
    } else {
        args
    };
    for n in inputs {
        let f = zint::factor(n)?;
        let parts: Vec<String> = f
            .factors()
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        println!("{n} = {}  prime: {}", parts.join(" * "), zint::is_prime(n));
    }
    Ok(())
}
