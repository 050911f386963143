//! u_k, v_k, w_k on one circle, the even-x/primary identity, and W₂.

use hyperlattice::angular;

fn main() -> hyperlattice::Result<()> {
    let m: u128 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(25 * 13 * 17);
    println!("m = {m}");
    for k in [2i64, 4, 6, 8] {
        let u = angular::u_k(m, k)?.exact.unwrap();
        let w = angular::w_k(m, k)?.exact.unwrap();
        let v = if m % 4 == 2 { "-".to_string() } else { angular::v_k(m, k)?.exact.unwrap().re.to_string() };
        println!("k={k}: u={}  v={v}  w={}", u.re, w.re);
        if m % 2 == 1 {
            println!("      v = (−1)^(k/2) w holds: {}", angular::claim1_check(m, k)?);
        }
    }
    println!("W₂(m) = {} (direct {})", angular::w2(m)?, angular::w2_direct(m)?);
    for m in [5u128, 25, 125, 9, 45] {
        println!("W₂({m}) = {}", angular::w2(m)?);
    }
    Ok(())
}
