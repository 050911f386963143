use std::collections::BTreeSet;

use hyperlattice::zint;

fn naive(n: i64) -> BTreeSet<(i128, i128)> {
    let s = (n as f64).sqrt() as i64 + 1;
    let mut out = BTreeSet::new();
    for x in -s..=s {
        let rest = n - x * x;
        if rest < 0 {
            continue;
        }
        let y = (rest as f64).sqrt().round() as i64;
        if y * y == rest {
            out.insert((x as i128, y as i128));
            out.insert((x as i128, -y as i128));
        }
    }
    out
}

#[test]
fn representations_up_to_1e5() {
    for n in 0..=100_000i64 {
        let want = naive(n);
        let got: BTreeSet<(i128, i128)> =
            zint::repr_two_squares(n as u128).unwrap().into_iter().map(|r| (r.x, r.y)).collect();
        assert_eq!(got, want, "n = {n}");
        assert_eq!(zint::r(n as u128).unwrap(), want.len() as u128, "r({n})");
        let even = want.iter().filter(|p| p.0 % 2 == 0).count() as u128;
        assert_eq!(zint::r_star(n as u128).unwrap(), even, "r*({n})");
        assert_eq!(zint::is_sum_two_squares(n as u128).unwrap(), !want.is_empty());
    }
}

#[test]
fn large_circles() {
    // products of split primes near 2^31
    let n: u128 = 2147483693 * 2147483713 * 13;
    let reps = zint::repr_two_squares(n).unwrap();
    assert_eq!(reps.len() as u128, zint::r(n).unwrap());
    assert_eq!(reps.len(), 32);
    for r in reps {
        assert_eq!((r.x * r.x + r.y * r.y) as u128, n);
    }
}
