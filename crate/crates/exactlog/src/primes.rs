/// Deterministic Miller-Rabin for `u64`.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to be
/// exact for all inputs below 3.3·10^24, which covers `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Factor `n ≥ 1` into `(prime, exponent)` pairs, primes ascending.
///
/// Trial division up to 10^6, then a primality check on the cofactor; returns
/// `None` if a composite cofactor survives (its factors would all exceed 10^6).
pub fn factor_u64(mut n: u64) -> Option<Vec<(u64, u32)>> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
    }
    let mut d = 7u64;
    let mut step = [4u64, 2].into_iter().cycle();
    while d <= 1_000_000 && d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += step.next().unwrap();
    }
    if n > 1 {
        if !is_prime_u64(n) {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality_table() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn large_known_cases() {
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(2_147_483_649));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn factorization_round_trips() {
        for n in [1u64, 2, 12, 360, 1023, 2310, 104_729 * 2] {
            let fs = factor_u64(n).unwrap();
            let back: u64 = fs.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n);
            for w in fs.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            for (p, _) in &fs {
                assert!(is_prime_u64(*p));
            }
        }
    }

    #[test]
    fn factorization_rejects_hard_composites() {
        // product of two primes above the trial-division bound
        assert!(factor_u64(1_000_003u64 * 1_000_033).is_none());
    }
}
