use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(q: BigRational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        RatInterval::point(BigRational::zero())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Scale by an exact rational, flipping endpoints when `c < 0`.
    pub fn scale(&self, c: &BigRational) -> RatInterval {
        if c.is_negative() {
            RatInterval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            RatInterval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// Interval product (min/max over endpoint products).
    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Round endpoints outward onto the dyadic grid `2^-bits·ℤ`.
    ///
    /// Keeps endpoint bit-length proportional to `bits` instead of letting
    /// series partial sums carry thousand-digit denominators through later
    /// arithmetic.
    pub fn round_out(&self, bits: u32) -> RatInterval {
        let scale = BigInt::one() << bits;
        let scale_q = BigRational::from(scale.clone());
        let lo = BigRational::new((&self.lo * &scale_q).floor().to_integer(), scale.clone());
        let hi = BigRational::new((&self.hi * &scale_q).ceil().to_integer(), scale);
        RatInterval { lo, hi }
    }
}

/// Certified enclosure of `log p`, width at most `2^(1-bits)`.
///
/// `p` must be at least 2; primality is the caller's contract. Results are
/// cached per `(p, bits)`.
pub fn log_prime_enclosure(p: u64, bits: u32) -> RatInterval {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u32), RatInterval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(iv) = cache.read().unwrap().get(&(p, bits)) {
        return iv.clone();
    }
    let iv = compute_log_enclosure(p, bits);
    cache.write().unwrap().insert((p, bits), iv.clone());
    iv
}

fn compute_log_enclosure(p: u64, bits: u32) -> RatInterval {
    assert!(p >= 2);
    if p == 2 {
        return ln_series(&BigRational::from(BigInt::from(2)), bits + 1).round_out(bits + 1);
    }
    // p = 2^k · r with r ∈ [1, 2); log p = k·log 2 + log r. The extra 8 bits
    // absorb the factor k ≤ 63 when the log 2 enclosure is scaled.
    let k = 63 - p.leading_zeros() as u64;
    let r = BigRational::new(BigInt::from(p), BigInt::one() << k);
    let ln2 = log_prime_enclosure(2, bits + 8);
    let lnr = ln_series(&r, bits + 8);
    ln2.scale(&BigRational::from(BigInt::from(k)))
        .add(&lnr)
        .round_out(bits + 1)
}

/// Enclosure of `log x` for rational `x ∈ [1, 2]`, width at most `2^-bits`.
///
/// Uses `log x = 2·atanh(t)` with `t = (x-1)/(x+1) ∈ [0, 1/3]`; the series
/// `2·Σ t^(2j+1)/(2j+1)` has tail below `2·t^(2n+3) / ((2n+3)(1-t²))`.
fn ln_series(x: &BigRational, bits: u32) -> RatInterval {
    let one = BigRational::one();
    if x == &one {
        return RatInterval::zero();
    }
    let t = (x - &one) / (x + &one);
    let t2 = &t * &t;
    let two = BigRational::from(BigInt::from(2));
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);

    let mut sum = BigRational::zero();
    let mut tpow = t.clone(); // t^(2j+1)
    let mut j: u64 = 0;
    loop {
        sum += &two * &tpow / BigRational::from(BigInt::from(2 * j + 1));
        let next = &tpow * &t2;
        let tail = &two * &next
            / (BigRational::from(BigInt::from(2 * j + 3)) * (&one - &t2));
        if tail <= eps {
            return RatInterval {
                lo: sum.clone(),
                hi: sum + tail,
            };
        }
        tpow = next;
        j += 1;
    }
}
