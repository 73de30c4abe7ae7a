use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::LogScalar;

/// Convert an exact rational to the nearest `f64`, ties to even.
///
/// Works for any magnitude expressible as a normal double; inputs outside
/// `[2^-1021, 2^1023]` in magnitude saturate to 0 or infinity (the engine
/// never produces such values, but the conversion stays total).
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let neg = q.is_negative();
    let a = q.numer().abs();
    let b = q.denom().clone();

    // Find shift with 2^52 <= floor(|q|·2^shift) < 2^53, starting from the
    // bit-length estimate and correcting by at most one step either way.
    let mut shift: i64 = 53 - (a.bits() as i64 - b.bits() as i64);
    let (mut m, mut num, mut den);
    loop {
        if shift >= 0 {
            num = &a << shift as u64;
            den = b.clone();
        } else {
            num = a.clone();
            den = &b << (-shift) as u64;
        }
        m = (&num).div_floor(&den);
        let bits = m.bits();
        if bits == 53 {
            break;
        }
        shift += if bits < 53 { 1 } else { -1 };
    }

    // Round: compare twice the remainder against the denominator.
    let rem = &num - &m * &den;
    let twice = &rem << 1u8;
    let round_up = match twice.cmp(&den) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => m.is_odd(),
    };
    if round_up {
        m += 1;
        if m.bits() == 54 {
            m >>= 1u8;
            shift -= 1;
        }
    }

    let mant = m.to_u64().expect("53-bit mantissa") as f64;
    let e = -shift;
    let signed = if neg { -mant } else { mant };
    // Splitting the exponent keeps each factor a normal power of two, so the
    // multiplications stay exact.
    if e.abs() <= 1000 {
        signed * 2f64.powi(e as i32)
    } else if e > 0 {
        signed * 2f64.powi(1000) * 2f64.powi((e - 1000).min(1100) as i32)
    } else {
        signed * 2f64.powi(-1000) * 2f64.powi((e + 1000).max(-1100) as i32)
    }
}

/// Correctly rounded `f64` for a [`LogScalar`]: refine the enclosure until
/// both endpoints round to the same double.
pub(crate) fn logscalar_to_f64(x: &LogScalar) -> f64 {
    if let Some(r) = x.as_rational() {
        return rational_to_f64(r);
    }
    // An irrational value sits at a rounding boundary only "by accident", and
    // each refinement shrinks the enclosure by ~2^-bits, so this terminates
    // fast in practice; 3072 bits is far beyond anything the engine exercises.
    for bits in [96u32, 192, 384, 768, 1536, 3072] {
        let iv = x.enclosure(bits);
        let lo = rational_to_f64(&iv.lo);
        let hi = rational_to_f64(&iv.hi);
        if lo == hi {
            return lo;
        }
    }
    unreachable!("enclosure refinement did not converge for {x}");
}

/// Exact `f64 -> BigRational` (every finite double is a dyadic rational).
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { Sign::Minus } else { Sign::Plus };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from_biguint(sign, mant.into());
    Some(if e >= 0 {
        BigRational::from(m << e as u64)
    } else {
        BigRational::new(m, BigInt::from(1) << (-e) as u64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qi, qr};

    #[test]
    fn small_rationals_round_correctly() {
        assert_eq!(rational_to_f64(&qr(1, 2)), 0.5);
        assert_eq!(rational_to_f64(&qr(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&qr(-22, 7)), -22.0 / 7.0);
        assert_eq!(rational_to_f64(&qi(0)), 0.0);
        assert_eq!(rational_to_f64(&qr(1, 10)), 0.1);
    }

    #[test]
    fn ties_round_to_even() {
        // 2^53 + 1 is exactly halfway between representable 2^53 and 2^53 + 2
        let q = BigRational::from(BigInt::from((1i64 << 53) + 1));
        assert_eq!(rational_to_f64(&q), 9007199254740992.0);
        // 2^53 + 3 is halfway as well; the even neighbor is 2^53 + 4
        let q = BigRational::from(BigInt::from((1i64 << 53) + 3));
        assert_eq!(rational_to_f64(&q), 9007199254740996.0);
    }

    #[test]
    fn f64_round_trip_is_identity() {
        for x in [0.1, -3.75, 1e-200, 6.02e23, f64::MIN_POSITIVE, 0.0] {
            let q = f64_to_rational(x).unwrap();
            assert_eq!(rational_to_f64(&q), x);
        }
        assert!(f64_to_rational(f64::NAN).is_none());
        assert!(f64_to_rational(f64::INFINITY).is_none());
    }

    #[test]
    fn frozen_log_constants() {
        let log2 = LogScalar::log_prime(2).unwrap();
        assert_eq!(log2.to_f64(), 0.6931471805599453);
        assert_eq!(LogScalar::log_prime(3).unwrap().to_f64(), 1.0986122886681098);
        assert_eq!(LogScalar::log_prime(5).unwrap().to_f64(), 1.6094379124341003);
        let one_plus = LogScalar::from_int(1) + log2;
        assert_eq!(one_plus.to_f64(), 1.6931471805599454);
    }

    #[test]
    fn half_log2_constant() {
        let x = LogScalar::log_prime(2).unwrap().scale(&qr(1, 2));
        assert_eq!(x.to_f64(), 0.34657359027997264);
    }
}
