use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::interval::{log_prime_enclosure, RatInterval};
use crate::scalar::{default_precision_cap, SignKind, SignVerdict};
use crate::LogScalar;

/// Formal polynomial of degree ≤ 2 in `{log p}` with rational coefficients.
///
/// Closed under products of two [`LogScalar`]s, which is exactly what 2-D
/// orientation determinants over log-valued coordinates require. Canonical
/// form stores no zero coefficients; quadratic monomial keys are normalized
/// with `p ≤ q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogPoly2 {
    constant: BigRational,
    linear: BTreeMap<u64, BigRational>,
    quadratic: BTreeMap<(u64, u64), BigRational>,
}

impl LogPoly2 {
    pub fn zero() -> Self {
        LogPoly2 {
            constant: BigRational::zero(),
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty() && self.quadratic.is_empty()
    }

    fn add_lin(&mut self, p: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.linear.entry(p).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.linear.remove(&p);
        }
    }

    fn add_quad(&mut self, p: u64, q: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = if p <= q { (p, q) } else { (q, p) };
        let e = self.quadratic.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.quadratic.remove(&key);
        }
    }

    /// Formal product of two degree-1 elements.
    pub fn product(a: &LogScalar, b: &LogScalar) -> LogPoly2 {
        let mut out = LogPoly2::zero();
        out.constant = a.rational_part() * b.rational_part();
        for (p, c) in a.log_terms() {
            out.add_lin(p, c * b.rational_part());
        }
        for (q, d) in b.log_terms() {
            out.add_lin(q, d * a.rational_part());
        }
        for (p, c) in a.log_terms() {
            for (q, d) in b.log_terms() {
                out.add_quad(p, q, c * d);
            }
        }
        out
    }

    pub fn add(&self, other: &LogPoly2) -> LogPoly2 {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (p, c) in &other.linear {
            out.add_lin(*p, c.clone());
        }
        for ((p, q), c) in &other.quadratic {
            out.add_quad(*p, *q, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LogPoly2) -> LogPoly2 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LogPoly2 {
        LogPoly2 {
            constant: -&self.constant,
            linear: self.linear.iter().map(|(p, c)| (*p, -c)).collect(),
            quadratic: self.quadratic.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    fn enclosure(&self, bits: u32) -> RatInterval {
        let mut acc = RatInterval::point(self.constant.clone());
        for (p, c) in &self.linear {
            acc = acc.add(&log_prime_enclosure(*p, bits + 16).scale(c));
        }
        for ((p, q), c) in &self.quadratic {
            let prod =
                log_prime_enclosure(*p, bits + 16).mul(&log_prime_enclosure(*q, bits + 16));
            acc = acc.add(&prod.scale(c));
        }
        acc
    }

    /// Certified sign with the default precision cap.
    ///
    /// Unlike the degree-1 case, a nonzero canonical form here is not known to
    /// be numerically nonzero (ℚ-linear independence of products of prime logs
    /// is open), so `Indeterminate` at the cap is a genuine possible outcome
    /// and callers must handle it.
    pub fn sign(&self) -> SignVerdict {
        self.sign_with_cap(default_precision_cap())
    }

    pub fn sign_with_cap(&self, max_bits: u32) -> SignVerdict {
        if self.is_zero() {
            return SignVerdict {
                kind: SignKind::Zero,
                precision_used: 0,
            };
        }
        if self.linear.is_empty() && self.quadratic.is_empty() {
            let kind = if self.constant.is_positive() {
                SignKind::Positive
            } else {
                SignKind::Negative
            };
            return SignVerdict {
                kind,
                precision_used: 0,
            };
        }
        let mut bits = 64u32.min(max_bits);
        loop {
            let iv = self.enclosure(bits);
            if iv.lo.is_positive() {
                return SignVerdict {
                    kind: SignKind::Positive,
                    precision_used: bits,
                };
            }
            if iv.hi.is_negative() {
                return SignVerdict {
                    kind: SignKind::Negative,
                    precision_used: bits,
                };
            }
            if bits >= max_bits {
                return SignVerdict {
                    kind: SignKind::Indeterminate,
                    precision_used: bits,
                };
            }
            bits = (bits * 2).min(max_bits);
        }
    }
}

impl fmt::Debug for LogPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogPoly2({}", self.constant)?;
        for (p, c) in &self.linear {
            write!(f, " + {c}*log({p})")?;
        }
        for ((p, q), c) in &self.quadratic {
            write!(f, " + {c}*log({p})*log({q})")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    fn log(p: u64) -> LogScalar {
        LogScalar::log_prime(p).unwrap()
    }

    #[test]
    fn product_is_commutative() {
        let a = log(2) + LogScalar::from_int(1);
        let b = log(3) - log(2);
        assert_eq!(LogPoly2::product(&a, &b), LogPoly2::product(&b, &a));
    }

    #[test]
    fn product_expands_formally() {
        // log8 · log9 = 6 · log2 · log3
        let l8 = log(2).scale(&qi(3));
        let l9 = log(3).scale(&qi(2));
        let lhs = LogPoly2::product(&l8, &l9);
        let unit = LogPoly2::product(&log(2), &log(3));
        let mut rhs = LogPoly2::zero();
        for _ in 0..6 {
            rhs = rhs.add(&unit);
        }
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn sign_of_quadratic_combinations() {
        let v = LogPoly2::product(&log(2), &log(3)).sign();
        assert_eq!(v.kind, SignKind::Positive);
        let d = LogPoly2::product(&log(2), &log(2)).sub(&LogPoly2::product(&log(3), &log(3)));
        assert_eq!(d.sign().kind, SignKind::Negative);
        let l6 = log(2) + log(3);
        let z = LogPoly2::product(&l6, &l6).sub(&LogPoly2::product(&l6, &l6));
        let v = z.sign();
        assert_eq!(v.kind, SignKind::Zero);
        assert_eq!(v.precision_used, 0);
    }

    #[test]
    fn mixed_terms_certify() {
        // (1 + log2)·(1 − log2) = 1 − (log2)² > 0 because log2 < 1
        let a = LogScalar::from_int(1) + log(2);
        let b = LogScalar::from_int(1) - log(2);
        assert_eq!(LogPoly2::product(&a, &b).sign().kind, SignKind::Positive);
        // (1 + log3)·(1 − log3) < 0 because log3 > 1
        let a = LogScalar::from_int(1) + log(3);
        let b = LogScalar::from_int(1) - log(3);
        assert_eq!(LogPoly2::product(&a, &b).sign().kind, SignKind::Negative);
    }

    #[test]
    fn indeterminate_respects_cap() {
        // (log2)·(log3) − tiny ≈ nonzero but cap of 1 bit can't resolve sign
        // of a near-zero combination; build one via a fine dyadic midpoint.
        let prod = LogPoly2::product(&log(2), &log(3));
        let enc = prod.enclosure(200).round_out(200);
        let mid = (&enc.lo + &enc.hi) / qi(2);
        let tiny = prod.sub(&LogPoly2::product(
            &LogScalar::from_rational(mid),
            &LogScalar::from_int(1),
        ));
        assert!(!tiny.is_zero());
        let v = tiny.sign_with_cap(64);
        assert_eq!(v.kind, SignKind::Indeterminate);
    }
}
