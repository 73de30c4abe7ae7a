use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::interval::{log_prime_enclosure, RatInterval};
use crate::primes::{factor_u64, is_prime_u64};
use crate::{ExactLogError, LogPoly2};

/// Name of the environment variable overriding the default precision cap.
pub const PRECISION_ENV_VAR: &str = "TSP_PRECISION_BITS";

const BASE_PRECISION: u32 = 64;
const DEFAULT_PRECISION_CAP: u32 = 512;

/// Precision cap used by [`LogScalar::sign`]: the `TSP_PRECISION_BITS`
/// environment variable if set and valid, otherwise 512.
pub fn default_precision_cap() -> u32 {
    std::env::var(PRECISION_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 1)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

/// Outcome of a certified sign determination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignKind {
    Negative,
    Zero,
    Positive,
    Indeterminate,
}

/// Sign verdict plus the enclosure precision that settled it.
///
/// `precision_used` is 0 when the answer needed no interval arithmetic
/// (formal zeros and purely rational values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignVerdict {
    pub kind: SignKind,
    pub precision_used: u32,
}

impl SignVerdict {
    fn exact(kind: SignKind) -> Self {
        SignVerdict {
            kind,
            precision_used: 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.kind == SignKind::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.kind == SignKind::Negative
    }

    pub fn is_zero(&self) -> bool {
        self.kind == SignKind::Zero
    }
}

/// Element of the ℚ-span of `{1} ∪ {log p : p prime}` in canonical form:
/// the prime-indexed coefficient map never stores zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogScalar {
    rat: BigRational,
    logs: BTreeMap<u64, BigRational>,
}

impl LogScalar {
    pub fn zero() -> Self {
        LogScalar {
            rat: BigRational::zero(),
            logs: BTreeMap::new(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        LogScalar {
            rat: q,
            logs: BTreeMap::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `log p` for prime `p`.
    pub fn log_prime(p: u64) -> Result<Self, ExactLogError> {
        if !is_prime_u64(p) {
            return Err(ExactLogError::NotPrime(p));
        }
        let mut logs = BTreeMap::new();
        logs.insert(p, BigRational::one());
        Ok(LogScalar {
            rat: BigRational::zero(),
            logs,
        })
    }

    /// `log q` for a positive rational `q`, expanded over the prime
    /// factorizations of numerator and denominator.
    pub fn log_of_rational(q: &BigRational) -> Result<Self, ExactLogError> {
        if !q.is_positive() {
            return Err(ExactLogError::NotPositive(q.clone()));
        }
        let numer = q.numer();
        let denom = q.denom();
        let to_u64 = |n: &BigInt| -> Result<u64, ExactLogError> {
            u64::try_from(n).map_err(|_| ExactLogError::NotFactorable(n.clone()))
        };
        let mut out = LogScalar::zero();
        let nf = factor_u64(to_u64(numer)?)
            .ok_or_else(|| ExactLogError::NotFactorable(numer.clone()))?;
        for (p, e) in nf {
            out.add_log_term(p, BigRational::from(BigInt::from(e)));
        }
        let df = factor_u64(to_u64(denom)?)
            .ok_or_else(|| ExactLogError::NotFactorable(denom.clone()))?;
        for (p, e) in df {
            out.add_log_term(p, -BigRational::from(BigInt::from(e)));
        }
        Ok(out)
    }

    fn add_log_term(&mut self, p: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.logs.entry(p).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.logs.remove(&p);
        }
    }

    /// Build directly from a rational part and `(prime, coefficient)` terms.
    /// Primality is validated; duplicate primes accumulate.
    pub fn from_terms<I>(rat: BigRational, terms: I) -> Result<Self, ExactLogError>
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut out = LogScalar::from_rational(rat);
        for (p, c) in terms {
            if !is_prime_u64(p) {
                return Err(ExactLogError::NotPrime(p));
            }
            out.add_log_term(p, c);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.logs.is_empty()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    /// The coefficient of `log p` (zero if absent).
    pub fn log_coeff(&self, p: u64) -> BigRational {
        self.logs.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn log_terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.logs.iter().map(|(p, c)| (*p, c))
    }

    /// Primes with nonzero coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.logs.keys().copied().collect()
    }

    /// `Some(r)` when the value is the plain rational `r`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.logs.is_empty().then_some(&self.rat)
    }

    pub fn scale(&self, c: &BigRational) -> LogScalar {
        if c.is_zero() {
            return LogScalar::zero();
        }
        LogScalar {
            rat: &self.rat * c,
            logs: self.logs.iter().map(|(p, x)| (*p, x * c)).collect(),
        }
    }

    /// Certified enclosure of the numeric value; width shrinks as `bits` grows.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        let mut acc = RatInterval::point(self.rat.clone());
        for (p, c) in &self.logs {
            acc = acc.add(&log_prime_enclosure(*p, bits + 16).scale(c));
        }
        acc
    }

    /// Hardware-float estimate with a rigorous absolute error bound.
    ///
    /// Every component is correctly rounded (rational conversions) or within
    /// 1 ulp (`ln`), and the bound inflates the worst-case accumulation by a
    /// large margin, so `|value − estimate| ≤ bound` always holds. Useful as
    /// a cheap filter before exact arithmetic.
    pub fn approx_value(&self) -> (f64, f64) {
        let mut value = crate::float::rational_to_f64(&self.rat);
        let mut mag = value.abs();
        for (p, c) in &self.logs {
            let term = crate::float::rational_to_f64(c) * (*p as f64).ln();
            value += term;
            mag += term.abs();
        }
        let n = self.logs.len() as f64;
        (value, (mag + 1e-300) * 1e-14 * (4.0 + n))
    }

    /// Certified sign with the default precision cap
    /// (see [`default_precision_cap`]).
    pub fn sign(&self) -> SignVerdict {
        self.sign_core(None)
    }

    /// Certified sign with an explicit precision cap.
    pub fn sign_with_cap(&self, max_bits: u32) -> SignVerdict {
        self.sign_core(Some(max_bits))
    }

    fn sign_core(&self, cap: Option<u32>) -> SignVerdict {
        if self.logs.is_empty() {
            let kind = if self.rat.is_zero() {
                SignKind::Zero
            } else if self.rat.is_positive() {
                SignKind::Positive
            } else {
                SignKind::Negative
            };
            return SignVerdict::exact(kind);
        }
        // Fast float filter: decides all but near-cancellations and reports
        // the first rung's precision (the bound certifies at least that).
        let (est, err) = self.approx_value();
        if est.abs() > err {
            return SignVerdict {
                kind: if est > 0.0 {
                    SignKind::Positive
                } else {
                    SignKind::Negative
                },
                precision_used: BASE_PRECISION,
            };
        }
        // Nonzero canonical form: linear independence of {1} ∪ {log p} over ℚ
        // guarantees the numeric value is nonzero, so refinement terminates
        // unless the cap cuts it off.
        let mut bits = BASE_PRECISION;
        let mut cap_value = cap;
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
            // Consult the environment lazily: the first rung settles almost
            // every query, so the env read happens only on escalation.
            let cap = *cap_value.get_or_insert_with(default_precision_cap);
            if bits >= cap {
                return SignVerdict {
                    kind: SignKind::Indeterminate,
                    precision_used: bits,
                };
            }
            bits = (bits * 2).min(cap);
        }
    }

    /// Numeric comparison; `None` when the certification cap is reached.
    pub fn try_cmp(&self, other: &LogScalar) -> Option<std::cmp::Ordering> {
        match (self - other).sign().kind {
            SignKind::Negative => Some(std::cmp::Ordering::Less),
            SignKind::Zero => Some(std::cmp::Ordering::Equal),
            SignKind::Positive => Some(std::cmp::Ordering::Greater),
            SignKind::Indeterminate => None,
        }
    }

    /// Correctly rounded (nearest-even) `f64` value.
    pub fn to_f64(&self) -> f64 {
        crate::float::logscalar_to_f64(self)
    }

    /// Formal product with another element; lives in the degree-2 extension.
    pub fn mul_ls(&self, other: &LogScalar) -> LogPoly2 {
        LogPoly2::product(self, other)
    }
}

impl Default for LogScalar {
    fn default() -> Self {
        LogScalar::zero()
    }
}

impl fmt::Debug for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogScalar({self})")
    }
}

impl Add for &LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: &LogScalar) -> LogScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LogScalar> for LogScalar {
    fn add_assign(&mut self, rhs: &LogScalar) {
        self.rat += &rhs.rat;
        for (p, c) in &rhs.logs {
            self.add_log_term(*p, c.clone());
        }
    }
}

impl Sub for &LogScalar {
    type Output = LogScalar;
    fn sub(self, rhs: &LogScalar) -> LogScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&LogScalar> for LogScalar {
    fn sub_assign(&mut self, rhs: &LogScalar) {
        self.rat -= &rhs.rat;
        for (p, c) in &rhs.logs {
            self.add_log_term(*p, -c.clone());
        }
    }
}

impl Neg for &LogScalar {
    type Output = LogScalar;
    fn neg(self) -> LogScalar {
        LogScalar {
            rat: -&self.rat,
            logs: self.logs.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl Add for LogScalar {
    type Output = LogScalar;
    fn add(mut self, rhs: LogScalar) -> LogScalar {
        self += &rhs;
        self
    }
}

impl Sub for LogScalar {
    type Output = LogScalar;
    fn sub(mut self, rhs: LogScalar) -> LogScalar {
        self -= &rhs;
        self
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;
    fn neg(self) -> LogScalar {
        -&self
    }
}

impl Mul<&BigRational> for &LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: &BigRational) -> LogScalar {
        self.scale(rhs)
    }
}

impl Serialize for LogScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LogScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
