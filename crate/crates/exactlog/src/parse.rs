use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{ExactLogError, LogScalar};

/// Text form: `3/2 + 1/2*log(2) - log(3)`. Rational part first when nonzero,
/// log terms by ascending prime, unit coefficients elided, `0` for zero.
impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, neg: bool, body: String| -> fmt::Result {
            if first {
                first = false;
                if neg {
                    write!(f, "-{body}")
                } else {
                    write!(f, "{body}")
                }
            } else if neg {
                write!(f, " - {body}")
            } else {
                write!(f, " + {body}")
            }
        };
        let rat = self.rational_part();
        if !rat.is_zero() {
            emit(f, rat.is_negative(), format!("{}", rat.abs()))?;
        }
        for (p, c) in self.log_terms() {
            let mag = c.abs();
            let body = if mag.is_one() {
                format!("log({p})")
            } else {
                format!("{mag}*log({p})")
            };
            emit(f, c.is_negative(), body)?;
        }
        Ok(())
    }
}

impl FromStr for LogScalar {
    type Err = ExactLogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { rest: s.trim() }.parse()
    }
}

struct Parser<'a> {
    rest: &'a str,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<LogScalar, ExactLogError> {
        let mut acc = LogScalar::zero();
        if self.rest.is_empty() {
            return Err(self.fail("empty input"));
        }
        let mut sign = self.leading_sign(true)?;
        loop {
            let term = self.term()?;
            acc += &term.scale(&sign);
            self.skip_ws();
            if self.rest.is_empty() {
                return Ok(acc);
            }
            sign = self.leading_sign(false)?;
        }
    }

    fn fail(&self, msg: &str) -> ExactLogError {
        ExactLogError::Parse(format!("{msg} at '{}'", self.rest))
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn leading_sign(&mut self, optional: bool) -> Result<BigRational, ExactLogError> {
        self.skip_ws();
        if let Some(r) = self.rest.strip_prefix('+') {
            self.rest = r;
            Ok(BigRational::one())
        } else if let Some(r) = self.rest.strip_prefix('-') {
            self.rest = r;
            Ok(-BigRational::one())
        } else if optional {
            Ok(BigRational::one())
        } else {
            Err(self.fail("expected '+' or '-'"))
        }
    }

    /// term := rational ['*' log] | log
    fn term(&mut self) -> Result<LogScalar, ExactLogError> {
        self.skip_ws();
        if self.rest.starts_with("log") {
            return self.log_factor();
        }
        let coeff = self.rational()?;
        self.skip_ws();
        if let Some(r) = self.rest.strip_prefix('*') {
            self.rest = r;
            self.skip_ws();
            if !self.rest.starts_with("log") {
                return Err(self.fail("expected 'log' after '*'"));
            }
            Ok(self.log_factor()?.scale(&coeff))
        } else {
            Ok(LogScalar::from_rational(coeff))
        }
    }

    fn log_factor(&mut self) -> Result<LogScalar, ExactLogError> {
        self.rest = self.rest.strip_prefix("log").unwrap();
        self.skip_ws();
        let r = self
            .rest
            .strip_prefix('(')
            .ok_or_else(|| self.fail("expected '(' after 'log'"))?;
        self.rest = r;
        self.skip_ws();
        let p = self.integer()?;
        self.skip_ws();
        let r = self
            .rest
            .strip_prefix(')')
            .ok_or_else(|| self.fail("expected ')'"))?;
        self.rest = r;
        let p = u64::try_from(&p).map_err(|_| ExactLogError::Parse(format!("prime {p} out of range")))?;
        LogScalar::log_prime(p)
    }

    fn rational(&mut self) -> Result<BigRational, ExactLogError> {
        let numer = self.integer()?;
        self.skip_ws();
        if let Some(r) = self.rest.strip_prefix('/') {
            self.rest = r;
            self.skip_ws();
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(self.fail("zero denominator"));
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from(numer))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExactLogError> {
        let digits: usize = self.rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.fail("expected digits"));
        }
        let (d, r) = self.rest.split_at(digits);
        self.rest = r;
        d.parse()
            .map_err(|e| ExactLogError::Parse(format!("bad integer '{d}': {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qi, qr};

    fn log(p: u64) -> LogScalar {
        LogScalar::log_prime(p).unwrap()
    }

    #[test]
    fn display_matches_reference_form() {
        let x = LogScalar::from_rational(qr(3, 2)) + log(2).scale(&qr(1, 2)) - log(3);
        assert_eq!(x.to_string(), "3/2 + 1/2*log(2) - log(3)");
        assert_eq!(LogScalar::zero().to_string(), "0");
        assert_eq!(log(7).to_string(), "log(7)");
        assert_eq!((-log(7)).to_string(), "-log(7)");
        assert_eq!(LogScalar::from_rational(qr(-2, 3)).to_string(), "-2/3");
    }

    #[test]
    fn parse_round_trips_reference_forms() {
        for s in [
            "3/2 + 1/2*log(2) - log(3)",
            "0",
            "-log(7)",
            "log(2)",
            "-5",
            "1/3",
            "2*log(5) - 1/2",
        ] {
            let x: LogScalar = s.parse().unwrap();
            let y: LogScalar = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
        // canonical display reorders: parse then print is stable
        let x: LogScalar = "2*log(5) - 1/2".parse().unwrap();
        assert_eq!(x.to_string(), "-1/2 + 2*log(5)");
    }

    #[test]
    fn parse_accumulates_duplicate_primes() {
        let x: LogScalar = "log(2) + log(2) - 1/2*log(2)".parse().unwrap();
        assert_eq!(x, log(2).scale(&qr(3, 2)));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for s in ["", "log(4)", "log 2", "1/0", "log(2", "2 ** log(2)", "+"] {
            assert!(s.parse::<LogScalar>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn parse_tolerates_whitespace() {
        let x: LogScalar = "  1/2 * log( 2 )   -  3 ".parse().unwrap();
        assert_eq!(x, log(2).scale(&qr(1, 2)) + LogScalar::from_rational(qi(-3)));
    }
}
