//! Exact arbitrary-precision rationals for weights, averages and
//! contractibility values.
//!
//! Weights are parsed straight from decimal text (`"0.1"` is exactly
//! `1/10`), so no comparison anywhere in the crate goes through binary
//! floating point.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// An exact rational number, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, or `None` when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Divides by a count. Panics on zero, which callers rule out.
    pub fn div_count(&self, count: usize) -> Self {
        assert!(count > 0, "division by a zero count");
        Rational(&self.0 / BigRational::from_integer(BigInt::from(count)))
    }

    pub fn mul_count(&self, count: usize) -> Self {
        Rational(&self.0 * BigRational::from_integer(BigInt::from(count)))
    }

    /// Nearest `f64`; lossy, for display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Decimal text rounded (half away from zero) to `digits` significant
    /// digits, trailing zeros trimmed. Switches to scientific notation for
    /// very large or very small magnitudes, like C's `%g`.
    pub fn to_sig_digits(&self, digits: usize) -> String {
        assert!(digits > 0);
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        let numer = self.numer().abs();
        let denom = self.denom().clone();

        // Find e with 10^e <= |x| < 10^(e+1).
        let mut exp = numer.to_string().len() as i64 - denom.to_string().len() as i64;
        let ten = BigInt::from(10u32);
        let scaled_cmp = |e: i64| -> Ordering {
            // compare |x| with 10^e
            if e >= 0 {
                numer.cmp(&(&denom * num::pow(ten.clone(), e as usize)))
            } else {
                (&numer * num::pow(ten.clone(), (-e) as usize)).cmp(&denom)
            }
        };
        while scaled_cmp(exp) == Ordering::Less {
            exp -= 1;
        }
        while scaled_cmp(exp + 1) != Ordering::Less {
            exp += 1;
        }

        // mantissa = round(|x| * 10^(digits-1-exp))
        let shift = digits as i64 - 1 - exp;
        let (num_s, den_s) = if shift >= 0 {
            (&numer * num::pow(ten.clone(), shift as usize), denom.clone())
        } else {
            (numer.clone(), &denom * num::pow(ten.clone(), (-shift) as usize))
        };
        let (q, r) = num_s.div_rem(&den_s);
        let mut mantissa = if &r * 2u32 >= den_s { q + 1u32 } else { q };
        if mantissa == num::pow(ten.clone(), digits) {
            mantissa /= 10u32;
            exp += 1;
        }
        let mdigits = mantissa.to_string();
        debug_assert_eq!(mdigits.len(), digits);

        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if exp < -5 || exp >= digits as i64 {
            let (head, tail) = mdigits.split_at(1);
            out.push_str(head);
            let tail = tail.trim_end_matches('0');
            if !tail.is_empty() {
                out.push('.');
                out.push_str(tail);
            }
            out.push_str(&format!("e{exp}"));
        } else if exp >= 0 {
            let (int_part, frac) = mdigits.split_at(exp as usize + 1);
            out.push_str(int_part);
            let frac = frac.trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(mdigits.trim_end_matches('0'));
        }
        out
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl fmt::Display for Rational {
    /// `p` for integers, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `[+-]digits[.digits][e[+-]digits]`, `.5`, `5.` and the
    /// rational literal `[+-]p/q`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let malformed = || ParseRationalError::Malformed(s.to_string());
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };

        let value = if let Some((p, q)) = body.split_once('/') {
            let p = parse_digits(p).ok_or_else(malformed)?;
            let q = parse_digits(q).ok_or_else(malformed)?;
            if q.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            BigRational::new(p, q)
        } else {
            let (mantissa, exponent) = match body.find(['e', 'E']) {
                Some(i) => {
                    let exp_text = &body[i + 1..];
                    let (eneg, edigits) = match exp_text.as_bytes().first() {
                        Some(b'-') => (true, &exp_text[1..]),
                        Some(b'+') => (false, &exp_text[1..]),
                        _ => (false, exp_text),
                    };
                    let e = parse_digits(edigits)
                        .and_then(|e| e.to_i64())
                        .filter(|e| *e <= 100_000)
                        .ok_or_else(malformed)?;
                    (&body[..i], if eneg { -e } else { e })
                }
                None => (body, 0),
            };
            let (int_part, frac_part) = match mantissa.split_once('.') {
                Some((i, f)) => (i, f),
                None => (mantissa, ""),
            };
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(malformed());
            }
            let digits = format!("{int_part}{frac_part}");
            let n = parse_digits(&digits).ok_or_else(malformed)?;
            let scale = exponent - frac_part.len() as i64;
            let ten = BigInt::from(10u32);
            if scale >= 0 {
                BigRational::from_integer(n * num::pow(ten, scale as usize))
            } else {
                BigRational::new(n, num::pow(ten, (-scale) as usize))
            }
        };
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Sum<Rational> for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Sign of a rational, used by the out-degree-one contractibility rule.
pub(crate) fn sign(r: &Rational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn decimal_is_exact() {
        assert_eq!(r("0.1"), Rational::new(1, 10).unwrap());
        assert_eq!(r("0.1") + r("0.2"), r("0.3"));
        assert_eq!(r("2.50"), Rational::new(5, 2).unwrap());
        assert_eq!(r(".5"), Rational::new(1, 2).unwrap());
        assert_eq!(r("5."), Rational::from_integer(5));
        assert_eq!(r("+7"), Rational::from_integer(7));
        assert_eq!(r("1e-3"), Rational::new(1, 1000).unwrap());
        assert_eq!(r("2.5E2"), Rational::from_integer(250));
    }

    #[test]
    fn rational_literal() {
        assert_eq!(r("1/3"), Rational::new(1, 3).unwrap());
        assert_eq!(r("6/4"), Rational::new(3, 2).unwrap());
        assert_eq!(r("-2/4"), Rational::new(-1, 2).unwrap());
        assert_eq!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator("1/0".into()))
        );
    }

    #[test]
    fn malformed() {
        for bad in ["", "abc", "1..2", ".", "1/", "/2", "1/-2", "1e", "--1", "1.2.3", "0x10", "inf", "NaN"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn display() {
        assert_eq!(r("3").to_string(), "3");
        assert_eq!(r("39/13").to_string(), "3");
        assert_eq!(r("13/5").to_string(), "13/5");
        assert_eq!(r("-0.5").to_string(), "-1/2");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(r("3").to_sig_digits(12), "3");
        assert_eq!(r("13/5").to_sig_digits(12), "2.6");
        assert_eq!(r("1/3").to_sig_digits(12), "0.333333333333");
        assert_eq!(r("2/3").to_sig_digits(12), "0.666666666667");
        assert_eq!(r("-2/3").to_sig_digits(3), "-0.667");
        assert_eq!(r("9.9999").to_sig_digits(3), "10");
        assert_eq!(r("123456").to_sig_digits(3), "1.23e5");
        assert_eq!(r("0.000001234").to_sig_digits(3), "1.23e-6");
        assert_eq!(r("0.0001234").to_sig_digits(3), "0.000123");
        assert_eq!(r("0").to_sig_digits(12), "0");
        assert_eq!(r("100").to_sig_digits(3), "100");
    }

    #[test]
    fn ordering_is_exact() {
        assert!(r("1/3") < r("0.3333333333333333333334"));
        assert!(r("1/3") > r("0.3333333333333333333333"));
    }
}
