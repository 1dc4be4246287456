//! Complex numbers with arbitrary-precision rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;

/// Exact complex scalar `re + i·im` over the rationals.
///
/// `BigRational` keeps every value in lowest terms with a positive
/// denominator, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// `|z|` when it is rational.
    pub fn rational_modulus(&self) -> Option<BigRational> {
        rational_sqrt(&self.norm_sqr())
    }

    /// `z/|z|` when `|z|` is rational and nonzero.
    pub fn unit_phase(&self) -> Option<Self> {
        let m = self.rational_modulus()?;
        if m.is_zero() {
            return None;
        }
        Some(Self {
            re: &self.re / &m,
            im: &self.im / &m,
        })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

/// Exact square root of a nonnegative rational, if it is itself rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-5/2"` or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if s.contains(['e', 'E']) {
        let v: f64 = s.parse().map_err(|_| bad())?;
        return BigRational::from_float(v).ok_or_else(bad);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

fn fmt_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.re)),
            (true, false) => write!(f, "{}i", fmt_ratio(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}i",
                    fmt_ratio(&self.re),
                    sign,
                    fmt_ratio(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        // real operands dominate the workload
        if self.im.is_zero() && o.im.is_zero() {
            return ExactScalar::real(&self.re * &o.re);
        }
        ExactScalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; use [`ExactScalar::inv`] for a checked form.
    fn div(self, o: &ExactScalar) -> ExactScalar {
        self * &o.inv().expect("division by exact zero")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Wire form of a rational: `[numerator, denominator]` as decimal strings.
#[derive(Serialize, Deserialize)]
struct WireRatio(String, String);

#[derive(Serialize, Deserialize)]
struct WireScalar {
    re: WireRatio,
    im: WireRatio,
}

fn to_wire(q: &BigRational) -> WireRatio {
    WireRatio(q.numer().to_string(), q.denom().to_string())
}

fn from_wire(w: &WireRatio) -> Result<BigRational, AlgebraError> {
    let n = BigInt::from_str(&w.0).map_err(|_| AlgebraError::Parse(w.0.clone()))?;
    let d = BigInt::from_str(&w.1).map_err(|_| AlgebraError::Parse(w.1.clone()))?;
    if !d.is_positive() {
        return Err(AlgebraError::Parse(format!("denominator {}", w.1)));
    }
    let q = BigRational::new(n.clone(), d.clone());
    // interchange format requires lowest terms
    if q.numer() != &n || q.denom() != &d {
        return Err(AlgebraError::Parse(format!("{}/{} not in lowest terms", w.0, w.1)));
    }
    Ok(q)
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireScalar {
            re: to_wire(&self.re),
            im: to_wire(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WireScalar::deserialize(d)?;
        Ok(ExactScalar {
            re: from_wire(&w.re).map_err(D::Error::custom)?,
            im: from_wire(&w.im).map_err(D::Error::custom)?,
        })
    }
}

/// Serde adapter for a bare rational in `[num, den]` form.
pub mod wire_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        to_wire(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let w = WireRatio::deserialize(d)?;
        from_wire(&w).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = ExactScalar::i();
        assert_eq!(&i * &i, ExactScalar::from_int(-1));
    }

    #[test]
    fn lowest_terms_after_ops() {
        let a = ExactScalar::from_ratio(2, 4);
        assert_eq!(a.re.numer(), &BigInt::from(1));
        assert_eq!(a.re.denom(), &BigInt::from(2));
        let b = ExactScalar::from_ratio(1, -3);
        assert!(b.re.denom().is_positive());
        let c = &a + &ExactScalar::from_ratio(1, 2);
        assert!(c.is_one());
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = ExactScalar::gaussian(3, 4);
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert_eq!(ExactScalar::zero().inv(), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn wire_format() {
        let z = ExactScalar::new(
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
            BigRational::from_integer(BigInt::from(2)),
        );
        let j = serde_json::to_string(&z).unwrap();
        assert_eq!(j, r#"{"re":["-3","4"],"im":["2","1"]}"#);
        let back: ExactScalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<ExactScalar>(r#"{"re":["2","4"],"im":["0","1"]}"#).is_err());
        assert!(serde_json::from_str::<ExactScalar>(r#"{"re":["2","-4"],"im":["0","1"]}"#).is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-5/2").unwrap(), BigRational::new((-5).into(), 2.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn phase_of_unit_and_nonunit() {
        assert_eq!(ExactScalar::gaussian(0, -3).unit_phase(), Some(ExactScalar::gaussian(0, -1)));
        assert_eq!(
            ExactScalar::gaussian(3, 4).unit_phase(),
            Some(ExactScalar::new(
                BigRational::new(3.into(), 5.into()),
                BigRational::new(4.into(), 5.into())
            ))
        );
        assert_eq!(ExactScalar::gaussian(1, 1).unit_phase(), None);
    }

    #[test]
    fn display() {
        assert_eq!(ExactScalar::gaussian(0, -1).to_string(), "-1i");
        assert_eq!(ExactScalar::from_ratio(1, 2).to_string(), "1/2");
        assert_eq!(ExactScalar::gaussian(1, -2).to_string(), "1-2i");
    }
}
