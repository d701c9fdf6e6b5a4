use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Facet counts in the linear regime exceed `10^{10^4}`, far outside `f64`;
/// they are carried as `LogReal` end to end and only converted at output.
/// Zero is the unique value with `sign == 0`, and its `log_abs` is `-inf`.
#[derive(Clone, Copy, PartialEq)]
pub struct LogReal {
    sign: i8,
    log_abs: f64,
}

/// `ln(1 - e^z)` for `z <= 0`.
pub(crate) fn ln_1m_exp(z: f64) -> f64 {
    if z > -std::f64::consts::LN_2 {
        (-z.exp_m1()).ln()
    } else {
        (-z.exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        log_abs: 0.0,
    };

    /// Builds `sign * exp(log_abs)`. A zero sign or `log_abs == -inf` gives zero.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// The positive number `exp(ln)`.
    pub fn from_ln(ln: f64) -> Self {
        Self::new(1, ln)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of a positive value, `None` otherwise.
    pub fn ln(&self) -> Option<f64> {
        (self.sign > 0).then_some(self.log_abs)
    }

    /// Linear value; overflows to `±inf` and underflows to `±0`.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    /// Linear value when it is comfortably inside the `f64` range.
    pub fn to_f64_checked(&self) -> Option<f64> {
        (self.is_zero() || self.log_abs.abs() < 700.0).then(|| self.to_f64())
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.log_abs)
    }

    pub fn recip(self) -> Self {
        match self.sign {
            0 => Self::new(1, f64::INFINITY),
            s => Self::new(s, -self.log_abs),
        }
    }

    /// `self^p` for a nonnegative base.
    pub fn powf(self, p: f64) -> Self {
        match self.sign {
            0 if p > 0.0 => Self::ZERO,
            0 => Self::ONE,
            _ => Self::new(1, p * self.log_abs),
        }
    }
}

impl Default for LogReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogReal({:+} * e^{})", self.sign, self.log_abs)
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64_checked() {
            Some(v) => write!(f, "{v}"),
            None => {
                let dec = self.log_abs / std::f64::consts::LN_10;
                let mut exp = dec.floor();
                let mut mant = (10f64.powf(dec - exp) * 1e6).round() / 1e6;
                if mant >= 10.0 {
                    mant /= 10.0;
                    exp += 1.0;
                }
                let mant = mant * f64::from(self.sign);
                write!(f, "{mant:.6}e{exp}")
            }
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        LogReal::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        self * rhs.recip()
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal::new(-self.sign, self.log_abs)
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if big.log_abs == f64::INFINITY {
            return big;
        }
        let delta = small.log_abs - big.log_abs;
        if big.sign == small.sign {
            LogReal::new(big.sign, big.log_abs + delta.exp().ln_1p())
        } else if delta == 0.0 {
            LogReal::ZERO
        } else {
            LogReal::new(big.sign, big.log_abs + ln_1m_exp(delta))
        }
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_abs.partial_cmp(&other.log_abs),
                _ => other.log_abs.partial_cmp(&self.log_abs),
            },
            ord => Some(ord),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LogRealRepr {
    sign: i8,
    ln_abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

/// Serialized as `{sign, ln_abs, value}`; `ln_abs` is `null` for zero and
/// `value` is present only when `|ln_abs| < 700`.
impl Serialize for LogReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LogRealRepr {
            sign: self.sign,
            ln_abs: (!self.is_zero()).then_some(self.log_abs),
            value: self.to_f64_checked(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LogReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = LogRealRepr::deserialize(deserializer)?;
        Ok(match repr.ln_abs {
            None => LogReal::ZERO,
            Some(l) => LogReal::new(repr.sign, l),
        })
    }
}
