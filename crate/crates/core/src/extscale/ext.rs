use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// Relative log-gap below which a subtraction is flagged as imprecise.
pub const CANCELLATION_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg = -1,
    Zero = 0,
    Pos = 1,
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self as i8) * (rhs as i8) {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }
}

/// A real number stored as a sign and the natural log of its magnitude.
///
/// `lnmag` is meaningless when the sign is zero and is kept at 0 there so
/// that derived equality behaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal {
    sign: Sign,
    lnmag: f64,
}

/// Result of an addition, with a flag for catastrophic cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtSum {
    pub value: ExtReal,
    pub cancellation: bool,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal {
        sign: Sign::Zero,
        lnmag: 0.0,
    };
    pub const ONE: ExtReal = ExtReal {
        sign: Sign::Pos,
        lnmag: 0.0,
    };

    /// Builds from a sign and log-magnitude. Panics on a NaN magnitude.
    pub fn new(sign: Sign, lnmag: f64) -> Self {
        assert!(!lnmag.is_nan(), "ExtReal magnitude is NaN");
        if sign == Sign::Zero {
            Self::ZERO
        } else {
            Self { sign, lnmag }
        }
    }

    /// The positive number e^lnmag.
    pub fn from_ln(lnmag: f64) -> Self {
        Self::new(Sign::Pos, lnmag)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "ExtReal from NaN");
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self::new(Sign::Pos, x.ln()),
            Some(Ordering::Less) => Self::new(Sign::Neg, (-x).ln()),
            _ => Self::ZERO,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn lnmag(&self) -> f64 {
        self.lnmag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_finite(&self) -> bool {
        self.lnmag.is_finite()
    }

    /// log₁₀ of the magnitude.
    pub fn log10(&self) -> f64 {
        self.lnmag / std::f64::consts::LN_10
    }

    /// Natural log; defined only for positive values.
    pub fn ln(&self) -> Option<f64> {
        (self.sign == Sign::Pos).then_some(self.lnmag)
    }

    /// The value as a double, possibly ±inf or 0 when out of range.
    pub fn to_f64(&self) -> f64 {
        (self.sign as i8) as f64 * self.lnmag.exp()
    }

    pub fn abs(&self) -> Self {
        if self.is_zero() {
            *self
        } else {
            Self::new(Sign::Pos, self.lnmag)
        }
    }

    /// self^p for positive self, or 0^p = 0 for p > 0.
    pub fn powf(&self, p: f64) -> Option<Self> {
        match self.sign {
            Sign::Pos => Some(Self::from_ln(self.lnmag * p)),
            Sign::Zero if p > 0.0 => Some(Self::ZERO),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> ExtSum {
        let exact = |value| ExtSum {
            value,
            cancellation: false,
        };
        if self.is_zero() {
            return exact(*other);
        }
        if other.is_zero() {
            return exact(*self);
        }
        let (big, small) = if self.lnmag >= other.lnmag {
            (self, other)
        } else {
            (other, self)
        };
        let gap = small.lnmag - big.lnmag; // ≤ 0
        if self.sign == other.sign {
            return exact(Self::new(big.sign, big.lnmag + gap.exp().ln_1p()));
        }
        let cancellation = -gap < CANCELLATION_GAP * big.lnmag.abs().max(1.0);
        if gap == 0.0 {
            return ExtSum {
                value: Self::ZERO,
                cancellation,
            };
        }
        ExtSum {
            value: Self::new(big.sign, big.lnmag + (-gap.exp_m1()).ln()),
            cancellation,
        }
    }

    pub fn sub(&self, other: &Self) -> ExtSum {
        self.add(&-*other)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        let sign = match self.sign {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
        };
        ExtReal::new(sign, self.lnmag)
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: ExtReal) -> ExtReal {
        ExtReal::new(self.sign * rhs.sign, self.lnmag + rhs.lnmag)
    }
}

impl Mul<f64> for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: f64) -> ExtReal {
        self * ExtReal::from_f64(rhs)
    }
}

impl Div for ExtReal {
    type Output = ExtReal;
    /// Division by zero panics.
    fn div(self, rhs: ExtReal) -> ExtReal {
        assert!(!rhs.is_zero(), "ExtReal division by zero");
        ExtReal::new(self.sign * rhs.sign, self.lnmag - rhs.lnmag)
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Ordering::Equal,
                Sign::Pos => self.lnmag.total_cmp(&other.lnmag),
                Sign::Neg => other.lnmag.total_cmp(&self.lnmag),
            },
            o => o,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            s => {
                let l10 = self.log10();
                let exp = l10.floor();
                let mant = 10f64.powf(l10 - exp);
                let minus = if s == Sign::Neg { "-" } else { "" };
                write!(f, "{minus}{mant:.6}e{exp}")
            }
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtReal", 3)?;
        st.serialize_field("sign", &(self.sign as i8))?;
        st.serialize_field("lnmag", &self.lnmag)?;
        st.serialize_field("log10", &self.log10())?;
        st.end()
    }
}
