use std::fmt;
use std::str::FromStr;

use num::traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{int, parse_scalar, rational_power, Scalar};

/// Named distortion functions `g : [0, ∞) → [0, ∞)`. Each is nondecreasing,
/// concave, continuous at 0 and maps 0 to 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DistortionId {
    Identity,
    Sqrt,
    /// `x / (1 + x)`
    XOver1px,
    /// `min(1, 2x)`
    Cap2x,
    /// `x^(num/den)` with `0 < num/den ≤ 1`.
    Power { num: u32, den: u32 },
}

impl DistortionId {
    pub fn power(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidRule(format!("power exponent {num}/{den} outside (0, 1]")));
        }
        Ok(DistortionId::Power { num, den })
    }

    /// Exact value where one exists; otherwise a floored 40-digit rational
    /// and `false`.
    pub fn apply(&self, x: &Scalar) -> (Scalar, bool) {
        match self {
            DistortionId::Identity => (x.clone(), true),
            DistortionId::Sqrt => rational_power(x, 1, 2),
            DistortionId::XOver1px => (x / (Scalar::one() + x), true),
            DistortionId::Cap2x => {
                let two_x = x * int(2);
                (if two_x > Scalar::one() { Scalar::one() } else { two_x }, true)
            }
            DistortionId::Power { num, den } => {
                if x.is_zero() {
                    (Scalar::zero(), true)
                } else {
                    rational_power(x, *num, *den)
                }
            }
        }
    }

    pub fn apply_f64(&self, x: f64) -> f64 {
        match self {
            DistortionId::Identity => x,
            DistortionId::Sqrt => x.sqrt(),
            DistortionId::XOver1px => x / (1.0 + x),
            DistortionId::Cap2x => (2.0 * x).min(1.0),
            DistortionId::Power { num, den } => x.powf(*num as f64 / *den as f64),
        }
    }
}

impl fmt::Display for DistortionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistortionId::Identity => f.write_str("identity"),
            DistortionId::Sqrt => f.write_str("sqrt"),
            DistortionId::XOver1px => f.write_str("x_over_1px"),
            DistortionId::Cap2x => f.write_str("cap2x"),
            DistortionId::Power { num, den } => write!(f, "power({num}/{den})"),
        }
    }
}

impl FromStr for DistortionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "identity" => Ok(DistortionId::Identity),
            "sqrt" => Ok(DistortionId::Sqrt),
            "x_over_1px" => Ok(DistortionId::XOver1px),
            "cap2x" => Ok(DistortionId::Cap2x),
            _ => {
                let p = t
                    .strip_prefix("power(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown distortion {t:?}")))?;
                let p = parse_scalar(p)?;
                let num = u32::try_from(p.numer()).map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
                let den = u32::try_from(p.denom()).map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
                DistortionId::power(num, den)
            }
        }
    }
}

impl Serialize for DistortionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
