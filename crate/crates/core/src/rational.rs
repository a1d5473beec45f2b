//! Exact-value helpers: parsing and rendering of arbitrary-precision rationals.
//!
//! Every exact quantity crosses the serialization boundary as a `"p/q"`
//! string paired with a decimal rendering; JSON numbers are never used
//! for exact values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Significant digits used for the decimal rendering of exact values.
pub const DECIMAL_DIGITS: usize = 15;

/// An exact rational together with its decimal rendering, as serialized in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    /// Canonical `"p"` or `"p/q"` form, fully reduced.
    pub exact: String,
    /// Decimal rendering to [`DECIMAL_DIGITS`] significant digits.
    pub decimal: String,
}

impl ExactValue {
    pub fn new(value: &BigRational) -> Self {
        ExactValue {
            exact: ratio_string(value),
            decimal: decimal_string(value, DECIMAL_DIGITS),
        }
    }
}

impl From<&BigRational> for ExactValue {
    fn from(value: &BigRational) -> Self {
        ExactValue::new(value)
    }
}

/// Canonical string form of a rational: `"p"` for integers, `"p/q"` otherwise.
pub fn ratio_string(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parse `"p"` or `"p/q"` into a reduced rational. Rejects zero denominators.
pub fn parse_ratio(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    match text.split_once('/') {
        None => text
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|e| format!("invalid integer {text:?}: {e}")),
        Some((num, den)) => {
            let num = num
                .trim()
                .parse::<BigInt>()
                .map_err(|e| format!("invalid numerator in {text:?}: {e}"))?;
            let den = den
                .trim()
                .parse::<BigInt>()
                .map_err(|e| format!("invalid denominator in {text:?}: {e}"))?;
            if den.is_zero() {
                return Err(format!("zero denominator in {text:?}"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Render a rational as a decimal string with `sig` significant digits,
/// rounding half away from zero and trimming trailing zeros.
///
/// Values with decimal exponent outside `[-6, 20]` switch to `d.dddde±k`
/// notation so magnitudes stay readable.
pub fn decimal_string(value: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let num = value.numer().abs();
    let den = value.denom().clone();

    // Decimal exponent e with 10^e <= num/den < 10^(e+1).
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let pow = |k: i64| -> BigInt { BigInt::from(10u32).pow(k.unsigned_abs() as u32) };
    // num/den >= 10^exp  <=>  num >= den * 10^exp.
    let ge_pow = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow(e)
        } else {
            &num * pow(-e) >= den
        }
    };
    if ge_pow(exp + 1) {
        exp += 1;
    } else if !ge_pow(exp) {
        exp -= 1;
    }

    // digits = round(num/den * 10^(sig-1-exp)), an integer with `sig` digits.
    let shift = sig as i64 - 1 - exp;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * pow(shift), den)
    } else {
        (num.clone(), &den * pow(-shift))
    };
    let mut digits = (&scaled_num * 2u32 + &scaled_den) / (&scaled_den * 2u32);
    let mut digit_str = digits.to_string();
    if digit_str.len() > sig {
        // Rounding carried over (e.g. 999.95 -> 1000): drop the extra digit.
        digits /= 10;
        exp += 1;
        digit_str = digits.to_string();
    }
    debug_assert_eq!(digit_str.len(), sig);

    let body = if (-6..=20).contains(&exp) {
        let mut s = if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= digit_str.len() {
                let zeros = int_len - digit_str.len();
                format!("{}{}", digit_str, "0".repeat(zeros))
            } else {
                format!("{}.{}", &digit_str[..int_len], &digit_str[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digit_str)
        };
        if s.contains('.') {
            s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        s
    } else {
        let mantissa = if digit_str.len() > 1 {
            let tail = digit_str[1..].trim_end_matches('0');
            if tail.is_empty() {
                digit_str[..1].to_string()
            } else {
                format!("{}.{}", &digit_str[..1], tail)
            }
        } else {
            digit_str.clone()
        };
        format!("{mantissa}e{exp}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Lossy conversion for display alongside exact values.
pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
