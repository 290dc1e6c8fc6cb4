//! Serialization helpers. Floats are written as decimal strings carrying
//! every digit of the working precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use slchar_core::float::parse_decimal;
use slchar_core::series::ExactQSeries;
use slchar_core::{PrecComplex, PrecFloat};

use crate::CliError;

pub const SCHEMA: u32 = 1;

pub fn float(x: &PrecFloat) -> String {
    x.to_sci_string(x.decimal_digits())
}

pub fn float_digits(x: &PrecFloat, digits: usize) -> String {
    x.to_sci_string(digits)
}

pub fn complex(z: &PrecComplex) -> Value {
    json!({ "re": float(&z.re), "im": float(&z.im) })
}

pub fn rational(r: &BigRational) -> String {
    r.to_string()
}

/// Coefficients at `leading_exp + n` for integer `n`, below the truncation.
pub fn series_head(s: &ExactQSeries) -> (BigRational, Vec<String>) {
    let den = s.den() as i64;
    let lead = BigRational::new(BigInt::from(s.min_exp()), BigInt::from(den));
    let mut out = Vec::new();
    let mut e = s.min_exp();
    while e < s.trunc() {
        out.push(s.coeff(e).to_string());
        e += den;
    }
    (lead, out)
}

pub fn parse_real(text: &str, prec: u32) -> Result<PrecFloat, CliError> {
    parse_decimal(text)
        .map(|r| PrecFloat::from_rational(&r, prec))
        .ok_or_else(|| CliError::Usage(format!("not a number: {text:?}")))
}

/// `re,im`, or a bare real number.
pub fn parse_complex(text: &str, prec: u32) -> Result<PrecComplex, CliError> {
    match text.split_once(',') {
        Some((re, im)) => Ok(PrecComplex::new(parse_real(re, prec)?, parse_real(im, prec)?)),
        None => Ok(PrecComplex::from_real(parse_real(text, prec)?)),
    }
}

/// Comma-separated positive reals, each parsed exactly.
pub fn parse_positive_list(text: &str, prec: u32) -> Result<Vec<PrecFloat>, CliError> {
    text.split(',')
        .map(|t| {
            let x = parse_real(t.trim(), prec)?;
            if x.is_positive() {
                Ok(x)
            } else {
                Err(CliError::Usage(format!("expected a positive number, got {t:?}")))
            }
        })
        .collect()
}

pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    parse_decimal(text).ok_or_else(|| CliError::Usage(format!("not a rational: {text:?}")))
}
