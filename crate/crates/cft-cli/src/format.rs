//! Command-line value parsing (complex numbers, exact rationals) and the
//! fixed-width JSON rendering used by every subcommand.

use std::str::FromStr;

use cft_core::{BigRational, Complex64};
use num_bigint::BigInt;
use serde_json::{Number, Value};

/// Parses "a+bi" / "a-bi" with optional whitespace, plus the degenerate
/// forms "a", "bi", "i", "-i". Exponents in either part are fine.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = |()| format!("malformed complex literal {input:?}, expected a+bi");
    let parse_part = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => f64::from_str(part).map_err(|_| bad(())),
        }
    };
    // Split at the last sign that is neither leading nor part of an
    // exponent; that sign starts the imaginary half.
    let split = s
        .char_indices()
        .rev()
        .find(|&(i, c)| {
            i > 0 && (c == '+' || c == '-') && !matches!(s.as_bytes()[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i);
    match (split, s.strip_suffix('i')) {
        (Some(i), Some(trimmed)) => Ok(Complex64::new(
            f64::from_str(&s[..i]).map_err(|_| bad(()))?,
            parse_part(&trimmed[i..])?,
        )),
        (None, Some(trimmed)) => Ok(Complex64::new(0.0, parse_part(trimmed)?)),
        (_, None) => Ok(Complex64::new(f64::from_str(&s).map_err(|_| bad(()))?, 0.0)),
    }
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rational(input: &str) -> Result<BigRational, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    BigRational::from_str(&s).map_err(|e| format!("malformed rational {input:?}: {e}"))
}

/// A float as a JSON number with 17 significant digits, deterministically.
pub fn fnum(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("fixed format is valid JSON"))
}

pub fn fcomplex(z: Complex64) -> Value {
    serde_json::json!({ "re": fnum(z.re), "im": fnum(z.im) })
}

/// An exact rational as its canonical string, "p/q" or "p".
pub fn frat(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

/// An exact big integer as an arbitrary-precision JSON number.
pub fn fbig(i: &BigInt) -> Value {
    Value::Number(Number::from_str(&i.to_string()).expect("integer is valid JSON"))
}
