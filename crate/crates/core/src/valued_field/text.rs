//! Text grammar for elements.
//!
//! ```text
//! p-adic   : rational                      e.g. "18", "-5/9"
//! series   : poly | "(" poly ")/(" poly ")"
//! poly     : term (("+" | "-") term)*
//! term     : [rational ["*"]] ["t" ["^" exponent]]
//! exponent : int | "(" int "/" int ")" | int "/" int
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::element::{FieldDescriptor, FieldElement};
use super::series::{Exp, Series};
use crate::error::{Error, Result};

fn err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what: "field element",
        input: input.to_string(),
        reason: reason.into(),
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn parse_exponent(s: &str) -> Option<Exp> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(s);
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().ok()?;
    let d: i64 = d.parse().ok()?;
    (d != 0).then(|| Rational64::new(n, d))
}

/// Splits a polynomial at top-level signs, keeping each sign with its term.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sign = (ch == '+' || ch == '-') && depth == 0 && prev != Some('^');
        if is_sign {
            if cur.trim().is_empty() {
                // leading or repeated sign
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                out.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    out.push((negative, cur));
    out
}

fn parse_term(raw: &str, whole: &str) -> Result<(Exp, BigRational)> {
    let term = raw.trim();
    if term.is_empty() {
        return Err(err(whole, "empty term"));
    }
    match term.find('t') {
        None => {
            let c = parse_rational(term).ok_or_else(|| err(whole, format!("bad coefficient `{term}`")))?;
            Ok((Exp::zero(), c))
        }
        Some(pos) => {
            let coeff = term[..pos].trim().trim_end_matches('*').trim();
            let c = if coeff.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff).ok_or_else(|| err(whole, format!("bad coefficient `{coeff}`")))?
            };
            let rest = term[pos + 1..].trim();
            let e = if rest.is_empty() {
                Exp::one()
            } else {
                let ex = rest
                    .strip_prefix('^')
                    .ok_or_else(|| err(whole, format!("unexpected `{rest}` after t")))?;
                parse_exponent(ex).ok_or_else(|| err(whole, format!("bad exponent `{ex}`")))?
            };
            Ok((e, c))
        }
    }
}

fn parse_poly(s: &str, whole: &str) -> Result<Series> {
    let mut acc: BTreeMap<Exp, BigRational> = BTreeMap::new();
    for (neg, raw) in split_terms(s) {
        let (e, c) = parse_term(&raw, whole)?;
        let c = if neg { -c } else { c };
        *acc.entry(e).or_insert_with(BigRational::zero) += c;
    }
    Ok(Series::from_map(acc))
}

/// Finds `(num)/(den)` at top level.
fn split_fraction(s: &str) -> Option<(&str, &str)> {
    let s = s.trim();
    if !s.starts_with('(') {
        return None;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    let rest = s[i + 1..].trim_start();
                    let den = rest.strip_prefix('/')?.trim();
                    let den = den.strip_prefix('(')?.strip_suffix(')')?;
                    return Some((&s[1..i], den));
                }
            }
            _ => {}
        }
    }
    None
}

impl FieldElement {
    pub fn parse(field: FieldDescriptor, input: &str) -> Result<FieldElement> {
        let s = input.trim();
        if s.is_empty() {
            return Err(err(input, "empty string"));
        }
        match field {
            FieldDescriptor::PAdic { .. } => {
                let q = parse_rational(s).ok_or_else(|| err(input, "expected `num/den`"))?;
                Ok(FieldElement::from_rational(field, q))
            }
            _ => {
                let (num, den) = match split_fraction(s) {
                    Some((n, d)) => (parse_poly(n, input)?, parse_poly(d, input)?),
                    None => (parse_poly(s, input)?, Series::one()),
                };
                if den.is_zero() {
                    return Err(err(input, "zero denominator"));
                }
                FieldElement::from_series(field, num, den).map_err(|e| match e {
                    Error::ExponentNotInGroup { .. } => err(input, e.to_string()),
                    other => other,
                })
            }
        }
    }
}

fn fmt_exponent(e: &Exp) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

fn fmt_term(e: &Exp, c: &BigRational) -> String {
    let c_abs = c.abs();
    if e.is_zero() {
        return c_abs.to_string();
    }
    let t = if e.is_one() {
        "t".to_string()
    } else {
        format!("t^{}", fmt_exponent(e))
    };
    if c_abs.is_one() {
        t
    } else {
        format!("{c_abs}*{t}")
    }
}

fn fmt_poly(s: &Series) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in s.terms.iter().enumerate() {
        let body = fmt_term(e, c);
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.rational_part() {
            return write!(f, "{q}");
        }
        let (num, den) = self.series_parts().expect("series");
        if den.is_one() {
            write!(f, "{}", fmt_poly(num))
        } else {
            write!(f, "({})/({})", fmt_poly(num), fmt_poly(den))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> FieldElement {
        FieldElement::parse(FieldDescriptor::TAdic, s).unwrap()
    }

    #[test]
    fn round_trips() {
        for s in ["0", "1", "-t", "t + t^2", "3/2*t^-2 - 5", "(1)/(1 + t)", "-1/7 + 2*t^3"] {
            let x = t(s);
            assert_eq!(t(&x.to_string()), x, "{s}");
        }
        let p = FieldElement::parse(FieldDescriptor::Puiseux, "t^(1/2) - 2*t^(3/2)").unwrap();
        assert_eq!(p.to_string(), "t^(1/2) - 2*t^(3/2)");
    }

    #[test]
    fn accepts_loose_forms() {
        assert_eq!(t("2t"), t("2*t"));
        assert_eq!(t("t^1 + t^-1"), t("(1 + t^2)/(t)"));
        assert_eq!(t("- 3"), t("-3"));
    }

    #[test]
    fn rejects_fractional_exponent_in_discrete_backend() {
        assert!(FieldElement::parse(FieldDescriptor::TAdic, "t^(1/2)").is_err());
        assert!(FieldElement::parse(FieldDescriptor::TAdic, "t^").is_err());
        assert!(FieldElement::parse(FieldDescriptor::TAdic, "(1)/(0)").is_err());
        assert!(FieldElement::parse(FieldDescriptor::TAdic, "").is_err());
    }

    #[test]
    fn p_adic_text() {
        let f = FieldDescriptor::p_adic(3).unwrap();
        let x = FieldElement::parse(f, "18/4").unwrap();
        assert_eq!(x.to_string(), "9/2");
    }
}

impl Serialize for super::element::Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords().iter().map(|c| c.to_string()))
    }
}
