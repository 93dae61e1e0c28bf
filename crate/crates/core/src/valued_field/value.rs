//! Value-group elements, Dedekind cuts of radii, and leading-term data.
//!
//! Norms are written multiplicatively: `Theta(e)` stands for the norm of an
//! element with valuation `e`, so a larger exponent means a *smaller* norm.
//! `Theta(0)` is the norm of a unit.

use std::cmp::Ordering;
use std::fmt;

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

/// A norm `|x|`: either zero or `Theta(e)` with a rational exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormValue {
    Zero,
    Theta(Rational64),
}

impl NormValue {
    pub const ONE: NormValue = NormValue::Theta(Rational64::new_raw(0, 1));

    pub fn theta(exponent: i64) -> Self {
        NormValue::Theta(Rational64::from_integer(exponent))
    }

    pub fn theta_frac(numer: i64, denom: i64) -> Self {
        NormValue::Theta(Rational64::new(numer, denom))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn exponent(&self) -> Option<Rational64> {
        match self {
            NormValue::Zero => None,
            NormValue::Theta(e) => Some(*e),
        }
    }

    /// Product in the value group (exponents add).
    pub fn mul(self, other: NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Theta(a), NormValue::Theta(b)) => NormValue::Theta(a + b),
            _ => NormValue::Zero,
        }
    }

    /// Quotient `self / other`; `other` must be nonzero.
    pub fn ratio(self, other: NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Zero, _) => NormValue::Zero,
            (NormValue::Theta(a), NormValue::Theta(b)) => NormValue::Theta(a - b),
            (NormValue::Theta(_), NormValue::Zero) => panic!("norm ratio by zero"),
        }
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ordering::Equal,
            (NormValue::Zero, _) => Ordering::Less,
            (_, NormValue::Zero) => Ordering::Greater,
            // reversed: bigger exponent, smaller norm
            (NormValue::Theta(a), NormValue::Theta(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Zero => write!(f, "0"),
            NormValue::Theta(e) => write!(f, "Theta({e})"),
        }
    }
}

/// The infimum of a set of norms, recorded as a cut in the value group.
///
/// `attained == true` places the cut exactly at `norm`; `attained == false`
/// places it just above `norm` (the set approaches `norm` from above without
/// reaching it). Hence `(r, attained) < (r, approached)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CutValue {
    pub norm: NormValue,
    pub attained: bool,
}

impl CutValue {
    pub fn attained(norm: NormValue) -> Self {
        CutValue { norm, attained: true }
    }

    pub fn approached(norm: NormValue) -> Self {
        CutValue { norm, attained: false }
    }

    /// `v <= cut`
    pub fn admits_le(&self, v: NormValue) -> bool {
        v <= self.norm
    }

    /// `v < cut`
    pub fn admits_lt(&self, v: NormValue) -> bool {
        if self.attained {
            v < self.norm
        } else {
            v <= self.norm
        }
    }

    /// `v > cut`
    pub fn below(&self, v: NormValue) -> bool {
        v > self.norm
    }

    /// `v >= cut`
    pub fn below_or_at(&self, v: NormValue) -> bool {
        if self.attained {
            v >= self.norm
        } else {
            v > self.norm
        }
    }

    /// Three-way comparison of a value against the cut.
    pub fn compare_value(&self, v: NormValue) -> Ordering {
        if self.admits_lt(v) {
            Ordering::Less
        } else if self.below(v) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

impl Ord for CutValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm
            .cmp(&other.norm)
            .then_with(|| other.attained.cmp(&self.attained))
    }
}

impl PartialOrd for CutValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.attained {
            write!(f, "{}", self.norm)
        } else {
            write!(f, "{}+", self.norm)
        }
    }
}

/// Leading-term datum `rv(x)`: zero, or a norm exponent with a residue unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RvValue {
    Zero,
    Unit { exponent: Rational64, unit: BigRational },
}

impl RvValue {
    pub fn norm(&self) -> NormValue {
        match self {
            RvValue::Zero => NormValue::Zero,
            RvValue::Unit { exponent, .. } => NormValue::Theta(*exponent),
        }
    }

    pub fn unit(&self) -> Option<&BigRational> {
        match self {
            RvValue::Zero => None,
            RvValue::Unit { unit, .. } => Some(unit),
        }
    }

    pub fn new(exponent: Rational64, unit: BigRational) -> Self {
        assert!(!unit.is_zero(), "rv unit must be nonzero");
        RvValue::Unit { exponent, unit }
    }

    pub fn is_negative_unit(&self) -> bool {
        self.unit().is_some_and(|u| u.is_negative())
    }
}

impl fmt::Display for RvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RvValue::Zero => write!(f, "rv(0)"),
            RvValue::Unit { exponent, unit } => write!(f, "rv({unit}; {exponent})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_order_is_reversed_in_exponent() {
        assert!(NormValue::Zero < NormValue::theta(100));
        assert!(NormValue::theta(2) < NormValue::theta(1));
        assert!(NormValue::theta(-1) > NormValue::ONE);
        assert_eq!(NormValue::theta(1).mul(NormValue::theta(2)), NormValue::theta(3));
    }

    #[test]
    fn cut_order_puts_attained_first() {
        let r = NormValue::theta(2);
        assert!(CutValue::attained(r) < CutValue::approached(r));
        assert!(CutValue::approached(r) < CutValue::attained(NormValue::theta(1)));
        assert!(CutValue::approached(NormValue::Zero) < CutValue::attained(r));
    }

    #[test]
    fn cut_value_comparisons() {
        let r = NormValue::theta(2);
        let open = CutValue::approached(r);
        let closed = CutValue::attained(r);
        assert!(closed.admits_le(r) && open.admits_le(r));
        assert!(!closed.admits_lt(r));
        assert!(open.admits_lt(r));
        assert!(open.below(NormValue::theta(1)));
        assert!(closed.below_or_at(r) && !open.below_or_at(r));
        assert_eq!(closed.compare_value(r), Ordering::Equal);
        assert_eq!(open.compare_value(r), Ordering::Less);
    }

    #[test]
    fn dense_midpoint() {
        let a = NormValue::theta(1);
        let b = NormValue::theta(2);
        let mid = NormValue::theta_frac(3, 2);
        assert!(b < mid && mid < a);
    }
}

mod serde_impls {
    use num_rational::Rational64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{CutValue, NormValue};

    /// Exponents are written as JSON integers when integral, otherwise as "p/q".
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Ord {
        Int(i64),
        Text(String),
    }

    fn to_ord(e: Rational64) -> Ord {
        if e.is_integer() {
            Ord::Int(e.to_integer())
        } else {
            Ord::Text(format!("{}/{}", e.numer(), e.denom()))
        }
    }

    fn from_ord(o: Ord) -> Result<Rational64, String> {
        match o {
            Ord::Int(n) => Ok(Rational64::from_integer(n)),
            Ord::Text(s) => {
                let (n, d) = s.split_once('/').unwrap_or((&s, "1"));
                let n: i64 = n.trim().parse().map_err(|_| format!("bad exponent `{s}`"))?;
                let d: i64 = d.trim().parse().map_err(|_| format!("bad exponent `{s}`"))?;
                if d == 0 {
                    return Err(format!("bad exponent `{s}`"));
                }
                Ok(Rational64::new(n, d))
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    struct RawNorm {
        ord: Option<Ord>,
    }

    #[derive(Serialize, Deserialize)]
    struct RawCut {
        ord: Option<Ord>,
        attained: bool,
    }

    fn norm_of(ord: Option<Ord>) -> Result<NormValue, String> {
        Ok(match ord {
            None => NormValue::Zero,
            Some(o) => NormValue::Theta(from_ord(o)?),
        })
    }

    impl Serialize for NormValue {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            RawNorm {
                ord: self.exponent().map(to_ord),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for NormValue {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            norm_of(RawNorm::deserialize(d)?.ord).map_err(D::Error::custom)
        }
    }

    impl Serialize for CutValue {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            RawCut {
                ord: self.norm.exponent().map(to_ord),
                attained: self.attained,
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for CutValue {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = RawCut::deserialize(d)?;
            Ok(CutValue {
                norm: norm_of(raw.ord).map_err(D::Error::custom)?,
                attained: raw.attained,
            })
        }
    }

    pub(crate) fn parse_exponent_json(v: &serde_json::Value) -> Result<Rational64, String> {
        let o: Ord = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        from_ord(o)
    }
}

pub(crate) use serde_impls::parse_exponent_json;
