use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::series::{reduce, Exp, Series};
use super::value::{NormValue, RvValue};
use crate::error::{Error, Result};

/// Which computable valued field an element lives in.
///
/// `TAdic` is `Q(t)` with the `t`-adic norm, `Puiseux` allows rational
/// exponents (dense value group), `PAdic` is `Q` with the `p`-adic norm and
/// exists to exhibit mixed characteristic behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor", into = "RawDescriptor")]
pub enum FieldDescriptor {
    TAdic,
    Puiseux,
    PAdic { prime: u64 },
}

#[derive(Serialize, Deserialize)]
struct RawDescriptor {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
}

impl TryFrom<RawDescriptor> for FieldDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        let field = match raw.kind.as_str() {
            "t-adic" => FieldDescriptor::TAdic,
            "puiseux" => FieldDescriptor::Puiseux,
            "p-adic" => FieldDescriptor::PAdic {
                prime: raw
                    .prime
                    .ok_or_else(|| Error::InvalidField("p-adic field needs `prime`".into()))?,
            },
            other => {
                return Err(Error::InvalidField(format!(
                    "unknown field kind `{other}` in `kind` (expected t-adic, puiseux or p-adic)"
                )))
            }
        };
        if raw.prime.is_some() && !matches!(field, FieldDescriptor::PAdic { .. }) {
            return Err(Error::InvalidField(format!(
                "`prime` given for {} field",
                raw.kind
            )));
        }
        field.validate()?;
        Ok(field)
    }
}

impl From<FieldDescriptor> for RawDescriptor {
    fn from(f: FieldDescriptor) -> Self {
        RawDescriptor {
            kind: f.kind_name().to_string(),
            prime: match f {
                FieldDescriptor::PAdic { prime } => Some(prime),
                _ => None,
            },
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDescriptor {
    pub fn p_adic(prime: u64) -> Result<Self> {
        let f = FieldDescriptor::PAdic { prime };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldDescriptor::PAdic { prime } if !is_prime(*prime) => {
                Err(Error::InvalidField(format!("{prime} is not prime")))
            }
            _ => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FieldDescriptor::TAdic => "t-adic",
            FieldDescriptor::Puiseux => "puiseux",
            FieldDescriptor::PAdic { .. } => "p-adic",
        }
    }

    /// Discrete value group (a minimal norm above 1 exists).
    pub fn is_discrete(&self) -> bool {
        !matches!(self, FieldDescriptor::Puiseux)
    }

    pub fn is_mixed_characteristic(&self) -> bool {
        matches!(self, FieldDescriptor::PAdic { .. })
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            FieldDescriptor::PAdic { prime } => Some(*prime),
            _ => None,
        }
    }

    pub fn exponent_in_group(&self, e: Rational64) -> bool {
        !self.is_discrete() || e.is_integer()
    }

    fn check_exponent(&self, e: Rational64) -> Result<()> {
        if self.exponent_in_group(e) {
            Ok(())
        } else {
            Err(Error::ExponentNotInGroup {
                exponent: e.to_string(),
                field: self.to_string(),
            })
        }
    }

    /// Product in RV: exponents add, units multiply (mod p for p-adic).
    pub fn rv_mul(&self, a: &RvValue, b: &RvValue) -> RvValue {
        match (a, b) {
            (
                RvValue::Unit {
                    exponent: ea,
                    unit: ua,
                },
                RvValue::Unit {
                    exponent: eb,
                    unit: ub,
                },
            ) => {
                let unit = match self {
                    FieldDescriptor::PAdic { prime } => {
                        let p = BigInt::from(*prime);
                        let u = (ua.to_integer() * ub.to_integer()).mod_floor(&p);
                        BigRational::from_integer(u)
                    }
                    _ => ua * ub,
                };
                RvValue::Unit {
                    exponent: *ea + *eb,
                    unit,
                }
            }
            _ => RvValue::Zero,
        }
    }

    /// The canonical element `unit · t^e` (or `unit · p^e`) with the given rv.
    pub fn rv_representative(&self, rv: &RvValue) -> Result<FieldElement> {
        match rv {
            RvValue::Zero => Ok(FieldElement::zero(*self)),
            RvValue::Unit { exponent, unit } => FieldElement::monomial(*self, unit.clone(), *exponent),
        }
    }

    /// Normalizes a unit as stored in an rv value (digit in `1..p` for p-adic).
    pub fn normalize_unit(&self, unit: &BigRational) -> Result<BigRational> {
        if unit.is_zero() {
            return Err(Error::Precondition("rv unit must be nonzero".into()));
        }
        match self {
            FieldDescriptor::PAdic { prime } => {
                let p = BigInt::from(*prime);
                let n = unit.numer().mod_floor(&p);
                let d = unit.denom().mod_floor(&p);
                if n.is_zero() || d.is_zero() {
                    return Err(Error::Precondition(format!(
                        "{unit} is not a {prime}-adic unit"
                    )));
                }
                Ok(BigRational::from_integer(
                    (n * mod_inverse(&d, &p)).mod_floor(&p),
                ))
            }
            _ => Ok(unit.clone()),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::PAdic { prime } => write!(f, "{prime}-adic"),
            other => write!(f, "{}", other.kind_name()),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

fn p_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// canonical `num/den`, see [`reduce`]
    Series { num: Series, den: Series },
    Rational(BigRational),
}

/// An exact element of one of the supported fields, kept in canonical form so
/// that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldDescriptor,
    repr: Repr,
}

impl FieldElement {
    pub fn zero(field: FieldDescriptor) -> Self {
        match field {
            FieldDescriptor::PAdic { .. } => FieldElement {
                field,
                repr: Repr::Rational(BigRational::zero()),
            },
            _ => FieldElement {
                field,
                repr: Repr::Series {
                    num: Series::zero(),
                    den: Series::one(),
                },
            },
        }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: FieldDescriptor, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: FieldDescriptor, n: i64, d: i64) -> Self {
        Self::from_rational(field, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(field: FieldDescriptor, q: BigRational) -> Self {
        match field {
            FieldDescriptor::PAdic { .. } => FieldElement {
                field,
                repr: Repr::Rational(q),
            },
            _ => FieldElement {
                field,
                repr: Repr::Series {
                    num: Series::monomial(q, Exp::zero()),
                    den: Series::one(),
                },
            },
        }
    }

    /// `c · t^e`, or `c · p^e` in the p-adic backend.
    pub fn monomial(field: FieldDescriptor, c: BigRational, e: Rational64) -> Result<Self> {
        field.check_exponent(e)?;
        Ok(match field {
            FieldDescriptor::PAdic { prime } => {
                let p = BigRational::from_integer(BigInt::from(prime));
                FieldElement {
                    field,
                    repr: Repr::Rational(c * p.pow(e.to_integer() as i32)),
                }
            }
            _ => FieldElement {
                field,
                repr: Repr::Series {
                    num: Series::monomial(c, e),
                    den: Series::one(),
                },
            },
        })
    }

    /// The uniformizer power of norm `Theta(e)`.
    pub fn uniformizer_pow(field: FieldDescriptor, e: Rational64) -> Result<Self> {
        Self::monomial(field, BigRational::one(), e)
    }

    /// An element whose norm is exactly `n`.
    pub fn of_norm(field: FieldDescriptor, n: NormValue) -> Result<Self> {
        match n {
            NormValue::Zero => Ok(Self::zero(field)),
            NormValue::Theta(e) => Self::uniformizer_pow(field, e),
        }
    }

    /// Builds a series-backend fraction from raw term lists.
    pub(crate) fn from_series(field: FieldDescriptor, num: Series, den: Series) -> Result<Self> {
        if matches!(field, FieldDescriptor::PAdic { .. }) {
            return Err(Error::Precondition("series data for a p-adic field".into()));
        }
        for (e, _) in num.terms.iter().chain(&den.terms) {
            field.check_exponent(*e)?;
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = reduce(num, den);
        Ok(FieldElement {
            field,
            repr: Repr::Series { num, den },
        })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Series { num, .. } => num.is_zero(),
            Repr::Rational(q) => q.is_zero(),
        }
    }

    /// The value as a plain rational, when it is one (constant series or p-adic).
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q.clone()),
            Repr::Series { num, den } => {
                if !den.is_one() {
                    return None;
                }
                match num.terms.as_slice() {
                    [] => Some(BigRational::zero()),
                    [(e, c)] if e.is_zero() => Some(c.clone()),
                    _ => None,
                }
            }
        }
    }

    pub(crate) fn series_parts(&self) -> Option<(&Series, &Series)> {
        match &self.repr {
            Repr::Series { num, den } => Some((num, den)),
            Repr::Rational(_) => None,
        }
    }

    pub(crate) fn rational_part(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Series { .. } => None,
        }
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            })
        }
    }

    fn series(field: FieldDescriptor, num: Series, den: Series) -> Self {
        let (num, den) = if den.is_one() {
            (num, den)
        } else {
            reduce(num, den)
        };
        FieldElement {
            field,
            repr: Repr::Series { num, den },
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement {
                field: self.field,
                repr: Repr::Rational(a + b),
            },
            (Repr::Series { num: n1, den: d1 }, Repr::Series { num: n2, den: d2 }) => {
                if d1 == d2 {
                    Self::series(self.field, n1.add(n2), d1.clone())
                } else if d1.is_one() {
                    Self::series(self.field, n1.mul(d2).add(n2), d2.clone())
                } else if d2.is_one() {
                    Self::series(self.field, n1.add(&n2.mul(d1)), d1.clone())
                } else {
                    Self::series(self.field, n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
                }
            }
            _ => unreachable!("representation follows the field"),
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement {
                field: self.field,
                repr: Repr::Rational(a * b),
            },
            (Repr::Series { num: n1, den: d1 }, Repr::Series { num: n2, den: d2 }) => {
                if n1.is_zero() || n2.is_zero() {
                    return Ok(Self::zero(self.field));
                }
                Self::series(self.field, n1.mul(n2), d1.mul(d2))
            }
            _ => unreachable!("representation follows the field"),
        })
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement {
                field: self.field,
                repr: Repr::Rational(a / b),
            },
            (Repr::Series { num: n1, den: d1 }, Repr::Series { num: n2, den: d2 }) => {
                Self::series(self.field, n1.mul(d2), d1.mul(n2))
            }
            _ => unreachable!("representation follows the field"),
        })
    }

    pub fn recip(&self) -> Result<FieldElement> {
        Self::one(self.field).try_div(self)
    }

    fn neg_ref(&self) -> FieldElement {
        FieldElement {
            field: self.field,
            repr: match &self.repr {
                Repr::Rational(q) => Repr::Rational(-q),
                Repr::Series { num, den } => Repr::Series {
                    num: num.neg(),
                    den: den.clone(),
                },
            },
        }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        self * &FieldElement::from_rational(self.field, q.clone())
    }

    pub fn norm(&self) -> NormValue {
        match &self.repr {
            Repr::Series { num, .. } => match num.ord() {
                None => NormValue::Zero,
                Some(e) => NormValue::Theta(e),
            },
            Repr::Rational(q) => {
                if q.is_zero() {
                    return NormValue::Zero;
                }
                let p = BigInt::from(self.field.prime().expect("p-adic"));
                let v = p_valuation(q.numer(), &p) - p_valuation(q.denom(), &p);
                NormValue::theta(v)
            }
        }
    }

    pub fn rv(&self) -> RvValue {
        match &self.repr {
            Repr::Series { num, .. } => match num.lowest() {
                None => RvValue::Zero,
                Some((e, c)) => RvValue::Unit {
                    exponent: *e,
                    unit: c.clone(),
                },
            },
            Repr::Rational(q) => {
                if q.is_zero() {
                    return RvValue::Zero;
                }
                let prime = self.field.prime().expect("p-adic");
                let p = BigInt::from(prime);
                let vn = p_valuation(q.numer(), &p);
                let vd = p_valuation(q.denom(), &p);
                let n = q.numer() / p.pow(vn as u32);
                let d = q.denom() / p.pow(vd as u32);
                let digit = (n.mod_floor(&p) * mod_inverse(&d.mod_floor(&p), &p)).mod_floor(&p);
                RvValue::Unit {
                    exponent: Rational64::from_integer(vn - vd),
                    unit: BigRational::from_integer(digit),
                }
            }
        }
    }

    /// `|self − other|`, with a merge-walk fast path for polynomials.
    pub fn dist(&self, other: &FieldElement) -> NormValue {
        if let (
            Repr::Series { num: n1, den: d1 },
            Repr::Series { num: n2, den: d2 },
        ) = (&self.repr, &other.repr)
        {
            if d1.is_one() && d2.is_one() {
                return first_difference(n1, n2);
            }
        }
        (self - other).norm()
    }

    /// Deterministic total order: by norm, then structurally.
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        self.norm().cmp(&other.norm()).then_with(|| match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Series { num: n1, den: d1 }, Repr::Series { num: n2, den: d2 }) => {
                n1.structural_cmp(n2).then_with(|| d1.structural_cmp(d2))
            }
            (Repr::Rational(_), _) => Ordering::Less,
            (_, Repr::Rational(_)) => Ordering::Greater,
        })
    }

}

fn first_difference(a: &Series, b: &Series) -> NormValue {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.terms.get(i), b.terms.get(j)) {
            (None, None) => return NormValue::Zero,
            (Some((e, _)), None) | (None, Some((e, _))) => return NormValue::Theta(*e),
            (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                Ordering::Less => return NormValue::Theta(*ea),
                Ordering::Greater => return NormValue::Theta(*eb),
                Ordering::Equal => {
                    if ca != cb {
                        return NormValue::Theta(*ea);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .kind_name()
            .cmp(other.field.kind_name())
            .then_with(|| self.canonical_cmp(other))
    }
}

// Operator forms panic on backend mismatch; use the `try_*` methods at API
// boundaries where inputs are not yet validated.
macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

/// A point of `K^n` with the max norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        let first = coords.first().ok_or(Error::EmptyInput("point coordinates"))?;
        for c in &coords[1..] {
            first.same_field(c)?;
        }
        Ok(Point { coords })
    }

    pub fn scalar(x: FieldElement) -> Self {
        Point { coords: vec![x] }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.coords[0].field()
    }

    pub fn max_norm(&self) -> NormValue {
        self.coords.iter().map(FieldElement::norm).max().unwrap()
    }

    /// Max-norm distance; dimensions must agree.
    pub fn dist(&self, other: &Point) -> NormValue {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.dist(b))
            .max()
            .unwrap()
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Drops the first coordinate.
    pub fn tail(&self) -> Point {
        assert!(self.dim() >= 2, "tail of a 1-dimensional point");
        Point {
            coords: self.coords[1..].to_vec(),
        }
    }

    pub fn prepend(&self, x: FieldElement) -> Point {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(x);
        coords.extend(self.coords.iter().cloned());
        Point { coords }
    }

    pub fn canonical_cmp(&self, other: &Point) -> Ordering {
        self.max_norm().cmp(&other.max_norm()).then_with(|| {
            for (a, b) in self.coords.iter().zip(&other.coords) {
                let o = a.canonical_cmp(b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.dim().cmp(&other.dim())
        })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Result of [`integer_average`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Average {
    pub value: FieldElement,
    /// Set when the count has norm `< 1`, i.e. dividing by it can enlarge norms.
    pub hypothesis_warning: bool,
}

/// `(Σ values) / count`.
pub fn integer_average<'a, I>(values: I) -> Result<Average>
where
    I: IntoIterator<Item = &'a FieldElement>,
{
    let mut it = values.into_iter();
    let first = it.next().ok_or(Error::EmptyInput("integer_average"))?;
    let mut sum = first.clone();
    let mut count: i64 = 1;
    for v in it {
        sum = sum.try_add(v)?;
        count += 1;
    }
    let field = first.field();
    let n = FieldElement::from_int(field, count);
    let warning = n.norm() < NormValue::ONE;
    let value = if count == 1 { sum } else { sum.try_div(&n)? };
    Ok(Average {
        value,
        hypothesis_warning: warning,
    })
}

pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
