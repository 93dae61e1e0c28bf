//! Finitely supported generalized polynomials `Σ c_e t^e` and their fractions.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

pub(crate) type Exp = Rational64;

/// Terms sorted by ascending exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Series {
    pub(crate) terms: Vec<(Exp, BigRational)>,
}

impl Series {
    pub(crate) fn zero() -> Self {
        Series { terms: Vec::new() }
    }

    pub(crate) fn one() -> Self {
        Self::monomial(BigRational::one(), Exp::zero())
    }

    pub(crate) fn monomial(c: BigRational, e: Exp) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Series { terms: vec![(e, c)] }
        }
    }

    pub(crate) fn from_map(map: BTreeMap<Exp, BigRational>) -> Self {
        Series {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub(crate) fn lowest(&self) -> Option<&(Exp, BigRational)> {
        self.terms.first()
    }

    pub(crate) fn ord(&self) -> Option<Exp> {
        self.lowest().map(|t| t.0)
    }

    pub(crate) fn add(&self, other: &Series) -> Series {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                Ordering::Less => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((*ea, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Series { terms: out }
    }

    pub(crate) fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Series) -> Series {
        if self.is_zero() || other.is_zero() {
            return Series::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.shift(*e).scale(c);
        }
        if self.terms.len() == 1 {
            return other.mul(self);
        }
        let mut acc: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(*ea + *eb).or_insert_with(BigRational::zero);
                *slot += ca * cb;
            }
        }
        Series::from_map(acc)
    }

    pub(crate) fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Series::zero();
        }
        Series {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub(crate) fn shift(&self, by: Exp) -> Series {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e + by, c.clone())).collect(),
        }
    }

    fn exponent_denominator_lcm(&self) -> i64 {
        self.terms.iter().fold(1i64, |l, (e, _)| l.lcm(e.denom()))
    }

    /// Lexicographic structural order: exponents, then coefficients.
    pub(crate) fn structural_cmp(&self, other: &Series) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

/// Dense polynomial over Q, index = degree.
type Dense = Vec<BigRational>;

fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn to_dense(s: &Series, l: i64) -> Dense {
    // caller guarantees every exponent * l is a non-negative integer
    let deg = s
        .terms
        .last()
        .map(|(e, _)| (*e * l).to_integer() as usize)
        .unwrap_or(0);
    let mut out = vec![BigRational::zero(); deg + 1];
    for (e, c) in &s.terms {
        out[(*e * l).to_integer() as usize] = c.clone();
    }
    trim(&mut out);
    out
}

fn from_dense(p: &Dense, l: i64) -> Series {
    Series {
        terms: p
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Exp::new(i as i64, l), c.clone()))
            .collect(),
    }
}

/// Long division; returns (quotient, remainder).
fn divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut r = a.clone();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn gcd(a: &Dense, b: &Dense) -> Dense {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Brings `num/den` to canonical form: the denominator has lowest term `1·t^0`
/// and shares no nontrivial polynomial factor with the numerator.
pub(crate) fn reduce(num: Series, den: Series) -> (Series, Series) {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return (Series::zero(), Series::one());
    }
    let (de, dc) = den.lowest().cloned().unwrap();
    let inv = dc.recip();
    let mut num = num.shift(-de).scale(&inv);
    let mut den = den.shift(-de).scale(&inv);
    if den.terms.len() == 1 {
        return (num, den);
    }
    let ne = num.ord().unwrap();
    let num0 = num.shift(-ne);
    let l = num0
        .exponent_denominator_lcm()
        .lcm(&den.exponent_denominator_lcm());
    let pn = to_dense(&num0, l);
    let pd = to_dense(&den, l);
    let g = gcd(&pn, &pd);
    if g.len() > 1 {
        let (qn, _) = divrem(&pn, &g);
        let (qd, _) = divrem(&pd, &g);
        num = from_dense(&qn, l).shift(ne);
        den = from_dense(&qd, l);
        let c = den.lowest().unwrap().1.clone().recip();
        num = num.scale(&c);
        den = den.scale(&c);
    }
    (num, den)
}
