//! Sparse multivariate Laurent polynomials over `Q` with named generators.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Product of generators with integer (possibly negative) exponents.
/// Zero exponents are never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<String, i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial::from_pairs([(name, 1)])
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut m = Monomial::one();
        for (name, e) in pairs {
            m.mul_var(name, e);
        }
        m
    }

    fn mul_var(&mut self, name: &str, e: i64) {
        if e == 0 {
            return;
        }
        let entry = self.0.entry(name.to_string()).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.0.remove(name);
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (name, e) in other.exponents() {
            out.mul_var(name, e);
        }
        out
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|(n, e)| (n.clone(), e * k)).collect())
    }

    pub fn evaluate(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (name, e) in self.exponents() {
            let value = assignment
                .get(name)
                .ok_or_else(|| Error::MissingAssignment(name.to_string()))?;
            if value.is_zero() && e < 0 {
                return Err(Error::PoleAtPoint);
            }
            acc *= pow_rational(value, e);
        }
        Ok(acc)
    }
}

pub(crate) fn pow_rational(value: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { value.recip() } else { value.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents()
            .map(|(n, e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        LaurentPoly::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        LaurentPoly::term(BigRational::one(), Monomial::var(name))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Generators occurring with a nonzero exponent.
    pub fn generators(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().map(|(n, _)| n.to_string()))
            .collect()
    }

    /// Largest exponent of `name` over all terms (0 for absent generators).
    pub fn max_degree(&self, name: &str) -> i64 {
        self.terms.keys().map(|m| m.exponent(name)).max().unwrap_or(0).max(0)
    }

    pub fn min_degree(&self, name: &str) -> i64 {
        self.terms.keys().map(|m| m.exponent(name)).min().unwrap_or(0).min(0)
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(), |acc, _| &acc * self)
    }

    /// Substitute `name -> name^{-1}`.
    pub fn invert_generator(&self, name: &str) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(name);
            out.add_term(m.mul(&Monomial::from_pairs([(name, -2 * e)])), c.clone());
        }
        out
    }

    /// Substitute the rational `value` for the generator `name`.
    pub fn specialize(&self, name: &str, value: &BigRational) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(name);
            if value.is_zero() && e < 0 {
                return Err(Error::PoleAtPoint);
            }
            let rest = m.mul(&Monomial::from_pairs([(name, -e)]));
            out.add_term(rest, c * pow_rational(value, e));
        }
        Ok(out)
    }

    pub fn evaluate(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * m.evaluate(assignment)?;
        }
        Ok(acc)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&format_rational(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&magnitude))?;
            }
        }
        Ok(())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        super::parse_rational(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses expanded sums such as `1 - 2/3*X^2*T^-1 + b1`. Generators are
    /// identifiers (letters, digits, `_`, starting with a letter or `_`).
    fn from_str(s: &str) -> Result<Self> {
        let mut out = LaurentPoly::zero();
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // split into signed terms; a sign right after '^' or '(' belongs to an exponent
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let mut negative = false;
            while pos < chars.len() && matches!(chars[pos], '+' | '-') {
                negative ^= chars[pos] == '-';
                pos += 1;
            }
            let start = pos;
            while pos < chars.len()
                && !(matches!(chars[pos], '+' | '-') && !matches!(chars[pos - 1], '^' | '('))
            {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Parse(format!("dangling sign in '{s}'")));
            }
            terms.push((negative, chars[start..pos].iter().collect()));
        }

        for (negative, term) in terms {
            let mut coef = BigRational::one();
            let mut mono = Monomial::one();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in '{term}'")));
                }
                let first = factor.chars().next().unwrap();
                if first.is_ascii_digit() {
                    coef *= parse_rational(factor)?;
                } else if first.is_alphabetic() || first == '_' {
                    let (name, exp) = match factor.split_once('^') {
                        None => (factor, 1),
                        Some((name, e)) => {
                            let e = e.trim_start_matches('(').trim_end_matches(')');
                            let e: i64 = e.parse().map_err(|_| {
                                Error::Parse(format!("invalid exponent in '{factor}'"))
                            })?;
                            (name, e)
                        }
                    };
                    if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(Error::Parse(format!("invalid generator '{name}'")));
                    }
                    mono.mul_var(name, exp);
                } else {
                    return Err(Error::Parse(format!("unexpected factor '{factor}'")));
                }
            }
            if negative {
                coef = -coef;
            }
            out.add_term(mono, coef);
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ring_examples() {
        let a = p("1 + X*T - 3/2*Q^-2");
        assert_eq!(&a + &LaurentPoly::zero(), a);
        assert_eq!(p("1 - X*T") * p("1 + X*T"), p("1 - X^2*T^2"));
        assert_eq!(&a - &a, LaurentPoly::zero());
        assert_eq!(p("Q^-1") * p("Q"), LaurentPoly::one());
    }

    #[test]
    fn parse_and_render() {
        let a = p("1 - X*Q^-2*T");
        assert_eq!(a.to_string(), "1 - Q^-2*T*X");
        assert_eq!(p("-x_1_1 + 2/3*b1^3").to_string(), "2/3*b1^3 - x_1_1");
        assert_eq!(p("0"), LaurentPoly::zero());
        assert_eq!(p("2 - -X"), p("2 + X"));
        assert!("1 +".parse::<LaurentPoly>().is_err());
        assert!("1 + $".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn evaluation() {
        let f = p("1 - X*T");
        let mut at = BTreeMap::new();
        at.insert("X".to_string(), q(1, 1));
        at.insert("T".to_string(), q(1, 4));
        assert_eq!(f.evaluate(&at).unwrap(), q(3, 4));
        at.remove("X");
        assert_eq!(f.evaluate(&at), Err(Error::MissingAssignment("X".into())));
        at.insert("X".to_string(), q(0, 1));
        assert_eq!(p("X^-1").evaluate(&at), Err(Error::PoleAtPoint));
    }

    #[test]
    fn specialize_and_invert() {
        let f = p("1 - b1*T - b1^-1*T");
        assert_eq!(f.invert_generator("b1"), f);
        assert_eq!(f.specialize("b1", &q(2, 1)).unwrap(), p("1 - 5/2*T"));
        assert_eq!(p("3*X^2").max_degree("X"), 2);
        assert_eq!(p("3*X^-2").min_degree("X"), -2);
        assert_eq!(p("X*b1 + T").generators().len(), 3);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        let term = (-3i64..4, 1i64..3, -2i64..3, -2i64..3, -1i64..2);
        proptest::collection::vec(term, 0..5).prop_map(|terms| {
            terms.into_iter().fold(LaurentPoly::zero(), |acc, (n, d, a, b, c)| {
                let m = Monomial::from_pairs([("X", a), ("T", b), ("b1", c)]);
                &acc + &LaurentPoly::term(q(n, d), m)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn display_parses_back(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }
    }
}
