//! Unramified local L-factors as exact rational functions.
//!
//! Generators: `Q = q^{1/2}`, `T = q^{-s}`, `X = μ(ϖ)` for the character and
//! `b1, …, bm` for the Satake parameters `q^{α_k}`. A factor
//! `L(s + c, μ^t)` with half-integral `c` is `1 / (1 - X^t Q^{-2c} T^t)`,
//! so everything stays a Laurent polynomial in these generators.
//!
//! Rational functions are kept in factored form. Equality is decided by
//! cross-multiplication after cancelling structurally identical factors;
//! no polynomial gcd is ever computed.

mod poly;

pub use poly::{rational_serde, LaurentPoly, Monomial};
pub use poly::{format_rational, parse_rational};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const GEN_Q: &str = "Q";
pub const GEN_T: &str = "T";
pub const GEN_X: &str = "X";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFunction {
    numerator: Vec<LaurentPoly>,
    denominator: Vec<LaurentPoly>,
}

fn product(factors: &[LaurentPoly]) -> LaurentPoly {
    factors.iter().fold(LaurentPoly::one(), |acc, f| &acc * f)
}

/// Removes factors common to both lists (as multisets).
fn cancel_common(a: &mut Vec<LaurentPoly>, b: &mut Vec<LaurentPoly>) {
    let mut k = 0;
    while k < a.len() {
        if let Some(pos) = b.iter().position(|f| *f == a[k]) {
            b.swap_remove(pos);
            a.swap_remove(k);
        } else {
            k += 1;
        }
    }
    a.sort();
    b.sort();
}

impl RationalFunction {
    pub fn one() -> Self {
        RationalFunction { numerator: Vec::new(), denominator: Vec::new() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { numerator: vec![p], denominator: Vec::new() }
    }

    /// `1 / p`.
    pub fn reciprocal(p: LaurentPoly) -> Result<Self> {
        RationalFunction::from_factors(Vec::new(), vec![p])
    }

    pub fn from_factors(numerator: Vec<LaurentPoly>, denominator: Vec<LaurentPoly>) -> Result<Self> {
        if denominator.iter().any(LaurentPoly::is_zero) {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let one = LaurentPoly::one();
        Ok(RationalFunction {
            numerator: numerator.into_iter().filter(|f| *f != one).collect(),
            denominator: denominator.into_iter().filter(|f| *f != one).collect(),
        })
    }

    pub fn numerator_factors(&self) -> &[LaurentPoly] {
        &self.numerator
    }

    pub fn denominator_factors(&self) -> &[LaurentPoly] {
        &self.denominator
    }

    /// Expanded numerator.
    pub fn numerator(&self) -> LaurentPoly {
        product(&self.numerator)
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> LaurentPoly {
        product(&self.denominator)
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        let mut numerator = self.numerator.clone();
        numerator.extend(other.numerator.iter().cloned());
        let mut denominator = self.denominator.clone();
        denominator.extend(other.denominator.iter().cloned());
        RationalFunction { numerator, denominator }
    }

    pub fn inverse(&self) -> Result<RationalFunction> {
        RationalFunction::from_factors(self.denominator.clone(), self.numerator.clone())
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Cancels factors that appear verbatim in both numerator and denominator.
    pub fn simplify(&self) -> RationalFunction {
        let mut numerator = self.numerator.clone();
        let mut denominator = self.denominator.clone();
        cancel_common(&mut numerator, &mut denominator);
        RationalFunction { numerator, denominator }
    }

    /// `a/b = c/d` iff `a d = c b`, checked after cancelling shared factors.
    pub fn equals(&self, other: &RationalFunction) -> bool {
        let mut lhs: Vec<LaurentPoly> =
            self.numerator.iter().chain(&other.denominator).cloned().collect();
        let mut rhs: Vec<LaurentPoly> =
            other.numerator.iter().chain(&self.denominator).cloned().collect();
        cancel_common(&mut lhs, &mut rhs);
        product(&lhs) == product(&rhs)
    }

    /// Cross-multiplication on fully expanded products, without cancelling.
    pub fn equals_expanded(&self, other: &RationalFunction) -> bool {
        &self.numerator() * &other.denominator() == &other.numerator() * &self.denominator()
    }

    pub fn map_factors(&self, f: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<RationalFunction> {
        RationalFunction::from_factors(
            self.numerator.iter().map(&f).collect::<Result<_>>()?,
            self.denominator.iter().map(&f).collect::<Result<_>>()?,
        )
    }

    pub fn invert_generator(&self, name: &str) -> RationalFunction {
        self.map_factors(|p| Ok(p.invert_generator(name))).expect("inversion keeps factors nonzero")
    }

    pub fn specialize(&self, name: &str, value: &BigRational) -> Result<RationalFunction> {
        self.map_factors(|p| p.specialize(name, value))
    }

    pub fn evaluate(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut den = BigRational::one();
        for f in &self.denominator {
            den *= f.evaluate(assignment)?;
        }
        if den.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let mut num = BigRational::one();
        for f in &self.numerator {
            num *= f.evaluate(assignment)?;
        }
        Ok(num / den)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

fn render_factors(factors: &[LaurentPoly]) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    factors
        .iter()
        .map(|f| if f.len() > 1 { format!("({f})") } else { f.to_string() })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_factors(&self.numerator))?;
        if !self.denominator.is_empty() {
            write!(f, " / {}", render_factors(&self.denominator))?;
        }
        Ok(())
    }
}

/// Splits at `sep` wherever the parenthesis depth is zero.
fn split_top_level<'a>(s: &'a str, sep: &str) -> Result<Vec<&'a str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start, mut k) = (0i32, 0, 0);
    let bytes = s.as_bytes();
    while k < s.len() {
        match bytes[k] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if depth == 0 && s[k..].starts_with(sep) => {
                parts.push(&s[start..k]);
                k += sep.len();
                start = k;
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
        }
        k += 1;
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_factors(s: &str) -> Result<Vec<LaurentPoly>> {
    split_top_level(s.trim(), "*")?
        .into_iter()
        .map(|f| {
            let f = f.trim();
            let inner = f.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(f);
            inner.parse::<LaurentPoly>()
        })
        .collect()
}

/// Accepts the display form: `(…)*(…) / (…)`, with the denominator optional.
impl FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sides = split_top_level(s, " / ")?;
        match sides.as_slice() {
            [num] => RationalFunction::from_factors(parse_factors(num)?, Vec::new()),
            [num, den] => RationalFunction::from_factors(parse_factors(num)?, parse_factors(den)?),
            _ => Err(Error::Parse(format!("more than one ' / ' in '{s}'"))),
        }
    }
}

pub fn evaluate(f: &RationalFunction, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational> {
    f.evaluate(assignment)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SatakeParam {
    Symbol(String),
    Value(#[serde(with = "rational_serde")] BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterValue {
    Symbol(String),
    /// `μ(ϖ) = ±1`.
    Sign(i8),
}

/// Satake parameters `q^{±α_1}, …, q^{±α_m}` and the character value `μ(ϖ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatakeDatum {
    pub params: Vec<SatakeParam>,
    pub character: CharacterValue,
}

impl SatakeDatum {
    /// Generic datum: symbols `b1, …, bm` and `X`.
    pub fn symbolic(m: usize) -> Self {
        SatakeDatum {
            params: (1..=m).map(|k| SatakeParam::Symbol(format!("b{k}"))).collect(),
            character: CharacterValue::Symbol(GEN_X.into()),
        }
    }

    pub fn new(params: Vec<SatakeParam>, character: CharacterValue) -> Result<Self> {
        for p in &params {
            if let SatakeParam::Value(v) = p {
                if v.is_zero() {
                    return Err(Error::InvalidArgument("Satake parameter must be nonzero".into()));
                }
            }
        }
        if let CharacterValue::Sign(s) = character {
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!("character value {s} is not +1 or -1")));
            }
        }
        Ok(SatakeDatum { params, character })
    }

    /// Inner rank `m = n - i`.
    pub fn m(&self) -> usize {
        self.params.len()
    }
}

impl FromStr for SatakeParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.chars().next() {
            Some(c) if c.is_alphabetic() || c == '_' => Ok(SatakeParam::Symbol(s.to_string())),
            Some(_) => parse_rational(s).map(SatakeParam::Value),
            None => Err(Error::Parse("empty Satake parameter".into())),
        }
    }
}

impl FromStr for CharacterValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(CharacterValue::Sign(1)),
            "-1" => Ok(CharacterValue::Sign(-1)),
            name if name.chars().all(|c| c.is_alphanumeric() || c == '_') && !name.is_empty() => {
                Ok(CharacterValue::Symbol(name.to_string()))
            }
            other => Err(Error::Parse(format!("invalid character value '{other}'"))),
        }
    }
}

/// `1 - X^t Q^{-2c} T^t [b^e]`, the reciprocal of one abelian L-factor.
fn l_factor(
    shift: Scalar,
    twist: u32,
    character: &CharacterValue,
    satake: Option<(&SatakeParam, i64)>,
) -> LaurentPoly {
    let t = twist as i64;
    let mut coef = BigRational::one();
    let mut mono = Monomial::from_pairs([(GEN_Q, -shift.halves()), (GEN_T, t)]);
    match character {
        CharacterValue::Symbol(x) => mono = mono.mul(&Monomial::from_pairs([(x.as_str(), t)])),
        CharacterValue::Sign(s) => coef *= BigRational::from_integer((*s as i64).pow(twist).into()),
    }
    if let Some((param, e)) = satake {
        match param {
            SatakeParam::Symbol(b) => mono = mono.mul(&Monomial::from_pairs([(b.as_str(), e)])),
            SatakeParam::Value(v) => coef *= poly::pow_rational(v, e),
        }
    }
    &LaurentPoly::one() - &LaurentPoly::term(coef, mono)
}

fn reciprocal_of(factors: Vec<LaurentPoly>) -> RationalFunction {
    RationalFunction::from_factors(Vec::new(), factors).expect("L-factor denominators are nonzero")
}

/// `L(s + c, μ)` for `twist_power = 1`, `L(2s + c, μ^2)` for `twist_power = 2`.
pub fn abelian_l(shift: Scalar, twist_power: u32) -> Result<RationalFunction> {
    if twist_power != 1 && twist_power != 2 {
        return Err(Error::InvalidArgument(format!("twist power {twist_power} is not 1 or 2")));
    }
    let x = CharacterValue::Symbol(GEN_X.into());
    Ok(reciprocal_of(vec![l_factor(shift, twist_power, &x, None)]))
}

fn standard_l_factors(shift: Scalar, satake: &SatakeDatum) -> Vec<LaurentPoly> {
    let mut factors = vec![l_factor(shift, 1, &satake.character, None)];
    for b in &satake.params {
        // L(s - α) carries q^{α} = b, L(s + α) carries b^{-1}
        factors.push(l_factor(shift, 1, &satake.character, Some((b, 1))));
        factors.push(l_factor(shift, 1, &satake.character, Some((b, -1))));
    }
    factors
}

/// Twisted standard L-factor `L(s + shift, π, μ)`.
pub fn standard_l(shift: Scalar, satake: &SatakeDatum) -> RationalFunction {
    reciprocal_of(standard_l_factors(shift, satake))
}

/// `ξ_i(s + shift) = ∏_{ℓ=1}^{i} L(s + shift + ℓ - (i+1)/2, π, μ)
///                 × ∏_{1≤p<q≤i} L(2(s + shift) - i - 1 + p + q, μ^2)`.
pub fn xi(i: usize, satake: &SatakeDatum, shift: Scalar) -> RationalFunction {
    let i64_i = i as i64;
    let mut factors = Vec::new();
    for l in 1..=i64_i {
        let c = shift + Scalar::int(l) - Scalar::from_halves(i64_i + 1);
        factors.extend(standard_l_factors(c, satake));
    }
    for p in 1..=i64_i {
        for q in p + 1..=i64_i {
            let c = shift.times(2) + Scalar::int(p + q - i64_i - 1);
            factors.push(l_factor(c, 2, &satake.character, None));
        }
    }
    reciprocal_of(factors)
}

/// Value at the identity of the unramified section attached to `w_j`:
/// `ξ_j(s + (i-j)/2) / ξ_j(s + 1 + (i-j)/2)`, with shared factors cancelled.
pub fn gk_value(i: usize, j: usize, satake: &SatakeDatum) -> Result<RationalFunction> {
    if j > i {
        return Err(Error::IndexOutOfRange { index: j, lo: 0, hi: i });
    }
    let half = Scalar::from_halves((i - j) as i64);
    let top = xi(j, satake, half);
    let bottom = xi(j, satake, half + Scalar::ONE);
    Ok(top.div(&bottom)?.simplify())
}
