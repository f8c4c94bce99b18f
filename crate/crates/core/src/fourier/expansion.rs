//! Finitely supported Fourier expansions `f(Z) = Σ c(h) e(tr hZ)` of scalar
//! weight `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{gl_transform, Rat, RatMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::lfactors::{format_rational, parse_rational};
use crate::weights::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierExpansion {
    n: usize,
    k: i64,
    support: BTreeMap<SymMatrix, Rat>,
}

impl FourierExpansion {
    pub fn new(n: usize, k: i64) -> Self {
        FourierExpansion { n, k, support: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, k: i64, terms: impl IntoIterator<Item = (SymMatrix, Rat)>) -> Result<Self> {
        let mut f = FourierExpansion::new(n, k);
        for (h, c) in terms {
            f.insert(h, c)?;
        }
        Ok(f)
    }

    /// Sets `c(h)`; zero coefficients are dropped.
    pub fn insert(&mut self, h: SymMatrix, c: Rat) -> Result<()> {
        if h.size() != self.n {
            return Err(Error::RankMismatch { expected: self.n, found: h.size() });
        }
        if c.is_zero() {
            self.support.remove(&h);
        } else {
            self.support.insert(h, c);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn coefficient(&self, h: &SymMatrix) -> Rat {
        self.support.get(h).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&SymMatrix, &Rat)> {
        self.support.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// `c(h) = det(a)^k c(ᵗa h a)` at every `h` where either side is nonzero.
pub fn slash_invariance_check(f: &FourierExpansion, a: &RatMatrix) -> Result<bool> {
    if a.size() != f.n {
        return Err(Error::RankMismatch { expected: f.n, found: a.size() });
    }
    let det = a.det();
    if !a.is_integral() || det.abs() != Rat::one() {
        return Err(Error::NotUnimodular);
    }
    let a_inv = a.inverse()?;
    let sign = if det.is_negative() && f.k.rem_euclid(2) == 1 { -Rat::one() } else { Rat::one() };
    for (h, c) in f.support() {
        // ᵗa h a, forward direction
        if *c != &sign * f.coefficient(&gl_transform(h, &a_inv)?) {
            return Ok(false);
        }
        // h = ᵗa⁻¹ h' a⁻¹ maps back onto h'
        let back = gl_transform(h, a)?;
        if f.coefficient(&back) != &sign * c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `c'(h) = c(diag(0, h))`, an expansion of size `n - 1` and the same weight.
pub fn siegel_phi(f: &FourierExpansion) -> Result<FourierExpansion> {
    if f.n < 2 {
        return Err(Error::SizeOne);
    }
    let mut out = FourierExpansion::new(f.n - 1, f.k);
    for (h, c) in f.support() {
        if h.in_sym_j(1) {
            out.insert(h.drop_first()?, c.clone())?;
        }
    }
    Ok(out)
}

/// Support inside the positive semidefinite cone.
pub fn cusp_condition_check(f: &FourierExpansion) -> bool {
    f.support.keys().all(SymMatrix::is_psd)
}

/// Support inside the positive definite cone.
pub fn is_cuspidal(f: &FourierExpansion) -> bool {
    f.support.keys().all(SymMatrix::is_pd)
}

/// `1 + max corank` over the support, `0` for the zero expansion.
pub fn filtration_index(f: &FourierExpansion) -> usize {
    f.support.keys().map(|h| 1 + h.corank()).max().unwrap_or(0)
}

/// Whether the support meets `Sym_j`; if so `lambda` must have constant
/// bottom entries over its last `j` rows.
pub fn rigidity_check(lambda: &Weight, f: &FourierExpansion, j: usize) -> Result<bool> {
    if lambda.n() != f.n {
        return Err(Error::RankMismatch { expected: f.n, found: lambda.n() });
    }
    if j > f.n {
        return Err(Error::IndexOutOfRange { index: j, lo: 0, hi: f.n });
    }
    let meets = f.support.keys().any(|h| h.corank() >= j && j > 0);
    if !meets {
        return Ok(true);
    }
    Ok(lambda.constant_bottom().is_some() && lambda.tail_constant(j))
}

/// `n=<n> k=<k>` then one `<upper triangle> : <coefficient>` line per term.
impl fmt::Display for FourierExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} k={}", self.n, self.k)?;
        for (h, c) in &self.support {
            writeln!(f, "{h} : {}", format_rational(c))?;
        }
        Ok(())
    }
}

impl FromStr for FourierExpansion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let (mut n, mut k) = (None, None);
        for field in header.split_whitespace() {
            let (key, value) =
                field.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field '{field}'")))?;
            let bad = || Error::Parse(format!("bad header value '{field}'"));
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "k" => k = Some(value.parse::<i64>().map_err(|_| bad())?),
                _ => return Err(Error::Parse(format!("unknown header key '{key}'"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("header lacks n".into()))?;
        let k = k.ok_or_else(|| Error::Parse("header lacks k".into()))?;
        let mut f = FourierExpansion::new(n, k);
        for line in lines {
            let (h, c) = line.split_once(':').ok_or_else(|| Error::Parse(format!("bad line '{line}'")))?;
            let entries = h.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            let h = SymMatrix::from_upper(n, &entries)?;
            if f.support.contains_key(&h) {
                return Err(Error::Parse(format!("duplicate index '{h}'")));
            }
            f.insert(h, parse_rational(c)?)?;
        }
        Ok(f)
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    h: SymMatrix,
    #[serde(with = "crate::lfactors::rational_serde")]
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct Repr {
    n: usize,
    k: i64,
    support: Vec<Term>,
}

impl Serialize for FourierExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            n: self.n,
            k: self.k,
            support: self.support.iter().map(|(h, c)| Term { h: h.clone(), c: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        FourierExpansion::from_terms(r.n, r.k, r.support.into_iter().map(|t| (t.h, t.c)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    fn sym(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_ints(rows).unwrap()
    }

    fn expansion(n: usize, k: i64, terms: &[(SymMatrix, i64)]) -> FourierExpansion {
        FourierExpansion::from_terms(n, k, terms.iter().map(|(h, c)| (h.clone(), int(*c)))).unwrap()
    }

    #[test]
    fn phi_examples() {
        let f = expansion(
            2,
            10,
            &[(SymMatrix::diagonal_ints(&[0, 3]).unwrap(), 5), (SymMatrix::identity(2).unwrap(), 7)],
        );
        let phi = siegel_phi(&f).unwrap();
        assert_eq!(phi, expansion(1, 10, &[(sym(&[&[3]]), 5)]));
        assert!(!is_cuspidal(&f));
        assert!(cusp_condition_check(&f));
        let g = expansion(1, 4, &[(sym(&[&[1]]), 1)]);
        assert_eq!(siegel_phi(&g), Err(Error::SizeOne));
    }

    #[test]
    fn filtration_examples() {
        let id = expansion(2, 10, &[(SymMatrix::identity(2).unwrap(), 1)]);
        assert_eq!(filtration_index(&id), 1);
        let zero = expansion(2, 10, &[(SymMatrix::diagonal_ints(&[0, 0]).unwrap(), 1)]);
        assert_eq!(filtration_index(&zero), 3);
        assert_eq!(filtration_index(&FourierExpansion::new(2, 10)), 0);
    }

    #[test]
    fn cusp_condition_rejects_indefinite() {
        let f = expansion(2, 10, &[(sym(&[&[1, 2], &[2, 1]]), 1)]);
        assert!(!cusp_condition_check(&f));
    }

    #[test]
    fn slash_examples() {
        let f = expansion(2, 10, &[(SymMatrix::identity(2).unwrap(), 1)]);
        let minus = RatMatrix::from_ints(&[&[-1, 0], &[0, -1]]).unwrap();
        assert!(slash_invariance_check(&f, &minus).unwrap());
        // odd weight with det(a) = -1 flips every coefficient
        let reflect = RatMatrix::from_ints(&[&[-1, 0], &[0, 1]]).unwrap();
        let odd = expansion(2, 3, &[(SymMatrix::identity(2).unwrap(), 1)]);
        assert!(!slash_invariance_check(&odd, &reflect).unwrap());
        let shear = RatMatrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        assert!(!slash_invariance_check(&f, &shear).unwrap());
        let orbit = expansion(
            2,
            10,
            &[
                (SymMatrix::identity(2).unwrap(), 1),
                (sym(&[&[1, 1], &[1, 2]]), 1),
                (sym(&[&[1, -1], &[-1, 2]]), 1),
            ],
        );
        // shear orbits of I are infinite, so no finite support is invariant
        assert!(!slash_invariance_check(&orbit, &shear).unwrap());
        let two = RatMatrix::from_ints(&[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(slash_invariance_check(&f, &two), Err(Error::NotUnimodular));
    }

    #[test]
    fn rigidity_examples() {
        let f = expansion(2, 10, &[(SymMatrix::diagonal_ints(&[0, 3]).unwrap(), 1)]);
        let lambda = Weight::from_ints(&[&[10, 10], &[10, 10]]).unwrap();
        assert!(rigidity_check(&lambda, &f, 1).unwrap());
        let uneven = Weight::from_ints(&[&[10, 10], &[12, 10]]).unwrap();
        assert!(rigidity_check(&uneven, &f, 1).unwrap());
        let split = Weight::from_ints(&[&[10, 10], &[12, 12]]).unwrap();
        assert!(!rigidity_check(&split, &f, 1).unwrap());
        let cusp = expansion(2, 10, &[(SymMatrix::identity(2).unwrap(), 1)]);
        assert!(rigidity_check(&split, &cusp, 1).unwrap());
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# sample\nn=2 k=10\n0,0,3 : 5\n1,0,1 : 7/2\n";
        let f: FourierExpansion = text.parse().unwrap();
        assert_eq!(f.coefficient(&SymMatrix::identity(2).unwrap()), Rat::new(7.into(), 2.into()));
        assert_eq!(f.to_string().parse::<FourierExpansion>().unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<FourierExpansion>(&json).unwrap(), f);
        assert!("n=2 k=10\n1,0 : 1\n".parse::<FourierExpansion>().is_err());
        assert!("n=2\n".parse::<FourierExpansion>().is_err());
    }
}
