//! Weights of `Sp(2n)` over a totally real field with `d` real places.
//!
//! A [`Weight`] is a `d x n` matrix of half-integral scalars; row `v` is the
//! tuple `(λ_{1,v}, …, λ_{n,v})` at the place `v`. Construction enforces that
//! successive differences inside each row are integers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Scalar>>", into = "Vec<Vec<Scalar>>")]
pub struct Weight {
    rows: Vec<Vec<Scalar>>,
}

impl Weight {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a weight needs at least one place and rank at least one".into(),
            ));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: row.len() });
            }
            for pair in row.windows(2) {
                if !(pair[0] - pair[1]).is_integer() {
                    return Err(Error::NonIntegralDifference(
                        pair[0].to_string(),
                        pair[1].to_string(),
                    ));
                }
            }
        }
        Ok(Weight { rows })
    }

    /// One place (`d = 1`).
    pub fn single(entries: Vec<Scalar>) -> Result<Self> {
        Weight::new(vec![entries])
    }

    /// Convenience constructor from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Weight::new(
            rows.iter()
                .map(|r| r.iter().copied().map(Scalar::int).collect())
                .collect(),
        )
    }

    /// Number of real places.
    pub fn d(&self) -> usize {
        self.rows.len()
    }

    /// Rank.
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn row(&self, v: usize) -> &[Scalar] {
        &self.rows[v]
    }

    /// `λ_{n,v}` for each place.
    pub fn bottom_entries(&self) -> impl Iterator<Item = Scalar> + '_ {
        self.rows.iter().map(|r| r[r.len() - 1])
    }

    /// The common bottom entry, if it does not depend on the place.
    pub fn constant_bottom(&self) -> Option<Scalar> {
        let first = self.rows[0][self.n() - 1];
        self.bottom_entries().all(|b| b == first).then_some(first)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|x| *x == Scalar::ZERO)
    }

    /// True iff the last `count` entries of every row are equal.
    pub fn tail_constant(&self, count: usize) -> bool {
        let n = self.n();
        let count = count.min(n);
        self.rows
            .iter()
            .all(|r| r[n - count..].windows(2).all(|p| p[0] == p[1]))
    }
}

impl From<Weight> for Vec<Vec<Scalar>> {
    fn from(w: Weight) -> Self {
        w.rows
    }
}

impl TryFrom<Vec<Vec<Scalar>>> for Weight {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        Weight::new(rows)
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Rows separated by `;`, entries by `,`: `"5,3;5,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(str::parse).collect::<Result<Vec<Scalar>>>())
            .collect::<Result<Vec<_>>>()?;
        Weight::new(rows)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VanishingVerdict {
    NearlyHolomorphicSpaceVanishes,
    HolomorphicZeroOrConstant,
    NoConclusion,
}

/// Half the sum of the positive roots, `(-1, -2, …, -n)`.
pub fn rho(n: usize) -> Vec<Scalar> {
    (1..=n as i64).map(|k| Scalar::int(-k)).collect()
}

/// Successive differences of one row are non-negative integers.
pub fn is_dominant_row(row: &[Scalar]) -> bool {
    row.windows(2).all(|p| {
        let diff = p[0] - p[1];
        diff.is_integer() && !diff.is_negative()
    })
}

pub fn is_k_dominant(weight: &Weight) -> bool {
    weight.rows().iter().all(|r| is_dominant_row(r))
}

pub fn is_integral(weight: &Weight) -> bool {
    weight.rows().iter().flatten().all(|x| x.is_integer())
}

/// `(-1)^{λ_n}`, which selects the archimedean parity class of characters.
pub fn parity_class(weight: &Weight) -> Result<i8> {
    if !is_integral(weight) {
        return Err(Error::NonIntegral);
    }
    let bottom = weight.constant_bottom().ok_or(Error::NonConstantBottomEntry)?;
    Ok(match bottom.parity() {
        Some(0) => 1,
        _ => -1,
    })
}

/// Vanishing results that follow from unitarity of the archimedean component.
///
/// Assumes `weight` is k-dominant and integral; the nearly holomorphic
/// vanishing needs `n > 1`.
pub fn holomorphy_vanishing(weight: &Weight) -> VanishingVerdict {
    let has_zero_bottom = weight.bottom_entries().any(|b| b == Scalar::ZERO);
    if weight.n() > 1 && !weight.is_zero() && has_zero_bottom {
        VanishingVerdict::NearlyHolomorphicSpaceVanishes
    } else if weight.bottom_entries().any(|b| b <= Scalar::ZERO) {
        VanishingVerdict::HolomorphicZeroOrConstant
    } else {
        VanishingVerdict::NoConclusion
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    /// Positive roots `-(e_i + e_j)` (i <= j, long roots for i = j are
    /// `-2e_i`) and `e_k - e_l` (k < l), summed directly.
    fn half_sum_positive_roots(n: usize) -> Vec<Scalar> {
        let mut sum = vec![0i64; n];
        for i in 0..n {
            for j in i..n {
                sum[i] -= 1;
                sum[j] -= 1;
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                sum[k] += 1;
                sum[l] -= 1;
            }
        }
        sum.into_iter().map(Scalar::from_halves).collect()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(1), vec![Scalar::int(-1)]);
        assert_eq!(rho(3), vec![Scalar::int(-1), Scalar::int(-2), Scalar::int(-3)]);
        for n in 1..=8 {
            assert_eq!(rho(n), half_sum_positive_roots(n), "n = {n}");
        }
    }

    #[test]
    fn dominance() {
        assert!(is_k_dominant(&w("5,3")));
        assert!(!is_k_dominant(&w("3,5")));
        assert!(is_k_dominant(&w("5,3;5,4")));
        assert!(is_k_dominant(&w("5/2,3/2")));
    }

    #[test]
    fn integrality() {
        assert!(is_integral(&w("5,3")));
        assert!(!is_integral(&w("5/2,3/2")));
        assert_eq!(
            "5,7/2".parse::<Weight>(),
            Err(Error::NonIntegralDifference("5".into(), "7/2".into()))
        );
    }

    #[test]
    fn parity() {
        assert_eq!(parity_class(&w("20,12")), Ok(1));
        assert_eq!(parity_class(&w("20,11")), Ok(-1));
        assert_eq!(parity_class(&w("6,4;6,5")), Err(Error::NonConstantBottomEntry));
        assert_eq!(parity_class(&w("5/2,3/2")), Err(Error::NonIntegral));
    }

    #[test]
    fn vanishing() {
        use VanishingVerdict::*;
        assert_eq!(holomorphy_vanishing(&w("3,0")), NearlyHolomorphicSpaceVanishes);
        assert_eq!(holomorphy_vanishing(&w("3,-1")), HolomorphicZeroOrConstant);
        assert_eq!(holomorphy_vanishing(&w("3,1")), NoConclusion);
        // n = 1 is outside the nearly holomorphic statement
        assert_eq!(holomorphy_vanishing(&w("0")), HolomorphicZeroOrConstant);
        assert_eq!(holomorphy_vanishing(&w("0,0")), HolomorphicZeroOrConstant);
    }

    #[test]
    fn text_format() {
        let x = w("5,3;5,4");
        assert_eq!((x.d(), x.n()), (2, 2));
        assert_eq!(x.to_string(), "5,3;5,4");
        assert_eq!(w("5/2,1/2").to_string(), "5/2,1/2");
        assert!("5,3;5".parse::<Weight>().is_err());
    }

    proptest! {
        #[test]
        fn construction_checks_differences(
            halves in proptest::collection::vec(proptest::collection::vec(-20i64..20, 3), 1..4)
        ) {
            let rows: Vec<Vec<Scalar>> = halves
                .iter()
                .map(|r| r.iter().copied().map(Scalar::from_halves).collect())
                .collect();
            let valid = halves
                .iter()
                .all(|r| r.windows(2).all(|p| (p[0] - p[1]) % 2 == 0));
            prop_assert_eq!(Weight::new(rows).is_ok(), valid);
        }

        #[test]
        fn parity_stable_under_even_shift(top in -10i64..10, gap in 0i64..5, c in -5i64..5) {
            let a = Weight::from_ints(&[&[top + gap, top]]).unwrap();
            let b = Weight::from_ints(&[&[top + gap, top + 2 * c]]).unwrap();
            prop_assert_eq!(parity_class(&a), parity_class(&b));
        }
    }
}
