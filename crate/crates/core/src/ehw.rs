//! First reduction point and unitarity of highest weight modules in the
//! Enright–Howe–Wallach parametrization `λ = base + r(-1, …, -1)` with
//! `base_n = n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhwProfile {
    pub base: Vec<Scalar>,
    /// `#{i | base_i = n}`
    pub p: usize,
    /// `#{i | base_i = n + 1}`
    pub q: usize,
    pub r: Scalar,
}

fn counts(base: &[Scalar]) -> (usize, usize) {
    let n = base.len() as i64;
    let p = base.iter().filter(|&&x| x == Scalar::int(n)).count();
    let q = base.iter().filter(|&&x| x == Scalar::int(n + 1)).count();
    (p, q)
}

/// Shift `lambda` by a scalar so its bottom entry becomes `n`.
pub fn ehw_normalize(lambda: &[Scalar]) -> Result<EhwProfile> {
    let n = lambda.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty weight".into()));
    }
    let r = Scalar::int(n as i64) - lambda[n - 1];
    let base: Vec<Scalar> = lambda.iter().map(|&x| x + r).collect();
    let (p, q) = counts(&base);
    Ok(EhwProfile { base, p, q, r })
}

/// `(p + q + 1) / 2`.
pub fn first_reduction_point(base: &[Scalar]) -> Result<Scalar> {
    let n = base.len();
    if n == 0 || base[n - 1] != Scalar::int(n as i64) {
        return Err(Error::BottomEntryNotRank(n));
    }
    let (p, q) = counts(base);
    Ok(Scalar::from_halves((p + q + 1) as i64))
}

/// Second unitarity bound, read as `p + q/2`.
fn half_integral_bound(p: usize, q: usize) -> Scalar {
    Scalar::int(p as i64) + Scalar::from_halves(q as i64)
}

/// Whether `L(lambda)` is unitary. Assumes `lambda` k-dominant and
/// half-integral, which every [`Scalar`] is.
pub fn is_unitary_highest_weight(lambda: &[Scalar]) -> Result<bool> {
    let profile = ehw_normalize(lambda)?;
    let r0 = first_reduction_point(&profile.base)?;
    Ok(profile.r <= r0 || profile.r <= half_integral_bound(profile.p, profile.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().copied().map(Scalar::int).collect()
    }

    #[test]
    fn normalize_examples() {
        let p = ehw_normalize(&v(&[4, 3, 3])).unwrap();
        assert_eq!(p, EhwProfile { base: v(&[4, 3, 3]), p: 2, q: 1, r: Scalar::ZERO });
        let p = ehw_normalize(&v(&[0, 0])).unwrap();
        assert_eq!(p, EhwProfile { base: v(&[2, 2]), p: 2, q: 0, r: Scalar::int(2) });
        let p = ehw_normalize(&v(&[2, 2])).unwrap();
        assert_eq!((p.base, p.r, p.p, p.q), (v(&[2, 2]), Scalar::ZERO, 2, 0));
    }

    #[test]
    fn reduction_point_examples() {
        assert_eq!(first_reduction_point(&v(&[4, 3, 3])).unwrap(), Scalar::int(2));
        assert_eq!(first_reduction_point(&v(&[2, 2])).unwrap(), Scalar::from_halves(3));
        assert_eq!(first_reduction_point(&v(&[1])).unwrap(), Scalar::ONE);
        assert_eq!(first_reduction_point(&v(&[4, 4])), Err(Error::BottomEntryNotRank(2)));
    }

    #[test]
    fn unitarity_examples() {
        assert!(is_unitary_highest_weight(&v(&[2, 2])).unwrap());
        assert!(is_unitary_highest_weight(&v(&[0, 0])).unwrap());
        assert!(!is_unitary_highest_weight(&v(&[-1, -1])).unwrap());
    }

    proptest! {
        #[test]
        fn reduction_point_ignores_large_top_entries(
            n_rest in 1usize..4,
            extra in proptest::collection::vec(2i64..6, 0..3),
            q_count in 0usize..3,
        ) {
            // base = (tops > n+1, n+1 repeated, n repeated) with final rank fixed
            let n = n_rest + q_count + extra.len();
            let mut tops: Vec<i64> = extra.iter().map(|e| n as i64 + e).collect();
            tops.sort_unstable_by(|a, b| b.cmp(a));
            let mut base = tops.clone();
            base.extend(std::iter::repeat(n as i64 + 1).take(q_count));
            base.extend(std::iter::repeat(n as i64).take(n_rest));
            let with_tops = first_reduction_point(&v(&base)).unwrap();
            prop_assert_eq!(with_tops, Scalar::from_halves((n_rest + q_count + 1) as i64));
        }
    }
}
