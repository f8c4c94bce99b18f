//! The Weyl group of type `C_n` as signed permutations.
//!
//! Action convention: `act(w, x)_i = signs_i * x_{perm^{-1}(i)}`, i.e. the
//! coordinate `x_j` is moved to position `perm(j)` and then the sign at that
//! position is applied. The dot action is `w · λ = w(λ + ρ) - ρ`.
//!
//! Infinitesimal characters are compared through a canonical form: the
//! absolute values of `λ + ρ` sorted in decreasing order, per place. Two
//! vectors lie in the same signed-permutation orbit exactly when these
//! canonical forms agree.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weights::{is_dominant_row, is_integral, is_k_dominant, rho, Weight};

pub const DEFAULT_ORBIT_CAP: usize = 8;

static ORBIT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ORBIT_CAP);

/// Largest rank for which orbit enumeration is attempted.
pub fn orbit_cap() -> usize {
    ORBIT_CAP.load(Ordering::Relaxed)
}

pub fn set_orbit_cap(cap: usize) {
    ORBIT_CAP.store(cap, Ordering::Relaxed);
}

fn check_cap(n: usize) -> Result<()> {
    let cap = orbit_cap();
    if n > cap {
        Err(Error::RankTooLarge { n, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    /// 0-based images: `perm[j]` is the position coordinate `j` moves to.
    perm: Vec<usize>,
    /// `true` means the sign at that position is `-1`.
    flips: Vec<bool>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect(), flips: vec![false; n] }
    }

    /// `perm` is 0-based; `signs` entries must be `1` or `-1`.
    pub fn new(perm: Vec<usize>, signs: &[i8]) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::RankMismatch { expected: n, found: signs.len() });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        let flips = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(false),
                -1 => Ok(true),
                _ => Err(Error::InvalidArgument(format!("sign {s} is not +1 or -1"))),
            })
            .collect::<Result<_>>()?;
        Ok(WeylElement { perm, flips })
    }

    /// Swap of two coordinates (0-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut w = WeylElement::identity(n);
        w.perm.swap(a, b);
        w
    }

    /// Sign change at one position (0-based).
    pub fn flip(n: usize, position: usize) -> Self {
        let mut w = WeylElement::identity(n);
        w.flips[position] = true;
        w
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> Vec<i8> {
        self.flips.iter().map(|&f| if f { -1 } else { 1 }).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.flips.iter().all(|f| !f)
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut perm = vec![0; n];
        for (j, &p) in self.perm.iter().enumerate() {
            perm[p] = j;
        }
        let flips = (0..n).map(|i| self.flips[self.perm[i]]).collect();
        WeylElement { perm, flips }
    }

    fn check_rank(&self, found: usize) -> Result<()> {
        if found != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found });
        }
        Ok(())
    }
}

/// `compose(w1, w2)` acts as `w1` after `w2`.
pub fn compose(w1: &WeylElement, w2: &WeylElement) -> Result<WeylElement> {
    w1.check_rank(w2.rank())?;
    let n = w1.rank();
    let mut inv1 = vec![0; n];
    for (j, &p) in w1.perm.iter().enumerate() {
        inv1[p] = j;
    }
    let perm = (0..n).map(|j| w1.perm[w2.perm[j]]).collect();
    let flips = (0..n).map(|i| w1.flips[i] ^ w2.flips[inv1[i]]).collect();
    Ok(WeylElement { perm, flips })
}

pub fn act(w: &WeylElement, x: &[Scalar]) -> Result<Vec<Scalar>> {
    w.check_rank(x.len())?;
    let mut out = vec![Scalar::ZERO; x.len()];
    for (j, &value) in x.iter().enumerate() {
        let i = w.perm[j];
        out[i] = if w.flips[i] { -value } else { value };
    }
    Ok(out)
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

/// `w(λ + ρ) - ρ`.
pub fn dot_act(w: &WeylElement, lambda: &[Scalar]) -> Result<Vec<Scalar>> {
    w.check_rank(lambda.len())?;
    let r = rho(lambda.len());
    Ok(sub(&act(w, &add(lambda, &r))?, &r))
}

/// Lazily enumerates all `2^n n!` signed permutations, lexicographically by
/// `(perm, signs)` with `+1` ordered before `-1`.
#[derive(Clone, Debug)]
pub struct WeylIter {
    perm: Option<Vec<usize>>,
    flips: u64,
    n: usize,
}

impl Iterator for WeylIter {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        let perm = self.perm.as_mut()?;
        let n = self.n;
        // bit (n-1-i) of `flips` is the flip at position i, so counting upwards
        // walks the sign vectors in lexicographic order
        let flips = (0..n).map(|i| self.flips >> (n - 1 - i) & 1 == 1).collect();
        let element = WeylElement { perm: perm.clone(), flips };
        self.flips += 1;
        if self.flips == 1 << n {
            self.flips = 0;
            if !next_permutation(perm) {
                self.perm = None;
            }
        }
        Some(element)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

pub fn enumerate_weyl(n: usize) -> Result<WeylIter> {
    check_cap(n)?;
    Ok(WeylIter { perm: Some((0..n).collect()), flips: 0, n })
}

/// `2^n n!`.
pub fn weyl_order(n: usize) -> u64 {
    (1..=n as u64).product::<u64>() << n
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InfChar {
    canonical: Vec<Vec<Scalar>>,
}

impl InfChar {
    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.canonical
    }
}

/// Sorted absolute values of a Harish-Chandra parameter; the orbit invariant
/// of the signed permutation action.
pub fn canonical_parameter(param: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = param.iter().map(|x| x.abs()).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn shifted_row(row: &[Scalar]) -> Vec<Scalar> {
    add(row, &rho(row.len()))
}

pub fn infchar_canonical(weight: &Weight) -> InfChar {
    InfChar {
        canonical: weight
            .rows()
            .iter()
            .map(|r| canonical_parameter(&shifted_row(r)))
            .collect(),
    }
}

pub fn infchar_equal(a: &Weight, b: &Weight) -> Result<bool> {
    if a.n() != b.n() || a.d() != b.d() {
        return Err(Error::ShapeMismatch);
    }
    Ok(infchar_canonical(a) == infchar_canonical(b))
}

pub fn is_regular(weight: &Weight) -> bool {
    weight.rows().iter().all(|r| {
        let c = canonical_parameter(&shifted_row(r));
        c.last() != Some(&Scalar::ZERO) && c.windows(2).all(|p| p[0] != p[1])
    })
}

/// Dominant weights of one place sharing the infinitesimal character of `row`.
///
/// A weight `μ` with integral differences is k-dominant exactly when `μ + ρ`
/// is strictly decreasing, so the candidates are the strictly decreasing
/// rearrangements of the `2^n` sign patterns of `row + ρ`.
pub fn dominant_orbit_row(row: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    let n = row.len();
    check_cap(n)?;
    let param = shifted_row(row);
    let r = rho(n);
    let mut found = BTreeSet::new();
    for mask in 0u64..1 << n {
        let mut signed: Vec<Scalar> = param
            .iter()
            .enumerate()
            .map(|(k, &x)| if mask >> k & 1 == 1 { -x } else { x })
            .collect();
        signed.sort_unstable_by(|a, b| b.cmp(a));
        if signed.windows(2).all(|p| p[0] > p[1]) {
            let mu = sub(&signed, &r);
            debug_assert!(is_dominant_row(&mu));
            found.insert(mu);
        }
    }
    // decreasing lexicographic order puts the highest weight first
    Ok(found.into_iter().rev().collect())
}

/// All k-dominant weights with the same infinitesimal character as `weight`,
/// combined across places as a cartesian product.
pub fn dominant_orbit_elements(weight: &Weight) -> Result<Vec<Weight>> {
    let per_place = weight
        .rows()
        .iter()
        .map(|r| dominant_orbit_row(r))
        .collect::<Result<Vec<_>>>()?;
    let mut combos: Vec<Vec<Vec<Scalar>>> = vec![Vec::new()];
    for options in &per_place {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |row| {
                    let mut next = prefix.clone();
                    next.push(row.clone());
                    next
                })
            })
            .collect();
    }
    combos.into_iter().map(Weight::new).collect()
}

/// Whether some dominant weight with the same infinitesimal character has all
/// bottom entries `> 2n - i + 1`.
pub fn is_sufficiently_regular(weight: &Weight, i: usize) -> Result<bool> {
    let n = weight.n();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n });
    }
    let threshold = Scalar::int(2 * n as i64 - i as i64 + 1);
    // the bottom-entry condition is per place, so the best choice per place
    // is independent of the others
    for row in weight.rows() {
        let ok = dominant_orbit_row(row)?
            .iter()
            .any(|mu| mu[n - 1] > threshold);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every dominant weight in the dot orbit of `weight` is either `weight`
/// itself or has a negative bottom entry at some place.
///
/// Requires `weight` k-dominant integral with every bottom entry `> 2n`.
pub fn orbit_dichotomy_check(weight: &Weight) -> Result<bool> {
    let n = weight.n();
    if !is_k_dominant(weight) || !is_integral(weight) {
        return Err(Error::HypothesisViolated("weight must be k-dominant and integral".into()));
    }
    let bound = Scalar::int(2 * n as i64);
    if weight.bottom_entries().any(|b| b <= bound) {
        return Err(Error::HypothesisViolated(format!("bottom entries must exceed 2n = {}", 2 * n)));
    }
    Ok(dominant_orbit_elements(weight)?.iter().all(|omega| {
        omega == weight || omega.bottom_entries().any(|b| b.is_negative())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().copied().map(Scalar::int).collect()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn arb_element(n: usize) -> impl Strategy<Value = WeylElement> {
        (
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n),
        )
            .prop_map(|(p, s)| WeylElement::new(p, &s).unwrap())
    }

    #[test]
    fn act_examples() {
        let x = v(&[2, 1]);
        assert_eq!(act(&WeylElement::identity(2), &x).unwrap(), v(&[2, 1]));
        assert_eq!(act(&WeylElement::flip(2, 1), &x).unwrap(), v(&[2, -1]));
        let w = compose(&WeylElement::flip(2, 0), &WeylElement::transposition(2, 0, 1)).unwrap();
        assert_eq!(act(&w, &x).unwrap(), v(&[-1, 2]));
        assert_eq!(
            act(&WeylElement::identity(3), &x),
            Err(Error::RankMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot_act(&WeylElement::identity(2), &v(&[3, 3])).unwrap(), v(&[3, 3]));
        assert_eq!(dot_act(&WeylElement::flip(2, 1), &v(&[3, 3])).unwrap(), v(&[3, 1]));
        assert_eq!(dot_act(&WeylElement::flip(1, 0), &v(&[3])).unwrap(), v(&[-1]));
    }

    #[test]
    fn compose_examples() {
        let w = WeylElement::new(vec![2, 0, 3, 1], &[1, -1, -1, 1]).unwrap();
        assert_eq!(compose(&WeylElement::identity(4), &w).unwrap(), w);
        assert!(compose(&w, &w.inverse()).unwrap().is_identity());
        assert!(compose(&w, &WeylElement::identity(3)).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_weyl(1).unwrap().count(), 2);
        assert_eq!(enumerate_weyl(2).unwrap().count(), 8);
        let all: Vec<_> = enumerate_weyl(3).unwrap().collect();
        assert_eq!(all.len(), 48);
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 48);
        assert!(all.windows(2).all(|p| p[0] < p[1]), "lexicographic order");
        assert_eq!(weyl_order(4), 384);
        assert!(matches!(enumerate_weyl(orbit_cap() + 1), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn infchar_examples() {
        assert_eq!(infchar_canonical(&w("3,3")).rows(), &[v(&[2, 1])]);
        assert_eq!(infchar_canonical(&w("3,1")).rows(), &[v(&[2, 1])]);
        assert_eq!(infchar_canonical(&w("0")).rows(), &[v(&[1])]);
        assert!(infchar_equal(&w("3,3"), &w("3,1")).unwrap());
        assert!(infchar_equal(&w("3,3"), &w("3,3")).unwrap());
        assert!(!infchar_equal(&w("3,3"), &w("4,3")).unwrap());
        assert_eq!(infchar_equal(&w("3,3"), &w("3")), Err(Error::ShapeMismatch));
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(&w("3,1")));
        assert!(!is_regular(&w("2,2")));
        assert!(!is_regular(&w("4,2")));
    }

    #[test]
    fn dominant_orbit_examples() {
        let got = dominant_orbit_elements(&w("3,3")).unwrap();
        let expected: BTreeSet<Weight> =
            ["3,3", "3,1", "2,0", "0,0"].iter().map(|s| w(s)).collect();
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(got[0], w("3,3"));

        let got: BTreeSet<_> = dominant_orbit_elements(&w("3")).unwrap().into_iter().collect();
        assert_eq!(got, [w("3"), w("-1")].into_iter().collect());

        let got: BTreeSet<_> = dominant_orbit_elements(&w("2,2")).unwrap().into_iter().collect();
        assert_eq!(got, [w("2,2"), w("1,1")].into_iter().collect());
    }

    #[test]
    fn dominant_orbit_matches_brute_force() {
        for s in ["3,3", "2,2", "5,1", "4,2", "6,5,2", "3,3,3", "1,0,-2", "5/2,3/2,1/2"] {
            let lambda = w(s);
            let mut brute = BTreeSet::new();
            for g in enumerate_weyl(lambda.n()).unwrap() {
                let mu = dot_act(&g, lambda.row(0)).unwrap();
                if is_dominant_row(&mu) {
                    brute.insert(Weight::single(mu).unwrap());
                }
            }
            let fast: BTreeSet<_> = dominant_orbit_elements(&lambda).unwrap().into_iter().collect();
            assert_eq!(fast, brute, "{s}");
        }
    }

    #[test]
    fn sufficient_regularity_examples() {
        assert!(is_sufficiently_regular(&w("5,5"), 1).unwrap());
        assert!(!is_sufficiently_regular(&w("3,3"), 1).unwrap());
        assert!(is_sufficiently_regular(&w("5,4"), 2).unwrap());
        assert!(matches!(is_sufficiently_regular(&w("5,4"), 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn dichotomy_examples() {
        assert!(orbit_dichotomy_check(&w("3")).unwrap());
        assert!(orbit_dichotomy_check(&w("6,5")).unwrap());
        assert!(matches!(orbit_dichotomy_check(&w("3,3")), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn two_place_cross_product() {
        let got = dominant_orbit_elements(&w("5,3;5,4")).unwrap();
        let a = dominant_orbit_row(&v(&[5, 3])).unwrap().len();
        let b = dominant_orbit_row(&v(&[5, 4])).unwrap().len();
        assert_eq!(got.len(), a * b);
        for omega in &got {
            assert!(is_k_dominant(omega));
            assert!(infchar_equal(omega, &w("5,3;5,4")).unwrap());
        }
    }

    proptest! {
        #[test]
        fn group_axioms(
            (a, b, c) in (1usize..=5).prop_flat_map(|n| (arb_element(n), arb_element(n), arb_element(n)))
        ) {
            let n = a.rank();
            let ab_c = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let a_bc = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(compose(&a, &WeylElement::identity(n)).unwrap(), a.clone());
            prop_assert!(compose(&a.inverse(), &a).unwrap().is_identity());
        }

        #[test]
        fn compose_is_action(
            (a, b, x) in (1usize..=5).prop_flat_map(|n| (
                arb_element(n),
                arb_element(n),
                proptest::collection::vec(-20i64..20, n),
            ))
        ) {
            let x: Vec<Scalar> = x.into_iter().map(Scalar::from_halves).collect();
            let lhs = act(&compose(&a, &b).unwrap(), &x).unwrap();
            let rhs = act(&a, &act(&b, &x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = dot_act(&compose(&a, &b).unwrap(), &x).unwrap();
            let rhs = dot_act(&a, &dot_act(&b, &x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn regular_iff_full_orbit(xs in (1usize..=4).prop_flat_map(|n| proptest::collection::vec(-4i64..6, n))) {
            let row: Vec<Scalar> = xs.into_iter().map(Scalar::int).collect();
            let n = row.len();
            let orbit: BTreeSet<_> = enumerate_weyl(n)
                .unwrap()
                .map(|g| dot_act(&g, &row).unwrap())
                .collect();
            let weight = Weight::single(row).unwrap();
            prop_assert_eq!(is_regular(&weight), orbit.len() as u64 == weyl_order(n));
        }
    }
}
