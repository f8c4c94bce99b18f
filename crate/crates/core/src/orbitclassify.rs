//! Dot-orbit classification of the induction levels `s` along `P_{i,n}`,
//! hypothesis checking and reporting for the decomposition of nearly
//! holomorphic forms with sufficiently regular infinitesimal character, and
//! the surjectivity criterion for the global Siegel operator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::embeddings::klingen_embedding_datum;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weights::{is_dominant_row, is_integral, is_k_dominant, rho, Weight};
use crate::weyl::{canonical_parameter, dominant_orbit_elements, is_sufficiently_regular};

/// Harish-Chandra parameter `ρ + (inner, s, …, s)` of the induction at level `s`.
pub fn hc_parameter(inner: &[Scalar], s: Scalar, n: usize, i: usize) -> Result<Vec<Scalar>> {
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n });
    }
    if inner.len() != n - i {
        return Err(Error::LengthMismatch { expected: n - i, found: inner.len() });
    }
    Ok(rho(n)
        .into_iter()
        .zip(inner.iter().copied().chain(std::iter::repeat(s)))
        .map(|(r, x)| r + x)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClassification {
    pub n: usize,
    pub i: usize,
    /// `X = {0, …, upper}`.
    pub upper: i64,
    pub y: Vec<i64>,
    /// Equivalence classes of `X`, each sorted, ordered by least element.
    pub classes: Vec<Vec<i64>>,
    pub bijective: bool,
}

impl OrbitClassification {
    pub fn x(&self) -> impl Iterator<Item = i64> {
        0..=self.upper
    }
}

/// `Y = (X ∩ Z_{≤ n-(i-1)/2}) ∪ (X ∩ Z_{≥ 2n-i+2})`.
fn in_y(s: i64, n: usize, i: usize) -> bool {
    let (n, i) = (n as i64, i as i64);
    2 * s <= 2 * n - (i - 1) || s >= 2 * n - i + 2
}

fn check_inner(inner: &[Scalar]) -> Result<()> {
    if !inner.iter().all(|x| x.is_integer()) {
        return Err(Error::NonIntegral);
    }
    if !is_dominant_row(inner) {
        return Err(Error::NotDominant);
    }
    Ok(())
}

/// Classification of `X = {0, …, inner_{n-i}}` for `1 <= i < n`.
pub fn classify_levels(inner: &[Scalar], n: usize, i: usize) -> Result<OrbitClassification> {
    if i < 1 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n.saturating_sub(1) });
    }
    if inner.len() != n - i {
        return Err(Error::LengthMismatch { expected: n - i, found: inner.len() });
    }
    check_inner(inner)?;
    let upper = inner[n - i - 1].to_integer().expect("checked integral");
    if upper < 0 {
        return Err(Error::NotDominant);
    }
    classify_levels_bounded(inner, n, i, upper)
}

/// Same classification with an explicit upper end of `X`. This is the only
/// route for `i = n`, where `X` has no natural bound.
pub fn classify_levels_bounded(
    inner: &[Scalar],
    n: usize,
    i: usize,
    upper: i64,
) -> Result<OrbitClassification> {
    if upper < 0 {
        return Err(Error::InvalidArgument(format!("upper bound {upper} is negative")));
    }
    check_inner(inner)?;
    let mut by_class: BTreeMap<Vec<Scalar>, Vec<i64>> = BTreeMap::new();
    for s in 0..=upper {
        let param = hc_parameter(inner, Scalar::int(s), n, i)?;
        by_class.entry(canonical_parameter(&param)).or_default().push(s);
    }
    let mut classes: Vec<Vec<i64>> = by_class.into_values().collect();
    classes.sort();
    let y: Vec<i64> = (0..=upper).filter(|&s| in_y(s, n, i)).collect();
    let bijective = classes
        .iter()
        .all(|c| c.iter().filter(|&&s| in_y(s, n, i)).count() == 1);
    Ok(OrbitClassification { n, i, upper, y, classes, bijective })
}

/// Levels `s` and `2n - i + 1 - s` give the same infinitesimal character.
pub fn duality_check(inner: &[Scalar], n: usize, i: usize, s: Scalar) -> Result<bool> {
    let dual = Scalar::int(2 * n as i64 - i as i64 + 1) - s;
    let a = hc_parameter(inner, s, n, i)?;
    let b = hc_parameter(inner, dual, n, i)?;
    Ok(canonical_parameter(&a) == canonical_parameter(&b))
}

/// Dominant weights `ω` with `χ_ω = χ_λ`, whose last `i` entries agree at each
/// place and whose bottom entry does not depend on the place. An empty
/// result rules out forms with this infinitesimal character supported on
/// `Q_{i,n}`.
pub fn theorem_main_necessary(weight: &Weight, i: usize) -> Result<Vec<Weight>> {
    let n = weight.n();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n });
    }
    if !is_integral(weight) {
        return Err(Error::NonIntegral);
    }
    Ok(dominant_orbit_elements(weight)?
        .into_iter()
        .filter(|omega| omega.tail_constant(i) && omega.constant_bottom().is_some())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    IsotypicDescription,
    VanishesWrongParity,
    HypothesesFail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisLine {
    pub name: String,
    pub pass: bool,
}

/// Structured description of the `(M_{Q_{i,n}}, μ^{⊠i} ⊠ π)`-component.
///
/// JSON field names are frozen; see the repository README.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub d: usize,
    pub i: usize,
    pub weight: Weight,
    pub hypotheses: Vec<HypothesisLine>,
    pub assumptions: Vec<String>,
    pub parity_class: Option<i8>,
    pub exponent: Option<Scalar>,
    pub inner_weights: Vec<Vec<Scalar>>,
    /// Archimedean parity of the Hecke character the report was asked about,
    /// if any.
    pub character_sign: Option<i8>,
    pub conclusion: Conclusion,
}

pub const HYP_DOMINANT_INTEGRAL: &str = "weight is k-dominant and integral";
pub const HYP_TAIL_CONSTANT: &str = "last i entries equal at every place";
pub const HYP_BOTTOM_CONSTANT: &str = "bottom entry independent of the place";
pub const HYP_SUFFICIENTLY_REGULAR: &str = "infinitesimal character sufficiently regular relative to i";
pub const HYP_INNER_BOUND: &str = "inner bottom entry exceeds 2n-i+1";
pub const ASSUMPTION_CUSPIDAL_DATUM: &str =
    "a holomorphic cuspidal representation pi of the Sp(2(n-i)) factor with pi_inf = L(inner weights) is given (not verified)";

pub fn decomposition_report(weight: &Weight, i: usize) -> DecompositionReport {
    build_report(weight, i, None)
}

/// Report for a specific Hecke character, given by its archimedean sign
/// (`1` for trivial, `-1` for `sgn` at every place). A sign different from
/// `(-1)^{λ_n}` gives [`Conclusion::VanishesWrongParity`].
pub fn decomposition_report_for_character(weight: &Weight, i: usize, sign: i8) -> DecompositionReport {
    build_report(weight, i, Some(sign))
}

fn build_report(weight: &Weight, i: usize, sign: Option<i8>) -> DecompositionReport {
    let n = weight.n();
    let index_ok = (1..=n).contains(&i);
    let dominant_integral = is_k_dominant(weight) && is_integral(weight);
    let tail = index_ok && weight.tail_constant(i);
    let bottom_constant = weight.constant_bottom().is_some();
    let suff_reg = index_ok && dominant_integral && is_sufficiently_regular(weight, i).unwrap_or(false);
    let bound = Scalar::int(2 * n as i64 - i as i64 + 1);

    let mut hypotheses = vec![
        HypothesisLine { name: HYP_DOMINANT_INTEGRAL.into(), pass: dominant_integral },
        HypothesisLine { name: HYP_TAIL_CONSTANT.into(), pass: tail },
        HypothesisLine { name: HYP_BOTTOM_CONSTANT.into(), pass: bottom_constant },
        HypothesisLine { name: HYP_SUFFICIENTLY_REGULAR.into(), pass: suff_reg },
    ];
    if index_ok && i < n {
        let inner_ok = weight.rows().iter().all(|r| r[n - i - 1] > bound);
        hypotheses.push(HypothesisLine { name: HYP_INNER_BOUND.into(), pass: inner_ok });
    }
    let all_pass = index_ok && hypotheses.iter().all(|h| h.pass);

    let (parity_class, exponent, inner_weights) = if all_pass {
        let bottom = weight.constant_bottom().expect("checked");
        let parity = if bottom.parity() == Some(0) { 1 } else { -1 };
        let exponent = bottom - Scalar::int(n as i64) + Scalar::from_halves(i as i64 - 1);
        let inner = weight.rows().iter().map(|r| r[..n - i].to_vec()).collect();
        (Some(parity), Some(exponent), inner)
    } else {
        (None, None, Vec::new())
    };
    let conclusion = match (all_pass, sign, parity_class) {
        (false, _, _) => Conclusion::HypothesesFail,
        (true, Some(s), Some(p)) if s != p => Conclusion::VanishesWrongParity,
        _ => Conclusion::IsotypicDescription,
    };
    if conclusion == Conclusion::IsotypicDescription {
        // the reported exponent is exactly the Klingen embedding exponent
        debug_assert!(weight.rows().iter().all(|r| klingen_embedding_datum(r, i)
            .map(|d| Some(d.character.exponent) == exponent)
            .unwrap_or(false)));
    }
    DecompositionReport {
        n,
        d: weight.d(),
        i,
        weight: weight.clone(),
        hypotheses,
        assumptions: vec![ASSUMPTION_CUSPIDAL_DATUM.into()],
        parity_class,
        exponent,
        inner_weights,
        character_sign: sign,
        conclusion,
    }
}

/// Reports for every parabolic index `1 <= i <= n`.
pub fn enumerate_reports(weight: &Weight) -> Vec<DecompositionReport> {
    (1..=weight.n()).map(|i| decomposition_report(weight, i)).collect()
}

pub fn is_squarefree(level: u64) -> bool {
    if level == 0 {
        return false;
    }
    let mut m = level;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Square-free level given as a list of primes: all entries prime and distinct.
pub fn is_squarefree_factored(primes: &[u64]) -> bool {
    let is_prime = |p: u64| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.iter().all(|&p| is_prime(p)) && sorted.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurjectivityTag {
    SurjectiveByTheorem,
    NotCovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityVerdict {
    pub tag: SurjectivityTag,
    pub failed_conditions: Vec<String>,
}

pub const COND_SQUAREFREE: &str = "level is square-free";
pub const COND_BOTTOM_BOUND: &str = "bottom entry exceeds 2n at every place";
pub const COND_BOTTOM_CONSTANT: &str = "bottom entry independent of the place";
pub const COND_WEIGHT_ALTERNATIVE: &str =
    "lambda_{n-1} = lambda_n at every place, or lambda_{n-1} varies across places";

/// Whether the global Siegel operator on weight `λ` and level `N` is covered
/// by the surjectivity theorem.
pub fn siegel_surjectivity_check(weight: &Weight, level: u64) -> Result<SurjectivityVerdict> {
    surjectivity(weight, is_squarefree(level))
}

pub fn siegel_surjectivity_check_factored(weight: &Weight, primes: &[u64]) -> Result<SurjectivityVerdict> {
    surjectivity(weight, is_squarefree_factored(primes))
}

fn surjectivity(weight: &Weight, squarefree: bool) -> Result<SurjectivityVerdict> {
    let n = weight.n();
    if n == 1 {
        return Err(Error::RankOne);
    }
    if !is_k_dominant(weight) || !is_integral(weight) {
        return Err(Error::HypothesisViolated("weight must be k-dominant and integral".into()));
    }
    let bound = Scalar::int(2 * n as i64);
    let second: Vec<Scalar> = weight.rows().iter().map(|r| r[n - 2]).collect();
    let tail_equal = weight.rows().iter().all(|r| r[n - 2] == r[n - 1]);
    let second_varies = second.iter().any(|&x| x != second[0]);

    let mut failed = Vec::new();
    if !squarefree {
        failed.push(COND_SQUAREFREE.to_string());
    }
    if !weight.bottom_entries().all(|b| b > bound) {
        failed.push(COND_BOTTOM_BOUND.to_string());
    }
    if weight.constant_bottom().is_none() {
        failed.push(COND_BOTTOM_CONSTANT.to_string());
    }
    if !(tail_equal || second_varies) {
        failed.push(COND_WEIGHT_ALTERNATIVE.to_string());
    }
    let tag = if failed.is_empty() {
        SurjectivityTag::SurjectiveByTheorem
    } else {
        SurjectivityTag::NotCovered
    };
    Ok(SurjectivityVerdict { tag, failed_conditions: failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().copied().map(Scalar::int).collect()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn hc_parameter_examples() {
        assert_eq!(hc_parameter(&v(&[5]), Scalar::ZERO, 2, 1).unwrap(), v(&[4, -2]));
        assert_eq!(hc_parameter(&v(&[5]), Scalar::int(2), 2, 1).unwrap(), v(&[4, 0]));
        assert_eq!(hc_parameter(&[], Scalar::int(3), 1, 1).unwrap(), v(&[2]));
        assert!(matches!(
            hc_parameter(&v(&[5, 4]), Scalar::ZERO, 2, 1),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let c = classify_levels(&v(&[5]), 2, 1).unwrap();
        assert_eq!(c.classes, vec![vec![0, 4], vec![1, 3], vec![2], vec![5]]);
        assert_eq!(c.y, vec![0, 1, 2, 5]);
        assert!(c.bijective);
        assert_eq!(c.x().count(), 6);

        let c = classify_levels(&v(&[0]), 2, 1).unwrap();
        assert_eq!((c.classes, c.y, c.bijective), (vec![vec![0]], vec![0], true));

        assert!(classify_levels(&v(&[7, 7]), 3, 1).unwrap().bijective);
        assert!(matches!(classify_levels(&[], 2, 2), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(classify_levels(&v(&[3, 5]), 3, 1), Err(Error::NotDominant));
        assert_eq!(classify_levels(&v(&[-1]), 2, 1), Err(Error::NotDominant));
    }

    #[test]
    fn classify_siegel_case_with_bound() {
        // i = n: λ(s) = (s-1, …, s-n), dual level n+1-s
        let c = classify_levels_bounded(&[], 2, 2, 6).unwrap();
        assert_eq!(c.y, vec![0, 1, 4, 5, 6]);
        assert_eq!(c.classes, vec![vec![0, 3], vec![1, 2], vec![4], vec![5], vec![6]]);
        assert!(c.bijective);
    }

    #[test]
    fn duality_examples() {
        assert!(duality_check(&v(&[5]), 2, 1, Scalar::ZERO).unwrap());
        assert!(duality_check(&v(&[5]), 2, 1, Scalar::int(2)).unwrap());
        for s in 0..=6 {
            assert!(duality_check(&v(&[6]), 3, 2, Scalar::int(s)).unwrap());
        }
    }

    #[test]
    fn necessary_condition_examples() {
        let got = theorem_main_necessary(&w("3,3"), 2).unwrap();
        assert_eq!(got, vec![w("3,3"), w("0,0")]);
        let got = theorem_main_necessary(&w("3,1"), 1).unwrap();
        assert_eq!(got.len(), 4);
        let got = theorem_main_necessary(&w("5,3;5,4"), 1).unwrap();
        assert!(!got.is_empty());
        for omega in &got {
            assert!(omega.constant_bottom().is_some());
        }
        let all = dominant_orbit_elements(&w("5,3;5,4")).unwrap();
        let expected: Vec<_> = all.into_iter().filter(|o| o.constant_bottom().is_some()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn report_examples() {
        let r = decomposition_report(&w("12,12"), 1);
        assert_eq!(r.conclusion, Conclusion::IsotypicDescription);
        assert_eq!(r.parity_class, Some(1));
        assert_eq!(r.exponent, Some(Scalar::int(10)));
        assert_eq!(r.inner_weights, vec![v(&[12])]);

        let r = decomposition_report(&w("12,11"), 2);
        assert_eq!(r.conclusion, Conclusion::HypothesesFail);
        assert!(!r.hypotheses.iter().find(|h| h.name == HYP_TAIL_CONSTANT).unwrap().pass);

        let r = decomposition_report(&w("3,3"), 1);
        assert_eq!(r.conclusion, Conclusion::HypothesesFail);
        assert!(!r.hypotheses.iter().find(|h| h.name == HYP_SUFFICIENTLY_REGULAR).unwrap().pass);

        let r = decomposition_report_for_character(&w("12,12"), 1, -1);
        assert_eq!(r.conclusion, Conclusion::VanishesWrongParity);
        let r = decomposition_report_for_character(&w("12,12"), 1, 1);
        assert_eq!(r.conclusion, Conclusion::IsotypicDescription);

        assert_eq!(decomposition_report(&w("12,12"), 3).conclusion, Conclusion::HypothesesFail);
    }

    #[test]
    fn reports_for_all_indices() {
        let reports = enumerate_reports(&w("13,13,13"));
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.conclusion == Conclusion::IsotypicDescription));
        assert_eq!(reports[2].exponent, Some(Scalar::int(11)));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(6));
        assert!(!is_squarefree(12));
        assert!(is_squarefree(1));
        assert!(!is_squarefree(49));
        assert!(is_squarefree(2 * 3 * 5 * 7 * 11 * 13));
        assert!(is_squarefree(4_294_967_291)); // prime
        assert!(is_squarefree_factored(&[2, 3]));
        assert!(!is_squarefree_factored(&[2, 2]));
        assert!(!is_squarefree_factored(&[4]));
    }

    #[test]
    fn surjectivity_examples() {
        let ok = siegel_surjectivity_check(&w("11,11"), 6).unwrap();
        assert_eq!(ok.tag, SurjectivityTag::SurjectiveByTheorem);
        assert!(ok.failed_conditions.is_empty());

        let bad = siegel_surjectivity_check(&w("11,11"), 12).unwrap();
        assert_eq!(bad.tag, SurjectivityTag::NotCovered);
        assert_eq!(bad.failed_conditions, vec![COND_SQUAREFREE.to_string()]);

        let two = siegel_surjectivity_check(&w("11,11;12,11"), 6).unwrap();
        assert_eq!(two.tag, SurjectivityTag::SurjectiveByTheorem);

        let neither = siegel_surjectivity_check(&w("12,11;12,11"), 6).unwrap();
        assert_eq!(neither.failed_conditions, vec![COND_WEIGHT_ALTERNATIVE.to_string()]);

        assert_eq!(siegel_surjectivity_check(&w("11"), 6), Err(Error::RankOne));
    }

    #[test]
    fn surjectivity_depends_on_level_only_through_squarefreeness() {
        for level in 1..200u64 {
            let verdict = siegel_surjectivity_check(&w("11,11"), level).unwrap();
            assert_eq!(verdict.tag == SurjectivityTag::SurjectiveByTheorem, is_squarefree(level));
        }
    }
}
