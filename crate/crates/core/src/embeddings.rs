//! Induction data whose induced representations carry a highest weight
//! vector of a given weight, and the convergence ranges of the associated
//! Eisenstein series.
//!
//! Characters of `R^×` are recorded as `sgn^parity |·|^exponent`.
//! Operations here act on a single place; multi-place weights are handled
//! row by row by the callers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weights::is_dominant_row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterDatum {
    /// Exponent of `sgn`, 0 or 1.
    pub parity: u8,
    pub exponent: Scalar,
}

impl CharacterDatum {
    pub fn new(parity: u8, exponent: Scalar) -> Result<Self> {
        if parity > 1 {
            return Err(Error::InvalidArgument(format!("parity {parity} is not 0 or 1")));
        }
        Ok(CharacterDatum { parity, exponent })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InductionDatum {
    pub n: usize,
    /// Parabolic index: the Levi is `GL_i x Sp(2(n-i))`.
    pub i: usize,
    pub character: CharacterDatum,
    pub inner_weight: Vec<Scalar>,
}

fn integral_dominant(lambda: &[Scalar]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::InvalidArgument("empty weight".into()));
    }
    if !lambda.iter().all(|x| x.is_integer()) {
        return Err(Error::NonIntegral);
    }
    if !is_dominant_row(lambda) {
        return Err(Error::NotDominant);
    }
    Ok(())
}

fn parity_of(x: Scalar) -> u8 {
    x.parity().expect("integral entry")
}

/// The principal series character containing a highest weight vector of
/// weight `lambda`: position `k` carries `sgn^{λ_{n+1-k}} |·|^{λ_{n+1-k} - (n+1-k)}`.
pub fn principal_series_datum(lambda: &[Scalar]) -> Result<Vec<CharacterDatum>> {
    integral_dominant(lambda)?;
    let n = lambda.len();
    Ok((1..=n)
        .map(|k| {
            let idx = n + 1 - k;
            let entry = lambda[idx - 1];
            CharacterDatum { parity: parity_of(entry), exponent: entry - Scalar::int(idx as i64) }
        })
        .collect())
}

/// Degenerate induction from `P_{i,n}` containing a highest weight vector of
/// weight `lambda`; needs `λ_{n-i+1} = … = λ_n`.
pub fn klingen_embedding_datum(lambda: &[Scalar], i: usize) -> Result<InductionDatum> {
    integral_dominant(lambda)?;
    let n = lambda.len();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n });
    }
    let bottom = lambda[n - 1];
    if lambda[n - i..].iter().any(|&x| x != bottom) {
        return Err(Error::TailNotConstant(i));
    }
    let exponent = bottom - Scalar::int(n as i64) + Scalar::from_halves(i as i64 - 1);
    Ok(InductionDatum {
        n,
        i,
        character: CharacterDatum { parity: parity_of(bottom), exponent },
        inner_weight: lambda[..n - i].to_vec(),
    })
}

/// The unique weight whose highest weight vector can sit in the induction
/// `Ind_{P_{i,n}}(μ ⊠ L(ω))`, or `None` when no weight fits.
pub fn klingen_embedding_inverse(
    n: usize,
    i: usize,
    character: CharacterDatum,
    inner: &[Scalar],
) -> Option<Vec<Scalar>> {
    if i < 1 || i > n || inner.len() != n - i {
        return None;
    }
    let t = character.exponent + Scalar::int(n as i64) - Scalar::from_halves(i as i64 - 1);
    if t.parity()? != character.parity {
        return None;
    }
    let mut lambda = inner.to_vec();
    lambda.extend(std::iter::repeat(t).take(i));
    (lambda.iter().all(|x| x.is_integer()) && is_dominant_row(&lambda)).then_some(lambda)
}

/// Siegel degenerate principal series `I_{P_{n,n}}(sgn^{λ_n}, λ_n - (n+1)/2)`.
pub fn siegel_degenerate_datum(lambda: &[Scalar]) -> Result<CharacterDatum> {
    integral_dominant(lambda)?;
    let n = lambda.len();
    let bottom = lambda[n - 1];
    if lambda.iter().any(|&x| x != bottom) {
        return Err(Error::NotScalarWeight);
    }
    Ok(CharacterDatum {
        parity: parity_of(bottom),
        exponent: bottom - Scalar::from_halves(n as i64 + 1),
    })
}

/// Klingen Eisenstein series along `P_{j,n}` converge absolutely for
/// `s > n - (j-1)/2`.
pub fn klingen_convergence(s: Scalar, n: usize, j: usize) -> bool {
    s > Scalar::int(n as i64) - Scalar::from_halves(j as i64 - 1)
}

/// Degenerate Eisenstein series on `GL_n` converge absolutely for `s - t > n/2`.
pub fn gl_degenerate_convergence(s: Scalar, t: Scalar, n: usize) -> bool {
    s - t > Scalar::from_halves(n as i64)
}
