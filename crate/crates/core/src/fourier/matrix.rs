//! Exact rational matrices: symmetric Fourier indices and the `GL_n` action.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfactors::{format_rational, parse_rational};

/// Largest matrix size accepted; semidefiniteness enumerates all `2^n - 1`
/// principal minors.
pub const MAX_SIZE: usize = 6;

pub type Rat = BigRational;

fn rat(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

/// Square rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    rows: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: bad.len() });
        }
        Ok(RatMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        RatMatrix::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::diagonal(&vec![Rat::one(); n])
    }

    pub fn diagonal(diag: &[Rat]) -> Self {
        let n = diag.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { Rat::zero() }).collect())
            .collect();
        RatMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.size();
        RatMatrix { rows: (0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect() }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        let n = self.size();
        if other.size() != n {
            return Err(Error::LengthMismatch { expected: n, found: other.size() });
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rat::zero(), |acc, k| acc + &self.rows[i][k] * &other.rows[k][j]))
                    .collect()
            })
            .collect();
        Ok(RatMatrix { rows })
    }

    pub fn det(&self) -> Rat {
        determinant(self.rows.clone())
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.rows.clone()).0
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.size();
        let mut aug: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::Singular)?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &aug[col][c];
                        aug[r][c] -= delta;
                    }
                }
            }
        }
        Ok(RatMatrix { rows: aug.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_integer())
    }
}

/// Returns `(rank, sign-tracked product of pivots)`.
fn row_echelon(mut m: Vec<Vec<Rat>>) -> (usize, Rat) {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    let mut det = Rat::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            det = Rat::zero();
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            det = -det;
        }
        det *= &m[rank][col];
        for r in rank + 1..rows {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    (rank, det)
}

fn determinant(m: Vec<Vec<Rat>>) -> Rat {
    if m.is_empty() {
        return Rat::one();
    }
    let (rank, det) = row_echelon(m.clone());
    if rank < m.len() {
        Rat::zero()
    } else {
        det
    }
}

/// Symmetric rational matrix of size at most [`MAX_SIZE`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatrix(RatMatrix);

impl SymMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let m = RatMatrix::new(rows)?;
        SymMatrix::from_matrix(m)
    }

    pub fn from_matrix(m: RatMatrix) -> Result<Self> {
        let n = m.size();
        if n == 0 || n > MAX_SIZE {
            return Err(Error::InvalidArgument(format!("symmetric matrix size {n} outside 1..={MAX_SIZE}")));
        }
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidArgument("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymMatrix(m))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        SymMatrix::from_matrix(RatMatrix::from_ints(rows)?)
    }

    pub fn diagonal_ints(diag: &[i64]) -> Result<Self> {
        SymMatrix::from_matrix(RatMatrix::diagonal(&diag.iter().map(|&x| rat(x)).collect::<Vec<_>>()))
    }

    pub fn identity(n: usize) -> Result<Self> {
        SymMatrix::from_matrix(RatMatrix::identity(n))
    }

    /// From the row-major upper triangle `h11, h12, …, h1n, h22, …, hnn`.
    pub fn from_upper(n: usize, upper: &[Rat]) -> Result<Self> {
        let expected = n * (n + 1) / 2;
        if upper.len() != expected {
            return Err(Error::LengthMismatch { expected, found: upper.len() });
        }
        let mut rows = vec![vec![Rat::zero(); n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().expect("length checked").clone();
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        SymMatrix::new(rows)
    }

    pub fn upper(&self) -> Vec<Rat> {
        let n = self.size();
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect()
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }
    /// Full matrix as `[[a,b],[b,c]]`.
    pub fn bracketed(&self) -> String {
        let rows: Vec<String> = self
            .0
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        format!("[{}]", rows.join(","))
    }


    pub fn get(&self, i: usize, j: usize) -> &Rat {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn corank(&self) -> usize {
        self.size() - self.rank()
    }

    pub fn det(&self) -> Rat {
        self.0.det()
    }

    fn principal_minor(&self, indices: &[usize]) -> Rat {
        determinant(
            indices
                .iter()
                .map(|&i| indices.iter().map(|&j| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    /// All `2^n - 1` principal minors are non-negative.
    pub fn is_psd(&self) -> bool {
        let n = self.size();
        (1u32..1 << n).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            !self.principal_minor(&idx).is_negative()
        })
    }

    /// Leading principal minors are positive (Sylvester).
    pub fn is_pd(&self) -> bool {
        (1..=self.size()).all(|k| self.principal_minor(&(0..k).collect::<Vec<_>>()).is_positive())
    }

    /// The first `j` rows and columns vanish.
    pub fn in_sym_j(&self, j: usize) -> bool {
        let n = self.size();
        let j = j.min(n);
        (0..j).all(|i| (0..n).all(|c| self.get(i, c).is_zero()))
    }

    /// `diag(0, h)`.
    pub fn pad_zero(&self) -> Result<SymMatrix> {
        let n = self.size();
        let mut rows = vec![vec![Rat::zero(); n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                rows[i + 1][j + 1] = self.get(i, j).clone();
            }
        }
        SymMatrix::new(rows)
    }

    /// Lower-right `(n-1) x (n-1)` block.
    pub fn drop_first(&self) -> Result<SymMatrix> {
        let n = self.size();
        SymMatrix::new((1..n).map(|i| (1..n).map(|j| self.get(i, j).clone()).collect()).collect())
    }
}

/// `ᵗa⁻¹ h a⁻¹`, the index of the coefficient paired with `h` under `a`.
pub fn gl_transform(h: &SymMatrix, a: &RatMatrix) -> Result<SymMatrix> {
    let a_inv = a.inverse()?;
    let m = a_inv.transpose().mul(h.matrix())?.mul(&a_inv)?;
    SymMatrix::from_matrix(m)
}

impl fmt::Display for SymMatrix {
    /// Row-major upper triangle, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.upper().iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses a row-major upper triangle; the size is inferred from the length.
impl FromStr for SymMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        let len = entries.len();
        let n = (1..=MAX_SIZE)
            .find(|n| n * (n + 1) / 2 == len)
            .ok_or_else(|| Error::Parse(format!("{len} entries is not a triangular number <= 21")))?;
        SymMatrix::from_upper(n, &entries)
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `a11,a12,…;a21,…` as a full square matrix.
impl FromStr for RatMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| r.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::new(rows)
    }
}
