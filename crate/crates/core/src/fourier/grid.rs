//! Finite grids of positive definite `d`-tuples that detect vanishing of
//! polynomials in the matrix entries (combinatorial nullstellensatz).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::{Rat, SymMatrix};
use crate::error::{Error, Result};
use crate::lfactors::LaurentPoly;

/// Name of the entry `(i, j)`, `i <= j`, of the matrix at place `k`; all
/// indices 1-based.
pub fn grid_variable(i: usize, j: usize, k: usize) -> String {
    format!("x{i}_{j}_{k}")
}

fn parse_grid_variable(name: &str) -> Option<(usize, usize, usize)> {
    let mut parts = name.strip_prefix('x')?.split('_').map(|p| p.parse::<usize>().ok());
    let (i, j, k) = (parts.next()??, parts.next()??, parts.next()??);
    (parts.next().is_none() && i >= 1 && i <= j && k >= 1).then_some((i, j, k))
}

/// Degree bounds `t_{ij}^{(k)}` for one `n x n` symmetric matrix per place,
/// stored as upper triangles in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBounds {
    n: usize,
    places: Vec<Vec<u32>>,
}

impl DegreeBounds {
    pub fn uniform(n: usize, d: usize, t: u32) -> Self {
        DegreeBounds { n, places: vec![vec![t; n * (n + 1) / 2]; d] }
    }

    /// `flat` holds either one bound for everything or `d` upper triangles
    /// back to back.
    pub fn from_flat(n: usize, d: usize, flat: &[u32]) -> Result<Self> {
        let tri = n * (n + 1) / 2;
        match flat.len() {
            1 => Ok(DegreeBounds::uniform(n, d, flat[0])),
            len if len == tri * d => Ok(DegreeBounds { n, places: flat.chunks(tri).map(<[u32]>::to_vec).collect() }),
            len => Err(Error::LengthMismatch { expected: tri * d, found: len }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.places.len()
    }

    /// 0-based `(i, j)` in either order, 0-based place.
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let idx = (0..i).map(|r| self.n - r).sum::<usize>() + (j - i);
        self.places[k][idx]
    }

    fn max_off_diagonal(&self, k: usize) -> Option<u32> {
        (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j, k)).max()
    }
}

/// A place where every point of the prescribed grid had to be shifted
/// further into the cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDeviation {
    pub place: usize,
    pub prescribed_offset: u64,
    pub inflated_offset: u64,
    pub witness: SymMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdGrid {
    bounds: DegreeBounds,
    offsets: Vec<u64>,
    deviations: Vec<GridDeviation>,
}

impl PdGrid {
    pub fn n(&self) -> usize {
        self.bounds.n
    }

    pub fn d(&self) -> usize {
        self.bounds.d()
    }

    pub fn bounds(&self) -> &DegreeBounds {
        &self.bounds
    }

    /// Lower end of the diagonal value sets at each place.
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn deviations(&self) -> &[GridDeviation] {
        &self.deviations
    }

    /// Off-diagonal entries take `1..=t+1`, diagonal ones `M..=M+t`.
    pub fn axis(&self, i: usize, j: usize, k: usize) -> Vec<i64> {
        axis(&self.bounds, self.offsets[k], i, j, k)
    }

    pub fn place_points(&self, k: usize) -> Vec<SymMatrix> {
        place_points(&self.bounds, self.offsets[k], k)
    }

    pub fn num_points(&self) -> usize {
        (0..self.d()).map(|k| self.place_points(k).len()).product()
    }

    /// Every `d`-tuple in the grid.
    pub fn points(&self) -> Vec<Vec<SymMatrix>> {
        let per_place: Vec<Vec<SymMatrix>> = (0..self.d()).map(|k| self.place_points(k)).collect();
        let mut out = vec![Vec::new()];
        for choices in &per_place {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |m| {
                        let mut next = prefix.clone();
                        next.push(m.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }
}

fn axis(bounds: &DegreeBounds, offset: u64, i: usize, j: usize, k: usize) -> Vec<i64> {
    let t = bounds.get(i, j, k) as i64;
    if i == j {
        let m = offset as i64;
        (m..=m + t).collect()
    } else {
        (1..=t + 1).collect()
    }
}

fn place_points(bounds: &DegreeBounds, offset: u64, k: usize) -> Vec<SymMatrix> {
    let n = bounds.n;
    let axes: Vec<Vec<i64>> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| axis(bounds, offset, i, j, k))
        .collect();
    let mut tuples = vec![Vec::new()];
    for values in &axes {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|u| {
            let upper: Vec<Rat> = u.into_iter().map(|v| Rat::from_integer(v.into())).collect();
            SymMatrix::from_upper(n, &upper).expect("grid shape is consistent")
        })
        .collect()
}

/// Diagonal offset `M = n (max_{p≠q} t_pq)^2`; with no off-diagonal entry the
/// maximum is taken to be `1`.
fn prescribed_offset(bounds: &DegreeBounds, k: usize) -> u64 {
    let max = bounds.max_off_diagonal(k).unwrap_or(1) as u64;
    bounds.n as u64 * max * max
}

/// Builds the grid with the prescribed offsets, inflating a place to
/// `n (max + 1)^2` (strict diagonal dominance) whenever one of its points is
/// not positive definite.
pub fn build_pd_grid(bounds: &DegreeBounds) -> Result<PdGrid> {
    if bounds.n == 0 || bounds.d() == 0 {
        return Err(Error::InvalidArgument("grid needs n >= 1 and d >= 1".into()));
    }
    let mut offsets = Vec::with_capacity(bounds.d());
    let mut deviations = Vec::new();
    for k in 0..bounds.d() {
        let prescribed = prescribed_offset(bounds, k);
        let witness = place_points(bounds, prescribed, k).into_iter().find(|h| !h.is_pd());
        match witness {
            None => offsets.push(prescribed),
            Some(witness) => {
                let max = bounds.max_off_diagonal(k).unwrap_or(0) as u64;
                let inflated = bounds.n as u64 * (max + 1) * (max + 1);
                debug_assert!(place_points(bounds, inflated, k).iter().all(SymMatrix::is_pd));
                offsets.push(inflated);
                deviations.push(GridDeviation { place: k, prescribed_offset: prescribed, inflated_offset: inflated, witness });
            }
        }
    }
    Ok(PdGrid { bounds: bounds.clone(), offsets, deviations })
}

/// Whether `p` vanishes at every grid point. Because the degree in each
/// variable stays below the size of its value set, this holds only for the
/// zero polynomial.
pub fn pit_vanishes(p: &LaurentPoly, grid: &PdGrid) -> Result<bool> {
    let mut vars = Vec::new();
    for name in p.generators() {
        let (i, j, k) = parse_grid_variable(&name)
            .filter(|&(_, j, k)| j <= grid.n() && k <= grid.d())
            .ok_or_else(|| Error::InvalidArgument(format!("'{name}' is not a grid variable")))?;
        if p.min_degree(&name) < 0 {
            return Err(Error::InvalidArgument(format!("negative power of '{name}'")));
        }
        let bound = grid.bounds.get(i - 1, j - 1, k - 1) as i64;
        let degree = p.max_degree(&name);
        if degree > bound {
            return Err(Error::DegreeExceedsGrid { variable: name, degree, bound });
        }
        vars.push((name, i - 1, j - 1, k - 1));
    }
    if let Some(c) = p.as_constant() {
        return Ok(c.is_zero());
    }
    for point in grid.points() {
        let assignment: BTreeMap<String, Rat> =
            vars.iter().map(|(name, i, j, k)| (name.clone(), point[*k].get(*i, *j).clone())).collect();
        if !p.evaluate(&assignment)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_grid_example() {
        let grid = build_pd_grid(&DegreeBounds::uniform(2, 1, 2)).unwrap();
        assert!(grid.deviations().is_empty());
        assert_eq!(grid.axis(0, 0, 0), vec![8, 9, 10]);
        assert_eq!(grid.axis(0, 1, 0), vec![1, 2, 3]);
        assert_eq!(grid.num_points(), 27);
        assert!(grid.points().iter().all(|p| p[0].is_pd()));
    }

    #[test]
    fn unit_bounds_need_inflation() {
        let grid = build_pd_grid(&DegreeBounds::uniform(2, 1, 1)).unwrap();
        let dev = &grid.deviations()[0];
        assert_eq!(dev.prescribed_offset, 2);
        assert_eq!(dev.witness, SymMatrix::from_ints(&[&[2, 2], &[2, 2]]).unwrap());
        assert_eq!(dev.inflated_offset, 8);
        assert!(grid.points().iter().all(|p| p[0].is_pd()));
    }

    #[test]
    fn size_one_grid() {
        let grid = build_pd_grid(&DegreeBounds::uniform(1, 2, 3)).unwrap();
        assert_eq!(grid.axis(0, 0, 1), vec![1, 2, 3, 4]);
        assert_eq!(grid.num_points(), 16);
    }

    #[test]
    fn bounds_indexing() {
        let b = DegreeBounds::from_flat(3, 1, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!((b.get(0, 0, 0), b.get(0, 2, 0), b.get(1, 1, 0), b.get(2, 1, 0), b.get(2, 2, 0)), (1, 3, 4, 5, 6));
        assert!(DegreeBounds::from_flat(2, 2, &[1, 2]).is_err());
    }

    #[test]
    fn pit_examples() {
        let grid = build_pd_grid(&DegreeBounds::uniform(2, 1, 2)).unwrap();
        let p: LaurentPoly = "x1_1_1 - 1".parse().unwrap();
        assert!(!pit_vanishes(&p, &grid).unwrap());
        let zero = LaurentPoly::var("x1_2_1") - LaurentPoly::var("x1_2_1");
        assert!(pit_vanishes(&zero, &grid).unwrap());
        let high: LaurentPoly = "x1_1_1^3".parse().unwrap();
        assert_eq!(
            pit_vanishes(&high, &grid),
            Err(Error::DegreeExceedsGrid { variable: "x1_1_1".into(), degree: 3, bound: 2 })
        );
        assert!(pit_vanishes(&"y".parse().unwrap(), &grid).is_err());
        assert!(pit_vanishes(&"x2_1_1".parse().unwrap(), &grid).is_err());
    }
}
