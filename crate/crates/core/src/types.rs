//! Domain types: potentials, pmfs, samples, constraint systems and dual solutions.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

/// Sum tolerance for accepting a vector as a pmf as-is.
pub const PMF_SUM_TOL: f64 = 1e-12;
/// Vectors whose sum is off by less than this are renormalized; beyond it they are rejected.
pub const PMF_RENORM_TOL: f64 = 1e-9;

/// A real m-vector `u` representing a system of events. Defined only up to an
/// additive constant as far as the induced pmf is concerned.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential(Vec<f64>);

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("potential must have at least one entry".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "potential entry {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max(u) - min(u)`.
    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn is_constant(&self) -> bool {
        self.range() == 0.0
    }

    /// The collinear potential `k·u`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::InvalidInput(format!("scale factor {k} is not finite")));
        }
        Self::new(self.0.iter().map(|v| k * v).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Potential {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A probability mass function on m outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf(Vec<f64>);

impl Pmf {
    /// Validates `probs` as a pmf. A vector summing to 1 within `PMF_RENORM_TOL`
    /// is renormalized; anything further off is rejected.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("pmf must have at least one entry".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "pmf entry {i} is negative or not finite ({p})"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        let off = (sum - 1.0).abs();
        if off <= PMF_SUM_TOL {
            Ok(Self(probs))
        } else if off <= PMF_RENORM_TOL {
            Ok(Self(probs.into_iter().map(|p| p / sum).collect()))
        } else {
            Err(Error::InvalidInput(format!("pmf sums to {sum}, not 1")))
        }
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("pmf must have at least one entry".into()));
        }
        Ok(Self(vec![1.0 / m as f64; m]))
    }

    /// Wraps an already-normalized vector produced inside the crate.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every entry is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&p| p > 0.0)
    }

    pub fn l1_distance(&self, other: &Pmf) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum())
    }

    pub fn linf_distance(&self, other: &Pmf) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Pmf {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Outcome counts of a random sample of size N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    counts: Vec<u64>,
    total: u64,
}

impl Sample {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidInput("sample must cover at least one outcome".into()));
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::InvalidInput("sample size overflows u64".into()))?;
        if total == 0 {
            return Err(Error::InvalidInput("sample has no observations".into()));
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Empirical frequencies `r = counts / N`.
    pub fn frequencies(&self) -> Pmf {
        let n = self.total as f64;
        Pmf::from_normalized(self.counts.iter().map(|&c| c as f64 / n).collect())
    }
}

/// The inverse problem `y = Xp`: J constraint rows (each a potential) over m outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl ConstraintSystem {
    pub fn new(rows: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("constraint matrix has no rows".into()));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::InvalidInput("constraint matrix has no columns".into()));
        }
        for row in &rows {
            check_len(m, row.len())?;
        }
        check_len(rows.len(), y.len())?;
        if rows.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("constraint system has non-finite entries".into()));
        }
        let x = DMatrix::from_fn(rows.len(), m, |j, i| rows[j][i]);
        Ok(Self { x, y: DVector::from_vec(y) })
    }

    /// The J = 1 system `u·p = target`.
    pub fn from_potential(u: &Potential, target: f64) -> Result<Self> {
        Self::new(vec![u.values().to_vec()], vec![target])
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.y
    }

    /// J.
    pub fn n_constraints(&self) -> usize {
        self.x.nrows()
    }

    /// m.
    pub fn n_outcomes(&self) -> usize {
        self.x.ncols()
    }

    pub fn row(&self, j: usize) -> Vec<f64> {
        self.x.row(j).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_constraints()).map(|j| self.row(j)).collect()
    }

    /// Indices of rows that are constant across outcomes.
    pub fn constant_rows(&self) -> Vec<usize> {
        (0..self.n_constraints())
            .filter(|&j| {
                let row = self.x.row(j);
                row.iter().all(|&v| v == row[0])
            })
            .collect()
    }

    /// `‖Xp − y‖∞`.
    pub fn residual_inf(&self, p: &Pmf) -> Result<f64> {
        check_len(self.n_outcomes(), p.len())?;
        let xp = &self.x * DVector::from_column_slice(p.probs());
        Ok((xp - &self.y).amax())
    }
}

/// Multipliers, induced pmf and convergence diagnostics of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    /// Lagrange multipliers, one per constraint row.
    pub lambda: Vec<f64>,
    /// `dist(λᵀX)`.
    pub pmf: Pmf,
    /// `‖Xp − y‖∞` at `pmf`.
    pub residual_inf: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when a constant potential made every multiplier coherent and λ = 0 was picked.
    pub degenerate: bool,
}
