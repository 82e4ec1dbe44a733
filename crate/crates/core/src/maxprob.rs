//! Finite-N MaxProb demonstration: among multinomial type classes of size N whose
//! empirical mean of `u` lies in a window around `c`, find the one with the largest
//! multiplicity. As N grows its normalized counts approach the MaxEnt pmf.
//!
//! The window operationalizes "coherent" on the lattice of types, where exact
//! coherence is generically unattainable.

use std::cmp::Ordering;

use statrs::function::factorial::ln_factorial;

use crate::error::{check_len, Error, Result};
use crate::types::{Pmf, Potential};

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Relative widening of window edges to absorb rounding in the type mean.
const WINDOW_SLACK: f64 = 1e-12;

/// A count vector of size N and the log of its multinomial coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    pub counts: Vec<u64>,
    /// `ln N! − Σ ln counts_i!`
    pub log_multiplicity: f64,
}

impl TypeClass {
    pub fn new(counts: Vec<u64>) -> Self {
        let n: u64 = counts.iter().sum();
        // Summing in sorted order makes permuted count vectors bitwise-equal in multiplicity.
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        let log_multiplicity = ln_factorial(n) - sorted.iter().map(|&c| ln_factorial(c)).sum::<f64>();
        Self { counts, log_multiplicity }
    }

    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `counts / N`.
    pub fn pmf(&self) -> Pmf {
        let n = self.size() as f64;
        Pmf::from_normalized(self.counts.iter().map(|&c| c as f64 / n).collect())
    }

    /// `u·(counts / N)`.
    pub fn mean(&self, u: &[f64]) -> f64 {
        let n = self.size() as f64;
        u.iter().zip(&self.counts).map(|(v, &c)| v * c as f64).sum::<f64>() / n
    }

    /// Larger multiplicity first, then the lexicographically smaller counts.
    fn rank(&self, other: &Self) -> Ordering {
        other
            .log_multiplicity
            .total_cmp(&self.log_multiplicity)
            .then_with(|| self.counts.cmp(&other.counts))
    }
}

/// `binomial(n + m − 1, m − 1)`, saturating at `u128::MAX`.
pub fn type_count(n: u64, m: usize) -> u128 {
    let k = (m as u128).saturating_sub(1);
    let top = n as u128 + k;
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (top − k + i) / i stays integral at every step.
        match acc.checked_mul(top - k + i) {
            Some(v) => acc = v / i,
            None => return u128::MAX,
        }
    }
    acc
}

/// Compositions of N into m nonnegative parts in descending lexicographic order,
/// starting at `[N, 0, …, 0]` and ending at `[0, …, 0, N]`.
#[derive(Debug, Clone)]
pub struct TypeIter {
    next: Option<Vec<u64>>,
}

impl Iterator for TypeIter {
    type Item = TypeClass;

    fn next(&mut self) -> Option<TypeClass> {
        let current = self.next.take()?;
        let mut c = current.clone();
        let m = c.len();
        let rest = c[m - 1];
        c[m - 1] = 0;
        if let Some(k) = (0..m - 1).rev().find(|&k| c[k] > 0) {
            c[k] -= 1;
            c[k + 1] = rest + 1;
            self.next = Some(c);
        }
        Some(TypeClass::new(current))
    }
}

/// Every type class of size `n` over `m` outcomes, with the default cap.
pub fn enumerate_types(n: u64, m: usize) -> Result<TypeIter> {
    enumerate_types_capped(n, m, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_types_capped(n: u64, m: usize, cap: u128) -> Result<TypeIter> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidInput(format!(
            "type enumeration needs N >= 1 and m >= 1, got N = {n}, m = {m}"
        )));
    }
    let count = type_count(n, m);
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let mut first = vec![0; m];
    first[0] = n;
    Ok(TypeIter { next: Some(first) })
}

/// `(max u − min u) / (2N)`: half the lattice resolution of `u·(counts/N)`.
pub fn default_window(u: &Potential, n: u64) -> f64 {
    u.range() / (2.0 * n as f64)
}

/// Running argmax over coherent types. `merge` is associative and commutative, so
/// the stream can be reduced in independent chunks with identical results.
#[derive(Debug, Clone, Default)]
pub struct CoherentArgmax {
    best: Option<TypeClass>,
}

impl CoherentArgmax {
    pub fn offer(&mut self, t: TypeClass) {
        match &self.best {
            Some(b) if b.rank(&t) != Ordering::Greater => {}
            _ => self.best = Some(t),
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if let Some(t) = other.best {
            self.offer(t);
        }
        self
    }

    pub fn into_best(self) -> Option<TypeClass> {
        self.best
    }
}

/// Whether the mean of `u` under type `t` lies within `delta` of `c`.
pub fn in_window(t: &TypeClass, u: &Potential, c: f64, delta: f64) -> bool {
    (t.mean(u.values()) - c).abs() <= delta + WINDOW_SLACK * (1.0 + c.abs())
}

/// The most probable type of size `n` with `|u·(counts/N) − c| ≤ delta`; `delta`
/// defaults to [`default_window`]. Ties go to the lexicographically smallest counts.
pub fn most_probable_coherent_type(
    n: u64,
    u: &Potential,
    c: f64,
    delta: Option<f64>,
) -> Result<TypeClass> {
    most_probable_coherent_type_capped(n, u, c, delta, DEFAULT_ENUMERATION_CAP)
}

pub fn most_probable_coherent_type_capped(
    n: u64,
    u: &Potential,
    c: f64,
    delta: Option<f64>,
    cap: u128,
) -> Result<TypeClass> {
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("coherence target {c} is not finite")));
    }
    let delta = delta.unwrap_or_else(|| default_window(u, n));
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidInput(format!("window {delta} must be finite and >= 0")));
    }
    let mut acc = CoherentArgmax::default();
    for t in enumerate_types_capped(n, u.len(), cap)? {
        check_len(u.len(), t.counts.len())?;
        if in_window(&t, u, c, delta) {
            acc.offer(t);
        }
    }
    acc.into_best().ok_or(Error::NoCoherentType { n })
}
