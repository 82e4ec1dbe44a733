//! Brute-force references for the solvers: an exhaustive simplex grid for MaxEnt and
//! a λ scan for ML. Slow by construction; they share no iteration logic with `solver`.

use std::cmp::Ordering;

use crate::error::{check_len, Error, Result};
use crate::functional::{dist, log_likelihood, shannon_entropy};
use crate::types::{Pmf, Potential};

const WINDOW_SLACK: f64 = 1e-12;

/// Regular grid on the closed 2- or 3-simplex with spacing `step = 1/divisions`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexGrid {
    m: usize,
    step: f64,
    divisions: u64,
}

impl SimplexGrid {
    pub const DEFAULT_STEP: f64 = 0.002;

    pub fn new(m: usize, step: f64) -> Result<Self> {
        if !(2..=3).contains(&m) {
            return Err(Error::InvalidInput(format!("simplex grid supports m = 2 or 3, got {m}")));
        }
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidInput(format!("grid step must lie in (0, 1], got {step}")));
        }
        let divisions = (1.0 / step).round();
        if (divisions * step - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("grid step {step} does not divide 1")));
        }
        Ok(Self { m, step, divisions: divisions as u64 })
    }

    pub fn with_default_step(m: usize) -> Result<Self> {
        Self::new(m, Self::DEFAULT_STEP)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Integer coordinates of every grid point (each summing to `divisions`), in
    /// ascending lexicographic order.
    fn lattice(&self) -> Box<dyn Iterator<Item = Vec<u64>>> {
        let n = self.divisions;
        match self.m {
            2 => Box::new((0..=n).map(move |i| vec![i, n - i])),
            _ => Box::new((0..=n).flat_map(move |i| (0..=n - i).map(move |j| vec![i, j, n - i - j]))),
        }
    }

    /// Every grid point as a pmf.
    pub fn points(&self) -> impl Iterator<Item = Pmf> + '_ {
        let n = self.divisions as f64;
        self.lattice()
            .map(move |k| Pmf::from_normalized(k.iter().map(|&c| c as f64 / n).collect()))
    }
}

/// Euclidean projection of `p` onto `{q : Σq = 1, u·q = c}` within the simplex plane.
/// `None` if `u` is constant or the projection leaves the simplex.
pub fn project_coherent(u: &Potential, c: f64, p: &Pmf) -> Option<Pmf> {
    let uv = u.values();
    if u.is_constant() || uv.len() != p.len() {
        return None;
    }
    let mean = uv.iter().sum::<f64>() / uv.len() as f64;
    let w: Vec<f64> = uv.iter().map(|v| v - mean).collect();
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let alpha = (uv.iter().zip(p.probs()).map(|(a, b)| a * b).sum::<f64>() - c) / ww;
    let q: Vec<f64> = p.probs().iter().zip(&w).map(|(pi, wi)| pi - alpha * wi).collect();
    q.iter().all(|&v| v >= 0.0).then(|| Pmf::from_normalized(q))
}

/// Exhaustive MaxEnt search over the grid points with `|u·p − c| ≤ range(u)·step`.
///
/// Each candidate is scored by the Shannon entropy of its projection onto the exact
/// coherent set, not of the grid point itself: entropy rises to first order off the
/// constraint but only falls to second order along it, so raw scores would drift by
/// O(√step). Candidates whose projection leaves the simplex rank last, then ties go to
/// the smaller `|u·p − c|` and finally to the first point in lexicographic order.
/// For constant `u` the grid point's own entropy is used.
pub fn grid_maxent(u: &Potential, c: f64, grid: &SimplexGrid) -> Result<Pmf> {
    check_len(grid.m, u.len())?;
    let window = u.range() * grid.step + WINDOW_SLACK * (1.0 + c.abs());
    let n = grid.divisions as f64;
    // (projection valid, entropy, −offset)
    let mut best: Option<((bool, f64, f64), Vec<u64>)> = None;
    for k in grid.lattice() {
        let mean = u.values().iter().zip(&k).map(|(v, &c)| v * c as f64).sum::<f64>() / n;
        let offset = (mean - c).abs();
        if offset > window {
            continue;
        }
        let p = Pmf::from_normalized(k.iter().map(|&c| c as f64 / n).collect());
        let score = if u.is_constant() {
            (true, shannon_entropy(&p), -offset)
        } else {
            match project_coherent(u, c, &p) {
                Some(q) => (true, shannon_entropy(&q), -offset),
                None => (false, f64::NEG_INFINITY, -offset),
            }
        };
        if best.as_ref().is_none_or(|(b, _)| score.partial_cmp(b) == Some(Ordering::Greater)) {
            best = Some((score, k));
        }
    }
    let (_, k) = best.ok_or(Error::NoFeasiblePoint)?;
    Ok(Pmf::from_normalized(k.iter().map(|&c| c as f64 / n).collect()))
}

/// The λ on the grid `lo, lo + step, …, ≤ hi` maximizing `log_likelihood(r, dist(λu))`.
/// The first maximizer wins, so a flat likelihood returns `lo`.
pub fn grid_ml(u: &Potential, r: &Pmf, lo: f64, hi: f64, step: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && lo < hi && step > 0.0) {
        return Err(Error::InvalidRange { lo, hi, step });
    }
    check_len(u.len(), r.len())?;
    let count = ((hi - lo) / step + 1e-9).floor() as u64;
    let mut best = (f64::NEG_INFINITY, lo);
    for k in 0..=count {
        let lambda = lo + k as f64 * step;
        let ll = match log_likelihood(r, &dist(&u.scaled(lambda)?)) {
            Ok(v) => v,
            Err(Error::SupportMismatch { .. }) => f64::NEG_INFINITY,
            Err(e) => return Err(e),
        };
        if ll > best.0 {
            best = (ll, lambda);
        }
    }
    Ok(best.1)
}
