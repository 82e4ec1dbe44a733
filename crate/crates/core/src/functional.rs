//! Functionals on potentials and pmfs: `dist`, mean value, coherence and the entropies.

use crate::error::{check_len, Error, Result};
use crate::types::{Pmf, Potential};

/// `p_i = e^{-u_i} / Σ_j e^{-u_j}`, evaluated after subtracting `min(u)` so that
/// large magnitudes neither overflow nor underflow to an all-zero vector.
pub fn dist(u: &Potential) -> Pmf {
    Pmf::from_normalized(softmin(u.values()))
}

/// [`dist`] for a raw slice.
pub fn dist_values(u: &[f64]) -> Result<Pmf> {
    Potential::new(u.to_vec()).map(|u| dist(&u))
}

pub(crate) fn softmin(u: &[f64]) -> Vec<f64> {
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = u.iter().map(|&v| (lo - v).exp()).collect();
    let z: f64 = w.iter().sum();
    for v in &mut w {
        *v /= z;
    }
    w
}

/// `ln Σ_i e^{-u_i}`.
pub fn log_partition(u: &Potential) -> f64 {
    log_sum_exp_neg(u.values())
}

pub(crate) fn log_sum_exp_neg(u: &[f64]) -> f64 {
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    -lo + u.iter().map(|&v| (lo - v).exp()).sum::<f64>().ln()
}

/// `u + C` elementwise; induces the same pmf as `u`.
pub fn shift(u: &Potential, c: f64) -> Result<Potential> {
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("shift constant {c} is not finite")));
    }
    Potential::new(u.values().iter().map(|v| v + c).collect())
}

/// `u·p`, the mean of `u` weighted by `p`.
pub fn mean_value(u: &Potential, p: &Pmf) -> Result<f64> {
    check_len(u.len(), p.len())?;
    Ok(dot(u.values(), p.probs()))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `coher_u(p, q) = u·p − u·q`. Zero means `p` and `q` are coherent on `u`.
pub fn coherence(u: &Potential, p: &Pmf, q: &Pmf) -> Result<f64> {
    check_len(u.len(), q.len())?;
    Ok(mean_value(u, p)? - mean_value(u, q)?)
}

/// `ent(u) = u·dist(u)`.
///
/// Unlike `dist`, this is gauge dependent: `ent(u + C) = ent(u) + C`. It differs
/// from the Shannon entropy of `dist(u)` by the log-partition term.
pub fn entropy_of_potential(u: &Potential) -> f64 {
    dot(u.values(), dist(u).probs())
}

/// `−Σ p_i ln p_i` in nats, with `0·ln 0 = 0`.
pub fn shannon_entropy(p: &Pmf) -> f64 {
    -p.probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
}

/// Per-observation multinomial log-likelihood `Σ_{r_i > 0} r_i ln p_i`.
pub fn log_likelihood(r: &Pmf, p: &Pmf) -> Result<f64> {
    check_len(r.len(), p.len())?;
    let mut acc = 0.0;
    for (i, (&ri, &pi)) in r.probs().iter().zip(p.probs()).enumerate() {
        if ri > 0.0 {
            if pi <= 0.0 {
                return Err(Error::SupportMismatch { index: i });
            }
            acc += ri * pi.ln();
        }
    }
    Ok(acc)
}

/// Converts nats to bits.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}
