#![allow(dead_code)]

use maxent_core::{Pmf, Potential};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::Exp1;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Non-constant potential with entries uniform in `[-scale, scale]`.
pub fn random_potential(rng: &mut StdRng, m: usize, scale: f64) -> Potential {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(-scale..scale)).collect();
        let u = Potential::new(v).unwrap();
        if !u.is_constant() {
            return u;
        }
    }
}

/// Dirichlet(1, …, 1) sample; every entry is strictly positive.
pub fn random_interior_pmf(rng: &mut StdRng, m: usize) -> Pmf {
    let w: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1) + 1e-300).collect();
    let s: f64 = w.iter().sum();
    Pmf::new(w.into_iter().map(|x| x / s).collect()).unwrap()
}

/// `ln Σ exp(−s_i)` by direct summation after a max shift, written independently of the crate.
pub fn naive_log_partition(s: &[f64]) -> f64 {
    let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
    -lo + s.iter().map(|v| (-(v - lo)).exp()).sum::<f64>().ln()
}
