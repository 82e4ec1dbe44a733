//! ML over collinear potentials, MaxEnt over coherent pmfs, and the general
//! inverse problem `y = Xp` through its convex dual.
//!
//! The scalar route solves `u·dist(λu) = c` with a bracketed, safeguarded Newton
//! iteration. The multi-constraint route minimizes
//! `ψ(λ) = ln Σ_i exp(−(λᵀX)_i) + λᵀy` by damped Newton. The two share no code
//! beyond `dist`, so agreement between them on J = 1 problems is a real check.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::functional::{dot, log_sum_exp_neg, mean_value, softmin};
use crate::types::{ConstraintSystem, DualSolution, Pmf, Potential};

/// Extra Newton steps taken after the residual first drops below tolerance,
/// kept only while they keep reducing it.
const POLISH_STEPS: usize = 3;
const ARMIJO_C1: f64 = 1e-4;
const HESSIAN_RIDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Max-norm tolerance on the constraint residual.
    pub tol_residual: f64,
    pub max_iter: usize,
    /// `‖λ‖∞` beyond which a stagnating residual is reported as infeasible.
    pub lambda_blowup: f64,
    /// Backtracking factor of the line search.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-10,
            max_iter: 200,
            lambda_blowup: 1e8,
            damping: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0 && self.tol_residual.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tol_residual must be positive, got {}",
                self.tol_residual
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        if !(self.lambda_blowup > 1.0 && self.lambda_blowup.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "lambda_blowup must exceed 1, got {}",
                self.lambda_blowup
            )));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidInput(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

/// `g(λ) = u·dist(λu)`, strictly decreasing in λ for non-constant `u`.
pub fn collinear_mean(u: &Potential, lambda: f64) -> f64 {
    collinear_moments(u.values(), lambda).0
}

/// Mean and variance of `u` under `dist(λu)`, plus the pmf itself.
fn collinear_moments(u: &[f64], lambda: f64) -> (f64, f64, Vec<f64>) {
    let scores: Vec<f64> = u.iter().map(|v| lambda * v).collect();
    let p = softmin(&scores);
    let mean = dot(u, &p);
    let var = u
        .iter()
        .zip(&p)
        .map(|(v, pi)| pi * (v - mean) * (v - mean))
        .sum();
    (mean, var, p)
}

/// ML task over the collinear family `dist(λu)`: finds λ₀ with
/// `u·dist(λ₀u) = u·r`, i.e. the member coherent with `r` on `u`.
pub fn solve_ml_scalar(u: &Potential, r: &Pmf, cfg: &SolverConfig) -> Result<DualSolution> {
    let target = mean_value(u, r)?;
    solve_collinear(u, target, cfg)
}

/// Solves `u·dist(λu) = target` for λ by bracketing followed by Newton steps,
/// falling back to bisection whenever a step leaves the bracket.
pub fn solve_collinear(u: &Potential, target: f64, cfg: &SolverConfig) -> Result<DualSolution> {
    cfg.validate()?;
    if !target.is_finite() {
        return Err(Error::InvalidInput(format!("target {target} is not finite")));
    }
    let uv = u.values();
    let m = uv.len();

    if u.is_constant() {
        // Every λ induces the uniform pmf, so every λ is coherent; λ = 0 is the representative.
        let value = uv[0];
        let pmf = Pmf::uniform(m)?;
        let residual = (dot(uv, pmf.probs()) - target).abs();
        if residual > cfg.tol_residual * value.abs().max(1.0) {
            return Err(Error::DegeneratePotential { value, target });
        }
        return Ok(DualSolution {
            lambda: vec![0.0],
            pmf,
            residual_inf: residual,
            iterations: 0,
            converged: true,
            degenerate: true,
        });
    }

    let (lo_u, hi_u) = (u.min(), u.max());
    if target <= lo_u || target >= hi_u {
        return Err(Error::InfeasibleTarget(format!(
            "target {target} is not inside the open range ({lo_u}, {hi_u}) of the potential"
        )));
    }

    // h(λ) = g(λ) − target is strictly decreasing.
    let h = |lambda: f64| {
        let (mean, var, p) = collinear_moments(uv, lambda);
        (mean - target, var, p)
    };

    let mut iterations = 0usize;
    let mut lambda = 0.0;
    let (mut hv, mut var, mut p) = h(lambda);

    let mut best = (hv.abs(), lambda, p.clone());
    let track = |best: &mut (f64, f64, Vec<f64>), hv: f64, lambda: f64, p: &Vec<f64>| {
        if hv.abs() < best.0 {
            *best = (hv.abs(), lambda, p.clone());
        }
    };

    let finish = |lambda: f64, p: Vec<f64>, res: f64, iterations: usize, converged: bool| DualSolution {
        lambda: vec![lambda],
        pmf: Pmf::from_normalized(p),
        residual_inf: res,
        iterations,
        converged,
        degenerate: false,
    };

    // Bracket the root: h(lo) > 0 > h(hi).
    let (mut lo, mut hi);
    if hv.abs() <= cfg.tol_residual {
        lo = f64::NEG_INFINITY;
        hi = f64::INFINITY;
    } else {
        let mut step = 1.0 / u.range();
        let sign = if hv > 0.0 { 1.0 } else { -1.0 };
        let mut inner = 0.0;
        loop {
            iterations += 1;
            let outer = inner + sign * step;
            if outer.abs() > cfg.lambda_blowup {
                return Err(Error::InfeasibleTarget(format!(
                    "|lambda| exceeded {} while bracketing target {target}",
                    cfg.lambda_blowup
                )));
            }
            let (ho, vo, po) = h(outer);
            track(&mut best, ho, outer, &po);
            if ho.abs() <= cfg.tol_residual || ho * hv < 0.0 {
                (lambda, hv, var, p) = (outer, ho, vo, po);
                if sign > 0.0 {
                    (lo, hi) = (inner, outer);
                } else {
                    (lo, hi) = (outer, inner);
                }
                break;
            }
            inner = outer;
            step *= 2.0;
            if iterations >= cfg.max_iter {
                return Err(max_iter(finish(best.1, best.2, best.0, iterations, false)));
            }
        }
    }

    let mut polish = 0;
    loop {
        if hv.abs() <= cfg.tol_residual {
            if polish == POLISH_STEPS || var <= 0.0 {
                break;
            }
            let cand = lambda + hv / var;
            if !(cand > lo && cand < hi) && lo.is_finite() && hi.is_finite() {
                break;
            }
            let (hc, vc, pc) = h(cand);
            if hc.abs() >= hv.abs() {
                break;
            }
            polish += 1;
            iterations += 1;
            (lambda, hv, var, p) = (cand, hc, vc, pc);
            continue;
        }
        if iterations >= cfg.max_iter {
            return Err(max_iter(finish(best.1, best.2, best.0, iterations, false)));
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            // Bracket collapsed at floating-point resolution above tolerance.
            return Err(max_iter(finish(best.1, best.2, best.0, iterations, false)));
        }
        iterations += 1;
        let newton = if var > 0.0 { lambda + hv / var } else { f64::NAN };
        let cand = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let (hc, vc, pc) = h(cand);
        if hc > 0.0 {
            lo = cand;
        } else {
            hi = cand;
        }
        (lambda, hv, var, p) = (cand, hc, vc, pc);
        track(&mut best, hv, lambda, &p);
    }

    Ok(finish(lambda, p, hv.abs(), iterations, true))
}

fn max_iter(best: DualSolution) -> Error {
    Error::MaxIterExceeded { best: Box::new(best) }
}

/// MaxEnt task over pmfs coherent with `r` on `u`: maximizes Shannon entropy subject
/// to `u·p = u·r`, solved as the J = 1 inverse problem.
pub fn solve_maxent_coherent(u: &Potential, r: &Pmf, cfg: &SolverConfig) -> Result<DualSolution> {
    let target = mean_value(u, r)?;
    solve_inverse(&ConstraintSystem::from_potential(u, target)?, cfg)
}

/// `u·(r − q)` for the solution pmf `q`; zero when `r − q` is orthogonal to `u`.
pub fn orthogonality_check(u: &Potential, r: &Pmf, sol: &DualSolution) -> Result<f64> {
    check_len(u.len(), r.len())?;
    check_len(u.len(), sol.pmf.len())?;
    Ok(u
        .values()
        .iter()
        .zip(r.probs())
        .zip(sol.pmf.probs())
        .map(|((ui, ri), qi)| ui * (ri - qi))
        .sum())
}

/// `ψ(λ) = ln Σ_i exp(−(λᵀX)_i) + λᵀy`.
pub fn dual_objective(sys: &ConstraintSystem, lambda: &[f64]) -> Result<f64> {
    check_len(sys.n_constraints(), lambda.len())?;
    let l = DVector::from_column_slice(lambda);
    let scores = sys.matrix().tr_mul(&l);
    Ok(log_sum_exp_neg(scores.as_slice()) + l.dot(sys.target()))
}

/// `∇ψ(λ) = y − X·dist(λᵀX)`.
pub fn dual_gradient(sys: &ConstraintSystem, lambda: &[f64]) -> Result<Vec<f64>> {
    check_len(sys.n_constraints(), lambda.len())?;
    let l = DVector::from_column_slice(lambda);
    let p = DVector::from_vec(softmin(sys.matrix().tr_mul(&l).as_slice()));
    Ok((sys.target() - sys.matrix() * p).as_slice().to_vec())
}

/// Dual state at one iterate, restricted to the active (non-constant) rows.
struct DualPoint {
    lambda: DVector<f64>,
    p: DVector<f64>,
    psi: f64,
    grad: DVector<f64>,
    residual: f64,
}

struct Dual<'a> {
    x: DMatrix<f64>,
    y: DVector<f64>,
    full: &'a ConstraintSystem,
}

impl Dual<'_> {
    fn eval(&self, lambda: DVector<f64>) -> DualPoint {
        let scores = self.x.tr_mul(&lambda);
        let psi = log_sum_exp_neg(scores.as_slice()) + lambda.dot(&self.y);
        let p = DVector::from_vec(softmin(scores.as_slice()));
        let grad = &self.y - &self.x * &p;
        let pmf = Pmf::from_normalized(p.as_slice().to_vec());
        let residual = self.full.residual_inf(&pmf).unwrap_or(f64::INFINITY);
        DualPoint { lambda, p, psi, grad, residual }
    }

    /// Newton direction from the covariance Hessian, or `None` if it cannot be factored.
    fn newton_direction(&self, pt: &DualPoint) -> Option<DVector<f64>> {
        let j = self.x.nrows();
        let mean = &self.x * &pt.p;
        let mut centered = self.x.clone();
        for (c, mut col) in centered.column_iter_mut().enumerate() {
            col -= &mean;
            col *= pt.p[c].sqrt();
        }
        let mut hess = &centered * centered.transpose();
        let trace = hess.trace();
        if trace.is_nan() || trace <= 0.0 || trace.is_infinite() {
            return None;
        }
        let ridge = HESSIAN_RIDGE * trace / j as f64;
        for k in 0..j {
            hess[(k, k)] += ridge;
        }
        let dir = hess.cholesky()?.solve(&(-&pt.grad));
        dir.iter().all(|v| v.is_finite()).then_some(dir)
    }
}

/// MaxEnt solution of `Xp = y`: minimizes the convex dual by damped Newton with a
/// backtracking line search, falling back to gradient descent where the covariance
/// Hessian is singular. The returned pmf is `dist(λᵀX)`.
pub fn solve_inverse(sys: &ConstraintSystem, cfg: &SolverConfig) -> Result<DualSolution> {
    cfg.validate()?;
    let j_total = sys.n_constraints();
    let m = sys.n_outcomes();
    let tol = cfg.tol_residual;

    // A constant row pins its target exactly; its multiplier is left at zero.
    let constant = sys.constant_rows();
    for &j in &constant {
        let value = sys.matrix()[(j, 0)];
        let yj = sys.target()[j];
        if (value - yj).abs() > tol {
            return Err(Error::InfeasibleTarget(format!(
                "row {j} is constant {value} but its target is {yj}"
            )));
        }
    }
    let active: Vec<usize> = (0..j_total).filter(|j| !constant.contains(j)).collect();

    // For a single constraint the hull test is exact and cheap.
    if active.len() == 1 && j_total == 1 {
        let row = sys.row(0);
        let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let y = sys.target()[0];
        if y <= lo || y >= hi {
            return Err(Error::InfeasibleTarget(format!(
                "target {y} is not inside the open range ({lo}, {hi}) of the constraint row"
            )));
        }
    }

    let expand = |lambda_active: &DVector<f64>| {
        let mut full = vec![0.0; j_total];
        for (k, &j) in active.iter().enumerate() {
            full[j] = lambda_active[k];
        }
        full
    };
    let solution = |pt: &DualPoint, iterations: usize, converged: bool| DualSolution {
        lambda: expand(&pt.lambda),
        pmf: Pmf::from_normalized(pt.p.as_slice().to_vec()),
        residual_inf: pt.residual,
        iterations,
        converged,
        degenerate: !constant.is_empty(),
    };

    if active.is_empty() {
        let p = DVector::from_element(m, 1.0 / m as f64);
        let residual = sys.residual_inf(&Pmf::from_normalized(p.as_slice().to_vec()))?;
        let pt = DualPoint {
            lambda: DVector::zeros(0),
            p,
            psi: 0.0,
            grad: DVector::zeros(0),
            residual,
        };
        return Ok(solution(&pt, 0, true));
    }

    let dual = Dual {
        x: DMatrix::from_fn(active.len(), m, |k, i| sys.matrix()[(active[k], i)]),
        y: DVector::from_iterator(active.len(), active.iter().map(|&j| sys.target()[j])),
        full: sys,
    };

    let mut pt = dual.eval(DVector::zeros(active.len()));
    let mut best_residual = pt.residual;
    let mut best = solution(&pt, 0, false);
    let mut iterations = 0usize;
    let mut polish = 0usize;

    loop {
        if pt.residual <= tol {
            if polish == POLISH_STEPS {
                break;
            }
            let Some(dir) = dual.newton_direction(&pt) else { break };
            let next = dual.eval(&pt.lambda + dir);
            if next.residual.partial_cmp(&pt.residual) != Some(std::cmp::Ordering::Less) {
                break;
            }
            polish += 1;
            iterations += 1;
            pt = next;
            continue;
        }
        if iterations >= cfg.max_iter {
            return Err(max_iter(best));
        }
        iterations += 1;

        let (dir, is_newton) = match dual.newton_direction(&pt) {
            Some(d) if d.dot(&pt.grad) < 0.0 => (d, true),
            _ => (-&pt.grad, false),
        };
        let slope = dir.dot(&pt.grad);
        let noise = 1e-13 * (1.0 + pt.psi.abs());

        let accepts = |cand: &DualPoint, t: f64| {
            cand.psi.is_finite()
                && (cand.psi <= pt.psi + ARMIJO_C1 * t * slope
                    || ((t * slope).abs() <= noise && cand.residual < pt.residual))
        };

        let mut t = 1.0;
        let mut next = None;
        while t > 1e-20 {
            let cand = dual.eval(&pt.lambda + &dir * t);
            if accepts(&cand, t) {
                next = Some(cand);
                break;
            }
            t *= cfg.damping;
        }
        // Gradient steps along an unbounded direction would otherwise crawl toward the blowup threshold.
        if !is_newton && t == 1.0 {
            while let Some(cur) = next.as_ref() {
                if t >= 2f64.powi(60) || cur.lambda.amax() > cfg.lambda_blowup {
                    break;
                }
                let cand = dual.eval(&pt.lambda + &dir * (2.0 * t));
                if !(accepts(&cand, 2.0 * t) && cand.psi < cur.psi) {
                    break;
                }
                t *= 2.0;
                next = Some(cand);
            }
        }
        let Some(next) = next else {
            // Line search stalled at floating-point resolution above tolerance.
            return Err(max_iter(best));
        };

        let stagnating = next.residual >= pt.residual * (1.0 - 1e-6);
        pt = next;
        if pt.residual < best_residual {
            best_residual = pt.residual;
            best = solution(&pt, iterations, false);
        }
        if pt.lambda.amax() > cfg.lambda_blowup && pt.residual > tol && stagnating {
            return Err(Error::InfeasibleTarget(format!(
                "|lambda| exceeded {} with residual stuck at {:.3e}; target is outside the convex hull of the columns",
                cfg.lambda_blowup, pt.residual
            )));
        }
    }

    Ok(solution(&pt, iterations, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::dist;

    const LN3: f64 = 1.098_612_288_668_109_7;

    fn pot(v: &[f64]) -> Potential {
        Potential::new(v.to_vec()).unwrap()
    }

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        for bad in [
            SolverConfig { tol_residual: 0.0, ..cfg() },
            SolverConfig { max_iter: 0, ..cfg() },
            SolverConfig { lambda_blowup: 1.0, ..cfg() },
            SolverConfig { damping: 1.0, ..cfg() },
            SolverConfig { damping: 0.0, ..cfg() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidInput(_))));
        }
    }

    #[test]
    fn ml_constant_potential_is_degenerate() {
        let sol = solve_ml_scalar(&pot(&[5.0; 3]), &pmf(&[0.2, 0.3, 0.5]), &cfg()).unwrap();
        assert_eq!(sol.lambda, vec![0.0]);
        assert!(sol.degenerate && sol.converged);
        for &p in sol.pmf.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-16);
        }
    }

    #[test]
    fn ml_constant_potential_with_unreachable_target() {
        assert!(matches!(
            solve_collinear(&pot(&[5.0; 3]), 6.0, &cfg()),
            Err(Error::DegeneratePotential { .. })
        ));
    }

    #[test]
    fn ml_uniform_sample_gives_zero() {
        let sol = solve_ml_scalar(&pot(&[0.0, 1.0]), &pmf(&[0.5, 0.5]), &cfg()).unwrap();
        assert_eq!(sol.lambda, vec![0.0]);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn ml_hand_solution() {
        let u = pot(&[0.0, 1.0]);
        let r = pmf(&[0.75, 0.25]);
        let sol = solve_ml_scalar(&u, &r, &cfg()).unwrap();
        assert!((sol.lambda[0] - LN3).abs() < 1e-12);
        assert!((sol.pmf.probs()[0] - 0.75).abs() < 1e-14);
        assert!(sol.residual_inf <= 1e-10);
        assert!(orthogonality_check(&u, &r, &sol).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn ml_rejects_extreme_targets() {
        let u = pot(&[0.0, 1.0]);
        for r in [[1.0, 0.0], [0.0, 1.0]] {
            assert!(matches!(
                solve_ml_scalar(&u, &pmf(&r), &cfg()),
                Err(Error::InfeasibleTarget(_))
            ));
        }
    }

    #[test]
    fn ml_max_iter_attaches_best_iterate() {
        let u = pot(&[0.0, 1.0, 2.0]);
        let r = pmf(&[0.7, 0.2, 0.1]);
        let tight = SolverConfig { max_iter: 2, ..cfg() };
        let Err(Error::MaxIterExceeded { best }) = solve_ml_scalar(&u, &r, &tight) else {
            panic!("expected MaxIterExceeded");
        };
        assert!(!best.converged);
        let orth = orthogonality_check(&u, &r, &best).unwrap();
        assert!((orth.abs() - best.residual_inf).abs() < 1e-15);
    }

    #[test]
    fn pmf_is_dist_of_lambda_u() {
        let u = pot(&[-1.0, 0.5, 2.0, 3.0]);
        let r = pmf(&[0.1, 0.2, 0.3, 0.4]);
        for sol in [
            solve_ml_scalar(&u, &r, &cfg()).unwrap(),
            solve_maxent_coherent(&u, &r, &cfg()).unwrap(),
        ] {
            let again = dist(&u.scaled(sol.lambda[0]).unwrap());
            assert!(again.linf_distance(&sol.pmf).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn maxent_examples() {
        let third = 1.0 / 3.0;
        let sol = solve_maxent_coherent(&pot(&[0.0, 1.0, 2.0]), &pmf(&[third; 3]), &cfg()).unwrap();
        assert!(sol.lambda[0].abs() < 1e-12);
        assert!(sol.pmf.linf_distance(&Pmf::uniform(3).unwrap()).unwrap() < 1e-12);

        let sol = solve_maxent_coherent(&pot(&[0.0, 1.0]), &pmf(&[0.75, 0.25]), &cfg()).unwrap();
        assert!((sol.pmf.probs()[0] - 0.75).abs() < 1e-12);
        assert!((sol.lambda[0] - LN3).abs() < 1e-10);
    }

    #[test]
    fn inverse_identity_recovers_target() {
        let eye = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let sys = ConstraintSystem::new(eye, vec![0.2, 0.3, 0.5]).unwrap();
        let sol = solve_inverse(&sys, &cfg()).unwrap();
        assert!(sol.converged);
        assert!(sol.residual_inf <= 1e-12);
        for (p, y) in sol.pmf.probs().iter().zip([0.2, 0.3, 0.5]) {
            assert!((p - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn inverse_outside_range() {
        let sys = ConstraintSystem::new(vec![vec![0.0, 1.0]], vec![1.2]).unwrap();
        assert!(matches!(solve_inverse(&sys, &cfg()), Err(Error::InfeasibleTarget(_))));
    }

    #[test]
    fn inverse_constant_row_is_pinned() {
        let sys = ConstraintSystem::new(
            vec![vec![0.0, 1.0, 2.0], vec![4.0, 4.0, 4.0]],
            vec![0.8, 4.0],
        )
        .unwrap();
        let sol = solve_inverse(&sys, &cfg()).unwrap();
        assert!(sol.degenerate && sol.converged);
        assert_eq!(sol.lambda[1], 0.0);
        assert!(sol.residual_inf <= 1e-10);

        let bad = ConstraintSystem::new(
            vec![vec![0.0, 1.0, 2.0], vec![4.0, 4.0, 4.0]],
            vec![0.8, 3.0],
        )
        .unwrap();
        assert!(matches!(solve_inverse(&bad, &cfg()), Err(Error::InfeasibleTarget(_))));
    }

    #[test]
    fn inverse_off_hull_blows_up() {
        // The hull of columns (0,0), (1,0), (0,1) does not contain (1, 1).
        let sys = ConstraintSystem::new(
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        assert!(matches!(solve_inverse(&sys, &cfg()), Err(Error::InfeasibleTarget(_))));
    }

    #[test]
    fn dual_gradient_matches_definition_at_zero() {
        let sys = ConstraintSystem::new(vec![vec![0.0, 1.0, 2.0]], vec![0.5]).unwrap();
        let g = dual_gradient(&sys, &[0.0]).unwrap();
        assert!((g[0] - (0.5 - 1.0)).abs() < 1e-15);
        assert!((dual_objective(&sys, &[0.0]).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(dual_gradient(&sys, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn collinear_mean_decreases() {
        let u = pot(&[0.0, 1.0, 2.0]);
        let mut prev = f64::INFINITY;
        for k in -20..=20 {
            let g = collinear_mean(&u, k as f64 * 0.5);
            assert!(g < prev);
            prev = g;
        }
    }
}
