//! Multistart Nelder–Mead maximization of the Dicke-state fidelity over the
//! eight sequence parameters.
//!
//! Start points are drawn sequentially from one SplitMix64 stream seeded by
//! [`OptimizerConfig::seed`]; the starts then run in parallel and are merged
//! in start order, so results are bitwise reproducible regardless of thread
//! count.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulseseq::{total_duration, PulseSequence, SequenceEvaluator, N_PARAMS};
use crate::symsector::ising_period;

/// Initial simplex edge for random starts.
const START_STEP: f64 = 0.25;
/// Initial simplex edge when refining a given sequence.
const POLISH_STEP: f64 = 0.02;
/// Tolerance for accepting a reparametrization as fidelity-preserving.
const GAUGE_TOL: f64 = 1e-12;
/// A converged simplex is rebuilt around its best vertex at most this many
/// times; it stops earlier once a rebuild no longer improves.
const MAX_RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_evals_per_start: usize,
    /// Stop once the simplex's spread in `1 - F` falls below this.
    pub convergence_tol: f64,
    /// Closed sampling intervals for the start points, ordered as
    /// [`PulseSequence::to_params`].
    pub bounds: [(f64, f64); N_PARAMS],
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 42,
            max_evals_per_start: 20_000,
            convergence_tol: 1e-12,
            bounds: [
                (0.0, PI),
                (0.0, PI),
                (-PI, PI),
                (-PI, PI),
                (-PI, PI),
                (0.0, PI),
                (0.0, PI),
                (0.0, PI),
            ],
        }
    }
}

impl OptimizerConfig {
    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidConfig("starts must be at least 1"));
        }
        if self.max_evals_per_start == 0 {
            return Err(Error::InvalidConfig("max_evals_per_start must be at least 1"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be positive"));
        }
        for &(lo, hi) in &self.bounds {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidConfig("bounds must be finite with min <= max"));
            }
        }
        if self.bounds[0].0 < 0.0 || self.bounds[1].0 < 0.0 {
            return Err(Error::InvalidConfig("xi bounds must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    #[serde(flatten)]
    pub best: PulseSequence,
    pub fidelity: f64,
    pub duration: f64,
    /// False when no start reached `convergence_tol` within its budget;
    /// `best` is then the best point seen.
    pub converged: bool,
    /// Best `1 - F` reached by each start, in start order.
    pub infidelity_history: Vec<f64>,
    pub evaluations_used: u64,
}

struct Outcome {
    x: [f64; N_PARAMS],
    f: f64,
    evals: usize,
    converged: bool,
}

/// Adaptive Nelder–Mead (dimension-dependent coefficients) minimizing `f`.
fn nelder_mead<F>(f: F, x0: [f64; N_PARAMS], step: f64, max_evals: usize, tol: f64) -> Outcome
where
    F: Fn(&[f64; N_PARAMS]) -> f64,
{
    const D: usize = N_PARAMS;
    let dim = D as f64;
    let (rho, chi, gamma, sigma) = (1.0, 1.0 + 2.0 / dim, 0.75 - 0.5 / dim, 1.0 - 1.0 / dim);

    let mut evals = 0usize;
    let eval = |x: &[f64; D], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut best_x = x0;
    let mut best_f = eval(&x0, &mut evals);
    let mut converged = false;

    for _ in 0..=MAX_RESTARTS {
        let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
        simplex.push((best_x, best_f));
        for i in 0..D {
            let mut x = best_x;
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }

        let mut round_converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[D].1 - simplex[0].1 < tol {
                round_converged = true;
                break;
            }
            if evals >= max_evals {
                break;
            }

            let mut centroid = [0.0; D];
            for (x, _) in &simplex[..D] {
                for k in 0..D {
                    centroid[k] += x[k] / dim;
                }
            }
            let toward = |t: f64, worst: &[f64; D]| {
                let mut p = [0.0; D];
                for k in 0..D {
                    p[k] = centroid[k] + t * (worst[k] - centroid[k]);
                }
                p
            };
            let worst = simplex[D].0;
            let f_worst = simplex[D].1;
            let f_second = simplex[D - 1].1;
            let f_best = simplex[0].1;

            let xr = toward(-rho, &worst);
            let fr = eval(&xr, &mut evals);
            if fr < f_best {
                let xe = toward(-rho * chi, &worst);
                let fe = eval(&xe, &mut evals);
                simplex[D] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < f_second {
                simplex[D] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < f_worst {
                let xc = toward(-rho * gamma, &worst);
                (xc, eval(&xc, &mut evals))
            } else {
                let xc = toward(gamma, &worst);
                (xc, eval(&xc, &mut evals))
            };
            if fc < fr.min(f_worst) {
                simplex[D] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0;
            for (x, fx) in simplex.iter_mut().skip(1) {
                for k in 0..D {
                    x[k] = anchor[k] + sigma * (x[k] - anchor[k]);
                }
                *fx = eval(x, &mut evals);
            }
        }

        let (x, fx) = simplex
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .copied()
            .expect("simplex is nonempty");
        let improvement = best_f - fx;
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
        converged = round_converged;
        if !round_converged || improvement <= tol || evals >= max_evals {
            break;
        }
    }

    Outcome { x: best_x, f: best_f, evals, converged }
}

/// `1 - F` with durations reflected to `|xi|`, so the simplex may roam freely.
fn objective(eval: &SequenceEvaluator, p: &[f64; N_PARAMS]) -> f64 {
    let mut q = *p;
    q[0] = q[0].abs();
    q[1] = q[1].abs();
    1.0 - eval.fidelity_params(&q)
}

/// Reporting form of a raw parameter vector: reflected and period-reduced
/// durations, azimuths shifted so `phi1 = pi/2`, axes wrapped into `[0, pi)`.
/// Each step is kept only if it leaves the fidelity unchanged.
fn canonicalize(eval: &SequenceEvaluator, p: &[f64; N_PARAMS]) -> Result<PulseSequence> {
    let (n, target) = (eval.n_qubits(), eval.target());
    let mut q = *p;
    q[0] = q[0].abs();
    q[1] = q[1].abs();
    let reference = eval.fidelity_params(&q);

    let period = ising_period(n)?;
    let mut reduced = q;
    reduced[0] = q[0].rem_euclid(period);
    reduced[1] = q[1].rem_euclid(period);
    if (eval.fidelity_params(&reduced) - reference).abs() <= GAUGE_TOL {
        q = reduced;
    }

    let shift = FRAC_PI_2 - q[5];
    let mut gauged = q;
    for phi in &mut gauged[5..] {
        *phi += shift;
    }
    if (eval.fidelity_params(&gauged) - reference).abs() <= GAUGE_TOL {
        q = gauged;
    }

    PulseSequence::from_params(n, target, &q)
}

fn check_problem(n_qubits: usize, target: usize) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n_qubits });
    }
    if n_qubits > crate::fullspace::MAX_QUBITS {
        return Err(Error::DimensionCap { cap: crate::fullspace::MAX_QUBITS, got: n_qubits });
    }
    if target > n_qubits {
        return Err(Error::TargetOutOfRange { target, n_qubits });
    }
    Ok(())
}

/// Draws the start points for `config` in order.
pub fn start_points(config: &OptimizerConfig) -> Vec<[f64; N_PARAMS]> {
    let mut rng = SplitMix64::seed_from_u64(config.seed);
    (0..config.starts)
        .map(|_| {
            let mut p = [0.0; N_PARAMS];
            for (v, &(lo, hi)) in p.iter_mut().zip(&config.bounds) {
                *v = if lo == hi { lo } else { rng.random_range(lo..=hi) };
            }
            p
        })
        .collect()
}

pub fn optimize(n_qubits: usize, target: usize, config: &OptimizerConfig) -> Result<OptimizationResult> {
    check_problem(n_qubits, target)?;
    config.validate()?;
    let eval = SequenceEvaluator::new(n_qubits, target)?;

    let outcomes: Vec<Outcome> = start_points(config)
        .into_par_iter()
        .map(|x0| {
            nelder_mead(
                |p| objective(&eval, p),
                x0,
                START_STEP,
                config.max_evals_per_start,
                config.convergence_tol,
            )
        })
        .collect();

    // Strictly better wins, so ties keep the lower start index.
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.f < outcomes[best].f {
            best = i;
        }
    }

    let seq = canonicalize(&eval, &outcomes[best].x)?;
    Ok(OptimizationResult {
        fidelity: eval.fidelity(&seq),
        duration: total_duration(&seq),
        converged: outcomes.iter().any(|o| o.converged),
        infidelity_history: outcomes.iter().map(|o| o.f).collect(),
        evaluations_used: outcomes.iter().map(|o| o.evals as u64).sum(),
        best: seq,
    })
}

/// Local refinement from `seed`. Never returns a lower fidelity than the
/// seed's: the refined point replaces it only if it is better by more than
/// `convergence_tol`.
pub fn polish(seed: &PulseSequence, config: &OptimizerConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let eval = SequenceEvaluator::new(seed.n_qubits(), seed.target())?;
    let x0 = seed.to_params();
    let o = nelder_mead(
        |p| objective(&eval, p),
        x0,
        POLISH_STEP,
        config.max_evals_per_start,
        config.convergence_tol,
    );

    let seed_infidelity = 1.0 - eval.fidelity(seed);
    let best = if o.f < seed_infidelity - config.convergence_tol {
        let mut q = o.x;
        q[0] = q[0].abs();
        q[1] = q[1].abs();
        PulseSequence::from_params(seed.n_qubits(), seed.target(), &q)?
    } else {
        seed.clone()
    };
    Ok(OptimizationResult {
        fidelity: eval.fidelity(&best),
        duration: total_duration(&best),
        converged: o.converged,
        infidelity_history: vec![o.f],
        evaluations_used: o.evals as u64,
        best,
    })
}
