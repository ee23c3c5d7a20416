//! Distribution design: differential-evolution search for the code
//! distribution maximizing the SIC threshold at a fixed target rate, plus
//! the named preset distributions.
//!
//! The search runs classic DE/rand/1/bin over raw non-negative weight
//! vectors. Every candidate is mapped onto the feasible set (`Σ Λ_h = 1` and
//! `Σ Λ_h n_h = k/R`) by an exponential tilt before it is scored, so the two
//! equality constraints hold exactly for every evaluated distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bound::solve_bound;
use crate::codes::ComponentCode;
use crate::density::{find_threshold, DEFAULT_MAX_ITERS, DEFAULT_PRECISION, DEFAULT_Q_TARGET};
use crate::exit::CodeDistribution;
use crate::{Error, Result};

/// Coarser bisection precision used while scoring candidates; the champion
/// is re-scored at [`DEFAULT_PRECISION`].
pub const SEARCH_PRECISION: f64 = 1e-3;

/// Coefficients below this are zeroed and the vector re-projected, keeping
/// reported distributions sparse.
pub const SUPPORT_PRUNE_EPS: f64 = 1e-6;

/// Code family searched over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizeFamily {
    /// `(n, 1)` repetition codes; requires `k = 1`.
    Repetition,
    /// `(n, k)` analytic MDS codes; requires every length `> k`.
    MdsAnalytic,
}

/// Search configuration for [`optimize_distribution`].
#[derive(Clone, Debug)]
pub struct OptimizationProblem {
    pub k: usize,
    pub family: OptimizeFamily,
    pub candidate_lengths: Vec<usize>,
    pub target_rate: f64,
    pub population_size: usize,
    pub generations: usize,
    /// DE mutation weight `F`.
    pub mutation_weight: f64,
    /// DE crossover rate `CR`.
    pub crossover_rate: f64,
    pub seed: u64,
}

impl OptimizationProblem {
    /// Problem with the default DE hyperparameters: population `10·D`,
    /// `F = 0.8`, `CR = 0.9`, 200 generations.
    pub fn new(
        k: usize,
        family: OptimizeFamily,
        candidate_lengths: Vec<usize>,
        target_rate: f64,
        seed: u64,
    ) -> Self {
        let dim = candidate_lengths.len();
        Self {
            k,
            family,
            candidate_lengths,
            target_rate,
            population_size: 10 * dim.max(1),
            generations: 200,
            mutation_weight: 0.8,
            crossover_rate: 0.9,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.candidate_lengths.len() < 2 {
            return Err(Error::Infeasible(
                "need at least 2 candidate lengths".into(),
            ));
        }
        let mut seen = self.candidate_lengths.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.candidate_lengths.len() {
            return Err(Error::Infeasible("candidate lengths must be distinct".into()));
        }
        let min_len = match self.family {
            OptimizeFamily::Repetition => {
                if self.k != 1 {
                    return Err(Error::Infeasible(
                        "repetition-code search requires k = 1".into(),
                    ));
                }
                2
            }
            OptimizeFamily::MdsAnalytic => self.k + 1,
        };
        if let Some(&n) = self.candidate_lengths.iter().find(|&&n| n < min_len) {
            return Err(Error::Infeasible(format!(
                "candidate length {n} below the family minimum {min_len}"
            )));
        }
        let lo = self.k as f64 / *seen.last().unwrap() as f64;
        let hi = self.k as f64 / seen[0] as f64;
        if !(self.target_rate >= lo - 1e-12 && self.target_rate <= hi + 1e-12) {
            return Err(Error::Infeasible(format!(
                "target rate {} outside the achievable range [{lo:.6}, {hi:.6}]",
                self.target_rate
            )));
        }
        if self.population_size < 4 || self.generations == 0 {
            return Err(Error::InvalidArgument(
                "population must be >= 4 and generations >= 1".into(),
            ));
        }
        if !(self.mutation_weight > 0.0 && self.crossover_rate > 0.0 && self.crossover_rate <= 1.0)
        {
            return Err(Error::InvalidArgument("bad DE hyperparameters".into()));
        }
        Ok(())
    }

    fn build_code(&self, n: usize) -> Result<ComponentCode> {
        match self.family {
            OptimizeFamily::Repetition => ComponentCode::repetition(n),
            OptimizeFamily::MdsAnalytic => ComponentCode::mds(n, self.k),
        }
    }

    /// Builds the distribution carried by a feasible probability vector.
    pub fn distribution_from_lambda(&self, lambda: &[f64]) -> Result<CodeDistribution> {
        let mut entries = Vec::new();
        for (&n, &l) in self.candidate_lengths.iter().zip(lambda) {
            if l > 0.0 {
                entries.push((self.build_code(n)?, l));
            }
        }
        CodeDistribution::new(entries)
    }
}

/// Search outcome: the best feasible distribution found, its threshold at
/// full precision, and the best coarse score per generation.
#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub distribution: CodeDistribution,
    pub g_star: f64,
    pub history: Vec<f64>,
}

/// Maps raw non-negative weights onto the feasible set: `Λ_h ≥ 0`,
/// `Σ Λ_h = 1` and `Σ Λ_h n_h = k/target_rate`, all within `1e-9`.
///
/// The projection normalizes the weights and applies a one-dimensional
/// exponential tilt `Λ_h ∝ w_h·exp(θ·n_h)` with `θ` solved by bisection on
/// the mean-length constraint; the support of positive weights is preserved.
pub fn project_to_constraints(
    weights: &[f64],
    lengths: &[usize],
    k: usize,
    target_rate: f64,
) -> Result<Vec<f64>> {
    if weights.len() != lengths.len() || weights.is_empty() {
        return Err(Error::InvalidArgument(
            "weights and lengths must have equal nonzero length".into(),
        ));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidArgument(
            "weights must be finite and non-negative".into(),
        ));
    }
    if !(target_rate > 0.0) || k == 0 {
        return Err(Error::InvalidArgument("need k >= 1 and target_rate > 0".into()));
    }
    let n_target = k as f64 / target_rate;
    let support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    if support.is_empty() {
        return Err(Error::Infeasible("all weights are zero".into()));
    }
    let min_len = support.iter().map(|&i| lengths[i]).min().unwrap() as f64;
    let max_len = support.iter().map(|&i| lengths[i]).max().unwrap() as f64;
    if n_target < min_len - 1e-9 || n_target > max_len + 1e-9 {
        return Err(Error::Infeasible(format!(
            "mean length {n_target:.6} outside the supported range [{min_len}, {max_len}]"
        )));
    }
    let mut out = vec![0.0; weights.len()];
    // endpoint targets collapse onto the extreme supported length
    if (n_target - min_len).abs() <= 1e-9 || (n_target - max_len).abs() <= 1e-9 {
        let pick = if (n_target - min_len).abs() <= 1e-9 {
            min_len
        } else {
            max_len
        } as usize;
        let total: f64 = support
            .iter()
            .filter(|&&i| lengths[i] == pick)
            .map(|&i| weights[i])
            .sum();
        for &i in &support {
            if lengths[i] == pick {
                out[i] = weights[i] / total;
            }
        }
        return Ok(out);
    }

    // tilted mean length; exponents are shifted by their maximum before
    // exponentiation so any theta is safe
    let tilted = |theta: f64, out: Option<&mut [f64]>| -> f64 {
        let mut exps: Vec<f64> = support
            .iter()
            .map(|&i| weights[i].ln() + theta * lengths[i] as f64)
            .collect();
        let shift = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for e in &mut exps {
            *e = (*e - shift).exp();
        }
        let total: f64 = exps.iter().sum();
        let mean = support
            .iter()
            .zip(&exps)
            .map(|(&i, &e)| e * lengths[i] as f64)
            .sum::<f64>()
            / total;
        if let Some(out) = out {
            for (&i, &e) in support.iter().zip(&exps) {
                out[i] = e / total;
            }
        }
        mean
    };

    // bracket theta by doubling, then bisect the monotone mean
    let mut lo = -1.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        if tilted(lo, None) <= n_target {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..60 {
        if tilted(hi, None) >= n_target {
            break;
        }
        hi *= 2.0;
    }
    let mut theta = 0.0;
    for _ in 0..300 {
        theta = 0.5 * (lo + hi);
        let mean = tilted(theta, None);
        if (mean - n_target).abs() < 1e-13 {
            break;
        }
        if mean < n_target {
            lo = theta;
        } else {
            hi = theta;
        }
        if hi - lo < f64::EPSILON * theta.abs().max(1.0) {
            break;
        }
    }
    let mean = tilted(theta, Some(&mut out));
    if (mean - n_target).abs() > 1e-9 {
        return Err(Error::Infeasible(format!(
            "tilt failed to meet the mean-length constraint: {mean} vs {n_target}"
        )));
    }
    Ok(out)
}

// Projection followed by support pruning: coefficients below the epsilon are
// zeroed and the vector re-projected on the reduced support. Falls back to
// the unpruned projection if pruning empties the feasible range.
fn project_pruned(
    weights: &[f64],
    lengths: &[usize],
    k: usize,
    target_rate: f64,
) -> Result<Vec<f64>> {
    let mut lambda = project_to_constraints(weights, lengths, k, target_rate)?;
    for _ in 0..lengths.len() {
        let needs_prune = lambda.iter().any(|&l| l > 0.0 && l < SUPPORT_PRUNE_EPS);
        if !needs_prune {
            break;
        }
        let pruned: Vec<f64> = lambda
            .iter()
            .map(|&l| if l < SUPPORT_PRUNE_EPS { 0.0 } else { l })
            .collect();
        match project_to_constraints(&pruned, lengths, k, target_rate) {
            Ok(next) => lambda = next,
            Err(_) => break,
        }
    }
    Ok(lambda)
}

fn score(problem: &OptimizationProblem, lambda: &[f64], precision: f64) -> f64 {
    match problem.distribution_from_lambda(lambda) {
        Ok(dist) => {
            find_threshold(&dist, precision, DEFAULT_Q_TARGET, DEFAULT_MAX_ITERS).g_star
        }
        Err(_) => f64::NEG_INFINITY,
    }
}

/// DE/rand/1/bin search for the distribution maximizing the threshold at the
/// problem's target rate.
///
/// Deterministic for a fixed seed regardless of how many worker threads
/// score a generation: all random draws happen on one master stream at the
/// generation barrier, and scoring is pure.
pub fn optimize_distribution(problem: &OptimizationProblem) -> Result<OptimizationResult> {
    problem.validate()?;
    let dim = problem.candidate_lengths.len();
    let pop = problem.population_size;
    let lengths = &problem.candidate_lengths;
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);

    let project = |w: &[f64]| project_pruned(w, lengths, problem.k, problem.target_rate);

    // initial population of raw weights in [0, 1)
    let mut population: Vec<Vec<f64>> = (0..pop)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let projections: Vec<Result<Vec<f64>>> = population.iter().map(|w| project(w)).collect();
    let mut fitness: Vec<f64> = projections
        .par_iter()
        .map(|proj| match proj {
            Ok(lambda) => score(problem, lambda, SEARCH_PRECISION),
            Err(_) => f64::NEG_INFINITY,
        })
        .collect();

    let mut history = Vec::with_capacity(problem.generations);
    for _generation in 0..problem.generations {
        // build all trial vectors on the master stream first
        let trials: Vec<Vec<f64>> = (0..pop)
            .map(|i| {
                let mut picks = [0usize; 3];
                let mut chosen = 0;
                while chosen < 3 {
                    let c = rng.random_range(0..pop);
                    if c != i && !picks[..chosen].contains(&c) {
                        picks[chosen] = c;
                        chosen += 1;
                    }
                }
                let [r1, r2, r3] = picks;
                let j_rand = rng.random_range(0..dim);
                (0..dim)
                    .map(|j| {
                        let crossed = rng.random::<f64>() < problem.crossover_rate || j == j_rand;
                        if crossed {
                            let v = population[r1][j]
                                + problem.mutation_weight
                                    * (population[r2][j] - population[r3][j]);
                            v.clamp(0.0, 1.0)
                        } else {
                            population[i][j]
                        }
                    })
                    .collect()
            })
            .collect();

        let trial_scores: Vec<f64> = trials
            .par_iter()
            .map(|w| match project(w) {
                Ok(lambda) => score(problem, &lambda, SEARCH_PRECISION),
                Err(_) => f64::NEG_INFINITY,
            })
            .collect();

        for i in 0..pop {
            if trial_scores[i] >= fitness[i] && trial_scores[i].is_finite() {
                population[i] = trials[i].clone();
                fitness[i] = trial_scores[i];
            }
        }
        let best = fitness.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        history.push(best);
    }

    let champion_idx = (0..pop)
        .max_by(|&a, &b| fitness[a].total_cmp(&fitness[b]))
        .expect("non-empty population");
    if !fitness[champion_idx].is_finite() {
        return Err(Error::Infeasible(
            "no feasible candidate was ever produced".into(),
        ));
    }
    let lambda = project(&population[champion_idx])?;
    let distribution = problem.distribution_from_lambda(&lambda)?;
    let g_star = find_threshold(
        &distribution,
        DEFAULT_PRECISION,
        DEFAULT_Q_TARGET,
        DEFAULT_MAX_ITERS,
    )
    .g_star;
    let g_bar = solve_bound(distribution.rate())?;
    assert!(
        g_star < g_bar,
        "threshold {g_star} violates the capacity bound {g_bar}"
    );
    Ok(OptimizationResult {
        distribution,
        g_star,
        history,
    })
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// The 21-term repetition-code distribution reaching within a few percent of
/// the bound at rate ≈ 0.213. Exponent = code length.
pub const LAMBDA1_COEFFS: [(usize, f64); 21] = [
    (2, 0.494155),
    (3, 0.159085),
    (4, 0.107372),
    (5, 0.070336),
    (6, 0.045493),
    (7, 0.019898),
    (11, 0.024098),
    (12, 0.008636),
    (13, 0.005940),
    (15, 0.008749),
    (18, 0.002225),
    (20, 0.001261),
    (22, 0.002607),
    (23, 0.008092),
    (24, 0.002287),
    (25, 0.012274),
    (26, 0.002530),
    (27, 0.003094),
    (28, 0.002558),
    (29, 0.005891),
    (30, 0.013419),
];

/// Two-term repetition distribution `0.8·x² + 0.2·x³` at rate 5/11.
pub const LAMBDA5_COEFFS: [(usize, f64); 2] = [(2, 0.8), (3, 0.2)];

/// Four-term `k = 2` MDS distribution at rate ≈ 0.4. The exponent `h` is an
/// index; the component code is the `(h+2, 2)` MDS code.
pub const LAMBDA6_COEFFS: [(usize, f64); 4] = [
    (1, 0.276023),
    (2, 0.366641),
    (3, 0.127979),
    (7, 0.229357),
];

/// Regular distribution on a single `(n, 1)` repetition code.
pub fn rep_regular(n: usize) -> Result<CodeDistribution> {
    CodeDistribution::regular(ComponentCode::repetition(n)?)
}

/// Regular distribution on a single `(k+1, k)` single parity-check code.
pub fn spc_regular(k: usize) -> Result<CodeDistribution> {
    CodeDistribution::regular(ComponentCode::spc(k)?)
}

fn lambda1() -> Result<CodeDistribution> {
    CodeDistribution::new(
        LAMBDA1_COEFFS
            .iter()
            .map(|&(n, l)| Ok((ComponentCode::repetition(n)?, l)))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn lambda5() -> Result<CodeDistribution> {
    CodeDistribution::new(
        LAMBDA5_COEFFS
            .iter()
            .map(|&(n, l)| Ok((ComponentCode::repetition(n)?, l)))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn lambda6() -> Result<CodeDistribution> {
    CodeDistribution::new(
        LAMBDA6_COEFFS
            .iter()
            .map(|&(h, l)| Ok((ComponentCode::mds(h + 2, 2)?, l)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Looks up a preset distribution by name: `lambda1`, `lambda5`, `lambda6`,
/// `repN` (regular length-`N` repetition) or `spcK` (regular `(K+1, K)`
/// single parity-check).
pub fn preset(name: &str) -> Result<CodeDistribution> {
    match name {
        "lambda1" => lambda1(),
        "lambda5" => lambda5(),
        "lambda6" => lambda6(),
        _ => {
            if let Some(n) = name.strip_prefix("rep") {
                if let Ok(n) = n.parse::<usize>() {
                    return rep_regular(n);
                }
            }
            if let Some(k) = name.strip_prefix("spc") {
                if let Ok(k) = k.parse::<usize>() {
                    return spc_regular(k);
                }
            }
            Err(Error::UnknownPreset(name.into()))
        }
    }
}

/// Canonical preset names, for listings.
pub const PRESET_NAMES: [&str; 6] = ["rep2", "rep3", "spc2", "lambda1", "lambda5", "lambda6"];
