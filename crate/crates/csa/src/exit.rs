//! EXIT functions of the burst-node and sum-node sets.
//!
//! On an edge of the burst/slot graph, `p` is the probability that the slot
//! side still carries a collision and `q` the probability that the burst side
//! cannot yet be cancelled. The burst-node transfer function `f_b` follows
//! from the code's information functions under MAP erasure decoding; the
//! sum-node transfer function is `f_s(q) = 1 − exp(−(G/R)·q)` in the
//! large-frame limit. Their areas obey the Area Theorem (`∫f_b = R` for MAP
//! decoding), which is what drives the capacity bound.

use crate::codes::{binomial, ComponentCode, MAX_CODE_LEN};
use crate::{Error, Result};

/// One entry of a code distribution: a component code with its
/// node-perspective probability `Λ_h` and derived edge fraction `λ_h`.
#[derive(Clone, Debug)]
pub struct DistEntry {
    code: ComponentCode,
    lambda: f64,
    edge_fraction: f64,
}

impl DistEntry {
    pub fn code(&self) -> &ComponentCode {
        &self.code
    }

    /// Node-perspective probability `Λ_h`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Edge-perspective fraction `λ_h = Λ_h n_h / n̄`.
    pub fn edge_fraction(&self) -> f64 {
        self.edge_fraction
    }
}

// Burst-node EXIT function of one code as a ready-to-evaluate polynomial:
//   f(p) = Σ_t p^t (1−p)^(n−1−t) · c_t
// with c_t = [(n−t)·ẽ_{n−t} − (t+1)·ẽ_{n−1−t}] / n, the bracket taken in
// exact integer arithmetic so that telescoping cancellations are exact.
#[derive(Clone, Debug)]
struct ExitPoly {
    n: usize,
    coeffs: Vec<f64>,
}

impl ExitPoly {
    fn from_code(code: &ComponentCode) -> Result<Self> {
        let e = code.information_functions()?;
        let n = code.n();
        let coeffs = (0..n)
            .map(|t| {
                let bracket = (n - t) as i128 * e.get(n - t) as i128
                    - (t + 1) as i128 * e.get(n - 1 - t) as i128;
                bracket as f64 / n as f64
            })
            .collect();
        Ok(Self { n, coeffs })
    }

    fn eval(&self, p: f64) -> f64 {
        let n = self.n;
        let q = 1.0 - p;
        let mut p_pow = [0.0f64; MAX_CODE_LEN];
        let mut q_pow = [0.0f64; MAX_CODE_LEN];
        p_pow[0] = 1.0;
        q_pow[0] = 1.0;
        for i in 1..n {
            p_pow[i] = p_pow[i - 1] * p;
            q_pow[i] = q_pow[i - 1] * q;
        }
        let mut acc = 0.0;
        for (t, &c) in self.coeffs.iter().enumerate() {
            acc += c * p_pow[t] * q_pow[n - 1 - t];
        }
        acc.clamp(0.0, 1.0)
    }
}

/// A candidate code set with its node-perspective distribution `Λ`.
///
/// All entries share the dimension `k`. Probabilities must be non-negative
/// and sum to 1 within `1e-9`; they are renormalized on construction. The
/// edge fractions, mean length `n̄` and rate `R = k/n̄` are derived, and the
/// per-code EXIT polynomials are precomputed so that repeated evaluation
/// (density evolution, chart sampling) is allocation-free.
#[derive(Clone, Debug)]
pub struct CodeDistribution {
    k: usize,
    entries: Vec<DistEntry>,
    polys: Vec<ExitPoly>,
    mean_length: f64,
}

impl CodeDistribution {
    pub fn new(entries: Vec<(ComponentCode, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        let k = entries[0].0.k();
        let mut sum = 0.0;
        for (code, lambda) in &entries {
            if code.k() != k {
                return Err(Error::InvalidDistribution(format!(
                    "mixed dimensions: {} vs {}",
                    code.k(),
                    k
                )));
            }
            if !lambda.is_finite() || *lambda < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "probabilities must be non-negative, got {lambda}"
                )));
            }
            sum += lambda;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, expected 1 within 1e-9"
            )));
        }
        let mean_length: f64 = entries
            .iter()
            .map(|(code, lambda)| lambda / sum * code.n() as f64)
            .sum();
        let mut dist_entries = Vec::with_capacity(entries.len());
        let mut polys = Vec::with_capacity(entries.len());
        for (code, lambda) in entries {
            let lambda = lambda / sum;
            let edge_fraction = lambda * code.n() as f64 / mean_length;
            polys.push(ExitPoly::from_code(&code)?);
            dist_entries.push(DistEntry {
                code,
                lambda,
                edge_fraction,
            });
        }
        Ok(Self {
            k,
            entries: dist_entries,
            polys,
            mean_length,
        })
    }

    /// Single-code distribution.
    pub fn regular(code: ComponentCode) -> Result<Self> {
        Self::new(vec![(code, 1.0)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[DistEntry] {
        &self.entries
    }

    /// Expected codeword length `n̄ = Σ Λ_h n_h`.
    pub fn mean_length(&self) -> f64 {
        self.mean_length
    }

    /// Overall rate `R = k / n̄`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.mean_length
    }

    /// True if some positive-probability entry is a rate-1 code, which
    /// collapses the SIC threshold to 0.
    pub fn has_rate_one_code(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.lambda > 0.0 && e.code.n() == e.code.k())
    }

    /// Average burst-node EXIT `f_b(p) = Σ_h λ_h f_b^{(h)}(p)`.
    pub fn exit_bn_avg(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for (entry, poly) in self.entries.iter().zip(&self.polys) {
            acc += entry.edge_fraction * poly.eval(p);
        }
        acc.clamp(0.0, 1.0)
    }

    /// The same average computed from the node-perspective weights,
    /// `(1/n̄) Σ_h Λ_h · n_h f_b^{(h)}(p)`; algebraically identical to
    /// [`Self::exit_bn_avg`] and kept as the second route for cross-checks.
    pub fn exit_bn_avg_node_form(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for (entry, poly) in self.entries.iter().zip(&self.polys) {
            acc += entry.lambda * entry.code.n() as f64 * poly.eval(p);
        }
        (acc / self.mean_length).clamp(0.0, 1.0)
    }
}

/// Burst-node EXIT function `f_b^{(h)}(p)` of a single code under MAP
/// erasure decoding, evaluated from its information functions.
pub fn exit_bn_map(code: &ComponentCode, p: f64) -> Result<f64> {
    Ok(ExitPoly::from_code(code)?.eval(p))
}

/// Burst-node EXIT of an `(n, k)` MDS code under the threshold decoding rule
/// (decode only once at least `k` segments are known):
/// `Σ_{l=0}^{k−1} C(n−1, l) (1−p)^l p^{n−1−l}`. Coincides with
/// [`exit_bn_map`] of the analytic MDS code for all `p`.
pub fn exit_bn_mds_suboptimal(n: usize, k: usize, p: f64) -> f64 {
    debug_assert!(k <= n && n >= 1);
    let q = 1.0 - p;
    let mut acc = 0.0;
    for l in 0..k.min(n) {
        acc += binomial(n - 1, l) as f64 * q.powi(l as i32) * p.powi((n - 1 - l) as i32);
    }
    acc.clamp(0.0, 1.0)
}

/// Sum-node EXIT `f_s(q) = 1 − exp(−(g/rate)·q)` in the large-frame limit.
pub fn exit_sn(g: f64, rate: f64, q: f64) -> f64 {
    -(-(g / rate) * q).exp_m1()
}

/// Inverse sum-node EXIT `f_s⁻¹(p) = −(rate/g)·ln(1−p)`.
///
/// Defined for `p` in the range of `f_s` over `q ∈ [0, 1]`, i.e.
/// `p ≤ 1 − exp(−g/rate)`.
pub fn exit_sn_inverse(g: f64, rate: f64, p: f64) -> Result<f64> {
    let p_max = -(-(g / rate)).exp_m1();
    if !(0.0..=1.0).contains(&p) || p > p_max {
        return Err(Error::Domain(format!(
            "p = {p} outside the sum-node EXIT range [0, {p_max}]"
        )));
    }
    Ok((-(rate / g) * (-p).ln_1p()).min(1.0))
}

/// Composite Simpson quadrature with `points` uniformly spaced samples
/// (`points` must be odd and at least 3).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> f64 {
    assert!(points >= 3 && points % 2 == 1, "need an odd point count >= 3");
    let h = (b - a) / (points - 1) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..points - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Number of Simpson samples used by the area checks.
pub const AREA_QUADRATURE_POINTS: usize = 1025;

/// Area below the average burst-node EXIT function over `[0, 1]`, by
/// quadrature. Under MAP decoding the Area Theorem makes this equal
/// `Σ_h λ_h k/n_h = R`.
pub fn area_bn(dist: &CodeDistribution) -> f64 {
    simpson(|p| dist.exit_bn_avg(p), 0.0, 1.0, AREA_QUADRATURE_POINTS)
}

/// Area below the sum-node EXIT function over `[0, 1]`, closed form
/// `1 + (R/G)·e^{−G/R} − R/G`.
pub fn area_sn(g: f64, rate: f64) -> f64 {
    1.0 + (rate / g) * (-(g / rate)).exp_m1()
}

/// One sampled point of an EXIT chart: `f_b(p)` against `f_s⁻¹(p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitChartSample {
    pub p: f64,
    pub f_b: f64,
    pub f_s_inv: f64,
}

/// Samples both EXIT curves on a uniform `p` grid over `[0, p_max]` with
/// `p_max = 1 − exp(−g/rate)`, the range of `f_s`, so the inverse is always
/// defined. The SIC tunnel is open at `g` iff `f_b < f_s⁻¹` strictly inside
/// the grid.
pub fn sample_exit_chart(
    dist: &CodeDistribution,
    g: f64,
    num_samples: usize,
) -> Result<Vec<ExitChartSample>> {
    if num_samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    if !(g > 0.0) {
        return Err(Error::InvalidArgument(format!("g must be positive, got {g}")));
    }
    let rate = dist.rate();
    let p_max = -(-(g / rate)).exp_m1();
    let mut samples = Vec::with_capacity(num_samples);
    for i in 0..num_samples {
        // fraction first so the final point is exactly p_max
        let p = p_max * (i as f64 / (num_samples - 1) as f64);
        samples.push(ExitChartSample {
            p,
            f_b: dist.exit_bn_avg(p),
            f_s_inv: exit_sn_inverse(g, rate, p)?,
        });
    }
    Ok(samples)
}
