//! Interchange formats: the distribution JSON schema, threshold and
//! optimizer report JSON, and the CSV emitters.
//!
//! CSV floats are written with 12 significant digits and a `.` decimal
//! separator regardless of locale.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bound::BoundPoint;
use crate::codes::{family_from_tag, family_tag, BitMatrix, CodeFamily, ComponentCode};
use crate::density::ThresholdResult;
use crate::exit::{CodeDistribution, ExitChartSample};
use crate::optimize::{OptimizationProblem, OptimizationResult, OptimizeFamily};
use crate::simulate::SimReport;
use crate::{Error, Result};

/// On-disk form of one distribution entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub family: String,
    pub n: usize,
    /// Dimension; optional on input, where it defaults to the top-level `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub lambda: f64,
    /// Generator matrix rows (0/1), required for the `generic` family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<Vec<u8>>>,
}

/// On-disk form of a code distribution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionJson {
    pub k: usize,
    pub entries: Vec<EntryJson>,
}

pub fn distribution_to_json(dist: &CodeDistribution) -> DistributionJson {
    DistributionJson {
        k: dist.k(),
        entries: dist
            .entries()
            .iter()
            .map(|e| EntryJson {
                family: family_tag(e.code().family()).to_string(),
                n: e.code().n(),
                k: Some(e.code().k()),
                lambda: e.lambda(),
                generator: e.code().generator().map(BitMatrix::to_rows),
            })
            .collect(),
    }
}

pub fn distribution_from_json(json: &DistributionJson) -> Result<CodeDistribution> {
    let mut entries = Vec::with_capacity(json.entries.len());
    for e in &json.entries {
        let k = e.k.unwrap_or(json.k);
        if k != json.k {
            return Err(Error::InvalidDistribution(format!(
                "entry dimension {k} disagrees with top-level k = {}",
                json.k
            )));
        }
        let code = match family_from_tag(&e.family)? {
            CodeFamily::Repetition => {
                if k != 1 {
                    return Err(Error::InvalidDistribution(
                        "repetition entries require k = 1".into(),
                    ));
                }
                ComponentCode::repetition(e.n)?
            }
            CodeFamily::Spc => {
                if e.n != k + 1 {
                    return Err(Error::InvalidDistribution(format!(
                        "spc entries require n = k + 1, got ({}, {k})",
                        e.n
                    )));
                }
                ComponentCode::spc(k)?
            }
            CodeFamily::MdsAnalytic => ComponentCode::mds(e.n, k)?,
            CodeFamily::GenericBinary => {
                let rows = e.generator.as_ref().ok_or_else(|| {
                    Error::InvalidDistribution("generic entries require a generator".into())
                })?;
                let matrix = BitMatrix::from_rows(rows)?;
                if matrix.n_rows() != k || matrix.n_cols() != e.n {
                    return Err(Error::InvalidDistribution(format!(
                        "generator shape {}x{} does not match (n, k) = ({}, {k})",
                        matrix.n_rows(),
                        matrix.n_cols(),
                        e.n
                    )));
                }
                ComponentCode::generic(matrix)?
            }
        };
        entries.push((code, e.lambda));
    }
    CodeDistribution::new(entries)
}

pub fn read_distribution(content: &str) -> Result<CodeDistribution> {
    let json: DistributionJson = serde_json::from_str(content)?;
    distribution_from_json(&json)
}

pub fn write_distribution(dist: &CodeDistribution) -> Result<String> {
    Ok(serde_json::to_string_pretty(&distribution_to_json(dist))?)
}

/// Threshold result JSON: `{"g_star", "bracket", "precision", "rate"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdJson {
    pub g_star: f64,
    pub bracket: [f64; 2],
    pub precision: f64,
    pub rate: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

pub fn threshold_to_json(result: &ThresholdResult, rate: f64) -> ThresholdJson {
    ThresholdJson {
        g_star: result.g_star,
        bracket: [result.bracket.0, result.bracket.1],
        precision: result.precision,
        rate,
        degenerate: result.degenerate,
    }
}

/// Optimizer report: problem echo, champion distribution, threshold and
/// per-generation best scores.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeReportJson {
    pub problem: ProblemJson,
    pub champion: DistributionJson,
    pub g_star: f64,
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub k: usize,
    pub family: String,
    pub candidate_lengths: Vec<usize>,
    pub target_rate: f64,
    pub population_size: usize,
    pub generations: usize,
    pub mutation_weight: f64,
    pub crossover_rate: f64,
    pub seed: u64,
}

pub fn optimize_report(problem: &OptimizationProblem, result: &OptimizationResult) -> OptimizeReportJson {
    OptimizeReportJson {
        problem: ProblemJson {
            k: problem.k,
            family: match problem.family {
                OptimizeFamily::Repetition => "repetition".into(),
                OptimizeFamily::MdsAnalytic => "mds".into(),
            },
            candidate_lengths: problem.candidate_lengths.clone(),
            target_rate: problem.target_rate,
            population_size: problem.population_size,
            generations: problem.generations,
            mutation_weight: problem.mutation_weight,
            crossover_rate: problem.crossover_rate,
            seed: problem.seed,
        },
        champion: distribution_to_json(&result.distribution),
        g_star: result.g_star,
        history: result.history.clone(),
    }
}

/// Formats a float with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_exit_chart_csv<W: Write>(w: &mut W, samples: &[ExitChartSample]) -> Result<()> {
    writeln!(w, "p,f_b,f_s_inv")?;
    for s in samples {
        writeln!(w, "{},{},{}", fmt_sig(s.p), fmt_sig(s.f_b), fmt_sig(s.f_s_inv))?;
    }
    Ok(())
}

pub fn write_bound_csv<W: Write>(w: &mut W, points: &[BoundPoint]) -> Result<()> {
    writeln!(w, "rate,g_bar")?;
    for p in points {
        writeln!(w, "{},{}", fmt_sig(p.rate), fmt_sig(p.g_bar))?;
    }
    Ok(())
}

pub fn write_plr_csv<W: Write>(w: &mut W, reports: &[SimReport]) -> Result<()> {
    writeln!(w, "g,plr,plr_lo,plr_hi,throughput,frames,mean_iters")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_sig(r.g),
            fmt_sig(r.plr),
            fmt_sig(r.plr_lo),
            fmt_sig(r.plr_hi),
            fmt_sig(r.throughput),
            r.frames_run,
            fmt_sig(r.mean_iterations),
        )?;
    }
    Ok(())
}
