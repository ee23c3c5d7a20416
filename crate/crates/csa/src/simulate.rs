//! Finite-frame Monte Carlo simulation of the CSA scheme.
//!
//! A frame of `N` slots carries `k·N` sub-slots. Each of `M = round(g·N)`
//! bursts draws a component code from the distribution and places its `n_h`
//! coded segments in distinct sub-slots chosen uniformly at random. The
//! receiver then peels: every sub-slot holding exactly one unresolved
//! segment reveals it, burst nodes run MAP erasure decoding on their known
//! coordinates, and newly recovered segments are cancelled from their
//! sub-slots, until a fixed point or the iteration cap. A burst counts as
//! recovered when its known coordinates determine all `k` information
//! segments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::CoordSet;
use crate::exit::CodeDistribution;
use crate::{Error, Result};

/// One transmitted burst: the index of its code in the distribution and the
/// sub-slot carrying each codeword coordinate.
#[derive(Clone, Debug)]
pub struct Burst {
    pub code_index: usize,
    /// `sub_slots[c]` is the sub-slot of coordinate `c`; entries are distinct.
    pub sub_slots: Vec<u32>,
}

/// A realized bipartite burst/sub-slot graph for one MAC frame.
#[derive(Clone, Debug)]
pub struct FrameInstance {
    pub num_slots: usize,
    pub k: usize,
    pub bursts: Vec<Burst>,
    /// Transpose of the burst slot lists: per sub-slot, the `(burst,
    /// coordinate)` pairs transmitted there.
    pub occupancy: Vec<Vec<(u32, u8)>>,
}

impl FrameInstance {
    /// Assembles a frame from placed bursts, building the occupancy
    /// transpose.
    pub fn new(num_slots: usize, k: usize, bursts: Vec<Burst>) -> Self {
        let mut occupancy = vec![Vec::new(); k * num_slots];
        for (b, burst) in bursts.iter().enumerate() {
            for (c, &s) in burst.sub_slots.iter().enumerate() {
                occupancy[s as usize].push((b as u32, c as u8));
            }
        }
        Self {
            num_slots,
            k,
            bursts,
            occupancy,
        }
    }

    pub fn sub_slots(&self) -> usize {
        self.k * self.num_slots
    }
}

/// Draws one random frame: `round(g·N)` bursts, each with an i.i.d. code
/// from the distribution and uniformly chosen distinct sub-slots.
pub fn build_frame<R: Rng + ?Sized>(
    dist: &CodeDistribution,
    num_slots: usize,
    g: f64,
    rng: &mut R,
) -> Result<FrameInstance> {
    let sub_slots = dist.k() * num_slots;
    if num_slots == 0 {
        return Err(Error::InvalidArgument("need at least one slot".into()));
    }
    let m = (g * num_slots as f64).round() as i64;
    if m < 1 {
        return Err(Error::InvalidArgument(format!(
            "offered traffic {g} rounds to zero bursts on {num_slots} slots"
        )));
    }
    for entry in dist.entries() {
        if entry.lambda() > 0.0 && entry.code().n() > sub_slots {
            return Err(Error::FrameTooSmall {
                code_len: entry.code().n(),
                sub_slots,
            });
        }
    }
    let mut bursts = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let code_index = sample_code_index(dist, rng);
        let n = dist.entries()[code_index].code().n();
        let sub_slots_for_burst = rand::seq::index::sample(rng, sub_slots, n)
            .into_iter()
            .map(|s| s as u32)
            .collect();
        bursts.push(Burst {
            code_index,
            sub_slots: sub_slots_for_burst,
        });
    }
    Ok(FrameInstance::new(num_slots, dist.k(), bursts))
}

fn sample_code_index<R: Rng + ?Sized>(dist: &CodeDistribution, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, entry) in dist.entries().iter().enumerate() {
        acc += entry.lambda();
        if u < acc {
            return i;
        }
    }
    dist.entries().len() - 1
}

/// Result of peeling one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelOutcome {
    /// Per-burst flag: all `k` information segments recovered.
    pub recovered: Vec<bool>,
    /// Sweeps that changed the state, capped at the iteration limit.
    pub iterations: usize,
}

/// Iterative SIC peeling to a fixed point (or `max_iterations` sweeps).
///
/// Each sweep first reveals the segment in every degree-1 sub-slot, then
/// runs MAP erasure decoding at the touched bursts and cancels the newly
/// recovered segments from their sub-slots. The rules are monotone, so the
/// fixed point does not depend on processing order.
pub fn peel(frame: &FrameInstance, dist: &CodeDistribution, max_iterations: usize) -> PeelOutcome {
    let nb = frame.bursts.len();
    let mut known = vec![CoordSet::EMPTY; nb];
    let mut slot_unresolved: Vec<u32> = frame.occupancy.iter().map(|o| o.len() as u32).collect();
    let mut touched: Vec<u32> = Vec::new();
    let mut touched_flag = vec![false; nb];
    let mut iterations = 0;

    while iterations < max_iterations {
        let mut changed = false;
        // (a) clean sub-slots reveal their remaining segment
        touched.clear();
        for (s, occ) in frame.occupancy.iter().enumerate() {
            if slot_unresolved[s] != 1 {
                continue;
            }
            let &(b, c) = occ
                .iter()
                .find(|&&(b, c)| !known[b as usize].contains(c as usize))
                .expect("unresolved count says one segment is left");
            known[b as usize].insert(c as usize);
            slot_unresolved[s] -= 1;
            if !touched_flag[b as usize] {
                touched_flag[b as usize] = true;
                touched.push(b);
            }
            changed = true;
        }
        // (b) local erasure decoding, cancelling newly recovered segments
        for &b in &touched {
            touched_flag[b as usize] = false;
            let burst = &frame.bursts[b as usize];
            let code = dist.entries()[burst.code_index].code();
            let decoded = code.map_erasure_decode(known[b as usize]);
            for c in decoded.difference(known[b as usize]).iter() {
                slot_unresolved[burst.sub_slots[c] as usize] -= 1;
            }
            known[b as usize] = decoded;
        }
        if !changed {
            break;
        }
        iterations += 1;
    }

    let recovered = frame
        .bursts
        .iter()
        .zip(&known)
        .map(|(burst, &kn)| dist.entries()[burst.code_index].code().info_recoverable(kn))
        .collect();
    PeelOutcome {
        recovered,
        iterations,
    }
}

/// Aggregated Monte Carlo statistics at one offered-traffic point.
#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    /// Actual offered traffic `M/N` after rounding.
    pub g: f64,
    pub frames_run: u64,
    pub bursts_total: u64,
    pub bursts_lost: u64,
    /// Packet loss rate `bursts_lost / bursts_total`.
    pub plr: f64,
    /// `g · (1 − plr)`.
    pub throughput: f64,
    /// Wilson 95% confidence interval on the loss rate.
    pub plr_lo: f64,
    pub plr_hi: f64,
    /// Mean peeling sweeps per frame.
    pub mean_iterations: f64,
}

/// Stopping rule for [`run_plr`]: frames are simulated until either bound is
/// reached, whichever comes first (checked at batch boundaries).
#[derive(Clone, Copy, Debug)]
pub struct StopRule {
    pub max_frames: u64,
    pub target_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_frames: 100_000,
            target_errors: 200,
        }
    }
}

// Frames are consumed in fixed-size batches so the stopping decision — and
// therefore the output — is independent of worker count.
const FRAME_BATCH: u64 = 16;

/// SplitMix64 finalizer used to derive independent per-stream seeds from the
/// master seed; stream `i` always maps to the same seed, so serial and
/// parallel execution agree.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Runs independent frames at one offered-traffic point until the stop rule
/// triggers, and aggregates the loss statistics.
///
/// Frame `i` draws from a ChaCha stream seeded by `derive_seed(master_seed,
/// i)`; reports are bit-identical for a fixed seed regardless of the rayon
/// worker count.
pub fn run_plr(
    dist: &CodeDistribution,
    num_slots: usize,
    g: f64,
    stop: StopRule,
    max_iterations: usize,
    master_seed: u64,
) -> Result<SimReport> {
    if stop.max_frames == 0 {
        return Err(Error::InvalidArgument("need at least one frame".into()));
    }
    // surface frame-shape errors before the parallel loop
    {
        let mut probe = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, 0));
        build_frame(dist, num_slots, g, &mut probe)?;
    }
    let m = (g * num_slots as f64).round();
    let g_actual = m / num_slots as f64;

    let mut frames_run = 0u64;
    let mut bursts_total = 0u64;
    let mut bursts_lost = 0u64;
    let mut iteration_sum = 0.0f64;

    while frames_run < stop.max_frames && bursts_lost < stop.target_errors {
        let batch = FRAME_BATCH.min(stop.max_frames - frames_run);
        let results: Vec<(u64, u64, usize)> = (frames_run..frames_run + batch)
            .into_par_iter()
            .map(|f| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, f));
                let frame =
                    build_frame(dist, num_slots, g, &mut rng).expect("frame shape validated");
                let outcome = peel(&frame, dist, max_iterations);
                let lost = outcome.recovered.iter().filter(|&&r| !r).count() as u64;
                (frame.bursts.len() as u64, lost, outcome.iterations)
            })
            .collect();
        for (bursts, lost, iters) in results {
            bursts_total += bursts;
            bursts_lost += lost;
            iteration_sum += iters as f64;
        }
        frames_run += batch;
    }

    let plr = bursts_lost as f64 / bursts_total as f64;
    let (plr_lo, plr_hi) = wilson_interval(bursts_lost, bursts_total);
    Ok(SimReport {
        g: g_actual,
        frames_run,
        bursts_total,
        bursts_lost,
        plr,
        throughput: g_actual * (1.0 - plr),
        plr_lo,
        plr_hi,
        mean_iterations: iteration_sum / frames_run as f64,
    })
}

/// One [`run_plr`] per point of a uniform offered-traffic grid.
pub fn sweep_plr(
    dist: &CodeDistribution,
    num_slots: usize,
    g_min: f64,
    g_max: f64,
    g_step: f64,
    stop: StopRule,
    max_iterations: usize,
    master_seed: u64,
) -> Result<Vec<SimReport>> {
    if !(g_min > 0.0 && g_min <= g_max && g_step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad traffic grid [{g_min}, {g_max}] step {g_step}"
        )));
    }
    let mut reports = Vec::new();
    let mut i = 0u64;
    loop {
        let g = g_min + i as f64 * g_step;
        if g > g_max + 1e-9 * g_step {
            break;
        }
        let seed = derive_seed(master_seed, (1 << 32) | i);
        reports.push(run_plr(dist, num_slots, g, stop, max_iterations, seed)?);
        i += 1;
    }
    Ok(reports)
}

/// Wilson 95% score interval for a binomial proportion.
fn wilson_interval(successes: u64, total: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the interval contains the point estimate; clamp away rounding jitter
    (
        ((center - radius) / denom).max(0.0).min(p),
        ((center + radius) / denom).min(1.0).max(p),
    )
}
