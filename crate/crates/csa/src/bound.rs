//! Capacity bound `Ḡ(R)` for coded random access at overall rate `R`.
//!
//! Whatever the component codes and their distribution, the SIC threshold of
//! a rate-`R` scheme lies strictly below the unique positive root of
//! `G = 1 − exp(−G/R)`. The root is found by bisection; the inverse map
//! `R(Ḡ) = −Ḡ/ln(1−Ḡ)` is closed-form.

use crate::{Error, Result};

const BRACKET_EPS: f64 = 1e-12;

/// One point of the bound curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint {
    pub rate: f64,
    pub g_bar: f64,
}

/// Solves `G = 1 − exp(−G/rate)` for the positive root in `(0, 1)`.
///
/// For `rate ≥ 1` the only solution in `[0, 1)` is `G = 0`, which is
/// returned as the degenerate bound. The residual of the returned root is
/// below `1e-10`.
pub fn solve_bound(rate: f64) -> Result<f64> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(Error::Domain(format!(
            "rate must be positive and finite, got {rate}"
        )));
    }
    if rate >= 1.0 {
        return Ok(0.0);
    }
    let residual = |g: f64| g + (-(g / rate)).exp_m1();
    let mut lo = BRACKET_EPS;
    let mut hi = 1.0 - BRACKET_EPS;
    debug_assert!(residual(lo) < 0.0);
    if residual(hi) <= 0.0 {
        // Root is pinched against 1 (tiny rates): one fixed-point refinement
        // of g = 1 - exp(-g/rate) from the bracket end is exact to within
        // the contraction factor exp(-1/rate)/rate.
        return Ok(-(-(hi / rate)).exp_m1());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of the bound: the rate whose bound equals `g_bar`, i.e.
/// `R(Ḡ) = −Ḡ/ln(1−Ḡ)` for `g_bar ∈ (0, 1)`.
pub fn rate_of_gbar(g_bar: f64) -> Result<f64> {
    if !(g_bar > 0.0 && g_bar < 1.0) {
        return Err(Error::Domain(format!(
            "g_bar must lie strictly inside (0, 1), got {g_bar}"
        )));
    }
    Ok(-g_bar / (-g_bar).ln_1p())
}

/// Samples the bound on a uniform rate grid of `steps` points spanning
/// `[r_min, r_max]`; `g_bar` is strictly decreasing along the grid.
pub fn bound_curve(r_min: f64, r_max: f64, steps: usize) -> Result<Vec<BoundPoint>> {
    if !(r_min > 0.0 && r_min < r_max && r_max <= 1.0) {
        return Err(Error::Domain(format!(
            "need 0 < r_min < r_max <= 1, got [{r_min}, {r_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("need at least 2 steps".into()));
    }
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let rate = r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64;
        points.push(BoundPoint {
            rate,
            g_bar: solve_bound(rate)?,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_at_printed_rates() {
        let g = solve_bound(5.0 / 11.0).unwrap();
        assert!((g - 0.843739).abs() < 1e-5, "got {g}");
        // rate of the 21-entry repetition preset
        let g = solve_bound(0.2127220).unwrap();
        assert!((g - 0.990498).abs() < 1e-5, "got {g}");
        let g = solve_bound(0.5).unwrap();
        assert!((g - 0.796812).abs() < 1e-5, "got {g}");
    }

    #[test]
    fn residual_below_contract() {
        for i in 1..100 {
            let rate = i as f64 / 100.0;
            let g = solve_bound(rate).unwrap();
            let residual = g - (1.0 - (-g / rate).exp());
            assert!(residual.abs() < 1e-10, "rate={rate} residual={residual}");
        }
    }

    #[test]
    fn degenerate_and_invalid_rates() {
        assert_eq!(solve_bound(1.0).unwrap(), 0.0);
        assert_eq!(solve_bound(1.5).unwrap(), 0.0);
        assert!(solve_bound(0.0).is_err());
        assert!(solve_bound(-0.3).is_err());
        assert!(solve_bound(f64::NAN).is_err());
    }

    #[test]
    fn tiny_rate_pushes_bound_to_one() {
        let g = solve_bound(1e-3).unwrap();
        assert!(g > 0.999);
        let residual = g - (1.0 - (-g / 1e-3).exp());
        assert!(residual.abs() < 1e-10);
    }

    #[test]
    fn inverse_values_and_round_trip() {
        let r = rate_of_gbar(0.843).unwrap();
        assert!((r - 0.455304).abs() < 1e-5, "got {r}");
        let r = rate_of_gbar(1.0 - (-1.0f64).exp()).unwrap();
        assert!((r - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        let r = rate_of_gbar(0.5).unwrap();
        assert!((r - 0.5 / 2.0f64.ln()).abs() < 1e-12);

        for i in 1..20 {
            let rate = i as f64 / 20.0;
            let g = solve_bound(rate).unwrap();
            let back = rate_of_gbar(g).unwrap();
            assert!((back - rate).abs() < 1e-8, "rate={rate} back={back}");
        }

        assert!(rate_of_gbar(0.0).is_err());
        assert!(rate_of_gbar(1.0).is_err());
    }

    #[test]
    fn curve_is_strictly_decreasing() {
        let curve = bound_curve(0.1, 0.9, 9).unwrap();
        assert_eq!(curve.len(), 9);
        for pair in curve.windows(2) {
            assert!(pair[1].g_bar < pair[0].g_bar);
        }
        // interpolation near the printed rate
        let curve = bound_curve(0.05, 0.95, 181).unwrap();
        let near = curve
            .iter()
            .min_by(|a, b| {
                (a.rate - 5.0 / 11.0)
                    .abs()
                    .total_cmp(&(b.rate - 5.0 / 11.0).abs())
            })
            .unwrap();
        assert!((near.g_bar - 0.843).abs() < 0.01);
        assert!(bound_curve(0.5, 0.4, 5).is_err());
        assert!(bound_curve(0.1, 0.9, 1).is_err());
    }

    #[test]
    fn proof_map_is_monotone_decreasing() {
        // y = -x / ln(1 - x) decreases on (0, 1)
        let mut prev = f64::INFINITY;
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            let y = rate_of_gbar(x).unwrap();
            assert!(y < prev, "x={x}");
            prev = y;
        }
    }
}
