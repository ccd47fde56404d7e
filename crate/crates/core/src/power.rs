//! Repeated (max,+) self-convolution for value-bounded vectors.
//!
//! Adjacent powers of the same base vector admit a self-certifying
//! interval certificate: prefix maxima of the two operands differ by at
//! most the base value bound at some optimal split of every output
//! index, so rows whose prefix maxima are within `2 e_max` of each
//! other cover all optima and stay accurate to `5 e_max`.

use crate::error::{domain, Result};
use crate::maxplus::MaxPlusVec;
use crate::prediction::{conv_via_prediction, UncertainSolution};
use std::collections::HashMap;

/// Two adjacent powers `hi = a^(ceil k/2)`, `lo = a^(floor k/2)` of a
/// base vector with values in `[0, base_e_max]`. Entries of a power
/// stay within `base_e_max` of their running maximum except near the
/// vector top, where the drop can be larger; see [`fast_power_step`].
#[derive(Debug, Clone)]
pub struct PowerPair {
    pub hi: MaxPlusVec,
    pub lo: MaxPlusVec,
    pub base_e_max: u64,
}

/// Running maxima and the largest gap `prefix_max - value`. For
/// adjacent powers of a `[0, e_max]` base the gap usually stays within
/// `e_max`, but entries near the top of a power can drop faster (the
/// optimal split runs out of room), so the certificate construction
/// widens with the measured gap instead of assuming the bound.
fn prefix_max_and_drop(v: &MaxPlusVec, what: &str) -> Result<(Vec<i64>, i64)> {
    let vals = v.finite_values(what)?;
    let mut out = Vec::with_capacity(vals.len());
    let mut best = i64::MIN;
    let mut drop = 0i64;
    for &x in &vals {
        best = best.max(x);
        drop = drop.max(best - x);
        out.push(best);
    }
    Ok((out, drop))
}

/// Exact `hi * lo` for a genuine adjacent power pair, via the interval
/// certificate. With prefix-max drops within `base_e_max` the band is
/// `2 e_max` and the certificate error `5 e_max`; larger measured drops
/// widen both accordingly so the certificate stays valid.
pub fn fast_power_step(p: &PowerPair) -> Result<MaxPlusVec> {
    let e = p.base_e_max as i64;
    let (hi_max, drop_hi) = prefix_max_and_drop(&p.hi, "fast_power_step")?;
    let (lo_max, drop_lo) = prefix_max_and_drop(&p.lo, "fast_power_step")?;
    let band = e + drop_hi.max(drop_lo).max(e);
    let err = (e + band + drop_hi + drop_lo).max(5 * e) as u64;
    let last = lo_max.len() as i64 - 1;
    let intervals: Vec<(i64, i64)> = hi_max
        .iter()
        .map(|&h| {
            // smallest j with lo_max[j] >= h - band, largest with <= h + band
            let x = lo_max.partition_point(|&v| v < h.saturating_sub(band)) as i64;
            let y = lo_max.partition_point(|&v| v <= h.saturating_add(band)) as i64 - 1;
            (x.min(last + 1), y)
        })
        .collect();
    let u = UncertainSolution::new(intervals, err);
    conv_via_prediction(&p.hi, &p.lo, &u)
}

/// `a^(*k)` for a vector with integer values in `[0, e_max]`, by
/// `O(log k)` certificate-driven squaring steps. With `prefix_cap` set,
/// every intermediate power is truncated to its first `prefix_cap`
/// entries, which requires `a_0 = 0`.
pub fn fast_power(a: &MaxPlusVec, k: u64, prefix_cap: Option<u64>) -> Result<MaxPlusVec> {
    if k == 0 {
        return Err(domain("power exponent must be >= 1"));
    }
    let vals = a.finite_values("fast_power")?;
    if vals.iter().any(|&v| v < 0) {
        return Err(domain("fast_power requires non-negative values"));
    }
    if prefix_cap.is_some() && vals[0] != 0 {
        return Err(domain("prefix truncation requires a_0 = 0"));
    }
    if let Some(cap) = prefix_cap {
        if cap == 0 {
            return Err(domain("prefix_cap must be >= 1"));
        }
    }
    let e_max = vals.iter().copied().max().unwrap_or(0) as u64;

    let truncate = |v: MaxPlusVec| -> Result<MaxPlusVec> {
        match prefix_cap {
            Some(cap) if (v.len() as u64) > cap => v.slice(0, cap as usize - 1),
            _ => Ok(v),
        }
    };

    let base = truncate(a.clone())?;
    let mut memo: HashMap<u64, MaxPlusVec> = HashMap::new();
    memo.insert(1, base);

    // Exponent chain: k, its halves, their halves, ... (at most two
    // distinct exponents per level).
    let mut needed = vec![k];
    {
        let mut frontier = vec![k];
        while let Some(&max) = frontier.iter().max() {
            if max <= 1 {
                break;
            }
            let mut next = Vec::new();
            for &e in &frontier {
                if e > 1 {
                    next.push(e / 2);
                    next.push(e - e / 2);
                }
            }
            next.sort_unstable();
            next.dedup();
            needed.extend(&next);
            frontier = next;
        }
    }
    needed.sort_unstable();
    needed.dedup();

    for &e in &needed {
        if e == 1 {
            continue;
        }
        let lo = memo[&(e / 2)].clone();
        let hi = memo[&(e - e / 2)].clone();
        let prod = fast_power_step(&PowerPair {
            hi,
            lo,
            base_e_max: e_max,
        })?;
        let prod = truncate(prod)?;
        memo.insert(e, prod);
    }
    Ok(memo.remove(&k).unwrap())
}

/// Largest `prefix_max - value` gap of a computed power; exposed for
/// the tests that track how far powers drift from monotone.
pub fn power_drop(v: &MaxPlusVec) -> Result<u64> {
    prefix_max_and_drop(v, "power_drop").map(|(_, d)| d as u64)
}
