//! Knapsack solvers: the classic dynamic program (the deterministic
//! oracle for everything else), the randomized bucketing solvers for
//! value- and size-bounded instances, the unbounded solver via vector
//! powering, and the strongly polynomial multiplicity solvers.

use crate::bounded::bounded_range_conv;
use crate::error::{domain, Error, Result};
use crate::knapsack::{ratio_order, Item, KnapsackInstance, Multiplicity, SolutionProfile};
use crate::knapsack_conv::knapsack_conv;
use crate::maxplus::{ExtVal, MaxPlusVec};
use crate::power::fast_power;
use crate::rng::SplitMix64;

/// Knobs for the randomized solvers. `c` is the scatter/repetition
/// constant (defaults to a logarithm of the capacity, or to the
/// deviation constant of the size-bounded solver); `repetitions`
/// defaults per solver. All randomness is derived from `seed`.
#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub c: Option<u64>,
    pub repetitions: Option<u64>,
    pub seed: u64,
}

impl SolverConfig {
    pub fn seeded(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..Default::default()
        }
    }

    fn effective_c(&self, t: u64) -> u64 {
        self.c.unwrap_or_else(|| {
            let ceil_log = (t + 2).next_power_of_two().trailing_zeros() as u64;
            4.max(ceil_log + 2)
        })
    }

    /// Deviation constant of the size-bounded solver: 40 * ln(n + 2),
    /// unless overridden.
    fn window_c(&self, n: usize) -> u64 {
        self.c
            .unwrap_or_else(|| (40.0 * ((n as f64) + 2.0).ln()).ceil() as u64)
    }

    fn child(&self, salts: &[u64]) -> SolverConfig {
        let mut rng = SplitMix64::derive(self.seed, salts);
        SolverConfig {
            c: self.c,
            repetitions: self.repetitions,
            seed: rng.next_u64(),
        }
    }
}

const SALT_BOUNDED_SOLUTION: u64 = 1;
const SALT_BOUNDED_RANGE: u64 = 2;
const SALT_VIA_CONV: u64 = 3;
const SALT_SMALL_SIZES: u64 = 4;

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow("value sum"))
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("value product"))
}

// ---------------------------------------------------------------------------
// Classic dynamic program
// ---------------------------------------------------------------------------

/// Exact per-capacity optimum by dynamic programming. Handles 0/1,
/// bounded and unbounded multiplicities; bounded multiplicities use a
/// monotone-window maximum so each item costs `O(t)`.
pub fn classic_dp(inst: &KnapsackInstance) -> Result<SolutionProfile> {
    let t = usize::try_from(inst.capacity).map_err(|_| Error::Overflow("capacity"))?;
    let mut dp = vec![0u64; t + 1];
    for item in &inst.items {
        let s = item.size as usize;
        if s > t {
            continue;
        }
        match item.mult {
            Multiplicity::Bounded(1) => {
                for j in (s..=t).rev() {
                    let cand = add(dp[j - s], item.value)?;
                    dp[j] = dp[j].max(cand);
                }
            }
            Multiplicity::Unbounded => {
                for j in s..=t {
                    let cand = add(dp[j - s], item.value)?;
                    dp[j] = dp[j].max(cand);
                }
            }
            Multiplicity::Bounded(m) => {
                if m as u128 >= (t / s) as u128 {
                    for j in s..=t {
                        let cand = add(dp[j - s], item.value)?;
                        dp[j] = dp[j].max(cand);
                    }
                } else {
                    dp = bounded_copies_pass(&dp, s, item.value, m)?;
                }
            }
        }
    }
    SolutionProfile::new(dp)
}

/// One multiplicity-`m` item applied to the profile with a sliding
/// monotone deque per size residue: keys are `dp[q*s+r] - q*v`, and the
/// window covers the last `m+1` positions of the residue class.
fn bounded_copies_pass(dp: &[u64], s: usize, v: u64, m: u64) -> Result<Vec<u64>> {
    let t = dp.len() - 1;
    let mut out = dp.to_vec();
    for r in 0..s.min(t + 1) {
        let mut deque: std::collections::VecDeque<(usize, i128)> = Default::default();
        let mut q = 0usize;
        loop {
            let j = r + q * s;
            if j > t {
                break;
            }
            let key = dp[j] as i128 - q as i128 * v as i128;
            while deque.back().is_some_and(|&(_, k)| k <= key) {
                deque.pop_back();
            }
            deque.push_back((q, key));
            while deque.front().is_some_and(|&(qf, _)| q - qf > m as usize) {
                deque.pop_front();
            }
            let (_, best) = *deque.front().unwrap();
            let value = best + q as i128 * v as i128;
            debug_assert!(value >= 0);
            if value as u128 > u64::MAX as u128 {
                return Err(Error::Overflow("value sum"));
            }
            out[j] = out[j].max(value as u64);
            q += 1;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Randomized 0/1 solvers for value-bounded items
// ---------------------------------------------------------------------------

/// Best-single-item profile of a list: at capacity `j`, the largest
/// value among items of size at most `j` (0 when none fits).
fn single_item_profile(t: usize, items: &[(u64, u64)]) -> Vec<u64> {
    let mut prof = vec![0u64; t + 1];
    for &(s, v) in items {
        if (s as usize) <= t {
            prof[s as usize] = prof[s as usize].max(v);
        }
    }
    for j in 1..=t {
        prof[j] = prof[j].max(prof[j - 1]);
    }
    prof
}

fn profile_to_maxplus(values: &[u64]) -> Result<MaxPlusVec> {
    MaxPlusVec::new(
        values
            .iter()
            .map(|&v| {
                i64::try_from(v)
                    .map(ExtVal::Finite)
                    .map_err(|_| Error::Overflow("profile value"))
            })
            .collect::<Result<_>>()?,
    )
}

/// Balanced fold of non-negative finite profiles with the bounded-range
/// kernel, truncating every partial product to `cap + 1` entries.
fn fold_bounded(mut profiles: Vec<MaxPlusVec>, cap: usize) -> Result<MaxPlusVec> {
    if profiles.is_empty() {
        return MaxPlusVec::from_finite(&vec![0; cap + 1]);
    }
    while profiles.len() > 1 {
        let mut next = Vec::with_capacity(profiles.len().div_ceil(2));
        let mut iter = profiles.into_iter();
        while let Some(first) = iter.next() {
            match iter.next() {
                None => next.push(first),
                Some(second) => {
                    let bound = first
                        .max_finite()
                        .unwrap_or(0)
                        .max(second.max_finite().unwrap_or(0))
                        .max(0) as u64;
                    let mut prod = bounded_range_conv(&first, &second, bound)?;
                    if prod.len() > cap + 1 {
                        prod = prod.slice(0, cap)?;
                    }
                    next.push(prod);
                }
            }
        }
        profiles = next;
    }
    Ok(profiles.pop().unwrap())
}

/// Monte-Carlo 0/1 profile, intended for optima of at most `C` items:
/// `C` repetitions scatter the items into `C^2` lists, fold the
/// per-list best-single-item profiles, and keep the elementwise best.
pub fn bounded_solution_knapsack(
    t: u64,
    items: &[(u64, u64)],
    cfg: &SolverConfig,
) -> Result<SolutionProfile> {
    let cap = usize::try_from(t).map_err(|_| Error::Overflow("capacity"))?;
    if items.len() <= 1 {
        return SolutionProfile::new(single_item_profile(cap, items));
    }
    let c = cfg.effective_c(t);
    let reps = cfg.repetitions.unwrap_or(c);
    let lists_n = mul(c, c)? as usize;
    let mut best = vec![0u64; cap + 1];
    for rep in 0..reps {
        let mut rng = SplitMix64::derive(cfg.seed, &[SALT_BOUNDED_SOLUTION, rep]);
        let mut lists: Vec<Vec<(u64, u64)>> = vec![Vec::new(); lists_n];
        for &it in items {
            lists[rng.next_below(lists_n as u64) as usize].push(it);
        }
        let profiles: Vec<MaxPlusVec> = lists
            .iter()
            .filter(|l| !l.is_empty())
            .map(|l| profile_to_maxplus(&single_item_profile(cap, l)))
            .collect::<Result<_>>()?;
        let folded = fold_bounded(profiles, cap)?;
        for (j, v) in folded.iter().enumerate() {
            let v = v.finite().unwrap_or(0).max(0) as u64;
            if v > best[j] {
                best[j] = v;
            }
        }
    }
    // Profiles of feasible packings are non-decreasing; the elementwise
    // max of truncations keeps that.
    SolutionProfile::new(best)
}

/// A merge-tree node: the item set a profile describes, plus the
/// profile itself (needed so merges can rebuild fractional certificates).
struct Part {
    items: Vec<(u64, u64)>,
    profile: SolutionProfile,
}

/// Balanced merge of parts with the certificate-driven profile
/// convolution, truncating to capacity `t`.
fn merge_parts(parts: Vec<Part>, t: u64) -> Result<Part> {
    debug_assert!(!parts.is_empty());
    let mut layer = parts;
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        let mut iter = layer.into_iter();
        while let Some(first) = iter.next() {
            match iter.next() {
                None => next.push(first),
                Some(second) => {
                    let a_inst = KnapsackInstance::zero_one(first.profile.capacity(), &first.items)?;
                    let b_inst =
                        KnapsackInstance::zero_one(second.profile.capacity(), &second.items)?;
                    let prod = knapsack_conv(
                        &a_inst,
                        &b_inst,
                        &first.profile.to_maxplus()?,
                        &second.profile.to_maxplus()?,
                    )?;
                    let merged_cap = (first.profile.capacity() + second.profile.capacity()).min(t);
                    let profile = SolutionProfile::from_maxplus(&prod)?.resized(merged_cap);
                    let mut items = first.items;
                    items.extend(second.items);
                    next.push(Part { items, profile });
                }
            }
        }
        layer = next;
    }
    Ok(layer.pop().unwrap())
}

/// Monte-Carlo 0/1 profile for items with sizes in `[r1, r2]`,
/// `r2 <= 2 r1`: scatter into `ceil(t / r1)` lists, solve each list for
/// bounded-cardinality optima, and merge with profile convolutions.
pub fn bounded_range_knapsack(
    t: u64,
    items: &[(u64, u64)],
    r1: u64,
    r2: u64,
    cfg: &SolverConfig,
) -> Result<SolutionProfile> {
    if r1 == 0 || r2 < r1 || r2 > 2 * r1 {
        return Err(domain("size range must satisfy 1 <= r1 <= r2 <= 2*r1"));
    }
    if items.iter().any(|&(s, _)| s < r1 || s > r2) {
        return Err(domain("all item sizes must lie in [r1, r2]"));
    }
    let cap = usize::try_from(t).map_err(|_| Error::Overflow("capacity"))?;
    let c = cfg.effective_c(t);
    let reps = cfg.repetitions.unwrap_or(c);
    let lists_n = (t.div_ceil(r1)).max(1) as usize;
    let inner_cap = t.min(mul(c, r2)?);
    let mut best = vec![0u64; cap + 1];
    for rep in 0..reps {
        let mut rng = SplitMix64::derive(cfg.seed, &[SALT_BOUNDED_RANGE, rep]);
        let mut lists: Vec<Vec<(u64, u64)>> = vec![Vec::new(); lists_n];
        for &it in items {
            lists[rng.next_below(lists_n as u64) as usize].push(it);
        }
        let mut parts = Vec::new();
        for (li, list) in lists.into_iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let child = cfg.child(&[SALT_BOUNDED_RANGE, rep, li as u64]);
            let profile = bounded_solution_knapsack(inner_cap, &list, &child)?;
            parts.push(Part {
                items: list,
                profile,
            });
        }
        if parts.is_empty() {
            continue;
        }
        let merged = merge_parts(parts, t)?;
        let prof = merged.profile.resized(t);
        for (j, &v) in prof.values().iter().enumerate() {
            if v > best[j] {
                best[j] = v;
            }
        }
    }
    SolutionProfile::new(best)
}

/// Monte-Carlo 0/1 solver for value-bounded items: dyadic size buckets,
/// each solved by [`bounded_range_knapsack`], merged with profile
/// convolutions. Equals the classic dynamic program with high
/// probability; never exceeds it.
pub fn knapsack_via_conv(t: u64, items: &[(u64, u64)], cfg: &SolverConfig) -> Result<SolutionProfile> {
    for &(s, _) in items {
        if s == 0 {
            return Err(domain("item sizes must be >= 1"));
        }
    }
    let mut buckets: std::collections::BTreeMap<u32, Vec<(u64, u64)>> = Default::default();
    for &(s, v) in items {
        if s <= t {
            buckets.entry(s.ilog2()).or_default().push((s, v));
        }
    }
    let mut parts = Vec::new();
    for (key, bucket) in buckets {
        let r1 = 1u64 << key;
        let r2 = (1u64 << (key + 1)) - 1;
        let child = cfg.child(&[SALT_VIA_CONV, key as u64]);
        let profile = bounded_range_knapsack(t, &bucket, r1, r2, &child)?;
        parts.push(Part {
            items: bucket,
            profile,
        });
    }
    if parts.is_empty() {
        return Ok(SolutionProfile::zeros(t));
    }
    Ok(merge_parts(parts, t)?.profile.resized(t))
}

// ---------------------------------------------------------------------------
// Unbounded knapsack via vector powering
// ---------------------------------------------------------------------------

/// Unbounded knapsack profile via the `t`-th (max,+) power of the
/// best-single-item-per-size vector, truncated to `t + 1` entries.
pub fn unbounded_via_power(t: u64, items: &[(u64, u64)]) -> Result<SolutionProfile> {
    if t == 0 {
        return Ok(SolutionProfile::zeros(0));
    }
    let cap = usize::try_from(t).map_err(|_| Error::Overflow("capacity"))?;
    let mut base = vec![0i64; cap + 1];
    for &(s, v) in items {
        if s == 0 {
            return Err(domain("item sizes must be >= 1"));
        }
        if (s as usize) <= cap {
            let v = i64::try_from(v).map_err(|_| Error::Overflow("item value"))?;
            base[s as usize] = base[s as usize].max(v);
        }
    }
    let a = MaxPlusVec::from_finite(&base)?;
    let powered = fast_power(&a, t, Some(t + 1))?;
    SolutionProfile::from_maxplus(&powered).map(|p| p.resized(t))
}

// ---------------------------------------------------------------------------
// Randomized solver for size-bounded items
// ---------------------------------------------------------------------------

/// A solution profile restricted to a capacity window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedProfile {
    pub offset: u64,
    pub values: Vec<u64>,
}

impl WindowedProfile {
    pub fn end(&self) -> u64 {
        self.offset + (self.values.len() as u64 - 1)
    }

    fn value_at(&self, capacity: u64) -> Option<u64> {
        if capacity < self.offset || capacity > self.end() {
            None
        } else {
            Some(self.values[(capacity - self.offset) as usize])
        }
    }
}

fn isqrt(v: u64) -> u64 {
    if v == 0 {
        return 0;
    }
    let mut x = (v as f64).sqrt() as u64;
    while (x + 1).saturating_mul(x + 1) <= v {
        x += 1;
    }
    while x.saturating_mul(x) > v {
        x -= 1;
    }
    x
}

/// Windowed (max,+) merge: the result covers `[lo, hi]`, taking maxima
/// over all in-window splits.
fn merge_windows(w1: &WindowedProfile, w2: &WindowedProfile, lo: u64, hi: u64) -> WindowedProfile {
    debug_assert!(lo >= w1.offset + w2.offset && hi <= w1.end() + w2.end() && lo <= hi);
    let mut values = vec![0u64; (hi - lo + 1) as usize];
    for (i, &v1) in w1.values.iter().enumerate() {
        let z1 = w1.offset + i as u64;
        for (j, &v2) in w2.values.iter().enumerate() {
            let z = z1 + w2.offset + j as u64;
            if z < lo || z > hi {
                continue;
            }
            let sum = v1.saturating_add(v2);
            let slot = &mut values[(z - lo) as usize];
            if sum > *slot {
                *slot = sum;
            }
        }
    }
    WindowedProfile {
        offset: lo,
        values,
    }
}

/// Randomized solver for 0/1 items with small sizes: scatter into
/// `ceil(t / s_max)` buckets, solve each bucket up to capacity
/// `(C + 2) * s_max`, then merge pairwise keeping only a deviation
/// window around each group's expected solution size. Returns the
/// optimum at capacity `t` (correct w.h.p.) plus the final window.
pub fn knapsack_small_sizes(
    t: u64,
    items: &[(u64, u64)],
    cfg: &SolverConfig,
) -> Result<(u64, WindowedProfile)> {
    if items.iter().any(|&(s, _)| s == 0) {
        return Err(domain("item sizes must be >= 1"));
    }
    let total_size: u128 = items.iter().map(|&(s, _)| s as u128).sum();
    if total_size <= t as u128 {
        let mut sum = 0u64;
        for &(_, v) in items {
            sum = add(sum, v)?;
        }
        return Ok((
            sum,
            WindowedProfile {
                offset: total_size as u64,
                values: vec![sum],
            },
        ));
    }

    let s_max = items.iter().map(|&(s, _)| s).max().unwrap_or(1);
    let bucket_count = t.div_ceil(s_max).max(1);
    let c = cfg.window_c(items.len());
    let reps = cfg.repetitions.unwrap_or(2);
    let bucket_cap = t.min(mul(add(c, 2)?, s_max)?);

    let mut best: Option<(u64, WindowedProfile)> = None;
    for rep in 0..reps {
        let mut rng = SplitMix64::derive(cfg.seed, &[SALT_SMALL_SIZES, rep]);
        let mut buckets: Vec<Vec<(u64, u64)>> = vec![Vec::new(); bucket_count as usize];
        for &it in items {
            buckets[rng.next_below(bucket_count) as usize].push(it);
        }
        // (bucket span, window) per merge group.
        let mut groups: Vec<(u64, WindowedProfile)> = Vec::with_capacity(buckets.len());
        for bucket in &buckets {
            let inst = KnapsackInstance::zero_one(bucket_cap, bucket)?;
            let prof = classic_dp(&inst)?;
            groups.push((
                1,
                WindowedProfile {
                    offset: 0,
                    values: prof.values().to_vec(),
                },
            ));
        }
        while groups.len() > 1 {
            let mut next = Vec::with_capacity(groups.len().div_ceil(2));
            let mut iter = groups.into_iter();
            while let Some((b1, w1)) = iter.next() {
                match iter.next() {
                    None => next.push((b1, w1)),
                    Some((b2, w2)) => {
                        let span = b1 + b2;
                        let mu = ((t as u128 * span as u128) / bucket_count as u128) as u64;
                        let dev = mul(c, isqrt(s_max.saturating_mul(mu)))?.saturating_add(s_max);
                        let lo_ach = w1.offset + w2.offset;
                        let hi_ach = w1.end() + w2.end();
                        let lo = mu.saturating_sub(dev).clamp(lo_ach, hi_ach);
                        let hi = (mu.saturating_add(dev)).min(t.max(lo_ach)).clamp(lo, hi_ach);
                        next.push((span, merge_windows(&w1, &w2, lo, hi)));
                    }
                }
            }
            groups = next;
        }
        let (_, window) = groups.pop().unwrap();
        let value = window.value_at(window.end().min(t)).unwrap_or(0);
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, window));
        }
    }
    Ok(best.unwrap())
}

// ---------------------------------------------------------------------------
// Strongly polynomial multiplicity solvers
// ---------------------------------------------------------------------------

fn best_ratio_index(items: &[(u64, u64)]) -> usize {
    let mut best = 0usize;
    for i in 1..items.len() {
        if ratio_order(items[i], items[best]) == std::cmp::Ordering::Less {
            best = i;
        }
    }
    best
}

/// Per-size champions (best value per distinct size), sizes <= t.
fn size_champions(t: u64, items: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut best: std::collections::BTreeMap<u64, u64> = Default::default();
    for &(s, v) in items {
        if s <= t {
            let e = best.entry(s).or_insert(0);
            *e = (*e).max(v);
        }
    }
    best.into_iter().collect()
}

fn residual_small_sizes(
    t: u64,
    expanded: Vec<(u64, u64)>,
    cfg: &SolverConfig,
) -> Result<u64> {
    Ok(knapsack_small_sizes(t, &expanded, cfg)?.0)
}

/// Optimum for unbounded multiplicities: commit
/// `max(0, floor((t - s_max^2) / s_H))` copies of the best-ratio item,
/// then solve the residual capacity (at most `s_max^2 + s_max`) with
/// the classic program or the size-bounded solver.
pub fn knapsack_infinite_mult(t: u64, items: &[(u64, u64)], cfg: &SolverConfig) -> Result<u64> {
    if items.is_empty() {
        return Ok(0);
    }
    if items.iter().any(|&(s, _)| s == 0) {
        return Err(domain("item sizes must be >= 1"));
    }
    let s_max = items.iter().map(|&(s, _)| s).max().unwrap();
    let h = best_ratio_index(items);
    let (s_h, v_h) = items[h];
    let s_max_sq = mul(s_max, s_max)?;
    let cnt = if t > s_max_sq { (t - s_max_sq) / s_h } else { 0 };
    let t_residual = t - mul(cnt, s_h)?;

    let residual = if items.len() as u64 <= s_max {
        let inst = KnapsackInstance::new(
            t_residual,
            items
                .iter()
                .map(|&(size, value)| Item {
                    size,
                    value,
                    mult: Multiplicity::Unbounded,
                })
                .collect(),
        )?;
        classic_dp(&inst)?.optimum()
    } else {
        let mut expanded = Vec::new();
        for (s, v) in size_champions(t_residual, items) {
            for _ in 0..t_residual / s {
                expanded.push((s, v));
            }
        }
        residual_small_sizes(t_residual, expanded, cfg)?
    };
    add(mul(cnt, v_h)?, residual)
}

/// Optimum for given finite multiplicities: a greedy pseudo-solution
/// for capacity `t - s_max^2` fixes all but `s_max` copies of each
/// item it fills, and the reduced instance is solved exactly.
pub fn knapsack_given_mult(t: u64, items: &[(u64, u64, u64)], cfg: &SolverConfig) -> Result<u64> {
    for &(s, _, m) in items {
        if s == 0 {
            return Err(domain("item sizes must be >= 1"));
        }
        if m == 0 {
            return Err(domain("item multiplicities must be >= 1"));
        }
    }
    if items.is_empty() {
        return Ok(0);
    }
    let mut sorted: Vec<(u64, u64, u64)> = items.to_vec();
    sorted.sort_by(|&(s1, v1, _), &(s2, v2, _)| ratio_order((s1, v1), (s2, v2)));

    let s_max = sorted.iter().map(|&(s, _, _)| s).max().unwrap();
    let s_max_sq = mul(s_max, s_max)?;
    let mut budget = t.saturating_sub(s_max_sq);
    let mut greedy = vec![0u64; sorted.len()];
    let mut broke = false;
    for (i, &(s, _, m)) in sorted.iter().enumerate() {
        let copies = m.min(budget / s);
        greedy[i] = copies;
        budget -= mul(copies, s)?;
        if copies != m {
            broke = true;
            break;
        }
    }
    if !broke {
        // Everything fits into the reduced knapsack, so it fits into t.
        let mut sum = 0u64;
        for &(_, v, m) in &sorted {
            sum = add(sum, mul(m, v)?)?;
        }
        return Ok(sum);
    }

    let mut surplus = 0u64;
    let mut t_rem = t;
    let mut reduced: Vec<(u64, u64, u64)> = Vec::with_capacity(sorted.len());
    for (i, &(s, v, m)) in sorted.iter().enumerate() {
        let commit = greedy[i].saturating_sub(s_max);
        surplus = add(surplus, mul(commit, v)?)?;
        t_rem = t_rem
            .checked_sub(mul(commit, s)?)
            .ok_or_else(|| domain("committed copies exceed capacity"))?;
        reduced.push((s, v, m - commit));
    }

    let residual = if reduced.len() as u64 <= s_max {
        let inst = KnapsackInstance::new(
            t_rem,
            reduced
                .iter()
                .map(|&(size, value, m)| Item {
                    size,
                    value,
                    mult: Multiplicity::Bounded(m),
                })
                .collect(),
        )?;
        classic_dp(&inst)?.optimum()
    } else {
        let mut expanded = Vec::new();
        for &(s, v, m) in &reduced {
            if s > t_rem {
                continue;
            }
            for _ in 0..m.min(t_rem / s) {
                expanded.push((s, v));
            }
        }
        residual_small_sizes(t_rem, expanded, cfg)?
    };
    add(surplus, residual)
}

/// How unbounded instances are expanded into 0/1 instances for the
/// size-bounded solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    /// Copies grouped in powers of two; preserves the optimum with
    /// `O(log t)` items per size.
    Binary,
    /// One 0/1 item per copy.
    Literal,
}

/// Unbounded knapsack optimum via the size-bounded solver: keep the
/// best item of each size, expand its `floor(t / s)` available copies
/// into 0/1 items, and solve.
pub fn unbounded_small_sizes(t: u64, items: &[(u64, u64)], cfg: &SolverConfig) -> Result<u64> {
    unbounded_small_sizes_with(t, items, cfg, Expansion::Binary)
}

/// As [`unbounded_small_sizes`] with an explicit expansion strategy;
/// the literal expansion exists for differential testing.
pub fn unbounded_small_sizes_with(
    t: u64,
    items: &[(u64, u64)],
    cfg: &SolverConfig,
    expansion: Expansion,
) -> Result<u64> {
    if items.iter().any(|&(s, _)| s == 0) {
        return Err(domain("item sizes must be >= 1"));
    }
    let mut expanded = Vec::new();
    for (s, v) in size_champions(t, items) {
        let copies = t / s;
        match expansion {
            Expansion::Literal => {
                for _ in 0..copies {
                    expanded.push((s, v));
                }
            }
            Expansion::Binary => {
                let mut remaining = copies;
                let mut group = 1u64;
                while remaining > 0 {
                    let take = group.min(remaining);
                    expanded.push((mul(take, s)?, mul(take, v)?));
                    remaining -= take;
                    group = group.saturating_mul(2);
                }
            }
        }
    }
    residual_small_sizes(t, expanded, cfg)
}
