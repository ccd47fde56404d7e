//! Convolution of knapsack solution profiles.
//!
//! The greedy fractional relaxations of the two instances (and of their
//! union, under per-instance budgets) sandwich the integral optimum to
//! within one item value. The per-row suboptimality
//! `g_i(j) = c'(i+j) - a'(i) - b'(j)` of a capacity split is
//! non-increasing until the split the merged greedy itself uses and
//! non-decreasing after it, so the region `g_i <= 2 v_max` is an
//! interval found by two binary searches, and those intervals form an
//! uncertain solution of error `4 v_max` for the profile product.

use crate::error::{domain, Error, Result};
use crate::knapsack::{ratio_order, KnapsackInstance};
use crate::maxplus::MaxPlusVec;
use crate::prediction::{conv_via_prediction, UncertainSolution};

/// Exact rational with a positive denominator, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn int(v: i64) -> Rat {
        Rat { num: v, den: 1 }
    }

    pub fn new(num: i64, den: i64) -> Result<Rat> {
        if den <= 0 {
            return Err(domain("rational denominator must be positive"));
        }
        let g = gcd(num.unsigned_abs(), den as u64).max(1);
        Ok(Rat {
            num: num / g as i64,
            den: den / g as i64,
        })
    }

    pub fn plus(self, other: Rat) -> Result<Rat> {
        let num = (self.num as i128)
            .checked_mul(other.den as i128)
            .and_then(|x| x.checked_add(other.num as i128 * self.den as i128))
            .ok_or(Error::Overflow("rational addition"))?;
        let den = self.den as i128 * other.den as i128;
        let gg = gcd128(num.unsigned_abs(), den as u128).max(1);
        let num = num / gg as i128;
        let den = den / gg as i128;
        if num > i64::MAX as i128 || num < i64::MIN as i128 || den > i64::MAX as i128 {
            return Err(Error::Overflow("rational magnitude"));
        }
        Ok(Rat {
            num: num as i64,
            den: den as i64,
        })
    }

    /// value(self) compared with value(other).
    pub fn cmp_rat(self, other: Rat) -> std::cmp::Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greedy fractional optimum at every integer capacity.
#[derive(Debug, Clone)]
pub struct FracProfile {
    pub values: Vec<Rat>,
}

/// Fractional optimum of the budgeted union problem at every integer
/// capacity, with the per-instance size consumption `F_a`, `F_b`
/// (integers at integer capacities) and the first capacity at which a
/// given amount of the first instance has been consumed (`F_a^{-1}`,
/// `None` once the first instance's tape is exhausted).
#[derive(Debug, Clone)]
pub struct FracConvProfile {
    pub values: Vec<Rat>,
    pub consumed_a: Vec<u64>,
    pub consumed_b: Vec<u64>,
    pub first_capacity_for_a: Vec<Option<u64>>,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    len: u64,
    size: u64,
    value: u64,
    from_a: bool,
}

/// Items of both instances in descending value-per-size order (exact
/// comparisons; ties by smaller size, then first instance, then input
/// index), each capped by the remaining budget of its instance.
fn greedy_tape(a: &KnapsackInstance, b: &KnapsackInstance) -> Vec<Segment> {
    let mut order: Vec<(bool, usize, u64, u64)> = a
        .items
        .iter()
        .enumerate()
        .map(|(i, it)| (true, i, it.size, it.value))
        .chain(
            b.items
                .iter()
                .enumerate()
                .map(|(i, it)| (false, i, it.size, it.value)),
        )
        .collect();
    order.sort_by(|l, r| {
        ratio_order((l.2, l.3), (r.2, r.3))
            .then(r.0.cmp(&l.0)) // instance a before b on full ties
            .then(l.1.cmp(&r.1))
    });
    let mut budget_a = a.capacity;
    let mut budget_b = b.capacity;
    let mut tape = Vec::new();
    for (from_a, _, size, value) in order {
        let budget = if from_a { &mut budget_a } else { &mut budget_b };
        let len = size.min(*budget);
        if len == 0 {
            continue;
        }
        *budget -= len;
        tape.push(Segment {
            len,
            size,
            value,
            from_a,
        });
    }
    tape
}

fn require_zero_one(inst: &KnapsackInstance, what: &str) -> Result<()> {
    if !inst.is_zero_one() {
        return Err(domain(format!("{what} requires a 0/1 instance")));
    }
    Ok(())
}

/// Fractional knapsack optimum of a 0/1 instance at every integer
/// capacity `0..=t`, by the exact greedy.
pub fn greedy_fractional_profile(inst: &KnapsackInstance) -> Result<FracProfile> {
    require_zero_one(inst, "greedy_fractional_profile")?;
    let empty = KnapsackInstance::new(0, vec![])?;
    let conv = tape_profiles(inst, &empty, inst.capacity)?;
    Ok(FracProfile {
        values: conv.values,
    })
}

/// Fractional optimum of the budgeted union of two 0/1 instances at
/// every integer capacity `0..=t_a+t_b`, with consumption tracking.
pub fn fractional_conv_profile(
    a: &KnapsackInstance,
    b: &KnapsackInstance,
) -> Result<FracConvProfile> {
    require_zero_one(a, "fractional_conv_profile")?;
    require_zero_one(b, "fractional_conv_profile")?;
    let t = a
        .capacity
        .checked_add(b.capacity)
        .ok_or(Error::Overflow("combined capacity"))?;
    tape_profiles(a, b, t)
}

/// Value of `units` consumed from an item worth `value` per `size`.
fn segment_value(units: u64, value: u64, size: u64) -> Result<Rat> {
    let num = units
        .checked_mul(value)
        .and_then(|v| i64::try_from(v).ok())
        .ok_or(Error::Overflow("fractional segment value"))?;
    Rat::new(num, size as i64)
}

fn tape_profiles(
    a: &KnapsackInstance,
    b: &KnapsackInstance,
    t: u64,
) -> Result<FracConvProfile> {
    let tape = greedy_tape(a, b);
    let cap = usize::try_from(t).map_err(|_| Error::Overflow("capacity"))?;

    let mut values = Vec::with_capacity(cap + 1);
    let mut consumed_a = Vec::with_capacity(cap + 1);
    let mut consumed_b = Vec::with_capacity(cap + 1);

    let mut seg = 0usize;
    let mut seg_used = 0u64; // units consumed from tape[seg]
    let mut base = Rat::int(0); // value of fully consumed segments
    let mut ca = 0u64;
    let mut cb = 0u64;
    for x in 0..=cap {
        if x > 0 {
            // consume one more unit of tape, if any remains
            let mut left = 1u64;
            while left > 0 && seg < tape.len() {
                let s = &tape[seg];
                let take = left.min(s.len - seg_used);
                seg_used += take;
                left -= take;
                if s.from_a {
                    ca += take;
                } else {
                    cb += take;
                }
                if seg_used == s.len {
                    base = base.plus(segment_value(s.len, s.value, s.size)?)?;
                    seg += 1;
                    seg_used = 0;
                }
            }
        }
        let here = if seg < tape.len() && seg_used > 0 {
            let s = &tape[seg];
            base.plus(segment_value(seg_used, s.value, s.size)?)?
        } else {
            base
        };
        values.push(here);
        consumed_a.push(ca);
        consumed_b.push(cb);
    }

    // First capacity at which the first instance has consumed exactly i
    // units: sweep the tape once more.
    let ta = usize::try_from(a.capacity).map_err(|_| Error::Overflow("capacity"))?;
    let mut first_capacity_for_a = vec![None; ta + 1];
    first_capacity_for_a[0] = Some(0);
    let mut pos = 0u64;
    let mut ca = 0u64;
    for s in &tape {
        if s.from_a {
            for unit in 1..=s.len {
                let reached = ca + unit;
                if reached as usize <= ta {
                    first_capacity_for_a[reached as usize] = Some(pos + unit);
                }
            }
            ca += s.len;
        }
        pos += s.len;
    }
    Ok(FracConvProfile {
        values,
        consumed_a,
        consumed_b,
        first_capacity_for_a,
    })
}

/// The split-quality function `g_i(j) = c'(i+j) - a'(i) - b'(j)`
/// compared against `threshold`, exactly.
fn g_at_most(
    conv: &FracConvProfile,
    ap: &FracProfile,
    bp: &FracProfile,
    i: usize,
    j: usize,
    threshold: u64,
) -> Result<bool> {
    let c = conv.values[i + j];
    let av = ap.values[i];
    let bv = bp.values[j];
    // c - a - b <= th  <=>  c*ad*bd - a*cd*bd - b*cd*ad <= th*cd*ad*bd
    let cd = c.den as i128;
    let ad = av.den as i128;
    let bd = bv.den as i128;
    let lhs = (c.num as i128)
        .checked_mul(ad * bd)
        .and_then(|x| x.checked_sub((av.num as i128).checked_mul(cd * bd)?))
        .and_then(|x| x.checked_sub((bv.num as i128).checked_mul(cd * ad)?))
        .ok_or(Error::Overflow("split-quality comparison"))?;
    let rhs = (threshold as i128)
        .checked_mul(cd * ad * bd)
        .ok_or(Error::Overflow("split-quality comparison"))?;
    Ok(lhs <= rhs)
}

/// Builds the interval certificate for the product of two 0/1 solution
/// profiles; the certificate error is `4 * v_max`.
pub fn build_uncertain_intervals(
    a_inst: &KnapsackInstance,
    b_inst: &KnapsackInstance,
    a: &MaxPlusVec,
    b: &MaxPlusVec,
) -> Result<UncertainSolution> {
    let ta = a_inst.capacity as usize;
    let tb = b_inst.capacity as usize;
    if a.len() != ta + 1 || b.len() != tb + 1 {
        return Err(domain(
            "profiles must cover capacities 0..=t of their instances",
        ));
    }
    let ap = greedy_fractional_profile(a_inst)?;
    let bp = greedy_fractional_profile(b_inst)?;
    let conv = fractional_conv_profile(a_inst, b_inst)?;
    let v_max = a_inst.max_value().max(b_inst.max_value());
    let threshold = 2 * v_max;

    let mut intervals = Vec::with_capacity(ta + 1);
    for i in 0..=ta {
        let split = match conv.first_capacity_for_a[i] {
            Some(y) => ((y as usize).saturating_sub(i)).min(tb),
            None => tb,
        };
        // g_i is non-increasing on [0, split] and non-decreasing on
        // [split, tb], with g_i(split) = 0.
        debug_assert!(g_at_most(&conv, &ap, &bp, i, split, 0)?);
        let lo = {
            // first j in [0, split] with g <= threshold
            let mut lo = 0usize;
            let mut hi = split;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if g_at_most(&conv, &ap, &bp, i, mid, threshold)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            lo
        };
        let hi = {
            // last j in [split, tb] with g <= threshold
            let mut lo = split;
            let mut hi = tb;
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if g_at_most(&conv, &ap, &bp, i, mid, threshold)? {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        };
        intervals.push((lo as i64, hi as i64));
    }
    assert!(
        intervals
            .windows(2)
            .all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1),
        "interval certificate must be monotone"
    );
    Ok(UncertainSolution::new(intervals, 4 * v_max))
}

/// Exact (max,+) convolution of two knapsack solution profiles via the
/// interval certificate. The profiles may deviate from the exact
/// integral optima by at most one item value each.
pub fn knapsack_conv(
    a_inst: &KnapsackInstance,
    b_inst: &KnapsackInstance,
    a: &MaxPlusVec,
    b: &MaxPlusVec,
) -> Result<MaxPlusVec> {
    let u = build_uncertain_intervals(a_inst, b_inst, a, b)?;
    conv_via_prediction(a, b, &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::naive_conv;
    use crate::prediction::validate_uncertain;
    use crate::rng::SplitMix64;
    use crate::solvers::classic_dp;

    fn inst(t: u64, items: &[(u64, u64)]) -> KnapsackInstance {
        KnapsackInstance::zero_one(t, items).unwrap()
    }

    fn frac(values: &[(i64, i64)]) -> Vec<Rat> {
        values.iter().map(|&(n, d)| Rat::new(n, d).unwrap()).collect()
    }

    #[test]
    fn greedy_profile_examples() {
        let p = greedy_fractional_profile(&inst(4, &[(2, 4), (3, 3)])).unwrap();
        assert_eq!(p.values, frac(&[(0, 1), (2, 1), (4, 1), (5, 1), (6, 1)]));

        let p = greedy_fractional_profile(&inst(3, &[])).unwrap();
        assert_eq!(p.values, frac(&[(0, 1), (0, 1), (0, 1), (0, 1)]));

        let p = greedy_fractional_profile(&inst(3, &[(2, 4)])).unwrap();
        assert_eq!(p.values, frac(&[(0, 1), (2, 1), (4, 1), (4, 1)]));
    }

    #[test]
    fn conv_profile_example() {
        let a = inst(2, &[(2, 4)]);
        let b = inst(3, &[(3, 3)]);
        let c = fractional_conv_profile(&a, &b).unwrap();
        assert_eq!(
            c.values,
            frac(&[(0, 1), (2, 1), (4, 1), (5, 1), (6, 1), (7, 1)])
        );
        assert_eq!(c.consumed_a[5], 2);
        assert_eq!(c.consumed_b[5], 3);
        // One-sided instance: the union profile clamps at t_a.
        let empty = inst(0, &[]);
        let ap = fractional_conv_profile(&a, &empty).unwrap();
        assert_eq!(ap.values, frac(&[(0, 1), (2, 1), (4, 1)]));
        // Symmetry of the union profile.
        let swapped = fractional_conv_profile(&b, &a).unwrap();
        assert_eq!(swapped.values, c.values);
    }

    #[test]
    fn g_is_unimodal_with_minimum_at_greedy_split() {
        // Dense scan: g is non-increasing up to the greedy split and
        // non-decreasing after it.
        let mut rng = SplitMix64::new(0x61);
        for _ in 0..100 {
            let (a_inst, b_inst) = random_pair(&mut rng, 10, 14, 4);
            let ap = greedy_fractional_profile(&a_inst).unwrap();
            let bp = greedy_fractional_profile(&b_inst).unwrap();
            let conv = fractional_conv_profile(&a_inst, &b_inst).unwrap();
            let tb = b_inst.capacity as usize;
            for i in 0..=a_inst.capacity as usize {
                let split = match conv.first_capacity_for_a[i] {
                    Some(y) => ((y as usize).saturating_sub(i)).min(tb),
                    None => tb,
                };
                let g = |j: usize| {
                    let c = conv.values[i + j];
                    let a = ap.values[i];
                    let b = bp.values[j];
                    c.as_f64() - a.as_f64() - b.as_f64()
                };
                for j in 1..=split {
                    assert!(g(j) <= g(j - 1) + 1e-9, "left flank rises");
                }
                for j in split..tb {
                    assert!(g(j + 1) >= g(j) - 1e-9, "right flank falls");
                }
                assert!(g(split).abs() < 1e-9, "greedy split is exact");
            }
        }
    }

    #[test]
    fn fractional_dominance_over_integral() {
        let mut rng = SplitMix64::new(0x62);
        for _ in 0..200 {
            let (a_inst, _) = random_pair(&mut rng, 10, 16, 5);
            let ap = greedy_fractional_profile(&a_inst).unwrap();
            let exact = classic_dp(&a_inst).unwrap();
            let v_max = a_inst.max_value();
            for (i, &v) in exact.values().iter().enumerate() {
                let diff = ap.values[i].plus(Rat::int(-(v as i64))).unwrap();
                assert!(diff.cmp_rat(Rat::int(0)) != std::cmp::Ordering::Less);
                assert!(diff.cmp_rat(Rat::int(v_max as i64)) != std::cmp::Ordering::Greater);
            }
        }
    }

    #[test]
    fn union_fractional_within_two_items_of_product() {
        let mut rng = SplitMix64::new(0x63);
        for _ in 0..100 {
            let (a_inst, b_inst) = random_pair(&mut rng, 8, 12, 4);
            let conv = fractional_conv_profile(&a_inst, &b_inst).unwrap();
            let a = classic_dp(&a_inst).unwrap().to_maxplus().unwrap();
            let b = classic_dp(&b_inst).unwrap().to_maxplus().unwrap();
            let c = naive_conv(&a, &b).unwrap();
            let v_max = a_inst.max_value().max(b_inst.max_value());
            for z in 0..c.len() {
                let bound = Rat::int(c.get(z).finite().unwrap() + 2 * v_max as i64);
                assert!(conv.values[z].cmp_rat(bound) != std::cmp::Ordering::Greater);
            }
        }
    }

    fn random_pair(
        rng: &mut SplitMix64,
        max_items: u64,
        max_t: u64,
        max_v: u64,
    ) -> (KnapsackInstance, KnapsackInstance) {
        let mk = |rng: &mut SplitMix64| {
            let t = rng.next_below(max_t + 1);
            let n = rng.next_below(max_items + 1);
            let items: Vec<(u64, u64)> = (0..n)
                .map(|_| (rng.next_range(1, max_t.max(1)), rng.next_below(max_v + 1)))
                .collect();
            KnapsackInstance::zero_one(t, &items).unwrap()
        };
        (mk(rng), mk(rng))
    }

    #[test]
    fn certificate_examples() {
        let a_inst = inst(1, &[(1, 1)]);
        let b_inst = inst(1, &[(1, 1)]);
        let a = classic_dp(&a_inst).unwrap().to_maxplus().unwrap();
        let b = classic_dp(&b_inst).unwrap().to_maxplus().unwrap();
        let u = build_uncertain_intervals(&a_inst, &b_inst, &a, &b).unwrap();
        assert_eq!(u.e_max, 4);
        assert!(validate_uncertain(&a, &b, &u).unwrap());
        assert_eq!(knapsack_conv(&a_inst, &b_inst, &a, &b).unwrap(), fv(&[0, 1, 2]));

        // Zero-value items give a zero-error certificate.
        let za = inst(3, &[(1, 0), (2, 0)]);
        let zb = inst(2, &[(1, 0)]);
        let pa = classic_dp(&za).unwrap().to_maxplus().unwrap();
        let pb = classic_dp(&zb).unwrap().to_maxplus().unwrap();
        let u = build_uncertain_intervals(&za, &zb, &pa, &pb).unwrap();
        assert_eq!(u.e_max, 0);
        assert!(validate_uncertain(&pa, &pb, &u).unwrap());
    }

    fn fv(vals: &[i64]) -> MaxPlusVec {
        MaxPlusVec::from_finite(vals).unwrap()
    }

    #[test]
    fn empty_second_instance_is_identity() {
        let a_inst = inst(4, &[(2, 3), (1, 1)]);
        let b_inst = inst(0, &[]);
        let a = classic_dp(&a_inst).unwrap().to_maxplus().unwrap();
        let b = fv(&[0]);
        assert_eq!(knapsack_conv(&a_inst, &b_inst, &a, &b).unwrap(), a);
    }

    #[test]
    fn random_instances_validate_and_match_oracle() {
        let mut rng = SplitMix64::new(0xC0FFEE);
        for round in 0..400 {
            let (a_inst, b_inst) = random_pair(&mut rng, 12, 20, 3);
            let a = classic_dp(&a_inst).unwrap().to_maxplus().unwrap();
            let b = classic_dp(&b_inst).unwrap().to_maxplus().unwrap();
            let u = build_uncertain_intervals(&a_inst, &b_inst, &a, &b).unwrap();
            assert!(
                validate_uncertain(&a, &b, &u).unwrap(),
                "certificate invalid in round {round}"
            );
            let got = knapsack_conv(&a_inst, &b_inst, &a, &b).unwrap();
            assert_eq!(got, naive_conv(&a, &b).unwrap(), "round {round}");
        }
    }
}
