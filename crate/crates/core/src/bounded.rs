//! Near-linear (max,+) convolution for value-bounded vectors via the
//! reduction to polynomial multiplication.
//!
//! Finite values in `[0, e_max]` are encoded as the coefficients
//! `(n+1)^value` of a polynomial, the polynomial product is taken with
//! an exact big-integer multiply (the coefficients are packed into one
//! integer at a fixed slot width), and each output value is recovered
//! as the base-(n+1) digit length of its product coefficient minus one.
//! No floating point is involved anywhere.

use crate::bigint::{self, MulBackend};
use crate::error::{domain, Error, Result};
use crate::maxplus::{ExtVal, MaxPlusVec};

/// A vector of exact fractions `numerator / denominator` with a shared
/// denominator, plus `±inf` sentinels. Input/output type of
/// [`approx_conv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledVec {
    nums: Vec<ExtVal>,
    den: u64,
}

impl ScaledVec {
    pub fn new(nums: Vec<ExtVal>, den: u64) -> Result<Self> {
        if nums.is_empty() {
            return Err(domain("scaled vectors must have length >= 1"));
        }
        if den == 0 {
            return Err(domain("denominator must be >= 1"));
        }
        Ok(ScaledVec { nums, den })
    }

    /// Integer-valued vector (denominator 1).
    pub fn from_maxplus(v: &MaxPlusVec) -> Self {
        ScaledVec {
            nums: v.as_slice().to_vec(),
            den: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    /// Always false; the constructor rejects empty vectors.
    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn numerators(&self) -> &[ExtVal] {
        &self.nums
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Exact value comparison against `num/den`, for tests and callers
    /// that need to inspect entries.
    pub fn value(&self, i: usize) -> ExtVal {
        self.nums[i]
    }
}

/// Packed-coefficient polynomial: coefficient `i` of a base-`(n+1)`
/// encoded operand lives in limbs `[i*slot_limbs, (i+1)*slot_limbs)`.
/// Input coefficients are either 0 (encoding `-inf`) or `(n+1)^v`.
pub(crate) struct PackedPoly {
    #[allow(dead_code)] // descriptive; recovery goes through the power table
    pub base: u64,
    pub slot_limbs: usize,
    pub len: usize,
    pub data: Vec<u64>,
}

impl PackedPoly {
    pub(crate) fn coefficient(&self, i: usize) -> &[u64] {
        let lo = i * self.slot_limbs;
        let hi = ((i + 1) * self.slot_limbs).min(self.data.len());
        if lo >= self.data.len() {
            &[]
        } else {
            &self.data[lo..hi]
        }
    }
}

/// Power table `base^0 .. base^max_exp` as limb vectors.
pub(crate) fn power_table(base: u64, max_exp: u64) -> Vec<Vec<u64>> {
    let mut table = Vec::with_capacity(max_exp as usize + 1);
    table.push(vec![1u64]);
    for _ in 0..max_exp {
        let prev = table.last().unwrap();
        let mut next = vec![0u64; prev.len() + 1];
        let mut carry: u128 = 0;
        for (i, &limb) in prev.iter().enumerate() {
            let cur = limb as u128 * base as u128 + carry;
            next[i] = cur as u64;
            carry = cur >> 64;
        }
        next[prev.len()] = carry as u64;
        while next.last() == Some(&0) {
            next.pop();
        }
        table.push(next);
    }
    table
}

fn validate_range(v: &MaxPlusVec, e_max: u64, what: &str) -> Result<()> {
    for x in v.iter() {
        if let ExtVal::Finite(f) = x {
            if *f < 0 || (*f as u64) > e_max {
                return Err(domain(format!(
                    "{what}: finite value {f} outside [0, {e_max}]"
                )));
            }
        }
    }
    Ok(())
}

fn pack(v: &MaxPlusVec, slot_limbs: usize, pows: &[Vec<u64>], base: u64) -> PackedPoly {
    let mut data = vec![0u64; v.len() * slot_limbs];
    for (i, x) in v.iter().enumerate() {
        if let ExtVal::Finite(f) = x {
            let p = &pows[*f as usize];
            data[i * slot_limbs..i * slot_limbs + p.len()].copy_from_slice(p);
        }
        // -inf and +inf slots stay zero; +inf is resolved by a separate pass.
    }
    PackedPoly {
        base,
        slot_limbs,
        len: v.len(),
        data,
    }
}

/// Base-`base` digit length of a limb number (0 for the zero value).
/// Uses binary search over the exact power table; equivalently, the
/// largest `v` with `base^v <= x` is `digit_len(x) - 1`.
pub(crate) fn digit_len(x: &[u64], pows: &[Vec<u64>]) -> u64 {
    if bigint::limb_is_zero(x) {
        return 0;
    }
    // Invariant: pows[lo] <= x, either hi == pows.len() or pows[hi] > x.
    let mut lo = 0usize;
    let mut hi = pows.len();
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bigint::limb_cmp(&pows[mid], x) != std::cmp::Ordering::Greater {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo as u64 + 1
}

/// Reference digit counter by repeated division; cross-checks
/// [`digit_len`] in tests.
#[cfg(test)]
pub(crate) fn digit_len_by_division(x: &[u64], base: u64) -> u64 {
    let mut v = x.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    let mut count = 0;
    while !bigint::limb_is_zero(&v) {
        bigint::limb_div_assign(&mut v, base);
        count += 1;
    }
    count
}

/// Marks output indices forced to `+inf`: some in-range pair has a
/// `+inf` operand whose partner is not `-inf`.
fn pos_inf_mask(a: &MaxPlusVec, b: &MaxPlusVec) -> Vec<bool> {
    let mut mask = vec![false; a.len() + b.len() - 1];
    let scan = |long: &MaxPlusVec, short: &MaxPlusVec, mask: &mut Vec<bool>| {
        for (j, x) in short.iter().enumerate() {
            if *x == ExtVal::PosInf {
                for (k, y) in long.iter().enumerate() {
                    if *y != ExtVal::NegInf {
                        mask[j + k] = true;
                    }
                }
            }
        }
    };
    scan(b, a, &mut mask);
    scan(a, b, &mut mask);
    mask
}

pub(crate) fn packed_product(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    e_max: u64,
    backend: MulBackend,
) -> Result<(PackedPoly, Vec<Vec<u64>>)> {
    let n = (a.len() + b.len()) as u64;
    let base = n + 1;
    // Power table up to 2*e_max + 1: products reach exponent 2*e_max and
    // the recovery search needs one sentinel above.
    let max_exp = 2u64
        .checked_mul(e_max)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("exponent bound"))?;
    if max_exp > 4_000_000 {
        return Err(domain("e_max too large for the packed encoding"));
    }
    let pows = power_table(base, max_exp);
    // Slot width: fits n * base^(2*e_max), the largest possible product
    // coefficient.
    let w_bits = bigint::limb_bits(&pows[(max_exp - 1) as usize]) + 64 - (n.leading_zeros() as u64)
        + 1;
    let slot_limbs = (w_bits as usize).div_ceil(64);

    let pa = pack(a, slot_limbs, &pows, base);
    let pb = pack(b, slot_limbs, &pows, base);
    let prod = bigint::big_mul(&pa.data, &pb.data, backend);
    Ok((
        PackedPoly {
            base,
            slot_limbs,
            len: a.len() + b.len() - 1,
            data: prod,
        },
        pows,
    ))
}

/// Exact (max,+) convolution of vectors with finite values in
/// `[0, e_max]` (infinities allowed), via polynomial multiplication.
pub fn bounded_range_conv(a: &MaxPlusVec, b: &MaxPlusVec, e_max: u64) -> Result<MaxPlusVec> {
    bounded_range_conv_with(a, b, e_max, MulBackend::Fast)
}

/// As [`bounded_range_conv`] with an explicit multiplication backend;
/// the schoolbook backend exists for differential testing.
pub fn bounded_range_conv_with(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    e_max: u64,
    backend: MulBackend,
) -> Result<MaxPlusVec> {
    validate_range(a, e_max, "bounded_range_conv")?;
    validate_range(b, e_max, "bounded_range_conv")?;

    let has_posinf =
        a.iter().any(|v| *v == ExtVal::PosInf) || b.iter().any(|v| *v == ExtVal::PosInf);
    let mask = if has_posinf {
        Some(pos_inf_mask(a, b))
    } else {
        None
    };

    let (prod, pows) = packed_product(a, b, e_max, backend)?;
    let mut out = Vec::with_capacity(prod.len);
    for i in 0..prod.len {
        if mask.as_ref().is_some_and(|m| m[i]) {
            out.push(ExtVal::PosInf);
            continue;
        }
        let digits = digit_len(prod.coefficient(i), &pows);
        if digits == 0 {
            out.push(ExtVal::NegInf);
        } else {
            out.push(ExtVal::Finite((digits - 1) as i64));
        }
    }
    MaxPlusVec::new(out)
}

/// Approximate (max,+) convolution for fractional inputs in
/// `[0, e_max]`: returns `c` with denominator 2 such that
/// `(a*b)_i - 1 < c_i <= (a*b)_i` at every index. Computed as half of
/// the exact convolution of the floored doubled inputs.
pub fn approx_conv(a: &ScaledVec, b: &ScaledVec, e_max: u64) -> Result<ScaledVec> {
    let floor2 = |v: &ScaledVec, what: &str| -> Result<MaxPlusVec> {
        if !v.den.is_power_of_two() || v.den > (1 << 20) {
            return Err(domain(format!(
                "{what}: denominator must be a power of two <= 2^20"
            )));
        }
        let mut out = Vec::with_capacity(v.len());
        for x in v.numerators() {
            match x {
                ExtVal::NegInf => out.push(ExtVal::NegInf),
                ExtVal::PosInf => out.push(ExtVal::PosInf),
                ExtVal::Finite(num) => {
                    if *num < 0 {
                        return Err(domain(format!("{what}: value below 0")));
                    }
                    if *num as u128 > e_max as u128 * v.den as u128 {
                        return Err(domain(format!("{what}: value above e_max = {e_max}")));
                    }
                    let doubled = num
                        .checked_mul(2)
                        .ok_or(Error::Overflow("numerator doubling"))?;
                    out.push(ExtVal::Finite(doubled.div_euclid(v.den as i64)));
                }
            }
        }
        MaxPlusVec::new(out)
    };
    let fa = floor2(a, "approx_conv lhs")?;
    let fb = floor2(b, "approx_conv rhs")?;
    let doubled_bound = 2u64
        .checked_mul(e_max)
        .ok_or(Error::Overflow("doubled range bound"))?;
    let c = bounded_range_conv(&fa, &fb, doubled_bound)?;
    ScaledVec::new(c.as_slice().to_vec(), 2)
}
