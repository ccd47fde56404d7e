//! Exact convolution under the small-distortion promise: every cross
//! sum `a_i + b_j` is within `e_max` of the true product entry
//! `(a*b)_(i+j)`.
//!
//! An affine transform (constant shifts plus a linear ramp applied to
//! both operands) compresses such vectors into a value window of width
//! `O(e_max)`, where the bounded-range kernel applies. The ramp step is
//! fractional; it is fused with the doubling of the approximate kernel
//! into exact integer floor divisions so no rounding drift can occur.

use crate::bounded::bounded_range_conv;
use crate::error::{domain, Error, Result};
use crate::maxplus::{naive_conv, ExtVal, MaxPlusVec};

/// Quadratic validator for the distortion promise, via `naive_conv`.
pub fn check_distortion(a: &MaxPlusVec, b: &MaxPlusVec, e_max: u64) -> Result<bool> {
    let av = a.finite_values("check_distortion")?;
    let bv = b.finite_values("check_distortion")?;
    let c = naive_conv(a, b)?;
    for (i, &x) in av.iter().enumerate() {
        for (j, &y) in bv.iter().enumerate() {
            let prod = c.get(i + j).finite().expect("finite product");
            if prod as i128 - x as i128 - y as i128 > e_max as i128 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[inline]
fn floor_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    num.div_euclid(den)
}

#[inline]
fn ceil_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    -((-num).div_euclid(den))
}

fn to_i64(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

/// Exact `a * b` for equal-length finite integer vectors satisfying the
/// distortion promise at `e_max`. Results are unspecified if the
/// promise does not hold (a validator exists for tests).
pub fn distorted_square_conv(a: &MaxPlusVec, b: &MaxPlusVec, e_max: u64) -> Result<MaxPlusVec> {
    if a.len() != b.len() {
        return Err(domain("distorted_square_conv requires |a| = |b|"));
    }
    let av = a.finite_values("distorted_square_conv")?;
    let bv = b.finite_values("distorted_square_conv")?;
    let n = av.len();

    if n == 1 {
        let sum = av[0]
            .checked_add(bv[0])
            .ok_or(Error::Overflow("distorted 1x1 product"))?;
        return MaxPlusVec::from_finite(&[sum]);
    }
    if e_max == 0 {
        // Zero distortion: every split is optimal, so any valid pair
        // realizes each output entry.
        let mut out = Vec::with_capacity(2 * n - 1);
        for z in 0..2 * n - 1 {
            let i = z.saturating_sub(n - 1);
            let sum = av[i]
                .checked_add(bv[z - i])
                .ok_or(Error::Overflow("distorted zero-error product"))?;
            out.push(sum);
        }
        return MaxPlusVec::from_finite(&out);
    }

    let e = e_max as i128;
    let a0 = av[0] as i128;
    let a_last = av[n - 1] as i128;
    let b_last = bv[n - 1] as i128;
    let ramp_num = a0 - a_last;
    let den = (n - 1) as i128;

    // Doubled transformed values: 2*(x + shift + i*ramp_num/den), with
    // the fractional ramp handled by one exact floor division.
    let shift_a = 3 * e - a0;
    let shift_b = 3 * e + a_last - a0 - b_last;
    let transform = |vals: &[i64], shift: i128| -> Vec<i128> {
        vals.iter()
            .enumerate()
            .map(|(i, &x)| 2 * (x as i128 + shift) + floor_div(2 * i as i128 * ramp_num, den))
            .collect()
    };
    let ta = transform(&av, shift_a);
    let tb = transform(&bv, shift_b);

    // Under the distortion promise the transform lands in
    // a' in [e, 5e] and b' in [0, 6e]; check in doubled units.
    debug_assert!(
        ta.iter().all(|&v| (2 * e..=10 * e).contains(&v)),
        "transformed lhs outside [e_max, 5*e_max]"
    );
    debug_assert!(
        tb.iter().all(|&v| (0..=12 * e).contains(&v)),
        "transformed rhs outside [0, 6*e_max]"
    );

    // Normalize to the actual ranges; the subtracted minima are ordinary
    // constant shifts and are restored exactly during recovery. This
    // keeps the packed encoding width proportional to the real spread.
    let min_a = *ta.iter().min().unwrap();
    let min_b = *tb.iter().min().unwrap();
    let max_spread = (ta.iter().max().unwrap() - min_a).max(tb.iter().max().unwrap() - min_b);

    let na = MaxPlusVec::from_finite(
        &ta.iter()
            .map(|&v| to_i64(v - min_a, "transformed value"))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let nb = MaxPlusVec::from_finite(
        &tb.iter()
            .map(|&v| to_i64(v - min_b, "transformed value"))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let approx2 = bounded_range_conv(&na, &nb, max_spread as u64)?;

    // Recovery: c_z = ceil(approx_z - K - z*ramp_num/den) where approx_z
    // is exact to within [0, 1) below the transformed product. All terms
    // share the denominator 2*den.
    let k_shift = 6 * e + a_last - 2 * a0 - b_last;
    let mut out = Vec::with_capacity(2 * n - 1);
    for z in 0..2 * n - 1 {
        let v2 = approx2
            .get(z)
            .finite()
            .expect("finite approximate product") as i128
            + min_a
            + min_b;
        let num = (v2 - 2 * k_shift) * den - 2 * z as i128 * ramp_num;
        out.push(to_i64(ceil_div(num, 2 * den), "recovered product")?);
    }
    MaxPlusVec::from_finite(&out)
}

/// Exact `a * b` for finite integer vectors of any lengths satisfying
/// the distortion promise at `e_max`: the longer vector is cut into
/// aligned blocks of the shorter one's length (last block
/// right-aligned), each block is solved as a square instance, and the
/// block products are max-merged.
pub fn distorted_conv(a: &MaxPlusVec, b: &MaxPlusVec, e_max: u64) -> Result<MaxPlusVec> {
    // Convolution is commutative; block along the longer operand.
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    short.finite_values("distorted_conv")?;
    long.finite_values("distorted_conv")?;

    let w = short.len();
    let blocks = long.len().div_ceil(w);
    let mut out = vec![ExtVal::NegInf; short.len() + long.len() - 1];
    for blk in 0..blocks {
        let start = if blk + 1 == blocks {
            long.len() - w
        } else {
            blk * w
        };
        let piece = long.slice(start, start + w - 1)?;
        let prod = distorted_square_conv(short, &piece, e_max)?;
        for (j, v) in prod.iter().enumerate() {
            if *v > out[start + j] {
                out[start + j] = *v;
            }
        }
    }
    MaxPlusVec::new(out)
}
