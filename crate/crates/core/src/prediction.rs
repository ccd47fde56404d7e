//! Exact convolution from an uncertain solution: a monotone family of
//! per-row index intervals certifying, row by row, where cross sums are
//! within `e_max` of the true product, with every output index covered
//! by at least one certified optimal witness.
//!
//! Given such a certificate the convolution is computed in
//! `log n + 1` rounds: round `s+1` splits the second operand into `2^s`
//! aligned blocks, projects the certified rows onto each block (minus
//! the sibling block's projection, so no row pays twice), and solves
//! each (row-slice, block) pair with the small-distortion kernel.

use crate::distorted::{check_distortion, distorted_conv};
use crate::error::{domain, Result};
use crate::maxplus::{naive_conv, ExtVal, MaxPlusVec};

/// Interval certificate for a product `a * b`.
///
/// Row `i` covers indices `j` of `b` with `x_i <= j <= y_i`; empty rows
/// are encoded as `y = x - 1`. Both endpoint sequences must be
/// non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertainSolution {
    pub intervals: Vec<(i64, i64)>,
    pub e_max: u64,
}

impl UncertainSolution {
    pub fn new(intervals: Vec<(i64, i64)>, e_max: u64) -> Self {
        UncertainSolution { intervals, e_max }
    }

    fn is_monotone(&self) -> bool {
        self.intervals
            .windows(2)
            .all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1)
    }
}

/// A (possibly empty) interval of row indices.
pub type RowInterval = Option<(usize, usize)>;

/// Rows whose interval contains all of `[alpha, beta]`:
/// `{i : x_i <= alpha and y_i >= beta}`. Two binary searches over the
/// monotone endpoint sequences.
pub fn projection(u: &UncertainSolution, alpha: usize, beta: usize) -> Result<RowInterval> {
    if alpha > beta {
        return Err(domain("projection query must satisfy alpha <= beta"));
    }
    let xs = &u.intervals;
    let a = alpha as i64;
    let b = beta as i64;
    // Largest prefix with x_i <= alpha.
    let hi = xs.partition_point(|iv| iv.0 <= a);
    // Smallest suffix with y_i >= beta.
    let lo = xs.partition_point(|iv| iv.1 < b);
    if lo < hi {
        Ok(Some((lo, hi - 1)))
    } else {
        Ok(None)
    }
}

/// `projection(q1) \ projection(q2)` for disjoint query intervals; the
/// difference is always a single (possibly empty) row interval when the
/// certificate is monotone.
pub fn projection_diff(
    u: &UncertainSolution,
    q1: (usize, usize),
    q2: (usize, usize),
) -> Result<RowInterval> {
    if !(q1.1 < q2.0 || q2.1 < q1.0) {
        return Err(domain("projection_diff queries must be disjoint"));
    }
    let p1 = projection(u, q1.0, q1.1)?;
    let p2 = projection(u, q2.0, q2.1)?;
    let (l1, h1) = match p1 {
        None => return Ok(None),
        Some(iv) => iv,
    };
    let (l2, h2) = match p2 {
        None => return Ok(Some((l1, h1))),
        Some(iv) => iv,
    };
    let left = if l1 < l2 { Some((l1, h1.min(l2 - 1))) } else { None };
    let right = if h1 > h2 {
        Some(((l1.max(h2 + 1)), h1))
    } else {
        None
    };
    match (left, right) {
        (Some(_), Some(_)) => Err(domain(
            "projection difference is not an interval; certificate is not monotone",
        )),
        (Some(iv), None) | (None, Some(iv)) => Ok(Some(iv)),
        (None, None) => Ok(None),
    }
}

/// Quadratic certificate checker against the `naive_conv` ground truth:
/// certified accuracy, witness coverage, and interval monotonicity.
pub fn validate_uncertain(a: &MaxPlusVec, b: &MaxPlusVec, u: &UncertainSolution) -> Result<bool> {
    if u.intervals.len() != a.len() || !u.is_monotone() {
        return Ok(false);
    }
    let blen = b.len() as i64;
    for &(x, y) in &u.intervals {
        let empty = y == x - 1;
        if !empty && !(0 <= x && x <= y && y < blen) {
            return Ok(false);
        }
    }
    let c = naive_conv(a, b)?;
    let e = u.e_max as i128;

    // Certified accuracy: a_i + b_j >= c_(i+j) - e_max inside intervals.
    for (i, &(x, y)) in u.intervals.iter().enumerate() {
        if y < x {
            continue;
        }
        for j in x..=y {
            let pair = a.get(i).conv_term(b.get(j as usize))?;
            let bound = c.get(i + j as usize);
            let ok = match (pair, bound) {
                (_, ExtVal::NegInf) => true,
                (ExtVal::NegInf, _) => false,
                (ExtVal::PosInf, _) => true,
                (_, ExtVal::PosInf) => false,
                (ExtVal::Finite(p), ExtVal::Finite(q)) => p as i128 >= q as i128 - e,
            };
            if !ok {
                return Ok(false);
            }
        }
    }

    // Witness coverage: every output index has an optimal in-interval pair.
    for z in 0..c.len() {
        let mut found = false;
        for (j, &(x, y)) in u.intervals.iter().enumerate() {
            if j > z {
                break;
            }
            let k = (z - j) as i64;
            if k >= b.len() as i64 || k < x || k > y {
                continue;
            }
            if a.get(j).conv_term(b.get(z - j))? == c.get(z) {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Approximation from the certificate alone: for each output index a
/// single witnessed pair is located by binary search, giving
/// `c_hat` with `(a*b)_i - e_max <= c_hat_i <= (a*b)_i`.
pub fn approx_from_uncertain(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    u: &UncertainSolution,
) -> Result<MaxPlusVec> {
    if u.intervals.len() != a.len() {
        return Err(domain("certificate row count must equal |a|"));
    }
    let iv = &u.intervals;
    let out_len = a.len() + b.len() - 1;
    let mut out = Vec::with_capacity(out_len);
    for z in 0..out_len {
        let zi = z as i64;
        // Rows with x_j + j <= z form a prefix, rows with y_j + j >= z a
        // suffix; both key sequences are strictly increasing. Empty rows
        // (y = x - 1) can never land in the intersection.
        let hi = partition_by(iv.len(), |j| iv[j].0 + j as i64 <= zi);
        let lo = partition_by(iv.len(), |j| iv[j].1 + (j as i64) < zi);
        let j_max = (hi.saturating_sub(1)).min(z).min(a.len() - 1);
        let j_min = lo.max(z.saturating_sub(b.len() - 1));
        if lo >= hi || j_min > j_max {
            return Err(domain(format!("no certified witness for output index {z}")));
        }
        out.push(a.get(j_max).conv_term(b.get(z - j_max))?);
    }
    MaxPlusVec::new(out)
}

fn partition_by(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let mut lo = 0usize;
    let mut hi = len;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Round accounting for the work-bound checks: per round, the summed
/// row-slice lengths may not exceed `2n` and the summed output-piece
/// lengths may not exceed `3n`.
#[derive(Debug, Default, Clone)]
pub struct PredictionStats {
    pub rounds: Vec<(usize, usize)>,
}

/// Exact `a * b` from a valid uncertain solution. The certificate is
/// not re-verified here; [`validate_uncertain`] exists for tests.
pub fn conv_via_prediction(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    u: &UncertainSolution,
) -> Result<MaxPlusVec> {
    conv_via_prediction_with_stats(a, b, u).map(|(c, _)| c)
}

/// As [`conv_via_prediction`], also returning per-round work counters.
pub fn conv_via_prediction_with_stats(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    u: &UncertainSolution,
) -> Result<(MaxPlusVec, PredictionStats)> {
    if u.intervals.len() != a.len() {
        return Err(domain("certificate row count must equal |a|"));
    }
    let n = a.len().max(b.len()).next_power_of_two();
    let rounds_log = n.trailing_zeros();

    let pad = |v: &MaxPlusVec| {
        let mut elems = v.as_slice().to_vec();
        elems.resize(n, ExtVal::NegInf);
        MaxPlusVec::new(elems)
    };
    let ap = pad(a)?;
    let bp = pad(b)?;

    // Padded rows of `a` get empty intervals anchored just past the
    // original end of `b` (q = number of -inf entries appended to b).
    let anchor = b.len() as i64;
    let mut padded = u.clone();
    padded
        .intervals
        .resize(n, (anchor, anchor - 1));
    debug_assert!(padded.is_monotone(), "padded certificate must stay monotone");

    let mut c = vec![ExtVal::NegInf; 2 * n - 1];
    let mut stats = PredictionStats::default();

    for s in 0..=rounds_log {
        let block_len = n >> s;
        let blocks = 1usize << s;
        let mut len_a_total = 0usize;
        let mut len_c_total = 0usize;
        for k in 0..blocks {
            let alpha = k * block_len;
            let beta = alpha + block_len - 1;
            let rows = if s == 0 {
                projection(&padded, alpha, beta)?
            } else if k % 2 == 0 {
                let sib = (alpha + block_len, beta + block_len);
                projection_diff(&padded, (alpha, beta), sib)?
            } else {
                let sib = (alpha - block_len, beta - block_len);
                projection_diff(&padded, (alpha, beta), sib)?
            };
            let Some((row_lo, row_hi)) = rows else {
                continue;
            };
            let a_slice = ap.slice(row_lo, row_hi)?;
            let b_block = bp.slice(alpha, beta)?;
            // Quadratic distortion check on small blocks only; the cost
            // would otherwise dominate the whole computation.
            debug_assert!(
                a_slice.len() * b_block.len() > 4096
                    || !a_slice.all_finite()
                    || !b_block.all_finite()
                    || check_distortion(&a_slice, &b_block, u.e_max).unwrap_or(true),
                "block violates the distortion promise"
            );
            let piece = distorted_conv(&a_slice, &b_block, u.e_max)?;
            let offset = alpha + row_lo;
            for (j, v) in piece.iter().enumerate() {
                if *v > c[offset + j] {
                    c[offset + j] = *v;
                }
            }
            len_a_total += a_slice.len();
            len_c_total += piece.len();
        }
        assert!(
            len_a_total <= 2 * n && len_c_total <= 3 * n,
            "round work bound violated: len_a = {len_a_total}, len_c = {len_c_total}, n = {n}"
        );
        stats.rounds.push((len_a_total, len_c_total));
    }

    c.truncate(a.len() + b.len() - 1);
    Ok((MaxPlusVec::new(c)?, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn fv(vals: &[i64]) -> MaxPlusVec {
        MaxPlusVec::from_finite(vals).unwrap()
    }

    fn cert(intervals: &[(i64, i64)], e_max: u64) -> UncertainSolution {
        UncertainSolution::new(intervals.to_vec(), e_max)
    }

    #[test]
    fn projection_examples() {
        let u = cert(&[(0, 1), (1, 2), (2, 3)], 0);
        assert_eq!(projection(&u, 1, 2).unwrap(), Some((1, 1)));
        assert_eq!(projection(&u, 0, 3).unwrap(), None);
        let universal = cert(&[(0, 3), (0, 3)], 0);
        assert_eq!(projection(&universal, 0, 3).unwrap(), Some((0, 1)));
        assert!(projection(&u, 2, 1).is_err());
    }

    #[test]
    fn projection_diff_examples() {
        let u = cert(&[(0, 1), (0, 3), (2, 3)], 0);
        // P(0,1) = rows covering [0,1] = {0, 1}; P(2,3) = {1, 2}.
        assert_eq!(projection(&u, 0, 1).unwrap(), Some((0, 1)));
        assert_eq!(projection(&u, 2, 3).unwrap(), Some((1, 2)));
        assert_eq!(projection_diff(&u, (0, 1), (2, 3)).unwrap(), Some((0, 0)));
        assert_eq!(projection_diff(&u, (2, 3), (0, 1)).unwrap(), Some((2, 2)));
        // Identical projections give an empty difference; empty first
        // projection likewise.
        let v = cert(&[(0, 3), (0, 3)], 0);
        assert_eq!(projection_diff(&v, (0, 0), (2, 3)).unwrap(), None);
        assert!(projection_diff(&v, (0, 2), (1, 3)).is_err());
    }

    #[test]
    fn validator_examples() {
        let a = fv(&[1, 2]);
        let b = fv(&[3, 4]);
        assert!(validate_uncertain(&a, &b, &cert(&[(0, 1), (0, 1)], 1)).unwrap());
        assert!(!validate_uncertain(&a, &b, &cert(&[(0, 0), (0, 0)], 1)).unwrap());
        // Universal intervals are always accurate at the full span.
        let c = naive_conv(&a, &b).unwrap();
        let span = c.max_finite().unwrap() - 4; // min cross sum is 1 + 3
        assert!(validate_uncertain(&a, &b, &cert(&[(0, 1), (0, 1)], span as u64)).unwrap());
    }

    #[test]
    fn approx_examples() {
        let a = fv(&[1, 2]);
        let b = fv(&[3, 4]);
        let u = cert(&[(0, 1), (0, 1)], 1);
        let approx = approx_from_uncertain(&a, &b, &u).unwrap();
        let exact = naive_conv(&a, &b).unwrap();
        for z in 0..exact.len() {
            let got = approx.get(z).finite().unwrap();
            let want = exact.get(z).finite().unwrap();
            assert!(want - 1 <= got && got <= want);
        }
        // A zero-error certificate reproduces the product exactly.
        let zeros = fv(&[0, 0, 0]);
        let u0 = cert(&[(0, 2), (0, 2), (0, 2)], 0);
        assert_eq!(
            approx_from_uncertain(&zeros, &zeros, &u0).unwrap(),
            naive_conv(&zeros, &zeros).unwrap()
        );
    }

    #[test]
    fn prediction_examples() {
        let a = fv(&[1, 2]);
        let b = fv(&[3, 4]);
        let u = cert(&[(0, 1), (0, 1)], 1);
        assert!(validate_uncertain(&a, &b, &u).unwrap());
        assert_eq!(conv_via_prediction(&a, &b, &u).unwrap(), fv(&[4, 5, 6]));

        let z = fv(&[0; 8]);
        let u = cert(&[(0, 7); 8], 0);
        assert_eq!(conv_via_prediction(&z, &z, &u).unwrap(), fv(&[0; 15]));
    }

    /// Exactly affine pair with staircase intervals around the aligned
    /// diagonal; a valid zero-error certificate that exercises the
    /// multi-round path. The band half-width must cover the diagonal's
    /// step size or coverage has gaps.
    pub(crate) fn affine_staircase_instance(
        rng: &mut SplitMix64,
        la: usize,
        lb: usize,
    ) -> (MaxPlusVec, MaxPlusVec, UncertainSolution) {
        let slope = rng.next_below(11) as i64 - 5;
        let base_a = rng.next_below(201) as i64 - 100;
        let base_b = rng.next_below(201) as i64 - 100;
        let mk = |len: usize, base: i64| {
            MaxPlusVec::from_finite(
                &(0..len).map(|i| base + slope * i as i64).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let a = mk(la, base_a);
        let b = mk(lb, base_b);
        let width = 1 + (lb as i64 - 1) / (la as i64).max(2).saturating_sub(1);
        let intervals = (0..la)
            .map(|i| {
                let center = if la == 1 {
                    0
                } else {
                    (i * (lb - 1) / (la - 1)) as i64
                };
                ((center - width).max(0), (center + width).min(lb as i64 - 1))
            })
            .collect();
        (a, b, UncertainSolution::new(intervals, 0))
    }

    #[test]
    fn staircase_certificates_are_valid_and_exact() {
        let mut rng = SplitMix64::new(0xCAFE);
        for round in 0..500 {
            let la = 1 + rng.next_below(24) as usize;
            let lb = 1 + rng.next_below(24) as usize;
            let (a, b, u) = affine_staircase_instance(&mut rng, la, lb);
            assert!(validate_uncertain(&a, &b, &u).unwrap(), "round {round}");
            let got = conv_via_prediction(&a, &b, &u).unwrap();
            assert_eq!(got, naive_conv(&a, &b).unwrap(), "round {round}");
        }
    }

    #[test]
    fn row_slices_touched_at_most_twice_per_round() {
        // Count per-row appearances across the blocks of each round.
        let mut rng = SplitMix64::new(0x7EA);
        for _ in 0..200 {
            let la = 2 + rng.next_below(30) as usize;
            let lb = 2 + rng.next_below(30) as usize;
            let (a, b, u) = affine_staircase_instance(&mut rng, la, lb);
            let n = a.len().max(b.len()).next_power_of_two();
            let anchor = b.len() as i64;
            let mut padded = u.clone();
            padded.intervals.resize(n, (anchor, anchor - 1));
            for s in 0..=n.trailing_zeros() {
                let block_len = n >> s;
                let mut counts = vec![0usize; n];
                for k in 0..(1usize << s) {
                    let alpha = k * block_len;
                    let beta = alpha + block_len - 1;
                    let rows = if s == 0 {
                        projection(&padded, alpha, beta).unwrap()
                    } else if k % 2 == 0 {
                        projection_diff(&padded, (alpha, beta), (alpha + block_len, beta + block_len))
                            .unwrap()
                    } else {
                        projection_diff(&padded, (alpha, beta), (alpha - block_len, beta - block_len))
                            .unwrap()
                    };
                    if let Some((lo, hi)) = rows {
                        for slot in &mut counts[lo..=hi] {
                            *slot += 1;
                        }
                    }
                }
                assert!(counts.iter().all(|&c| c <= 2));
            }
        }
    }
}
