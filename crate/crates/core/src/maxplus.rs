//! Extended-integer scalars and (max,+) / (min,+) vector semantics.
//!
//! `naive_conv`, `naive_min_conv` and `naive_power` are the quadratic
//! reference kernels. Every fast kernel in this crate is differentially
//! tested against them, so they are written for obviousness, not speed.

use crate::error::{domain, Error, Result};
use std::fmt;

/// A 64-bit integer extended with both infinities.
///
/// The derived order gives `NegInf < Finite(_) < PosInf`, with finite
/// values ordered normally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtVal {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtVal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtVal::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtVal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Checked scalar addition. `PosInf + NegInf` has no defined value
    /// and is a domain error; finite overflow is an overflow error.
    pub fn checked_add(self, other: ExtVal) -> Result<ExtVal> {
        use ExtVal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => {
                Err(domain("PosInf + NegInf has no defined value"))
            }
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (Finite(a), Finite(b)) => a
                .checked_add(b)
                .map(Finite)
                .ok_or(Error::Overflow("ExtVal addition")),
        }
    }

    /// Negation; swaps the infinities. `-i64::MIN` overflows.
    pub fn checked_neg(self) -> Result<ExtVal> {
        use ExtVal::*;
        match self {
            NegInf => Ok(PosInf),
            PosInf => Ok(NegInf),
            Finite(v) => v
                .checked_neg()
                .map(Finite)
                .ok_or(Error::Overflow("ExtVal negation")),
        }
    }

    /// Addition as it appears inside a (max,+) convolution term: a term
    /// with a `NegInf` operand contributes `NegInf` (it is simply never
    /// a maximizer), even when paired with `PosInf`.
    pub(crate) fn conv_term(self, other: ExtVal) -> Result<ExtVal> {
        use ExtVal::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (Finite(a), Finite(b)) => a
                .checked_add(b)
                .map(Finite)
                .ok_or(Error::Overflow("convolution term")),
        }
    }
}

impl fmt::Display for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVal::NegInf => write!(f, "-inf"),
            ExtVal::PosInf => write!(f, "+inf"),
            ExtVal::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// A non-empty sequence of [`ExtVal`]s, the operand and result type of
/// every convolution. Reads past the stored length yield `NegInf`
/// (right padding), but the stored length is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxPlusVec {
    elems: Vec<ExtVal>,
}

impl MaxPlusVec {
    pub fn new(elems: Vec<ExtVal>) -> Result<Self> {
        if elems.is_empty() {
            return Err(domain("vectors must have length >= 1"));
        }
        Ok(MaxPlusVec { elems })
    }

    pub fn from_finite(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| ExtVal::Finite(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Always false; the constructor rejects empty vectors.
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Element access with `-inf` padding semantics past the end.
    pub fn get(&self, index: usize) -> ExtVal {
        self.elems.get(index).copied().unwrap_or(ExtVal::NegInf)
    }

    pub fn as_slice(&self) -> &[ExtVal] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtVal> {
        self.elems.iter()
    }

    /// Largest finite element, if any.
    pub fn max_finite(&self) -> Option<i64> {
        self.elems.iter().filter_map(|v| v.finite()).max()
    }

    /// Smallest finite element, if any.
    pub fn min_finite(&self) -> Option<i64> {
        self.elems.iter().filter_map(|v| v.finite()).min()
    }

    /// True when every element is finite.
    pub fn all_finite(&self) -> bool {
        self.elems.iter().all(|v| v.is_finite())
    }

    /// The finite values, or a domain error naming `context` if any
    /// element is infinite.
    pub fn finite_values(&self, context: &str) -> Result<Vec<i64>> {
        self.elems
            .iter()
            .map(|v| {
                v.finite()
                    .ok_or_else(|| domain(format!("{context} requires finite vectors")))
            })
            .collect()
    }

    pub fn slice(&self, start: usize, end_inclusive: usize) -> Result<MaxPlusVec> {
        if start > end_inclusive || end_inclusive >= self.len() {
            return Err(domain("slice bounds out of range"));
        }
        MaxPlusVec::new(self.elems[start..=end_inclusive].to_vec())
    }
}

impl fmt::Display for MaxPlusVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Quadratic (max,+) convolution: `c_i = max_j a_j + b_(i-j)`.
///
/// The result has length `|a| + |b| - 1`. This is the ground-truth
/// oracle for all fast convolution kernels.
pub fn naive_conv(a: &MaxPlusVec, b: &MaxPlusVec) -> Result<MaxPlusVec> {
    let mut out = vec![ExtVal::NegInf; a.len() + b.len() - 1];
    for (j, &av) in a.iter().enumerate() {
        for (k, &bv) in b.iter().enumerate() {
            let term = av.conv_term(bv)?;
            if term > out[j + k] {
                out[j + k] = term;
            }
        }
    }
    MaxPlusVec::new(out)
}

/// Quadratic (min,+) convolution, realized by negating operands and
/// result around `naive_conv`.
pub fn naive_min_conv(a: &MaxPlusVec, b: &MaxPlusVec) -> Result<MaxPlusVec> {
    let neg = |v: &MaxPlusVec| -> Result<MaxPlusVec> {
        MaxPlusVec::new(v.iter().map(|x| x.checked_neg()).collect::<Result<_>>()?)
    };
    let c = naive_conv(&neg(a)?, &neg(b)?)?;
    neg(&c)
}

/// `k`-fold (max,+) self-convolution of `a`, `k >= 1`.
pub fn naive_power(a: &MaxPlusVec, k: u64) -> Result<MaxPlusVec> {
    if k == 0 {
        return Err(domain("power exponent must be >= 1"));
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = naive_conv(&acc, a)?;
    }
    Ok(acc)
}
