//! Knapsack instance and solution-profile types shared by the solver
//! family and the profile convolution.

use crate::error::{domain, Error, Result};
use crate::maxplus::{ExtVal, MaxPlusVec};

/// How many copies of an item may be used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Bounded(u64),
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Item {
    pub size: u64,
    pub value: u64,
    pub mult: Multiplicity,
}

impl Item {
    pub fn once(size: u64, value: u64) -> Self {
        Item {
            size,
            value,
            mult: Multiplicity::Bounded(1),
        }
    }
}

/// A knapsack problem: capacity plus items with sizes >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub capacity: u64,
    pub items: Vec<Item>,
}

impl KnapsackInstance {
    pub fn new(capacity: u64, items: Vec<Item>) -> Result<Self> {
        for it in &items {
            if it.size == 0 {
                return Err(domain("item sizes must be >= 1"));
            }
            if let Multiplicity::Bounded(0) = it.mult {
                return Err(domain("item multiplicities must be >= 1"));
            }
        }
        Ok(KnapsackInstance { capacity, items })
    }

    /// 0/1 instance from (size, value) pairs.
    pub fn zero_one(capacity: u64, items: &[(u64, u64)]) -> Result<Self> {
        Self::new(
            capacity,
            items.iter().map(|&(s, v)| Item::once(s, v)).collect(),
        )
    }

    pub fn is_zero_one(&self) -> bool {
        self.items
            .iter()
            .all(|it| it.mult == Multiplicity::Bounded(1))
    }

    pub fn max_value(&self) -> u64 {
        self.items.iter().map(|it| it.value).max().unwrap_or(0)
    }

    pub fn max_size(&self) -> u64 {
        self.items.iter().map(|it| it.size).max().unwrap_or(0)
    }
}

/// Per-capacity optimum vector of a knapsack instance: `values[i]` is
/// the best total value achievable with total size at most `i`.
/// Non-decreasing with `values[0] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionProfile {
    values: Vec<u64>,
}

impl SolutionProfile {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("profiles must cover at least capacity 0"));
        }
        if values[0] != 0 {
            return Err(domain("profile value at capacity 0 must be 0"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain("profiles must be non-decreasing"));
        }
        Ok(SolutionProfile { values })
    }

    pub fn zeros(capacity: u64) -> Self {
        SolutionProfile {
            values: vec![0; capacity as usize + 1],
        }
    }

    pub fn capacity(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn optimum(&self) -> u64 {
        *self.values.last().unwrap()
    }

    pub fn to_maxplus(&self) -> Result<MaxPlusVec> {
        MaxPlusVec::new(
            self.values
                .iter()
                .map(|&v| {
                    i64::try_from(v)
                        .map(ExtVal::Finite)
                        .map_err(|_| Error::Overflow("profile value"))
                })
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_maxplus(v: &MaxPlusVec) -> Result<Self> {
        let vals = v
            .iter()
            .map(|x| match x {
                ExtVal::Finite(f) if *f >= 0 => Ok(*f as u64),
                _ => Err(domain("profiles must be finite and non-negative")),
            })
            .collect::<Result<Vec<_>>>()?;
        SolutionProfile::new(vals)
    }

    /// Truncate or extend (profiles saturate) to cover `capacity`.
    pub fn resized(&self, capacity: u64) -> Self {
        let mut values = self.values.clone();
        let want = capacity as usize + 1;
        if values.len() > want {
            values.truncate(want);
        } else {
            let last = *values.last().unwrap();
            values.resize(want, last);
        }
        SolutionProfile { values }
    }
}

/// Exact ratio comparison `v1/s1 >= v2/s2` without floating point,
/// with ties broken toward smaller size. Returns the sort ordering for
/// descending value-per-size.
pub(crate) fn ratio_order(
    (s1, v1): (u64, u64),
    (s2, v2): (u64, u64),
) -> std::cmp::Ordering {
    // v1/s1 vs v2/s2  <=>  v1*s2 vs v2*s1
    let lhs = v1 as u128 * s2 as u128;
    let rhs = v2 as u128 * s1 as u128;
    rhs.cmp(&lhs).then(s1.cmp(&s2))
}
