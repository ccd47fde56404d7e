//! Seedable, splittable pseudo-random generator (SplitMix64).
//!
//! Every randomized solver derives an independent stream per
//! (repetition, list) from its base seed, so runs are reproducible from
//! the seed alone and sub-streams never alias across nesting levels.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix(self.state)
    }

    /// Uniformly distributed value in `[0, bound)`; `bound >= 1`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound >= 1);
        // Rejection-free multiply-shift; bias is negligible for the
        // bounds used here and determinism is what matters.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform in the inclusive range `[lo, hi]`.
    pub fn next_range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }

    /// Derives an independent child stream from this seed and a salt
    /// path (repetition index, list index, ...).
    pub fn derive(seed: u64, salts: &[u64]) -> Self {
        let mut s = mix(seed ^ 0xA076_1D64_78BD_642F);
        for &salt in salts {
            s = mix(s.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(salt));
        }
        SplitMix64::new(s)
    }
}
