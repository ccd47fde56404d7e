//! Minimal arbitrary-precision multiplication for the packed-polynomial
//! convolution backend.
//!
//! Numbers are little-endian `u64` limb slices. The fast path picks
//! schoolbook, Karatsuba or an exact number-theoretic transform by size;
//! the schoolbook path is also exposed on its own so the transforms can
//! be differentially tested against it.

/// Multiplication strategy for packed polynomial products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulBackend {
    /// Size-dispatched: schoolbook, then Karatsuba, then NTT.
    Fast,
    /// Quadratic limb multiplication only.
    Schoolbook,
}

const KARATSUBA_THRESHOLD: usize = 32;
const NTT_THRESHOLD: usize = 12_000;

pub(crate) fn big_mul(x: &[u64], y: &[u64], backend: MulBackend) -> Vec<u64> {
    let x = trim(x);
    let y = trim(y);
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    match backend {
        MulBackend::Schoolbook => mul_schoolbook(x, y),
        MulBackend::Fast => {
            let small = x.len().min(y.len());
            let large = x.len().max(y.len());
            if small <= KARATSUBA_THRESHOLD {
                mul_schoolbook(x, y)
            } else if large <= NTT_THRESHOLD {
                mul_karatsuba(x, y)
            } else {
                mul_ntt(x, y)
            }
        }
    }
}

fn trim(x: &[u64]) -> &[u64] {
    let mut n = x.len();
    while n > 0 && x[n - 1] == 0 {
        n -= 1;
    }
    &x[..n]
}

fn mul_schoolbook(x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; x.len() + y.len()];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let mut carry: u64 = 0;
        for (j, &yj) in y.iter().enumerate() {
            let cur = out[i + j] as u128 + xi as u128 * yj as u128 + carry as u128;
            out[i + j] = cur as u64;
            carry = (cur >> 64) as u64;
        }
        let mut k = i + y.len();
        while carry > 0 {
            let (s, c) = out[k].overflowing_add(carry);
            out[k] = s;
            carry = c as u64;
            k += 1;
        }
    }
    out
}

// Additions and subtractions below work modulo B^len(acc): carries and
// borrows past the top limb are dropped. The Karatsuba recombination
// has intermediate states that temporarily over- or undershoot the true
// product, but the final value fits, so modulo arithmetic is exact.
fn add_into(acc: &mut [u64], x: &[u64], offset: usize) {
    let n = acc.len();
    let mut carry = 0u64;
    for (i, &xi) in x.iter().enumerate() {
        let pos = offset + i;
        if pos >= n {
            return;
        }
        let (s1, c1) = acc[pos].overflowing_add(xi);
        let (s2, c2) = s1.overflowing_add(carry);
        acc[pos] = s2;
        carry = (c1 as u64) + (c2 as u64);
    }
    let mut k = offset + x.len();
    while carry > 0 && k < n {
        let (s, c) = acc[k].overflowing_add(carry);
        acc[k] = s;
        carry = c as u64;
        k += 1;
    }
}

fn sub_from(acc: &mut [u64], x: &[u64], offset: usize) {
    let n = acc.len();
    let mut borrow = 0u64;
    for (i, &xi) in x.iter().enumerate() {
        let pos = offset + i;
        if pos >= n {
            return;
        }
        let (s1, b1) = acc[pos].overflowing_sub(xi);
        let (s2, b2) = s1.overflowing_sub(borrow);
        acc[pos] = s2;
        borrow = (b1 as u64) + (b2 as u64);
    }
    let mut k = offset + x.len();
    while borrow > 0 && k < n {
        let (s, b) = acc[k].overflowing_sub(borrow);
        acc[k] = s;
        borrow = b as u64;
        k += 1;
    }
}

fn mul_karatsuba(x: &[u64], y: &[u64]) -> Vec<u64> {
    let x = trim(x);
    let y = trim(y);
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    if x.len().min(y.len()) <= KARATSUBA_THRESHOLD {
        return mul_schoolbook(x, y);
    }
    let m = x.len().max(y.len()) / 2;
    let (x0, x1) = split_at_clamped(x, m);
    let (y0, y1) = split_at_clamped(y, m);

    let z0 = mul_karatsuba(x0, y0);
    let z2 = mul_karatsuba(x1, y1);
    let xs = limb_add(x0, x1);
    let ys = limb_add(y0, y1);
    let z1 = mul_karatsuba(&xs, &ys);

    let mut out = vec![0u64; x.len() + y.len()];
    add_into(&mut out, &z0, 0);
    add_into(&mut out, &z2, 2 * m);
    sub_from(&mut out, &z0, m);
    sub_from(&mut out, &z2, m);
    add_into(&mut out, &z1, m);
    out
}

fn split_at_clamped(x: &[u64], m: usize) -> (&[u64], &[u64]) {
    if x.len() <= m {
        (x, &[])
    } else {
        (&x[..m], &x[m..])
    }
}

fn limb_add(x: &[u64], y: &[u64]) -> Vec<u64> {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut out = vec![0u64; long.len() + 1];
    out[..long.len()].copy_from_slice(long);
    add_into(&mut out, short, 0);
    out
}

// ---------------------------------------------------------------------------
// Number-theoretic transform over the prime 2^64 - 2^32 + 1.
//
// Operands are re-expressed in base 2^16. With conv lengths below 2^23 each
// convolution coefficient is below 2^32 * 2^23 = 2^55 < p, so a single prime
// recovers the coefficients exactly with no rounding anywhere.
// ---------------------------------------------------------------------------

pub(crate) const NTT_PRIME: u64 = 0xFFFF_FFFF_0000_0001;
const NTT_GENERATOR: u64 = 7;

#[inline]
pub(crate) fn mod_add(a: u64, b: u64) -> u64 {
    let (mut r, carry) = a.overflowing_add(b);
    if carry {
        // 2^64 = 2^32 - 1 (mod p)
        r = r.wrapping_add(0xFFFF_FFFF);
    }
    if r >= NTT_PRIME {
        r -= NTT_PRIME;
    }
    r
}

#[inline]
pub(crate) fn mod_sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        NTT_PRIME - (b - a)
    }
}

#[inline]
pub(crate) fn mod_mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_lo = hi & 0xFFFF_FFFF;
    let hi_hi = hi >> 32;
    // x = lo + (2^32-1)*hi_lo - hi_hi (mod p), since 2^96 = -1 (mod p).
    let mid = hi_lo * 0xFFFF_FFFF;
    let mut r = lo;
    if r >= NTT_PRIME {
        r -= NTT_PRIME;
    }
    r = mod_add(r, if mid >= NTT_PRIME { mid - NTT_PRIME } else { mid });
    mod_sub(r, hi_hi)
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= NTT_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        exp >>= 1;
    }
    acc
}

fn bit_reverse_permute(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

fn ntt_in_place(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    bit_reverse_permute(a);
    let mut len = 2usize;
    while len <= n {
        let mut w_len = mod_pow(NTT_GENERATOR, (NTT_PRIME - 1) / len as u64);
        if invert {
            w_len = mod_pow(w_len, NTT_PRIME - 2);
        }
        let mut start = 0;
        while start < n {
            let mut w = 1u64;
            for i in start..start + len / 2 {
                let u = a[i];
                let v = mod_mul(a[i + len / 2], w);
                a[i] = mod_add(u, v);
                a[i + len / 2] = mod_sub(u, v);
                w = mod_mul(w, w_len);
            }
            start += len;
        }
        len <<= 1;
    }
    if invert {
        let n_inv = mod_pow(n as u64, NTT_PRIME - 2);
        for x in a.iter_mut() {
            *x = mod_mul(*x, n_inv);
        }
    }
}

fn limbs_to_digits(x: &[u64]) -> Vec<u64> {
    let mut digits = Vec::with_capacity(x.len() * 4);
    for &limb in x {
        digits.push(limb & 0xFFFF);
        digits.push((limb >> 16) & 0xFFFF);
        digits.push((limb >> 32) & 0xFFFF);
        digits.push(limb >> 48);
    }
    digits
}

fn mul_ntt(x: &[u64], y: &[u64]) -> Vec<u64> {
    let dx = limbs_to_digits(x);
    let dy = limbs_to_digits(y);
    let conv_len = dx.len() + dy.len() - 1;
    let n = conv_len.next_power_of_two();
    assert!(
        n <= 1 << 23,
        "operands too large for single-prime exact transform"
    );
    let mut fa = dx;
    fa.resize(n, 0);
    let mut fb = dy;
    fb.resize(n, 0);
    ntt_in_place(&mut fa, false);
    ntt_in_place(&mut fb, false);
    for i in 0..n {
        fa[i] = mod_mul(fa[i], fb[i]);
    }
    ntt_in_place(&mut fa, true);

    // Carry-propagate base-2^16 coefficients back into u64 limbs.
    let out_limbs = x.len() + y.len();
    let mut out = vec![0u64; out_limbs];
    let mut acc: u128 = 0;
    for pos in 0..out_limbs * 4 {
        if pos < conv_len {
            acc += fa[pos] as u128;
        }
        let digit = (acc & 0xFFFF) as u64;
        acc >>= 16;
        out[pos / 4] |= digit << (16 * (pos % 4));
    }
    debug_assert_eq!(acc, 0);
    out
}

/// Compare two little-endian limb numbers.
pub(crate) fn limb_cmp(x: &[u64], y: &[u64]) -> std::cmp::Ordering {
    let x = trim(x);
    let y = trim(y);
    x.len()
        .cmp(&y.len())
        .then_with(|| x.iter().rev().cmp(y.iter().rev()))
}

/// Number of bits in the value (0 for zero).
pub(crate) fn limb_bits(x: &[u64]) -> u64 {
    let x = trim(x);
    match x.last() {
        None => 0,
        Some(&top) => (x.len() as u64 - 1) * 64 + (64 - top.leading_zeros() as u64),
    }
}

/// Divides `x` by the single-limb `d` in place, returning the remainder.
#[cfg(test)]
pub(crate) fn limb_div_assign(x: &mut Vec<u64>, d: u64) -> u64 {
    debug_assert!(d > 0);
    let mut rem: u128 = 0;
    for limb in x.iter_mut().rev() {
        let cur = (rem << 64) | *limb as u128;
        *limb = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    while x.last() == Some(&0) {
        x.pop();
    }
    rem as u64
}

/// Is the number zero?
pub(crate) fn limb_is_zero(x: &[u64]) -> bool {
    x.iter().all(|&v| v == 0)
}
