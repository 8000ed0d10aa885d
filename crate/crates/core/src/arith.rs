//! Modular arithmetic on 64-bit residues with 128-bit intermediates.

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Exponent of the prime `q` in `n`. `n` must be nonzero.
pub fn valuation(mut n: u64, q: u64) -> u32 {
    debug_assert!(n != 0 && q >= 2);
    let mut v = 0;
    while n.is_multiple_of(q) {
        n /= q;
        v += 1;
    }
    v
}

/// Legendre symbol (p/5) for a prime p: +1, -1, or 0 when p = 5.
pub fn legendre_mod5(p: u64) -> i8 {
    match p % 5 {
        0 => 0,
        1 | 4 => 1,
        _ => -1,
    }
}

/// Square root of `a` modulo an odd prime `p` by Tonelli-Shanks.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_sub_near_u64_max() {
        let m = u64::MAX - 58; // prime
        assert_eq!(add_mod(m - 1, m - 1, m), m - 2);
        assert_eq!(sub_mod(0, 1, m), m - 1);
        assert_eq!(mul_mod(m - 1, m - 1, m), 1);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(2, 11), Some(6));
        assert_eq!(inv_mod(2, 13), Some(7));
        assert_eq!(inv_mod(4, 10), None);
        for a in 1..97 {
            assert_eq!(mul_mod(a, inv_mod(a, 97).unwrap(), 97), 1);
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(48, 2), 4);
        assert_eq!(valuation(48, 3), 1);
        assert_eq!(valuation(48, 5), 0);
    }

    #[test]
    fn square_roots_of_five() {
        assert_eq!(sqrt_mod_prime(5, 11).map(|r| r * r % 11), Some(5));
        assert_eq!(sqrt_mod_prime(5, 13), None);
        // p ≡ 1 mod 8 exercises the full Tonelli-Shanks loop
        for p in [41u64, 89, 1009, 1_000_000_009] {
            let r = sqrt_mod_prime(5, p).unwrap();
            assert_eq!(mul_mod(r, r, p), 5);
        }
    }
}
