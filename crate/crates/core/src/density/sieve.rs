//! Segmented sieve of Eratosthenes over odd numbers.

use crate::error::{Error, Result};

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 18;
/// Sieving stops well short of u64 overflow.
pub const MAX_SIEVE_BOUND: u64 = 1 << 62;

/// Primes up to `limit` with a plain sieve; used for the base primes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Appends the primes in `[lo, hi)` to `out`. `base` must hold every prime
/// up to `sqrt(hi - 1)`.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
    if hi <= lo {
        return;
    }
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    let start = lo.max(3) | 1;
    if start >= hi {
        return;
    }
    let len = (hi - start).div_ceil(2) as usize;
    let mut composite = vec![false; len];
    for &q in base.iter().skip_while(|&&q| q == 2) {
        let sq = q * q;
        if sq >= hi {
            break;
        }
        let mut first = sq.max(start.div_ceil(q) * q);
        if first % 2 == 0 {
            first += q;
        }
        let mut idx = ((first - start) / 2) as usize;
        while idx < len {
            composite[idx] = true;
            idx += q as usize;
        }
    }
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| start + 2 * i as u64),
    );
}

/// Streaming iterator over the primes up to `x` in increasing order.
pub struct Primes {
    x: u64,
    segment_size: u64,
    base: Vec<u64>,
    next_lo: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos == self.buf.len() {
            if self.next_lo > self.x {
                return None;
            }
            let lo = self.next_lo;
            let hi = lo.saturating_add(self.segment_size).min(self.x + 1);
            self.buf.clear();
            self.pos = 0;
            sieve_segment(lo, hi, &self.base, &mut self.buf);
            self.next_lo = hi;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

pub fn primes_up_to(x: u64) -> Primes {
    primes_with_segment(x, DEFAULT_SEGMENT_SIZE).expect("default segment size is valid")
}

pub fn primes_with_segment(x: u64, segment_size: u64) -> Result<Primes> {
    if segment_size < 2 {
        return Err(Error::InvalidConfig(format!(
            "segment size {segment_size} is below 2"
        )));
    }
    if x > MAX_SIEVE_BOUND {
        return Err(Error::BoundExceeded {
            what: "sieve bound",
            value: x as u128,
            bound: MAX_SIEVE_BOUND as u128,
        });
    }
    Ok(Primes {
        x,
        segment_size,
        base: small_primes(isqrt(x)),
        next_lo: 0,
        buf: Vec::new(),
        pos: 0,
    })
}

/// pi(x).
pub fn prime_count(x: u64) -> u64 {
    primes_up_to(x).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let v: Vec<u64> = primes_up_to(30).collect();
        assert_eq!(v, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1).count(), 0);
        assert_eq!(primes_up_to(2).collect::<Vec<_>>(), vec![2]);
        assert_eq!(primes_up_to(3).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn segment_size_does_not_matter() {
        let reference = small_primes(20_000);
        for seg in [2u64, 3, 7, 64, 1000, 1 << 20] {
            let got: Vec<u64> = primes_with_segment(20_000, seg).unwrap().collect();
            assert_eq!(got, reference, "segment {seg}");
        }
        assert!(primes_with_segment(100, 1).is_err());
    }

    #[test]
    fn known_counts() {
        assert_eq!(prime_count(1_000_000), 78_498);
        assert_eq!(prime_count(10_000_000), 664_579);
    }

    #[test]
    fn window_far_from_origin() {
        let lo = 1_000_000_000_000u64;
        let base = small_primes(isqrt(lo + 1000));
        let mut out = Vec::new();
        sieve_segment(lo, lo + 1000, &base, &mut out);
        assert!(out.iter().all(|&p| crate::factor::is_prime(p)));
        let expect = (lo..lo + 1000).filter(|&n| crate::factor::is_prime(n)).count();
        assert_eq!(out.len(), expect);
    }
}
