//! Deterministic 64-bit primality and factorization (trial division, then
//! Pollard rho with Brent's cycle detection).

use serde::Serialize;

use crate::arith::{add_mod, gcd, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Prime factorization of a positive integer. Primes are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from explicit pairs, checking every invariant.
    pub fn from_pairs(value: u64, mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut product: u64 = 1;
        for (i, &(q, e)) in factors.iter().enumerate() {
            if e == 0 {
                return Err(Error::OutOfRange(format!("zero exponent for {q}")));
            }
            if !is_prime(q) {
                return Err(Error::NotPrime(q));
            }
            if i > 0 && factors[i - 1].0 == q {
                return Err(Error::OutOfRange(format!("repeated prime {q}")));
            }
            let pow = q.checked_pow(e).ok_or(Error::Overflow("factor power"))?;
            product = product
                .checked_mul(pow)
                .ok_or(Error::Overflow("factor product"))?;
        }
        if product != value {
            return Err(Error::OutOfRange(format!(
                "factors multiply to {product}, not {value}"
            )));
        }
        Ok(Factorization { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    /// `ord_q(value)`.
    pub fn exponent_of(&self, q: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(p, _)| p == q)
            .map_or(0, |&(_, e)| e)
    }
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases, deterministic below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n`.
fn brent_rho(n: u64) -> u64 {
    let f = |x: u64, c: u64| add_mod(mul_mod(x, x, n), c, n);
    for c in 1..n {
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y, c);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(ys, c);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho failed on {n}")
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = brent_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorization of `n >= 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::FactorZero);
    }
    let mut rest = n;
    let mut primes = Vec::new();
    for q in [2u64, 3, 5] {
        while rest.is_multiple_of(q) {
            primes.push(q);
            rest /= q;
        }
    }
    // wheel mod 30 trial division up to a small bound
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut q = 7u64;
    let mut w = 0;
    while q <= 1000 && q * q <= rest {
        while rest.is_multiple_of(q) {
            primes.push(q);
            rest /= q;
        }
        q += WHEEL[w];
        w = (w + 1) % 8;
    }
    if rest > 1 {
        if q * q > rest {
            primes.push(rest);
        } else {
            split_into(rest, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}
