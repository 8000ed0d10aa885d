//! The Fibonacci entry point Z(p): the least n >= 1 with p | F_n.
//!
//! Two routes are kept side by side. [`entry_point_naive`] walks the sequence
//! mod p. [`entry_point_fast`] goes through the order of alpha = (3/2, 1/2) in
//! G(F_p): Z(p) = 2|alpha| when |alpha| is odd, |alpha|/2 when
//! |alpha| = 2 mod 4, and |alpha| when 4 divides |alpha|.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{add_mod, legendre_mod5, valuation};
use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime};
use crate::torus::{alpha_unchecked, check_group_prime, group_order_unchecked, order_with_factors};

/// Which branch of the order-to-entry-point relation applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZCase {
    /// |alpha| odd, Z = 2|alpha|.
    Odd,
    /// |alpha| = 2 mod 4, Z = |alpha|/2.
    TwoModFour,
    /// 4 | |alpha|, Z = |alpha|.
    ZeroModFour,
}

impl ZCase {
    pub fn of_order(alpha_order: u64) -> ZCase {
        match alpha_order % 4 {
            0 => ZCase::ZeroModFour,
            2 => ZCase::TwoModFour,
            _ => ZCase::Odd,
        }
    }

    pub fn entry_point(self, alpha_order: u64) -> u64 {
        match self {
            ZCase::Odd => 2 * alpha_order,
            ZCase::TwoModFour => alpha_order / 2,
            ZCase::ZeroModFour => alpha_order,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ZCase::Odd => "odd",
            ZCase::TwoModFour => "≡ 2 (mod 4)",
            ZCase::ZeroModFour => "≡ 0 (mod 4)",
        }
    }
}

impl fmt::Display for ZCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryPointRecord {
    pub p: u64,
    /// (p/5): +1, -1, or 0 at p = 5.
    pub epsilon: i8,
    pub group_order: Option<u64>,
    pub alpha_order: Option<u64>,
    pub case: Option<ZCase>,
    pub z: u64,
    /// `ord_q(Z(p))` for every prime q dividing Z(p).
    pub valuations: BTreeMap<u64, u32>,
}

/// Walks (F_n, F_{n+1}) mod `p` until F_n = 0. Works for any modulus >= 2.
pub fn entry_point_naive(p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    let (mut f, mut g) = (1u64 % p, 1u64 % p);
    let mut n = 1u64;
    while f != 0 {
        (f, g) = (g, add_mod(f, g, p));
        n += 1;
    }
    Ok(n)
}

fn valuation_map(z: u64) -> Result<BTreeMap<u64, u32>> {
    Ok(factorize(z)?.factors().iter().copied().collect())
}

/// Order-based entry point for primes other than 2 and 5.
pub fn entry_point_fast(p: u64) -> Result<EntryPointRecord> {
    check_group_prime(p)?;
    let info = group_order_unchecked(p);
    let order_factors = factorize(info.order)?;
    let alpha_order = order_with_factors(&alpha_unchecked(p), info.order, order_factors.factors());
    let case = ZCase::of_order(alpha_order);
    let z = case.entry_point(alpha_order);
    Ok(EntryPointRecord {
        p,
        epsilon: info.epsilon,
        group_order: Some(info.order),
        alpha_order: Some(alpha_order),
        case: Some(case),
        z,
        valuations: valuation_map(z)?,
    })
}

/// Record for any prime; 2 and 5 go through the sequence walk.
pub fn entry_point(p: u64) -> Result<EntryPointRecord> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || p == 5 {
        let z = entry_point_naive(p)?;
        return Ok(EntryPointRecord {
            p,
            epsilon: legendre_mod5(p),
            group_order: None,
            alpha_order: None,
            case: None,
            z,
            valuations: valuation_map(z)?,
        });
    }
    entry_point_fast(p)
}

/// `ord_q(|alpha|)` given the group order `n`, without factoring `n`:
/// kill the prime-to-q part, then count multiplications by q.
pub(crate) fn alpha_order_valuation_unchecked(p: u64, n: u64, q: u64) -> u32 {
    let e = valuation(n, q);
    let q_part = q.pow(e);
    let mut gamma = alpha_unchecked(p).scalar_mul(n / q_part);
    let mut s = 0;
    while !gamma.is_identity() {
        gamma = gamma.scalar_mul(q);
        s += 1;
    }
    debug_assert!(s <= e);
    s
}

pub(crate) fn z_valuation_from_alpha(q: u64, alpha_valuation: u32) -> u32 {
    if q == 2 {
        match alpha_valuation {
            0 => 1,
            1 => 0,
            v => v,
        }
    } else {
        alpha_valuation
    }
}

/// `ord_q(|alpha|)` in G(F_p).
pub fn q_adic_valuation_of_alpha_order(p: u64, q: u64) -> Result<u32> {
    check_group_prime(p)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let n = group_order_unchecked(p).order;
    Ok(alpha_order_valuation_unchecked(p, n, q))
}

/// `ord_q(Z(p))`, using the factor-of-two cases for q = 2.
pub fn q_adic_valuation_of_z(p: u64, q: u64) -> Result<u32> {
    let v = q_adic_valuation_of_alpha_order(p, q)?;
    Ok(z_valuation_from_alpha(q, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_examples() {
        assert_eq!(entry_point_naive(11).unwrap(), 10);
        assert_eq!(entry_point_naive(2).unwrap(), 3);
        assert_eq!(entry_point_naive(7).unwrap(), 8);
        assert_eq!(entry_point_naive(5).unwrap(), 5);
        assert_eq!(entry_point_naive(3).unwrap(), 4);
        assert_eq!(entry_point_naive(1), Err(Error::ModulusTooSmall(1)));
    }

    #[test]
    fn fast_examples() {
        let r = entry_point_fast(11).unwrap();
        assert_eq!((r.alpha_order, r.case, r.z), (Some(5), Some(ZCase::Odd), 10));
        assert_eq!(r.valuations, BTreeMap::from([(2, 1), (5, 1)]));
        let r = entry_point_fast(13).unwrap();
        assert_eq!((r.alpha_order, r.case, r.z), (Some(14), Some(ZCase::TwoModFour), 7));
        let r = entry_point_fast(7).unwrap();
        assert_eq!((r.alpha_order, r.case, r.z), (Some(8), Some(ZCase::ZeroModFour), 8));
        assert_eq!(r.group_order, Some(8));
        assert_eq!(r.epsilon, -1);
    }

    #[test]
    fn fast_rejects_excluded() {
        assert_eq!(entry_point_fast(2), Err(Error::ExcludedPrime(2)));
        assert_eq!(entry_point_fast(5), Err(Error::ExcludedPrime(5)));
        assert_eq!(entry_point_fast(15), Err(Error::NotPrime(15)));
    }

    #[test]
    fn dispatching_record() {
        let r = entry_point(5).unwrap();
        assert_eq!((r.z, r.epsilon, r.alpha_order), (5, 0, None));
        let r = entry_point(2).unwrap();
        assert_eq!((r.z, r.epsilon), (3, -1));
        assert_eq!(entry_point(12), Err(Error::NotPrime(12)));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q_adic_valuation_of_alpha_order(11, 5).unwrap(), 1);
        assert_eq!(q_adic_valuation_of_alpha_order(11, 2).unwrap(), 0);
        assert_eq!(q_adic_valuation_of_alpha_order(13, 7).unwrap(), 1);
        assert_eq!(q_adic_valuation_of_z(11, 2).unwrap(), 1);
        assert_eq!(q_adic_valuation_of_z(13, 2).unwrap(), 0);
        assert_eq!(q_adic_valuation_of_z(7, 2).unwrap(), 3);
    }

    #[test]
    fn large_prime() {
        // 10^18 + 9 is prime
        let p = 1_000_000_000_000_000_009u64;
        let r = entry_point_fast(p).unwrap();
        assert!(r.z <= p + 1);
        let f = crate::fib::fib_pair_mod(r.z, p).unwrap();
        assert_eq!(f.first, 0);
        for &q in r.valuations.keys() {
            assert_ne!(crate::fib::fib_pair_mod(r.z / q, p).unwrap().first, 0);
        }
    }
}
