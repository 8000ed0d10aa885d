//! Counting in the affine group I(m) = { ax + b : a in (Z/mZ)^*, b in Z/mZ }
//! and in its index-2 subgroup of I(10^k) where b is even exactly when
//! a = 1 or 4 (mod 5). Brute-force counts sit next to the closed forms they
//! check, and the exact density formulas live here too.

use std::fmt;

use serde::Serialize;

use crate::arith::{add_mod, gcd, inv_mod, mul_mod, valuation};
use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime};
use crate::rational::{checked_ipow, ExactRational};

/// Upper bound on the number of elements materialized by an enumeration.
pub const ENUMERATION_BOUND: u128 = 1_000_000;
/// Upper bound on the modulus whose units are iterated by the counters.
pub const UNIT_SCAN_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AffineElement {
    pub a: u64,
    pub b: u64,
    pub m: u64,
}

impl AffineElement {
    pub fn new(a: u64, b: u64, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::ModulusTooSmall(m));
        }
        let (a, b) = (a % m, b % m);
        if gcd(a, m) != 1 {
            return Err(Error::OutOfRange(format!("{a} is not a unit mod {m}")));
        }
        Ok(AffineElement { a, b, m })
    }

    pub fn identity(m: u64) -> Self {
        AffineElement { a: 1, b: 0, m }
    }

    /// `self ∘ other`: x -> a1 (a2 x + b2) + b1.
    pub fn compose(&self, other: &AffineElement) -> Result<AffineElement> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m, other.m));
        }
        let m = self.m;
        Ok(AffineElement {
            a: mul_mod(self.a, other.a, m),
            b: add_mod(mul_mod(self.a, other.b, m), self.b, m),
            m,
        })
    }

    pub fn inverse(&self) -> AffineElement {
        let m = self.m;
        let a_inv = inv_mod(self.a, m).expect("affine coefficient is a unit");
        AffineElement {
            a: a_inv,
            b: mul_mod(m - self.b % m, a_inv, m) % m,
            m,
        }
    }

    pub fn apply(&self, x: u64) -> u64 {
        add_mod(mul_mod(self.a, x % self.m, self.m), self.b, self.m)
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {} (mod {})", self.a, self.b, self.m)
    }
}

fn totient(m: u64) -> Result<u64> {
    let f = factorize(m)?;
    Ok(f.factors()
        .iter()
        .fold(m, |acc, &(q, _)| acc / q * (q - 1)))
}

fn check_enumeration(what: &'static str, size: u128) -> Result<()> {
    if size > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            what,
            value: size,
            bound: ENUMERATION_BOUND,
        });
    }
    Ok(())
}

/// Every element of I(m), ordered by a then b.
pub fn enumerate_affine_group(m: u64) -> Result<Vec<AffineElement>> {
    if m < 2 {
        return Err(Error::ModulusTooSmall(m));
    }
    check_enumeration("|I(m)|", totient(m)? as u128 * m as u128)?;
    let mut out = Vec::new();
    for a in (1..m).filter(|&a| gcd(a, m) == 1) {
        out.extend((0..m).map(|b| AffineElement { a, b, m }));
    }
    Ok(out)
}

/// Whether `(a, b)` mod 10^k satisfies the parity coupling.
pub fn is_coupled(a: u64, b: u64) -> bool {
    b.is_multiple_of(2) == matches!(a % 5, 1 | 4)
}

fn ten_power(k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    10u64
        .checked_pow(k)
        .ok_or(Error::Overflow("10^k"))
}

/// The index-2 subgroup of I(10^k) cut out by the parity coupling.
pub fn enumerate_coupled_subgroup(k: u32) -> Result<Vec<AffineElement>> {
    let m = ten_power(k)?;
    check_enumeration("|I(10^k)|", 4 * (m as u128 / 10) * m as u128)?;
    Ok(enumerate_affine_group(m)?
        .into_iter()
        .filter(|e| is_coupled(e.a, e.b))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Brute,
    Closed,
}

/// A subset count against the size of the ambient group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountResult {
    /// Raw count; integral for brute-force results.
    pub count: ExactRational,
    pub group_size: u128,
    pub method: CountMethod,
}

impl CountResult {
    pub fn ratio(&self) -> ExactRational {
        self.count
            .checked_div(&ExactRational::integer(self.group_size as i128))
            .expect("group size is nonzero and fits")
    }

    pub fn decimal(&self) -> f64 {
        self.ratio().to_f64()
    }
}

fn prime_power(ell: u64, k: u32) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    ell.checked_pow(k).ok_or(Error::Overflow("ell^k"))
}

fn check_unit_scan(m: u64) -> Result<()> {
    if m > UNIT_SCAN_BOUND {
        return Err(Error::BoundExceeded {
            what: "modulus",
            value: m as u128,
            bound: UNIT_SCAN_BOUND as u128,
        });
    }
    Ok(())
}

fn check_t(k: u32, t: u32) -> Result<()> {
    if t < 1 || t >= k {
        return Err(Error::OutOfRange(format!("t = {t} must satisfy 1 <= t < k = {k}")));
    }
    Ok(())
}

/// Units mod `m` paired with `ord_ell(a - 1)`, skipping a = 1.
fn units_with_depth(m: u64, ell: u64) -> impl Iterator<Item = (u64, u32)> {
    (2..m)
        .filter(move |&a| a % ell != 0)
        .map(move |a| (a, valuation(a - 1, ell)))
}

/// |{(a, b) in I(ell^k) : a != 1, n = ord(a - 1) >= t, ell^(n-t+1) ∤ b}|,
/// iterating over a and counting b by divisibility.
pub fn count_d_prime_bruteforce(k: u32, t: u32, ell: u64) -> Result<CountResult> {
    check_t(k, t)?;
    let m = prime_power(ell, k)?;
    check_unit_scan(m)?;
    let mut count: u128 = 0;
    for (_, n) in units_with_depth(m, ell) {
        if n >= t {
            let blocked = ell.pow(n - t + 1);
            count += (m - m / blocked) as u128;
        }
    }
    Ok(CountResult {
        count: ExactRational::integer(count as i128),
        group_size: (m / ell * (ell - 1)) as u128 * m as u128,
        method: CountMethod::Brute,
    })
}

/// Closed forms for the prime-power D-set: the count
/// (l^(2k-t+1) - l^(k+1) + l^t - l^k) / (l + 1) and the ratio
/// (l^(2-t) - l^(2-k) - l^(1-k) + l^(1-2k+t)) / (l^2 - 1), which must agree.
pub fn count_d_prime_closed(k: u32, t: u32, ell: u64) -> Result<CountResult> {
    check_t(k, t)?;
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let l = ell as i128;
    let (k, t) = (k as i64, t as i64);
    let p = |e: i64| ExactRational::pow(l, e);
    let ip = |e: i64| checked_ipow(l, e as u64);

    let numerator = ip(2 * k - t + 1)?
        .checked_sub(ip(k + 1)?)
        .and_then(|v| v.checked_add(ip(t).ok()?))
        .and_then(|v| v.checked_sub(ip(k).ok()?))
        .ok_or(Error::Overflow("closed count"))?;
    if numerator % (l + 1) != 0 {
        return Err(Error::ClosedFormInconsistent(format!(
            "{numerator} is not divisible by {}",
            l + 1
        )));
    }
    let count = numerator / (l + 1);
    let group_size = ip(2 * k - 1)?
        .checked_mul(l - 1)
        .ok_or(Error::Overflow("group size"))?;

    let ratio = p(2 - t)?
        .checked_sub(&p(2 - k)?)?
        .checked_sub(&p(1 - k)?)?
        .checked_add(&p(1 - 2 * k + t)?)?
        .checked_div(&ExactRational::integer(l * l - 1))?;
    let from_count = ExactRational::new(count, group_size)?;
    if ratio != from_count {
        return Err(Error::ClosedFormInconsistent(format!(
            "count ratio {from_count} vs density formula {ratio}"
        )));
    }
    Ok(CountResult {
        count: ExactRational::integer(count),
        group_size: group_size as u128,
        method: CountMethod::Closed,
    })
}

fn check_ten_params(k: u32, t1: u32, t2: u32) -> Result<()> {
    if t2 == 0 {
        return Err(Error::OutOfRange("t2 must be at least 1".into()));
    }
    if t1 >= k || t2 >= k {
        return Err(Error::OutOfRange(format!(
            "t1 = {t1}, t2 = {t2} must both be below k = {k}"
        )));
    }
    Ok(())
}

fn coupled_size(k: u32) -> u128 {
    // |I(10^k)| / 2 = 2 * 10^(2k-1)
    2 * 10u128.pow(2 * k - 1)
}

/// Elements of the coupled subgroup with a != 1 mod 2^k and mod 5^k,
/// n2 = ord_5(a-1) >= t2 with 5^(n2-t2+1) ∤ b, and when t1 >= 1 also
/// n1 = ord_2(a-1) >= t1 with 2^(n1-t1+1) ∤ b. Only k <= 3.
pub fn count_d_ten_bruteforce(k: u32, t1: u32, t2: u32) -> Result<CountResult> {
    check_ten_params(k, t1, t2)?;
    if k > 3 {
        return Err(Error::BoundExceeded {
            what: "k",
            value: k as u128,
            bound: 3,
        });
    }
    let m = ten_power(k)?;
    let (two_k, five_k) = (2u64.pow(k), 5u64.pow(k));
    let mut count: u64 = 0;
    for a in (1..m).filter(|&a| gcd(a, 10) == 1) {
        let d = a - 1;
        if d % two_k == 0 || d % five_k == 0 {
            continue;
        }
        let n2 = valuation(d, 5);
        if n2 < t2 {
            continue;
        }
        let five_block = 5u64.pow(n2 - t2 + 1);
        let two_block = if t1 >= 1 {
            let n1 = valuation(d, 2);
            if n1 < t1 {
                continue;
            }
            Some(2u64.pow(n1 - t1 + 1))
        } else {
            None
        };
        count += (0..m)
            .filter(|&b| is_coupled(a, b))
            .filter(|&b| b % five_block != 0)
            .filter(|&b| two_block.is_none_or(|blk| b % blk != 0))
            .count() as u64;
    }
    Ok(CountResult {
        count: ExactRational::integer(count as i128),
        group_size: coupled_size(k),
        method: CountMethod::Brute,
    })
}

/// The printed density formulas for the ten-coupled D-set: nine terms when
/// t1 > 0, six terms when t1 = 0. Returned as a count over the subgroup size.
pub fn count_d_ten_closed(k: u32, t1: u32, t2: u32) -> Result<CountResult> {
    check_ten_params(k, t1, t2)?;
    let (k, t1, t2) = (k as i64, t1 as i64, t2 as i64);
    // c / (2^e2 5^e5), with c possibly negative
    let term = |c: i128, d: i128, e2: i64, e5: i64| -> Result<ExactRational> {
        ExactRational::new(c, d)?
            .checked_mul(&ExactRational::pow(2, -e2)?)?
            .checked_mul(&ExactRational::pow(5, -e5)?)
    };
    let terms = if t1 > 0 {
        vec![
            term(25, 36, t1, t2)?,
            term(-5, 6, t1, k)?,
            term(5, 36, t1, 2 * k - t2)?,
            term(5, 2, k, k)?,
            term(-5, 12, k, 2 * k - t2)?,
            term(-25, 12, k, t2)?,
            term(5, 18, 2 * k - t1, 2 * k - t2)?,
            term(25, 18, 2 * k - t1, t2)?,
            term(-5, 3, 2 * k - t1, k)?,
        ]
    } else {
        vec![
            term(25, 9, 0, t2)?,
            term(-25, 9, 2 * k, t2)?,
            term(5, 9, 0, 2 * k - t2)?,
            term(-10, 3, 0, k)?,
            term(-5, 9, 2 * k, 2 * k - t2)?,
            term(10, 3, 2 * k, k)?,
        ]
    };
    let ratio = terms
        .iter()
        .try_fold(ExactRational::ZERO, |acc, t| acc.checked_add(t))?;
    let size = coupled_size(k as u32);
    Ok(CountResult {
        count: ratio.checked_mul(&ExactRational::integer(size as i128))?,
        group_size: size,
        method: CountMethod::Closed,
    })
}

fn check_joint(i: u32, j: u32) -> Result<()> {
    if j > i {
        return Err(Error::OutOfRange(format!("j = {j} exceeds i = {i}")));
    }
    Ok(())
}

/// Pairs in I(q^k) with ord_q(a - 1) = i and ord_q(b) = i - j, where j = 0
/// relaxes the b-condition to ord_q(b) >= i.
pub fn count_joint_pairs_bruteforce(q: u64, k: u32, i: u32, j: u32) -> Result<CountResult> {
    check_joint(i, j)?;
    if i >= k {
        return Err(Error::OutOfRange(format!("i = {i} must be below k = {k}")));
    }
    let m = prime_power(q, k)?;
    check_unit_scan(m)?;
    let b_count = if j == 0 {
        m / q.pow(i)
    } else {
        let d = i - j;
        m / q.pow(d) - m / q.pow(d + 1)
    };
    let a_count = (1..m)
        .filter(|&a| a % q != 0)
        .filter(|&a| a != 1 && valuation(a - 1, q) == i)
        .count() as u128;
    Ok(CountResult {
        count: ExactRational::integer((a_count * b_count as u128) as i128),
        group_size: (m / q * (q - 1)) as u128 * m as u128,
        method: CountMethod::Brute,
    })
}

/// The pair counts as written in the joint-density argument:
/// (q-1)^2 q^(2k-2i+j-2) for i, j >= 1; (q-2) q^(2k-2) for i = 0;
/// (q-1) q^(2k-2i-1) for i >= 1, j = 0.
pub fn joint_pair_count_printed(q: u64, k: u32, i: u32, j: u32) -> Result<CountResult> {
    check_joint(i, j)?;
    if i >= k {
        return Err(Error::OutOfRange(format!("i = {i} must be below k = {k}")));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let qq = q as i128;
    let (k, i, j) = (k as u64, i as u64, j as u64);
    let count = if i == 0 {
        (qq - 2) * checked_ipow(qq, 2 * k - 2)?
    } else if j == 0 {
        (qq - 1) * checked_ipow(qq, 2 * k - 2 * i - 1)?
    } else {
        (qq - 1) * (qq - 1) * checked_ipow(qq, 2 * k - 2 * i + j - 2)?
    };
    Ok(CountResult {
        count: ExactRational::integer(count),
        group_size: ((qq - 1) * checked_ipow(qq, 2 * k - 1)?) as u128,
        method: CountMethod::Closed,
    })
}

/// 1 if 10 ∤ m, 5/4 if m = 10 (mod 20), 1/2 if 20 | m.
pub fn rho(m: u64) -> Result<ExactRational> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    Ok(if m.is_multiple_of(20) {
        ExactRational::new(1, 2)?
    } else if m.is_multiple_of(10) {
        ExactRational::new(5, 4)?
    } else {
        ExactRational::ONE
    })
}

/// zeta(q^e) = q^(2-e) / (q^2 - 1) for e >= 1.
pub fn zeta_prime_power(q: u64, e: u32) -> Result<ExactRational> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if e == 0 {
        return Ok(ExactRational::ONE);
    }
    let q = q as i128;
    ExactRational::pow(q, 2 - e as i64)?.checked_div(&ExactRational::integer(q * q - 1))
}

/// Density of primes p with m | Z(p): rho(m) times the prime-power densities.
pub fn zeta(m: u64) -> Result<ExactRational> {
    let base = rho(m)?;
    factorize(m)?
        .factors()
        .iter()
        .try_fold(base, |acc, &(q, e)| acc.checked_mul(&zeta_prime_power(q, e)?))
}

/// Density of primes with q^i || (p - eps_p) and q^j || Z(p).
pub fn zeta_joint(q: u64, i: u32, j: u32) -> Result<ExactRational> {
    check_joint(i, j)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let qq = q as i128;
    if i == 0 {
        ExactRational::new(qq - 2, qq - 1)
    } else if j == 0 {
        ExactRational::pow(qq, -2 * i as i64)
    } else {
        ExactRational::integer(qq - 1).checked_mul(&ExactRational::pow(qq, -(2 * i as i64 - j as i64 + 1))?)
    }
}
