//! The group G(F_p) of points on x^2 - 5y^2 = 1 over a prime field,
//! with law (x1 x2 + 5 y1 y2, x1 y2 + x2 y1), identity (1, 0) and inverse (x, -y).

use std::fmt;

use serde::Serialize;

use crate::arith::{add_mod, inv_mod, legendre_mod5, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::factor::{is_prime, Factorization};

/// Largest prime accepted by the enumeration oracles.
pub const ORACLE_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TorusPoint {
    x: u64,
    y: u64,
    p: u64,
}

pub(crate) fn check_group_prime(p: u64) -> Result<()> {
    if p == 2 || p == 5 {
        return Err(Error::ExcludedPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

impl TorusPoint {
    /// Validates the curve equation; coordinates are reduced mod `p` first.
    pub fn new(x: u64, y: u64, p: u64) -> Result<Self> {
        check_group_prime(p)?;
        let (x, y) = (x % p, y % p);
        let lhs = sub_mod(mul_mod(x, x, p), mul_mod(5, mul_mod(y, y, p), p), p);
        if lhs != 1 {
            return Err(Error::NotOnCurve { x, y, p });
        }
        Ok(TorusPoint { x, y, p })
    }

    /// Caller guarantees `p` is a prime other than 2, 5.
    pub(crate) fn identity_unchecked(p: u64) -> Self {
        TorusPoint { x: 1, y: 0, p }
    }

    pub fn identity(p: u64) -> Result<Self> {
        check_group_prime(p)?;
        Ok(Self::identity_unchecked(p))
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.x == 1 && self.y == 0
    }

    pub fn neg(&self) -> Self {
        TorusPoint {
            x: self.x,
            y: sub_mod(0, self.y, self.p),
            p: self.p,
        }
    }

    pub fn add(&self, other: &TorusPoint) -> Result<TorusPoint> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(self.add_same(other))
    }

    pub(crate) fn add_same(&self, other: &TorusPoint) -> TorusPoint {
        let p = self.p;
        let yy = mul_mod(self.y, other.y, p);
        let x = add_mod(mul_mod(self.x, other.x, p), mul_mod(5, yy, p), p);
        let y = add_mod(mul_mod(self.x, other.y, p), mul_mod(other.x, self.y, p), p);
        TorusPoint { x, y, p }
    }

    /// `n`-fold sum by double-and-add.
    pub fn scalar_mul(&self, mut n: u64) -> TorusPoint {
        let mut acc = Self::identity_unchecked(self.p);
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.add_same(&base);
            }
            base = base.add_same(&base);
            n >>= 1;
        }
        acc
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Free-function form of the group law.
pub fn add(a: &TorusPoint, b: &TorusPoint) -> Result<TorusPoint> {
    a.add(b)
}

pub fn scalar_mul(n: u64, point: &TorusPoint) -> TorusPoint {
    point.scalar_mul(n)
}

pub(crate) fn alpha_unchecked(p: u64) -> TorusPoint {
    let half = p.div_ceil(2);
    TorusPoint {
        x: mul_mod(3, half, p),
        y: half,
        p,
    }
}

/// The point (3/2, 1/2).
pub fn alpha(p: u64) -> Result<TorusPoint> {
    check_group_prime(p)?;
    Ok(alpha_unchecked(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupOrderInfo {
    pub p: u64,
    /// (p/5), either +1 or -1.
    pub epsilon: i8,
    /// `p - epsilon`.
    pub order: u64,
}

pub(crate) fn group_order_unchecked(p: u64) -> GroupOrderInfo {
    let epsilon = legendre_mod5(p);
    let order = if epsilon == 1 { p - 1 } else { p + 1 };
    GroupOrderInfo { p, epsilon, order }
}

pub fn group_order(p: u64) -> Result<GroupOrderInfo> {
    check_group_prime(p)?;
    Ok(group_order_unchecked(p))
}

fn check_oracle_bound(p: u64) -> Result<()> {
    if p > ORACLE_BOUND {
        return Err(Error::BoundExceeded {
            what: "oracle prime",
            value: p as u128,
            bound: ORACLE_BOUND as u128,
        });
    }
    Ok(())
}

/// Every point of G(F_p), ordered by x then y, found by exhaustive search
/// over (x, y) with a table of square roots.
pub fn enumerate_points(p: u64) -> Result<Vec<TorusPoint>> {
    check_group_prime(p)?;
    check_oracle_bound(p)?;
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
    for y in 0..p {
        roots[mul_mod(5, mul_mod(y, y, p), p) as usize].push(y);
    }
    let mut points = Vec::new();
    for x in 0..p {
        let target = sub_mod(mul_mod(x, x, p), 1, p);
        for &y in &roots[target as usize] {
            points.push(TorusPoint { x, y, p });
        }
    }
    Ok(points)
}

/// Number of solutions of x^2 - 5y^2 = 1 mod p by exhaustive search.
pub fn count_points_oracle(p: u64) -> Result<u64> {
    Ok(enumerate_points(p)?.len() as u64)
}

fn check_sqrt5(p: u64, sqrt5: u64) -> Result<()> {
    if legendre_mod5(p) != 1 {
        return Err(Error::NoSqrt5(p));
    }
    if mul_mod(sqrt5 % p, sqrt5 % p, p) != 5 % p {
        return Err(Error::InvalidSqrt5(sqrt5, p));
    }
    Ok(())
}

/// Twist isomorphism onto F_p^*: `(x, y) -> x + sqrt5 * y`.
pub fn to_multiplicative(point: &TorusPoint, sqrt5: u64) -> Result<u64> {
    let p = point.p;
    check_sqrt5(p, sqrt5)?;
    Ok(add_mod(point.x, mul_mod(sqrt5 % p, point.y, p), p))
}

/// Inverse twist: `t -> ((t + 1/t) / 2, (t - 1/t) / (2 sqrt5))`.
pub fn from_multiplicative(t: u64, sqrt5: u64, p: u64) -> Result<TorusPoint> {
    check_group_prime(p)?;
    check_sqrt5(p, sqrt5)?;
    let t = t % p;
    let t_inv = inv_mod(t, p).ok_or_else(|| Error::OutOfRange(format!("0 is not a unit mod {p}")))?;
    let half = p.div_ceil(2);
    let inv_two_root = inv_mod(mul_mod(2, sqrt5 % p, p), p).ok_or(Error::InvalidSqrt5(sqrt5, p))?;
    let x = mul_mod(add_mod(t, t_inv, p), half, p);
    let y = mul_mod(sub_mod(t, t_inv, p), inv_two_root, p);
    TorusPoint::new(x, y, p)
}

/// Least `n >= 1` with `n * point = (1, 0)`, by stripping prime factors off
/// the group order while the point stays killed.
pub fn element_order(point: &TorusPoint, order_factorization: &Factorization) -> Result<u64> {
    let info = group_order_unchecked(point.p);
    if order_factorization.value() != info.order {
        return Err(Error::FactorizationMismatch {
            factored: order_factorization.value(),
            order: info.order,
        });
    }
    Ok(order_with_factors(point, info.order, order_factorization.factors()))
}

pub(crate) fn order_with_factors(point: &TorusPoint, group_order: u64, factors: &[(u64, u32)]) -> u64 {
    let mut n = group_order;
    for &(q, e) in factors {
        for _ in 0..e {
            if point.scalar_mul(n / q).is_identity() {
                n /= q;
            } else {
                break;
            }
        }
    }
    n
}
