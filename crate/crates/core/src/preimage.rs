//! Existence and depth of l^n-th preimages in the cyclic group G(F_p).
//!
//! In a cyclic group of order N, a point P has an l^n-th preimage exactly
//! when (N / l^min(n, v)) P is the identity, with v = ord_l(N).

use std::fmt;

use serde::Serialize;

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime};
use crate::torus::{
    alpha_unchecked, check_group_prime, enumerate_points, group_order_unchecked, order_with_factors,
    TorusPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PreimageDepth {
    Finite(u32),
    /// Preimages of every depth exist; l does not divide the point's order.
    Infinite,
}

impl fmt::Display for PreimageDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreimageDepth::Finite(m) => write!(f, "{m}"),
            PreimageDepth::Infinite => f.write_str("INFINITE"),
        }
    }
}

fn check_ell(ell: u64) -> Result<()> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(Error::NotPrime(ell))
    }
}

/// Whether some beta in G(F_p) satisfies `ell^n * beta = point`.
pub fn has_preimage_power(point: &TorusPoint, ell: u64, n: u32) -> Result<bool> {
    check_ell(ell)?;
    Ok(has_preimage_power_unchecked(point, ell, n))
}

fn has_preimage_power_unchecked(point: &TorusPoint, ell: u64, n: u32) -> bool {
    if n == 0 {
        return true;
    }
    let order = group_order_unchecked(point.modulus()).order;
    let v = valuation(order, ell);
    let kill = order / ell.pow(n.min(v));
    point.scalar_mul(kill).is_identity()
}

/// Largest m such that `point` has an `ell^m`-th preimage.
pub fn max_preimage_depth(point: &TorusPoint, ell: u64) -> Result<PreimageDepth> {
    check_ell(ell)?;
    let order = group_order_unchecked(point.modulus()).order;
    let v = valuation(order, ell);
    // depth v already reaches the full l-part, so l does not divide |point|
    if has_preimage_power_unchecked(point, ell, v) {
        return Ok(PreimageDepth::Infinite);
    }
    let mut m = 0;
    while m + 1 < v && has_preimage_power_unchecked(point, ell, m + 1) {
        m += 1;
    }
    Ok(PreimageDepth::Finite(m))
}

/// Exhaustive search for beta with `ell * beta = point`; only for p <= 10^4.
pub fn find_preimage_oracle(point: &TorusPoint, ell: u64) -> Result<Option<TorusPoint>> {
    check_ell(ell)?;
    Ok(enumerate_points(point.modulus())?
        .into_iter()
        .find(|beta| beta.scalar_mul(ell) == *point))
}

/// Checks `ord_l(|alpha|) = ord_l(|G(F_p)|) - m` with m the maximal preimage
/// depth of alpha, or that the depth is infinite when l does not divide |alpha|.
pub fn verify_order_preimage_relation(p: u64, ell: u64) -> Result<bool> {
    check_group_prime(p)?;
    check_ell(ell)?;
    let order = group_order_unchecked(p).order;
    let alpha = alpha_unchecked(p);
    let alpha_order = order_with_factors(&alpha, order, factorize(order)?.factors());
    let depth = max_preimage_depth(&alpha, ell)?;
    let alpha_val = valuation(alpha_order, ell);
    Ok(match depth {
        PreimageDepth::Infinite => alpha_val == 0,
        PreimageDepth::Finite(m) => {
            alpha_val > 0 && alpha_val as i64 == valuation(order, ell) as i64 - m as i64
        }
    })
}
