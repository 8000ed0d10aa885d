//! Fibonacci and Lucas numbers modulo an arbitrary modulus by fast doubling.

use crate::arith::{add_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Consecutive terms `(a_index, a_{index+1})` of a sequence reduced mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequencePair {
    pub first: u64,
    pub second: u64,
    pub index: u64,
    pub modulus: u64,
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 2 {
        Err(Error::ModulusTooSmall(modulus))
    } else {
        Ok(())
    }
}

/// `(F_n, F_{n+1}) mod modulus`.
pub fn fib_pair_mod(n: u64, modulus: u64) -> Result<SequencePair> {
    check_modulus(modulus)?;
    let m = modulus;
    let (mut f, mut g) = (0u64, 1u64); // F_k, F_{k+1} with k = 0
    for bit in (0..64 - n.leading_zeros()).rev() {
        // F_2k = F_k (2 F_{k+1} - F_k), F_2k+1 = F_k^2 + F_{k+1}^2
        let two_g = add_mod(g, g, m);
        let even = mul_mod(f, sub_mod(two_g, f, m), m);
        let odd = add_mod(mul_mod(f, f, m), mul_mod(g, g, m), m);
        if (n >> bit) & 1 == 1 {
            (f, g) = (odd, add_mod(even, odd, m));
        } else {
            (f, g) = (even, odd);
        }
    }
    Ok(SequencePair {
        first: f,
        second: g,
        index: n,
        modulus,
    })
}

/// `(L_n, L_{n+1}) mod modulus`, doubled on the Lucas sequence itself:
/// `L_2k = L_k^2 - 2(-1)^k` and `L_2k+1 = L_k L_{k+1} - (-1)^k`.
pub fn lucas_pair_mod(n: u64, modulus: u64) -> Result<SequencePair> {
    check_modulus(modulus)?;
    let m = modulus;
    let two = 2 % m;
    let one = 1 % m;
    let (mut l, mut l1) = (two, one); // L_k, L_{k+1} with k = 0
    let mut k: u64 = 0;
    for bit in (0..64 - n.leading_zeros()).rev() {
        let k_odd = k & 1 == 1;
        let sq = mul_mod(l, l, m);
        let cross = mul_mod(l, l1, m);
        let (even, odd) = if k_odd {
            (add_mod(sq, two, m), add_mod(cross, one, m))
        } else {
            (sub_mod(sq, two, m), sub_mod(cross, one, m))
        };
        if (n >> bit) & 1 == 1 {
            (l, l1) = (odd, add_mod(even, odd, m));
            k = 2 * k + 1;
        } else {
            (l, l1) = (even, odd);
            k *= 2;
        }
    }
    Ok(SequencePair {
        first: l,
        second: l1,
        index: n,
        modulus,
    })
}

/// Checks, modulo `modulus` at index `n`:
///
/// * `L_n^2 - 5 F_n^2 = 4(-1)^n`
/// * `L_n^2 = L_2n + 2(-1)^n`
/// * `F_2n = F_n L_n`
/// * `5 F_n = L_{n+1} + L_{n-1}`
/// * `L_n = F_{n+1} + F_{n-1}`
///
/// At `n = 0` the terms at index -1 are `F_{-1} = 1`, `L_{-1} = -1`.
pub fn verify_identities(n: u64, modulus: u64) -> Result<bool> {
    check_modulus(modulus)?;
    let m = modulus;
    let fib = fib_pair_mod(n, m)?;
    let luc = lucas_pair_mod(n, m)?;
    let (f_n, f_next) = (fib.first, fib.second);
    let (l_n, l_next) = (luc.first, luc.second);
    let (f_prev, l_prev) = if n == 0 {
        (1 % m, m - 1)
    } else {
        (fib_pair_mod(n - 1, m)?.first, lucas_pair_mod(n - 1, m)?.first)
    };
    let doubled = n.checked_mul(2).ok_or(Error::Overflow("index doubling"))?;
    let f_2n = fib_pair_mod(doubled, m)?.first;
    let l_2n = lucas_pair_mod(doubled, m)?.first;

    let sign = |c: u64| -> u64 {
        let c = c % m;
        if n.is_multiple_of(2) {
            c
        } else {
            sub_mod(0, c, m)
        }
    };
    let five = 5 % m;
    let l_sq = mul_mod(l_n, l_n, m);
    let f_sq = mul_mod(f_n, f_n, m);

    let norm = sub_mod(l_sq, mul_mod(five, f_sq, m), m) == sign(4);
    let lucas_square = l_sq == add_mod(l_2n, sign(2), m);
    let fib_double = f_2n == mul_mod(f_n, l_n, m);
    let five_fib = mul_mod(five, f_n, m) == add_mod(l_next, l_prev, m);
    let lucas_sum = l_n == add_mod(f_next, f_prev, m);
    Ok(norm && lucas_square && fib_double && five_fib && lucas_sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iterative(n: u64, m: u64, a0: u64, a1: u64) -> (u64, u64) {
        let (mut a, mut b) = (a0 % m, a1 % m);
        for _ in 0..n {
            (a, b) = (b, add_mod(a, b, m));
        }
        (a, b)
    }

    #[test]
    fn fib_examples() {
        let p = fib_pair_mod(10, 11).unwrap();
        assert_eq!((p.first, p.second), (0, 1));
        let p = fib_pair_mod(0, 97).unwrap();
        assert_eq!((p.first, p.second), (0, 1));
        // F_20 = 6765, F_21 = 10946
        let p = fib_pair_mod(20, 1000).unwrap();
        assert_eq!((p.first, p.second), (765, 946));
    }

    #[test]
    fn lucas_examples() {
        let p = lucas_pair_mod(0, 97).unwrap();
        assert_eq!((p.first, p.second), (2, 1));
        let p = lucas_pair_mod(10, 1000).unwrap();
        assert_eq!((p.first, p.second), (123, 199));
        let p = lucas_pair_mod(4, 11).unwrap();
        assert_eq!((p.first, p.second), (7, 0));
    }

    #[test]
    fn rejects_small_modulus() {
        assert_eq!(fib_pair_mod(3, 1), Err(Error::ModulusTooSmall(1)));
        assert_eq!(lucas_pair_mod(3, 0), Err(Error::ModulusTooSmall(0)));
        assert!(verify_identities(3, 1).is_err());
    }

    #[test]
    fn identity_examples() {
        assert!(verify_identities(7, 101).unwrap());
        assert!(verify_identities(0, 97).unwrap());
        assert!(verify_identities(13, 2).unwrap());
    }

    #[test]
    fn agrees_with_iteration() {
        for m in [2u64, 3, 10, 97, 1_000_000_007] {
            let (mut f, mut f1) = (0u64, 1 % m);
            let (mut l, mut l1) = (2 % m, 1 % m);
            for n in 0..=10_000u64 {
                let fp = fib_pair_mod(n, m).unwrap();
                assert_eq!((fp.first, fp.second), (f, f1), "F_{n} mod {m}");
                let lp = lucas_pair_mod(n, m).unwrap();
                assert_eq!((lp.first, lp.second), (l, l1), "L_{n} mod {m}");
                (f, f1) = (f1, add_mod(f, f1, m));
                (l, l1) = (l1, add_mod(l, l1, m));
            }
        }
        assert_eq!(iterative(20, 1000, 0, 1), (765, 946));
    }

    #[test]
    fn huge_modulus_and_index() {
        let m = u64::MAX - 58;
        let p = fib_pair_mod(u64::MAX, m).unwrap();
        assert!(p.first < m && p.second < m);
        assert!(verify_identities(1 << 40, m).unwrap());
    }
}
