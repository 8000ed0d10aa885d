//! Empirical densities of primes by divisibility of Z(p).

pub mod scan;
pub mod sieve;

pub use scan::{compare, scan, DensityReport, DivisorEntry, JointEntry, JointTarget, ScanConfig};
pub use sieve::{prime_count, primes_up_to, primes_with_segment, Primes};
