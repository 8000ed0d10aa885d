//! Arithmetic of the Fibonacci entry point Z(p).
//!
//! The crate computes Z(p) through the torus x^2 - 5y^2 = 1 over F_p, decides
//! preimages under multiplication by a prime, counts subsets of the affine
//! groups I(m) that govern the densities of primes with m | Z(p), and scans
//! primes to compare those densities with observation.

pub mod affine;
pub mod arith;
pub mod cli;
pub mod density;
pub mod entry_point;
pub mod error;
pub mod factor;
pub mod fib;
pub mod preimage;
pub mod rational;
pub mod torus;

pub use affine::{rho, zeta, zeta_joint, AffineElement, CountMethod, CountResult};
pub use entry_point::{entry_point, entry_point_fast, entry_point_naive, EntryPointRecord, ZCase};
pub use error::{Error, Result};
pub use factor::{factorize, is_prime, Factorization};
pub use preimage::PreimageDepth;
pub use rational::ExactRational;
pub use torus::{alpha, group_order, GroupOrderInfo, TorusPoint};
