//! C ABI over the `fibentry` crate.
//!
//! Every fallible call returns a [`FibentryStatus`]; on failure the message is
//! available from [`fibentry_last_error_message`] on the same thread. Scan
//! configurations and reports are opaque handles released with their `_free`
//! functions. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fibentry::affine::{
    count_d_prime_bruteforce, count_d_prime_closed, count_d_ten_bruteforce, count_d_ten_closed,
};
use fibentry::density::{compare, scan, DensityReport, JointTarget, ScanConfig};
use fibentry::entry_point::{entry_point, entry_point_naive, q_adic_valuation_of_z};
use fibentry::fib::{fib_pair_mod, lucas_pair_mod};
use fibentry::preimage::{has_preimage_power, max_preimage_depth};
use fibentry::{alpha, zeta, zeta_joint, CountResult, Error, ExactRational, PreimageDepth, ZCase};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibentryStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    ExcludedPrime = 4,
    BoundExceeded = 5,
    Overflow = 6,
    Internal = 7,
}

/// Which relation between |alpha| and Z(p) applied; `None` for p = 2, 5.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibentryZCase {
    None = 0,
    Odd = 1,
    TwoModFour = 2,
    ZeroModFour = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibentryEntryPoint {
    pub p: u64,
    pub epsilon: i8,
    /// 0 when not defined (p = 2, 5).
    pub group_order: u64,
    /// 0 when not defined (p = 2, 5).
    pub alpha_order: u64,
    pub z: u64,
    pub z_case: FibentryZCase,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibentryRational {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibentryCount {
    /// Raw count as a fraction; the denominator is 1 for brute-force counts.
    pub count: FibentryRational,
    pub group_size: u64,
    pub ratio: FibentryRational,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibentryDivisorEntry {
    pub m: u64,
    pub count: u64,
    pub observed: f64,
    pub predicted: FibentryRational,
    pub abs_error: f64,
    pub flagged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibentryJointEntry {
    pub q: u64,
    pub i: u32,
    pub j: u32,
    pub count: u64,
    pub observed: f64,
    pub predicted: FibentryRational,
    pub abs_error: f64,
    pub flagged: bool,
    pub in_proof_scope: bool,
}

/// Opaque scan configuration.
pub struct FibentryScanConfig(ScanConfig);

/// Opaque compared density report.
pub struct FibentryReport(DensityReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FibentryStatus {
    match e {
        Error::NotPrime(_) => FibentryStatus::NotPrime,
        Error::ExcludedPrime(_) => FibentryStatus::ExcludedPrime,
        Error::BoundExceeded { .. } => FibentryStatus::BoundExceeded,
        Error::Overflow(_) => FibentryStatus::Overflow,
        _ => FibentryStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F>(f: F) -> FibentryStatus
where
    F: FnOnce() -> Result<(), Error>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FibentryStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".to_string());
            FibentryStatus::Internal
        }
    }
}

macro_rules! out_ref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(r) => r,
            None => {
                set_error(concat!("null pointer: ", stringify!($ptr)).to_string());
                return FibentryStatus::NullPointer;
            }
        }
    };
}

fn to_c_rational(r: &ExactRational) -> Result<FibentryRational, Error> {
    let num = i64::try_from(r.numer()).map_err(|_| Error::Overflow("numerator exceeds int64"))?;
    let den = i64::try_from(r.denom()).map_err(|_| Error::Overflow("denominator exceeds int64"))?;
    Ok(FibentryRational { num, den })
}

fn to_c_count(c: &CountResult) -> Result<FibentryCount, Error> {
    Ok(FibentryCount {
        count: to_c_rational(&c.count)?,
        group_size: u64::try_from(c.group_size).map_err(|_| Error::Overflow("group size"))?,
        ratio: to_c_rational(&c.ratio())?,
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fibentry_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn fibentry_is_prime(n: u64) -> bool {
    fibentry::is_prime(n)
}

/// Writes F_n and F_{n+1} mod `modulus`.
///
/// # Safety
/// `f_n` and `f_next` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_fib_mod(n: u64, modulus: u64, f_n: *mut u64, f_next: *mut u64) -> FibentryStatus {
    let a = out_ref!(f_n);
    let b = out_ref!(f_next);
    guard(|| {
        let pair = fib_pair_mod(n, modulus)?;
        (*a, *b) = (pair.first, pair.second);
        Ok(())
    })
}

/// Writes L_n and L_{n+1} mod `modulus`.
///
/// # Safety
/// `l_n` and `l_next` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_lucas_mod(n: u64, modulus: u64, l_n: *mut u64, l_next: *mut u64) -> FibentryStatus {
    let a = out_ref!(l_n);
    let b = out_ref!(l_next);
    guard(|| {
        let pair = lucas_pair_mod(n, modulus)?;
        (*a, *b) = (pair.first, pair.second);
        Ok(())
    })
}

/// Full entry-point record for a prime `p`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_entry_point(p: u64, out: *mut FibentryEntryPoint) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        let r = entry_point(p)?;
        *out = FibentryEntryPoint {
            p: r.p,
            epsilon: r.epsilon,
            group_order: r.group_order.unwrap_or(0),
            alpha_order: r.alpha_order.unwrap_or(0),
            z: r.z,
            z_case: match r.case {
                None => FibentryZCase::None,
                Some(ZCase::Odd) => FibentryZCase::Odd,
                Some(ZCase::TwoModFour) => FibentryZCase::TwoModFour,
                Some(ZCase::ZeroModFour) => FibentryZCase::ZeroModFour,
            },
        };
        Ok(())
    })
}

/// Z(n) by walking the sequence; any modulus n >= 2.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_entry_point_naive(n: u64, out: *mut u64) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = entry_point_naive(n)?;
        Ok(())
    })
}

/// ord_q(Z(p)) for a prime p other than 2 and 5.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_z_valuation(p: u64, q: u64, out: *mut u32) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = q_adic_valuation_of_z(p, q)?;
        Ok(())
    })
}

/// Whether alpha in G(F_p) has an ell^n-th preimage.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_has_preimage_power(p: u64, ell: u64, n: u32, out: *mut bool) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = has_preimage_power(&alpha(p)?, ell, n)?;
        Ok(())
    })
}

/// Maximal preimage depth of alpha under multiplication by ell; -1 means infinite.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_max_preimage_depth(p: u64, ell: u64, out: *mut i64) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = match max_preimage_depth(&alpha(p)?, ell)? {
            PreimageDepth::Finite(m) => m as i64,
            PreimageDepth::Infinite => -1,
        };
        Ok(())
    })
}

/// Predicted density of primes with m | Z(p).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_zeta(m: u64, out: *mut FibentryRational) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = to_c_rational(&zeta(m)?)?;
        Ok(())
    })
}

/// Predicted density of q^i || (p - eps_p) and q^j || Z(p).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_zeta_joint(q: u64, i: u32, j: u32, out: *mut FibentryRational) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        *out = to_c_rational(&zeta_joint(q, i, j)?)?;
        Ok(())
    })
}

/// Prime-power D-set count in I(ell^k), by brute force or by the closed form.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_count_d_prime(
    k: u32,
    t: u32,
    ell: u64,
    closed: bool,
    out: *mut FibentryCount,
) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        let c = if closed {
            count_d_prime_closed(k, t, ell)?
        } else {
            count_d_prime_bruteforce(k, t, ell)?
        };
        *out = to_c_count(&c)?;
        Ok(())
    })
}

/// Ten-coupled D-set count, by brute force (k <= 3) or the printed formula.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_count_d_ten(
    k: u32,
    t1: u32,
    t2: u32,
    closed: bool,
    out: *mut FibentryCount,
) -> FibentryStatus {
    let out = out_ref!(out);
    guard(|| {
        let c = if closed {
            count_d_ten_closed(k, t1, t2)?
        } else {
            count_d_ten_bruteforce(k, t1, t2)?
        };
        *out = to_c_count(&c)?;
        Ok(())
    })
}

/// New scan configuration over the primes up to `x`, one worker, no targets.
#[no_mangle]
pub extern "C" fn fibentry_scan_config_new(x: u64) -> *mut FibentryScanConfig {
    Box::into_raw(Box::new(FibentryScanConfig(ScanConfig::new(x))))
}

/// # Safety
/// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_add_divisor(config: *mut FibentryScanConfig, m: u64) -> FibentryStatus {
    let config = out_ref!(config);
    config.0.divisor_targets.push(m);
    FibentryStatus::Ok
}

/// # Safety
/// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_add_joint(
    config: *mut FibentryScanConfig,
    q: u64,
    i_max: u32,
) -> FibentryStatus {
    let config = out_ref!(config);
    config.0.joint_targets.push(JointTarget { q, i_max });
    FibentryStatus::Ok
}

/// # Safety
/// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_set_workers(config: *mut FibentryScanConfig, workers: u32) -> FibentryStatus {
    let config = out_ref!(config);
    config.0.workers = workers as usize;
    FibentryStatus::Ok
}

/// # Safety
/// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_set_segment_size(
    config: *mut FibentryScanConfig,
    segment_size: u64,
) -> FibentryStatus {
    let config = out_ref!(config);
    config.0.segment_size = segment_size;
    FibentryStatus::Ok
}

/// # Safety
/// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_set_include_small_primes(
    config: *mut FibentryScanConfig,
    include: bool,
) -> FibentryStatus {
    let config = out_ref!(config);
    config.0.include_small_primes = include;
    FibentryStatus::Ok
}

/// # Safety
/// `config` must be null or come from [`fibentry_scan_config_new`]; it is
/// invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_config_free(config: *mut FibentryScanConfig) {
    if !config.is_null() {
        drop(unsafe { Box::from_raw(config) });
    }
}

/// Scans and compares against predictions. On success `*report_out` owns a
/// new report that must be released with [`fibentry_report_free`].
///
/// # Safety
/// `config` must be a live configuration handle and `report_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_scan_run(
    config: *const FibentryScanConfig,
    tolerance: f64,
    report_out: *mut *mut FibentryReport,
) -> FibentryStatus {
    let config = match unsafe { config.as_ref() } {
        Some(c) => c,
        None => {
            set_error("null pointer: config".into());
            return FibentryStatus::NullPointer;
        }
    };
    let slot = out_ref!(report_out);
    *slot = ptr::null_mut();
    guard(|| {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::InvalidConfig("tolerance must be nonnegative".into()));
        }
        let report = compare(scan(&config.0)?, tolerance)?;
        *slot = Box::into_raw(Box::new(FibentryReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_pi_x(report: *const FibentryReport) -> u64 {
    unsafe { report.as_ref() }.map_or(0, |r| r.0.pi_x)
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_divisor_len(report: *const FibentryReport) -> usize {
    unsafe { report.as_ref() }.map_or(0, |r| r.0.divisor_entries.len())
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_joint_len(report: *const FibentryReport) -> usize {
    unsafe { report.as_ref() }.map_or(0, |r| r.0.joint_entries.len())
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_all_within_tolerance(report: *const FibentryReport) -> bool {
    unsafe { report.as_ref() }.is_some_and(|r| r.0.all_within_tolerance())
}

fn predicted(p: &Option<ExactRational>) -> Result<FibentryRational, Error> {
    p.as_ref()
        .map_or(Ok(FibentryRational { num: 0, den: 1 }), to_c_rational)
}

/// # Safety
/// `report` must be a live report handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_divisor_entry(
    report: *const FibentryReport,
    index: usize,
    out: *mut FibentryDivisorEntry,
) -> FibentryStatus {
    let Some(report) = (unsafe { report.as_ref() }) else {
        set_error("null pointer: report".into());
        return FibentryStatus::NullPointer;
    };
    let out = out_ref!(out);
    guard(|| {
        let e = report.0.divisor_entries.get(index).ok_or_else(|| {
            Error::OutOfRange(format!("divisor entry {index} out of bounds"))
        })?;
        *out = FibentryDivisorEntry {
            m: e.m,
            count: e.count,
            observed: e.observed,
            predicted: predicted(&e.predicted)?,
            abs_error: e.abs_error.unwrap_or(f64::NAN),
            flagged: e.flagged,
        };
        Ok(())
    })
}

/// # Safety
/// `report` must be a live report handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_joint_entry(
    report: *const FibentryReport,
    index: usize,
    out: *mut FibentryJointEntry,
) -> FibentryStatus {
    let Some(report) = (unsafe { report.as_ref() }) else {
        set_error("null pointer: report".into());
        return FibentryStatus::NullPointer;
    };
    let out = out_ref!(out);
    guard(|| {
        let e = report.0.joint_entries.get(index).ok_or_else(|| {
            Error::OutOfRange(format!("joint entry {index} out of bounds"))
        })?;
        *out = FibentryJointEntry {
            q: e.q,
            i: e.i,
            j: e.j,
            count: e.count,
            observed: e.observed,
            predicted: predicted(&e.predicted)?,
            abs_error: e.abs_error.unwrap_or(f64::NAN),
            flagged: e.flagged,
            in_proof_scope: e.in_proof_scope(),
        };
        Ok(())
    })
}

/// The report in the CLI's JSON schema, or null on failure. Release with
/// [`fibentry_string_free`].
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_to_json(report: *const FibentryReport) -> *mut c_char {
    let Some(report) = (unsafe { report.as_ref() }) else {
        set_error("null pointer: report".into());
        return ptr::null_mut();
    };
    match fibentry::cli::density_json(&report.0) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fibentry_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `report` must be null or a report handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fibentry_report_free(report: *mut FibentryReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
