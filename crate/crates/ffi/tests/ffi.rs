use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use fibentry_ffi::*;

fn last_error() -> String {
    let p = fibentry_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn fib_and_lucas() {
    let (mut a, mut b) = (0u64, 0u64);
    unsafe {
        assert_eq!(fibentry_fib_mod(10, 1000, &mut a, &mut b), FibentryStatus::Ok);
        assert_eq!((a, b), (55, 89));
        assert_eq!(fibentry_lucas_mod(10, 1000, &mut a, &mut b), FibentryStatus::Ok);
        assert_eq!((a, b), (123, 199));
        assert_eq!(fibentry_fib_mod(3, 1, &mut a, &mut b), FibentryStatus::InvalidArgument);
        assert_eq!(fibentry_fib_mod(3, 7, ptr::null_mut(), &mut b), FibentryStatus::NullPointer);
    }
}

#[test]
fn entry_point_record() {
    let mut r = FibentryEntryPoint {
        p: 0,
        epsilon: 0,
        group_order: 0,
        alpha_order: 0,
        z: 0,
        z_case: FibentryZCase::None,
    };
    unsafe {
        assert_eq!(fibentry_entry_point(11, &mut r), FibentryStatus::Ok);
        assert_eq!((r.epsilon, r.group_order, r.alpha_order, r.z), (1, 10, 5, 10));
        assert_eq!(r.z_case, FibentryZCase::Odd);

        assert_eq!(fibentry_entry_point(5, &mut r), FibentryStatus::Ok);
        assert_eq!((r.z, r.group_order, r.z_case), (5, 0, FibentryZCase::None));

        assert_eq!(fibentry_entry_point(21, &mut r), FibentryStatus::NotPrime);
        assert!(last_error().contains("21"));

        let mut z = 0u64;
        assert_eq!(fibentry_entry_point_naive(10, &mut z), FibentryStatus::Ok);
        assert_eq!(z, 15);

        let mut v = 0u32;
        assert_eq!(fibentry_z_valuation(47, 2, &mut v), FibentryStatus::Ok);
        assert_eq!(v, 4);
    }
    assert!(fibentry_is_prime(1_000_000_007));
    assert!(!fibentry_is_prime(1));
}

#[test]
fn preimage_calls() {
    let mut has = false;
    let mut depth = 0i64;
    unsafe {
        assert_eq!(fibentry_has_preimage_power(11, 2, 1, &mut has), FibentryStatus::Ok);
        assert!(has);
        assert_eq!(fibentry_max_preimage_depth(11, 2, &mut depth), FibentryStatus::Ok);
        assert_eq!(depth, -1);
        assert_eq!(fibentry_max_preimage_depth(11, 5, &mut depth), FibentryStatus::Ok);
        assert_eq!(depth, 0);
        assert_eq!(fibentry_max_preimage_depth(5, 2, &mut depth), FibentryStatus::ExcludedPrime);
        assert_eq!(fibentry_has_preimage_power(11, 4, 1, &mut has), FibentryStatus::NotPrime);
    }
}

#[test]
fn zeta_values() {
    let mut r = FibentryRational { num: 0, den: 0 };
    unsafe {
        assert_eq!(fibentry_zeta(20, &mut r), FibentryStatus::Ok);
        assert_eq!((r.num, r.den), (5, 144));
        assert_eq!(fibentry_zeta(10, &mut r), FibentryStatus::Ok);
        assert_eq!((r.num, r.den), (25, 144));
        assert_eq!(fibentry_zeta_joint(3, 0, 0, &mut r), FibentryStatus::Ok);
        assert_eq!((r.num, r.den), (1, 2));
        assert_eq!(fibentry_zeta_joint(3, 2, 1, &mut r), FibentryStatus::Ok);
        assert_eq!((r.num, r.den), (2, 81));
        assert_eq!(fibentry_zeta_joint(3, 1, 2, &mut r), FibentryStatus::InvalidArgument);
        assert_eq!(fibentry_zeta(0, &mut r), FibentryStatus::InvalidArgument);
    }
}

#[test]
fn d_counts_agree() {
    let zero = FibentryRational { num: 0, den: 1 };
    let mut brute = FibentryCount { count: zero, group_size: 0, ratio: zero };
    let mut closed = brute;
    unsafe {
        for t in 1..3 {
            assert_eq!(fibentry_count_d_prime(3, t, 3, false, &mut brute), FibentryStatus::Ok);
            assert_eq!(fibentry_count_d_prime(3, t, 3, true, &mut closed), FibentryStatus::Ok);
            assert_eq!(brute.count, closed.count);
            assert_eq!(brute.ratio, closed.ratio);
        }
        assert_eq!(fibentry_count_d_ten(3, 1, 1, false, &mut brute), FibentryStatus::Ok);
        assert_eq!(fibentry_count_d_ten(3, 1, 1, true, &mut closed), FibentryStatus::Ok);
        assert_eq!(brute.count, FibentryRational { num: 4960, den: 1 });
        assert_eq!(brute.group_size, 200_000);
        assert_eq!(closed.ratio, FibentryRational { num: 31, den: 1250 });
        assert_eq!(fibentry_count_d_ten(4, 1, 1, false, &mut brute), FibentryStatus::BoundExceeded);
    }
}

#[test]
fn scan_round_trip() {
    unsafe {
        let cfg = fibentry_scan_config_new(100_000);
        for m in [2, 3, 4, 10, 20] {
            assert_eq!(fibentry_scan_config_add_divisor(cfg, m), FibentryStatus::Ok);
        }
        assert_eq!(fibentry_scan_config_add_joint(cfg, 3, 2), FibentryStatus::Ok);
        assert_eq!(fibentry_scan_config_set_workers(cfg, 3), FibentryStatus::Ok);
        assert_eq!(fibentry_scan_config_set_segment_size(cfg, 4096), FibentryStatus::Ok);

        let mut report = ptr::null_mut();
        assert_eq!(fibentry_scan_run(cfg, 0.01, &mut report), FibentryStatus::Ok);
        assert!(!report.is_null());
        assert_eq!(fibentry_report_pi_x(report), 9592);
        assert_eq!(fibentry_report_divisor_len(report), 5);
        assert!(fibentry_report_all_within_tolerance(report));

        let mut e = std::mem::zeroed::<FibentryDivisorEntry>();
        assert_eq!(fibentry_report_divisor_entry(report, 4, &mut e), FibentryStatus::Ok);
        assert_eq!(e.m, 20);
        assert_eq!((e.predicted.num, e.predicted.den), (5, 144));
        assert!(e.abs_error < 0.01);
        assert_eq!(fibentry_report_divisor_entry(report, 5, &mut e), FibentryStatus::InvalidArgument);

        let n = fibentry_report_joint_len(report);
        assert!(n > 0);
        let mut j = std::mem::zeroed::<FibentryJointEntry>();
        for idx in 0..n {
            assert_eq!(fibentry_report_joint_entry(report, idx, &mut j), FibentryStatus::Ok);
            assert_eq!(j.q, 3);
            assert!(j.j <= j.i && j.in_proof_scope);
        }

        let json = fibentry_report_to_json(report);
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        fibentry_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["pi_x"], 9592);
        assert_eq!(v["entries"].as_array().unwrap().len(), 5);

        fibentry_report_free(report);
        fibentry_scan_config_free(cfg);
    }
}

#[test]
fn scan_rejects_bad_config() {
    unsafe {
        let cfg = fibentry_scan_config_new(100);
        let mut report = ptr::null_mut();
        assert_eq!(fibentry_scan_run(cfg, 0.01, &mut report), FibentryStatus::InvalidArgument);
        assert!(report.is_null());
        fibentry_scan_config_add_joint(cfg, 4, 1);
        assert_ne!(fibentry_scan_run(cfg, 0.01, &mut report), FibentryStatus::Ok);
        fibentry_scan_config_free(cfg);
        fibentry_scan_config_free(ptr::null_mut());
        fibentry_report_free(ptr::null_mut());
        fibentry_string_free(ptr::null_mut());
        assert_eq!(fibentry_scan_run(ptr::null(), 0.01, &mut report), FibentryStatus::NullPointer);
    }
}

#[test]
fn header_declares_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fibentry.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build script");
    for name in [
        "fibentry_entry_point",
        "fibentry_zeta_joint",
        "fibentry_scan_run",
        "fibentry_report_free",
        "typedef struct FibentryScanConfig FibentryScanConfig",
        "FIBENTRY_STATUS_NOT_PRIME",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    if Command::new("cc").arg("--version").output().is_ok() {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-xc", "-std=c99"])
            .arg(&header)
            .status()
            .unwrap();
        assert!(status.success(), "header does not compile as C99");
    }
}
