use fibentry::density::{compare, prime_count, primes_up_to, scan, JointTarget, ScanConfig};
use fibentry::{entry_point_naive, Error};

fn config(x: u64) -> ScanConfig {
    let mut c = ScanConfig::new(x);
    c.divisor_targets = vec![2, 3, 4, 5, 6, 8, 9, 10, 20, 40];
    c.joint_targets = vec![JointTarget { q: 2, i_max: 3 }, JointTarget { q: 3, i_max: 3 }];
    c
}

#[test]
fn reports_do_not_depend_on_workers_or_segments() {
    let base = scan(&config(200_000)).unwrap();
    for (workers, seg) in [(2, 1 << 18), (3, 4096), (8, 1000), (1, 77)] {
        let mut c = config(200_000);
        c.workers = workers;
        c.segment_size = seg;
        assert_eq!(scan(&c).unwrap(), base, "workers = {workers}, segment = {seg}");
    }
}

#[test]
fn divisor_counts_match_sequence_walk() {
    let x = 30_000;
    let report = scan(&config(x)).unwrap();
    let zs: Vec<u64> = primes_up_to(x).map(|p| entry_point_naive(p).unwrap()).collect();
    assert_eq!(report.pi_x, zs.len() as u64);
    for e in &report.divisor_entries {
        let expected = zs.iter().filter(|&&z| z % e.m == 0).count() as u64;
        assert_eq!(e.count, expected, "m = {}", e.m);
    }
}

#[test]
fn joint_cells_partition_the_primes() {
    let mut c = ScanConfig::new(100_000);
    c.joint_targets = vec![JointTarget { q: 3, i_max: 40 }, JointTarget { q: 7, i_max: 40 }];
    let report = scan(&c).unwrap();
    for q in [3, 7] {
        let total: u64 = report.joint_entries.iter().filter(|e| e.q == q).map(|e| e.count).sum();
        // p = 5 has eps_p = 0 and sits outside every cell
        assert_eq!(total, report.pi_x - 1, "q = {q}");
    }
}

#[test]
fn divisor_lattice_is_monotone() {
    let report = scan(&config(100_000)).unwrap();
    let count = |m: u64| report.divisor_entries.iter().find(|e| e.m == m).unwrap().count;
    for (d, m) in [(2, 4), (4, 8), (2, 6), (3, 6), (3, 9), (2, 10), (5, 10), (10, 20), (4, 20), (20, 40)] {
        assert!(count(m) <= count(d), "{d} | {m}");
    }
}

#[test]
fn excluding_small_primes_keeps_pi() {
    let mut c = config(10_000);
    c.include_small_primes = false;
    let without = scan(&c).unwrap();
    let with = scan(&config(10_000)).unwrap();
    assert_eq!(without.pi_x, with.pi_x);
    assert_eq!(with.pi_x, prime_count(10_000));
    let c2 = |r: &fibentry::density::DensityReport| r.divisor_entries.iter().find(|e| e.m == 5).unwrap().count;
    // Z(5) = 5
    assert_eq!(c2(&with), c2(&without) + 1);
}

#[test]
fn compare_flags_by_tolerance() {
    let report = scan(&config(20_000)).unwrap();
    let loose = compare(report.clone(), 0.5).unwrap();
    assert!(loose.all_within_tolerance());
    let tight = compare(report, 0.0).unwrap();
    assert!(tight.flagged_count() > 0);
    for e in &tight.divisor_entries {
        let predicted = e.predicted.as_ref().unwrap().to_f64();
        assert!((e.abs_error.unwrap() - (e.observed - predicted).abs()).abs() < 1e-12);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = ScanConfig::new(1000);
    assert!(matches!(scan(&c), Err(Error::InvalidConfig(_))));
    c.divisor_targets = vec![0];
    assert!(scan(&c).is_err());
    c.divisor_targets = vec![2];
    c.workers = 0;
    assert!(scan(&c).is_err());
    c.workers = 1;
    c.joint_targets = vec![JointTarget { q: 9, i_max: 2 }];
    assert!(scan(&c).is_err());
    assert!(scan(&config(5)).is_err());
}
