//! Prime scans accumulating M(m, x) and M(q, x, i, j).

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::Serialize;

use super::sieve::{isqrt, sieve_segment, small_primes, DEFAULT_SEGMENT_SIZE, MAX_SIEVE_BOUND};
use crate::affine::{zeta, zeta_joint};
use crate::arith::{legendre_mod5, valuation};
use crate::entry_point::{alpha_order_valuation_unchecked, entry_point_naive, z_valuation_from_alpha};
use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime};
use crate::rational::ExactRational;

/// Cells 0 <= j <= i <= i_max are tracked for prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JointTarget {
    pub q: u64,
    pub i_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub x: u64,
    pub divisor_targets: Vec<u64>,
    pub joint_targets: Vec<JointTarget>,
    /// Count p = 2 and p = 5 (through the sequence walk).
    pub include_small_primes: bool,
    pub workers: usize,
    pub segment_size: u64,
}

impl ScanConfig {
    pub fn new(x: u64) -> Self {
        ScanConfig {
            x,
            divisor_targets: Vec::new(),
            joint_targets: Vec::new(),
            include_small_primes: true,
            workers: 1,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.x < 10 {
            return bad(format!("x = {} is too small (need x >= 10)", self.x));
        }
        if self.x > MAX_SIEVE_BOUND {
            return bad(format!("x = {} exceeds 2^62", self.x));
        }
        if self.segment_size < 2 {
            return bad(format!("segment size {} is below 2", self.segment_size));
        }
        if self.workers == 0 {
            return bad("worker count must be positive".into());
        }
        if self.divisor_targets.is_empty() && self.joint_targets.is_empty() {
            return bad("no divisor or joint targets given".into());
        }
        if let Some(&m) = self.divisor_targets.iter().find(|&&m| m == 0) {
            return bad(format!("divisor target {m} must be positive"));
        }
        for t in &self.joint_targets {
            if !is_prime(t.q) {
                return bad(format!("joint target {} is not prime", t.q));
            }
            if t.i_max > 40 {
                return bad(format!("i_max = {} is too large", t.i_max));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub m: u64,
    pub count: u64,
    pub observed: f64,
    pub predicted: Option<ExactRational>,
    pub abs_error: Option<f64>,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointEntry {
    pub q: u64,
    pub i: u32,
    pub j: u32,
    pub count: u64,
    pub observed: f64,
    pub predicted: Option<ExactRational>,
    pub abs_error: Option<f64>,
    pub flagged: bool,
}

impl JointEntry {
    /// The joint-density argument is only carried out for odd q.
    pub fn in_proof_scope(&self) -> bool {
        self.q != 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub x: u64,
    pub pi_x: u64,
    pub divisor_entries: Vec<DivisorEntry>,
    pub joint_entries: Vec<JointEntry>,
    /// Set once [`compare`] has run.
    pub tolerance: Option<f64>,
}

impl DensityReport {
    pub fn flagged_count(&self) -> usize {
        self.divisor_entries.iter().filter(|e| e.flagged).count()
            + self.joint_entries.iter().filter(|e| e.flagged).count()
    }

    pub fn all_within_tolerance(&self) -> bool {
        self.flagged_count() == 0
    }
}

/// Precomputed shape of a scan: distinct target primes and what each counter needs.
struct Plan {
    primes: Vec<u64>,
    /// per divisor target: (index into `primes`, exponent)
    divisors: Vec<Vec<(usize, u32)>>,
    /// per joint target: (index into `primes`, i_max)
    joints: Vec<(usize, u32)>,
    include_small: bool,
}

impl Plan {
    fn new(config: &ScanConfig) -> Result<Plan> {
        let mut primes: Vec<u64> = Vec::new();
        let mut factored = Vec::new();
        for &m in &config.divisor_targets {
            let f = factorize(m)?;
            primes.extend(f.primes());
            factored.push(f);
        }
        primes.extend(config.joint_targets.iter().map(|t| t.q));
        primes.sort_unstable();
        primes.dedup();
        let index = |q: u64| primes.binary_search(&q).expect("target prime registered");
        let divisors = factored
            .iter()
            .map(|f| f.factors().iter().map(|&(q, e)| (index(q), e)).collect())
            .collect();
        let joints = config
            .joint_targets
            .iter()
            .map(|t| (index(t.q), t.i_max))
            .collect();
        Ok(Plan {
            primes,
            divisors,
            joints,
            include_small: config.include_small_primes,
        })
    }

    fn joint_width(i_max: u32) -> usize {
        (i_max as usize + 1) * (i_max as usize + 1)
    }

    fn empty_bank(&self) -> CounterBank {
        CounterBank {
            divisor: vec![0; self.divisors.len()],
            joint: self
                .joints
                .iter()
                .map(|&(_, i_max)| vec![0; Self::joint_width(i_max)])
                .collect(),
        }
    }

    /// Per target prime q: (ord_q(p - eps_p) or None when eps_p = 0, ord_q(Z(p))).
    fn valuations(&self, p: u64, out: &mut Vec<(Option<u32>, u32)>) -> Result<()> {
        out.clear();
        if p == 2 || p == 5 {
            let z = entry_point_naive(p)?;
            let eps = legendre_mod5(p);
            for &q in &self.primes {
                let group = (eps != 0).then(|| valuation((p as i64 - eps as i64) as u64, q));
                out.push((group, valuation(z, q)));
            }
            return Ok(());
        }
        let eps = legendre_mod5(p);
        let n = if eps == 1 { p - 1 } else { p + 1 };
        for &q in &self.primes {
            let a = alpha_order_valuation_unchecked(p, n, q);
            out.push((Some(valuation(n, q)), z_valuation_from_alpha(q, a)));
        }
        Ok(())
    }

    fn record(&self, p: u64, vals: &[(Option<u32>, u32)], bank: &mut CounterBank) -> Result<()> {
        for (slot, need) in bank.divisor.iter_mut().zip(&self.divisors) {
            if need.iter().all(|&(qi, e)| vals[qi].1 >= e) {
                *slot += 1;
            }
        }
        for (cells, &(qi, i_max)) in bank.joint.iter_mut().zip(&self.joints) {
            let (Some(i), j) = vals[qi] else { continue };
            if j > i {
                return Err(Error::AtPrime {
                    p,
                    message: format!(
                        "ord_{q}(Z) = {j} exceeds ord_{q}(p - eps) = {i}",
                        q = self.primes[qi]
                    ),
                });
            }
            if i <= i_max {
                cells[i as usize * (i_max as usize + 1) + j as usize] += 1;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CounterBank {
    divisor: Vec<u64>,
    joint: Vec<Vec<u64>>,
}

impl CounterBank {
    fn merge(&mut self, other: &CounterBank) {
        for (a, b) in self.divisor.iter_mut().zip(&other.divisor) {
            *a += b;
        }
        for (ca, cb) in self.joint.iter_mut().zip(&other.joint) {
            for (a, b) in ca.iter_mut().zip(cb) {
                *a += b;
            }
        }
    }
}

struct SegmentResult {
    primes: u64,
    bank: CounterBank,
}

fn scan_segment(plan: &Plan, base: &[u64], lo: u64, hi: u64, buf: &mut Vec<u64>) -> Result<SegmentResult> {
    buf.clear();
    sieve_segment(lo, hi, base, buf);
    let mut bank = plan.empty_bank();
    let mut vals = Vec::with_capacity(plan.primes.len());
    for &p in buf.iter() {
        if !plan.include_small && (p == 2 || p == 5) {
            continue;
        }
        plan.valuations(p, &mut vals)?;
        plan.record(p, &vals, &mut bank)?;
    }
    Ok(SegmentResult {
        primes: buf.len() as u64,
        bank,
    })
}

/// Runs the scan. Segments are handed out to share-nothing workers whose
/// counter banks are summed at the end, so the result does not depend on
/// the worker count or segment size.
pub fn scan(config: &ScanConfig) -> Result<DensityReport> {
    config.validate()?;
    let plan = Plan::new(config)?;
    let base = small_primes(isqrt(config.x));
    let seg = config.segment_size;
    let segments = config.x / seg + 1;
    let next = AtomicU64::new(0);
    // first error by segment index, for a deterministic message
    let failure: Mutex<Option<(u64, Error)>> = Mutex::new(None);

    let partials: Vec<(u64, CounterBank)> = thread::scope(|s| {
        let handles: Vec<_> = (0..config.workers.min(segments as usize).max(1))
            .map(|_| {
                s.spawn(|| {
                    let mut total = plan.empty_bank();
                    let mut primes = 0u64;
                    let mut buf = Vec::new();
                    loop {
                        let idx = next.fetch_add(1, Ordering::Relaxed);
                        if idx >= segments {
                            break;
                        }
                        let lo = idx * seg;
                        let hi = lo.saturating_add(seg).min(config.x + 1);
                        match scan_segment(&plan, &base, lo, hi, &mut buf) {
                            Ok(r) => {
                                primes += r.primes;
                                total.merge(&r.bank);
                            }
                            Err(e) => {
                                let mut slot = failure.lock().unwrap();
                                if slot.as_ref().is_none_or(|(i, _)| idx < *i) {
                                    *slot = Some((idx, e));
                                }
                            }
                        }
                    }
                    (primes, total)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });

    if let Some((_, e)) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut bank = plan.empty_bank();
    let mut pi_x = 0;
    for (primes, b) in &partials {
        pi_x += primes;
        bank.merge(b);
    }
    Ok(build_report(config, &plan, pi_x, &bank))
}

fn build_report(config: &ScanConfig, plan: &Plan, pi_x: u64, bank: &CounterBank) -> DensityReport {
    let observed = |count: u64| count as f64 / pi_x as f64;
    let divisor_entries = config
        .divisor_targets
        .iter()
        .zip(&bank.divisor)
        .map(|(&m, &count)| DivisorEntry {
            m,
            count,
            observed: observed(count),
            predicted: None,
            abs_error: None,
            flagged: false,
        })
        .collect();
    let mut joint_entries = Vec::new();
    for (t, cells) in config.joint_targets.iter().zip(&bank.joint) {
        let width = t.i_max as usize + 1;
        for i in 0..=t.i_max {
            for j in 0..=i {
                let count = cells[i as usize * width + j as usize];
                joint_entries.push(JointEntry {
                    q: t.q,
                    i,
                    j,
                    count,
                    observed: observed(count),
                    predicted: None,
                    abs_error: None,
                    flagged: false,
                });
            }
        }
    }
    debug_assert_eq!(plan.joints.len(), config.joint_targets.len());
    DensityReport {
        x: config.x,
        pi_x,
        divisor_entries,
        joint_entries,
        tolerance: None,
    }
}

fn abs_error(count: u64, pi_x: u64, predicted: &ExactRational) -> Result<f64> {
    let observed = ExactRational::new(count as i128, pi_x as i128)?;
    Ok(observed.checked_sub(predicted)?.abs().to_f64())
}

/// Fills in the exact predictions and absolute errors, flagging every entry
/// whose error exceeds `tolerance`.
pub fn compare(mut report: DensityReport, tolerance: f64) -> Result<DensityReport> {
    let pi_x = report.pi_x.max(1);
    for e in &mut report.divisor_entries {
        let predicted = zeta(e.m)?;
        let err = abs_error(e.count, pi_x, &predicted)?;
        e.predicted = Some(predicted);
        e.abs_error = Some(err);
        e.flagged = err > tolerance;
    }
    for e in &mut report.joint_entries {
        let predicted = zeta_joint(e.q, e.i, e.j)?;
        let err = abs_error(e.count, pi_x, &predicted)?;
        e.predicted = Some(predicted);
        e.abs_error = Some(err);
        e.flagged = err > tolerance;
    }
    report.tolerance = Some(tolerance);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(x: u64, ms: &[u64]) -> ScanConfig {
        ScanConfig {
            divisor_targets: ms.to_vec(),
            ..ScanConfig::new(x)
        }
    }

    #[test]
    fn even_entry_points_below_100() {
        // Z(p) even for p in {3, 7, 11, 19, 23, 29, 31, 41, 43, 47, 59, 67, 71, 79, 83}
        let r = scan(&config(100, &[2])).unwrap();
        assert_eq!(r.pi_x, 25);
        assert_eq!(r.divisor_entries[0].count, 15);
    }

    #[test]
    fn ten_divides_z_only_at_11() {
        let r = scan(&config(11, &[10, 1])).unwrap();
        assert_eq!(r.pi_x, 5);
        assert_eq!(r.divisor_entries[0].count, 1);
        assert_eq!(r.divisor_entries[0].observed, 0.2);
        let r = compare(r, 0.01).unwrap();
        assert_eq!(r.divisor_entries[1].predicted, Some(ExactRational::ONE));
        assert_eq!(r.divisor_entries[1].abs_error, Some(0.0));
    }

    #[test]
    fn excluding_small_primes() {
        let mut c = config(11, &[1]);
        c.include_small_primes = false;
        let r = scan(&c).unwrap();
        assert_eq!(r.pi_x, 5);
        assert_eq!(r.divisor_entries[0].count, 3);
    }

    #[test]
    fn invalid_configs() {
        assert!(scan(&config(5, &[2])).is_err());
        assert!(scan(&config(100, &[])).is_err());
        assert!(scan(&config(100, &[0])).is_err());
        let mut c = config(100, &[2]);
        c.workers = 0;
        assert!(scan(&c).is_err());
        let mut c = config(100, &[]);
        c.joint_targets.push(JointTarget { q: 4, i_max: 2 });
        assert!(scan(&c).is_err());
    }

    #[test]
    fn joint_cells_skip_p5() {
        let mut c = config(100, &[]);
        c.joint_targets.push(JointTarget { q: 5, i_max: 10 });
        let r = scan(&c).unwrap();
        let total: u64 = r.joint_entries.iter().map(|e| e.count).sum();
        assert_eq!(total, r.pi_x - 1);
    }

    #[test]
    fn compare_flags_breaches() {
        let r = compare(scan(&config(100, &[2, 3])).unwrap(), 0.0).unwrap();
        assert!(r.divisor_entries.iter().all(|e| e.flagged));
        assert!(!r.all_within_tolerance());
        let r = compare(scan(&config(100, &[2, 3])).unwrap(), 1.0).unwrap();
        assert!(r.all_within_tolerance());
        assert_eq!(r.divisor_entries[1].predicted, Some(ExactRational::new(3, 8).unwrap()));
    }
}
