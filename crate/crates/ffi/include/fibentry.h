#ifndef FIBENTRY_H
#define FIBENTRY_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdbool.h>
#include <stdint.h>

typedef enum FibentryStatus {
  FIBENTRY_STATUS_OK = 0,
  FIBENTRY_STATUS_NULL_POINTER = 1,
  FIBENTRY_STATUS_INVALID_ARGUMENT = 2,
  FIBENTRY_STATUS_NOT_PRIME = 3,
  FIBENTRY_STATUS_EXCLUDED_PRIME = 4,
  FIBENTRY_STATUS_BOUND_EXCEEDED = 5,
  FIBENTRY_STATUS_OVERFLOW = 6,
  FIBENTRY_STATUS_INTERNAL = 7,
} FibentryStatus;

// Which relation between |alpha| and Z(p) applied; `None` for p = 2, 5.
typedef enum FibentryZCase {
  FIBENTRY_Z_CASE_NONE = 0,
  FIBENTRY_Z_CASE_ODD = 1,
  FIBENTRY_Z_CASE_TWO_MOD_FOUR = 2,
  FIBENTRY_Z_CASE_ZERO_MOD_FOUR = 3,
} FibentryZCase;

// Opaque compared density report.
typedef struct FibentryReport FibentryReport;

// Opaque scan configuration.
typedef struct FibentryScanConfig FibentryScanConfig;

typedef struct FibentryEntryPoint {
  uint64_t p;
  int8_t epsilon;
  // 0 when not defined (p = 2, 5).
  uint64_t group_order;
  // 0 when not defined (p = 2, 5).
  uint64_t alpha_order;
  uint64_t z;
  enum FibentryZCase z_case;
} FibentryEntryPoint;

typedef struct FibentryRational {
  int64_t num;
  int64_t den;
} FibentryRational;

typedef struct FibentryCount {
  // Raw count as a fraction; the denominator is 1 for brute-force counts.
  struct FibentryRational count;
  uint64_t group_size;
  struct FibentryRational ratio;
} FibentryCount;

typedef struct FibentryDivisorEntry {
  uint64_t m;
  uint64_t count;
  double observed;
  struct FibentryRational predicted;
  double abs_error;
  bool flagged;
} FibentryDivisorEntry;

typedef struct FibentryJointEntry {
  uint64_t q;
  uint32_t i;
  uint32_t j;
  uint64_t count;
  double observed;
  struct FibentryRational predicted;
  double abs_error;
  bool flagged;
  bool in_proof_scope;
} FibentryJointEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *fibentry_last_error_message(void);

bool fibentry_is_prime(uint64_t n);

// Writes F_n and F_{n+1} mod `modulus`.
//
// # Safety
// `f_n` and `f_next` must be valid for writes.
enum FibentryStatus fibentry_fib_mod(uint64_t n, uint64_t modulus, uint64_t *f_n, uint64_t *f_next);

// Writes L_n and L_{n+1} mod `modulus`.
//
// # Safety
// `l_n` and `l_next` must be valid for writes.
enum FibentryStatus fibentry_lucas_mod(uint64_t n,
                                       uint64_t modulus,
                                       uint64_t *l_n,
                                       uint64_t *l_next);

// Full entry-point record for a prime `p`.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_entry_point(uint64_t p, struct FibentryEntryPoint *out);

// Z(n) by walking the sequence; any modulus n >= 2.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_entry_point_naive(uint64_t n, uint64_t *out);

// ord_q(Z(p)) for a prime p other than 2 and 5.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_z_valuation(uint64_t p, uint64_t q, uint32_t *out);

// Whether alpha in G(F_p) has an ell^n-th preimage.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_has_preimage_power(uint64_t p, uint64_t ell, uint32_t n, bool *out);

// Maximal preimage depth of alpha under multiplication by ell; -1 means infinite.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_max_preimage_depth(uint64_t p, uint64_t ell, int64_t *out);

// Predicted density of primes with m | Z(p).
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_zeta(uint64_t m, struct FibentryRational *out);

// Predicted density of q^i || (p - eps_p) and q^j || Z(p).
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_zeta_joint(uint64_t q,
                                        uint32_t i,
                                        uint32_t j,
                                        struct FibentryRational *out);

// Prime-power D-set count in I(ell^k), by brute force or by the closed form.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_count_d_prime(uint32_t k,
                                           uint32_t t,
                                           uint64_t ell,
                                           bool closed,
                                           struct FibentryCount *out);

// Ten-coupled D-set count, by brute force (k <= 3) or the printed formula.
//
// # Safety
// `out` must be valid for writes.
enum FibentryStatus fibentry_count_d_ten(uint32_t k,
                                         uint32_t t1,
                                         uint32_t t2,
                                         bool closed,
                                         struct FibentryCount *out);

// New scan configuration over the primes up to `x`, one worker, no targets.
struct FibentryScanConfig *fibentry_scan_config_new(uint64_t x);

// # Safety
// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
enum FibentryStatus fibentry_scan_config_add_divisor(struct FibentryScanConfig *config, uint64_t m);

// # Safety
// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
enum FibentryStatus fibentry_scan_config_add_joint(struct FibentryScanConfig *config,
                                                   uint64_t q,
                                                   uint32_t i_max);

// # Safety
// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
enum FibentryStatus fibentry_scan_config_set_workers(struct FibentryScanConfig *config,
                                                     uint32_t workers);

// # Safety
// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
enum FibentryStatus fibentry_scan_config_set_segment_size(struct FibentryScanConfig *config,
                                                          uint64_t segment_size);

// # Safety
// `config` must come from [`fibentry_scan_config_new`] and not be freed yet.
enum FibentryStatus fibentry_scan_config_set_include_small_primes(struct FibentryScanConfig *config,
                                                                  bool include);

// # Safety
// `config` must be null or come from [`fibentry_scan_config_new`]; it is
// invalid afterwards.
void fibentry_scan_config_free(struct FibentryScanConfig *config);

// Scans and compares against predictions. On success `*report_out` owns a
// new report that must be released with [`fibentry_report_free`].
//
// # Safety
// `config` must be a live configuration handle and `report_out` valid for writes.
enum FibentryStatus fibentry_scan_run(const struct FibentryScanConfig *config,
                                      double tolerance,
                                      struct FibentryReport **report_out);

// # Safety
// `report` must be a live report handle.
uint64_t fibentry_report_pi_x(const struct FibentryReport *report);

// # Safety
// `report` must be a live report handle.
uintptr_t fibentry_report_divisor_len(const struct FibentryReport *report);

// # Safety
// `report` must be a live report handle.
uintptr_t fibentry_report_joint_len(const struct FibentryReport *report);

// # Safety
// `report` must be a live report handle.
bool fibentry_report_all_within_tolerance(const struct FibentryReport *report);

// # Safety
// `report` must be a live report handle and `out` valid for writes.
enum FibentryStatus fibentry_report_divisor_entry(const struct FibentryReport *report,
                                                  uintptr_t index,
                                                  struct FibentryDivisorEntry *out);

// # Safety
// `report` must be a live report handle and `out` valid for writes.
enum FibentryStatus fibentry_report_joint_entry(const struct FibentryReport *report,
                                                uintptr_t index,
                                                struct FibentryJointEntry *out);

// The report in the CLI's JSON schema, or null on failure. Release with
// [`fibentry_string_free`].
//
// # Safety
// `report` must be a live report handle.
char *fibentry_report_to_json(const struct FibentryReport *report);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void fibentry_string_free(char *s);

// # Safety
// `report` must be null or a report handle, not yet freed.
void fibentry_report_free(struct FibentryReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIBENTRY_H */
