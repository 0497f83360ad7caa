#pragma once

#include "dcsit/config.hpp"
#include "dcsit/rational.hpp"

namespace dcsit {

// Sum degrees of freedom of the K-user interference scheme when the cascade
// is entered at order m (m = 1 is the full scheme). Exact rationals; valid
// for K >= 2, 1 <= m <= K.
Rational dof_ic_closed(int K, int m);
Rational dof_ic_recursive(int K, int m);

// Same for the two-transmitter X scheme.
Rational dof_x_closed(int K, int m);
Rational dof_x_recursive(int K, int m);

// Double-precision evaluation of the closed forms. Product terms decay like
// 2^-length, so for very large K the early terms underflow to zero; those
// terms are below 1e-300 and analytically negligible.
double dof_ic_value(int K, int m);
double dof_x_value(int K, int m);

// Best previously known X-channel value, 2(2K-1)/(3K-1). Printed next to the
// new row for comparison.
Rational dof_x_prior(int K);

// Per-phase accounting: symbols consumed, slots spent, next-order symbols
// generated, and (interference scheme only) one-per-transmitter symbols that
// ride the dedicated broadcast slots. Valid for 1 <= m <= K-1.
struct PhaseCounts {
  long long n_consumed = 0;
  long long t_slots = 0;
  long long n_next = 0;
  long long n_one_m = 0;
};
PhaseCounts phase_counts(ChannelKind kind, int K, int m);

enum class SeriesKind { psi, phi, gamma_p, lambda_p };

struct SeriesValue {
  double value = 0.0;
  int k = 0;
  SeriesKind kind = SeriesKind::psi;
  int p = 0;
};

// psi needs K >= 3, phi K >= 2; gamma_p/lambda_p need p >= 1 and evaluate
// empty sums to zero. The exact path mirrors the double one term by term.
SeriesValue series(SeriesKind kind, int K, int p = 0);
Rational series_exact(SeriesKind kind, int K, int p = 0);

struct LimitValues {
  double ic = 0.0;   // 4 / (6 ln 2 - 1)
  double x = 0.0;    // 1 / ln 2
  double psi = 0.0;  // 21/16 - (3/2) ln 2
  double phi = 0.0;  // 1 - ln 2
};
LimitValues limits();

enum class Relation { less, equal, greater };
const char* relation_name(Relation r);

// Exact evaluation of the two sandwich bounds at a given K. The psi branch
// exists for K >= 3 only. Each relation compares left-to-right along
// lower ? value ? upper; the bounds hold strictly when every relation is
// `less`. A non-strict outcome is reported, not thrown.
struct BoundsReport {
  int K = 0;
  bool has_psi = false;
  Rational psi_lower, psi_value, psi_upper;
  Relation psi_lower_rel = Relation::less, psi_upper_rel = Relation::less;
  Rational phi_lower, phi_value, phi_upper;
  Relation phi_lower_rel = Relation::less, phi_upper_rel = Relation::less;
};
BoundsReport bounds_check(int K);

// Partial-fraction coefficients of the closed forms: kind a belongs to the
// interference chain (0 <= l <= i <= K-2), kind b to the X chain
// (0 <= l <= i-1 <= K-2).
enum class CoeffKind { a, b };
Rational appendix_coefficient(CoeffKind kind, int K, int i, int l);

// The assembled partial-fraction sums; dof = 1/(1 - sum) at m = K - i.
Rational a_series_sum(int K, int i);
Rational b_series_sum(int K, int i);

// The same a-sum at i = K-2 written through the psi series; the closed form
// for the full interference scheme runs through this value.
Rational a2_theorem(int K);

}  // namespace dcsit
