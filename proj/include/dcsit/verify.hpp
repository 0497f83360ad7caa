#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcsit/config.hpp"
#include "dcsit/engine.hpp"

namespace dcsit {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// One standalone phase round against the count formulas, with every linear
// system of the phase re-solved using oracle side information instead of the
// decode cascade.
struct PhaseSweepResult {
  ChannelKind kind = ChannelKind::ic;
  int K = 0;
  int m = 0;
  long long symbols_consumed = 0;
  long long slots = 0;
  long long next_order_generated = 0;
  long long one_m_generated = 0;
  bool counts_ok = false;
  int rank_failures = 0;
  double max_rel_err = 0.0;
  double min_singular = 0.0;
};

PhaseSweepResult sweep_phase_ic(int K, int m, std::uint64_t seed);
PhaseSweepResult sweep_phase_x(int K, int m, std::uint64_t seed);

struct GenericityResult {
  int trials = 0;
  int failures = 0;
  double min_singular = 0.0;
  std::string worst_fingerprint;  // matrix hash of the first failing system
};

// Rank of the per-receiver delivery matrix of the opening phase across random
// channel draws. The duplicate-column switch deliberately breaks one matrix
// per trial so red-path reporting stays honest.
GenericityResult sweep_p_genericity(int K, int trials, std::uint64_t seed,
                                    bool inject_duplicate_column = false);
// Rank of the per-receiver block delivery matrix at phase m.
GenericityResult sweep_g_genericity(int K, int m, int trials,
                                    std::uint64_t seed);
// Full rank of diagonal-times-generic products.
GenericityResult sweep_product_genericity(int trials, std::uint64_t seed);
// Invertibility of generic one-row-one-column borderings.
GenericityResult sweep_bordered_genericity(int trials, std::uint64_t seed);

// The whole battery: count identities, pool-balance identities, rank sweeps,
// closed-versus-recursive cross checks, bound strictness, limit consistency.
// k_max_counts widens the executed per-phase sweeps (clamped to 8).
std::vector<CheckResult> verify_all(std::uint64_t seed,
                                    bool inject_duplicate_column = false,
                                    int k_max_counts = 5);

}  // namespace dcsit
