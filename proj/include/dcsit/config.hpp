#pragma once

namespace dcsit {

enum class ChannelKind { ic, x };

inline const char* kind_name(ChannelKind k) {
  return k == ChannelKind::ic ? "ic" : "x";
}

// Tolerances and caps shared by the schemes, the verification sweeps, and the
// CLI. Defaults reproduce the acceptance suite without flags.
struct RunConfig {
  double rank_rel_tol = 1e-9;    // SVD rank / solvability threshold
  double recovery_tol = 1e-6;    // relative error allowed on recovered symbols
  double bank_tol = 1e-10;       // receiver equation-bank consistency check
  int sim_cap_k = 5;             // end-to-end runs refuse larger K
  int rational_cap_k = 64;       // exact-rational sweep range
  bool check_banks = true;       // audit observation rows against ground truth
};

}  // namespace dcsit
