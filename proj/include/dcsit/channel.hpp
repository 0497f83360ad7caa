#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dcsit/linalg.hpp"
#include "dcsit/rng.hpp"

namespace dcsit {

class FadingProcess;

// Read-only window onto the channel history as seen from the start of slot
// `now`: slots 1 .. now-1 are visible, nothing else. Transmitter-side
// construction code accepts only a CsitView, which makes the one-slot
// feedback delay structural rather than a convention to remember.
class CsitView {
 public:
  int now() const { return now_; }
  int visible_upto() const { return now_ - 1; }
  const CMatrix& slot(int t) const;

 private:
  friend class FadingProcess;
  CsitView(const FadingProcess* proc, int now) : proc_(proc), now_(now) {}
  const FadingProcess* proc_;
  int now_;
};

// I.i.d. complex Gaussian fading, one n_rx x n_tx matrix per slot, drawn
// lazily and kept for the whole run. Slots and user indices are 1-based.
class FadingProcess {
 public:
  FadingProcess(int n_rx, int n_tx, std::uint64_t seed);

  int n_rx() const { return n_rx_; }
  int n_tx() const { return n_tx_; }
  std::uint64_t seed() const { return seed_; }
  int current_slot() const { return static_cast<int>(history_.size()); }

  const CMatrix& draw_slot();

  // View with horizon `t`: valid for 1 <= t <= current_slot() + 1. Asking
  // beyond that would peek at coefficients nobody has been fed back yet.
  CsitView csit_view(int t) const;

  // Row j of H(t): what receiver j measures during slot t itself. Receivers
  // learn their own incoming coefficients with no delay, so unlike csit_view
  // this is valid as soon as the slot has been drawn.
  CVector rx_csi_row(int j, int t) const;

  const CMatrix& slot(int t) const;

  // CSV with columns t, j, i, re, im covering every drawn slot.
  void dump_trace_csv(std::ostream& os) const;

 private:
  int n_rx_;
  int n_tx_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<CMatrix> history_;
};

}  // namespace dcsit
