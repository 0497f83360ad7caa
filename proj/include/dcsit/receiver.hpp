#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcsit/engine.hpp"

namespace dcsit {

// One linear observation available to a receiver: a functional of the ground
// symbols plus the value the receiver holds for it. In the noise-free model
// the two must agree; check_consistency audits exactly that.
struct EquationRow {
  LinearForm form;
  Complex observed;
  std::string tag;
  int slot = 0;
};

class EquationBank {
 public:
  explicit EquationBank(int rx = 0) : rx_(rx) {}

  int rx() const { return rx_; }
  const std::vector<EquationRow>& rows() const { return rows_; }
  void add_row(LinearForm form, Complex observed, std::string tag, int slot);

  // Every row's functional, evaluated on the planted data, must match the
  // observed value to tol relative to max(|value|, 1).
  void check_consistency(const GroundRegistry& reg, double tol) const;

 private:
  int rx_;
  std::vector<EquationRow> rows_;
};

// Square-subsystem solve in bank order: the first |targets| rows must form an
// invertible system over exactly the target coordinates. Throws
// "undecodable at tolerance" when there are too few rows or the system is
// singular at rel_tol, "wrong bank contents" when a used row leaves the
// target span.
std::map<std::int32_t, Complex> decode(const EquationBank& bank,
                                       const std::vector<std::int32_t>& targets,
                                       double rel_tol = kRankRelTol);

// The opening-round decoding matrix of one receiver, assembled from its bank:
// column e holds the coefficients of equation e over the receiver's own fresh
// block (coordinates ascending). Requires a square bank whose rows all live
// on one ground block.
CMatrix build_p_matrix(const EquationBank& bank, int K);

// The block decoding matrix of receiver rx for one pair block: columns are
// first the K-m+1 direct slot equations, then the K-m delivered side
// equations; rows are the lead then trail symbols. Solve along the transpose.
CMatrix build_g_matrix(const RunState& st, const PairBlock& b, int rx);

// Values each receiver has derived for tracked symbols during the cascade.
// Parameterized over the complex type because the cascade itself runs at
// extended precision while the public interfaces stay on double.
template <typename C>
class ValueTableT {
 public:
  ValueTableT(std::size_t n_syms, int n_rx)
      : n_rx_(static_cast<std::size_t>(n_rx)),
        val_(n_syms * static_cast<std::size_t>(n_rx)),
        known_(n_syms * static_cast<std::size_t>(n_rx), 0) {}

  bool knows(int sym, int rx) const { return known_[at(sym, rx)] != 0; }

  C get(int sym, int rx) const {
    const std::size_t i = at(sym, rx);
    if (known_[i] == 0) throw std::runtime_error("side information missing");
    return val_[i];
  }

  void set(int sym, int rx, C v) {
    const std::size_t i = at(sym, rx);
    val_[i] = v;
    known_[i] = 1;
  }

 private:
  std::size_t at(int sym, int rx) const {
    return static_cast<std::size_t>(sym) * n_rx_ +
           static_cast<std::size_t>(rx - 1);
  }

  std::size_t n_rx_;
  std::vector<C> val_;
  std::vector<char> known_;
};

using ValueTable = ValueTableT<Complex>;

struct DecodeReport {
  bool pass = false;
  double max_rel_err = 0.0;
  double min_singular = 0.0;
  long long systems_solved = 0;
  long long recovered = 0;
  std::vector<double> per_rx_max_err;
  // Worst relative error of any cascade-derived value, keyed by the symbol's
  // demand-set size. Shows where the error budget goes as levels stack.
  std::map<int, double> per_order_max_err;
  std::string detail;  // first failure, empty when pass
};

// Replays the whole run from the receivers' side: broadcast slots first, then
// orders high to low (reconstruct side symbols from the combinations, then
// open the pair blocks), finally the opening rounds. Ground data is recovered
// at its intended receiver and compared against the planted values.
DecodeReport decode_run(const RunState& st,
                        std::vector<EquationBank>* banks_out = nullptr);

}  // namespace dcsit
