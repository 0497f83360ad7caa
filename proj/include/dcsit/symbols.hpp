#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "dcsit/linalg.hpp"
#include "dcsit/rng.hpp"

namespace dcsit {

// Receiver sets live in bitmasks: bit j-1 stands for user j.
std::uint32_t mask_of(std::initializer_list<int> users);
std::uint32_t full_mask(int k);
int mask_size(std::uint32_t mask);
bool mask_has(std::uint32_t mask, int user);
std::vector<int> mask_members(std::uint32_t mask);
std::string mask_label(std::uint32_t mask);

// All size-m subsets of {1..k} as masks, ascending by mask value.
std::vector<std::uint32_t> subsets_of_size(int k, int m);

// Identity of one tracked symbol: available at transmitter `tx`, wanted by
// the receivers in `demand`, already known at the receivers in `knowledge`.
// The order pair is just the two set sizes.
struct SymbolSpec {
  int tx = 0;
  std::uint32_t demand = 0;
  std::uint32_t knowledge = 0;
  std::int64_t serial = 0;

  int order_m() const { return mask_size(demand); }
  int order_n() const { return mask_size(knowledge); }
  std::string label() const;
};

// Sparse complex functional over the ground-symbol registry, kept sorted by
// coordinate. Scheme-built symbols stay inside one transmitter's block
// (owner_tx >= 1); receiver-side rows may mix blocks (owner_tx == kMixed).
class LinearForm {
 public:
  static constexpr int kMixed = -1;
  using Term = std::pair<std::int32_t, Complex>;

  LinearForm() = default;
  static LinearForm unit(int owner_tx, std::int32_t index);

  int owner() const { return owner_; }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  // Accumulates c * f. Mixing distinct owners demotes the owner to kMixed;
  // the combine() path below refuses that, receiver rows rely on it.
  LinearForm& add_scaled(const LinearForm& f, Complex c);
  LinearForm& scale(Complex c);

 private:
  int owner_ = 0;
  std::vector<Term> terms_;
};

// coeffs(s) weighted sum of forms[s]. All inputs must share one owner;
// mixing owners here would mean a transmitter encoding data it does not hold.
LinearForm combine(const std::vector<const LinearForm*>& forms,
                   const CVector& coeffs);

// Planted ground truth: every data symbol of every transmitter gets a complex
// value drawn from the shared data stream at registration time.
class GroundRegistry {
 public:
  explicit GroundRegistry(int n_tx);

  int n_tx() const { return n_tx_; }
  std::int32_t size() const { return static_cast<std::int32_t>(values_.size()); }

  // Registers `count` new ground symbols for tx and returns their unit forms.
  std::vector<LinearForm> fresh_block(int tx, int count, Rng& data_stream);

  int tx_of(std::int32_t idx) const;
  Complex planted(std::int32_t idx) const;
  const std::vector<std::int32_t>& block_of(int tx) const;

  Complex evaluate(const LinearForm& f) const;
  // Same functional summed at transmission precision; the planted values
  // themselves are exact doubles.
  LComplex evaluate_l(const LinearForm& f) const;

 private:
  int n_tx_;
  std::vector<Complex> values_;
  std::vector<int> owner_;
  std::vector<std::vector<std::int32_t>> per_tx_;
};

}  // namespace dcsit
