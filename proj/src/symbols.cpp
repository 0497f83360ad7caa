#include "dcsit/symbols.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace dcsit {

std::uint32_t mask_of(std::initializer_list<int> users) {
  std::uint32_t m = 0;
  for (int u : users) {
    if (u < 1 || u > 32) throw std::invalid_argument("index out of range");
    m |= 1u << (u - 1);
  }
  return m;
}

std::uint32_t full_mask(int k) {
  if (k < 0 || k > 32) throw std::invalid_argument("index out of range");
  return k == 32 ? ~0u : (1u << k) - 1u;
}

int mask_size(std::uint32_t mask) { return std::popcount(mask); }

bool mask_has(std::uint32_t mask, int user) {
  return user >= 1 && user <= 32 && (mask >> (user - 1)) & 1u;
}

std::vector<int> mask_members(std::uint32_t mask) {
  std::vector<int> out;
  for (int u = 1; mask != 0; ++u, mask >>= 1) {
    if (mask & 1u) out.push_back(u);
  }
  return out;
}

std::string mask_label(std::uint32_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int u : mask_members(mask)) {
    if (!first) os << ',';
    os << u;
    first = false;
  }
  os << '}';
  return os.str();
}

std::vector<std::uint32_t> subsets_of_size(int k, int m) {
  if (m < 0 || m > k) throw std::invalid_argument("index out of range");
  std::vector<std::uint32_t> out;
  if (m == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint32_t limit = full_mask(k);
  std::uint32_t v = full_mask(m);
  while (v <= limit) {
    out.push_back(v);
    // Gosper's hack: next mask with the same popcount.
    const std::uint32_t t = v | (v - 1);
    const std::uint32_t next =
        (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    if (next <= v) break;
    v = next;
  }
  return out;
}

std::string SymbolSpec::label() const {
  std::ostringstream os;
  os << "u[" << tx << '|' << mask_label(demand);
  if (knowledge != 0) os << ';' << mask_label(knowledge);
  os << "]#" << serial;
  return os.str();
}

LinearForm LinearForm::unit(int owner_tx, std::int32_t index) {
  LinearForm f;
  f.owner_ = owner_tx;
  f.terms_.emplace_back(index, Complex(1.0, 0.0));
  return f;
}

LinearForm& LinearForm::add_scaled(const LinearForm& f, Complex c) {
  if (f.empty() || c == Complex(0.0, 0.0)) return *this;
  if (owner_ == 0) {
    owner_ = f.owner_;
  } else if (owner_ != f.owner_) {
    owner_ = kMixed;
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + f.terms_.size());
  std::size_t a = 0, b = 0;
  while (a < terms_.size() || b < f.terms_.size()) {
    if (b == f.terms_.size() ||
        (a < terms_.size() && terms_[a].first < f.terms_[b].first)) {
      merged.push_back(terms_[a++]);
    } else if (a == terms_.size() || f.terms_[b].first < terms_[a].first) {
      merged.emplace_back(f.terms_[b].first, c * f.terms_[b].second);
      ++b;
    } else {
      merged.emplace_back(terms_[a].first, terms_[a].second + c * f.terms_[b].second);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

LinearForm& LinearForm::scale(Complex c) {
  for (auto& t : terms_) t.second *= c;
  return *this;
}

LinearForm combine(const std::vector<const LinearForm*>& forms,
                   const CVector& coeffs) {
  if (forms.empty() || coeffs.size() != static_cast<Eigen::Index>(forms.size())) {
    throw std::invalid_argument("degenerate dimensions");
  }
  int owner = 0;
  for (const LinearForm* f : forms) {
    if (f->owner() == LinearForm::kMixed) {
      throw std::invalid_argument("cross-transmitter combination forbidden");
    }
    if (f->empty()) continue;
    if (owner == 0) {
      owner = f->owner();
    } else if (owner != f->owner()) {
      throw std::invalid_argument("cross-transmitter combination forbidden");
    }
  }
  LinearForm out;
  for (std::size_t s = 0; s < forms.size(); ++s) {
    out.add_scaled(*forms[s], coeffs(static_cast<Eigen::Index>(s)));
  }
  return out;
}

GroundRegistry::GroundRegistry(int n_tx) : n_tx_(n_tx) {
  if (n_tx < 1) throw std::invalid_argument("index out of range");
  per_tx_.resize(static_cast<std::size_t>(n_tx));
}

std::vector<LinearForm> GroundRegistry::fresh_block(int tx, int count,
                                                    Rng& data_stream) {
  if (tx < 1 || tx > n_tx_) throw std::invalid_argument("index out of range");
  if (count < 1) throw std::invalid_argument("empty fresh block");
  std::vector<LinearForm> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    const std::int32_t idx = size();
    values_.push_back(data_stream.cn01());
    owner_.push_back(tx);
    per_tx_[static_cast<std::size_t>(tx - 1)].push_back(idx);
    out.push_back(LinearForm::unit(tx, idx));
  }
  return out;
}

int GroundRegistry::tx_of(std::int32_t idx) const {
  if (idx < 0 || idx >= size()) throw std::invalid_argument("index out of range");
  return owner_[static_cast<std::size_t>(idx)];
}

Complex GroundRegistry::planted(std::int32_t idx) const {
  if (idx < 0 || idx >= size()) throw std::invalid_argument("index out of range");
  return values_[static_cast<std::size_t>(idx)];
}

const std::vector<std::int32_t>& GroundRegistry::block_of(int tx) const {
  if (tx < 1 || tx > n_tx_) throw std::invalid_argument("index out of range");
  return per_tx_[static_cast<std::size_t>(tx - 1)];
}

Complex GroundRegistry::evaluate(const LinearForm& f) const {
  Complex acc(0.0, 0.0);
  for (const auto& [idx, c] : f.terms()) {
    acc += c * planted(idx);
  }
  return acc;
}

LComplex GroundRegistry::evaluate_l(const LinearForm& f) const {
  LComplex acc(0.0L);
  for (const auto& [idx, c] : f.terms()) {
    acc += lift(c) * lift(planted(idx));
  }
  return acc;
}

}  // namespace dcsit
