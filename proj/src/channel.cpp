#include "dcsit/channel.hpp"

#include <ostream>
#include <stdexcept>

namespace dcsit {

const CMatrix& CsitView::slot(int t) const {
  if (t < 1) throw std::invalid_argument("index out of range");
  if (t >= now_) throw std::runtime_error("future CSIT requested");
  return proc_->slot(t);
}

FadingProcess::FadingProcess(int n_rx, int n_tx, std::uint64_t seed)
    : n_rx_(n_rx), n_tx_(n_tx), seed_(seed), rng_(seed, streams::kChannel) {
  if (n_rx < 1 || n_tx < 1) throw std::invalid_argument("index out of range");
}

const CMatrix& FadingProcess::draw_slot() {
  CMatrix h(n_rx_, n_tx_);
  for (int j = 0; j < n_rx_; ++j) {
    for (int i = 0; i < n_tx_; ++i) {
      h(j, i) = rng_.cn01();
    }
  }
  history_.push_back(std::move(h));
  return history_.back();
}

CsitView FadingProcess::csit_view(int t) const {
  if (t < 1) throw std::invalid_argument("index out of range");
  if (t > current_slot() + 1) throw std::runtime_error("future CSIT requested");
  return CsitView(this, t);
}

CVector FadingProcess::rx_csi_row(int j, int t) const {
  if (j < 1 || j > n_rx_) throw std::invalid_argument("index out of range");
  return slot(t).row(j - 1).transpose();
}

const CMatrix& FadingProcess::slot(int t) const {
  if (t < 1) throw std::invalid_argument("index out of range");
  if (t > current_slot()) throw std::runtime_error("slot not drawn");
  return history_[static_cast<std::size_t>(t - 1)];
}

void FadingProcess::dump_trace_csv(std::ostream& os) const {
  os << "t,j,i,re,im\n";
  os.precision(17);
  for (int t = 1; t <= current_slot(); ++t) {
    const CMatrix& h = history_[static_cast<std::size_t>(t - 1)];
    for (int j = 1; j <= n_rx_; ++j) {
      for (int i = 1; i <= n_tx_; ++i) {
        os << t << ',' << j << ',' << i << ',' << h(j - 1, i - 1).real() << ','
           << h(j - 1, i - 1).imag() << '\n';
      }
    }
  }
}

}  // namespace dcsit
