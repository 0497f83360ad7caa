#include "dcsit/linalg.hpp"

#include <cstdint>
#include <cstring>
#include <stdexcept>

namespace dcsit {

namespace {

void require_wellformed(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw std::invalid_argument("degenerate dimensions");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("non-finite entries");
  }
}

void require_tol(double rel_tol) {
  if (!(rel_tol >= 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("rel_tol outside [0, 1)");
  }
}

int rank_of_singvals(const Eigen::VectorXd& s, double rel_tol) {
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * smax) ++r;
  }
  return r;
}

}  // namespace

int rank(const CMatrix& m, double rel_tol) {
  require_wellformed(m);
  require_tol(rel_tol);
  Eigen::JacobiSVD<CMatrix> svd(m);
  return rank_of_singvals(svd.singularValues(), rel_tol);
}

CVector left_null_vector(const CMatrix& q, double rel_tol) {
  require_wellformed(q);
  require_tol(rel_tol);
  if (q.rows() != q.cols() + 1) {
    throw std::invalid_argument("degenerate dimensions");
  }
  // Null space of the plain transpose. V spans the domain of q^T, which has
  // dimension rows(q); the sought vector is the last right-singular vector.
  const CMatrix qt = q.transpose();
  Eigen::JacobiSVD<CMatrix> svd(qt, Eigen::ComputeFullV);
  if (rank_of_singvals(svd.singularValues(), rel_tol) != q.cols()) {
    throw std::runtime_error("nullity mismatch");
  }
  CVector w = svd.matrixV().col(q.rows() - 1);
  w.normalize();
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double a = std::abs(w(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  w *= std::conj(w(imax)) / best;
  return w;
}

LVector left_null_vector_l(const LMatrix& q, double rel_tol) {
  if (q.rows() == 0 || q.cols() == 0 || !q.allFinite()) {
    throw std::invalid_argument(q.rows() == 0 || q.cols() == 0
                                    ? "degenerate dimensions"
                                    : "non-finite entries");
  }
  require_tol(rel_tol);
  if (q.rows() != q.cols() + 1) {
    throw std::invalid_argument("degenerate dimensions");
  }
  const LMatrix qt = q.transpose();
  Eigen::JacobiSVD<LMatrix> svd(qt, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const long double smax = s.size() > 0 ? s(0) : 0.0L;
  int r = 0;
  if (smax > 0.0L) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > static_cast<long double>(rel_tol) * smax) ++r;
    }
  }
  if (r != q.cols()) throw std::runtime_error("nullity mismatch");
  LVector w = svd.matrixV().col(q.rows() - 1);
  w.normalize();
  Eigen::Index imax = 0;
  long double best = -1.0L;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const long double a = std::abs(w(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  w *= std::conj(w(imax)) / best;
  return w;
}

CVector solve(const CMatrix& a, const CVector& b, double rel_tol,
              double* min_sigma_out) {
  require_wellformed(a);
  require_tol(rel_tol);
  if (a.rows() != a.cols() || b.size() != a.rows()) {
    throw std::invalid_argument("degenerate dimensions");
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (min_sigma_out != nullptr) *min_sigma_out = smin;
  if (s(0) == 0.0 || smin <= rel_tol * s(0)) {
    throw std::runtime_error("singular system " + matrix_fingerprint(a));
  }
  return svd.solve(b);
}

double min_singular_value(const CMatrix& m) {
  require_wellformed(m);
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

std::string matrix_fingerprint(const CMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffull;
      h *= 0x100000001b3ull;
    }
  };
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      feed(m(r, c).real());
      feed(m(r, c).imag());
    }
  }
  static const char* hexd = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hexd[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace dcsit
