#include "dcsit/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dcsit {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Rational rr(long num, long den = 1) { return rat(num, den); }

long long to_longlong(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("count overflows");
  return static_cast<long long>(z.get_si());
}

}  // namespace

Rational binomial(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, "index out of range");
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Rational(z);
}

Rational pow2(int k) {
  require(k >= 0, "index out of range");
  mpz_class z = 1;
  z <<= k;
  return Rational(z);
}

std::vector<long long> smallest_integer_profile(
    const std::vector<Rational>& chain) {
  mpz_class l(1);
  for (const Rational& r : chain) {
    require(sgn(r) > 0, "degenerate dimensions");
    mpz_class den = r.get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    l = l / g * den;
  }
  std::vector<mpz_class> scaled;
  scaled.reserve(chain.size());
  mpz_class g(0);
  for (const Rational& r : chain) {
    mpz_class v = r.get_num() * (l / r.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    scaled.push_back(v);
  }
  std::vector<long long> out;
  out.reserve(scaled.size());
  for (const mpz_class& v : scaled) out.push_back(to_longlong(v / g));
  return out;
}

Rational appendix_coefficient(CoeffKind kind, int K, int i, int l) {
  if (kind == CoeffKind::a) {
    require(K >= 2 && i >= 0 && i <= K - 2 && l >= 0 && l <= i,
            "index out of range");
    if (l == i) {
      return rr(-static_cast<long>(i) * (i - 1), 2L * (4L * i * i - 1));
    }
    Rational prod = 1;
    for (int j = l + 1; j <= i; ++j) prod *= rr(j, 2L * j + 1);
    return rr(static_cast<long>(i - l + 1) * (3L * l * l + l - 1),
              2L * (4L * l * l - 1)) *
           prod;
  }
  require(K >= 2 && i >= 1 && i <= K - 1 && l >= 0 && l <= i - 1,
          "index out of range");
  Rational prod = 1;
  for (int j = l + 1; j <= i; ++j) prod *= rr(j, 2L * j + 1);
  return rr(static_cast<long>(i - l) * (l + 1), 2L * l + 1) * prod;
}

Rational a_series_sum(int K, int i) {
  require(K >= 2 && i >= 0 && i <= K - 2, "index out of range");
  Rational total = 0;
  for (int l = 0; l <= i; ++l) {
    total += appendix_coefficient(CoeffKind::a, K, i, l) / rr(K - l);
  }
  return total;
}

Rational b_series_sum(int K, int i) {
  require(K >= 2 && i >= 0 && i <= K - 1, "index out of range");
  Rational total = 0;
  for (int l = 0; l <= i - 1; ++l) {
    total += appendix_coefficient(CoeffKind::b, K, i, l) / rr(K - l);
  }
  return total;
}

Rational series_exact(SeriesKind kind, int K, int p) {
  switch (kind) {
    case SeriesKind::psi: {
      require(K >= 3, "index out of range");
      Rational total = 0;
      Rational prod = 1;
      for (int l1 = K - 3; l1 >= 0; --l1) {
        prod *= rr(l1 + 1, 2L * l1 + 3);
        total += rr(static_cast<long>(K - l1 - 1) * (3L * l1 * l1 + l1 - 1),
                    2L * (K - l1) * (4L * l1 * l1 - 1)) *
                 prod;
      }
      return total;
    }
    case SeriesKind::phi: {
      require(K >= 2, "index out of range");
      Rational total = 0;
      Rational prod = 1;
      for (int l1 = K - 2; l1 >= 0; --l1) {
        prod *= rr(l1 + 1, 2L * l1 + 3);
        total += rr(static_cast<long>(K - l1 - 1) * (l1 + 1),
                    static_cast<long>(K - l1) * (2L * l1 + 1)) *
                 prod;
      }
      return total;
    }
    case SeriesKind::gamma_p: {
      require(K >= 1 && p >= 1, "index out of range");
      Rational total = 0;
      for (int l = 0; l <= K - p; ++l) {
        total += rr(K - l - 1) / (rr(K - l) * pow2(K - l));
      }
      return total;
    }
    case SeriesKind::lambda_p: {
      require(K >= 1 && p >= 1, "index out of range");
      Rational total = 0;
      for (int l = 0; l <= K - p; ++l) {
        total += rr(static_cast<long>(l) * (K - l - 1)) /
                 (rr(static_cast<long>(K) * (K - l)) * pow2(K - l));
      }
      return total;
    }
  }
  throw std::invalid_argument("index out of range");
}

SeriesValue series(SeriesKind kind, int K, int p) {
  SeriesValue out;
  out.k = K;
  out.kind = kind;
  out.p = p;
  switch (kind) {
    case SeriesKind::psi: {
      require(K >= 3, "index out of range");
      double total = 0.0;
      double prod = 1.0;
      for (int l1 = K - 3; l1 >= 0; --l1) {
        prod *= static_cast<double>(l1 + 1) / static_cast<double>(2 * l1 + 3);
        total += static_cast<double>(K - l1 - 1) *
                 (3.0 * l1 * l1 + l1 - 1.0) /
                 (2.0 * (K - l1) * (4.0 * l1 * l1 - 1.0)) * prod;
      }
      out.value = total;
      return out;
    }
    case SeriesKind::phi: {
      require(K >= 2, "index out of range");
      double total = 0.0;
      double prod = 1.0;
      for (int l1 = K - 2; l1 >= 0; --l1) {
        prod *= static_cast<double>(l1 + 1) / static_cast<double>(2 * l1 + 3);
        total += static_cast<double>(K - l1 - 1) * (l1 + 1.0) /
                 (static_cast<double>(K - l1) * (2.0 * l1 + 1.0)) * prod;
      }
      out.value = total;
      return out;
    }
    case SeriesKind::gamma_p:
    case SeriesKind::lambda_p: {
      require(K >= 1 && p >= 1, "index out of range");
      double total = 0.0;
      for (int l = 0; l <= K - p; ++l) {
        const double w = std::ldexp(1.0, -(K - l));
        if (kind == SeriesKind::gamma_p) {
          total += (K - l - 1.0) / (K - l) * w;
        } else {
          total += static_cast<double>(l) * (K - l - 1.0) /
                   (static_cast<double>(K) * (K - l)) * w;
        }
      }
      out.value = total;
      return out;
    }
  }
  throw std::invalid_argument("index out of range");
}

Rational a2_theorem(int K) {
  require(K >= 3, "index out of range");
  const long km2 = K - 2;
  return rr(-km2 * (K - 3), 4L * (4L * km2 * km2 - 1)) +
         series_exact(SeriesKind::psi, K);
}

Rational dof_ic_closed(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  if (m == K) return 1;
  if (m == 1) {
    if (K == 2) return 1;
    const Rational a2 = a2_theorem(K);
    const Rational denom = Rational(1) -
                           rr(K - 2, static_cast<long>(K) * (K - 1) * (K - 1)) -
                           rr(K - 2, K - 1) * a2;
    return 1 / denom;
  }
  return 1 / (Rational(1) - a_series_sum(K, K - m));
}

Rational dof_ic_recursive(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  Rational d = 1;  // order-K stage: plain broadcast, one symbol per slot
  for (int mm = K - 1; mm >= m && mm >= 2; --mm) {
    const long km = K - mm;
    const Rational denom = rr(static_cast<long>(mm) * (km + 1)) +
                           rr(km, mm + 1) + rr((mm - 1) * km) / d;
    d = rr(static_cast<long>(mm) * (2 * km + 1)) / denom;
  }
  if (m == 1) {
    const long k1 = K - 1;
    const Rational denom =
        rr(k1 * k1 + 1) + rr(static_cast<long>(K) * k1 * (K - 2)) / d;
    d = rr(static_cast<long>(K) * k1 * k1) / denom;
  }
  return d;
}

Rational dof_x_closed(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  return 1 / (Rational(1) - b_series_sum(K, K - m));
}

Rational dof_x_recursive(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  Rational d = 1;
  for (int mm = K - 1; mm >= m; --mm) {
    const long km = K - mm;
    const Rational denom =
        rr(static_cast<long>(mm + 1) * (km + 1)) + rr(static_cast<long>(mm) * km) / d;
    d = rr(static_cast<long>(mm + 1) * (2 * km + 1)) / denom;
  }
  return d;
}

double dof_ic_value(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  if (m == K) return 1.0;
  if (m == 1) {
    if (K == 2) return 1.0;
    const double km2 = K - 2.0;
    const double a2 = -km2 * (K - 3.0) / (4.0 * (4.0 * km2 * km2 - 1.0)) +
                      series(SeriesKind::psi, K).value;
    return 1.0 / (1.0 - (K - 2.0) / (K * (K - 1.0) * (K - 1.0)) -
                  (K - 2.0) / (K - 1.0) * a2);
  }
  const int i = K - m;
  double sum = -static_cast<double>(i) * (i - 1.0) /
               (2.0 * (4.0 * i * i - 1.0)) / (K - i);
  double prod = 1.0;
  for (int l = i - 1; l >= 0; --l) {
    prod *= static_cast<double>(l + 1) / static_cast<double>(2 * l + 3);
    sum += (i - l + 1.0) * (3.0 * l * l + l - 1.0) /
           (2.0 * (4.0 * l * l - 1.0)) * prod / (K - l);
  }
  return 1.0 / (1.0 - sum);
}

double dof_x_value(int K, int m) {
  require(K >= 2 && m >= 1 && m <= K, "index out of range");
  const int i = K - m;
  double sum = 0.0;
  double prod = 1.0;
  for (int l = i - 1; l >= 0; --l) {
    prod *= static_cast<double>(l + 1) / static_cast<double>(2 * l + 3);
    sum += (i - l * 1.0) * (l + 1.0) / (2.0 * l + 1.0) * prod / (K - l);
  }
  return 1.0 / (1.0 - sum);
}

Rational dof_x_prior(int K) {
  require(K >= 2, "index out of range");
  return rat(2L * (2L * K - 1), 3L * K - 1);
}

PhaseCounts phase_counts(ChannelKind kind, int K, int m) {
  PhaseCounts out;
  if (kind == ChannelKind::ic) {
    require(K >= 3 && m >= 1 && m <= K - 1, "index out of range");
    if (m == 1) {
      const long long k1 = K - 1;
      out.n_consumed = static_cast<long long>(K) * k1 * k1;
      out.t_slots = k1 * k1 + 1;
      out.n_next = static_cast<long long>(K) * k1 * (K - 2);
      out.n_one_m = 0;
      return out;
    }
    const mpz_class cm = binomial(K, m).get_num();
    const mpz_class cm1 = binomial(K, m + 1).get_num();
    out.n_consumed = to_longlong(mpz_class(m * (2 * (K - m) + 1)) * cm);
    out.t_slots = to_longlong(mpz_class(m * (K - m + 1)) * cm);
    out.n_next = to_longlong(mpz_class(m * m - 1) * cm1);
    out.n_one_m = to_longlong(mpz_class(m + 1) * cm1);
    return out;
  }
  require(K >= 2 && m >= 1 && m <= K - 1, "index out of range");
  const mpz_class cm = binomial(K, m).get_num();
  const mpz_class cm1 = binomial(K, m + 1).get_num();
  out.n_consumed = to_longlong(mpz_class(2 * (2 * (K - m) + 1)) * cm);
  out.t_slots = to_longlong(mpz_class(2 * (K - m + 1)) * cm);
  out.n_next = to_longlong(mpz_class(2 * m) * cm1);
  out.n_one_m = 0;
  return out;
}

LimitValues limits() {
  const double ln2 = std::log(2.0);
  LimitValues v;
  v.ic = 4.0 / (6.0 * ln2 - 1.0);
  v.x = 1.0 / ln2;
  v.psi = 21.0 / 16.0 - 1.5 * ln2;
  v.phi = 1.0 - ln2;
  return v;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::less: return "<";
    case Relation::equal: return "=";
    case Relation::greater: return ">";
  }
  return "?";
}

namespace {
Relation compare(const Rational& lhs, const Rational& rhs) {
  const int c = cmp(lhs, rhs);
  if (c < 0) return Relation::less;
  if (c > 0) return Relation::greater;
  return Relation::equal;
}
}  // namespace

BoundsReport bounds_check(int K) {
  require(K >= 2, "index out of range");
  BoundsReport rep;
  rep.K = K;
  if (K >= 3) {
    rep.has_psi = true;
    rep.psi_value = series_exact(SeriesKind::psi, K);
    rep.psi_lower = rr(3L * K, 2L * K - 3) * series_exact(SeriesKind::lambda_p, K, 3);
    rep.psi_upper = rr(3, 2) * series_exact(SeriesKind::gamma_p, K, 3) +
                    rr(K - 2) / (rr(5L * (K - 1)) * pow2(K));
    rep.psi_lower_rel = compare(rep.psi_lower, rep.psi_value);
    rep.psi_upper_rel = compare(rep.psi_value, rep.psi_upper);
  }
  rep.phi_value = series_exact(SeriesKind::phi, K);
  rep.phi_lower = rr(2L * K, 2L * K - 1) * series_exact(SeriesKind::lambda_p, K, 2);
  rep.phi_upper = series_exact(SeriesKind::gamma_p, K, 3) +
                  rr(static_cast<long>(K - 1) * (K - 1),
                     2L * (2L * K - 1) * (2L * K - 3)) +
                  rr(K - 1) / (rr(15L * K) * pow2(K));
  rep.phi_lower_rel = compare(rep.phi_lower, rep.phi_value);
  rep.phi_upper_rel = compare(rep.phi_value, rep.phi_upper);
  return rep;
}

}  // namespace dcsit
