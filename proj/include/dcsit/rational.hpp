#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace dcsit {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// "num/den" with no whitespace; integers print without the "/1".
inline std::string fraction_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

Rational binomial(int n, int k);

// 2^k for k >= 0.
Rational pow2(int k);

// Smallest positive integer multiple of a positive rational chain, with the
// entries' gcd reduced to 1. Throws when an entry exceeds long long.
std::vector<long long> smallest_integer_profile(
    const std::vector<Rational>& chain);

}  // namespace dcsit
