#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace dcsit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// The value plane (symbol values, transmitted samples, received samples) is
// carried at extended precision end to end. Instance data (channel draws,
// combining coefficients, planted ground values) stays on double: those are
// exact inputs by definition, while observation round-off would otherwise be
// amplified by the condition number of every stage of the decode cascade.
using LReal = long double;
using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;

inline LComplex lift(const Complex& z) { return LComplex(z.real(), z.imag()); }

inline Complex lower(const LComplex& z) {
  return Complex(static_cast<double>(z.real()),
                 static_cast<double>(z.imag()));
}

inline constexpr double kRankRelTol = 1e-9;

// Numerical rank: number of singular values above rel_tol * sigma_max.
// The all-zero matrix has rank 0. rel_tol must lie in [0, 1).
int rank(const CMatrix& m, double rel_tol = kRankRelTol);

// Unit vector w with q^T w = 0 for q with rows == cols + 1 and full column
// rank (plain transpose, no conjugation). Normalized so the first entry of
// largest magnitude is positive real; with that convention the result is a
// deterministic function of q. Throws "nullity mismatch" when the null space
// of q^T is not one-dimensional at rel_tol.
CVector left_null_vector(const CMatrix& q, double rel_tol = kRankRelTol);

// Extended-precision variant used on the value plane: the residual of the
// double version is itself large enough to dominate deep decode cascades.
LVector left_null_vector_l(const LMatrix& q, double rel_tol = kRankRelTol);

// Solves the square system a x = b via SVD. Throws "singular system" (with the
// fingerprint of a appended) when sigma_min <= rel_tol * sigma_max. When
// min_sigma_out is non-null it receives sigma_min even on success.
CVector solve(const CMatrix& a, const CVector& b, double rel_tol = kRankRelTol,
              double* min_sigma_out = nullptr);

double min_singular_value(const CMatrix& m);

// FNV-1a over the raw entry bytes in column-major order, 16 hex digits.
// Stable across runs; used to name a matrix in error messages and reports.
std::string matrix_fingerprint(const CMatrix& m);

}  // namespace dcsit
