#pragma once

// Uniform scalar interface over the two backends: std::complex<double>
// (tolerance-based predicates) and SurdComplex (exact predicates).

#include <complex>

#include "projdyn/exact.hpp"

namespace projdyn {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
  static constexpr bool is_exact = false;
  static cplx from_int(long long v) { return cplx(static_cast<double>(v), 0.0); }
  static double abs(const cplx& x) { return std::abs(x); }
  static cplx conj(const cplx& x) { return std::conj(x); }
  static bool is_zero(const cplx& x, double scale, double tol) {
    return std::abs(x) <= tol * std::max(1.0, scale);
  }
  static cplx inv(const cplx& x) { return cplx(1.0, 0.0) / x; }
  static std::complex<double> to_complex(const cplx& x) { return x; }
};

template <>
struct scalar_traits<SurdComplex> {
  static constexpr bool is_exact = true;
  static SurdComplex from_int(long long v) { return SurdComplex(v); }
  static double abs(const SurdComplex& x) { return std::abs(x.to_complex()); }
  static SurdComplex conj(const SurdComplex& x) { return x.conj(); }
  static bool is_zero(const SurdComplex& x, double, double) { return x.is_zero(); }
  static SurdComplex inv(const SurdComplex& x) { return SurdComplex(1) / x; }
  static std::complex<double> to_complex(const SurdComplex& x) { return x.to_complex(); }
};

template <class S>
bool scalar_eq(const S& a, const S& b, double tol = kDefaultTol) {
  using T = scalar_traits<S>;
  double scale = std::max(T::abs(a), T::abs(b));
  return T::is_zero(a - b, scale, tol);
}

}  // namespace projdyn
