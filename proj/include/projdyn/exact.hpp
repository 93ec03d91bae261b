#pragma once

// Exact arithmetic for the surd-rational backend: arbitrary-precision
// integers, rationals, and the real/complex fields Q(sqrt(d)), Q(i, sqrt(d)).

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace projdyn {

class MixedSurdError : public std::runtime_error {
public:
  MixedSurdError() : std::runtime_error("operands adjoin different square roots") {}
};

// Sign-magnitude big integer, base 2^32 limbs, little endian.
class BigInt {
public:
  BigInt() = default;
  BigInt(long long v);
  explicit BigInt(const std::string& decimal);

  bool is_zero() const { return limbs_.empty(); }
  bool is_negative() const { return neg_; }
  int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated toward zero
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;
  bool operator<=(const BigInt& o) const { return *this < o || *this == o; }
  bool operator>(const BigInt& o) const { return o < *this; }
  bool operator>=(const BigInt& o) const { return o <= *this; }

  static BigInt gcd(BigInt a, BigInt b);
  BigInt abs() const;

  double to_double() const;
  std::string to_string() const;
  // Exact value when it fits in signed 64 bits.
  bool fits_int64(long long& out) const;

private:
  // |limbs_| empty means zero; highest limb nonzero otherwise.
  std::vector<uint32_t> limbs_;
  bool neg_ = false;

  void trim();
  static int cmp_mag(const BigInt& a, const BigInt& b);
  static BigInt add_mag(const BigInt& a, const BigInt& b);
  static BigInt sub_mag(const BigInt& a, const BigInt& b);  // needs |a| >= |b|
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
};

// Reduced fraction of BigInts, denominator > 0.
class BigRational {
public:
  BigRational() : num_(0), den_(1) {}
  BigRational(long long v) : num_(v), den_(1) {}
  BigRational(BigInt n, BigInt d);
  static BigRational of(long long n, long long d) { return BigRational(BigInt(n), BigInt(d)); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == BigInt(1); }
  int sign() const { return num_.sign(); }

  BigRational operator-() const;
  BigRational operator+(const BigRational& o) const;
  BigRational operator-(const BigRational& o) const;
  BigRational operator*(const BigRational& o) const;
  BigRational operator/(const BigRational& o) const;

  bool operator==(const BigRational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const BigRational& o) const { return !(*this == o); }
  bool operator<(const BigRational& o) const;

  double to_double() const;
  std::string to_string() const;

private:
  BigInt num_, den_;
  void reduce();
};

// a + b*sqrt(d) with a, b rational and d a squarefree-reduced nonnegative
// integer. d == 0 encodes a plain rational. Values with different nonzero d
// cannot be mixed.
class SurdReal {
public:
  SurdReal() : a_(0), b_(0), d_(0) {}
  SurdReal(long long v) : a_(v), b_(0), d_(0) {}
  SurdReal(BigRational a) : a_(std::move(a)), b_(0), d_(0) {}
  SurdReal(BigRational a, BigRational b, long long d);
  static SurdReal sqrt_of(long long d) { return SurdReal(BigRational(0), BigRational(1), d); }

  const BigRational& rational_part() const { return a_; }
  const BigRational& surd_part() const { return b_; }
  long long surd_base() const { return d_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  int sign() const;

  SurdReal operator-() const;
  SurdReal operator+(const SurdReal& o) const;
  SurdReal operator-(const SurdReal& o) const;
  SurdReal operator*(const SurdReal& o) const;
  SurdReal operator/(const SurdReal& o) const;

  bool operator==(const SurdReal& o) const;
  bool operator!=(const SurdReal& o) const { return !(*this == o); }
  bool operator<(const SurdReal& o) const { return (o - *this).sign() > 0; }
  bool operator<=(const SurdReal& o) const { return (o - *this).sign() >= 0; }
  bool operator>(const SurdReal& o) const { return o < *this; }
  bool operator>=(const SurdReal& o) const { return o <= *this; }

  double to_double() const;
  std::string to_string() const;

private:
  BigRational a_, b_;
  long long d_;
  // Resolves the shared base of two operands, throws MixedSurdError.
  static long long join_base(const SurdReal& x, const SurdReal& y);
};

// Element of Q(i, sqrt(d)).
class SurdComplex {
public:
  SurdComplex() = default;
  SurdComplex(long long v) : re_(v), im_(0) {}
  SurdComplex(SurdReal re) : re_(std::move(re)), im_(0) {}
  SurdComplex(SurdReal re, SurdReal im) : re_(std::move(re)), im_(std::move(im)) {}
  static SurdComplex i() { return SurdComplex(SurdReal(0), SurdReal(1)); }
  static SurdComplex sqrt_of(long long d) { return SurdComplex(SurdReal::sqrt_of(d)); }

  const SurdReal& real() const { return re_; }
  const SurdReal& imag() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  SurdComplex conj() const { return SurdComplex(re_, -im_); }
  SurdReal abs2() const { return re_ * re_ + im_ * im_; }

  SurdComplex operator-() const { return SurdComplex(-re_, -im_); }
  SurdComplex operator+(const SurdComplex& o) const { return {re_ + o.re_, im_ + o.im_}; }
  SurdComplex operator-(const SurdComplex& o) const { return {re_ - o.re_, im_ - o.im_}; }
  SurdComplex operator*(const SurdComplex& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
  }
  SurdComplex operator/(const SurdComplex& o) const;
  SurdComplex& operator+=(const SurdComplex& o) { *this = *this + o; return *this; }
  SurdComplex& operator-=(const SurdComplex& o) { *this = *this - o; return *this; }
  SurdComplex& operator*=(const SurdComplex& o) { *this = *this * o; return *this; }
  SurdComplex& operator/=(const SurdComplex& o) { *this = *this / o; return *this; }

  bool operator==(const SurdComplex& o) const { return re_ == o.re_ && im_ == o.im_; }
  bool operator!=(const SurdComplex& o) const { return !(*this == o); }

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }
  std::string to_string() const;

private:
  SurdReal re_, im_;
};

inline SurdComplex operator*(long long k, const SurdComplex& x) { return SurdComplex(k) * x; }

}  // namespace projdyn

namespace Eigen {

template <>
struct NumTraits<projdyn::SurdReal> {
  using Real = projdyn::SurdReal;
  using NonInteger = projdyn::SurdReal;
  using Literal = projdyn::SurdReal;
  using Nested = projdyn::SurdReal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 60,
  };
  static inline Real epsilon() { return projdyn::SurdReal(0); }
  static inline Real dummy_precision() { return projdyn::SurdReal(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<projdyn::SurdComplex> {
  using Real = projdyn::SurdReal;
  using NonInteger = projdyn::SurdComplex;
  using Literal = projdyn::SurdComplex;
  using Nested = projdyn::SurdComplex;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 80,
    MulCost = 160,
  };
  static inline Real epsilon() { return projdyn::SurdReal(0); }
  static inline Real dummy_precision() { return projdyn::SurdReal(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace projdyn {
// ADL hooks used by Eigen expression evaluation.
inline SurdComplex conj(const SurdComplex& x) { return x.conj(); }
inline SurdReal real(const SurdComplex& x) { return x.real(); }
inline SurdReal imag(const SurdComplex& x) { return x.imag(); }
inline SurdReal abs2(const SurdComplex& x) { return x.abs2(); }
inline SurdReal conj(const SurdReal& x) { return x; }
inline SurdReal real(const SurdReal& x) { return x; }
inline SurdReal imag(const SurdReal&) { return SurdReal(0); }
inline SurdReal abs2(const SurdReal& x) { return x * x; }
}  // namespace projdyn
