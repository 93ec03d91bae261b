#include "projdyn/exact.hpp"

#include <algorithm>
#include <cmath>

namespace projdyn {

// ---------------------------------------------------------------- BigInt

BigInt::BigInt(long long v) {
  neg_ = v < 0;
  unsigned long long m = neg_ ? ~static_cast<unsigned long long>(v) + 1ULL
                              : static_cast<unsigned long long>(v);
  while (m) {
    limbs_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    m >>= 32;
  }
}

BigInt::BigInt(const std::string& s) {
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  BigInt acc;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    acc = acc * BigInt(10) + BigInt(s[i] - '0');
  }
  *this = acc;
  neg_ = neg && !is_zero();
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) neg_ = false;
}

int BigInt::cmp_mag(const BigInt& a, const BigInt& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

BigInt BigInt::add_mag(const BigInt& a, const BigInt& b) {
  BigInt r;
  r.limbs_.resize(std::max(a.limbs_.size(), b.limbs_.size()) + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < r.limbs_.size(); ++i) {
    uint64_t s = carry;
    if (i < a.limbs_.size()) s += a.limbs_[i];
    if (i < b.limbs_.size()) s += b.limbs_[i];
    r.limbs_[i] = static_cast<uint32_t>(s & 0xffffffffu);
    carry = s >> 32;
  }
  r.trim();
  return r;
}

BigInt BigInt::sub_mag(const BigInt& a, const BigInt& b) {
  BigInt r;
  r.limbs_.resize(a.limbs_.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.limbs_.size(); ++i) {
    int64_t s = static_cast<int64_t>(a.limbs_[i]) - borrow -
                (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
    if (s < 0) {
      s += (1LL << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.limbs_[i] = static_cast<uint32_t>(s);
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (neg_ == o.neg_) {
    BigInt r = add_mag(*this, o);
    r.neg_ = neg_ && !r.is_zero();
    return r;
  }
  int c = cmp_mag(*this, o);
  if (c == 0) return BigInt();
  BigInt r = c > 0 ? sub_mag(*this, o) : sub_mag(o, *this);
  r.neg_ = (c > 0 ? neg_ : o.neg_) && !r.is_zero();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (size_t i = 0; i < limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < o.limbs_.size(); ++j) {
      uint64_t cur = static_cast<uint64_t>(limbs_[i]) * o.limbs_[j] +
                     r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    size_t k = i + o.limbs_.size();
    while (carry) {
      uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  r.neg_ = neg_ != o.neg_;
  r.trim();
  return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
  q = BigInt();
  r = BigInt();
  if (cmp_mag(a, b) < 0) {
    r = a;
    r.neg_ = false;
  } else {
    // Bitwise long division on magnitudes.
    size_t bits = a.limbs_.size() * 32;
    q.limbs_.assign(a.limbs_.size(), 0);
    for (size_t i = bits; i-- > 0;) {
      // r <<= 1; r |= bit i of a
      uint32_t carry = 0;
      for (size_t j = 0; j < r.limbs_.size(); ++j) {
        uint32_t nc = r.limbs_[j] >> 31;
        r.limbs_[j] = (r.limbs_[j] << 1) | carry;
        carry = nc;
      }
      if (carry) r.limbs_.push_back(carry);
      uint32_t abit = (a.limbs_[i / 32] >> (i % 32)) & 1u;
      if (abit) {
        if (r.limbs_.empty()) r.limbs_.push_back(0);
        r.limbs_[0] |= 1u;
      }
      r.trim();
      if (cmp_mag(r, b) >= 0) {
        r = sub_mag(r, b);
        q.limbs_[i / 32] |= (1u << (i % 32));
      }
    }
    q.trim();
  }
  q.neg_ = (a.neg_ != b.neg_) && !q.is_zero();
  r.neg_ = a.neg_ && !r.is_zero();
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return r;
}

bool BigInt::operator<(const BigInt& o) const {
  if (neg_ != o.neg_) return neg_;
  int c = cmp_mag(*this, o);
  return neg_ ? c > 0 : c < 0;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  r.neg_ = false;
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.neg_ = b.neg_ = false;
  while (!b.is_zero()) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double BigInt::to_double() const {
  double v = 0;
  for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
  return neg_ ? -v : v;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt t = abs();
  std::string digits;
  BigInt ten(10);
  while (!t.is_zero()) {
    BigInt q, r;
    divmod(t, ten, q, r);
    digits.push_back(static_cast<char>('0' + (r.limbs_.empty() ? 0 : r.limbs_[0])));
    t = q;
  }
  if (neg_) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

bool BigInt::fits_int64(long long& out) const {
  if (limbs_.size() > 2) return false;
  unsigned long long m = 0;
  if (limbs_.size() >= 1) m = limbs_[0];
  if (limbs_.size() == 2) m |= static_cast<unsigned long long>(limbs_[1]) << 32;
  if (!neg_ && m > 0x7fffffffffffffffULL) return false;
  if (neg_ && m > 0x8000000000000000ULL) return false;
  out = neg_ ? -static_cast<long long>(m) : static_cast<long long>(m);
  return true;
}

// ----------------------------------------------------------- BigRational

BigRational::BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("BigRational: zero denominator");
  reduce();
}

void BigRational::reduce() {
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

BigRational BigRational::operator-() const {
  BigRational r = *this;
  r.num_ = -r.num_;
  return r;
}

BigRational BigRational::operator+(const BigRational& o) const {
  return BigRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

BigRational BigRational::operator-(const BigRational& o) const {
  return BigRational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

BigRational BigRational::operator*(const BigRational& o) const {
  return BigRational(num_ * o.num_, den_ * o.den_);
}

BigRational BigRational::operator/(const BigRational& o) const {
  if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
  return BigRational(num_ * o.den_, den_ * o.num_);
}

bool BigRational::operator<(const BigRational& o) const {
  return num_ * o.den_ < o.num_ * den_;
}

double BigRational::to_double() const { return num_.to_double() / den_.to_double(); }

std::string BigRational::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

// -------------------------------------------------------------- SurdReal

namespace {
// Strip square factors: d = s^2 * d'. Returns (s, d').
std::pair<long long, long long> squarefree_split(long long d) {
  long long s = 1;
  for (long long f = 2; f * f <= d; ++f) {
    while (d % (f * f) == 0) {
      d /= f * f;
      s *= f;
    }
  }
  return {s, d};
}
}  // namespace

SurdReal::SurdReal(BigRational a, BigRational b, long long d)
    : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (d_ < 0) throw std::domain_error("SurdReal: negative surd base");
  if (b_.is_zero()) {
    d_ = 0;
    return;
  }
  auto [s, dd] = squarefree_split(d_);
  if (s != 1) {
    b_ = b_ * BigRational(s);
    d_ = dd;
  }
  if (d_ <= 1) {  // sqrt(0) = 0, sqrt(1) = 1: fold into the rational part
    if (d_ == 1) a_ = a_ + b_;
    b_ = BigRational(0);
    d_ = 0;
  }
}

long long SurdReal::join_base(const SurdReal& x, const SurdReal& y) {
  if (x.d_ == 0) return y.d_;
  if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
  throw MixedSurdError();
}

int SurdReal::sign() const {
  int sa = a_.sign(), sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // a and b*sqrt(d) have opposite signs: compare a^2 with b^2*d.
  BigRational a2 = a_ * a_;
  BigRational b2d = b_ * b_ * BigRational(d_);
  if (a2 == b2d) return 0;  // cannot happen for squarefree d > 1, kept for safety
  return (b2d < a2) ? sa : sb;
}

SurdReal SurdReal::operator-() const { return SurdReal(-a_, -b_, d_); }

SurdReal SurdReal::operator+(const SurdReal& o) const {
  return SurdReal(a_ + o.a_, b_ + o.b_, join_base(*this, o));
}

SurdReal SurdReal::operator-(const SurdReal& o) const {
  return SurdReal(a_ - o.a_, b_ - o.b_, join_base(*this, o));
}

SurdReal SurdReal::operator*(const SurdReal& o) const {
  long long d = join_base(*this, o);
  return SurdReal(a_ * o.a_ + b_ * o.b_ * BigRational(d), a_ * o.b_ + b_ * o.a_, d);
}

SurdReal SurdReal::operator/(const SurdReal& o) const {
  if (o.is_zero()) throw std::domain_error("SurdReal: division by zero");
  long long d = join_base(*this, o);
  // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d)
  BigRational n = o.a_ * o.a_ - o.b_ * o.b_ * BigRational(d);
  SurdReal conj(o.a_, -o.b_, d);
  SurdReal prod = *this * conj;
  return SurdReal(prod.a_ / n, prod.b_ / n, d);
}

bool SurdReal::operator==(const SurdReal& o) const {
  return a_ == o.a_ && b_ == o.b_ && (b_.is_zero() || d_ == o.d_);
}

double SurdReal::to_double() const {
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(d_));
}

std::string SurdReal::to_string() const {
  if (b_.is_zero()) return a_.to_string();
  std::string s = b_.to_string() + "*sqrt(" + std::to_string(d_) + ")";
  if (a_.is_zero()) return s;
  return a_.to_string() + (b_.sign() > 0 ? "+" : "") + s;
}

// ----------------------------------------------------------- SurdComplex

SurdComplex SurdComplex::operator/(const SurdComplex& o) const {
  if (o.is_zero()) throw std::domain_error("SurdComplex: division by zero");
  SurdReal n = o.abs2();
  SurdComplex num = *this * o.conj();
  return SurdComplex(num.re_ / n, num.im_ / n);
}

std::string SurdComplex::to_string() const {
  if (im_.is_zero()) return re_.to_string();
  return "(" + re_.to_string() + ") + (" + im_.to_string() + ")*i";
}

}  // namespace projdyn
