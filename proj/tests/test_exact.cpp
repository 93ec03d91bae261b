#include <doctest.h>

#include "projdyn/exact.hpp"

using namespace projdyn;

TEST_CASE("BigInt arithmetic") {
  BigInt a("123456789012345678901234567890");
  BigInt b("-98765432109876543210");
  CHECK((a + b - a) == b);
  CHECK((a * b).to_string() == "-12193263113702179522496570642237463801111263526900");
  BigInt q = a / b, r = a % b;
  CHECK(q * b + r == a);
  CHECK(BigInt::gcd(BigInt(48), BigInt(-36)) == BigInt(12));
  long long out;
  CHECK(BigInt(-42).fits_int64(out));
  CHECK(out == -42);
  CHECK(!a.fits_int64(out));
}

TEST_CASE("BigRational reduces and orders") {
  BigRational x = BigRational::of(6, -4);
  CHECK(x.to_string() == "-3/2");
  CHECK(BigRational::of(1, 3) + BigRational::of(1, 6) == BigRational::of(1, 2));
  CHECK(BigRational::of(2, 7) < BigRational::of(1, 3));
  CHECK((BigRational::of(3, 5) / BigRational::of(9, 10)) == BigRational::of(2, 3));
}

TEST_CASE("SurdReal field operations in Q(sqrt 2)") {
  SurdReal r(BigRational(1), BigRational(1), 2);  // 1 + sqrt 2
  SurdReal q = r * r;
  CHECK(q == SurdReal(BigRational(3), BigRational(2), 2));
  SurdReal inv = SurdReal(1) / r;  // sqrt 2 - 1
  CHECK(inv == SurdReal(BigRational(-1), BigRational(1), 2));
  CHECK((r * inv) == SurdReal(1));
  // sign decisions on mixed-sign combinations
  CHECK(SurdReal(BigRational(-1), BigRational(1), 2).sign() == 1);   // sqrt 2 - 1 > 0
  CHECK(SurdReal(BigRational(3), BigRational(-2), 2).sign() == 1);   // 3 - 2 sqrt 2 > 0
  CHECK(SurdReal(BigRational(1), BigRational(-1), 2).sign() == -1);  // 1 - sqrt 2 < 0
  // square factors of the base get absorbed
  SurdReal s8 = SurdReal::sqrt_of(8);
  CHECK(s8 == SurdReal(BigRational(0), BigRational(2), 2));
  CHECK(SurdReal::sqrt_of(4) == SurdReal(2));
}

TEST_CASE("SurdReal rejects mixed bases") {
  SurdReal a = SurdReal::sqrt_of(2), b = SurdReal::sqrt_of(3);
  CHECK_THROWS_AS(a + b, MixedSurdError);
  CHECK_THROWS_AS(a * b, MixedSurdError);
  // rational values mix with anything
  CHECK((SurdReal(5) * a) == SurdReal(BigRational(0), BigRational(5), 2));
}

TEST_CASE("SurdComplex division and conjugation") {
  SurdComplex z(SurdReal(1), SurdReal::sqrt_of(2));  // 1 + i sqrt 2
  SurdComplex w = z * z.conj();
  CHECK(w == SurdComplex(SurdReal(3)));
  SurdComplex inv = SurdComplex(1) / z;
  CHECK(z * inv == SurdComplex(1));
  CHECK((z / z) == SurdComplex(1));
}

TEST_CASE("double conversion stays close") {
  SurdReal r(BigRational(3), BigRational(-2), 2);
  CHECK(r.to_double() == doctest::Approx(3 - 2 * std::sqrt(2.0)).epsilon(1e-14));
}
