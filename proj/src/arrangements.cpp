#include "projdyn/arrangements.hpp"

namespace projdyn {

std::vector<SurdReal> tangent_forbidden_set() {
  BigRational zero(0), one(1);
  return {
      SurdReal(zero),
      SurdReal(one),
      alpha0_exact(),
      SurdReal(BigRational(3), BigRational(-2), 2),  // 3 - 2 sqrt 2
      SurdReal(BigRational(2), BigRational(-1), 2),  // 2 - sqrt 2
  };
}

std::pair<SurdComplex, SurdComplex> sphere_point(const BigRational& t) {
  BigRational one(1);
  BigRational den = one + t * t;
  BigRational c = (one - t * t) / den;
  BigRational s = (t + t) / den;
  SurdReal a0 = alpha0_exact();
  SurdReal z1 = a0 * (SurdReal(one) + SurdReal(c));
  SurdReal z2 = a0 * (SurdReal(one) + SurdReal(s));
  return {SurdComplex(z1), SurdComplex(z2)};
}

ProjSubspace<SurdComplex> tangent_line_at(const SurdComplex& z1, const SurdComplex& z2,
                                          double tol) {
  SurdComplex a0(alpha0_exact());
  SurdComplex n1 = (z1 - a0).conj();
  SurdComplex n2 = (z2 - a0).conj();
  // n1 w1 + n2 w2 - (n1 z1 + n2 z2) w3 = 0
  Vec<SurdComplex> coeffs(3);
  coeffs(0) = n1;
  coeffs(1) = n2;
  coeffs(2) = SurdComplex(0) - (n1 * z1 + n2 * z2);
  return ProjSubspace<SurdComplex>::from_hyperplane_coeffs(coeffs, tol);
}

SurdReal tangency_residual(const ProjSubspace<SurdComplex>& line) {
  Vec<SurdComplex> c = line.hyperplane_coeffs();
  SurdComplex a0(alpha0_exact());
  SurdComplex at_center = c(0) * a0 + c(1) * a0 + c(2);
  SurdReal r2 = alpha0_exact() * alpha0_exact();
  return at_center.abs2() - r2 * (c(0).abs2() + c(1).abs2());
}

SurdComplex xi_of_tangent_at(const SurdComplex& z1, const SurdComplex& z2) {
  SurdComplex a0(alpha0_exact());
  SurdComplex num = a0 * z1.conj() + a0 * z2.conj() - SurdComplex(z1.abs2() + z2.abs2());
  SurdComplex den = a0 - z1.conj();
  return num / den;
}

}  // namespace projdyn
