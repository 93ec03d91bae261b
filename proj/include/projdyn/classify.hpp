#pragma once

// Eigenstructure of PSL(3,C) elements and the elliptic/parabolic/loxodromic
// taxonomy with its ten minor classes, single-element Kulkarni limit sets,
// proximality, and a sampling ping-pong verifier.

#include <array>
#include <optional>
#include <random>
#include <string>

#include "projdyn/descriptor.hpp"
#include "projdyn/projective.hpp"

namespace projdyn {

struct NeedHintError : std::runtime_error {
  NeedHintError() : std::runtime_error("rotation rationality undecidable without a hint") {}
};
struct UnsupportedClassError : std::runtime_error {
  UnsupportedClassError() : std::runtime_error("cyclic Kulkarni set not available for this class") {}
};
struct RegionsOverlapError : std::runtime_error {
  RegionsOverlapError() : std::runtime_error("ping-pong regions overlap") {}
};
struct UnsupportedExactCubicError : std::runtime_error {
  UnsupportedExactCubicError()
      : std::runtime_error("characteristic cubic does not split over the surd field") {}
};

struct EigenPair {
  cplx value;
  int algebraic_mult = 1;
  int geometric_mult = 1;
  std::vector<VecX> vectors;  // basis of the eigenspace
};

struct EigenData {
  std::vector<EigenPair> pairs;  // distinct eigenvalues, by descending modulus
  bool diagonalizable = false;

  int total_geometric() const {
    int s = 0;
    for (const auto& p : pairs) s += p.geometric_mult;
    return s;
  }
};

enum class MajorClass { Elliptic, Parabolic, Loxodromic };

enum class MinorClass {
  Regular,
  ComplexReflection,
  Unipotent,
  ElliptoParabolicRational,
  ElliptoParabolicIrrational,
  LoxoParabolic,
  ScrewRational,
  ScrewIrrational,
  ComplexHomothety,
  StronglyLoxodromic,
};

struct ElementClass {
  MajorClass major;
  MinorClass minor;
  bool provisional_rationality = false;  // set when a rational/irrational tag
                                         // came from the numeric probe
};

const char* to_string(MajorClass m);
const char* to_string(MinorClass m);

enum class Rationality { Rational, Irrational, Unknown };

struct RationalityHint {
  Rationality kind = Rationality::Unknown;
  long long p = 0, q = 1;  // the angle p/q when rational
};

// Continued-fraction probe: decides whether a real angle (in turns) looks
// rational with denominator below the bound. A rational double shows a huge
// partial quotient once the true fraction is reached; an irrational keeps
// producing moderate quotients past the denominator bound.
struct AngleProbe {
  bool rational;
  long long p = 0, q = 1;
};
AngleProbe probe_angle(double turns, long long den_bound = 1000000);

// Cubic roots by Cardano with one Newton polish step each, then structural
// multiple-root detection (double/triple fits validated by residuals at
// machine scale) so conjugated Jordan blocks keep their multiplicities.
std::array<cplx, 3> cardano_roots(const cplx& c2, const cplx& c1, const cplx& c0);

EigenData eigen3(const ProjMapX& g, double tol = kDefaultTol);

// Exact backend: only triangular lifts are supported (the roots are the
// diagonal); anything else throws UnsupportedExactCubicError.
EigenData eigen3(const ProjMap<SurdComplex>& g, double tol = kDefaultTol);

ElementClass classify_element(const ProjMapX& g, const RationalityHint& hint = {},
                              double tol = kDefaultTol);

std::optional<ProjPointX> dominant_vector(const ProjMapX& g, double tol = kDefaultTol);

LimitSetDescriptor cyclic_kulkarni(const ProjMapX& g, double tol = kDefaultTol);

// Closed metric ball in the chordal metric on CP^n.
struct RegionBall {
  ProjPointX center;
  double radius;
};

bool verify_ping_pong(const std::vector<ProjMapX>& gens, const std::vector<RegionBall>& regions,
                      int samples, unsigned seed = 12345, double tol = kDefaultTol);

}  // namespace projdyn
