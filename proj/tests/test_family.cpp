#include "doctest.h"

#include <petal/family.hpp>

#include <random>

using namespace petal;

namespace {
cplx rand_pt(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}
}  // namespace

TEST_SUITE("family") {

TEST_CASE("eval matches the formulas") {
  CHECK(eval(member(FamilyKind::NormalizedParabolic, 0.0), 0.5) == cplx(0.75, 0.0));
  CHECK(eval(member(FamilyKind::QuadraticC, 0.25), 0.5) == cplx(0.5, 0.0));
  CHECK(std::abs(eval(member(FamilyKind::ExponentialLambda, std::exp(-1.0)), 1.0) - 1.0) < 1e-15);
}

TEST_CASE("deriv matches the formulas") {
  CHECK(std::abs(deriv(member(FamilyKind::NormalizedParabolic, 0.05), 0.0) - 1.1) < 1e-15);
  CHECK(std::abs(deriv(member(FamilyKind::QuadraticC, 0.25), 0.5) - 1.0) < 1e-15);
  CHECK(std::abs(deriv(member(FamilyKind::ExponentialLambda, std::exp(-1.0)), 1.0) - 1.0) < 1e-15);
}

TEST_CASE("singular value") {
  CHECK(singular_value(member(FamilyKind::QuadraticC, 0.25)) == cplx(0.25, 0.0));
  CHECK(singular_value(member(FamilyKind::ExponentialLambda, 0.2)) == cplx(0.0, 0.0));
  CHECK(singular_value(member(FamilyKind::NormalizedParabolic, 0.0)) == cplx(-0.25, 0.0));
}

TEST_CASE("exponential overflow guard") {
  CHECK_THROWS_AS((void)eval(member(FamilyKind::ExponentialLambda, 0.3), cplx(800.0, 0.0)), Error);
  try {
    (void)eval(member(FamilyKind::ExponentialLambda, 0.3), cplx(800.0, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == errc::overflow_guard);
  }
}

TEST_CASE("deriv agrees with finite differences") {
  std::mt19937 rng(20260815);
  const double h = 1e-6;
  FamilyMember fams[] = {
      member(FamilyKind::NormalizedParabolic, cplx(0.03, 0.02)),
      member(FamilyKind::QuadraticC, cplx(0.2, 0.1)),
      member(FamilyKind::ExponentialLambda, cplx(0.3, 0.05)),
  };
  for (const auto& m : fams) {
    for (int i = 0; i < 10; ++i) {
      cplx z = rand_pt(rng, 1.0);
      cplx fd = (eval(m, z + h) - eval(m, z - h)) / (2.0 * h);
      CHECK(std::abs(fd - deriv(m, z)) < 1e-8);
    }
  }
}

TEST_CASE("singular value is holomorphic in the parameter") {
  // Cauchy-Riemann via finite differences: d/d(a_im) = i d/d(a_re).
  const double h = 1e-6;
  struct Case { FamilyKind kind; cplx a; } cases[] = {
      {FamilyKind::NormalizedParabolic, cplx(0.05, 0.07)},
      {FamilyKind::QuadraticC, cplx(0.3, -0.1)},
      {FamilyKind::ExponentialLambda, cplx(0.4, 0.1)},
  };
  for (const auto& c : cases) {
    cplx dre = (singular_value(member(c.kind, c.a + h)) - singular_value(member(c.kind, c.a - h))) / (2.0 * h);
    cplx dim = (singular_value(member(c.kind, c.a + cplx(0.0, h))) - singular_value(member(c.kind, c.a - cplx(0.0, h)))) / (2.0 * h);
    CHECK(std::abs(dim - kI * dre) < 1e-8);
  }
}

TEST_CASE("parabolic base has an exact fixed point with multiplier 1") {
  for (auto kind : {FamilyKind::NormalizedParabolic, FamilyKind::QuadraticC, FamilyKind::ExponentialLambda}) {
    FamilyId id{kind, 1};
    FamilyMember m{id, base_param(id)};
    cplx z0 = base_fixed_point(id);
    CHECK(std::abs(eval(m, z0) - z0) < 1e-15);
    CHECK(std::abs(deriv(m, z0) - 1.0) < 1e-15);
  }
}

TEST_CASE("family names round-trip") {
  for (auto kind : {FamilyKind::NormalizedParabolic, FamilyKind::QuadraticC, FamilyKind::ExponentialLambda}) {
    FamilyId id{kind, 1};
    CHECK(family_from_name(family_name(id)).kind == kind);
  }
  CHECK_THROWS_AS((void)family_from_name("cubic"), Error);
}

}  // TEST_SUITE
