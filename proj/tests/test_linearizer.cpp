#include "doctest.h"

#include <petal/linearizer.hpp>

using namespace petal;

TEST_SUITE("linearizer") {

TEST_CASE("koenigs is normalized to unit derivative at the fixed point") {
  // attracting: f = 0.9 z + z^2
  FamilyMember m = member(FamilyKind::NormalizedParabolic, -0.05);
  cplx z = 1e-6;
  CHECK(std::abs(koenigs(m, 0.0, 0.9, z) / z - 1.0) < 1e-5);
  // repelling: f = 1.1 z + z^2, evaluated through the inverse branch
  FamilyMember r = member(FamilyKind::NormalizedParabolic, 0.05);
  CHECK(std::abs(koenigs(r, 0.0, 1.1, z) / z - 1.0) < 1e-5);
}

TEST_CASE("two truncation depths agree") {
  FamilyMember m = member(FamilyKind::NormalizedParabolic, -0.05);
  LinearizerChart a = make_linearizer(m, 0.0, 16);
  LinearizerChart b = make_linearizer(m, 0.0, 40);
  for (cplx z : {cplx(0.01), cplx(0.02, 0.01), cplx(-0.005, 0.004)}) {
    CHECK(std::abs(koenigs_eval(a, z).kappa - koenigs_eval(b, z).kappa) < 1e-10);
  }
}

TEST_CASE("schroeder identity") {
  FamilyMember m = member(FamilyKind::NormalizedParabolic, 0.05);
  cplx mu(1.1, 0.0);
  for (cplx z : {cplx(0.01), cplx(0.005, 0.003), cplx(-0.008, 0.002)}) {
    cplx lhs = koenigs(m, 0.0, mu, eval(m, z));
    cplx rhs = mu * koenigs(m, 0.0, mu, z);
    CHECK(std::abs(lhs / rhs - 1.0) < 1e-9);
  }
}

TEST_CASE("schroeder identity on certified domains, both stabilities") {
  struct Case { cplx lam; cplx fp; } cases[] = {
      {cplx(-0.06, 0.02), cplx(0.0)},   // |mu| < 1
      {cplx(0.07, 0.03), cplx(0.0)},    // |mu| > 1
  };
  for (const auto& c : cases) {
    FamilyMember m = member(FamilyKind::NormalizedParabolic, c.lam);
    LinearizerChart L = make_linearizer(m, c.fp);
    cplx mu = L.multiplier;
    for (int j = 0; j < 10; ++j) {
      cplx z = c.fp + std::polar(0.6 * L.domain_radius, 2.0 * kPi * j / 10.0);
      cplx lhs = koenigs_eval(L, eval(m, z)).kappa;
      cplx rhs = mu * koenigs_eval(L, z).kappa;
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("indifferent multipliers are rejected") {
  FamilyMember m = member(FamilyKind::NormalizedParabolic, 0.0);
  try {
    (void)make_linearizer(m, 0.0);
    CHECK_MESSAGE(false, "expected IndifferentMultiplier");
  } catch (const Error& e) {
    CHECK(e.code() == errc::indifferent_multiplier);
  }
}

TEST_CASE("linearizer rejects a non fixed point") {
  FamilyMember m = member(FamilyKind::NormalizedParabolic, 0.05);
  CHECK_THROWS_AS((void)make_linearizer(m, cplx(0.3, 0.1)), Error);
}

TEST_CASE("inverse branch selection tracks the reference point") {
  FamilyMember m = member(FamilyKind::QuadraticC, cplx(0.2, 0.05));
  cplx z(0.3, 0.2);
  cplx w = eval(m, z);
  CHECK(std::abs(inverse_toward(m, z, w) - z) < 1e-12);
  CHECK(std::abs(inverse_toward(m, -z, w) + z) < 1e-12);
  // exponential branches differ by 2 pi i; proximity picks the sheet
  FamilyMember e = member(FamilyKind::ExponentialLambda, 0.3);
  cplx ze(0.4, 0.1);
  cplx we = eval(e, ze);
  CHECK(std::abs(inverse_toward(e, ze, we) - ze) < 1e-12);
  CHECK(std::abs(inverse_toward(e, ze + cplx(0.0, 2.0 * kPi), we) - ze - cplx(0.0, 2.0 * kPi)) < 1e-12);
}

TEST_CASE("series inverse inverts the series") {
  FamilyMember m = member(FamilyKind::NormalizedParabolic, cplx(0.05, 0.02));
  LinearizerChart L = make_linearizer(m, 0.0);
  for (int j = 0; j < 8; ++j) {
    cplx u = std::polar(0.5 * L.domain_radius, 2.0 * kPi * j / 8.0);
    cplx v = series_value(L, u);
    CHECK(std::abs(series_inverse(L, v) - u) < 1e-12);
  }
}

}  // TEST_SUITE
