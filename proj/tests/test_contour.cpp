#include "doctest.h"

#include <petal/contour.hpp>
#include <petal/family.hpp>
#include <petal/param_ray.hpp>

#include <algorithm>
#include <random>
#include <vector>

using namespace petal;

namespace {

// Monic polynomial from its roots, with the analytic derivative.
struct Poly {
  std::vector<cplx> roots;
  cplx operator()(cplx z) const {
    cplx p = 1.0;
    for (cplx r : roots) p *= z - r;
    return p;
  }
  cplx deriv(cplx z) const {
    cplx s = 0.0;
    for (size_t i = 0; i < roots.size(); ++i) {
      cplx term = 1.0;
      for (size_t j = 0; j < roots.size(); ++j)
        if (j != i) term *= z - roots[j];
      s += term;
    }
    return s;
  }
};

cplx rand_disk(std::mt19937& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    cplx z{u(rng), u(rng)};
    if (std::abs(z) <= radius) return z;
  }
}

}  // namespace

TEST_SUITE("contour") {

TEST_CASE("circle integrals of elementary residues") {
  CHECK(std::abs(integrate_circle([](cplx w) { return 1.0 / w; }, {cplx(0.0), 1.0, 64}) - 1.0) < 1e-14);
  CHECK(std::abs(integrate_circle([](cplx) { return cplx(1.0); }, {cplx(0.0), 1.0, 64})) < 1e-14);
  CHECK(std::abs(integrate_circle([](cplx w) { return 1.0 / (w - 0.3); }, {cplx(0.0), 1.0, 128}) - 1.0) < 1e-12);
}

TEST_CASE("non-finite integrand is rejected") {
  CHECK_THROWS_WITH_AS((void)integrate_circle([](cplx w) { return 1.0 / (w - 1.0); }, {cplx(0.0), 1.0, 64}),
                       doctest::Contains("non-finite"), Error);
}

TEST_CASE("zero counting") {
  Circle C{cplx(0.0), 1.0, 256};
  CHECK(count_zeros([](cplx z) { return z * z; }, [](cplx z) { return 2.0 * z; }, C) == 2);
  CHECK(count_zeros([](cplx z) { return z - 2.0; }, [](cplx) { return cplx(1.0); }, C) == 0);
  CHECK(count_zeros([](cplx z) { return (z - 0.3) * (z - cplx(0.0, 0.7)); }, {}, C) == 2);
}

TEST_CASE("zero counting error paths") {
  Circle C{cplx(0.0), 1.0, 256};
  // zero sitting exactly on a node
  CHECK_THROWS_AS((void)count_zeros([](cplx z) { return z - 1.0; }, [](cplx) { return cplx(1.0); }, C), Error);
  try {
    (void)count_zeros([](cplx z) { return z - 1.0; }, [](cplx) { return cplx(1.0); }, C);
  } catch (const Error& e) {
    CHECK(e.code() == errc::zero_on_contour);
  }
  // zero a hair outside the contour: winding integral cannot settle on an integer
  try {
    (void)count_zeros([](cplx z) { return z - cplx(0.0, 1.000001); }, [](cplx) { return cplx(1.0); }, C);
    CHECK_MESSAGE(false, "expected NonIntegerWinding");
  } catch (const Error& e) {
    CHECK(e.code() == errc::non_integer_winding);
  }
}

TEST_CASE("locating a single zero") {
  Circle C{cplx(0.0), 1.0, 256};
  CHECK(std::abs(locate_single_zero([](cplx z) { return z - cplx(0.3, 0.1); }, [](cplx) { return cplx(1.0); }, C) -
                 cplx(0.3, 0.1)) < 1e-10);
  CHECK(std::abs(locate_single_zero([](cplx z) { return std::exp(z) - 1.0; }, [](cplx z) { return std::exp(z); }, C)) < 1e-10);
  // non-principal fixed point of the normalized family sits at -2*lambda
  FamilyMember m = member(FamilyKind::NormalizedParabolic, cplx(0.0, 0.05));
  Circle D{cplx(0.0, -0.1), 0.05, 256};
  cplx z = locate_single_zero([&](cplx w) { return eval(m, w) - w; }, [&](cplx w) { return deriv(m, w) - 1.0; }, D);
  CHECK(std::abs(z - cplx(0.0, -0.1)) < 1e-8);
}

TEST_CASE("locate refuses a wrong count") {
  Circle C{cplx(0.0), 1.0, 256};
  try {
    (void)locate_single_zero([](cplx z) { return z * z - 0.25; }, [](cplx z) { return 2.0 * z; }, C);
    CHECK_MESSAGE(false, "expected WrongZeroCount");
  } catch (const Error& e) {
    CHECK(e.code() == errc::wrong_zero_count);
  }
}

TEST_CASE("multiplicity-weighted fixed point sums") {
  CHECK(std::abs(sum_fixed_points(member(FamilyKind::NormalizedParabolic, 0.1), {cplx(0.0), 0.5, 256}) - cplx(-0.2)) < 1e-10);
  // Vieta for z^2 - z + c
  CHECK(std::abs(sum_fixed_points(member(FamilyKind::QuadraticC, 0.2), {cplx(0.5), 0.6, 256}) - cplx(1.0)) < 1e-10);
  // double fixed point at the parabolic base still sums with multiplicity
  CHECK(std::abs(sum_fixed_points(member(FamilyKind::NormalizedParabolic, 0.0), {cplx(0.0), 0.5, 256})) < 1e-10);
}

TEST_CASE("rouche comparisons") {
  Circle C{cplx(0.0), 1.0, 64};
  CHECK(rouche_check([](cplx z) { return z + 0.01; }, [](cplx z) { return z; }, C));
  CHECK_FALSE(rouche_check([](cplx z) { return z + 2.0; }, [](cplx z) { return z; }, C));
  CHECK_FALSE(rouche_check([](cplx z) { return 1.0 / (z - 1.0); }, [](cplx z) { return z; }, C));
}

TEST_CASE("rouche certifies an accepted continuation step") {
  // Defect functions of two consecutive accepted potentials on the real
  // quadratic parameter ray, compared on the solver's own trust circle.
  FamilyId fam{FamilyKind::QuadraticC};
  Combinatorics comb = external_angle(0, 1);
  ParameterRay pr = trace_parameter_ray(fam, comb, 1.0, 0.9, 0.05);
  REQUIRE(pr.samples.size() >= 2);
  ParamSample s1 = pr.samples[0], s2 = pr.samples[1];
  double trust = 0.1 * std::abs(s1.a - cplx(0.25)) + 1e-3;
  Circle C{s1.a, trust, 64};
  auto xi1 = [&](cplx a) { return defect(fam, comb, a, s2.t); };
  auto xi2 = [&](cplx a) { return defect(fam, comb, a, s1.t); };
  CHECK(rouche_check(xi1, xi2, C));
}

TEST_CASE("counts match analytic roots for random polynomials") {
  std::mt19937 rng(977121);
  Circle C{cplx(0.0), 1.0, 256};
  int done = 0;
  while (done < 20) {
    int deg = 2 + int(rng() % 2);
    Poly p;
    for (int i = 0; i < deg; ++i) p.roots.push_back(rand_disk(rng, 2.0));
    bool clear = std::all_of(p.roots.begin(), p.roots.end(),
                             [&](cplx r) { return std::abs(std::abs(r - C.center) - C.radius) >= 0.1 * C.radius; });
    if (!clear) continue;
    int expect = int(std::count_if(p.roots.begin(), p.roots.end(),
                                   [&](cplx r) { return std::abs(r - C.center) < C.radius; }));
    CHECK(count_zeros([&](cplx z) { return p(z); }, [&](cplx z) { return p.deriv(z); }, C) == expect);
    ++done;
  }
}

TEST_CASE("location matches the analytic root for random polynomials") {
  std::mt19937 rng(550211);
  Circle C{cplx(0.0), 1.0, 256};
  int done = 0;
  while (done < 20) {
    int deg = 2 + int(rng() % 2);
    Poly p;
    for (int i = 0; i < deg; ++i) p.roots.push_back(rand_disk(rng, 2.0));
    int inside = -1;
    int n_in = 0;
    for (int i = 0; i < deg; ++i)
      if (std::abs(p.roots[i] - C.center) < C.radius) {
        inside = i;
        ++n_in;
      }
    if (n_in != 1) continue;
    bool clear = std::all_of(p.roots.begin(), p.roots.end(),
                             [&](cplx r) { return std::abs(std::abs(r - C.center) - C.radius) >= 0.2 * C.radius; });
    if (!clear) continue;
    cplx z = locate_single_zero([&](cplx w) { return p(w); }, [&](cplx w) { return p.deriv(w); }, C);
    CHECK(std::abs(z - p.roots[inside]) < 1e-8);
    ++done;
  }
}

TEST_CASE("node doubling leaves converged integrals unchanged") {
  auto g = [](cplx w) { return 1.0 / (w - 0.3) + w * w; };
  cplx v1 = integrate_circle(g, {cplx(0.0), 1.0, 256});
  cplx v2 = integrate_circle(g, {cplx(0.0), 1.0, 512});
  CHECK(std::abs(v1 - v2) < 1e-10);
  Circle C1{cplx(0.5), 0.6, 256}, C2{cplx(0.5), 0.6, 512};
  FamilyMember m = member(FamilyKind::QuadraticC, cplx(0.2, 0.05));
  CHECK(std::abs(sum_fixed_points(m, C1) - sum_fixed_points(m, C2)) < 1e-10);
  cplx r1 = locate_single_zero([](cplx z) { return std::sin(z) - 0.3; }, {}, C1);
  cplx r2 = locate_single_zero([](cplx z) { return std::sin(z) - 0.3; }, {}, C2);
  CHECK(std::abs(r1 - r2) < 1e-10);
}

}  // TEST_SUITE
