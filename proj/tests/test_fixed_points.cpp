#include "doctest.h"

#include <petal/contour.hpp>
#include <petal/fixed_points.hpp>

#include <random>
#include <vector>

using namespace petal;

namespace {
const Circle kUnitHalf{cplx(0.0), 0.5, 256};

cplx sector_sample(std::mt19937& rng, double r_lo, double r_hi) {
  // arg in (-pi/2, pi/2), radius in [r_lo, r_hi]
  std::uniform_real_distribution<double> ang(-1.5, 1.5), rad(r_lo, r_hi);
  return std::polar(rad(rng), ang(rng));
}
}  // namespace

TEST_SUITE("fixed_points") {

TEST_CASE("pair location in the three families") {
  FixedPair p = find_pair(member(FamilyKind::NormalizedParabolic, 0.05), kUnitHalf);
  CHECK(std::abs(p.z1) < 1e-13);
  CHECK(std::abs(p.z2 - cplx(-0.1)) < 1e-12);
  CHECK(std::abs(p.mu1 - 1.1) < 1e-12);
  CHECK(std::abs(p.mu2 - 0.9) < 1e-12);

  p = find_pair(member(FamilyKind::QuadraticC, 0.24), {cplx(0.5), 0.5, 256});
  CHECK(std::abs(p.z1 - 0.6) < 1e-12);
  CHECK(std::abs(p.z2 - 0.4) < 1e-12);

  p = find_pair(member(FamilyKind::NormalizedParabolic, cplx(0.0, 0.05)), kUnitHalf);
  CHECK(std::abs(p.z1) < 1e-13);
  CHECK(std::abs(p.z2 - cplx(0.0, -0.1)) < 1e-12);
}

TEST_CASE("pair residuals and contour consistency") {
  FamilyMember m = member(FamilyKind::QuadraticC, cplx(0.2, 0.05));
  Circle disk{cplx(0.5), 0.5, 256};
  FixedPair p = find_pair(m, disk);
  CHECK(std::abs(eval(m, p.z1) - p.z1) < 1e-10);
  CHECK(std::abs(eval(m, p.z2) - p.z2) < 1e-10);
  CHECK(std::abs(p.z1 + p.z2 - sum_fixed_points(m, disk)) < 1e-8);
}

TEST_CASE("pair error paths") {
  // disk around only one fixed point
  try {
    (void)find_pair(member(FamilyKind::QuadraticC, 0.24), {cplx(0.6), 0.05, 256});
    CHECK_MESSAGE(false, "expected WrongZeroCount");
  } catch (const Error& e) {
    CHECK(e.code() == errc::wrong_zero_count);
  }
  // parabolic base: double point, distinct pair unavailable
  try {
    (void)find_pair(member(FamilyKind::NormalizedParabolic, 0.0), kUnitHalf, {.require_distinct = true});
    CHECK_MESSAGE(false, "expected CoalescedPair");
  } catch (const Error& e) {
    CHECK(e.code() == errc::coalesced_pair);
  }
}

TEST_CASE("multiplier at a fixed point") {
  CHECK(std::abs(multiplier_at(member(FamilyKind::NormalizedParabolic, 0.05), 0.0) - 1.1) < 1e-14);
  CHECK(std::abs(multiplier_at(member(FamilyKind::NormalizedParabolic, 0.05), -0.1) - 0.9) < 1e-14);
  CHECK(std::abs(multiplier_at(member(FamilyKind::QuadraticC, 0.25), 0.5) - 1.0) < 1e-14);
  try {
    (void)multiplier_at(member(FamilyKind::QuadraticC, 0.25), 0.3);
    CHECK_MESSAGE(false, "expected NotAFixedPoint");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_a_fixed_point);
  }
}

TEST_CASE("lambda coordinate inverts the multiplier map") {
  FixedPair p;
  p.mu1 = 1.1;
  LambdaCoordinate lc = lambda_coordinate(member(FamilyKind::NormalizedParabolic, 0.05), p, 1, -0.25, 0.25);
  CHECK(std::abs(lc.lambda - 0.05) < 1e-14);

  p.mu1 = cplx(1.0, 0.2);
  lc = lambda_coordinate(member(FamilyKind::NormalizedParabolic, cplx(0.0, 0.1)), p, 1, 0.0, 0.5);
  CHECK(std::abs(lc.lambda - cplx(0.0, 0.1)) < 1e-14);

  // degree-2 cover: principal square root of 0.01i
  p.mu1 = cplx(1.0, 0.02);
  lc = lambda_coordinate(member(FamilyKind::NormalizedParabolic, 0.0), p, 2, 0.0, 0.25);
  CHECK(std::abs(lc.lambda - std::sqrt(cplx(0.0, 0.01))) < 1e-14);
  CHECK(std::abs(2.0 * lc.lambda * lc.lambda + 1.0 - p.mu1) < 1e-14);
}

TEST_CASE("lambda coordinate error paths") {
  FixedPair p;
  p.mu1 = cplx(1.0, 0.02);
  // only branch of sqrt(0.01i) in the lower sector is at arg 9pi/8: not in (0, 1/4) turns mirrored
  try {
    (void)lambda_coordinate(member(FamilyKind::NormalizedParabolic, 0.0), p, 2, 0.3, 0.45);
    CHECK_MESSAGE(false, "expected SectorViolation");
  } catch (const Error& e) {
    CHECK(e.code() == errc::sector_violation);
  }
  p.mu1 = 1.0;
  try {
    (void)lambda_coordinate(member(FamilyKind::NormalizedParabolic, 0.0), p, 1, -0.25, 0.25);
    CHECK_MESSAGE(false, "expected ParabolicInput");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parabolic_input);
  }
}

TEST_CASE("normalization to parabolic form") {
  FamilyMember mq = member(FamilyKind::QuadraticC, 0.25);
  AffineMap aq = normalize_to_parabolic_form(mq, find_pair(mq, {cplx(0.5), 0.5, 256}));
  CHECK(std::abs(aq.alpha - 1.0) < 1e-12);
  CHECK(std::abs(aq.beta - cplx(-0.5)) < 1e-12);

  FamilyMember mn = member(FamilyKind::NormalizedParabolic, 0.05);
  AffineMap an = normalize_to_parabolic_form(mn, find_pair(mn, kUnitHalf));
  CHECK(std::abs(an.alpha - 1.0) < 1e-12);
  CHECK(std::abs(an.beta) < 1e-12);

  FamilyMember me = member(FamilyKind::ExponentialLambda, std::exp(-1.0));
  FixedPair pe;
  pe.z1 = 1.0;
  pe.mu1 = 1.0;
  AffineMap ae = normalize_to_parabolic_form(me, pe);
  CHECK(std::abs(ae.alpha - 0.5) < 1e-12);
  CHECK(std::abs(ae.beta - cplx(-0.5)) < 1e-12);
}

TEST_CASE("normalization conjugates to mu w + w^2 up to cubic order") {
  struct Case { FamilyKind kind; cplx a; Circle disk; } cases[] = {
      {FamilyKind::QuadraticC, cplx(0.22, 0.02), {cplx(0.5), 0.5, 256}},
      {FamilyKind::ExponentialLambda, cplx(0.35, 0.02), {cplx(1.0), 0.9, 256}},
  };
  for (const auto& c : cases) {
    FamilyMember m = member(c.kind, c.a);
    FixedPair p = find_pair(m, c.disk);
    AffineMap map = normalize_to_parabolic_form(m, p);
    cplx mu = p.mu1;
    auto resid = [&](double s) {
      double worst = 0.0;
      for (int k = 0; k < 8; ++k) {
        cplx w = std::polar(s, 2.0 * kPi * k / 8.0);
        cplx img = map(eval(m, map.inverse(w)));
        worst = std::max(worst, std::abs(img - (mu * w + w * w)));
      }
      return worst;
    };
    double r2 = resid(1e-2), r3 = resid(1e-3);
    // cubic remainder: shrinking |w| tenfold shrinks the residual ~1000x
    CHECK(r3 < 3e-3 * r2 + 1e-14);
  }
}

TEST_CASE("degenerate quadratic term is rejected") {
  // no catalog member degenerates at a genuine fixed point; exercise the
  // guard where lambda e^z has f'' underflowed to zero
  FamilyMember me = member(FamilyKind::ExponentialLambda, 0.3);
  FixedPair p;
  p.z1 = -800.0;
  try {
    (void)normalize_to_parabolic_form(me, p);
    CHECK_MESSAGE(false, "expected DegenerateQuadraticTerm");
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_quadratic_term);
  }
}

TEST_CASE("normalized family pair across the sector") {
  std::mt19937 rng(404202);
  for (int i = 0; i < 12; ++i) {
    cplx lam = sector_sample(rng, 0.02, 0.12);
    FixedPair p = find_pair(member(FamilyKind::NormalizedParabolic, lam), kUnitHalf);
    CHECK(std::abs(p.z1) < 1e-12);
    CHECK(std::abs(p.z2 + 2.0 * lam) < 1e-10);
  }
}

TEST_CASE("lambda coordinate left-inverse on random sector samples") {
  std::mt19937 rng(71529);
  for (int i = 0; i < 50; ++i) {
    cplx lam = sector_sample(rng, 0.01, 0.2);
    FamilyMember m = member(FamilyKind::NormalizedParabolic, lam);
    FixedPair p = find_pair(m, kUnitHalf);
    LambdaCoordinate lc = lambda_coordinate(m, p, 1, -0.25, 0.25);
    CHECK(std::abs(1.0 + 2.0 * lc.lambda - p.mu1) < 1e-12);
    CHECK(std::abs(lc.lambda - lam) < 1e-10);
  }
}

TEST_CASE("multiplier map is injective on the sector grid") {
  // 20x20 grid in a sector of width < 1 turn; discrete injectivity proxy
  std::vector<cplx> lams, mus;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      double r = 0.02 + 0.1 * i / 19.0;
      double th = -1.4 + 2.8 * j / 19.0;
      cplx lam = std::polar(r, th);
      lams.push_back(lam);
      mus.push_back(1.0 + 2.0 * lam);
    }
  }
  for (size_t i = 0; i < mus.size(); ++i)
    for (size_t j = i + 1; j < mus.size(); ++j)
      if (std::abs(mus[i] - mus[j]) < 1e-9) CHECK(std::abs(lams[i] - lams[j]) < 1e-9);
}

TEST_CASE("pair continuation around parameter loops") {
  // quadratic: the pair lives on a degree-2 cover around c = 1/4
  CHECK(pair_swaps_on_loop({FamilyKind::QuadraticC}, cplx(0.25), 0.05, {cplx(0.5), 0.5, 256}));
  try {
    require_single_cover({FamilyKind::QuadraticC}, cplx(0.25), 0.05, {cplx(0.5), 0.5, 256});
    CHECK_MESSAGE(false, "expected CaseTwoCover");
  } catch (const Error& e) {
    CHECK(e.code() == errc::case_two_cover);
  }
  // normalized: 0 and -2 lambda are individually holomorphic
  CHECK_FALSE(pair_swaps_on_loop({FamilyKind::NormalizedParabolic}, cplx(0.0), 0.05, kUnitHalf));
  require_single_cover({FamilyKind::NormalizedParabolic}, cplx(0.0), 0.05, kUnitHalf);
}

}  // TEST_SUITE
