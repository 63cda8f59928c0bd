#include "petal/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "petal/errors.hpp"

namespace petal {

namespace {

cplx newton_polish(const FamilyMember& m, cplx z, double tol, int max_iter) {
  for (int i = 0; i < max_iter; ++i) {
    cplx g = eval(m, z) - z;
    if (std::abs(g) < tol) return z;
    cplx dg = deriv(m, z) - 1.0;
    if (std::abs(dg) < 1e-16) return z;  // coalescing pair: keep contour seed
    cplx step = g / dg;
    z -= step;
    if (std::abs(step) < 1e-16) return z;
  }
  return z;
}

bool principal_before(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

FixedPair find_pair(const FamilyMember& m, const Circle& disk, const PairOptions& opts) {
  CFunc g = [&](cplx z) { return eval(m, z) - z; };
  CFunc dg = [&](cplx z) { return deriv(m, z) - 1.0; };
  int count = count_zeros(g, dg, disk, opts.contour);
  require(count == 2, errc::wrong_zero_count,
          "disk contains " + std::to_string(count) + " fixed points, expected 2");

  cplx s1 = fixed_point_power_sum(m, disk, 1, opts.contour);
  cplx s2 = fixed_point_power_sum(m, disk, 2, opts.contour);
  // roots of z^2 - e1 z + e2 from Newton's identities
  cplx e2 = (s1 * s1 - s2) / 2.0;
  cplx half = s1 / 2.0;
  cplx d = std::sqrt(half * half - e2);
  cplx r1 = half + d, r2 = half - d;

  r1 = newton_polish(m, r1, opts.polish_tol, opts.polish_max_iter);
  r2 = newton_polish(m, r2, opts.polish_tol, opts.polish_max_iter);

  if (opts.require_distinct) {
    require(std::abs(r1 - r2) >= 1e-12, errc::coalesced_pair,
            "fixed points coincide within 1e-12");
  }

  bool r1_first;
  if (m.id.kind == FamilyKind::NormalizedParabolic) {
    r1_first = std::abs(r1) <= std::abs(r2);  // z1 = 0 branch
  } else {
    r1_first = principal_before(r1, r2);
  }
  FixedPair p;
  p.z1 = r1_first ? r1 : r2;
  p.z2 = r1_first ? r2 : r1;
  p.mu1 = deriv(m, p.z1);
  p.mu2 = deriv(m, p.z2);
  p.disk = disk;
  return p;
}

cplx multiplier_at(const FamilyMember& m, cplx z, double fp_tol) {
  require(std::abs(eval(m, z) - z) <= fp_tol, errc::not_a_fixed_point,
          "point is not fixed within tolerance");
  return deriv(m, z);
}

LambdaCoordinate lambda_coordinate(const FamilyMember& m, const FixedPair& pair, int n,
                                   double theta1, double theta2) {
  (void)m;
  require(n >= 1, errc::usage, "cover degree n must be >= 1");
  require(theta2 > theta1, errc::usage, "sector must have theta2 > theta1");
  require(double(n) * (theta2 - theta1) < 1.0, errc::usage,
          "sector too wide: n*(theta2-theta1) must be < 1");
  cplx mu1 = pair.mu1;
  require(std::abs(mu1 - 1.0) > 1e-14, errc::parabolic_input,
          "multiplier is 1: lambda coordinate undefined at the parabolic base");

  cplx w = (mu1 - 1.0) / 2.0;  // = lambda^n
  double r = std::pow(std::abs(w), 1.0 / double(n));
  double base_arg = std::arg(w);
  double lo = 2.0 * kPi * theta1, hi = 2.0 * kPi * theta2;
  for (int k = 0; k < n; ++k) {
    double ang = (base_arg + 2.0 * kPi * double(k)) / double(n);
    for (int wrap = -2; wrap <= 2; ++wrap) {
      double cand = ang + 2.0 * kPi * double(wrap);
      if (cand > lo && cand < hi) {
        LambdaCoordinate out;
        out.lambda = std::polar(r, cand);
        out.n = n;
        out.branch = k;
        return out;
      }
    }
  }
  fail(errc::sector_violation, "no n-th root branch lies in the configured sector");
}

AffineMap normalize_to_parabolic_form(const FamilyMember& m, const FixedPair& pair) {
  cplx c2 = deriv_k(m, pair.z1, 2) / 2.0;
  require(std::abs(c2) >= 1e-12, errc::degenerate_quadratic_term,
          "second Taylor coefficient vanishes at z1");
  AffineMap map;
  map.alpha = c2;
  map.beta = -c2 * pair.z1;
  return map;
}

bool pair_swaps_on_loop(const FamilyId& id, cplx loop_center, double loop_radius,
                        const Circle& disk, int steps) {
  require(steps >= 8, errc::usage, "loop needs at least 8 steps");
  PairOptions opts;
  auto pair_at = [&](cplx a) {
    FamilyMember m{id, a};
    return find_pair(m, disk, opts);
  };
  FixedPair start = pair_at(loop_center + loop_radius);
  cplx tracked = start.z1;
  for (int k = 1; k <= steps; ++k) {
    double th = 2.0 * kPi * double(k) / double(steps);
    FixedPair p = pair_at(loop_center + loop_radius * std::polar(1.0, th));
    // nearest-point continuation; the loop step must stay well below the pair gap
    tracked = (std::abs(p.z1 - tracked) <= std::abs(p.z2 - tracked)) ? p.z1 : p.z2;
  }
  return std::abs(tracked - start.z2) < std::abs(tracked - start.z1);
}

void require_single_cover(const FamilyId& id, cplx loop_center, double loop_radius,
                          const Circle& disk, int steps) {
  require(!pair_swaps_on_loop(id, loop_center, loop_radius, disk, steps), errc::case_two_cover,
          "fixed points swap around the loop: pair is only defined on a degree-2 cover");
}

}  // namespace petal
