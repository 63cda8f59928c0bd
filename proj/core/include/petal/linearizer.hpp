#pragma once
#include <vector>

#include "petal/family.hpp"
#include "petal/types.hpp"

namespace petal {

// Koenigs linearizer kappa at a non-indifferent fixed point, normalized
// kappa'(fp) = 1, so kappa(f(z)) = mu*kappa(z). Evaluation iterates the orbit
// (forward if attracting, backward via the family's inverse branch if
// repelling) into a small disk where a truncated power series finishes the
// job. The series order is high enough that truncation error sits at the
// double-precision floor once |u| < 0.3 * (estimated convergence radius),
// which matters close to the parabolic limit where the radius collapses
// like |mu - 1| and low-order truncations would poison the log-charts.
struct LinearizerChart {
  FamilyMember m;
  cplx fixed_point{0.0};
  cplx multiplier{0.0};
  bool attracting{true};
  double domain_radius{0.0};      // series entry radius
  cplx branch_anchor{0.0};        // reference point for log-branch pinning
  std::vector<cplx> coeffs;       // kappa(fp+u) = sum_k coeffs[k] u^k, coeffs[1] = 1
  long max_iter{1000000};
};

struct KoenigsEval {
  cplx log_kappa{0.0};  // one branch of Log kappa (sheet fixed per-call, not globally)
  cplx kappa{0.0};
  long steps{0};
};

LinearizerChart make_linearizer(const FamilyMember& m, cplx fp, int order = 24,
                                double domain_radius = 0.0);

KoenigsEval koenigs_eval(const LinearizerChart& L, cplx z);

// Convenience form: kappa(z) with kappa'(fp) = 1.
cplx koenigs(const FamilyMember& m, cplx fp, cplx mu, cplx z);

// Preimage of w under f_m closest to ref (branch selection by proximity).
cplx inverse_toward(const FamilyMember& m, cplx ref, cplx w);

// Truncated series kappa(fp + u) and its local inverse (Newton, seeded at v).
cplx series_value(const LinearizerChart& L, cplx u);
cplx series_inverse(const LinearizerChart& L, cplx v);

}  // namespace petal
