#pragma once
#include <vector>

#include "petal/family.hpp"
#include "petal/fatou.hpp"
#include "petal/types.hpp"

namespace petal {

// Combinatorial tag of a fixed dynamic ray: an external angle (quadratic) or
// an external address (exponential). Fixed rays need an angle fixed under
// doubling (only 0) resp. a constant address.
struct Combinatorics {
  enum class Kind { ExternalAngle, ExternalAddress };
  Kind kind{Kind::ExternalAngle};
  long num{0};
  long den{1};
  std::vector<int> address;
  int entry_bound{10};
};

Combinatorics external_angle(long num, long den);
Combinatorics external_address(std::vector<int> entries, int entry_bound = 10);

struct RaySample {
  double t{0.0};
  cplx z{0.0};
};

// Fixed ray gamma with f(gamma(t)) = gamma(t+1), samples at descending t.
struct RayCurve {
  FamilyMember member;
  Combinatorics comb;
  std::vector<RaySample> samples;
  double invariance_residual{0.0};
};

struct RayOptions {
  double escape_radius = 1e8;
  long escape_cap = 10000;
  double seed_agreement = 1e-9;  // reported samples must be stable under deeper seeding
  double green_min = 40.0;       // quadratic seeds start at Green's value in [green_min, 2 green_min)
  double model_seed_min = 5.0;   // exponential seeds start here in model coordinates
  FatouOptions model;            // Abel chart of the potential model e^x - 1
  RayOptions() { model.tol = 1e-9; }
};

// Green's function G(z) = lim 2^{-n} log|f_c^n(z)| of the quadratic family.
double boettcher_potential(const FamilyMember& m, cplx z, const RayOptions& opts = {});

// Traces the fixed ray over the potential grid t_hi, t_hi-step, ..., >= t_lo.
// Quadratic: Boettcher tail seed at large potential, square-root pullbacks
// with nearest-parent branch selection (G(gamma(t)) = 2^{t-1}, which makes
// gamma(1) = e for c = 0). Exponential: the potential is the Abel coordinate
// of the model e^x - 1; seeds use the conjugacy tail of lambda e^z to the
// model at the far end of the ray, then logarithm pullbacks along the
// address. Seed depth is certified by re-seeding one level deeper.
RayCurve trace_ray(const FamilyMember& m, const Combinatorics& comb, double t_hi, double t_lo,
                   double step, const RayOptions& opts = {});

// max |f(gamma(t)) - gamma(t+1)| over unit-separated sample pairs.
double invariance_residual(const RayCurve& r);

struct Extrapolant {
  cplx value{0.0};
  double uncertainty{0.0};
};

// Limit of a unit-indexed chain x_n (deepest sample last). Fits a geometric
// model (iterated Aitken) and an algebraic one (iterated three-point Moebius
// fits, the parabolic landing model) and returns whichever shows the smaller
// discrepancy between its two deepest extrapolants.
Extrapolant extrapolate_limit(const std::vector<cplx>& chain);

// Limit of gamma(t) as t -> -infinity from the deepest unit-spaced samples.
Extrapolant landing_estimate(const RayCurve& r);

}  // namespace petal
