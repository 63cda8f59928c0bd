#pragma once
#include <optional>
#include <vector>

#include "petal/family.hpp"
#include "petal/rays.hpp"

namespace petal {

enum class SolveMethod { Newton, Winding };
const char* method_name(SolveMethod m);

struct ParamSample {
  double t{0.0};
  cplx a{0.0};
  double residual{0.0};  // |defect| at the accepted parameter
  SolveMethod method{SolveMethod::Newton};
};

// Parameter-space curve: for each potential t the parameter a with
// s(a) = gamma_a(t), i.e. the singular value sits on the tagged dynamic ray
// at that potential. Samples are at strictly decreasing t.
struct ParameterRay {
  FamilyId family;
  Combinatorics comb;
  std::vector<ParamSample> samples;
  Extrapolant landing;
};

struct ParamRayOptions {
  double residual_tol = 1e-8;
  double trust_scale = 0.1;  // trust radius = trust_scale |a_seed - a0| + trust_base
  double trust_base = 1e-3;
  double fd_step = 1e-7;  // central-difference step 1e-7 * max(|a - a0|, 1e-2)
  int newton_max = 16;
  double min_step = 1e-3;       // continuation step floor under halving
  bool force_fallback = false;  // skip Newton, use the winding contour directly
  std::optional<cplx> seed_hint;  // overrides the built-in real-axis seed scan
  RayOptions ray;
};

// s(a) - gamma_a(t), zero exactly on the parameter ray. Tracing failures
// (branch loss, lost convergence, singular hits) surface as RayLost.
cplx defect(const FamilyId& family, const Combinatorics& comb, cplx a, double t,
            const RayOptions& opts = {});

struct SolveResult {
  cplx a{0.0};
  double residual{0.0};
  SolveMethod method{SolveMethod::Newton};
};

// Newton on a -> defect(a, t) with a central-difference derivative, inside a
// trust disk around the seed. On failure: circles of radius trust/8, 2x up to
// the trust radius, requiring winding count 1, then the contour zero locator
// and a Newton polish.
SolveResult solve_at_potential(const FamilyId& family, const Combinatorics& comb, double t,
                               cplx a_seed, const ParamRayOptions& opts = {});

// Continuation in decreasing t from t_start to t_end (nominal step, halved on
// failure down to min_step), each sample seeded from the previous one. The
// built-in seed at t_start is a real-axis scan plus bisection.
ParameterRay trace_parameter_ray(const FamilyId& family, const Combinatorics& comb, double t_start,
                                 double t_end, double step = 1.0, const ParamRayOptions& opts = {});

struct LandingReport {
  std::vector<double> distances;  // |a - a0| per sample, t descending
  bool monotone{false};           // nonincreasing over the final 10 samples
  cplx limit{0.0};
  double limit_error{0.0};  // |limit - a0|
};

LandingReport landing_report(const ParameterRay& pr, cplx a0);

}  // namespace petal
