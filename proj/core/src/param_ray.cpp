#include "petal/param_ray.hpp"

#include <algorithm>
#include <cmath>

#include "petal/contour.hpp"
#include "petal/errors.hpp"

namespace petal {

const char* method_name(SolveMethod m) {
  return m == SolveMethod::Newton ? "newton" : "winding";
}

cplx defect(const FamilyId& family, const Combinatorics& comb, cplx a, double t,
            const RayOptions& opts) {
  FamilyMember m = member(family.kind, a, family.n);
  try {
    RayCurve r = trace_ray(m, comb, t, t, 1.0, opts);
    return singular_value(m) - r.samples.front().z;
  } catch (const Error& e) {
    if (e.code() == errc::branch_loss || e.code() == errc::no_convergence ||
        e.code() == errc::singular_hit)
      fail(errc::ray_lost, "ray tracing lost the ray at this parameter");
    throw;
  }
}

namespace {

double trust_radius(cplx a_seed, cplx a0, const ParamRayOptions& o) {
  return o.trust_scale * std::abs(a_seed - a0) + o.trust_base;
}

// Newton inside the trust disk; returns nullopt when it wanders out, stalls,
// or the derivative collapses, so the caller can fall back to the contour.
std::optional<SolveResult> newton_solve(const FamilyId& family, const Combinatorics& comb,
                                        double t, cplx a_seed, cplx center, double trust,
                                        const ParamRayOptions& o) {
  cplx a0 = base_param(family);
  cplx a = a_seed;
  try {
    for (int it = 0; it < o.newton_max; ++it) {
      cplx f = defect(family, comb, a, t, o.ray);
      if (std::abs(f) <= o.residual_tol * 1e-3 ||
          (it > 0 && std::abs(f) <= o.residual_tol * 0.1)) {
        return SolveResult{a, std::abs(f), SolveMethod::Newton};
      }
      double h = o.fd_step * std::max(std::abs(a - a0), 1e-2);
      cplx df = (defect(family, comb, a + h, t, o.ray) - defect(family, comb, a - h, t, o.ray)) /
                (2.0 * h);
      if (std::abs(df) < 1e-14) return std::nullopt;
      cplx step = f / df;
      if (std::abs(step) > trust) step *= trust / std::abs(step);
      a -= step;
      if (std::abs(a - center) > trust) return std::nullopt;
    }
  } catch (const Error& e) {
    if (e.code() == errc::usage) throw;
    return std::nullopt;
  }
  return std::nullopt;
}

SolveResult winding_solve(const FamilyId& family, const Combinatorics& comb, double t,
                          cplx a_seed, double trust, const ParamRayOptions& o) {
  CFunc F = [&](cplx a) { return defect(family, comb, a, t, o.ray); };
  for (double r = trust / 8.0; r <= trust * 1.0000001; r *= 2.0) {
    Circle circle{a_seed, r, 128};
    int n = 0;
    try {
      n = count_zeros(F, {}, circle);
    } catch (const Error& e) {
      if (e.code() == errc::usage) throw;
      continue;  // contour crossed a bad sample; try a wider circle
    }
    if (n == 0) continue;
    require(n == 1, errc::multiple_zeros,
            "several defect zeros inside the trust region (potential not small enough)");
    cplx z = locate_single_zero(F, {}, circle);
    if (auto polished = newton_solve(family, comb, t, z, a_seed, trust, o)) {
      return SolveResult{polished->a, polished->residual, SolveMethod::Winding};
    }
    double res = std::abs(F(z));
    require(res <= o.residual_tol, errc::no_convergence,
            "contour zero estimate did not polish below tolerance");
    return SolveResult{z, res, SolveMethod::Winding};
  }
  fail(errc::no_zero_in_trust_region, "no defect zero inside the trust region");
}

// Real-axis bracket scan + bisection for the built-in combinatorics. Both
// built-in rays are real-symmetric, so the defect is real on the axis.
cplx builtin_seed(const FamilyId& family, const Combinatorics& comb, double t,
                  const ParamRayOptions& o) {
  double lo, hi;
  if (family.kind == FamilyKind::QuadraticC) {
    lo = 0.25 + 1e-4;
    hi = 4.0;
  } else if (family.kind == FamilyKind::ExponentialLambda) {
    lo = std::exp(-1.0) + 1e-4;
    hi = 2.5;
  } else {
    fail(errc::usage, "built-in seeding covers the quadratic and exponential families");
  }
  auto g = [&](double x) { return defect(family, comb, cplx(x), t, o.ray).real(); };
  const int scan = 48;
  double x_prev = lo;
  double g_prev = g(lo);
  for (int i = 1; i <= scan; ++i) {
    double x = lo + (hi - lo) * double(i) / double(scan);
    double gx = g(x);
    if ((g_prev < 0.0) != (gx < 0.0)) {
      double a = x_prev, b = x, ga = g_prev;
      for (int j = 0; j < 60; ++j) {
        double mid = (a + b) / 2.0;
        double gm = g(mid);
        if ((ga < 0.0) == (gm < 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      return cplx((a + b) / 2.0);
    }
    x_prev = x;
    g_prev = gx;
  }
  fail(errc::no_zero_in_trust_region, "no real-axis sign change for the initial seed");
}

}  // namespace

SolveResult solve_at_potential(const FamilyId& family, const Combinatorics& comb, double t,
                               cplx a_seed, const ParamRayOptions& opts) {
  cplx a0 = base_param(family);
  double trust = trust_radius(a_seed, a0, opts);
  if (!opts.force_fallback) {
    if (auto r = newton_solve(family, comb, t, a_seed, a_seed, trust, opts)) return *r;
  }
  return winding_solve(family, comb, t, a_seed, trust, opts);
}

ParameterRay trace_parameter_ray(const FamilyId& family, const Combinatorics& comb, double t_start,
                                 double t_end, double step, const ParamRayOptions& opts) {
  require(t_start > t_end, errc::usage, "potential range is empty");
  require(step > 0.0, errc::usage, "potential step must be positive");

  ParameterRay out;
  out.family = family;
  out.comb = comb;

  cplx seed = opts.seed_hint ? *opts.seed_hint : builtin_seed(family, comb, t_start, opts);
  SolveResult sr = solve_at_potential(family, comb, t_start, seed, opts);
  out.samples.push_back({t_start, sr.a, sr.residual, sr.method});

  double t_cur = t_start;
  long guard = 0;
  while (t_cur > t_end + 1e-9) {
    double target = std::max(t_cur - step, t_end);
    while (t_cur > target + 1e-12) {
      double h = t_cur - target;
      for (;;) {
        require(++guard < 100000, errc::continuation_stalled, "continuation step budget exhausted");
        try {
          SolveResult s = solve_at_potential(family, comb, t_cur - h, out.samples.back().a, opts);
          out.samples.push_back({t_cur - h, s.a, s.residual, s.method});
          t_cur -= h;
          break;
        } catch (const Error& e) {
          if (e.code() == errc::usage) throw;
          h /= 2.0;
          require(h >= opts.min_step, errc::continuation_stalled,
                  "continuation step fell below the floor");
        }
      }
    }
  }

  // landing: extrapolate over the deepest unit-spaced subchain
  std::vector<cplx> chain;
  chain.push_back(out.samples.back().a);
  double t_chain = out.samples.back().t;
  for (auto it = out.samples.rbegin() + 1; it != out.samples.rend(); ++it)
    if (std::abs(it->t - (t_chain + 1.0)) < 1e-9) {
      chain.push_back(it->a);
      t_chain = it->t;
    }
  std::reverse(chain.begin(), chain.end());
  if (chain.size() >= 5) {
    out.landing = extrapolate_limit(chain);
  } else {
    out.landing.value = out.samples.back().a;
    out.landing.uncertainty =
        out.samples.size() >= 2
            ? std::abs(out.samples.back().a - out.samples[out.samples.size() - 2].a)
            : 1.0;
  }
  return out;
}

LandingReport landing_report(const ParameterRay& pr, cplx a0) {
  require(pr.samples.size() >= 10, errc::too_few_samples,
          "landing diagnostics need at least 10 samples");
  LandingReport rep;
  rep.distances.reserve(pr.samples.size());
  for (const ParamSample& s : pr.samples) rep.distances.push_back(std::abs(s.a - a0));
  rep.monotone = true;
  size_t first = rep.distances.size() - std::min<size_t>(10, rep.distances.size());
  for (size_t i = first + 1; i < rep.distances.size(); ++i)
    if (rep.distances[i] > rep.distances[i - 1] + 1e-14) rep.monotone = false;

  std::vector<cplx> chain;
  chain.push_back(pr.samples.back().a);
  double t_chain = pr.samples.back().t;
  for (auto it = pr.samples.rbegin() + 1; it != pr.samples.rend(); ++it)
    if (std::abs(it->t - (t_chain + 1.0)) < 1e-9) {
      chain.push_back(it->a);
      t_chain = it->t;
    }
  std::reverse(chain.begin(), chain.end());
  rep.limit = chain.size() >= 5 ? extrapolate_limit(chain).value : pr.samples.back().a;
  rep.limit_error = std::abs(rep.limit - a0);
  return rep;
}

}  // namespace petal
