#include "petal/rays.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "petal/errors.hpp"

namespace petal {

Combinatorics external_angle(long num, long den) {
  require(den >= 1, errc::usage, "angle denominator must be positive");
  Combinatorics c;
  c.kind = Combinatorics::Kind::ExternalAngle;
  c.num = num;
  c.den = den;
  return c;
}

Combinatorics external_address(std::vector<int> entries, int entry_bound) {
  require(!entries.empty(), errc::usage, "address needs at least one entry");
  Combinatorics c;
  c.kind = Combinatorics::Kind::ExternalAddress;
  c.address = std::move(entries);
  c.entry_bound = entry_bound;
  return c;
}

namespace {

int fixed_address_entry(const Combinatorics& comb) {
  require(comb.kind == Combinatorics::Kind::ExternalAddress, errc::usage,
          "exponential rays take an external address");
  for (int e : comb.address)
    require(std::abs(e) <= comb.entry_bound, errc::usage, "address entry out of bounds");
  for (int e : comb.address)
    require(e == comb.address.front(), errc::comb_not_fixed,
            "ray tracing needs a shift-fixed (constant) address");
  return comb.address.front();
}

void check_fixed_angle(const Combinatorics& comb) {
  require(comb.kind == Combinatorics::Kind::ExternalAngle, errc::usage,
          "quadratic rays take an external angle");
  require(comb.num % comb.den == 0, errc::comb_not_fixed,
          "angle is not fixed under doubling (only angle 0 is)");
}

// ---- quadratic side --------------------------------------------------------

// gamma(p) for Green's value 2^{p-1} large: Boettcher inverse tail.
cplx quad_seed(cplx c, double p) {
  double g = std::exp2(p - 1.0);
  require(g <= 700.0, errc::usage, "potential too large to seed");
  cplx w = std::exp(cplx(g));
  return w - c / (2.0 * w);
}

cplx quad_pull(cplx c, cplx parent) {
  cplx d = parent - c;
  // both preimages within 1e-6 of each other means |d| < 2.5e-13
  require(std::abs(d) > 2.5e-13, errc::singular_hit, "pullback reached the critical value");
  cplx r = std::sqrt(d);
  if (std::abs(r - parent) > std::abs(-r - parent)) r = -r;
  require(std::abs(r) > 1e-9, errc::singular_hit, "sample touches the critical point");
  return r;
}

// gamma at the top potential of a residue group, seeded extra_depth levels
// beyond the minimal window.
cplx quad_group_top(cplx c, double t_top, int extra_depth) {
  int n = int(std::ceil(std::log2(40.0) + 1.0 - t_top));
  n = std::max(n, 1) + extra_depth;
  cplx z = quad_seed(c, t_top + n);
  for (int i = 0; i < n; ++i) z = quad_pull(c, z);
  return z;
}

// ---- exponential side ------------------------------------------------------

struct ModelChart {
  FatouChart out;
  double t_base;  // model point where seeding windows start
  double phi_base;
};

// The additive freedom of the Abel coordinate is fixed so that the model
// point x = t_base carries potential exactly t_base. Larger potentials climb
// the tower x -> e^x - 1 one window per unit, so representable potentials top
// out near t_base + 1 plus a partial window; everything below is reachable
// through pullback ladders.
ModelChart make_model(const RayOptions& opts) {
  FamilyId id{FamilyKind::ExponentialLambda, 1};
  ModelChart M{make_outgoing(germ_of(member(id.kind, base_param(id))), opts.model),
               opts.model_seed_min, 0.0};
  // building the chart is cheap but the base evaluation is not; parameter
  // solvers build one model per defect evaluation, so cache by the chart knobs
  thread_local std::map<std::tuple<double, double, double>, double> memo;
  auto key = std::make_tuple(M.t_base, opts.model.tol, opts.model.L);
  auto it = memo.find(key);
  if (it == memo.end())
    it = memo.emplace(key, M.t_base - fatou_eval(M.out, cplx(M.t_base / 2.0)).real()).first;
  M.out.offset = it->second;
  M.phi_base = M.t_base;
  return M;
}

double model_phi(const ModelChart& M, double x) {
  return fatou_eval(M.out, cplx(x / 2.0)).real();
}

// Inverse Abel coordinate of the model on the real axis, by bisection in the
// tower window containing tau. Memoized: it does not depend on the parameter,
// and solvers revisit the same potentials many times.
double model_psi(const ModelChart& M, double tau) {
  thread_local std::map<std::tuple<double, double, double, double>, double> memo;
  auto key = std::make_tuple(tau, M.t_base, M.out.opts.tol, M.out.opts.L);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  double lo = M.t_base;
  double phi_lo = M.phi_base;
  require(tau >= phi_lo - 1e-9, errc::usage, "potential below the seeding window");
  while (phi_lo + 1.0 <= tau) {
    require(lo <= 700.0, errc::usage, "potential too large to seed");
    lo = std::exp(lo) - 1.0;
    phi_lo += 1.0;
  }
  // bracket [lo, e^lo - 1] in log scale; cap where e^y overflows a double
  double ylo = std::log(lo), yhi = std::min(lo, 705.0);
  for (int i = 0; i < 90; ++i) {
    double ymid = (ylo + yhi) / 2.0;
    if (model_phi(M, std::exp(ymid)) < tau)
      ylo = ymid;
    else
      yhi = ymid;
  }
  double x = std::exp((ylo + yhi) / 2.0);
  require(std::abs(model_phi(M, x) - tau) <= 1e-6, errc::usage, "potential too large to seed");
  memo.emplace(key, x);
  return x;
}

// Conjugacy tail of lambda e^z to the model at a far point T of the ray.
cplx exp_seed(cplx lambda, int k, double T) {
  cplx eta = 2.0 * kPi * kI * double(k) - 1.0 - std::log(lambda);
  cplx corr = 0.0;
  if (T < 120.0) {
    double e1 = std::exp(-T);
    corr = eta * e1 - eta * eta / 2.0 * (e1 * e1) + eta * eta * eta / 3.0 * (e1 * e1 * e1);
  }
  return T - std::log(lambda) + 2.0 * kPi * kI * double(k) + corr;
}

cplx exp_pull(cplx lambda, int k, cplx parent) {
  require(std::abs(parent) > 1e-12, errc::singular_hit, "pullback through the asymptotic value");
  return std::log(parent / lambda) + 2.0 * kPi * kI * double(k);
}

cplx exp_group_top(const ModelChart& M, cplx lambda, int k, double t_top, int extra_depth) {
  long m = std::max(0L, std::lround(std::ceil(M.phi_base - t_top))) + extra_depth;
  double T = model_psi(M, t_top + double(m));
  cplx z = exp_seed(lambda, k, T);
  for (long i = 0; i < m; ++i) z = exp_pull(lambda, k, z);
  return z;
}

// ---- shared tracing skeleton ----------------------------------------------

std::vector<double> potential_grid(double t_hi, double t_lo, double step) {
  require(t_hi >= t_lo, errc::usage, "potential range is empty");
  require(step > 0.0, errc::usage, "potential step must be positive");
  std::vector<double> ts;
  for (long i = 0;; ++i) {
    double t = t_hi - double(i) * step;
    if (t < t_lo - 1e-9) break;
    require(i < 100000, errc::usage, "potential grid too fine");
    ts.push_back(t);
  }
  return ts;
}

// indices of the grid split into unit-spaced residue ladders, descending t
std::vector<std::vector<size_t>> residue_groups(const std::vector<double>& ts) {
  std::map<long long, std::vector<size_t>> by_res;
  for (size_t i = 0; i < ts.size(); ++i) {
    double f = ts[i] - std::floor(ts[i]);
    long long key = llround(f * 1e9) % 1000000000LL;
    by_res[key].push_back(i);
  }
  std::vector<std::vector<size_t>> groups;
  for (auto& [key, idx] : by_res) groups.push_back(idx);
  return groups;
}

double pair_residual(const FamilyMember& m, const std::vector<RaySample>& samples, bool* found) {
  double res = 0.0;
  *found = false;
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (std::abs(samples[j].t - samples[i].t - 1.0) < 1e-9) {
        *found = true;
        res = std::max(res, std::abs(eval(m, samples[i].z) - samples[j].z));
      }
  return res;
}

}  // namespace

double boettcher_potential(const FamilyMember& m, cplx z, const RayOptions& opts) {
  require(m.id.kind == FamilyKind::QuadraticC, errc::usage,
          "Green's function applies to the quadratic family");
  cplx c = m.a;
  long n = 0;
  while (std::abs(z) <= opts.escape_radius) {
    require(n < opts.escape_cap, errc::non_escaping, "orbit did not escape");
    z = z * z + c;
    ++n;
  }
  // G = 2^{-n} log|z_n| + sum_j 2^{-n-j-1} log|1 + c/z_{n+j}^2|
  double g = std::exp2(double(-n)) * std::log(std::abs(z));
  double w = std::exp2(double(-n - 1));
  for (int j = 0; j < 6; ++j) {
    cplx corr = 1.0 + c / (z * z);
    g += w * std::log(std::abs(corr));
    if (std::abs(corr - 1.0) < 1e-18) break;
    z = z * z + c;
    if (!finite(z)) break;
    w /= 2.0;
  }
  return g;
}

RayCurve trace_ray(const FamilyMember& m, const Combinatorics& comb, double t_hi, double t_lo,
                   double step, const RayOptions& opts) {
  RayCurve out;
  out.member = m;
  out.comb = comb;
  std::vector<double> ts = potential_grid(t_hi, t_lo, step);
  out.samples.resize(ts.size());

  if (m.id.kind == FamilyKind::QuadraticC) {
    check_fixed_angle(comb);
    for (const auto& group : residue_groups(ts)) {
      double t_top = ts[group.front()];
      cplx z = quad_group_top(m.a, t_top, 0);
      cplx z_deep = quad_group_top(m.a, t_top, 1);
      require(std::abs(z - z_deep) <= opts.seed_agreement * (1.0 + std::abs(z)),
              errc::no_convergence, "seed depth did not stabilize the top sample");
      double t_here = t_top;
      for (size_t gi : group) {
        long gap = std::lround(t_here - ts[gi]);
        for (long s = 0; s < gap; ++s) z = quad_pull(m.a, z);
        t_here = ts[gi];
        out.samples[gi] = {ts[gi], z};
      }
    }
  } else if (m.id.kind == FamilyKind::ExponentialLambda) {
    int k = fixed_address_entry(comb);
    ModelChart M = make_model(opts);
    // the seeding window plus one tower step is the last fully representable
    // unit of potential; deeper t is always reachable, higher is not
    require(t_hi <= M.t_base + 1.0 + 1e-9, errc::usage, "potential too large to seed");
    for (const auto& group : residue_groups(ts)) {
      double t_top = ts[group.front()];
      cplx z = exp_group_top(M, m.a, k, t_top, 0);
      cplx z_deep = exp_group_top(M, m.a, k, t_top, 1);
      require(std::abs(z - z_deep) <= opts.seed_agreement * (1.0 + std::abs(z)),
              errc::no_convergence, "seed depth did not stabilize the top sample");
      double t_here = t_top;
      for (size_t gi : group) {
        long gap = std::lround(t_here - ts[gi]);
        for (long s = 0; s < gap; ++s) z = exp_pull(m.a, k, z);
        t_here = ts[gi];
        out.samples[gi] = {ts[gi], z};
      }
    }
  } else {
    fail(errc::usage, "ray tracing covers the quadratic and exponential families");
  }

  bool found = false;
  out.invariance_residual = pair_residual(m, out.samples, &found);
  if (found)
    require(out.invariance_residual <= 1e-8, errc::invariant_violation,
            "forward invariance broke along the traced ray");
  return out;
}

double invariance_residual(const RayCurve& r) {
  bool found = false;
  double res = pair_residual(r.member, r.samples, &found);
  require(found, errc::no_unit_pairs, "no unit-separated potential pairs in the curve");
  return res;
}

namespace {

// Aitken delta-squared, exact on x_n = L + c r^n.
std::vector<cplx> aitken(const std::vector<cplx>& x) {
  std::vector<cplx> a;
  for (size_t n = 0; n + 2 < x.size(); ++n) {
    cplx d2 = x[n + 2] - 2.0 * x[n + 1] + x[n];
    cplx d1 = x[n + 2] - x[n + 1];
    a.push_back(std::abs(d2) < 1e-300 ? x[n + 2] : x[n + 2] - d1 * d1 / d2);
  }
  return a;
}

// Three-point fit of x_n = L + c/(n + s), exact for that model (parabolic
// approach to first order). The difference ratio rho = (n+s)/(n+s+2)
// recovers the shifted index, then L = x_n + dx_n (n+s+1). On higher-order
// algebraic decay 1/(n+s)^p each pass still shrinks the error by roughly
// (p-1)/(p+1) with a sign flip, so a few passes converge.
std::vector<cplx> mobius_pass(const std::vector<cplx>& x) {
  std::vector<cplx> y;
  for (size_t n = 0; n + 2 < x.size(); ++n) {
    cplx d0 = x[n + 1] - x[n];
    cplx d1 = x[n + 2] - x[n + 1];
    if (std::abs(d0) < 1e-300 || std::abs(d0 - d1) < 1e-12 * std::abs(d0)) {
      y.push_back(x[n + 2]);
      continue;
    }
    cplx rho = d1 / d0;
    cplx s = 2.0 * rho / (1.0 - rho);
    y.push_back(x[n] + d0 * (s + 1.0));
  }
  return y;
}

Extrapolant tail_of(const std::vector<cplx>& x) {
  return {x.back(), std::abs(x.back() - x[x.size() - 2])};
}

}  // namespace

Extrapolant extrapolate_limit(const std::vector<cplx>& chain) {
  require(chain.size() >= 5, errc::too_few_samples, "need at least 5 chain points");

  // geometric model
  std::vector<cplx> g = aitken(aitken(chain));
  Extrapolant geom = tail_of(g);

  // algebraic model, iterated until the chain runs short
  std::vector<cplx> a = chain;
  for (int pass = 0; pass < 3 && a.size() >= 5; ++pass) a = mobius_pass(a);
  Extrapolant alg = tail_of(a);

  Extrapolant best = alg.uncertainty <= geom.uncertainty ? alg : geom;
  best.uncertainty = std::max(best.uncertainty, 1e-15);
  return best;
}

Extrapolant landing_estimate(const RayCurve& r) {
  // unit-spaced chain ending at the lowest potential, ordered toward the limit
  std::vector<RaySample> s = r.samples;
  std::sort(s.begin(), s.end(), [](const RaySample& a, const RaySample& b) { return a.t > b.t; });
  std::vector<cplx> chain;
  chain.push_back(s.back().z);
  double t = s.back().t;
  for (auto it = s.rbegin() + 1; it != s.rend(); ++it)
    if (std::abs(it->t - (t + 1.0)) < 1e-9) {
      chain.push_back(it->z);
      t = it->t;
    }
  require(chain.size() >= 9, errc::too_few_samples, "need at least 9 unit-spaced deep samples");
  std::reverse(chain.begin(), chain.end());  // now chain[n] -> landing point

  double d_first = std::abs(chain[1] - chain[0]);
  double d_last = std::abs(chain.back() - chain[chain.size() - 2]);
  require(d_last <= std::max(d_first, 1e-6), errc::diverging, "deep samples are not settling");

  return extrapolate_limit(chain);
}

}  // namespace petal
