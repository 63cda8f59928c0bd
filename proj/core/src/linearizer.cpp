#include "petal/linearizer.hpp"

#include <cmath>

#include "petal/errors.hpp"

namespace petal {

namespace {

// Taylor coefficients of f(fp + u) - fp = sum_{k>=1} c_k u^k, exact per family.
std::vector<cplx> local_taylor(const FamilyMember& m, cplx fp, int order) {
  std::vector<cplx> c(order + 1, 0.0);
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic:
    case FamilyKind::QuadraticC:
      c[1] = deriv(m, fp);
      if (order >= 2) c[2] = 1.0;  // f'' = 2 for both quadratic forms
      return c;
    case FamilyKind::ExponentialLambda: {
      // f(fp+u) = fp * e^u when fp is a fixed point (lambda e^{fp} = fp)
      cplx fact = 1.0;
      for (int k = 1; k <= order; ++k) {
        fact *= double(k);
        c[k] = fp / fact;
      }
      return c;
    }
  }
  fail(errc::usage, "unknown family kind");
}

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b, int order) {
  std::vector<cplx> out(order + 1, 0.0);
  for (int i = 1; i <= order; ++i) {
    if (a[i] == cplx(0.0)) continue;
    for (int j = 1; i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

cplx series_eval(const std::vector<cplx>& c, cplx u) {
  cplx s = 0.0;
  for (int k = int(c.size()) - 1; k >= 1; --k) s = s * u + c[k];
  return s * u;
}

}  // namespace

cplx inverse_toward(const FamilyMember& m, cplx ref, cplx w) {
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic: {
      // solve mu z + z^2 = w
      cplx mu = deriv(m, 0.0);
      cplx d = std::sqrt(mu * mu + 4.0 * w);
      cplx r1 = (-mu + d) / 2.0, r2 = (-mu - d) / 2.0;
      return std::abs(r1 - ref) <= std::abs(r2 - ref) ? r1 : r2;
    }
    case FamilyKind::QuadraticC: {
      cplx d = std::sqrt(w - m.a);
      return std::abs(d - ref) <= std::abs(-d - ref) ? d : -d;
    }
    case FamilyKind::ExponentialLambda: {
      cplx base = std::log(w / m.a);
      double k = std::round((ref.imag() - base.imag()) / (2.0 * kPi));
      return base + cplx(0.0, 2.0 * kPi * k);
    }
  }
  fail(errc::usage, "unknown family kind");
}

LinearizerChart make_linearizer(const FamilyMember& m, cplx fp, int order, double domain_radius) {
  require(order >= 4 && order <= 64, errc::usage, "series order must be in [4, 64]");
  require(std::abs(eval(m, fp) - fp) <= 1e-10, errc::not_a_fixed_point,
          "linearizer base point is not fixed");
  cplx mu = deriv(m, fp);
  require(std::abs(std::abs(mu) - 1.0) > 1e-10, errc::indifferent_multiplier,
          "multiplier on the unit circle: no Koenigs linearizer");

  LinearizerChart L;
  L.m = m;
  L.fixed_point = fp;
  L.multiplier = mu;
  L.attracting = std::abs(mu) < 1.0;

  // Solve kappa(f(u)) = mu*kappa(u) order by order: with P_j = f^j (series
  // power), b_m (mu - mu^m) = sum_{j<m} b_j P_j[m].
  std::vector<cplx> f_ser = local_taylor(m, fp, order);
  L.coeffs.assign(order + 1, 0.0);
  L.coeffs[1] = 1.0;
  std::vector<std::vector<cplx>> powers(order + 1);
  powers[1] = f_ser;
  for (int j = 2; j <= order; ++j) powers[j] = convolve(powers[j - 1], f_ser, order);
  for (int mdeg = 2; mdeg <= order; ++mdeg) {
    cplx rhs = 0.0;
    for (int j = 1; j < mdeg; ++j) rhs += L.coeffs[j] * powers[j][mdeg];
    cplx mu_m = std::pow(mu, double(mdeg));
    L.coeffs[mdeg] = rhs / (mu - mu_m);
  }

  if (domain_radius > 0.0) {
    L.domain_radius = domain_radius;
  } else {
    double radius_est = 1e308;
    for (int k = 2; k <= order; ++k) {
      double bk = std::abs(L.coeffs[k]);
      if (bk > 0.0) radius_est = std::min(radius_est, std::pow(bk, -1.0 / double(k - 1)));
    }
    if (radius_est > 1e300) radius_est = 1.0;  // linear map: series is exact
    L.domain_radius = 0.3 * radius_est;
  }
  L.branch_anchor = fp + L.domain_radius * 0.5;
  return L;
}

KoenigsEval koenigs_eval(const LinearizerChart& L, cplx z) {
  cplx fp = L.fixed_point;
  double start_dist = std::abs(z - fp);
  double escape = 1e3 * (start_dist + 1.0);
  long n = 0;
  while (std::abs(z - fp) > L.domain_radius) {
    require(n < L.max_iter, errc::no_convergence, "orbit did not reach the series disk");
    z = L.attracting ? eval(L.m, z) : inverse_toward(L.m, z, z);
    require(finite(z) && std::abs(z - fp) < escape, errc::no_convergence,
            "orbit left the linearization domain");
    ++n;
  }
  cplx sv = series_eval(L.coeffs, z - fp);
  cplx log_mu = std::log(L.multiplier);
  KoenigsEval out;
  out.steps = n;
  // forward orbit: kappa(z) = kappa(z_n) mu^{-n}; backward: kappa(z_n) mu^{+n}
  double sign = L.attracting ? -1.0 : 1.0;
  out.log_kappa = std::log(sv) + sign * double(n) * log_mu;
  out.kappa = std::exp(out.log_kappa);
  return out;
}

cplx koenigs(const FamilyMember& m, cplx fp, cplx mu, cplx z) {
  LinearizerChart L = make_linearizer(m, fp);
  require(std::abs(mu - L.multiplier) <= 1e-8, errc::usage,
          "supplied multiplier disagrees with the map derivative at fp");
  return koenigs_eval(L, z).kappa;
}

cplx series_value(const LinearizerChart& L, cplx u) { return series_eval(L.coeffs, u); }

cplx series_inverse(const LinearizerChart& L, cplx v) {
  cplx u = v;  // kappa is tangent to the identity
  for (int i = 0; i < 60; ++i) {
    cplx g = series_eval(L.coeffs, u) - v;
    if (std::abs(g) <= 1e-16 * (1.0 + std::abs(v))) return u;
    cplx d = 0.0;
    for (int k = int(L.coeffs.size()) - 1; k >= 1; --k) d = d * u + double(k) * L.coeffs[k];
    require(std::abs(d) > 1e-300, errc::no_convergence, "series derivative vanished");
    u -= g / d;
    require(finite(u), errc::no_convergence, "series inversion diverged");
  }
  fail(errc::no_convergence, "series inversion did not converge");
}

}  // namespace petal
