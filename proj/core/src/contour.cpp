#include "petal/contour.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "petal/errors.hpp"

namespace petal {

namespace {

void check_circle(const Circle& C) {
  require(C.radius > 0.0, errc::usage, "circle radius must be positive");
  require(C.nodes >= 16 && (C.nodes & (C.nodes - 1)) == 0, errc::usage,
          "circle nodes must be a power of two >= 16");
}

cplx node(const Circle& C, int k, int n) {
  double th = 2.0 * kPi * double(k) / double(n);
  return C.center + C.radius * std::polar(1.0, th);
}

// Samples of g(w_k) e^{i theta_k}; the integral is (R/N) * their sum.
// Summation is done in node order so results are deterministic.
struct NodeSum {
  std::vector<cplx> terms;

  cplx value(double radius) const {
    cplx s = 0.0;
    for (const cplx& t : terms) s += t;
    return s * (radius / double(terms.size()));
  }
};

NodeSum sample_all(const CFunc& g, const Circle& C, int n) {
  NodeSum out;
  out.terms.resize(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * kPi * double(k) / double(n);
    cplx w = C.center + C.radius * std::polar(1.0, th);
    cplx v = g(w);
    require(finite(v), errc::non_finite_sample, "non-finite integrand sample on contour");
    out.terms[k] = v * std::polar(1.0, th);
  }
  return out;
}

// Doubling reuses previous samples at even indices and fills midpoints.
NodeSum doubled(const CFunc& g, const Circle& C, const NodeSum& prev) {
  int n = int(prev.terms.size());
  NodeSum out;
  out.terms.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    out.terms[2 * k] = prev.terms[k];
    double th = 2.0 * kPi * (double(k) + 0.5) / double(n);
    cplx w = C.center + C.radius * std::polar(1.0, th);
    cplx v = g(w);
    require(finite(v), errc::non_finite_sample, "non-finite integrand sample on contour");
    out.terms[2 * k + 1] = v * std::polar(1.0, th);
  }
  return out;
}

cplx adaptive(const CFunc& g, const Circle& C, const ContourOptions& opts) {
  check_circle(C);
  NodeSum s = sample_all(g, C, C.nodes);
  cplx val = s.value(C.radius);
  int n = C.nodes;
  while (2 * n <= opts.max_nodes) {
    s = doubled(g, C, s);
    n *= 2;
    cplx next = s.value(C.radius);
    if (std::abs(next - val) < opts.gate) return next;
    val = next;
  }
  return val;
}

void check_floor(const CFunc& denom, const Circle& C, double floor, const char* what) {
  // The floor check guards the densest node set the adaptive loop may touch.
  for (int k = 0; k < C.nodes; ++k) {
    cplx v = denom(node(C, k, C.nodes));
    require(finite(v), errc::non_finite_sample, "non-finite denominator sample on contour");
    require(std::abs(v) >= floor, errc::zero_on_contour, std::string(what) + " vanishes on contour");
  }
}

}  // namespace

cplx integrate_circle(const CFunc& g, const Circle& C) {
  check_circle(C);
  return sample_all(g, C, C.nodes).value(C.radius);
}

cplx integrate_adaptive(const CFunc& g, const Circle& C, const ContourOptions& opts) {
  return adaptive(g, C, opts);
}

CFunc fd_derivative(CFunc f, double step) {
  return [f = std::move(f), step](cplx z) { return (f(z + step) - f(z - step)) / (2.0 * step); };
}

int count_zeros(const CFunc& f, const CFunc& fprime, const Circle& C, const ContourOptions& opts) {
  check_circle(C);
  check_floor(f, C, opts.floor, "f");
  CFunc df = fprime ? fprime : fd_derivative(f, C.radius / 1e6);
  cplx J = adaptive([&](cplx w) { return df(w) / f(w); }, C, opts);
  double winding = J.real();
  long n = std::lround(winding);
  double residual = std::hypot(winding - double(n), J.imag());
  require(residual <= opts.winding_tol, errc::non_integer_winding,
          "winding integral " + std::to_string(winding) + " is not close to an integer");
  return int(n);
}

cplx locate_single_zero(const CFunc& f, const CFunc& fprime, const Circle& C,
                        const ContourOptions& opts) {
  int n = count_zeros(f, fprime, C, opts);
  require(n == 1, errc::wrong_zero_count,
          "contour encloses " + std::to_string(n) + " zeros, expected 1");
  CFunc df = fprime ? fprime : fd_derivative(f, C.radius / 1e6);
  return adaptive([&](cplx w) { return w * df(w) / f(w); }, C, opts);
}

cplx fixed_point_power_sum(const FamilyMember& m, const Circle& C, int p,
                           const ContourOptions& opts) {
  require(p == 1 || p == 2, errc::usage, "power sum supports p = 1 or 2");
  check_circle(C);
  check_floor([&](cplx w) { return eval(m, w) - w; }, C, opts.floor, "f(w)-w");
  return adaptive(
      [&](cplx w) {
        cplx wp = (p == 1) ? w : w * w;
        return wp * (deriv(m, w) - 1.0) / (eval(m, w) - w);
      },
      C, opts);
}

cplx sum_fixed_points(const FamilyMember& m, const Circle& C, const ContourOptions& opts) {
  return fixed_point_power_sum(m, C, 1, opts);
}

bool rouche_check(const CFunc& f, const CFunc& g, const Circle& C) {
  check_circle(C);
  double max_diff = 0.0;
  double min_g = std::numeric_limits<double>::infinity();
  for (int k = 0; k < C.nodes; ++k) {
    cplx w = node(C, k, C.nodes);
    cplx fv = f(w), gv = g(w);
    if (!finite(fv) || !finite(gv)) return false;
    max_diff = std::max(max_diff, std::abs(fv - gv));
    min_g = std::min(min_g, std::abs(gv));
  }
  return max_diff < min_g;
}

}  // namespace petal
