#include "petal/fatou.hpp"

#include <cmath>
#include <vector>

#include "petal/errors.hpp"
#include "petal/linearizer.hpp"

namespace petal {

namespace {

cplx to_u(cplx w) { return -1.0 / w; }

bool in_petal_u(cplx u, double L, bool incoming) {
  cplx v = incoming ? u : -u;
  return v.real() > L - std::abs(v.imag());
}

// Inverse of a polynomial germ by Newton, seeded with the backward
// asymptotics w - w^2 (the quadratic term dominates near 0).
cplx poly_inverse(const CFunc& f, const CFunc& df, cplx w) {
  cplx x = w - w * w;
  for (int i = 0; i < 60; ++i) {
    cplx g = f(x) - w;
    if (std::abs(g) < 1e-15 * (1.0 + std::abs(w))) return x;
    cplx d = df(x);
    require(std::abs(d) > 1e-300, errc::branch_loss, "inverse branch hit a critical point");
    x -= g / d;
    require(finite(x), errc::branch_loss, "inverse branch diverged");
  }
  fail(errc::no_convergence, "germ inverse Newton did not converge");
}

}  // namespace

ParabolicMap mobius_germ() {
  ParabolicMap g;
  g.f = [](cplx w) { return w / (1.0 - w); };
  g.finv = [](cplx w) { return w / (1.0 + w); };
  g.fmw = [](cplx w) { return w * w / (1.0 - w); };
  g.series.a3 = 1.0;
  g.series.a4 = 1.0;
  return g;
}

ParabolicMap basic_germ(cplx a3, cplx a4) {
  ParabolicMap g;
  g.f = [a3, a4](cplx w) { return w + w * w + a3 * w * w * w + a4 * w * w * w * w; };
  CFunc df = [a3, a4](cplx w) { return 1.0 + 2.0 * w + 3.0 * a3 * w * w + 4.0 * a4 * w * w * w; };
  g.finv = [f = g.f, df](cplx w) { return poly_inverse(f, df, w); };
  g.fmw = [a3, a4](cplx w) { return w * w * (1.0 + a3 * w + a4 * w * w); };
  g.series.a3 = a3;
  g.series.a4 = a4;
  return g;
}

namespace {

// (e^z - 1 - z) without cancellation; the direct form is fine once the
// quadratic term dominates the rounding of e^z.
cplx expm1m(cplx z) {
  if (std::abs(z) > 0.5) return std::exp(z) - 1.0 - z;
  cplx term = z * z / 2.0;
  cplx sum = term;
  for (int k = 3; k < 24; ++k) {
    term *= z / double(k);
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

ParabolicMap germ_of(const FamilyMember& m) {
  cplx a0 = base_param(m.id);
  require(std::abs(m.a - a0) <= 1e-12, errc::parabolic_input,
          "germ is defined at the parabolic base parameter only");
  cplx z1 = base_fixed_point(m.id);
  cplx c2 = deriv_k(m, z1, 2) / 2.0;
  require(std::abs(c2) >= 1e-12, errc::degenerate_quadratic_term,
          "second Taylor coefficient vanishes at the base fixed point");
  cplx c3 = deriv_k(m, z1, 3) / 6.0;
  cplx c4 = deriv_k(m, z1, 4) / 24.0;

  ParabolicMap g;
  FamilyMember mem = m;
  g.f = [mem, z1, c2](cplx w) { return c2 * (eval(mem, z1 + w / c2) - z1); };
  g.finv = [mem, z1, c2](cplx w) {
    cplx z = z1 + w / c2;
    return c2 * (inverse_toward(mem, z, z) - z1);
  };
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic:
    case FamilyKind::QuadraticC:
      // both normalize to exactly w + w^2 at the base
      g.fmw = [](cplx w) { return w * w; };
      break;
    case FamilyKind::ExponentialLambda:
      // germ is (e^{2w} - 1)/2
      g.fmw = [](cplx w) { return expm1m(2.0 * w) / 2.0; };
      break;
  }
  g.series.a3 = c3 / (c2 * c2);
  g.series.a4 = c4 / (c2 * c2 * c2);
  return g;
}

cplx normalized_singular(const FamilyMember& m) {
  cplx z1 = base_fixed_point(m.id);
  cplx c2 = deriv_k(m, z1, 2) / 2.0;
  return c2 * (singular_value(m) - z1);
}

cplx a_star_coefficient(cplx c1, cplx c2, cplx a3) {
  require(std::abs(c1 - 1.0) <= 1e-12 && std::abs(c2 - 1.0) <= 1e-12, errc::not_normalized,
          "series is not in normalized parabolic form (coefficients must start 1, 1)");
  return 1.0 - a3;
}

FatouChart make_incoming(ParabolicMap map, FatouOptions opts) {
  return FatouChart{std::move(map), true, opts, 0.0};
}

FatouChart make_outgoing(ParabolicMap map, FatouOptions opts) {
  return FatouChart{std::move(map), false, opts, 0.0};
}

cplx fatou_eval(const FatouChart& chart, cplx w) {
  const FatouOptions& o = chart.opts;
  require(finite(w) && std::abs(w) > 1e-300, errc::not_in_petal,
          "evaluation point must be finite and away from the fixed point");

  auto step = [&](cplx x) { return chart.incoming ? chart.map.f(x) : chart.map.finv(x); };

  // march into the petal; each step costs one unit of the Abel coordinate
  long entry = 0;
  while (!in_petal_u(to_u(w), o.L, chart.incoming)) {
    require(entry < o.entry_budget, errc::not_in_petal,
            "orbit did not reach the petal within the entry budget");
    w = step(w);
    require(finite(w) && std::abs(w) < 1e6, errc::not_in_petal, "orbit escaped the petal basin");
    ++entry;
  }

  cplx as = chart.map.series.a_star();
  cplx q = chart.map.series.q();
  auto log_branch = [&](cplx u) { return chart.incoming ? std::log(u) : log_upper(u); };

  // Track the orbit in u = -1/w where the map is a near-translation
  // U -> U + 1 + delta(U), delta = O(log|U| / |U|). Accumulating the small
  // deltas keeps rounding at the delta scale; recomputing -1/f(w) per step
  // loses ~|U| ulp each time and that noise grows like n^2, which buries the
  // estimator long before tol 1e-9. The Abel coordinate expands as
  // phi(u) = u - a* log u + q/u + const + O(log|u|/|u|^2), so
  // A_n = u_n -/+ n - a* Log u_n + q/u_n converges at rate log n / n^2;
  // the remaining tail is about |u|/2 times the consecutive difference,
  // which drives the stopping rule.
  double dir = chart.incoming ? -1.0 : 1.0;
  auto dev = [&](cplx U) -> cplx {
    cplx wu = -1.0 / U;
    cplx fm = chart.map.fmw ? chart.map.fmw(wu) : chart.map.f(wu) - wu;
    cplx fw = wu + fm;
    require(std::abs(fw) > 1e-300, errc::branch_loss, "orbit hit the fixed point");
    return (fm * (1.0 - wu) - wu * wu) / (wu * fw);
  };
  cplx U0 = to_u(w);
  cplx U = U0;
  cplx S = 0.0, comp = 0.0;  // compensated sum of deviations
  auto acc = [&](cplx x) {
    cplx y = x - comp;
    cplx t = S + y;
    comp = (t - S) - y;
    S = t;
  };
  cplx A_prev = U - as * log_branch(U) + q / U;
  for (long n = 1; n <= o.max_iter; ++n) {
    if (chart.incoming) {
      acc(dev(U));
      U = U0 + double(n) + S;
    } else {
      // backward step: solve v + 1 + delta(v) = U, contraction factor O(1/|U|^2)
      cplx v = U - 1.0;
      for (int k = 0; k < 4; ++k) v = U - 1.0 - dev(v);
      acc(-dev(v));
      U = U0 - double(n) + S;
      require(in_petal_u(U, o.L, false), errc::branch_loss, "backward orbit exited the petal");
    }
    require(finite(U), errc::branch_loss, "orbit left the chart domain");
    cplx A = U0 + S - as * log_branch(U) + q / U;
    if (std::abs(A - A_prev) * std::abs(U) / 2.0 < o.tol) {
      // entry steps shift the coordinate: forward entry costs -1 per step on
      // the incoming side, backward entry costs +1 on the outgoing side
      return A + dir * double(entry) + chart.offset;
    }
    A_prev = A;
  }
  fail(errc::no_convergence, "Abel estimator did not converge within the iteration cap");
}

cplx fatou_inverse(const FatouChart& chart, cplx zeta) {
  require(!chart.incoming, errc::usage, "chart inversion is provided for outgoing charts");
  cplx as = chart.map.series.a_star();
  cplx zr = zeta - chart.offset;
  cplx u = zr + as * log_upper(zr);
  cplx w = -1.0 / u;
  for (int i = 0; i < 80; ++i) {
    cplx g = fatou_eval(chart, w) - zeta;
    if (std::abs(g) < 1e-11) return w;
    cplx dphi = 1.0 / (w * w) + as / w;
    w -= g / dphi;
    require(finite(w) && std::abs(w) > 1e-300, errc::no_convergence,
            "chart inversion left the domain");
  }
  fail(errc::no_convergence, "chart inversion did not converge");
}

HornFit horn_normalize(FatouChart& incoming, FatouChart& outgoing,
                       std::optional<cplx> singular_w, double h, int k_samples,
                       double consistency_tol) {
  require(incoming.incoming && !outgoing.incoming, errc::usage,
          "horn normalization needs one incoming and one outgoing chart");
  require(k_samples >= 2, errc::usage, "need at least 2 horn samples");
  if (h <= 0.0) h = std::max(2.0 * std::max(incoming.opts.L, outgoing.opts.L), 20.0);

  // pin the incoming chart first: phi_in(singular) = 0
  if (singular_w) {
    incoming.offset = 0.0;
    incoming.offset = -fatou_eval(incoming, *singular_w);
  }

  auto ring_fit = [&](double height, double* residual_out) {
    cplx sum = 0.0;
    std::vector<cplx> devs(k_samples);
    for (int j = 0; j < k_samples; ++j) {
      cplx zeta(double(j) / double(k_samples), height);
      cplx w;
      try {
        w = fatou_inverse(outgoing, zeta);
      } catch (const Error& e) {
        if (e.code() == errc::no_convergence || e.code() == errc::not_in_petal)
          fail(errc::horn_domain_miss, "outgoing chart inverse left the horn overlap");
        throw;
      }
      cplx H;
      try {
        H = fatou_eval(incoming, w);
      } catch (const Error& e) {
        if (e.code() == errc::not_in_petal)
          fail(errc::horn_domain_miss, "horn sample fell outside the incoming chart");
        throw;
      }
      devs[j] = H - zeta;
      sum += devs[j];
    }
    cplx mean = sum / double(k_samples);
    if (residual_out) {
      for (const cplx& d : devs) *residual_out = std::max(*residual_out, std::abs(d - mean));
    }
    return mean;
  };

  HornFit fit;
  fit.h = h;
  double residual = 0.0;
  cplx c_low = ring_fit(h, &residual);
  cplx c_high = ring_fit(2.0 * h, &residual);
  fit.consistency = std::abs(c_low - c_high);
  require(fit.consistency <= consistency_tol, errc::invariant_violation,
          "horn constant is not stable between fit heights");
  fit.c = c_high;
  fit.horn_residual = residual;

  outgoing.offset += fit.c;
  fit.offset_in = incoming.offset;
  fit.offset_out = outgoing.offset;
  return fit;
}

}  // namespace petal
