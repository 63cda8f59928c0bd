#include "petal/phase.hpp"

#include <algorithm>
#include <cmath>

#include "petal/errors.hpp"

namespace petal {

namespace {

cplx raw_phi(const DouadyChart& D, cplx z) {
  return koenigs_eval(D.lin, z).log_kappa / D.log_mu;
}

cplx snap(const DouadyChart& D, cplx raw, cplx target) {
  double k = std::round(((target - raw) / D.lattice).real());
  return raw + k * D.lattice;
}

// Analytic continuation of phi along the segment p -> q. Accepts a value when
// it sits within a fraction of the sheet lattice of the previous one, else
// bisects. Failures drill down the left spine, so the cost of an impossible
// segment is linear in the depth cap, not exponential.
cplx continue_segment(const DouadyChart& D, cplx p, cplx phi_p, cplx q, int depth) {
  cplx cand = snap(D, raw_phi(D, q), phi_p);
  if (std::abs(cand - phi_p) < 0.35 * std::abs(D.lattice)) return cand;
  require(depth < 48, errc::branch_loss, "sheet continuation did not stabilize");
  cplx mid = (p + q) / 2.0;
  cplx phi_mid = continue_segment(D, p, phi_p, mid, depth + 1);
  return continue_segment(D, mid, phi_mid, q, depth + 1);
}

// Walking cursor: carries the branch along a chain of continuations.
struct Cursor {
  cplx z{0.0};
  cplx raw{0.0};
  void walk(const DouadyChart& D, cplx target) {
    raw = continue_segment(D, z, raw, target, 0);
    z = target;
  }
};

}  // namespace

DouadyChart make_douady(const FamilyMember& m, cplx fp) {
  DouadyChart D;
  D.lin = make_linearizer(m, fp);
  D.log_mu = std::log(D.lin.multiplier);
  require(std::abs(D.log_mu) >= 1e-8, errc::parabolic_input,
          "multiplier too close to 1 for a translation chart");
  D.lattice = 2.0 * kPi * kI / D.log_mu;
  return D;
}

cplx douady_anchor_raw(const DouadyChart& D) { return raw_phi(D, D.lin.branch_anchor); }

cplx douady_continue(const DouadyChart& D, cplx start, cplx raw_start,
                     const std::vector<cplx>& waypoints, cplx z) {
  Cursor c{start, raw_start};
  for (cplx w : waypoints) c.walk(D, w);
  c.walk(D, z);
  return c.raw;
}

cplx douady_eval(const DouadyChart& D, cplx z) {
  cplx a = D.lin.branch_anchor;
  return douady_continue(D, a, raw_phi(D, a), {}, z) + D.offset;
}

cplx douady_inverse_raw(const DouadyChart& D, cplx zeta) {
  require(!D.lin.attracting, errc::usage, "chart inversion needs a repelling chart");
  cplx log_kappa = zeta * D.log_mu;
  double log_bound = std::log(0.5 * D.lin.domain_radius);
  double re_log_mu = D.log_mu.real();  // > 0 at a repelling point
  long j = std::lround(std::ceil(std::max(0.0, (log_kappa.real() - log_bound) / re_log_mu)));
  require(j <= 100000, errc::no_convergence, "inversion would need too many forward steps");
  cplx w = D.lin.fixed_point + series_inverse(D.lin, std::exp(log_kappa - double(j) * D.log_mu));
  for (long i = 0; i < j; ++i) {
    w = eval(D.lin.m, w);
    require(finite(w) && std::abs(w - D.lin.fixed_point) < 1e6, errc::no_convergence,
            "inversion escaped the gate region");
  }
  return w;
}

cplx douady_fatou(const FamilyMember& m, bool outgoing, cplx z, Circle disk) {
  if (disk.radius <= 0.0) disk = default_pair_disk(m);
  FixedPair pair = find_pair(m, disk, {.require_distinct = true});
  bool att1 = std::abs(pair.mu1) < 1.0;
  bool att2 = std::abs(pair.mu2) < 1.0;
  cplx fp;
  if (outgoing) {
    require(!att1 || !att2, errc::horn_domain_miss, "no repelling fixed point in the pair");
    fp = !att1 ? pair.z1 : pair.z2;
  } else {
    require(att1 || att2, errc::horn_domain_miss, "no attracting fixed point in the pair");
    fp = att1 ? pair.z1 : pair.z2;
  }
  return douady_eval(make_douady(m, fp), z);
}

std::pair<cplx, cplx> pair_estimate(const FamilyMember& m) {
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic:
      return {cplx(0.0), -2.0 * m.a};
    case FamilyKind::QuadraticC: {
      cplx d = std::sqrt(1.0 - 4.0 * m.a);
      return {(1.0 + d) / 2.0, (1.0 - d) / 2.0};
    }
    case FamilyKind::ExponentialLambda: {
      cplx eps = std::sqrt(2.0 * (1.0 - std::exp(1.0) * m.a));
      auto polish = [&](cplx z) {
        for (int i = 0; i < 80; ++i) {
          cplx g = eval(m, z) - z;
          if (std::abs(g) < 1e-14) break;
          z -= g / (deriv(m, z) - 1.0);
        }
        return z;
      };
      return {polish(1.0 + eps), polish(1.0 - eps)};
    }
  }
  fail(errc::usage, "unknown family kind");
}

Circle default_pair_disk(const FamilyMember& m) {
  auto [p1, p2] = pair_estimate(m);
  cplx center = (p1 + p2) / 2.0;
  double radius = std::max(0.25, 2.2 * std::abs(p1 - p2) / 2.0);
  // keep the 2 pi i k fixed-point branches of the exponential outside
  if (m.id.kind == FamilyKind::ExponentialLambda) radius = std::min(radius, 2.5);
  return Circle{center, radius, 256};
}

namespace {

PhaseB finish(PhaseB out, const PhaseOptions& opts) {
  require(out.value.real() < 0.0, errc::sector_violation,
          "phase has nonnegative real part: parameter outside the admissible sector");
  out.mu_check = std::exp(-2.0 * kPi * kI / out.value);
  require(std::abs(out.mu_check - out.mu_direct) <= opts.mu_tol, errc::invariant_violation,
          "multiplier identity exp(-2 pi i / B) = mu failed beyond tolerance");
  return out;
}

PhaseB route1_at_inset(const FamilyMember& m, cplx fp_att, cplx fp_rep, cplx mu_rep,
                       const PhaseOptions& opts, double inset) {
  cplx s = singular_value(m);
  DouadyChart A = make_douady(m, fp_att);
  DouadyChart R = make_douady(m, fp_rep);
  cplx gate_mid = (fp_att + fp_rep) / 2.0;

  // incoming normalization phi_in(s) = 0, on the sheet anchored at A's anchor
  Cursor ca{A.lin.branch_anchor, douady_anchor_raw(A)};
  Cursor pin = ca;
  pin.walk(A, s);
  cplx raw_in_s = pin.raw;

  // The two charts overlap only on orbits the attracting point captures. In
  // the outgoing coordinate the captured set is a band of bounded height
  // around the gate, repeating with the sheet period; above and below it the
  // inversion orbits escape or the incoming chart diverges, which is what the
  // probe detects. All fit rings must sit inside the measured band.
  cplx zeta_mid = douady_eval(R, gate_mid);
  double x0 = zeta_mid.real(), y_mid = zeta_mid.imag();
  auto captured = [&](double y) {
    try {
      koenigs_eval(A.lin, douady_inverse_raw(R, cplx(x0, y)));
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  require(captured(y_mid), errc::horn_domain_miss, "gate midpoint is not in both charts");
  double period = std::abs(R.lattice.imag());
  auto edge = [&](double dir) {
    double step = period / 24.0;
    double in = y_mid, out = 0.0;
    bool found = false;
    for (int i = 1; i <= 30 && !found; ++i) {
      double y = y_mid + dir * i * step;
      if (captured(y))
        in = y;
      else {
        out = y;
        found = true;
      }
    }
    require(found, errc::horn_domain_miss, "no band edge within one sheet period");
    for (int i = 0; i < 30; ++i) {
      double mid = (in + out) / 2.0;
      (captured(mid) ? in : out) = mid;
    }
    return (in + out) / 2.0;
  };
  double y_hi = edge(+1.0), y_lo = edge(-1.0);
  double w = y_hi - y_lo, y_c = (y_lo + y_hi) / 2.0;
  require(w > 1e-3 * period, errc::horn_domain_miss, "captured band too thin for ring fits");

  // interior verticals stay inside the band; short hops keep the incoming
  // continuation on its sheet
  auto level = [&](double y_from, double y_to) {
    int n = std::max(1, int(std::ceil(std::abs(y_to - y_from) / (0.05 * w))));
    for (int t = 1; t <= n; ++t)
      ca.walk(A, douady_inverse_raw(R, cplx(x0, y_from + (y_to - y_from) * t / n)));
  };

  int k = std::max(2, opts.samples);
  double residual = 0.0;
  auto ring_mean = [&](double height) {
    cplx sum = 0.0;
    std::vector<cplx> dev(k);
    for (int j = 0; j < k; ++j) {
      cplx zeta = cplx(x0 + double(j) / k, height);
      ca.walk(A, douady_inverse_raw(R, zeta));
      dev[j] = (ca.raw - raw_in_s) - zeta;
      sum += dev[j];
    }
    cplx mean = sum / double(k);
    for (const cplx& d : dev) residual = std::max(residual, std::abs(d - mean));
    ca.walk(A, douady_inverse_raw(R, cplx(x0, height)));  // back to the column
    return mean;
  };

  // Ring averaging cancels the periodic part of the chart difference to its
  // k-th Fourier mode, and the mean of a ring does not depend on its height,
  // so the second difference alpha below is zero in exact arithmetic. The
  // deck translation of the outgoing chart is a full lattice unit exactly, so
  // under the horn normalization B is minus the lattice plus alpha: alpha
  // meters walk noise, and any sheet slip in a continuation shifts it by a
  // lattice unit and blows the multiplier identity checked in finish().
  double y_a = y_c - inset * w, y_b = y_c + inset * w;
  ca.walk(A, gate_mid);
  level(y_mid, y_a);
  cplx c_a = ring_mean(y_a);
  level(y_a, y_b);
  cplx c_b = ring_mean(y_b);
  require(std::abs(c_a - c_b) <= opts.consistency_tol, errc::invariant_violation,
          "horn constant is not stable between fit heights");
  level(y_b, y_c);
  cplx c_mid = ring_mean(y_c);
  cplx alpha = (c_a + c_b) / 2.0 - c_mid;

  PhaseB out;
  out.route = 1;
  out.mu_direct = mu_rep;
  out.horn_residual = residual;
  out.value = -R.lattice + alpha;
  return finish(out, opts);
}

// Ring placement can straddle a zero of the evaluated linearizer (the fit
// rings then disagree or the multiplier identity breaks); nudging the offsets
// moves the rings off the zero.
template <class Attempt>
PhaseB with_inset_ladder(const PhaseOptions& opts, Attempt&& attempt) {
  const double scales[] = {1.0, 1.6, 0.7, 2.3};
  for (size_t i = 0;; ++i) {
    try {
      return attempt(std::min(0.45, opts.horn_height * scales[i]));
    } catch (const Error& e) {
      bool retryable = e.code() == errc::invariant_violation || e.code() == errc::branch_loss ||
                       e.code() == errc::no_convergence || e.code() == errc::horn_domain_miss;
      if (!retryable || i + 1 >= std::size(scales)) throw;
    }
  }
}

PhaseB route1(const FamilyMember& m, cplx fp_att, cplx fp_rep, cplx mu_rep,
              const PhaseOptions& opts) {
  return with_inset_ladder(opts, [&](double inset) {
    return route1_at_inset(m, fp_att, fp_rep, mu_rep, opts, inset);
  });
}

// The mirror of the one-sided route for parameters whose companion point is
// not attracting: points are constructed by inversion of the companion chart
// (so their coordinate is exact on one coherent sheet) and the distinguished
// chart is evaluated at them independently. With two repelling points the
// overlap is a gate channel cut by preimage watersheds, not a full annulus,
// so ring means have no Laurent interpretation here. The meter instead uses
// translation invariance: the discrepancy between the two Abel coordinates
// repeats exactly along an orbit, so its spread over one is a pure machinery
// residual and its half-orbit difference is an analytically zero alpha.
PhaseB route2(const FamilyMember& m, const FixedPair& pair, const PhaseOptions& opts) {
  require(std::abs(pair.mu1) > 1.0, errc::horn_domain_miss,
          "distinguished fixed point must repel for the outgoing chart");
  DouadyChart R1 = make_douady(m, pair.z1);
  require((-R1.lattice).real() < 0.0, errc::sector_violation,
          "phase has nonnegative real part: parameter outside the admissible sector");
  DouadyChart R2 = make_douady(m, pair.z2);

  // The distinguished chart evaluates by preimage orbits, which retreat to
  // whichever fixed point is closer, so its stable zone is the z1 side of the
  // gate. Seed with the tangent estimate of a z1-side point in the companion
  // coordinate, then scan a window of constructed points for the closest ones.
  cplx z_target = pair.z1 + 0.35 * (pair.z2 - pair.z1);
  cplx seed = std::log(z_target - pair.z2) / R2.log_mu;
  std::vector<std::pair<double, cplx>> cand;
  for (double dt = -2.0; dt <= 2.0; dt += 0.25) {
    for (double dd = -10.0; dd <= 10.0; dd += 0.25) {
      cplx zeta = seed + cplx(dt, dd);
      try {
        cand.emplace_back(std::abs(douady_inverse_raw(R2, zeta) - z_target), zeta);
      } catch (const Error&) {
      }
    }
  }
  std::sort(cand.begin(), cand.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const char* last_miss = "no constructed point in the stable gate zone";
  for (size_t i = 0; i < cand.size() && i < 12; ++i) {
    cplx base = cand[i].second;
    std::vector<cplx> dev;
    cplx snap_ref{0.0};
    for (int n = -8; n <= 8; ++n) {
      cplx zeta = base + double(n);
      try {
        cplx raw_dev = douady_eval(R1, douady_inverse_raw(R2, zeta)) - zeta;
        if (dev.empty()) snap_ref = raw_dev;
        dev.push_back(snap(R1, raw_dev, snap_ref));
      } catch (const Error&) {
      }
    }
    if (dev.size() < 5) {
      last_miss = "too few evaluable orbit translates in the gate";
      continue;
    }
    cplx mean = 0.0, even = 0.0, odd = 0.0;
    for (const cplx& d : dev) mean += d;
    mean /= double(dev.size());
    double residual = 0.0;
    for (size_t j = 0; j < dev.size(); ++j) {
      residual = std::max(residual, std::abs(dev[j] - mean));
      (j % 2 == 0 ? even : odd) += dev[j] / double(j % 2 == 0 ? (dev.size() + 1) / 2
                                                              : dev.size() / 2);
    }
    if (residual > opts.consistency_tol) {
      last_miss = "horn discrepancy is not stable along the gate orbit";
      continue;
    }
    cplx alpha = (even - odd) / 2.0;

    PhaseB out;
    out.route = 2;
    out.mu_direct = pair.mu1;
    out.horn_residual = residual;
    out.value = -R1.lattice + alpha;
    return finish(out, opts);
  }
  fail(errc::horn_domain_miss, last_miss);
}

}  // namespace

PhaseB phase_B(const FamilyMember& m, const PhaseOptions& opts) {
  Circle disk = opts.pair_disk.radius > 0.0 ? opts.pair_disk : default_pair_disk(m);
  FixedPair pair = find_pair(m, disk, {.require_distinct = true});
  bool att1 = std::abs(pair.mu1) < 1.0;
  bool att2 = std::abs(pair.mu2) < 1.0;
  if (att1 != att2) {
    cplx fp_att = att1 ? pair.z1 : pair.z2;
    cplx fp_rep = att1 ? pair.z2 : pair.z1;
    cplx mu_rep = att1 ? pair.mu2 : pair.mu1;
    if (std::log(mu_rep).imag() > 0.0) return route1(m, fp_att, fp_rep, mu_rep, opts);
  }
  return route2(m, pair, opts);
}

}  // namespace petal
