#pragma once
#include <vector>

#include "petal/fatou.hpp"
#include "petal/fixed_points.hpp"
#include "petal/linearizer.hpp"

namespace petal {

// Perturbed translation chart at one fixed point of the bifurcating pair:
// phi(z) = Log kappa(z) / Log mu + offset, which conjugates f to z -> z+1
// wherever the linearizer converges. Log kappa is multivalued; values are
// continued along explicit paths and snapped to the sheet lattice
// 2 pi i / Log mu, so a chart instance carries a definite branch everywhere
// it has been walked to.
struct DouadyChart {
  LinearizerChart lin;
  cplx log_mu{0.0};
  cplx lattice{0.0};  // 2 pi i / log_mu
  cplx offset{0.0};
};

DouadyChart make_douady(const FamilyMember& m, cplx fp);

// phi continued from the linearizer anchor along the straight segment to z
// (with recursive bisection and lattice snapping). offset included.
cplx douady_eval(const DouadyChart& D, cplx z);

// phi continued along the polyline start -> ... -> z given its raw
// (offset-free) value at the start point. Returns the raw value at z.
cplx douady_continue(const DouadyChart& D, cplx start, cplx raw_start,
                     const std::vector<cplx>& waypoints, cplx z);

// Raw value at the anchor's sheet for the anchor itself.
cplx douady_anchor_raw(const DouadyChart& D);

// Point with phi(w) = zeta (raw, offset excluded) for a repelling chart:
// exact inversion through the linearizer series plus forward orbit.
cplx douady_inverse_raw(const DouadyChart& D, cplx zeta);

// One-call form: chart at the attracting (incoming) or repelling (outgoing)
// fixed point of the pair in the given disk, evaluated at z, offset 0.
cplx douady_fatou(const FamilyMember& m, bool outgoing, cplx z,
                  Circle disk = {{0.0, 0.0}, 0.0, 256});

struct PhaseOptions {
  Circle pair_disk{{0.0, 0.0}, 0.0, 256};  // radius 0 -> family default
  double horn_height = 0.15;   // ring offset from band center as a fraction of band width
  int samples = 8;
  double consistency_tol = 1e-4;
  double mu_tol = 1e-3;
};

struct PhaseB {
  cplx value{0.0};
  cplx mu_check{0.0};   // e^{-2 pi i / value}
  cplx mu_direct{0.0};  // multiplier of the distinguished fixed point
  double horn_residual{0.0};
  int route{0};  // 1: two-chart ring fit, 2: two repelling charts, orbit meter
};

// B(a) = phi_out(s(a)) with phi_in(s(a)) = 0 under horn normalization.
// Route 1 (one attracting and one repelling point): both charts are built
// and the horn constant is fitted on rings inside the captured band of the
// outgoing coordinate. Route 2 (both points repelling, e.g. parameters
// reached by real rays from outside): points are constructed in the
// companion chart and the distinguished chart is read along an orbit of
// translates, whose exact periodicity replaces the ring fit.
PhaseB phase_B(const FamilyMember& m, const PhaseOptions& opts = {});

// Closed-form / Newton estimate of the bifurcating pair (plumbing used to
// choose disks; the certified values still come from find_pair).
std::pair<cplx, cplx> pair_estimate(const FamilyMember& m);
Circle default_pair_disk(const FamilyMember& m);

}  // namespace petal
