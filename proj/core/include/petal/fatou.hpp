#pragma once
#include <optional>

#include "petal/contour.hpp"
#include "petal/family.hpp"
#include "petal/fixed_points.hpp"
#include "petal/types.hpp"

namespace petal {

// Low-order data of a map in normalized parabolic form
// F(w) = w + w^2 + a3 w^3 + a4 w^4 + O(w^5).
// After transport by I(w) = -1/w the map becomes z + 1 + a_star/z + b/z^2 + ...
// and the Abel coordinate has the tail phi(z) = z - a_star Log z + c + q/z.
struct GermSeries {
  cplx a3{0.0}, a4{0.0};
  cplx a_star() const { return 1.0 - a3; }
  cplx b() const { return 1.0 - 2.0 * a3 + a4; }
  cplx q() const {
    cplx as = a_star();
    return b() - as * as + as / 2.0;
  }
};

// A map in normalized parabolic coordinates together with an inverse branch
// (used by the outgoing side) and its germ data. fmw returns f(w) - w without
// subtractive cancellation; the Abel estimator needs it because near the
// fixed point the deviation w^2 + ... drowns in rounding if formed naively.
// Empty fmw falls back to the naive difference.
struct ParabolicMap {
  CFunc f;
  CFunc finv;  // branch fixing 0 that maps the repelling petal into itself
  CFunc fmw;
  GermSeries series;
};

ParabolicMap mobius_germ();                       // w/(1-w); exact coordinate -1/w
ParabolicMap basic_germ(cplx a3, cplx a4 = 0.0);  // w + w^2 + a3 w^3 + a4 w^4
ParabolicMap germ_of(const FamilyMember& m);      // family at parabolic base, normalized

// Normalized-coordinate image of the singular value of the family at its base.
cplx normalized_singular(const FamilyMember& m);

// a* = 1 - a3 for f = w + w^2 + a3 w^3 + O(w^4); first two coefficients must
// be (1, 1) within 1e-12.
cplx a_star_coefficient(cplx c1, cplx c2, cplx a3);

struct FatouOptions {
  double L = 10.0;           // petal scale in the -1/w plane
  double tol = 1e-10;        // Abel-coordinate convergence target
  long max_iter = 1000000;   // estimator iteration cap
  long entry_budget = 100000;  // orbit steps allowed to reach the petal
};

struct FatouChart {
  ParabolicMap map;
  bool incoming{true};
  FatouOptions opts;
  cplx offset{0.0};
};

FatouChart make_incoming(ParabolicMap map, FatouOptions opts = {});
FatouChart make_outgoing(ParabolicMap map, FatouOptions opts = {});

// phi(w) including the chart offset. The orbit is extended into the petal
// when w itself satisfies only the basin condition, so the chart covers the
// whole attracting (resp. repelling) basin slice reachable by iteration.
cplx fatou_eval(const FatouChart& chart, cplx w);

// Inverse of an outgoing chart: w with phi(w) = zeta (asymptotic seed, then
// Newton with the tail derivative 1/w^2 + a*/w).
cplx fatou_inverse(const FatouChart& chart, cplx zeta);

struct HornFit {
  cplx c{0.0};             // fitted constant of H(z) - z before shifting
  cplx offset_in{0.0};     // resulting chart offsets
  cplx offset_out{0.0};
  double horn_residual{0.0};  // max |H(z) - z - c| over the samples
  double h{0.0};              // fit height actually used
  double consistency{0.0};    // |c(h) - c(2h)|
};

// Samples the lifted horn map H = phi_in o psi_out on two rings of k points
// at heights h and 2h, fits the additive constant, and shifts the chart
// offsets so the constant is 0 and (when given) phi_in(singular_w) = 0.
// Sample real parts run over j/k, j = 0..k-1, so a ring mean cancels the
// first k-1 Fourier modes of the periodic part exactly.
HornFit horn_normalize(FatouChart& incoming, FatouChart& outgoing,
                       std::optional<cplx> singular_w = std::nullopt, double h = 0.0,
                       int k_samples = 8, double consistency_tol = 1e-4);

}  // namespace petal
