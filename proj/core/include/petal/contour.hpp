#pragma once
#include <functional>

#include "petal/family.hpp"
#include "petal/types.hpp"

namespace petal {

using CFunc = std::function<cplx(cplx)>;

// Equispaced nodes on a circle. Trapezoid sums over such nodes are spectrally
// accurate for integrands analytic in an annulus around the circle, so node
// doubling converges extremely fast and doubles can reuse existing samples.
struct Circle {
  cplx center{0.0};
  double radius{1.0};
  int nodes{256};  // >= 16 and a power of two (keeps doubling aligned)
};

struct ContourOptions {
  double floor = 1e-12;      // |denominator| lower bound at nodes
  double gate = 1e-11;       // node-doubling convergence gate
  int max_nodes = 4096;      // doubling cap
  double winding_tol = 0.01; // max distance of winding integral from an integer
};

// (1/2pi i) contour integral of g over C at the circle's fixed node count.
cplx integrate_circle(const CFunc& g, const Circle& C);

// Same integral, doubling nodes from C.nodes until successive values differ
// by less than opts.gate or opts.max_nodes is reached; returns the last value.
cplx integrate_adaptive(const CFunc& g, const Circle& C, const ContourOptions& opts = {});

// Number of zeros of f inside C by the argument principle. fprime may be
// empty; central differences with step radius/1e6 are used in that case.
int count_zeros(const CFunc& f, const CFunc& fprime, const Circle& C,
                const ContourOptions& opts = {});

// Position of the unique zero of f inside C: (1/2pi i) * integral of w f'/f.
// Requires count_zeros == 1.
cplx locate_single_zero(const CFunc& f, const CFunc& fprime, const Circle& C,
                        const ContourOptions& opts = {});

// Multiplicity-weighted power sum of the fixed points of m inside C:
// (1/2pi i) * integral of w^p (f'(w)-1)/(f(w)-w) dw, p = 1 or 2.
cplx fixed_point_power_sum(const FamilyMember& m, const Circle& C, int p,
                           const ContourOptions& opts = {});
cplx sum_fixed_points(const FamilyMember& m, const Circle& C, const ContourOptions& opts = {});

// Sampled sufficient Rouche condition: max |f-g| < min |g| over the nodes.
// Returns false (rather than throwing) on non-finite samples.
bool rouche_check(const CFunc& f, const CFunc& g, const Circle& C);

// Central-difference derivative used when no analytic derivative is supplied.
CFunc fd_derivative(CFunc f, double step);

}  // namespace petal
