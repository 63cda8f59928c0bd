#pragma once
#include "petal/contour.hpp"
#include "petal/family.hpp"
#include "petal/types.hpp"

namespace petal {

// Bifurcating fixed-point pair inside a disk, Newton-polished from contour
// power sums. Ordering: z1 is the point continued from the base fixed point
// (identically 0 for NormalizedParabolic); for the other families the pair
// has no single-valued continuation around the base, so z1 is fixed by the
// principal determination: larger Re, ties broken by larger Im.
struct FixedPair {
  cplx z1{0.0}, z2{0.0};
  cplx mu1{0.0}, mu2{0.0};
  Circle disk;
};

struct LambdaCoordinate {
  cplx lambda{0.0};
  int n{1};
  int branch{0};  // which n-th root branch landed in the sector
};

// w = alpha*z + beta
struct AffineMap {
  cplx alpha{1.0}, beta{0.0};
  cplx operator()(cplx z) const { return alpha * z + beta; }
  cplx inverse(cplx w) const { return (w - beta) / alpha; }
};

struct PairOptions {
  bool require_distinct = false;
  double polish_tol = 1e-13;
  int polish_max_iter = 50;
  ContourOptions contour;
};

FixedPair find_pair(const FamilyMember& m, const Circle& disk, const PairOptions& opts = {});

cplx multiplier_at(const FamilyMember& m, cplx z, double fp_tol = 1e-8);

// lambda with 1 + 2 lambda^n = mu1, branch chosen so arg(lambda) lies in
// 2*pi*(theta1, theta2); requires n*(theta2-theta1) < 1 so at most one branch
// can qualify.
LambdaCoordinate lambda_coordinate(const FamilyMember& m, const FixedPair& pair, int n,
                                   double theta1, double theta2);

// Affine change of variable sending z1 to 0 and scaling so the conjugated map
// is (mu1) w + w^2 + O(w^3).
AffineMap normalize_to_parabolic_form(const FamilyMember& m, const FixedPair& pair);

// Continuation of the pair around a loop in parameter space; true means the
// two fixed points swap (the pair lives on a degree-2 cover of the parameter
// disk and has no single-valued ordering there).
bool pair_swaps_on_loop(const FamilyId& id, cplx loop_center, double loop_radius,
                        const Circle& disk, int steps = 64);

// Throws CaseTwoCover when the loop swaps the pair. Callers that need the
// fixed points individually holomorphic across a parameter region run this
// once on its boundary before trusting any pointwise ordering.
void require_single_cover(const FamilyId& id, cplx loop_center, double loop_radius,
                          const Circle& disk, int steps = 64);

}  // namespace petal
