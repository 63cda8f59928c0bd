#include "petal/family.hpp"

#include <cmath>

namespace petal {

namespace {

cplx mult_coeff(const FamilyMember& m) {
  // 1 + 2 l^n
  cplx ln = std::pow(m.a, cplx(double(m.id.n)));
  if (m.id.n == 1) ln = m.a;  // avoid pow's tiny noise on the common path
  return 1.0 + 2.0 * ln;
}

void check_exp_guard(cplx z, double guard) {
  require(finite(z), errc::non_finite_sample, "non-finite argument to exponential map");
  require(z.real() <= guard, errc::overflow_guard,
          "Re z = " + std::to_string(z.real()) + " exceeds exponential guard " +
              std::to_string(guard));
}

}  // namespace

cplx eval(const FamilyMember& m, cplx z, double exp_re_guard) {
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic:
      return mult_coeff(m) * z + z * z;
    case FamilyKind::QuadraticC:
      return z * z + m.a;
    case FamilyKind::ExponentialLambda:
      check_exp_guard(z, exp_re_guard);
      return m.a * std::exp(z);
  }
  fail(errc::usage, "unknown family kind");
}

cplx deriv(const FamilyMember& m, cplx z, double exp_re_guard) {
  return deriv_k(m, z, 1, exp_re_guard);
}

cplx deriv_k(const FamilyMember& m, cplx z, int k, double exp_re_guard) {
  require(k >= 1 && k <= 4, errc::usage, "derivative order must be 1..4");
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic:
      if (k == 1) return mult_coeff(m) + 2.0 * z;
      return k == 2 ? cplx(2.0) : cplx(0.0);
    case FamilyKind::QuadraticC:
      if (k == 1) return 2.0 * z;
      return k == 2 ? cplx(2.0) : cplx(0.0);
    case FamilyKind::ExponentialLambda:
      check_exp_guard(z, exp_re_guard);
      return m.a * std::exp(z);
  }
  fail(errc::usage, "unknown family kind");
}

cplx singular_value(const FamilyMember& m) {
  switch (m.id.kind) {
    case FamilyKind::NormalizedParabolic: {
      // critical point -mu/2, critical value -mu^2/4 with mu = 1+2l^n
      cplx mu = mult_coeff(m);
      return -mu * mu / 4.0;
    }
    case FamilyKind::QuadraticC:
      return m.a;  // critical value f(0) = c
    case FamilyKind::ExponentialLambda:
      return 0.0;  // asymptotic value
  }
  fail(errc::usage, "unknown family kind");
}

cplx base_param(const FamilyId& id) {
  switch (id.kind) {
    case FamilyKind::NormalizedParabolic:
      return 0.0;
    case FamilyKind::QuadraticC:
      return 0.25;
    case FamilyKind::ExponentialLambda:
      return std::exp(-1.0);
  }
  fail(errc::usage, "unknown family kind");
}

cplx base_fixed_point(const FamilyId& id) {
  switch (id.kind) {
    case FamilyKind::NormalizedParabolic:
      return 0.0;
    case FamilyKind::QuadraticC:
      return 0.5;
    case FamilyKind::ExponentialLambda:
      return 1.0;
  }
  fail(errc::usage, "unknown family kind");
}

std::string family_name(const FamilyId& id) {
  switch (id.kind) {
    case FamilyKind::NormalizedParabolic:
      return "normalized";
    case FamilyKind::QuadraticC:
      return "quadratic";
    case FamilyKind::ExponentialLambda:
      return "exponential";
  }
  fail(errc::usage, "unknown family kind");
}

FamilyId family_from_name(const std::string& name, int n) {
  if (name == "normalized") {
    require(n >= 1, errc::usage, "normalized family needs n >= 1");
    return {FamilyKind::NormalizedParabolic, n};
  }
  if (name == "quadratic") return {FamilyKind::QuadraticC, 1};
  if (name == "exponential") return {FamilyKind::ExponentialLambda, 1};
  fail(errc::usage, "unknown family name: " + name);
}

const char* errc_name(errc c) {
  switch (c) {
    case errc::overflow_guard: return "OverflowGuard";
    case errc::non_finite_sample: return "NonFiniteSample";
    case errc::zero_on_contour: return "ZeroOnContour";
    case errc::non_integer_winding: return "NonIntegerWinding";
    case errc::wrong_zero_count: return "WrongZeroCount";
    case errc::coalesced_pair: return "CoalescedPair";
    case errc::sector_violation: return "SectorViolation";
    case errc::parabolic_input: return "ParabolicInput";
    case errc::degenerate_quadratic_term: return "DegenerateQuadraticTerm";
    case errc::case_two_cover: return "CaseTwoCover";
    case errc::not_a_fixed_point: return "NotAFixedPoint";
    case errc::not_in_petal: return "NotInPetal";
    case errc::no_convergence: return "NoConvergence";
    case errc::branch_loss: return "BranchLoss";
    case errc::indifferent_multiplier: return "IndifferentMultiplier";
    case errc::horn_domain_miss: return "HornDomainMiss";
    case errc::not_normalized: return "NotNormalized";
    case errc::non_escaping: return "NonEscaping";
    case errc::comb_not_fixed: return "CombNotFixed";
    case errc::singular_hit: return "SingularHit";
    case errc::ray_lost: return "RayLost";
    case errc::no_unit_pairs: return "NoUnitPairs";
    case errc::diverging: return "Diverging";
    case errc::no_zero_in_trust_region: return "NoZeroInTrustRegion";
    case errc::multiple_zeros: return "MultipleZeros";
    case errc::continuation_stalled: return "ContinuationStalled";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::usage: return "Usage";
  }
  return "UnknownError";
}

}  // namespace petal
