#pragma once
#include <string>

#include "petal/errors.hpp"
#include "petal/types.hpp"

namespace petal {

// Closed catalog of one-parameter families. Keeping the catalog closed (no
// user-supplied closures) lets everything downstream rely on closed-form
// derivatives and exact singular values.
enum class FamilyKind {
  NormalizedParabolic,  // f_l(z) = (1+2l^n) z + z^2, base l0 = 0, z0 = 0
  QuadraticC,           // f_c(z) = z^2 + c,          base c0 = 1/4, z0 = 1/2
  ExponentialLambda,    // f_l(z) = l e^z,            base l0 = 1/e, z0 = 1
};

struct FamilyId {
  FamilyKind kind{FamilyKind::NormalizedParabolic};
  int n{1};  // degree of the multiplier cover; only NormalizedParabolic uses it
};

struct FamilyMember {
  FamilyId id;
  cplx a{0.0};
};

inline FamilyMember member(FamilyKind k, cplx a, int n = 1) { return {{k, n}, a}; }

// Default magnitude bound for the exponential family: e^700 is near the top
// of double range, so anything past it is treated as a guard trip, not inf.
inline constexpr double kExpReGuard = 700.0;

cplx eval(const FamilyMember& m, cplx z, double exp_re_guard = kExpReGuard);
cplx deriv(const FamilyMember& m, cplx z, double exp_re_guard = kExpReGuard);
// k-th z-derivative, 1 <= k <= 4, closed form for every catalog member.
cplx deriv_k(const FamilyMember& m, cplx z, int k, double exp_re_guard = kExpReGuard);

cplx singular_value(const FamilyMember& m);

// Parabolic base of the family: parameter a0 and fixed point z0 with
// f_{a0}(z0) = z0, f'_{a0}(z0) = 1.
cplx base_param(const FamilyId& id);
cplx base_fixed_point(const FamilyId& id);

std::string family_name(const FamilyId& id);  // "normalized" | "quadratic" | "exponential"
FamilyId family_from_name(const std::string& name, int n = 1);

}  // namespace petal
