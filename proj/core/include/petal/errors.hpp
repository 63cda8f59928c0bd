#pragma once
#include <stdexcept>
#include <string>

namespace petal {

// Every failure mode gets a stable code so callers (and the CLI's JSON
// diagnostics) can switch on it instead of parsing message text.
enum class errc {
  overflow_guard,
  non_finite_sample,
  zero_on_contour,
  non_integer_winding,
  wrong_zero_count,
  coalesced_pair,
  sector_violation,
  parabolic_input,
  degenerate_quadratic_term,
  case_two_cover,
  not_a_fixed_point,
  not_in_petal,
  no_convergence,
  branch_loss,
  indifferent_multiplier,
  horn_domain_miss,
  not_normalized,
  non_escaping,
  comb_not_fixed,
  singular_hit,
  ray_lost,
  no_unit_pairs,
  diverging,
  no_zero_in_trust_region,
  multiple_zeros,
  continuation_stalled,
  too_few_samples,
  invariant_violation,
  usage,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
  Error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace petal
