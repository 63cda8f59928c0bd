#pragma once
#include <complex>

namespace petal {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kI{0.0, 1.0};

// log with the branch cut on the positive real axis, arg in (0, 2*pi).
// Needed for outgoing Fatou coordinates where orbits straddle the negative
// axis and the principal cut would tear the chart.
inline cplx log_upper(cplx z) {
  cplx w = std::log(z);
  if (w.imag() <= 0.0) w += cplx(0.0, 2.0 * kPi);
  return w;
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace petal
