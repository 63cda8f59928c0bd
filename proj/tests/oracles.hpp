#pragma once
// Independent reference implementations for cross-checking the library.
// Everything here is deliberately written from scratch against the defining
// formulas (escape-rate Green's function, Abel tail of the tower model) and
// shares no code with core/ beyond std::complex.
#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracle {

using cplx = std::complex<double>;

// Green's function of z^2 + c by the escape-rate limit with the standard
// tail correction G = 2^{-N} log|z_N| + sum_{k>=N} 2^{-k-1} log|1 + c/z_k^2|.
inline double green(cplx c, cplx z) {
  double g = 0.0;
  double w = 1.0;
  for (int k = 0; k < 4000; ++k) {
    double az = std::abs(z);
    if (az > 1e140) {
      g += w * std::log(az);
      return g;
    }
    if (az > 4.0 && std::abs(c) / (az * az) < 0.5) {
      // convergent tail from here
      g += w * std::log(az);
      double acc = 0.0, ww = w / 2.0;
      for (int j = 0; j < 60; ++j) {
        acc += ww * std::log(std::abs(1.0 + c / (z * z)));
        z = z * z + c;
        ww /= 2.0;
        if (std::abs(z) > 1e140) break;
      }
      return g + acc;
    }
    z = z * z + c;
    w /= 2.0;
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
      throw std::runtime_error("green oracle overflow");
  }
  throw std::runtime_error("green oracle: orbit did not escape");
}

// Real c > 1/4 whose critical value sits at Green potential 2^(t-1): the
// angle-zero parameter ray of the quadratic family, by plain bisection.
inline double quad_ray_param(double t) {
  double target = std::pow(2.0, t - 1.0);
  double lo = 0.25 + 1e-15, hi = 8.0;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2.0;
    double g;
    try {
      g = green(mid, mid);
    } catch (const std::exception&) {
      // non-escaping means below the ray: raise
      lo = mid;
      continue;
    }
    (g < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

// Abel coordinate of the tower model e^x - 1 on the positive real axis,
// by pulling back into the repelling petal and applying the transported
// tail z - a* log z + q/z at z = -2/x (germ (e^{2w}-1)/2 = w + w^2 +
// (2/3) w^3 + (1/3) w^4: a* = 1/3, q = 1/18). Anchored so phi(5) = 5,
// matching the tracer's potential normalization.
inline double model_phi_raw(double x, double x_stop) {
  long n = 0;
  while (x > x_stop) {
    x = std::log1p(x);
    ++n;
    if (n > 100000000) throw std::runtime_error("model oracle: pullback stalled");
  }
  cplx z = cplx(-2.0 / x, 0.0);
  cplx tail = z - std::log(z) / 3.0 + (1.0 / 18.0) / z;
  return tail.real() + double(n);
}

inline double model_phi(double x) {
  static const double off = 5.0 - model_phi_raw(5.0, 3e-5);
  return model_phi_raw(x, 3e-5) + off;
}

// Potential of the singular value 0 on the real (constant address 0) ray of
// lambda e^z, lambda > 1/e: run the orbit forward until the conjugacy tail
// to the model is converged, then read the model potential there.
inline double exp_potential_of_zero(double lambda) {
  double x = 0.0;
  long n = 0;
  while (x < 40.0) {
    x = lambda * std::exp(x);
    ++n;
    if (n > 100000) throw std::runtime_error("exp oracle: orbit did not escape");
  }
  return model_phi(x + std::log(lambda)) - double(n);
}

// Real lambda > 1/e with the singular value at potential t, by bisection.
inline double exp_ray_param(double t) {
  double lo = 1.0 / std::exp(1.0) + 1e-15, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2.0;
    (exp_potential_of_zero(mid) < t ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace oracle
