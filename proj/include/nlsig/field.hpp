#pragma once
// Field-side structure: the Gaussian mass spectrum rho, the massive
// Pauli-Jordan correction it is paired with, and the resulting commutator
// decomposition into a rescaled light-cone delta plus a smooth interior
// term supported strictly inside the cone.
//
// Conventions: signature (-,+,+,+), sigma = -dt^2 + dx^2, and the interior
// step Theta(-sigma) evaluates to 0 at sigma = 0 (the cone itself belongs
// to the delta term).

#include <cmath>
#include <functional>

#include "integrate.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace nlsig {

// rho(mu^2) = ell^2 e^{-alpha ell^2 mu^2}
inline double rho(double mu_sq, const SpectralDensity& sd) {
  return sd.ell * sd.ell * std::exp(-sd.alpha * sd.ell * sd.ell * mu_sq);
}

// integral of rho over mu^2 from 0 to infinity
inline double rho_normalization(const SpectralDensity& sd) {
  return 1.0 / sd.alpha;
}

// Mass-mu correction to the massless Pauli-Jordan function inside the
// light cone: -(mu / (4 pi sqrt(-sigma))) J1(mu sqrt(-sigma)) for
// sigma < 0, and 0 on and outside the cone.  Smooth at the cone from
// inside: the sigma -> 0^- limit is -mu^2 / (8 pi).
inline double massive_pj_correction(double sigma, double mu) {
  if (sigma >= 0.0) return 0.0;
  const double r = std::sqrt(-sigma);
  const double x = mu * r;
  if (x < 1e-4) {
    // J1(x)/x = 1/2 - x^2/16 + O(x^4), avoids 0/0 at mu = 0
    return -(mu * mu / (4.0 * detail::kPi)) * (0.5 - x * x / 16.0);
  }
  return -(mu / (4.0 * detail::kPi * r)) * bessel_j1(x);
}

// Interior commutator term: integral of rho(mu^2) massive_pj_correction
// over mu^2.  For the Gaussian spectrum this is closed-form:
//   -(1 / (8 pi alpha^2 ell^2)) e^{sigma / (4 alpha ell^2)},  sigma < 0,
// via the Hankel-transform identity
//   int_0^inf x^2 e^{-p x^2} J1(c x) dx = (c / (4 p^2)) e^{-c^2 / (4 p)}
// with x = mu, p = alpha ell^2, c = sqrt(-sigma).
inline double nonlocal_interior(double sigma, const SpectralDensity& sd) {
  if (sigma >= 0.0) return 0.0;
  const double al2 = sd.alpha * sd.ell * sd.ell;
  return -std::exp(sigma / (4.0 * al2)) /
         (8.0 * detail::kPi * sd.alpha * al2);
}

// Coefficient of the light-cone delta(sigma)/(2 pi) after smearing:
// the bare cone plus the rho-weighted mass integral.
inline double cone_weight(const SpectralDensity& sd) {
  return 1.0 + 1.0 / sd.alpha;
}

struct CommutatorDecomposition {
  double cone_weight = 2.0;  // multiplies -delta(sigma) / (2 pi)
  std::function<double(double)> interior;  // smooth term, vanishes sigma >= 0
};

inline CommutatorDecomposition commutator_decomposition(
    const SpectralDensity& sd) {
  validate(sd);
  return {cone_weight(sd),
          [sd](double sigma) { return nonlocal_interior(sigma, sd); }};
}

// Pairing of the interior term against a test function f(sigma):
//   int_{-inf}^0 f(sigma) nonlocal_interior(sigma) dsigma.
// Substituting sigma = -4 alpha ell^2 v turns it into
//   -(1 / (2 pi alpha)) int_0^inf f(-4 alpha ell^2 v) e^{-v} dv,
// a fixed-scale integral suited to adaptive quadrature; the tail beyond
// v = 60 is below e^{-60} ~ 9e-27 relative for bounded f.  As ell -> 0
// this tends to -f(0) / (2 pi alpha): the interior term concentrates on
// the cone as a one-sided nascent delta of weight -1 / (2 pi alpha).
inline QuadratureResult nascent_delta_pairing(
    const std::function<double(double)>& f, const SpectralDensity& sd,
    double rel_tol = 1e-10) {
  validate(sd);
  const double s = 4.0 * sd.alpha * sd.ell * sd.ell;
  auto g = [&](double v) { return f(-s * v) * std::exp(-v); };
  QuadratureResult r = integrate_adaptive(g, 0.0, 60.0, rel_tol);
  const double scale = -1.0 / (2.0 * detail::kPi * sd.alpha);
  r.value *= scale;
  r.error_estimate *= std::abs(scale);
  return r;
}

}  // namespace nlsig
