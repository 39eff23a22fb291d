#pragma once
// Direct numerical evaluation of S2 by adaptive quadrature — the
// independent check on every closed form in signaling.hpp.
//
// The interior kernel is a boundary layer hugging the light cone: as a
// function of t1 at fixed t2 it decays like e^{-((t2-t1)^2 - R^2)/(4 s)}
// with s = alpha ell^2 << 1.  Naive quadrature in t1 stalls on that layer,
// so the inner integral is evaluated in the layer coordinate
//   u = ((t2 - t1)^2 - R^2) / (4 s),
// where the kernel becomes exactly e^{-u} and the remaining factors are
// smooth.  The integration range is truncated 120 e-foldings past its
// start and the leading e^{-u_lo} is factored out, keeping the integrand
// O(1) even deep in the timelike regime where the value itself underflows.
//
// Everything here is single-threaded and deterministic.  Evaluation counts
// are kernel evaluations; the shared budget (default 10^7) covers inner
// and outer rules together, and exhaustion is reported via
// converged = false rather than by throwing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "integrate.hpp"
#include "signaling.hpp"
#include "types.hpp"

namespace nlsig {

namespace detail {

// kernel(sigma) = coeff * e^{sigma / (4 scale_sq)} for sigma < 0
struct ExpKernel {
  double coeff;
  double scale_sq;
};

inline ExpKernel gaussian_kernel(const SpectralDensity& sd) {
  const double al2 = sd.alpha * sd.ell * sd.ell;
  return {-1.0 / (8.0 * kPi * sd.alpha * al2), al2};
}

}  // namespace detail

// S2 contribution of an exponential-family interior kernel, by nested
// quadrature in the layer coordinate.  Works for any geometry of Bob's
// support (spacelike windows simply integrate to zero).
inline QuadratureResult integrate_s2_nonlocal_kernel(
    const DetectorPair& pair, const detail::ExpKernel& ker, double tol,
    std::int64_t max_evals = 10'000'000) {
  if (!(tol >= 1e-10))
    throw std::invalid_argument("integrate_s2_nonlocal: tol must be >= 1e-10");
  const auto v = detail::unpack(pair);
  const double s = ker.scale_sq;
  const double W = v.omega;

  std::int64_t evals = 0;
  bool all_converged = true;

  // integral over Alice's window against the kernel, for one Bob time;
  // value includes the factored e^{-u_lo} but not ker.coeff
  auto inner = [&](double t2) -> QuadratureResult {
    QuadratureResult r;
    r.converged = true;
    const double top = std::min(v.T, t2 - v.R);  // largest admissible t1
    if (!(top > 0.0)) return r;                  // no interior overlap
    const double u_lo =
        std::max(0.0, ((t2 - top) * (t2 - top) - v.R * v.R) / (4.0 * s));
    const double u_hi = (t2 * t2 - v.R * v.R) / (4.0 * s);
    const double span = std::min(u_hi - u_lo, 120.0);
    auto h = [&](double u) {
      const double root = std::sqrt(v.R * v.R + 4.0 * s * (u_lo + u));
      return std::cos(W * (t2 - root)) * std::exp(-u) * (2.0 * s / root);
    };
    const std::int64_t left = std::max<std::int64_t>(max_evals - evals, 15);
    r = integrate_adaptive(h, 0.0, span, tol / 10.0,
                           1e-16 * (2.0 * s / v.R), left);
    evals += r.evaluations;
    const double damp = std::exp(-u_lo);
    r.value *= damp;
    r.error_estimate *= damp;
    return r;
  };

  QuadratureResult out;
  if (v.kappa != 0.0) {
    // Bob's kick collapses the outer integral
    const QuadratureResult in = inner(v.tau);
    const double pref = 4.0 * v.amp * v.kappa * std::cos(W * v.tau) * ker.coeff;
    out.value = pref * in.value;
    out.error_estimate = std::abs(pref) * in.error_estimate;
    out.evaluations = evals;
    out.converged = in.converged;
    return out;
  }

  auto f = [&](double t2) {
    const QuadratureResult in = inner(t2);
    if (!in.converged) all_converged = false;
    return std::cos(W * t2) * in.value;
  };
  // The integrand vanishes identically below the cone edge t2 = R, then
  // rises over a layer of width ~240 s / R (the 120-e-folding saturation
  // of the inner integral), and has a kink where min(T, t2 - R) switches.
  // A single panel spanning [a, b] can place all its nodes past such a
  // layer and converge to the wrong answer, so split there up front.
  const double lo = std::max(v.a, v.R);
  out.converged = true;
  if (!(lo < v.b)) return out;  // entirely spacelike
  const double layer = 240.0 * s / v.R;
  std::vector<double> cuts{lo};
  for (double c : {v.R + layer, v.R + v.T, v.R + v.T + layer})
    if (c > lo && c < v.b) cuts.push_back(c);
  cuts.push_back(v.b);
  std::sort(cuts.begin(), cuts.end());

  QuadratureResult outer;
  outer.converged = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double floor = 1e-16 * (2.0 * s / v.R) * (cuts[i + 1] - cuts[i]);
    const QuadratureResult seg =
        integrate_adaptive(f, cuts[i], cuts[i + 1], tol, floor, max_evals);
    outer.value += seg.value;
    outer.error_estimate += seg.error_estimate;
    outer.converged = outer.converged && seg.converged;
  }
  const double pref = 4.0 * v.amp * ker.coeff;
  out.value = pref * outer.value;
  // the inner rules run at tol/10 relative, folded in conservatively
  out.error_estimate = std::abs(pref) * outer.error_estimate +
                       0.1 * tol * std::abs(out.value);
  out.evaluations = evals;
  out.converged = outer.converged && all_converged && evals <= max_evals;
  return out;
}

// Interior contribution for the Gaussian spectrum: must agree with the
// closed-form s2_ell_* functions
inline QuadratureResult integrate_s2_nonlocal(const DetectorPair& pair,
                                              const SpectralDensity& sd,
                                              double tol) {
  validate(sd);
  return integrate_s2_nonlocal_kernel(pair, detail::gaussian_kernel(sd), tol);
}

// Bare light-cone contribution.  The cone delta is integrated out
// analytically in t1; for a window Bob a single smooth 1D quadrature over
// t2 remains, while a kick leaves no integral at all.
inline QuadratureResult integrate_s2_local(const DetectorPair& pair,
                                           double tol) {
  if (!(tol >= 1e-10))
    throw std::invalid_argument("integrate_s2_local: tol must be >= 1e-10");
  const auto v = detail::unpack(pair);
  QuadratureResult out;
  out.converged = true;
  if (v.kappa != 0.0) {
    switch (classify_geometry(pair)) {
      case PairGeometry::LightbandDelta:
        out.value = s2_local_lightband_delta(pair);  // exact, no quadrature
        break;
      default:
        break;  // cone misses the window: exactly zero
    }
    return out;
  }
  const double lo = std::max(v.a, v.R);
  const double hi = std::min(v.b, v.R + v.T);
  if (!(lo < hi)) return out;
  auto f = [&](double t2) {
    return (v.amp / (detail::kPi * v.R)) * std::cos(v.omega * t2) *
           std::cos(v.omega * (t2 - v.R));
  };
  return integrate_adaptive(f, lo, hi, tol);
}

// Universality of the leading correction: regulate a flat spectral density
// rho_c = ell^2 with a UV cutoff e^{-eps mu^2}.  The regulated theory is
// the Gaussian model at alpha = eps / ell^2, so its correction
//   C(eps) = (ell^2 / eps) s2_local + s2_ell(eps-kernel)
// is computed honestly by quadrature; Richardson extrapolation in eps
// (two stages, killing the O(eps) and O(eps^2) terms) recovers the
// eps -> 0 limit, which should match the Gaussian model's leading l^2
// coefficient despite the very different spectral shapes.
struct IrUniversality {
  std::array<double, 3> c_eps{};  // corrections at eps0, eps0/2, eps0/4
  double extrapolated = 0.0;      // eps -> 0 limit
  double c2_estimate = 0.0;       // extrapolated / ell^2
  bool converged = false;
  std::int64_t evaluations = 0;
};

inline IrUniversality ir_universality_extrapolation(const DetectorPair& pair,
                                                    double ell,
                                                    double eps0 = 1e-4,
                                                    double tol = 1e-9) {
  if (!(ell > 0.0) || !(eps0 > 0.0))
    throw std::invalid_argument(
        "ir_universality_extrapolation: ell and eps0 must be > 0");
  double local = 0.0;
  switch (classify_geometry(pair)) {
    case PairGeometry::LightbandDelta:
      local = s2_local_lightband_delta(pair);
      break;
    case PairGeometry::LightbandExtended:
      local = s2_local_lightband_extended(pair);
      break;
    default:
      throw std::invalid_argument(
          "ir_universality_extrapolation: needs a lightband configuration");
  }
  IrUniversality out;
  out.converged = true;
  for (int k = 0; k < 3; ++k) {
    const double eps = eps0 / double(1 << k);
    const detail::ExpKernel ker{-ell * ell / (8.0 * detail::kPi * eps * eps),
                                eps};
    const QuadratureResult r = integrate_s2_nonlocal_kernel(pair, ker, tol);
    out.converged = out.converged && r.converged;
    out.evaluations += r.evaluations;
    out.c_eps[k] = (ell * ell / eps) * local + r.value;
  }
  const double r1 = 2.0 * out.c_eps[1] - out.c_eps[0];
  const double r2 = 2.0 * out.c_eps[2] - out.c_eps[1];
  out.extrapolated = (4.0 * r2 - r1) / 3.0;
  out.c2_estimate = out.extrapolated / (ell * ell);
  return out;
}

}  // namespace nlsig
