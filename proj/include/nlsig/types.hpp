#pragma once
// Shared domain types: spectral density, detector switching profiles, the
// two-detector configuration, spacetime intervals, and a log-scaled real
// representation for values that underflow double precision.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>

namespace nlsig {

// rho(mu^2) = ell^2 e^{-alpha ell^2 mu^2}
struct SpectralDensity {
  double ell = 0.1;
  double alpha = 1.0;
};

inline void validate(const SpectralDensity& sd) {
  if (!(sd.ell > 0.0) || !std::isfinite(sd.ell))
    throw std::invalid_argument("SpectralDensity: ell must be > 0");
  if (!(sd.alpha > 0.0) || !std::isfinite(sd.alpha))
    throw std::invalid_argument("SpectralDensity: alpha must be > 0");
}

// instantaneous coupling kick at time `at` with strength kappa (a length)
struct DeltaKick {
  double at = 0.0;
  double kick_strength = 1.0;
};

// rectangular coupling window [start, end]
struct RectWindow {
  double start = 0.0;
  double end = 1.0;
};

using SwitchingProfile = std::variant<DeltaKick, RectWindow>;

inline double support_start(const SwitchingProfile& p) {
  return std::holds_alternative<DeltaKick>(p) ? std::get<DeltaKick>(p).at
                                              : std::get<RectWindow>(p).start;
}

inline double support_end(const SwitchingProfile& p) {
  return std::holds_alternative<DeltaKick>(p) ? std::get<DeltaKick>(p).at
                                              : std::get<RectWindow>(p).end;
}

inline void validate(const SwitchingProfile& p) {
  if (std::holds_alternative<DeltaKick>(p)) {
    if (!(std::get<DeltaKick>(p).kick_strength > 0.0))
      throw std::invalid_argument("DeltaKick: kick_strength must be > 0");
  } else {
    const auto& w = std::get<RectWindow>(p);
    if (!(w.start < w.end))
      throw std::invalid_argument("RectWindow: start must be < end");
  }
}

// Two detectors with a shared gap omega at spatial separation R.  The
// perturbative couplings lambda_A, lambda_B are bookkeeping only: S2 is the
// coefficient of lambda_A lambda_B, so they never enter the formulas.
struct DetectorPair {
  double omega = 1.0;        // shared gap
  double amp_product = 1.0;  // product of the (real) state amplitudes
  std::pair<double, double> couplings{1.0, 1.0};
  double separation = 1.0;  // R
  SwitchingProfile alice = RectWindow{0.0, 1.0};
  SwitchingProfile bob = DeltaKick{2.0, 1.0};
};

inline void validate(const DetectorPair& pair) {
  if (!(pair.separation > 0.0) || !std::isfinite(pair.separation))
    throw std::invalid_argument("DetectorPair: separation must be > 0");
  if (!(pair.omega >= 0.0) || !std::isfinite(pair.omega))
    throw std::invalid_argument("DetectorPair: omega must be >= 0");
  if (!std::isfinite(pair.amp_product))
    throw std::invalid_argument("DetectorPair: amp_product must be finite");
  validate(pair.alice);
  validate(pair.bob);
  // the perturbative derivation assumes disjoint coupling supports
  if (support_start(pair.bob) < support_end(pair.alice))
    throw std::invalid_argument(
        "DetectorPair: switching supports must be disjoint "
        "(Bob's support must not begin before Alice's ends)");
}

// signature (-,+,+,+): sigma = -dt^2 + dx^2
struct SpacetimeInterval {
  double dt = 0.0;
  double dx = 0.0;
  double sigma() const { return -dt * dt + dx * dx; }
  bool timelike() const { return sigma() < 0.0; }
  bool lightlike() const { return sigma() == 0.0; }
  bool spacelike() const { return sigma() > 0.0; }
};

// sign * e^{log_abs}, for magnitudes far below double underflow
struct ScaledReal {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;  // -1, 0, +1

  double to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);  // may underflow to 0 honestly
  }

  static ScaledReal from_double(double v) {
    if (v == 0.0) return {};
    return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
  }
};

}  // namespace nlsig
