#pragma once
// Closed forms for the leading signaling observable S2 between two gapped
// detectors, split as
//
//   s2_total = cone_weight * s2_local + s2_ell
//
// where s2_local is the bare light-cone contribution and s2_ell is the
// interior (smeared) contribution.  Alice's switching window is Rect(0, T)
// throughout; Bob is either an instantaneous kick at tau or a window
// [a, b].  Geometry names: "lightband" means Bob's support lies inside
// Alice's forward light shell [R, R + T]; "timelike" means beyond it.
//
// Numerical strategy: every interior integral reduces to combinations of
//   E(x) = e^{(R^2 - x^2)/(4 l^2)} e^{i W x} erfcx(x/(2l) - i l W)
// evaluated at window endpoints (x >= R, so the Gaussian factor never
// exceeds 1).  The grouping matters: the naive erf antiderivatives cancel
// catastrophically for l << R.  The regrouping is derived step by step in
// docs/closed_forms.md and cross-checked against direct quadrature in the
// test suite.  Deep in the timelike regime the scale factor underflows
// doubles, so a log-scaled variant is provided and used by the sweep
// machinery.
//
// Spectral-width parameter alpha: the interior kernel obeys
//   kernel(sigma; l, alpha) = (1/alpha) * kernel(sigma; sqrt(alpha) l, 1),
// so every closed form at general alpha is (1/alpha) times the alpha = 1
// form at sqrt(alpha) l.  The leading l^2 corrections are consequently
// alpha-independent.

#include <cmath>
#include <complex>
#include <iostream>
#include <optional>

#include "field.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace nlsig {

struct SignalingBreakdown {
  double s2_local = 0.0;
  double s2_ell = 0.0;
  double s2_total = 0.0;
  std::optional<double> leading_correction;  // when a closed form exists
  ScaledReal s2_ell_scaled;  // survives regimes where s2_ell underflows
};

enum class PairGeometry {
  Spacelike,          // Bob entirely outside the forward cone: S2 = 0
  LightbandDelta,     // kick at tau, R < tau < R + T
  TimelikeDelta,      // kick at tau, tau > R + T
  LightbandExtended,  // window [a, b] inside [R, R + T]
};

namespace detail {

struct PairView {
  double omega, amp, R, T;
  // delta kick
  double tau = 0.0, kappa = 0.0;
  // window
  double a = 0.0, b = 0.0;
};

inline PairView unpack(const DetectorPair& pair) {
  validate(pair);
  if (!std::holds_alternative<RectWindow>(pair.alice))
    throw std::invalid_argument(
        "closed forms require a rectangular window for Alice");
  const auto& aw = std::get<RectWindow>(pair.alice);
  if (aw.start != 0.0)
    throw std::invalid_argument(
        "closed forms assume Alice's window starts at t = 0");
  PairView v;
  v.omega = pair.omega;
  v.amp = pair.amp_product;
  v.R = pair.separation;
  v.T = aw.end;
  if (std::holds_alternative<DeltaKick>(pair.bob)) {
    v.tau = std::get<DeltaKick>(pair.bob).at;
    v.kappa = std::get<DeltaKick>(pair.bob).kick_strength;
  } else {
    v.a = std::get<RectWindow>(pair.bob).start;
    v.b = std::get<RectWindow>(pair.bob).end;
  }
  return v;
}

inline void warn_cancellation(double re, double magnitude, const char* where) {
  if (magnitude > 0.0 && std::abs(re) < 1e-12 * magnitude)
    std::cerr << "nlsig: severe cancellation in " << where
              << " (relative residue " << std::abs(re) / magnitude
              << "); result digits are unreliable\n";
}

// E(x) for the current (R, l, W); requires x >= R so e^{(R^2-x^2)/4l^2} <= 1
inline complex lightband_E(double x, double R, double l, double W) {
  const double g = (R * R - x * x) / (4.0 * l * l);
  return std::exp(complex(g, W * x)) *
         erfcx_complex(complex(x / (2.0 * l), -l * W));
}

// ---- alpha = 1 primitives (dimensional parameters) ----

inline double s2_ell_delta_std(double amp, double kappa, double W, double R,
                               double T, double tau, double l) {
  const double s0 = std::max(R, tau - T);
  const complex Es0 = lightband_E(s0, R, l, W);
  const complex Etau = lightband_E(tau, R, l, W);
  const complex diff =
      std::exp(complex(0.0, -W * tau)) * (Es0 - Etau);
  warn_cancellation(diff.real(), std::abs(Es0) + std::abs(Etau),
                    "s2_ell (delta kick)");
  return -(amp * kappa / (2.0 * std::sqrt(kPi) * l)) * std::cos(W * tau) *
         diff.real();
}

// log-scaled variant: factors e^{(R^2 - s0^2)/4l^2} out of the bracket so
// the deep-timelike decay never touches the double underflow threshold
inline ScaledReal s2_ell_delta_scaled_std(double amp, double kappa, double W,
                                          double R, double T, double tau,
                                          double l) {
  const double s0 = std::max(R, tau - T);
  const complex ws0 = erfcx_complex(complex(s0 / (2.0 * l), -l * W));
  const complex wtau = erfcx_complex(complex(tau / (2.0 * l), -l * W));
  // bracket = e^{-(R^2-s0^2)/4l^2} e^{-iW tau} (E(s0) - E(tau))
  const complex bracket =
      std::exp(complex(0.0, -W * (tau - s0))) * ws0 -
      std::exp(complex((s0 * s0 - tau * tau) / (4.0 * l * l), 0.0)) * wtau;
  const double M = bracket.real();
  const double pref =
      -(amp * kappa / (2.0 * std::sqrt(kPi) * l)) * std::cos(W * tau);
  if (M == 0.0 || pref == 0.0) return ScaledReal{};
  ScaledReal out;
  out.log_abs = std::log(std::abs(pref)) +
                (R * R - s0 * s0) / (4.0 * l * l) + std::log(std::abs(M));
  out.sign = (pref * M > 0.0) ? 1 : -1;
  return out;
}

// dimensionless evaluator for the window case at W = 1: all arguments are
// pre-multiplied by W, and the result is invariant under that rescaling
inline double s2_ell_extended_w1(double amp, double Rt, double at, double bt,
                                 double lt) {
  const complex I(0.0, 1.0);
  auto E = [&](double x) { return lightband_E(x, Rt, lt, 1.0); };
  auto G = [&](double x) {
    const double g = (Rt * Rt - x * x) / (4.0 * lt * lt);
    return std::exp(complex(g, x));
  };
  const complex Ea = E(at), Eb = E(bt), ER = E(Rt);
  const complex pha = std::exp(complex(0.0, -2.0 * at));
  const complex phb = std::exp(complex(0.0, -2.0 * bt));
  const complex za(at / (2.0 * lt), -lt);
  const complex zb(bt / (2.0 * lt), -lt);
  const complex J0 = 0.5 * I * (phb - pha);
  const complex bracket = ER * ((bt - at) + J0)
                          - 2.0 * lt * (zb * Eb - za * Ea)
                          + (2.0 * lt / std::sqrt(kPi)) * (G(bt) - G(at))
                          - 0.5 * I * (phb * Eb - pha * Ea)
                          + 0.5 * I * (std::conj(Eb) - std::conj(Ea));
  const double mag = std::abs(ER) * (std::abs(bt - at) + std::abs(J0)) +
                     2.0 * lt * (std::abs(zb * Eb) + std::abs(za * Ea)) +
                     std::abs(Ea) + std::abs(Eb);
  warn_cancellation(bracket.real(), mag, "s2_ell (window)");
  return -(amp / (4.0 * std::sqrt(kPi) * lt)) * bracket.real();
}

// degenerate gapless path for the window case (the generic bracket divides
// by W); uses only real erfcx
inline double s2_ell_extended_w0(double amp, double R, double a, double b,
                                 double l) {
  auto H = [&](double t) {
    const double g = std::exp((R * R - t * t) / (4.0 * l * l));
    return (t / (2.0 * l)) * g * erfcx(t / (2.0 * l)) -
           g / std::sqrt(kPi);
  };
  return -(amp / (2.0 * std::sqrt(kPi) * l)) *
         ((b - a) * erfcx(R / (2.0 * l)) - 2.0 * l * (H(b) - H(a)));
}

inline double s2_ell_extended_std(double amp, double W, double R, double a,
                                  double b, double l) {
  if (W == 0.0) return s2_ell_extended_w0(amp, R, a, b, l);
  return s2_ell_extended_w1(amp, W * R, W * a, W * b, W * l);
}

}  // namespace detail

// ---- light-cone (local) terms; alpha-independent ----

// kick inside the lightband: the cone delta pins t1 = tau - R in Alice's
// window, leaving no integral at all
inline double s2_local_lightband_delta(const DetectorPair& pair) {
  const auto v = detail::unpack(pair);
  if (v.kappa == 0.0)
    throw std::invalid_argument("s2_local_lightband_delta: Bob must be a kick");
  if (!(v.R < v.tau && v.tau < v.R + v.T))
    throw std::invalid_argument(
        "s2_local_lightband_delta: tau must lie strictly inside (R, R + T)");
  return v.kappa * v.amp * std::cos(v.omega * v.tau) *
         std::cos(v.omega * (v.tau - v.R)) / (detail::kPi * v.R);
}

// window inside the lightband: the cone delta leaves one oscillatory
// integral with an elementary antiderivative
inline double s2_local_lightband_extended(const DetectorPair& pair) {
  const auto v = detail::unpack(pair);
  if (v.kappa != 0.0)
    throw std::invalid_argument(
        "s2_local_lightband_extended: Bob must be a window");
  if (!(v.R <= v.a && v.b <= v.R + v.T))
    throw std::invalid_argument(
        "s2_local_lightband_extended: [a, b] must lie inside [R, R + T]");
  const double W = v.omega, R = v.R;
  if (W == 0.0) return v.amp * (v.b - v.a) / (detail::kPi * R);
  return v.amp / (detail::kPi * R) *
         ((v.b - v.a) * std::cos(W * R) / 2.0 +
          (std::sin(2.0 * W * v.b - W * R) - std::sin(2.0 * W * v.a - W * R)) /
              (4.0 * W));
}

// ---- interior terms ----

inline double s2_ell_lightband_delta(const DetectorPair& pair,
                                     const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa == 0.0)
    throw std::invalid_argument("s2_ell_lightband_delta: Bob must be a kick");
  if (!(v.R < v.tau && v.tau < v.R + v.T))
    throw std::invalid_argument(
        "s2_ell_lightband_delta: tau must lie strictly inside (R, R + T)");
  const double leff = std::sqrt(sd.alpha) * sd.ell;
  return detail::s2_ell_delta_std(v.amp, v.kappa, v.omega, v.R, v.T, v.tau,
                                  leff) /
         sd.alpha;
}

inline double s2_ell_timelike_delta(const DetectorPair& pair,
                                    const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa == 0.0)
    throw std::invalid_argument("s2_ell_timelike_delta: Bob must be a kick");
  if (!(v.tau > v.R + v.T))
    throw std::invalid_argument(
        "s2_ell_timelike_delta: tau must lie beyond R + T");
  const double leff = std::sqrt(sd.alpha) * sd.ell;
  return detail::s2_ell_delta_std(v.amp, v.kappa, v.omega, v.R, v.T, v.tau,
                                  leff) /
         sd.alpha;
}

// log-scaled timelike value; finite down to arbitrarily small ell
inline ScaledReal s2_ell_timelike_delta_scaled(const DetectorPair& pair,
                                               const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa == 0.0)
    throw std::invalid_argument(
        "s2_ell_timelike_delta_scaled: Bob must be a kick");
  if (!(v.tau > v.R + v.T))
    throw std::invalid_argument(
        "s2_ell_timelike_delta_scaled: tau must lie beyond R + T");
  const double leff = std::sqrt(sd.alpha) * sd.ell;
  ScaledReal r = detail::s2_ell_delta_scaled_std(v.amp, v.kappa, v.omega, v.R,
                                                 v.T, v.tau, leff);
  if (r.sign != 0) r.log_abs -= std::log(sd.alpha);
  return r;
}

inline double s2_ell_lightband_extended(const DetectorPair& pair,
                                        const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa != 0.0)
    throw std::invalid_argument(
        "s2_ell_lightband_extended: Bob must be a window");
  if (!(v.R <= v.a && v.b <= v.R + v.T))
    throw std::invalid_argument(
        "s2_ell_lightband_extended: [a, b] must lie inside [R, R + T]");
  const double leff = std::sqrt(sd.alpha) * sd.ell;
  return detail::s2_ell_extended_std(v.amp, v.omega, v.R, v.a, v.b, leff) /
         sd.alpha;
}

// ---- leading small-ell corrections to s2_total - s2_local ----
// (alpha-independent; see the header comment)

inline double leading_correction_lightband_delta(const DetectorPair& pair,
                                                 const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa == 0.0)
    throw std::invalid_argument(
        "leading_correction_lightband_delta: Bob must be a kick");
  if (!(v.R < v.tau && v.tau < v.R + v.T))
    throw std::invalid_argument(
        "leading_correction_lightband_delta: tau must lie inside (R, R + T)");
  const double W = v.omega, R = v.R, tau = v.tau, l = sd.ell;
  return v.kappa * v.amp * (l * l / (detail::kPi * R * R * R)) *
         (R * W * (std::sin(W * R) + std::sin(R * W - 2.0 * tau * W)) +
          std::cos(W * R) + std::cos(R * W - 2.0 * tau * W));
}

inline double leading_correction_lightband_extended(
    const DetectorPair& pair, const SpectralDensity& sd) {
  validate(sd);
  const auto v = detail::unpack(pair);
  if (v.kappa != 0.0)
    throw std::invalid_argument(
        "leading_correction_lightband_extended: Bob must be a window");
  if (v.a != v.R || v.b != v.R + v.T)
    throw std::domain_error(
        "leading_correction_lightband_extended: closed form only covers the "
        "full lightband window a = R, b = R + T");
  const double W = v.omega, R = v.R, T = v.T, l = sd.ell;
  if (W == 0.0)
    return 2.0 * v.amp * l * l * (R + T) / (detail::kPi * R * R * R);
  const double N = 2.0 * W * W * R * T * std::sin(W * R) +
                   std::sin(W * (R + 2.0 * T)) +
                   W * (3.0 * R + 2.0 * T) * std::cos(W * R) +
                   W * R * std::cos(W * (R + 2.0 * T)) - std::sin(W * R);
  return v.amp * l * l * N / (2.0 * detail::kPi * W * R * R * R);
}

// ---- assembled breakdown ----

inline PairGeometry classify_geometry(const DetectorPair& pair) {
  const auto v = detail::unpack(pair);
  const double Rp = v.R, edge = v.R + v.T;
  if (v.kappa != 0.0) {
    if (v.tau == Rp || v.tau == edge)
      throw std::invalid_argument(
          "kick sits exactly on a light-cone boundary; the cone delta makes "
          "this configuration ill-defined");
    if (v.tau < Rp) return PairGeometry::Spacelike;
    if (v.tau < edge) return PairGeometry::LightbandDelta;
    return PairGeometry::TimelikeDelta;
  }
  if (v.b <= Rp) return PairGeometry::Spacelike;
  if (Rp <= v.a && v.b <= edge) return PairGeometry::LightbandExtended;
  throw std::invalid_argument(
      "window neither spacelike nor inside the lightband [R, R + T]; no "
      "closed form covers it (use the quadrature oracle)");
}

inline SignalingBreakdown signaling_breakdown(const DetectorPair& pair,
                                              const SpectralDensity& sd) {
  validate(sd);
  SignalingBreakdown out;
  switch (classify_geometry(pair)) {
    case PairGeometry::Spacelike:
      out.s2_ell_scaled = ScaledReal{};
      break;
    case PairGeometry::LightbandDelta:
      out.s2_local = s2_local_lightband_delta(pair);
      out.s2_ell = s2_ell_lightband_delta(pair, sd);
      out.leading_correction = leading_correction_lightband_delta(pair, sd);
      out.s2_ell_scaled = ScaledReal::from_double(out.s2_ell);
      break;
    case PairGeometry::TimelikeDelta:
      out.s2_ell_scaled = s2_ell_timelike_delta_scaled(pair, sd);
      out.s2_ell = out.s2_ell_scaled.to_double();
      break;
    case PairGeometry::LightbandExtended: {
      out.s2_local = s2_local_lightband_extended(pair);
      out.s2_ell = s2_ell_lightband_extended(pair, sd);
      const auto v = detail::unpack(pair);
      if (v.a == v.R && v.b == v.R + v.T)
        out.leading_correction =
            leading_correction_lightband_extended(pair, sd);
      out.s2_ell_scaled = ScaledReal::from_double(out.s2_ell);
      break;
    }
  }
  out.s2_total = cone_weight(sd) * out.s2_local + out.s2_ell;
  return out;
}

// Relative size of the nonlocal modification,
// (s2_total - s2_local) / s2_local; tends to 1/alpha - 1 + O(ell^2) deep in
// the lightband (to 0 at alpha = 1)
inline double ratio_nonlocal(const DetectorPair& pair,
                             const SpectralDensity& sd) {
  const SignalingBreakdown br = signaling_breakdown(pair, sd);
  if (std::abs(br.s2_local) < 1e-12)
    throw std::domain_error(
        "ratio_nonlocal: s2_local is numerically zero; the ratio is "
        "undefined for this configuration");
  return (br.s2_total - br.s2_local) / br.s2_local;
}

}  // namespace nlsig
