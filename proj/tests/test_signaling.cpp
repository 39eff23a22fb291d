#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <nlsig/signaling.hpp>

using nlsig::DeltaKick;
using nlsig::DetectorPair;
using nlsig::RectWindow;
using nlsig::ScaledReal;
using nlsig::SpectralDensity;

namespace {

DetectorPair kick_pair(double tau, double T = 2.0, double omega = 1.0,
                       double kappa = 1.0) {
  DetectorPair p;
  p.omega = omega;
  p.separation = 7.0;
  p.alice = RectWindow{0.0, T};
  p.bob = DeltaKick{tau, kappa};
  return p;
}

DetectorPair window_pair(double a, double b, double omega = 1.0,
                         double R = 7.0, double T = 2.0) {
  DetectorPair p;
  p.omega = omega;
  p.separation = R;
  p.alice = RectWindow{0.0, T};
  p.bob = RectWindow{a, b};
  return p;
}

double rel(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("validation rejects malformed configurations") {
  DetectorPair p = kick_pair(8.0);
  p.separation = 0.0;
  CHECK_THROWS_AS(nlsig::validate(p), std::invalid_argument);
  p = kick_pair(8.0);
  p.omega = -1.0;
  CHECK_THROWS_AS(nlsig::validate(p), std::invalid_argument);
  // overlapping switching supports
  CHECK_THROWS_AS(nlsig::validate(kick_pair(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(nlsig::validate(window_pair(1.5, 8.0)),
                  std::invalid_argument);
  // degenerate profiles
  p = kick_pair(8.0, 2.0, 1.0, 0.0);
  CHECK_THROWS_AS(nlsig::validate(p), std::invalid_argument);
  p = kick_pair(8.0);
  p.bob = RectWindow{8.0, 8.0};
  CHECK_THROWS_AS(nlsig::validate(p), std::invalid_argument);
  // closed forms need Alice = Rect starting at 0
  p = kick_pair(8.0);
  p.alice = RectWindow{1.0, 3.0};
  CHECK_THROWS_AS(nlsig::signaling_breakdown(p, {0.1, 1.0}),
                  std::invalid_argument);
  p.alice = DeltaKick{0.0, 1.0};
  CHECK_THROWS_AS(nlsig::signaling_breakdown(p, {0.1, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("geometry classification and its boundaries") {
  using nlsig::PairGeometry;
  CHECK(nlsig::classify_geometry(kick_pair(3.0)) == PairGeometry::Spacelike);
  CHECK(nlsig::classify_geometry(kick_pair(8.0)) ==
        PairGeometry::LightbandDelta);
  CHECK(nlsig::classify_geometry(kick_pair(12.0)) ==
        PairGeometry::TimelikeDelta);
  CHECK(nlsig::classify_geometry(window_pair(7.5, 8.5)) ==
        PairGeometry::LightbandExtended);
  CHECK(nlsig::classify_geometry(window_pair(2.5, 4.0)) ==
        PairGeometry::Spacelike);
  // a kick exactly on either cone boundary is ill-defined
  CHECK_THROWS_AS(nlsig::classify_geometry(kick_pair(7.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(nlsig::classify_geometry(kick_pair(9.0)),
                  std::invalid_argument);
  // windows that straddle the cone or leave the lightband have no
  // closed form
  CHECK_THROWS_AS(nlsig::classify_geometry(window_pair(6.5, 8.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(nlsig::classify_geometry(window_pair(8.0, 9.5)),
                  std::invalid_argument);
}

TEST_CASE("light-cone terms: closed values and domain errors") {
  const DetectorPair p = kick_pair(8.0);
  const double want =
      std::cos(8.0) * std::cos(1.0) / (nlsig::detail::kPi * 7.0);
  CHECK(nlsig::s2_local_lightband_delta(p) == want);
  CHECK_THROWS_AS(nlsig::s2_local_lightband_delta(kick_pair(9.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(nlsig::s2_local_lightband_delta(kick_pair(7.0)),
                  std::invalid_argument);

  // window form against its frozen reference (a = 8, b = 8.1)
  CHECK(rel(nlsig::s2_local_lightband_extended(window_pair(8.0, 8.1)),
            -0.00043708631385825569766) <= 1e-13);
  // gapless window form
  const DetectorPair w0 = window_pair(7.5, 8.5, 0.0);
  CHECK(nlsig::s2_local_lightband_extended(w0) ==
        1.0 * (8.5 - 7.5) / (nlsig::detail::kPi * 7.0));
}

TEST_CASE("interior terms match frozen 40-digit references") {
  // kick inside the lightband
  CHECK(rel(nlsig::s2_ell_lightband_delta(kick_pair(8.0), {0.05, 1.0}),
            0.0035784111107231130085) <= 1e-13);
  CHECK(rel(nlsig::s2_ell_lightband_delta(kick_pair(8.0), {0.3, 1.0}),
            0.0037010223652215760066) <= 1e-13);
  // short window inside the lightband
  CHECK(rel(nlsig::s2_ell_lightband_extended(window_pair(8.0, 8.1),
                                             {0.05, 1.0}),
            0.00043759093947345095065) <= 1e-13);
  // a second parameter set entirely unlike the defaults
  CHECK(rel(nlsig::s2_ell_lightband_extended(
                window_pair(3.5, 4.0, 2.5, 3.0, 1.2), {0.1, 1.0}),
            -0.01349349728855287861) <= 1e-13);
  // gapless window, dedicated path
  CHECK(rel(nlsig::s2_ell_lightband_extended(window_pair(7.0, 9.0, 0.0),
                                             {0.07, 1.0}),
            -0.090863879714833334488) <= 1e-13);
  // deep timelike kick, still within double range
  CHECK(rel(nlsig::s2_ell_timelike_delta(kick_pair(12.0), {0.5, 1.0}),
            7.021264132300428636e-25) <= 1e-12);
}

TEST_CASE("gapless limit is continuous") {
  const double generic = nlsig::s2_ell_lightband_extended(
      window_pair(7.0, 9.0, 1e-6), {0.07, 1.0});
  const double degenerate = nlsig::s2_ell_lightband_extended(
      window_pair(7.0, 9.0, 0.0), {0.07, 1.0});
  CHECK(rel(generic, degenerate) <= 1e-9);

  const auto lead = [&](double omega) {
    return nlsig::leading_correction_lightband_extended(
        window_pair(7.0, 9.0, omega), {0.05, 1.0});
  };
  CHECK(rel(lead(1e-7), lead(0.0)) <= 1e-6);
  CHECK(lead(0.0) == 2.0 * 0.05 * 0.05 * 9.0 /
                         (nlsig::detail::kPi * 7.0 * 7.0 * 7.0));
}

TEST_CASE("interior term is independent of Alice's window length when the "
          "backward endpoint stays on the cone") {
  // s0 = max(R, tau - T) = R for both window lengths
  const auto a = nlsig::s2_ell_lightband_delta(kick_pair(8.0, 2.0),
                                               {0.12, 1.0});
  const auto b = nlsig::s2_ell_lightband_delta(kick_pair(8.0, 5.0),
                                               {0.12, 1.0});
  CHECK(a == b);
}

TEST_CASE("kick is the narrow-window limit") {
  const double w = 1e-4;
  const double windowed = nlsig::s2_ell_lightband_extended(
      window_pair(8.0 - w / 2.0, 8.0 + w / 2.0), {0.08, 1.0});
  const double kick =
      nlsig::s2_ell_lightband_delta(kick_pair(8.0), {0.08, 1.0});
  CHECK(rel(windowed / w, kick) <= 1e-6);
}

TEST_CASE("spectral width enters only through (1/alpha) and sqrt(alpha) ell") {
  const DetectorPair p = kick_pair(8.0);
  const double four = nlsig::s2_ell_lightband_delta(p, {0.05, 4.0});
  const double one = nlsig::s2_ell_lightband_delta(p, {0.1, 1.0});
  CHECK(four == 0.25 * one);
}

TEST_CASE("leading corrections: frozen value, quartic residual, domain") {
  const DetectorPair p = kick_pair(8.0);
  CHECK(rel(nlsig::leading_correction_lightband_delta(p, {0.01, 1.0}),
            1.44478239105e-7) <= 1e-10);

  // residual after subtracting the leading correction falls like ell^4
  auto resid_kick = [&](double l) {
    const auto br = nlsig::signaling_breakdown(p, {l, 1.0});
    return std::abs((br.s2_total - br.s2_local) - *br.leading_correction);
  };
  auto slope = [](double r1, double r2) { return std::log2(r2 / r1); };
  CHECK(std::abs(slope(resid_kick(0.01), resid_kick(0.02)) - 4.0) <= 0.2);
  CHECK(std::abs(slope(resid_kick(0.02), resid_kick(0.04)) - 4.0) <= 0.2);

  const DetectorPair full = window_pair(7.0, 9.0);
  auto resid_window = [&](double l) {
    const auto br = nlsig::signaling_breakdown(full, {l, 1.0});
    return std::abs((br.s2_total - br.s2_local) - *br.leading_correction);
  };
  CHECK(std::abs(slope(resid_window(0.01), resid_window(0.02)) - 4.0) <= 0.2);
  CHECK(std::abs(slope(resid_window(0.02), resid_window(0.04)) - 4.0) <= 0.2);

  // the window form is only available for the full lightband window
  CHECK_THROWS_AS(nlsig::leading_correction_lightband_extended(
                      window_pair(7.1, 9.0), {0.05, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(nlsig::leading_correction_lightband_extended(
                      window_pair(7.0, 8.9), {0.05, 1.0}),
                  std::domain_error);
}

TEST_CASE("breakdown assembles the pieces consistently") {
  const SpectralDensity sd{0.05, 1.0};
  const auto br = nlsig::signaling_breakdown(kick_pair(8.0), sd);
  CHECK(br.s2_local == nlsig::s2_local_lightband_delta(kick_pair(8.0)));
  CHECK(br.s2_ell == nlsig::s2_ell_lightband_delta(kick_pair(8.0), sd));
  CHECK(br.s2_total == 2.0 * br.s2_local + br.s2_ell);
  CHECK(br.leading_correction.has_value());
  CHECK(br.s2_ell_scaled.sign == (br.s2_ell > 0 ? 1 : -1));

  const auto sp = nlsig::signaling_breakdown(kick_pair(3.0), sd);
  CHECK(sp.s2_local == 0.0);
  CHECK(sp.s2_ell == 0.0);
  CHECK(sp.s2_total == 0.0);
  CHECK(sp.s2_ell_scaled.sign == 0);
  CHECK_FALSE(sp.leading_correction.has_value());

  const auto tl = nlsig::signaling_breakdown(kick_pair(12.0), {0.5, 1.0});
  CHECK(tl.s2_local == 0.0);
  CHECK_FALSE(tl.leading_correction.has_value());
  CHECK(rel(tl.s2_ell, 7.021264132300428636e-25) <= 1e-12);

  const auto part =
      nlsig::signaling_breakdown(window_pair(8.0, 8.1), sd);
  CHECK_FALSE(part.leading_correction.has_value());

  // cone weight at alpha = 4
  const auto a4 = nlsig::signaling_breakdown(kick_pair(8.0), {0.05, 4.0});
  CHECK(a4.s2_total == 1.25 * a4.s2_local + a4.s2_ell);
}

TEST_CASE("log-scaled timelike value agrees with the raw evaluation") {
  const auto raw =
      nlsig::s2_ell_timelike_delta(kick_pair(12.0), {0.5, 1.0});
  const auto sc =
      nlsig::s2_ell_timelike_delta_scaled(kick_pair(12.0), {0.5, 1.0});
  CHECK(sc.sign == (raw > 0 ? 1 : -1));
  CHECK(rel(sc.to_double(), raw) <= 1e-12);

  // deep in the suppressed regime the raw value underflows but the scaled
  // one remains finite and finite-logged
  const auto deep =
      nlsig::s2_ell_timelike_delta_scaled(kick_pair(12.0), {0.05, 1.0});
  CHECK(deep.sign != 0);
  CHECK(std::isfinite(deep.log_abs));
  CHECK(deep.log_abs < -5000.0);
  CHECK(nlsig::s2_ell_timelike_delta(kick_pair(12.0), {0.05, 1.0}) == 0.0);
}

TEST_CASE("scaled-real representation round-trips") {
  CHECK(ScaledReal::from_double(0.0).sign == 0);
  CHECK(ScaledReal::from_double(0.0).to_double() == 0.0);
  const auto m = ScaledReal::from_double(-3.0);
  CHECK(m.sign == -1);
  CHECK(std::abs(m.to_double() + 3.0) <= 1e-15);
}

TEST_CASE("interior term approaches minus the cone term near the far edge") {
  // just inside tau = R + T the interior term cancels the cone term up to
  // an O(ell^2) defect with a known coefficient
  const double tau = 9.0 - 1e-12;
  const double l = 0.01;
  const double local = nlsig::s2_local_lightband_delta(kick_pair(tau));
  const double ell =
      nlsig::s2_ell_lightband_delta(kick_pair(tau), {l, 1.0});
  CHECK(std::abs((ell + local) / (l * l) - 0.0114677) <= 1e-5);
}

TEST_CASE("suppression sets in monotonically past the lightband") {
  const double l = 0.1;
  double prev = std::abs(nlsig::s2_ell_timelike_delta(
      kick_pair(9.0 + 0.5 * l), {l, 1.0}));
  for (double k : {1.0, 2.0, 3.0, 5.0}) {
    const double cur = std::abs(nlsig::s2_ell_timelike_delta(
        kick_pair(9.0 + k * l), {l, 1.0}));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("relative nonlocal size: value and degenerate guard") {
  // gapless limit: ratio -> 2 (ell/R)^2 (R+T)/T as the gap closes
  const double ratio = nlsig::ratio_nonlocal(
      window_pair(7.0, 9.0, 1e-6), {0.07, 1.0});
  CHECK(std::abs(ratio - 0.00089946) <= 1e-7);

  // a kick time where the cone term vanishes makes the ratio undefined
  const double tau0 = 2.5 * nlsig::detail::kPi;  // cos(omega tau) = 0
  CHECK_THROWS_AS(nlsig::ratio_nonlocal(kick_pair(tau0), {0.05, 1.0}),
                  std::domain_error);
}
