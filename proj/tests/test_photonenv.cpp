#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qd/branching.hpp"
#include "qd/photonenv.hpp"

using namespace qd;

namespace {

// Direct series with a fixed, generous term count.
double seriesOracle(double x) {
  double s = 0.0;
  for (int n = 1; n <= 200000; ++n) s += std::pow(x, n) / (2.0 * n * (2.0 * n - 1.0));
  return s;
}

double twoBranchOracle(double gamma) {
  // Equal-weight two-branch entropy with overlap magnitude sqrt(gamma).
  const double g = std::sqrt(gamma);
  const double lp = 0.5 * (1.0 + g), lm = 0.5 * (1.0 - g);
  double h = 0.0;
  if (lp > 0.0) h -= lp * std::log(lp);
  if (lm > 0.0) h -= lm * std::log(lm);
  return h;
}

}  // namespace

TEST_CASE("rate constants") {
  const double pi3 = std::pow(std::numbers::pi, 3);
  CHECK(PhysicalConstants::dipoleConstant() == doctest::Approx(161280.0 * std::riemann_zeta(9.0) / pi3));
  CHECK(PhysicalConstants::dipoleConstant() == doctest::Approx(5212.0).epsilon(1e-4));
  CHECK(PhysicalConstants::saturatedConstant() == doctest::Approx(1873.0).epsilon(1e-3));
  CHECK(PhysicalConstants::zeta7() == doctest::Approx(1.0083492773819).epsilon(1e-12));
}

TEST_CASE("effective radius modes") {
  const double r = 2e-6;
  CHECK(effectiveRadius(r, 3.0) == doctest::Approx(r * std::cbrt(2.0)).epsilon(1e-14));
  CHECK(effectiveRadius(r, 3.0, RadiusMode::ClausiusMossotti) == doctest::Approx(r * std::cbrt(0.4)).epsilon(1e-14));
  CHECK(effectiveRadius(r, 1e12) == doctest::Approx(r).epsilon(1e-9));
  CHECK(effectiveRadius(r, 1e12, RadiusMode::ClausiusMossotti) == doctest::Approx(r).epsilon(1e-9));
  CHECK_THROWS_AS(effectiveRadius(r, 2.0), std::domain_error);
  CHECK_NOTHROW(effectiveRadius(r, 2.0, RadiusMode::ClausiusMossotti));
}

TEST_CASE("parameter validation") {
  PhotonHaloParams p;
  CHECK_NOTHROW(p.validate());
  p.radius = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PhotonHaloParams{};
  p.permittivity = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PhotonHaloParams{};
  p.temperature = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("dipole rate angular dependence and regime flag") {
  PhotonHaloParams p;
  p.separation = 1e-9;
  Rate r0 = decoherenceRateDipole(p);
  p.angle = std::numbers::pi / 2.0;
  Rate r1 = decoherenceRateDipole(p);
  CHECK(r0.regimeValid);
  CHECK(r1.value / r0.value == doctest::Approx(3.0 / 14.0).epsilon(1e-12));
  CHECK(r0.value > 0.0);
  p.separation = 1e-3;
  CHECK_FALSE(decoherenceRateDipole(p).regimeValid);
  CHECK(decoherenceRateDipole(p).value > 0.0);
}

TEST_CASE("dipole rate scales as separation squared and T^5") {
  PhotonHaloParams p;
  p.separation = 1e-9;
  const double base = decoherenceRateDipole(p).value;
  p.separation = 2e-9;
  CHECK(decoherenceRateDipole(p).value / base == doctest::Approx(4.0).epsilon(1e-12));
  p.separation = 1e-9;
  p.temperature *= 2.0;
  CHECK(decoherenceRateDipole(p).value / base == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("saturated rate independent of separation and angle with T^3 scaling") {
  PhotonHaloParams p;
  p.separation = 1e-3;
  Rate a = decoherenceRateSaturated(p);
  CHECK(a.regimeValid);
  p.separation = 5e-2;
  p.angle = 1.1;
  CHECK(decoherenceRateSaturated(p).value == doctest::Approx(a.value).epsilon(1e-14));
  p.temperature *= 2.0;
  CHECK(decoherenceRateSaturated(p).value / a.value == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("regime selection") {
  PhotonHaloParams p;
  const double lam = p.thermalWavelength();
  CHECK(lam == doctest::Approx(2.0 * std::numbers::pi * PhysicalConstants::hbar * PhysicalConstants::c /
                               (PhysicalConstants::kB * p.temperature)));
  p.separation = 1e-3 * lam;
  CHECK(p.regime() == Regime::Dipole);
  CHECK(decoherenceRate(p) == doctest::Approx(decoherenceRateDipole(p).value));
  p.separation = 1e3 * lam;
  CHECK(p.regime() == Regime::Saturated);
  CHECK(decoherenceRate(p) == doctest::Approx(decoherenceRateSaturated(p).value));
  p.separation = lam;
  CHECK(p.regime() == Regime::Crossover);
  CHECK(decoherenceRate(p) ==
        doctest::Approx(std::min(decoherenceRateDipole(p).value, decoherenceRateSaturated(p).value)));
}

TEST_CASE("two-branch series") {
  for (double x : {0.0, 0.1, 0.5, 0.8}) CHECK(twoBranchSeries(x).value == doctest::Approx(seriesOracle(x)).epsilon(1e-12));
  CHECK(twoBranchSeries(0.0).value == 0.0);
  CHECK(twoBranchSeries(0.5).terms < 10000);
  // At x = 1 the tail after the term cap is about 1/(4 n).
  SeriesResult edge = twoBranchSeries(1.0);
  CHECK(edge.terms == 10000);
  CHECK(std::abs(edge.value - std::numbers::ln2) < 3e-5);
}

TEST_CASE("photon mutual information endpoints and antisymmetry") {
  for (double gamma : {1e-6, 0.01, 0.3, 0.7, 0.95}) {
    const double hs = twoBranchOracle(gamma);
    CHECK(std::abs(photonMutualInfo(gamma, 0.0)) < 1e-10);
    CHECK(photonMutualInfo(gamma, 1.0) == doctest::Approx(2.0 * hs).epsilon(1e-10));
    CHECK(photonMutualInfo(gamma, 1.0) == doctest::Approx(2.0 * twoBranchEntropy(gamma)).epsilon(1e-10));
    for (double f : {0.1, 0.25, 0.4})
      CHECK(photonMutualInfo(gamma, f) + photonMutualInfo(gamma, 1.0 - f) == doctest::Approx(2.0 * hs).epsilon(1e-10));
  }
}

TEST_CASE("photon mutual information is monotone in f") {
  for (double gamma : {1e-4, 0.2, 0.9}) {
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
      const double v = photonMutualInfo(gamma, i / 50.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("small decoherence factor follows the lowest power") {
  const double gamma = 1e-8;
  for (double f : {0.2, 0.3, 0.45})
    CHECK(std::abs(photonMutualInfo(gamma, f) - (std::numbers::ln2 - 0.5 * std::pow(gamma, f))) < 1e-4);
}

TEST_CASE("plateau widens with time") {
  const double level = 0.9 * std::numbers::ln2;
  double prevF = 1.0;
  for (double tt : {5.0, 10.0, 20.0, 40.0}) {
    const double gamma = std::exp(-tt);
    double f = 1.0;
    for (int i = 1; i <= 1000; ++i)
      if (photonMutualInfo(gamma, i / 1000.0) >= level) {
        f = i / 1000.0;
        break;
      }
    CHECK(f < prevF);
    prevF = f;
  }
}

TEST_CASE("redundancy estimate") {
  CHECK(photonRedundancy(0.0, 0.1) == 0.0);
  CHECK(photonRedundancy(20.0, 0.1) == doctest::Approx(2.0 * photonRedundancy(10.0, 0.1)).epsilon(1e-14));
  CHECK(photonRedundancy(10.0, 0.1) == doctest::Approx(10.0 / std::abs(std::log(0.2 * std::numbers::ln2))));
  CHECK_THROWS_AS(photonRedundancy(10.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(photonRedundancy(10.0, 0.7), std::domain_error);
  for (double tt : {5.0, 10.0, 20.0, 50.0}) {
    const double est = photonRedundancy(tt, 0.1);
    const double inv = photonRedundancyByInversion(tt, 0.1);
    CHECK(std::abs(est - inv) / inv < 0.15);
  }
}

TEST_CASE("isotropic illumination has no classical plateau") {
  const double gamma = std::exp(-30.0);
  const double hs = twoBranchOracle(gamma);
  CHECK(photonMutualInfoIsotropic(gamma, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(photonMutualInfoIsotropic(gamma, 0.3) < 0.05 * hs);
  CHECK(photonMutualInfoIsotropic(gamma, 1.0) == doctest::Approx(hs).epsilon(1e-8));
  CHECK(photonMutualInfoIsotropic(gamma, 0.3) < photonMutualInfo(gamma, 0.3));
}

TEST_CASE("dust grain in sunlight preset") {
  PhotonHaloParams p = PhotonHaloParams::dustGrainSunlight();
  CHECK(p.time == doctest::Approx(1e-6));
  const double tOverTau = p.time * decoherenceRate(p);
  const double r = photonRedundancy(tOverTau, 0.1);
  CHECK(std::log10(r) > 7.0);
  CHECK(std::log10(r) < 10.0);
}

TEST_CASE("photon source") {
  PhotonSource src(10.0, 100);
  CHECK(src.envSize() == 100);
  CHECK(src.systemEntropy() == doctest::Approx(twoBranchOracle(std::exp(-10.0))).epsilon(1e-12));
  FragmentSpec frag{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(src.mutualInfo(frag) == doctest::Approx(photonMutualInfo(std::exp(-10.0), 0.1)).epsilon(1e-12));
}
