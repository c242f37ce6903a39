#include "qd/photonenv.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "qd/branching.hpp"

namespace qd {

double PhysicalConstants::zeta7() { return std::riemann_zeta(7.0); }
double PhysicalConstants::zeta9() { return std::riemann_zeta(9.0); }

double PhysicalConstants::dipoleConstant() {
  return 161280.0 * zeta9() / (std::numbers::pi * std::numbers::pi * std::numbers::pi);
}

double PhysicalConstants::saturatedConstant() {
  return 57600.0 * zeta7() / (std::numbers::pi * std::numbers::pi * std::numbers::pi);
}

void PhotonHaloParams::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("PhotonHaloParams: radius must be positive");
  if (!(permittivity > 1.0)) throw std::invalid_argument("PhotonHaloParams: permittivity must exceed 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("PhotonHaloParams: temperature must be positive");
  if (irradiance < 0.0 || separation < 0.0 || time < 0.0)
    throw std::invalid_argument("PhotonHaloParams: irradiance, separation and time must be nonnegative");
}

double PhotonHaloParams::thermalWavelength() const {
  return 2.0 * std::numbers::pi * PhysicalConstants::hbar * PhysicalConstants::c / (PhysicalConstants::kB * temperature);
}

Regime PhotonHaloParams::regime() const {
  const double ratio = separation / thermalWavelength();
  if (ratio < 0.1) return Regime::Dipole;
  if (ratio > 10.0) return Regime::Saturated;
  return Regime::Crossover;
}

PhotonHaloParams PhotonHaloParams::dustGrainSunlight() { return PhotonHaloParams{}; }

double effectiveRadius(double r, double epsilon, RadiusMode mode) {
  if (!(r > 0.0)) throw std::invalid_argument("effectiveRadius: radius must be positive");
  if (mode == RadiusMode::Printed) {
    if (epsilon == 2.0) throw std::domain_error("effectiveRadius: pole at epsilon = 2");
    return r * std::cbrt((epsilon - 1.0) / (epsilon - 2.0));
  }
  return r * std::cbrt((epsilon - 1.0) / (epsilon + 2.0));
}

Rate decoherenceRateDipole(const PhotonHaloParams& p) {
  p.validate();
  using K = PhysicalConstants;
  const double a = effectiveRadius(p.radius, p.permittivity, p.radiusMode);
  const double kt = K::kB * p.temperature;
  const double cos2 = std::cos(p.angle) * std::cos(p.angle);
  const double scale = std::pow(kt / (K::c * K::hbar), 5) / (K::c * K::hbar);
  double v = K::dipoleConstant() * (3.0 + 11.0 * cos2) * p.irradiance * std::pow(a, 6) * p.separation * p.separation *
             scale;
  return {v, p.regime() == Regime::Dipole};
}

Rate decoherenceRateSaturated(const PhotonHaloParams& p) {
  p.validate();
  using K = PhysicalConstants;
  const double a = effectiveRadius(p.radius, p.permittivity, p.radiusMode);
  const double kt = K::kB * p.temperature;
  const double scale = std::pow(kt / (K::c * K::hbar), 3) / (K::c * K::hbar);
  double v = K::saturatedConstant() * p.irradiance * std::pow(a, 6) * scale;
  return {v, p.regime() == Regime::Saturated};
}

double decoherenceRate(const PhotonHaloParams& p) {
  switch (p.regime()) {
    case Regime::Dipole:
      return decoherenceRateDipole(p).value;
    case Regime::Saturated:
      return decoherenceRateSaturated(p).value;
    default:
      return std::min(decoherenceRateDipole(p).value, decoherenceRateSaturated(p).value);
  }
}

SeriesResult twoBranchSeries(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("twoBranchSeries: argument outside [0, 1]");
  double sum = 0.0, power = 1.0;
  int n = 1;
  for (; n <= 10000; ++n) {
    power *= x;
    const double term = power / (2.0 * n * (2.0 * n - 1.0));
    sum += term;
    if (term < 1e-15) break;
  }
  return {sum, std::min(n, 10000)};
}

namespace {

// ln 2 - sum x^n / (2n(2n-1)), with the closed form once the series converges slowly.
double branchEntropyOf(double x) {
  if (x > 0.9) return twoBranchEntropy(x);
  return std::numbers::ln2 - twoBranchSeries(x).value;
}

}  // namespace

double photonMutualInfo(double gamma, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("photonMutualInfo: f outside [0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("photonMutualInfo: gamma outside [0, 1]");
  // H_F + H_S - H_{S d E/F}, each a two-branch entropy.
  const double hf = branchEntropyOf(std::pow(gamma, f));
  const double hs = branchEntropyOf(gamma);
  const double hRest = branchEntropyOf(std::pow(gamma, 1.0 - f));
  return hf + hs - hRest;
}

double photonMutualInfoIsotropic(double gamma, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("photonMutualInfoIsotropic: f outside [0, 1]");
  return branchEntropyOf(gamma) - branchEntropyOf(std::pow(gamma, 1.0 - f));
}

double photonRedundancy(double tOverTau, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::domain_error("photonRedundancy: delta outside (0, 0.5)");
  if (tOverTau < 0.0) throw std::domain_error("photonRedundancy: negative time");
  return tOverTau / std::abs(std::log(2.0 * delta * std::numbers::ln2));
}

double photonRedundancyByInversion(double tOverTau, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("photonRedundancyByInversion: delta outside (0, 1)");
  const double gamma = std::exp(-tOverTau);
  const double target = (1.0 - delta) * branchEntropyOf(gamma);
  auto g = [&](double f) { return photonMutualInfo(gamma, f) - target; };
  if (g(0.5) < 0.0) throw std::domain_error("photonRedundancyByInversion: plateau not reached below f = 1/2");
  auto r = boost::math::tools::bisect(g, 0.0, 0.5, boost::math::tools::eps_tolerance<double>(50));
  return 1.0 / (0.5 * (r.first + r.second));
}

PhotonSource::PhotonSource(double tOverTau, int envSize, bool isotropic)
    : AnalyticSource(
          envSize, branchEntropyOf(std::exp(-tOverTau)),
          [gamma = std::exp(-tOverTau), isotropic](double f) {
            return isotropic ? photonMutualInfoIsotropic(gamma, f) : photonMutualInfo(gamma, f);
          },
          isotropic ? "photon-isotropic" : "photon") {}

}  // namespace qd
