#pragma once

#include <string>

#include "qd/darwin.hpp"

namespace qd {

struct PhysicalConstants {
  static constexpr double kB = 1.380649e-23;      // J/K
  static constexpr double c = 299792458.0;        // m/s
  static constexpr double hbar = 1.054571817e-34; // J s
  static double zeta7();
  static double zeta9();
  static double dipoleConstant();     // C_Gamma
  static double saturatedConstant();  // C~_Gamma
};

enum class RadiusMode { Printed, ClausiusMossotti };

enum class Regime { Dipole, Crossover, Saturated };

struct PhotonHaloParams {
  double radius = 1e-6;            // m
  double permittivity = 100.0;     // relative
  double irradiance = 1361.0;      // W/m^2
  double temperature = 5250.0;     // K
  double separation = 1e-6;        // m
  double angle = 0.0;              // rad, between illumination and separation
  double time = 1e-6;              // s
  RadiusMode radiusMode = RadiusMode::Printed;

  void validate() const;
  double thermalWavelength() const;  // 2 pi hbar c / (kB T), m
  Regime regime() const;
  static PhotonHaloParams dustGrainSunlight();
};

double effectiveRadius(double r, double epsilon, RadiusMode mode = RadiusMode::Printed);

struct Rate {
  double value;        // 1/s
  bool regimeValid;    // false when the separation lies outside the formula's limit
};

Rate decoherenceRateDipole(const PhotonHaloParams& p);
Rate decoherenceRateSaturated(const PhotonHaloParams& p);
// Dipole rate for short separations, saturated rate otherwise (the smaller of the two in the crossover).
double decoherenceRate(const PhotonHaloParams& p);

struct SeriesResult {
  double value;
  int terms;
};

// sum_{n>=1} x^n / (2n(2n-1)), truncated once a term drops below 1e-15 or at 10^4 terms.
SeriesResult twoBranchSeries(double x);

double photonMutualInfo(double gamma, double f);
// Fully mixed photon environment: only the quantum term survives.
double photonMutualInfoIsotropic(double gamma, double f);
double photonRedundancy(double tOverTau, double delta);

// f at which the point-source curve first reaches (1 - delta) H_S, by bisection; R = 1 / f.
double photonRedundancyByInversion(double tOverTau, double delta);

class PhotonSource : public AnalyticSource {
 public:
  PhotonSource(double tOverTau, int envSize, bool isotropic = false);
};

}  // namespace qd
