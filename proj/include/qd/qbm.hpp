#pragma once

#include <string>

#include "qd/darwin.hpp"
#include "qd/numeric.hpp"

namespace qd {

// Natural units, hbar = 1. Covariance ordering is (x_0, p_0, x_1, p_1, ...); mode 0 is the system.
struct GaussianState {
  RVec means;
  RMat cov;
  bool globallyPure = false;

  int modes() const { return static_cast<int>(cov.rows() / 2); }
  void validate() const;
  RMat block(const std::vector<int>& modeList) const;
};

struct OhmicBathParams {
  double systemMass = 1000.0;
  double omega0 = 4.0;
  double gamma0 = 1.0 / 40.0;
  double cutoff = 16.0;
  int bands = 200;
  double bandMass = 1.0;

  static constexpr int maxBands = 256;
  void validate() const;
  double bandWidth() const { return cutoff / bands; }
  double recurrenceTime() const;
  double bandFrequency(int n) const { return (n + 0.5) * bandWidth(); }
  double coupling(int n) const;
};

enum class Squeeze { X, P };

// a^2 = (hbar/2)^{-2} det(delta) for a 2x2 block.
double symplecticArea(const Eigen::Matrix2d& delta);
double gaussianEntropy(double a);
RVec symplecticEigenvalues(const RMat& cov);
double gaussianStateEntropy(const RMat& cov);

struct QbmRun {
  GaussianState state;
  bool beyondRecurrence;
};

// Squeezing s scales the ground-state width of the squeezed quadrature by 1/s.
QbmRun qbmEvolve(const OhmicBathParams& bath, double s, Squeeze direction, double t);

// frag lists bath bands, 0-based.
double qbmMutualInfo(const GaussianState& state, const FragmentSpec& frag);

double universalPIP(double hs, double f);
double qbmRedundancy(double s, double delta);

class GaussianSource : public PipSource {
 public:
  explicit GaussianSource(GaussianState state);
  int envSize() const override { return state_.modes() - 1; }
  double systemEntropy() const override { return hs_; }
  double mutualInfo(const FragmentSpec& frag) const override { return qbmMutualInfo(state_, frag); }
  std::string tag() const override { return "qbm"; }

 private:
  GaussianState state_;
  double hs_;
};

}  // namespace qd
