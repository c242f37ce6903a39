#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qd/qstate.hpp"

namespace qd {

using ProbVector = std::vector<double>;

void validateProbVector(const ProbVector& p);

// Complete set of orthogonal projectors on a designated subsystem set.
struct MeasurementBasis {
  std::vector<CMat> projectors;

  static MeasurementBasis fromVectors(const std::vector<CVec>& orthonormal);
  static MeasurementBasis computational(int dim);
  // Qubit basis along the Bloch direction (theta, phi).
  static MeasurementBasis qubit(double theta, double phi);
  void validate() const;
  int dim() const;
};

struct Ensemble {
  std::vector<std::pair<double, DensityMatrix>> members;
};

double vonNeumannEntropy(const DensityMatrix& rho);
double shannonEntropy(const ProbVector& p);
double mutualInformation(const DensityMatrix& rho, const FragmentSpec& partA);

// Result of projecting part of a state. `state` is empty when the outcome has zero probability.
struct Conditional {
  std::optional<DensityMatrix> state;
  double probability;
};

// Projects `onSubsystems` with `projector`; the returned state lives on the complement.
Conditional conditionalState(const DensityMatrix& rho, const CMat& projector, const FragmentSpec& onSubsystems);

double averageConditionalEntropy(const DensityMatrix& rho, const MeasurementBasis& basis,
                                 const FragmentSpec& onSubsystems);
double asymmetricMutualInfo(const DensityMatrix& rho, const MeasurementBasis& basis, const FragmentSpec& onSubsystems);
double discord(const DensityMatrix& rho, const MeasurementBasis& basis, const FragmentSpec& onSubsystems);

struct DiscordGrid {
  int qubitTheta = 90;
  int qubitPhi = 180;
  int qutritSteps = 6;
  int maxDim = 3;
};

double minDiscord(const DensityMatrix& rho, const FragmentSpec& onSubsystems, const DiscordGrid& grid = {});

double holevo(const Ensemble& ensemble);

// Mutual information of the joint outcome distribution of obsA on partA and obsB on the complement.
double shannonMutualObservables(const DensityMatrix& rho, const FragmentSpec& partA, const MeasurementBasis& obsA,
                                const MeasurementBasis& obsB);

}  // namespace qd
