#pragma once

#include <utility>
#include <vector>

#include "qd/infomeasures.hpp"
#include "qd/qstate.hpp"

namespace qd {

// sum_k sqrt(p_k) e^{i phi_k} |k>_S (x)_l |eps_k^(l)>, with |k> an implicit orthonormal pointer basis.
struct BranchingState {
  ProbVector branchProbs;
  std::vector<double> branchPhases;
  std::vector<std::vector<CVec>> conditional;  // [branch][subsystem]

  static constexpr int maxBranches = 64;
  static constexpr int maxSubsystems = 1000000;

  int branches() const { return static_cast<int>(branchProbs.size()); }
  int envSize() const { return conditional.empty() ? 0 : static_cast<int>(conditional.front().size()); }
  void validate() const;

  // <eps_j^(l)|eps_k^(l)>
  CMat overlaps(int subsystem) const;

  // Dense global state, system first. Subject to the dimension cap.
  StateVector toStateVector() const;
};

CMat fragmentGram(const BranchingState& b, const FragmentSpec& frag, bool includeSystem);
double fragmentEntropy(const BranchingState& b, const FragmentSpec& frag, bool includeSystem);
double mutualInfoBranching(const BranchingState& b, const FragmentSpec& frag);
double twoBranchEntropy(double gamma);

struct InfoSplit {
  double classical;
  double quantum;
};

InfoSplit classicalQuantumDecomposition(const BranchingState& b, const FragmentSpec& frag);

// Nonzero spectrum of V C V^dagger given only C and the Gram matrix O = V^dagger V.
RVec gramMixtureSpectrum(const CMat& coefficients, const CMat& gram);

// Entropy of S decohered only by the given subsystems.
double decoheredSystemEntropy(const BranchingState& b, const FragmentSpec& frag);

}  // namespace qd
