#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qd/branching.hpp"
#include "qd/darwin.hpp"
#include "qd/qstate.hpp"

namespace qd {

BranchingState cnotModel(cplx a, cplx b, int n);

CVec plusState();

struct CentralSpinParams {
  std::vector<double> couplings;  // d_i, inverse time
  double t = 0.0;
  CVec envInit = plusState();
  cplx a = cplx(1.0 / std::sqrt(2.0));
  cplx b = cplx(1.0 / std::sqrt(2.0));
};

// Couplings uniform in (0, 1].
CentralSpinParams randomCentralSpin(int n, double t, std::uint64_t seed);

BranchingState centralSpinBranching(const CentralSpinParams& p);

// Same model as a dense state vector, system qubit first.
StateVector centralSpinDense(const CentralSpinParams& p);

struct RedundancyEstimate {
  double sharpF_delta;
  double R_delta;
};

RedundancyEstimate redundancyEstimate(double hs, double dE, double sharpE, double delta);

// Near-plateau mutual information of a fragment of sharpF subsystems out of sharpE.
double centralSpinPlateau(double hs, double dE, double sharpF, double sharpE);

struct InteractingEnvParams {
  RVec d;  // system-environment couplings
  RMat m;  // symmetric, zero diagonal
  double t = 0.0;
  // When false the pair sum runs over j != k (each pair twice).
  bool unorderedPairs = true;
};

InteractingEnvParams randomInteracting(int n, double sigmaD, double sigmaM, double t, std::uint64_t seed);

StateVector interactingEvolve(const InteractingEnvParams& p, cplx a, cplx b, const CVec& envInit = plusState());

struct HazyParams {
  double h = 0.0;                   // entropy per environment qubit, nats
  double hm = std::log(2.0);        // capacity, ln d_E
};

// Central-spin run whose environment qubits start mixed with entropy h, diagonal in the basis of envInit and its
// orthogonal partner. Reduced states of S and environment qubits are exact; fragments are limited by the dimension cap.
class HazyCentralSpin : public PipSource {
 public:
  HazyCentralSpin(CentralSpinParams base, HazyParams hp);

  int envSize() const override { return static_cast<int>(base_.couplings.size()); }
  double systemEntropy() const override { return hs_; }
  double mutualInfo(const FragmentSpec& frag) const override;
  std::string tag() const override { return "hazy-central-spin"; }
  std::optional<double> fragmentEntropy(const FragmentSpec& frag) const override;
  std::optional<double> initialFragmentEntropy(const FragmentSpec& frag) const override;
  std::optional<double> decoheredEntropy(const FragmentSpec& frag) const override;

  // Exact rho_{SF}, system first.
  DensityMatrix systemFragmentState(const FragmentSpec& frag) const;
  // Purification with one ancilla per environment qubit: S, then (E_i, A_i) pairs.
  StateVector purified() const;
  double mixingWeight() const { return lambda_; }

 private:
  CMat branchBlock(int i, int j, int k) const;  // U_j rho_i U_k^dagger
  CentralSpinParams base_;
  HazyParams hp_;
  double lambda_;
  CMat rho0_;
  double hs_;
};

// Inverse of the binary entropy on [1/2, 1].
double binaryEntropyInverse(double h);

struct HazyRedundancy {
  double R_delta;
  double R_delta_pure;
  double R_deltaD;
  RedundancyReport report;
};

HazyRedundancy hazyRedundancy(const CentralSpinParams& base, const HazyParams& hp, double delta, int samples,
                              std::uint64_t seed);

}  // namespace qd
