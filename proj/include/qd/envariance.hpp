#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "qd/infomeasures.hpp"

namespace qd {

using Rational = boost::rational<long long>;

// Pure state sum_k a_k |s_k>|e_k>.
struct SchmidtPair {
  CVec coefficients;
  std::vector<CVec> systemBasis;
  std::vector<CVec> envBasis;

  // Computational bases of dimension coefficients.size() on both sides.
  static SchmidtPair standard(const CVec& coefficients);
  void validate() const;
  int systemDim() const;
  int envDim() const;
  StateVector state() const;
};

struct OrthogonalityPair {
  int j, k;
  cplx systemOverlap;  // <s_j|s_k>
  cplx recordOverlap;  // <e_j|e_k>
  double residual;     // |<s_j|s_k>(1 - <e_j|e_k>)|
  bool violation;
};

struct OrthogonalityReport {
  std::vector<bool> preserved;        // whether U leaves each candidate undisturbed
  std::vector<CVec> records;          // |e_j>, empty when not preserved
  std::vector<OrthogonalityPair> pairs;  // preserved pairs only
  bool consistent;                    // no violating pair
};

// Applies U to |s_j>|envInit> for each candidate and checks repeatability against overlap.
OrthogonalityReport orthogonalityCheck(const std::vector<CVec>& sStates, const CMat& transferUnitary,
                                       const CVec& envInit);

struct SwapResult {
  StateVector swapped;
  StateVector restored;
  CMat swap;         // on S
  CMat counterswap;  // on E
  bool envariant;
  double swappedFidelity;
  double restoredFidelity;
};

SwapResult swapAndCounterswap(const SchmidtPair& state, int k, int l);

struct PhaseResult {
  CMat systemUnitary;
  CMat envUnitary;
  double restoredFidelity;
};

// Schmidt-diagonal phases on S undone by conjugate phases on E.
PhaseResult phaseCountertransform(const SchmidtPair& state, const RVec& phases);

struct FineGrainSpec {
  std::vector<long long> mu;
  long long cap = 65536;

  long long total() const;
  void validate() const;
};

struct FineGrainResult {
  std::vector<Rational> exact;
  ProbVector probabilities;
  std::vector<long long> branchCounts;
  long long totalBranches;
  double maxAmplitudeSpread;  // max deviation of fine-grained branch amplitudes from 1/sqrt(M)
};

FineGrainResult fineGrainDetailed(const FineGrainSpec& spec);
ProbVector fineGrainBorn(const FineGrainSpec& spec);
// Best rational approximation with denominator M of target probabilities (largest remainder).
FineGrainSpec fineGrainApproximation(const ProbVector& target, long long M);

Rational coarseGrainProbability(long long N, const std::vector<long long>& subset);
// Removes the complement one fine-grained event at a time and multiplies the conditional probabilities.
Rational coarseGrainRecursive(long long N, long long subsetSize);

struct RecordProjectorSet {
  std::vector<CMat> projectors;
};

struct AlgebraReport {
  bool commutativity;
  bool associativity;
  bool absorptivity;
  bool distributivity;
  bool orthocompleteness;
  double maxError;
  bool all() const { return commutativity && associativity && absorptivity && distributivity && orthocompleteness; }
};

AlgebraReport recordAlgebraCheck(const RecordProjectorSet& set, double tol = 1e-12);

// p_M(m) for m = 0..M ones.
RVec branchFrequencies(long long M, double w0, double w1);
RVec gaussianFrequencies(long long M, double w0, double w1);
double totalVariation(const RVec& p, const RVec& q);
// Amplitudes |gamma_m| of the even representation, proportional to sqrt(C(M, m)) |alpha|^(M-m) |beta|^m.
RVec branchAmplitudes(long long M, double w0, double w1);

enum class CircuitVariant { Ideal, OmitCounterswap, WrongTarget };

struct CircuitStage {
  std::string label;
  double agentPurity;
  double seFidelity;
};

// Agent A, system S, environment E. The seed draws the phase of the agent's superposition.
std::vector<CircuitStage> agentCircuit(double systemPhase, std::uint64_t seed,
                                       CircuitVariant variant = CircuitVariant::Ideal);

struct ReversalResult {
  double withoutCopy;
  DensityMatrix withCopy;
  double withCopyFidelity;
};

// S, A, D each of dimension amplitudes.size(); U_SA and U_AD are controlled shifts.
ReversalResult reversalDemo(const CVec& amplitudes);

}  // namespace qd
