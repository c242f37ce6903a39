#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qd/branching.hpp"
#include "qd/qstate.hpp"

namespace qd {

// Anything that can report I(S:F) for a fragment of its environment.
class PipSource {
 public:
  virtual ~PipSource() = default;
  virtual int envSize() const = 0;
  virtual double systemEntropy() const = 0;
  virtual double mutualInfo(const FragmentSpec& frag) const = 0;
  virtual std::string tag() const = 0;
  // True when I(S:F) depends only on the fragment size, so one evaluation per size suffices.
  virtual bool sizeOnly() const { return false; }

  // Optional capabilities for pure-decoherence sources.
  virtual std::optional<double> fragmentEntropy(const FragmentSpec&) const { return std::nullopt; }
  virtual std::optional<double> initialFragmentEntropy(const FragmentSpec&) const { return std::nullopt; }
  // Entropy of S had it been decohered by the given subsystems alone.
  virtual std::optional<double> decoheredEntropy(const FragmentSpec&) const { return std::nullopt; }
};

class BranchingSource : public PipSource {
 public:
  explicit BranchingSource(BranchingState b, std::string tag = "branching");
  int envSize() const override { return b_.envSize(); }
  double systemEntropy() const override { return hs_; }
  double mutualInfo(const FragmentSpec& frag) const override;
  std::string tag() const override { return tag_; }
  std::optional<double> fragmentEntropy(const FragmentSpec& frag) const override;
  std::optional<double> initialFragmentEntropy(const FragmentSpec&) const override { return 0.0; }
  std::optional<double> decoheredEntropy(const FragmentSpec& frag) const override;
  const BranchingState& state() const { return b_; }

 private:
  BranchingState b_;
  std::string tag_;
  double hs_;
};

// Dense pure global state; the first `systemSubsystems` factors form S, the rest are environment subsystems.
class DenseSource : public PipSource {
 public:
  DenseSource(StateVector psi, int systemSubsystems = 1, std::string tag = "dense");
  int envSize() const override { return psi_.shape().size() - sys_; }
  double systemEntropy() const override { return hs_; }
  double mutualInfo(const FragmentSpec& frag) const override;
  std::string tag() const override { return tag_; }
  std::optional<double> fragmentEntropy(const FragmentSpec& frag) const override;
  const StateVector& state() const { return psi_; }

 private:
  FragmentSpec globalIndices(const FragmentSpec& frag, bool withSystem) const;
  StateVector psi_;
  int sys_;
  std::string tag_;
  double hs_;
};

// I(S:F) given as a function of the fraction f = #F / envSize.
class AnalyticSource : public PipSource {
 public:
  AnalyticSource(int envSize, double hs, std::function<double(double)> curve, std::string tag = "analytic");
  int envSize() const override { return n_; }
  double systemEntropy() const override { return hs_; }
  double mutualInfo(const FragmentSpec& frag) const override;
  std::string tag() const override { return tag_; }
  bool sizeOnly() const override { return true; }

 private:
  int n_;
  double hs_;
  std::function<double(double)> curve_;
  std::string tag_;
};

struct PipPoint {
  double f;
  int sharpF;
  double meanI;
  double stddev;
  int samples;
};

struct PartialInfoPlot {
  std::vector<PipPoint> points;
  std::string sourceTag;
  double HS = 0.0;
  int envSize = 0;
};

// Every integer up to min(N, 64), then geometric spacing up to N.
std::vector<int> defaultSizeGrid(int envSize, double ratio = 1.15);

PartialInfoPlot buildPIP(const PipSource& source, const std::vector<int>& sizes, int samplesPerFraction,
                         std::uint64_t seed);

struct RedundancyReport {
  double delta = 0.0;
  double f_delta = 1.0;
  double sharpF_delta = 0.0;
  double R_delta = 0.0;
  std::optional<double> R_deltaD;
  bool interpolated = false;
  // False when the (1 - delta) H_S level is only reached beyond f = 1/2.
  bool plateauReached = false;
};

RedundancyReport redundancy(const PartialInfoPlot& pip, double delta);

// Smallest fragment whose decoherence alone leaves S with entropy (1 - deltaD) H_S, expressed as #E / #F.
double redundancyOfDecoherence(const PipSource& source, double deltaD, const std::vector<int>& sizes, int samples,
                               std::uint64_t seed);

// (H_F - H_F(0), H_S - H_{S d E/F}).
InfoSplit decomposeMutualInfo(const PipSource& source, const FragmentSpec& frag);

struct ObservableRow {
  double mu;
  double chi;          // Holevo quantity of F about sigma(mu), averaged over fragments
  double chiStddev;
  double entropy;      // H(sigma(mu)) on the decohered system
  double condEntropy;  // H(sigma(mu) | pointer)
  double chiBound;     // entropy - condEntropy
  bool boundAllowsRedundancy;
  double R_delta;      // #E / smallest fragment with chi >= (1 - delta) entropy; 0 if never
};

// Holevo quantity of F about the outcome of measuring the qubit system along (cos mu, sin mu) in the z-x plane.
double observableHolevo(const BranchingState& b, double mu, const FragmentSpec& frag);

std::vector<ObservableRow> observableSweep(const BranchingState& b, const std::vector<double>& muGrid, int fragmentSize,
                                           int samples, std::uint64_t seed, double delta = 0.1);

// Pure state drawn from the unitarily invariant measure.
StateVector haarRandomState(const HilbertShape& shape, CounterRng& rng);

}  // namespace qd
