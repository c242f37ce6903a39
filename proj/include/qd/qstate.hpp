#pragma once

#include <cstddef>
#include <vector>

#include "qd/numeric.hpp"

namespace qd {

// Per-subsystem dimensions. Subsystem 0 is the leftmost (most significant) tensor factor.
class HilbertShape {
 public:
  HilbertShape() = default;
  explicit HilbertShape(std::vector<int> dims);
  static HilbertShape qubits(int n);

  const std::vector<int>& dims() const { return dims_; }
  int size() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(i); }
  std::size_t total() const { return total_; }
  std::size_t productOf(const std::vector<int>& subsystems) const;
  HilbertShape restrictTo(const std::vector<int>& subsystems) const;
  HilbertShape concat(const HilbertShape& other) const;

  bool operator==(const HilbertShape& o) const { return dims_ == o.dims_; }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
};

// Subsystem positions. Order matters only where stated (applyUnitary targets).
using FragmentSpec = std::vector<int>;

void validateFragment(const HilbertShape& shape, const FragmentSpec& frag);
FragmentSpec complementOf(const HilbertShape& shape, const FragmentSpec& frag);

// Offsets of every multi-index over `subsystems` (in the given order) into the full index space.
std::vector<std::size_t> indexOffsets(const HilbertShape& shape, const FragmentSpec& subsystems);

class StateVector {
 public:
  StateVector(HilbertShape shape, CVec amplitudes);

  static StateVector basis(const HilbertShape& shape, std::size_t index);
  static StateVector normalized(HilbertShape shape, CVec amplitudes);

  const HilbertShape& shape() const { return shape_; }
  const CVec& amplitudes() const { return amps_; }

 private:
  HilbertShape shape_;
  CVec amps_;
};

class DensityMatrix {
 public:
  DensityMatrix(HilbertShape shape, CMat matrix);

  static DensityMatrix fromPure(const StateVector& psi);

  const HilbertShape& shape() const { return shape_; }
  const CMat& matrix() const { return m_; }

 private:
  HilbertShape shape_;
  CMat m_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix partialTrace(const DensityMatrix& rho, const FragmentSpec& keep);
DensityMatrix partialTrace(const StateVector& psi, const FragmentSpec& keep);

// Nonzero spectrum of the reduced state on `part`, via the smaller of the two Gram matrices.
RVec reducedSpectrum(const StateVector& psi, const FragmentSpec& part);
double entanglementEntropy(const StateVector& psi, const FragmentSpec& part);

StateVector applyUnitary(const StateVector& state, const CMat& u, const FragmentSpec& targets);
DensityMatrix applyUnitary(const DensityMatrix& rho, const CMat& u, const FragmentSpec& targets);

// Full-space matrix of `op` acting on `targets` (in the given order), identity elsewhere.
CMat embedOperator(const HilbertShape& shape, const CMat& op, const FragmentSpec& targets);

struct SchmidtTerm {
  double coefficient;
  StateVector left;
  StateVector right;
};

// `bipartition` lists the left subsystems; the rest form the right factor.
std::vector<SchmidtTerm> schmidt(const StateVector& state, const FragmentSpec& bipartition);

StateVector evolveDiagonal(const StateVector& state, const RVec& phases);

double fidelity(const StateVector& a, const StateVector& b);
bool isUnitary(const CMat& u, double tol);

}  // namespace qd
