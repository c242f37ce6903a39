#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qd {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Tolerances shared by every module.
struct NumericPolicy {
  double stateTol = 1e-10;
  double spectrumTol = 1e-9;
  double eigenClip = 1e-12;
  std::size_t dimensionCap = std::size_t{1} << 20;
};

NumericPolicy& policy();

// Thrown when a construction would exceed NumericPolicy::dimensionCap or a module cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Counter-based generator: output i is a pure function of (seed, stream, i).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();
  double uniform();                    // [0, 1)
  double uniformOpenLeft();            // (0, 1]
  double normal(double sigma = 1.0);   // zero mean
  std::size_t below(std::size_t n);    // uniform in [0, n)
  std::vector<int> sampleSubset(int n, int k);  // k distinct sorted values from [0, n)
  CounterRng split(std::uint64_t stream) const;

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// Entropy of a spectrum in nats with the policy clip applied.
double spectrumEntropy(const RVec& eigenvalues);

// Eigenvalues of a Hermitian matrix (ascending).
RVec hermitianEigenvalues(const CMat& m);

inline double sq(double x) { return x * x; }

}  // namespace qd
