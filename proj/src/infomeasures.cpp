#include "qd/infomeasures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace qd {

void validateProbVector(const ProbVector& p) {
  double s = 0.0;
  for (double v : p) {
    if (v < -policy().stateTol) throw std::invalid_argument("probability vector has a negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > policy().spectrumTol) throw std::invalid_argument("probability vector does not sum to 1");
}

MeasurementBasis MeasurementBasis::fromVectors(const std::vector<CVec>& orthonormal) {
  MeasurementBasis b;
  for (const CVec& v : orthonormal) b.projectors.push_back(v * v.adjoint());
  b.validate();
  return b;
}

MeasurementBasis MeasurementBasis::computational(int dim) {
  std::vector<CVec> vs;
  for (int i = 0; i < dim; ++i) vs.push_back(CVec::Unit(dim, i));
  return fromVectors(vs);
}

MeasurementBasis MeasurementBasis::qubit(double theta, double phi) {
  CVec up(2), down(2);
  up << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  down << -std::polar(std::sin(theta / 2), -phi), std::cos(theta / 2);
  return fromVectors({up, down});
}

int MeasurementBasis::dim() const {
  if (projectors.empty()) throw std::invalid_argument("MeasurementBasis: empty");
  return static_cast<int>(projectors.front().rows());
}

void MeasurementBasis::validate() const {
  const int d = dim();
  const double tol = policy().stateTol;
  CMat sum = CMat::Zero(d, d);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const CMat& p = projectors[i];
    if (p.rows() != d || p.cols() != d) throw std::invalid_argument("MeasurementBasis: projector size mismatch");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("MeasurementBasis: projector not idempotent");
    for (std::size_t j = i + 1; j < projectors.size(); ++j)
      if ((p * projectors[j]).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("MeasurementBasis: projectors not orthogonal");
    sum += p;
  }
  if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("MeasurementBasis: projectors do not sum to identity");
}

double vonNeumannEntropy(const DensityMatrix& rho) { return spectrumEntropy(hermitianEigenvalues(rho.matrix())); }

double shannonEntropy(const ProbVector& p) {
  validateProbVector(p);
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

namespace {

FragmentSpec checkedPart(const DensityMatrix& rho, const FragmentSpec& part) {
  validateFragment(rho.shape(), part);
  if (part.empty() || static_cast<int>(part.size()) == rho.shape().size())
    throw std::invalid_argument("trivial bipartition");
  return part;
}

}  // namespace

double mutualInformation(const DensityMatrix& rho, const FragmentSpec& partA) {
  checkedPart(rho, partA);
  FragmentSpec partB = complementOf(rho.shape(), partA);
  return vonNeumannEntropy(partialTrace(rho, partA)) + vonNeumannEntropy(partialTrace(rho, partB)) -
         vonNeumannEntropy(rho);
}

Conditional conditionalState(const DensityMatrix& rho, const CMat& projector, const FragmentSpec& onSubsystems) {
  checkedPart(rho, onSubsystems);
  CMat full = embedOperator(rho.shape(), projector, onSubsystems);
  CMat projected = full * rho.matrix() * full;
  double p = projected.trace().real();
  if (p <= policy().eigenClip) return {std::nullopt, std::max(p, 0.0)};
  projected /= p;
  projected = 0.5 * (projected + projected.adjoint());
  DensityMatrix joint(rho.shape(), std::move(projected));
  return {partialTrace(joint, complementOf(rho.shape(), onSubsystems)), p};
}

double averageConditionalEntropy(const DensityMatrix& rho, const MeasurementBasis& basis,
                                 const FragmentSpec& onSubsystems) {
  double h = 0.0;
  for (const CMat& proj : basis.projectors) {
    Conditional c = conditionalState(rho, proj, onSubsystems);
    if (c.state) h += c.probability * vonNeumannEntropy(*c.state);
  }
  return h;
}

double asymmetricMutualInfo(const DensityMatrix& rho, const MeasurementBasis& basis, const FragmentSpec& onSubsystems) {
  FragmentSpec other = complementOf(rho.shape(), checkedPart(rho, onSubsystems));
  return vonNeumannEntropy(partialTrace(rho, other)) - averageConditionalEntropy(rho, basis, onSubsystems);
}

double discord(const DensityMatrix& rho, const MeasurementBasis& basis, const FragmentSpec& onSubsystems) {
  return mutualInformation(rho, onSubsystems) - asymmetricMutualInfo(rho, basis, onSubsystems);
}

namespace {

// Orthonormal qutrit bases as columns of exp(i sum_a x_a G_a) over the six off-diagonal Gell-Mann generators.
CMat qutritBasis(const std::array<double, 6>& x) {
  const cplx I(0.0, 1.0);
  CMat h = CMat::Zero(3, 3);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    int a = pairs[k][0], b = pairs[k][1];
    h(a, b) += x[2 * k];
    h(b, a) += x[2 * k];
    h(a, b) += -I * x[2 * k + 1];
    h(b, a) += I * x[2 * k + 1];
  }
  CMat ih = I * h;
  return ih.exp();
}

}  // namespace

double minDiscord(const DensityMatrix& rho, const FragmentSpec& onSubsystems, const DiscordGrid& grid) {
  checkedPart(rho, onSubsystems);
  const auto d = static_cast<int>(rho.shape().productOf(onSubsystems));
  if (d > grid.maxDim || d > 3) throw CapExceeded("minDiscord: measured subsystem dimension above search cap");
  const double mi = mutualInformation(rho, onSubsystems);
  FragmentSpec other = complementOf(rho.shape(), onSubsystems);
  const double hOther = vonNeumannEntropy(partialTrace(rho, other));
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const MeasurementBasis& b) {
    best = std::min(best, mi - (hOther - averageConditionalEntropy(rho, b, onSubsystems)));
  };
  if (d == 2) {
    for (int i = 0; i <= grid.qubitTheta; ++i)
      for (int j = 0; j < grid.qubitPhi; ++j)
        consider(MeasurementBasis::qubit(std::numbers::pi * i / grid.qubitTheta,
                                         2.0 * std::numbers::pi * j / grid.qubitPhi));
  } else {
    const int n = grid.qutritSteps;
    std::array<int, 6> idx{};
    for (;;) {
      std::array<double, 6> x{};
      for (int k = 0; k < 6; ++k) x[k] = std::numbers::pi * idx[k] / n;
      CMat u = qutritBasis(x);
      std::vector<CVec> cols;
      for (int c = 0; c < 3; ++c) cols.push_back(u.col(c));
      consider(MeasurementBasis::fromVectors(cols));
      int k = 0;
      while (k < 6 && ++idx[k] == n) idx[k++] = 0;
      if (k == 6) break;
    }
  }
  return best;
}

double holevo(const Ensemble& ensemble) {
  if (ensemble.members.empty()) throw std::invalid_argument("holevo: empty ensemble");
  const HilbertShape& shape = ensemble.members.front().second.shape();
  ProbVector w;
  CMat avg = CMat::Zero(ensemble.members.front().second.matrix().rows(), ensemble.members.front().second.matrix().cols());
  double inner = 0.0;
  for (const auto& [p, rho] : ensemble.members) {
    if (!(rho.shape() == shape)) throw std::invalid_argument("holevo: ensemble members differ in shape");
    w.push_back(p);
    avg += p * rho.matrix();
    inner += p * vonNeumannEntropy(rho);
  }
  validateProbVector(w);
  return spectrumEntropy(hermitianEigenvalues(avg)) - inner;
}

double shannonMutualObservables(const DensityMatrix& rho, const FragmentSpec& partA, const MeasurementBasis& obsA,
                                const MeasurementBasis& obsB) {
  checkedPart(rho, partA);
  FragmentSpec partB = complementOf(rho.shape(), partA);
  const std::size_t na = obsA.projectors.size(), nb = obsB.projectors.size();
  std::vector<double> joint(na * nb, 0.0), pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    CMat fa = embedOperator(rho.shape(), obsA.projectors[i], partA);
    for (std::size_t j = 0; j < nb; ++j) {
      CMat fb = embedOperator(rho.shape(), obsB.projectors[j], partB);
      double p = std::max(0.0, (fa * fb * rho.matrix()).trace().real());
      joint[i * nb + j] = p;
      pa[i] += p;
      pb[j] += p;
    }
  }
  auto h = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
      if (x > 0.0) s -= x * std::log(x);
    return s;
  };
  return h(pa) + h(pb) - h(joint);
}

}  // namespace qd
