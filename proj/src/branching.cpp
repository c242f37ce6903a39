#include "qd/branching.hpp"

#include <cmath>
#include <numbers>

namespace qd {

void BranchingState::validate() const {
  const int k = branches();
  if (k < 1) throw std::invalid_argument("BranchingState: needs at least one branch");
  if (k > maxBranches) throw CapExceeded("BranchingState: branch count above cap");
  validateProbVector(branchProbs);
  if (static_cast<int>(branchPhases.size()) != k || static_cast<int>(conditional.size()) != k)
    throw std::invalid_argument("BranchingState: inconsistent branch count");
  const int n = envSize();
  if (n > maxSubsystems) throw CapExceeded("BranchingState: environment size above cap");
  for (const auto& row : conditional) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("BranchingState: ragged conditional table");
    for (int l = 0; l < n; ++l) {
      if (row[l].size() != conditional.front()[l].size())
        throw std::invalid_argument("BranchingState: subsystem dimension differs between branches");
      if (std::abs(row[l].norm() - 1.0) > policy().stateTol)
        throw std::invalid_argument("BranchingState: conditional state not normalized");
    }
  }
}

CMat BranchingState::overlaps(int subsystem) const {
  const int k = branches();
  CMat o(k, k);
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < k; ++m) o(j, m) = conditional[j][subsystem].dot(conditional[m][subsystem]);
  return o;
}

StateVector BranchingState::toStateVector() const {
  const int k = branches(), n = envSize();
  std::vector<int> dims{std::max(k, 2)};
  for (int l = 0; l < n; ++l) dims.push_back(static_cast<int>(conditional.front()[l].size()));
  HilbertShape shape(dims);
  const auto envDim = static_cast<Eigen::Index>(shape.total() / dims[0]);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(shape.total()));
  for (int j = 0; j < k; ++j) {
    CVec env = CVec::Ones(1);
    for (int l = 0; l < n; ++l) {
      const CVec& e = conditional[j][l];
      CVec next(env.size() * e.size());
      for (Eigen::Index a = 0; a < env.size(); ++a) next.segment(a * e.size(), e.size()) = env(a) * e;
      env.swap(next);
    }
    out.segment(j * envDim, envDim) = std::sqrt(branchProbs[j]) * std::polar(1.0, branchPhases[j]) * env;
  }
  return StateVector(std::move(shape), std::move(out));
}

namespace {

void checkEnvFragment(const BranchingState& b, const FragmentSpec& frag) {
  std::vector<bool> seen(b.envSize(), false);
  for (int l : frag) {
    if (l < 0 || l >= b.envSize()) throw std::out_of_range("fragment index out of range");
    if (seen[l]) throw std::invalid_argument("fragment index repeated");
    seen[l] = true;
  }
}

}  // namespace

CMat fragmentGram(const BranchingState& b, const FragmentSpec& frag, bool includeSystem) {
  const int k = b.branches();
  checkEnvFragment(b, frag);
  CMat g(k, k);
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < k; ++m) {
      if (includeSystem && j != m) {
        g(j, m) = 0.0;
        continue;
      }
      cplx v = std::sqrt(b.branchProbs[j] * b.branchProbs[m]) * std::polar(1.0, b.branchPhases[m] - b.branchPhases[j]);
      if (j != m)
        for (int l : frag) v *= b.conditional[j][l].dot(b.conditional[m][l]);
      g(j, m) = v;
    }
  return g;
}

namespace {

FragmentSpec envComplement(const BranchingState& b, const FragmentSpec& frag) {
  std::vector<bool> in(b.envSize(), false);
  for (int l : frag) in.at(l) = true;
  FragmentSpec rest;
  rest.reserve(b.envSize() - frag.size());
  for (int l = 0; l < b.envSize(); ++l)
    if (!in[l]) rest.push_back(l);
  return rest;
}

double gramEntropy(const CMat& g) { return spectrumEntropy(hermitianEigenvalues(g)); }

}  // namespace

double fragmentEntropy(const BranchingState& b, const FragmentSpec& frag, bool includeSystem) {
  if (includeSystem) return gramEntropy(fragmentGram(b, envComplement(b, frag), false));
  return gramEntropy(fragmentGram(b, frag, false));
}

double decoheredSystemEntropy(const BranchingState& b, const FragmentSpec& frag) {
  return gramEntropy(fragmentGram(b, frag, false));
}

double mutualInfoBranching(const BranchingState& b, const FragmentSpec& frag) {
  FragmentSpec all(b.envSize());
  for (int l = 0; l < b.envSize(); ++l) all[l] = l;
  return gramEntropy(fragmentGram(b, all, false)) + fragmentEntropy(b, frag, false) - fragmentEntropy(b, frag, true);
}

double twoBranchEntropy(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("twoBranchEntropy: gamma outside [0, 1]");
  const double g = std::sqrt(gamma);
  if (g >= 1.0) return 0.0;
  return std::numbers::ln2 - 0.5 * ((1.0 + g) * std::log1p(g) + (1.0 - g) * std::log1p(-g));
}

InfoSplit classicalQuantumDecomposition(const BranchingState& b, const FragmentSpec& frag) {
  FragmentSpec all(b.envSize());
  for (int l = 0; l < b.envSize(); ++l) all[l] = l;
  const double hs = gramEntropy(fragmentGram(b, all, false));
  const double hf = fragmentEntropy(b, frag, false);
  const double hsRest = gramEntropy(fragmentGram(b, envComplement(b, frag), false));
  return {hf, hs - hsRest};
}

RVec gramMixtureSpectrum(const CMat& coefficients, const CMat& gram) {
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  RVec w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMat root = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  CMat m = root * coefficients * root;
  return hermitianEigenvalues(0.5 * (m + m.adjoint()));
}

}  // namespace qd
