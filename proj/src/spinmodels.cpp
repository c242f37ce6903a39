#include "qd/spinmodels.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace qd {

namespace {

void checkAmplitudes(cplx a, cplx b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > policy().stateTol)
    throw std::invalid_argument("system amplitudes are not normalized");
}

CVec ket(cplx x, cplx y) {
  CVec v(2);
  v << x, y;
  return v;
}

// exp(-i s theta sigma_z) applied to v.
CVec zRotate(const CVec& v, double s, double theta) {
  return ket(v(0) * std::polar(1.0, -s * theta), v(1) * std::polar(1.0, s * theta));
}

const double branchSign[2] = {1.0, -1.0};

}  // namespace

CVec plusState() { return ket(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }

BranchingState cnotModel(cplx a, cplx b, int n) {
  checkAmplitudes(a, b);
  if (n < 0) throw std::invalid_argument("cnotModel: negative environment size");
  BranchingState s;
  s.branchProbs = {std::norm(a), std::norm(b)};
  s.branchPhases = {std::arg(a), std::arg(b)};
  s.conditional = {std::vector<CVec>(n, ket(1.0, 0.0)), std::vector<CVec>(n, ket(0.0, 1.0))};
  return s;
}

CentralSpinParams randomCentralSpin(int n, double t, std::uint64_t seed) {
  CounterRng rng(seed);
  CentralSpinParams p;
  p.t = t;
  for (int i = 0; i < n; ++i) p.couplings.push_back(rng.uniformOpenLeft());
  return p;
}

BranchingState centralSpinBranching(const CentralSpinParams& p) {
  checkAmplitudes(p.a, p.b);
  if (p.couplings.empty()) throw std::invalid_argument("centralSpinBranching: no couplings");
  if (p.envInit.size() != 2 || std::abs(p.envInit.norm() - 1.0) > policy().stateTol)
    throw std::invalid_argument("centralSpinBranching: environment qubit state invalid");
  BranchingState s;
  s.branchProbs = {std::norm(p.a), std::norm(p.b)};
  s.branchPhases = {std::arg(p.a), std::arg(p.b)};
  s.conditional.resize(2);
  for (int k = 0; k < 2; ++k)
    for (double d : p.couplings) s.conditional[k].push_back(zRotate(p.envInit, branchSign[k], d * p.t));
  return s;
}

StateVector centralSpinDense(const CentralSpinParams& p) {
  InteractingEnvParams ip;
  ip.d = Eigen::Map<const RVec>(p.couplings.data(), static_cast<Eigen::Index>(p.couplings.size()));
  ip.m = RMat::Zero(ip.d.size(), ip.d.size());
  ip.t = p.t;
  return interactingEvolve(ip, p.a, p.b, p.envInit);
}

RedundancyEstimate redundancyEstimate(double hs, double dE, double sharpE, double delta) {
  if (!(hs > 0.0)) throw std::domain_error("redundancyEstimate: H_S must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("redundancyEstimate: delta outside (0, 1)");
  if (!(dE > 1.0)) throw std::domain_error("redundancyEstimate: subsystem dimension must exceed 1");
  double f = (hs - std::log(2.0 * delta * hs)) / std::log(dE);
  if (!(f > 0.0)) throw std::domain_error("redundancyEstimate: fragment estimate is not positive");
  return {f, sharpE / f};
}

double centralSpinPlateau(double hs, double dE, double sharpF, double sharpE) {
  return hs - 0.5 * (std::exp(hs) - 1.0) * (std::pow(dE, -sharpF) - std::pow(dE, -(sharpE - sharpF)));
}

InteractingEnvParams randomInteracting(int n, double sigmaD, double sigmaM, double t, std::uint64_t seed) {
  CounterRng rd = CounterRng(seed).split(1);
  CounterRng rm = CounterRng(seed).split(2);
  InteractingEnvParams p;
  p.t = t;
  p.d.resize(n);
  for (int i = 0; i < n; ++i) p.d(i) = rd.normal(sigmaD);
  p.m = RMat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) p.m(j, k) = p.m(k, j) = rm.normal(sigmaM);
  return p;
}

StateVector interactingEvolve(const InteractingEnvParams& p, cplx a, cplx b, const CVec& envInit) {
  checkAmplitudes(a, b);
  const int n = static_cast<int>(p.d.size());
  if (n < 1) throw std::invalid_argument("interactingEvolve: no environment");
  if (p.m.rows() != n || p.m.cols() != n) throw std::invalid_argument("interactingEvolve: coupling matrix size");
  for (int j = 0; j < n; ++j) {
    if (p.m(j, j) != 0.0) throw std::invalid_argument("interactingEvolve: coupling matrix has a diagonal");
    for (int k = 0; k < n; ++k)
      if (p.m(j, k) != p.m(k, j)) throw std::invalid_argument("interactingEvolve: coupling matrix not symmetric");
  }
  HilbertShape shape = HilbertShape::qubits(n + 1);
  StateVector psi(HilbertShape::qubits(1), ket(a, b));
  StateVector env(HilbertShape::qubits(1), envInit);
  for (int i = 0; i < n; ++i) psi = tensor(psi, env);

  const double pairWeight = p.unorderedPairs ? 1.0 : 2.0;
  const std::size_t dim = shape.total();
  RVec phases(static_cast<Eigen::Index>(dim));
  std::vector<double> z(n + 1);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    for (int q = 0; q <= n; ++q) z[q] = ((idx >> (n - q)) & 1U) ? -1.0 : 1.0;
    double e = 0.0;
    for (int i = 0; i < n; ++i) e += p.d(i) * z[i + 1];
    e *= z[0];
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) e += pairWeight * p.m(j, k) * z[j + 1] * z[k + 1];
    phases(static_cast<Eigen::Index>(idx)) = e * p.t;
  }
  return evolveDiagonal(psi, phases);
}

double binaryEntropyInverse(double h) {
  if (!(h >= 0.0 && h <= std::numbers::ln2 + 1e-15)) throw std::domain_error("binaryEntropyInverse: h outside [0, ln 2]");
  if (h <= 0.0) return 1.0;
  if (h >= std::numbers::ln2) return 0.5;
  auto f = [h](double x) { return -x * std::log(x) - (1.0 - x) * std::log1p(-x) - h; };
  auto r = boost::math::tools::bisect(f, 0.5, 1.0, boost::math::tools::eps_tolerance<double>(52));
  return 0.5 * (r.first + r.second);
}

HazyCentralSpin::HazyCentralSpin(CentralSpinParams base, HazyParams hp) : base_(std::move(base)), hp_(hp) {
  checkAmplitudes(base_.a, base_.b);
  if (base_.couplings.empty()) throw std::invalid_argument("HazyCentralSpin: no couplings");
  if (!(hp_.h >= 0.0 && hp_.h <= hp_.hm + 1e-15)) throw std::domain_error("HazyCentralSpin: need 0 <= h <= h_m");
  lambda_ = binaryEntropyInverse(std::min(hp_.h, std::numbers::ln2));
  const CVec& e = base_.envInit;
  CVec perp = ket(-std::conj(e(1)), std::conj(e(0)));
  rho0_ = lambda_ * e * e.adjoint() + (1.0 - lambda_) * perp * perp.adjoint();
  FragmentSpec all(envSize());
  for (int i = 0; i < envSize(); ++i) all[i] = i;
  hs_ = *decoheredEntropy(all);
}

CMat HazyCentralSpin::branchBlock(int i, int j, int k) const {
  const double th = base_.couplings[i] * base_.t;
  CMat u(2, 2), v(2, 2);
  u << std::polar(1.0, -branchSign[j] * th), 0.0, 0.0, std::polar(1.0, branchSign[j] * th);
  v << std::polar(1.0, -branchSign[k] * th), 0.0, 0.0, std::polar(1.0, branchSign[k] * th);
  return u * rho0_ * v.adjoint();
}

std::optional<double> HazyCentralSpin::decoheredEntropy(const FragmentSpec& frag) const {
  const cplx c[2] = {base_.a, base_.b};
  CMat g(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      cplx v = std::conj(c[j]) * c[k];
      if (j != k)
        for (int i : frag) v *= branchBlock(i, k, j).trace();
      g(j, k) = v;
    }
  return spectrumEntropy(hermitianEigenvalues(g));
}

std::optional<double> HazyCentralSpin::initialFragmentEntropy(const FragmentSpec& frag) const {
  return static_cast<double>(frag.size()) * shannonEntropy({lambda_, 1.0 - lambda_});
}

std::optional<double> HazyCentralSpin::fragmentEntropy(const FragmentSpec& frag) const {
  if (frag.empty()) return 0.0;
  if (std::size_t{1} << frag.size() > policy().dimensionCap) throw CapExceeded("HazyCentralSpin: fragment too large");
  CMat branch[2];
  for (int k = 0; k < 2; ++k) {
    branch[k] = CMat::Ones(1, 1);
    for (int i : frag) branch[k] = Eigen::kroneckerProduct(branch[k], branchBlock(i, k, k)).eval();
  }
  CMat rho = std::norm(base_.a) * branch[0] + std::norm(base_.b) * branch[1];
  return spectrumEntropy(hermitianEigenvalues(rho));
}

double HazyCentralSpin::mutualInfo(const FragmentSpec& frag) const {
  if (frag.empty()) return 0.0;
  std::vector<bool> in(envSize(), false);
  for (int i : frag) in.at(i) = true;
  FragmentSpec rest;
  for (int i = 0; i < envSize(); ++i)
    if (!in[i]) rest.push_back(i);
  // The complement of SF in the purification is the F ancillas (state fixed by h) plus the rest pairs.
  const double hsf = *initialFragmentEntropy(frag) + *decoheredEntropy(rest);
  return hs_ + *fragmentEntropy(frag) - hsf;
}

DensityMatrix HazyCentralSpin::systemFragmentState(const FragmentSpec& frag) const {
  HilbertShape shape = HilbertShape::qubits(static_cast<int>(frag.size()) + 1);
  std::vector<bool> in(envSize(), false);
  for (int i : frag) in.at(i) = true;
  const cplx c[2] = {base_.a, base_.b};
  const auto blk = static_cast<Eigen::Index>(shape.total() / 2);
  CMat out(2 * blk, 2 * blk);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      CMat prod = CMat::Ones(1, 1);
      cplx weight = c[j] * std::conj(c[k]);
      for (int i = 0; i < envSize(); ++i) {
        if (in[i])
          prod = Eigen::kroneckerProduct(prod, branchBlock(i, j, k)).eval();
        else
          weight *= branchBlock(i, j, k).trace();
      }
      out.block(j * blk, k * blk, blk, blk) = weight * prod;
    }
  return DensityMatrix(std::move(shape), 0.5 * (out + out.adjoint()));
}

StateVector HazyCentralSpin::purified() const {
  BranchingState s;
  s.branchProbs = {std::norm(base_.a), std::norm(base_.b)};
  s.branchPhases = {std::arg(base_.a), std::arg(base_.b)};
  const CVec& e = base_.envInit;
  CVec perp = ket(-std::conj(e(1)), std::conj(e(0)));
  s.conditional.resize(2);
  for (int k = 0; k < 2; ++k)
    for (double d : base_.couplings) {
      CVec ue = zRotate(e, branchSign[k], d * base_.t), up = zRotate(perp, branchSign[k], d * base_.t);
      CVec pair(4);
      pair << std::sqrt(lambda_) * ue(0), std::sqrt(1.0 - lambda_) * up(0), std::sqrt(lambda_) * ue(1),
          std::sqrt(1.0 - lambda_) * up(1);
      s.conditional[k].push_back(pair);
    }
  return s.toStateVector();
}

HazyRedundancy hazyRedundancy(const CentralSpinParams& base, const HazyParams& hp, double delta, int samples,
                              std::uint64_t seed) {
  HazyCentralSpin hazy(base, hp);
  HazyCentralSpin pure(base, HazyParams{0.0, hp.hm});
  std::vector<int> sizes;
  for (int k = 0; k <= hazy.envSize(); ++k) sizes.push_back(k);
  RedundancyReport rh = redundancy(buildPIP(hazy, sizes, samples, seed), delta);
  RedundancyReport r0 = redundancy(buildPIP(pure, sizes, samples, seed), delta);
  double rd = redundancyOfDecoherence(hazy, delta, sizes, samples, seed);
  rh.R_deltaD = rd;
  return {rh.R_delta, r0.R_delta, rd, rh};
}

}  // namespace qd
