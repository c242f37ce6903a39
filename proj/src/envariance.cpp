#include "qd/envariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace qd {

namespace {

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void checkOrthonormal(const std::vector<CVec>& basis, const char* what) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != basis[0].size())
      throw std::invalid_argument(std::string(what) + ": basis vectors of different dimension");
    for (std::size_t j = i; j < basis.size(); ++j) {
      const cplx ip = basis[i].dot(basis[j]);
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expect) > policy().stateTol)
        throw std::invalid_argument(std::string(what) + ": basis is not orthonormal");
    }
  }
}

CMat controlled(const CMat& u) {
  const Eigen::Index d = u.rows();
  CMat out = CMat::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d).setIdentity();
  out.bottomRightCorner(d, d) = u;
  return out;
}

double purity(const DensityMatrix& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

// |s>|a> -> |s>|a + s mod d>
CMat controlledShift(int d) {
  CMat u = CMat::Zero(d * d, d * d);
  for (int s = 0; s < d; ++s)
    for (int a = 0; a < d; ++a) u(s * d + (a + s) % d, s * d + a) = 1.0;
  return u;
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void checkWeights(double w0, double w1) {
  if (w0 < 0.0 || w1 < 0.0 || std::abs(w0 + w1 - 1.0) > policy().stateTol)
    throw std::invalid_argument("branch weights must be nonnegative and sum to 1");
}

}  // namespace

SchmidtPair SchmidtPair::standard(const CVec& coefficients) {
  const int d = static_cast<int>(coefficients.size());
  SchmidtPair p{coefficients, {}, {}};
  for (int k = 0; k < d; ++k) {
    p.systemBasis.push_back(CVec::Unit(d, k));
    p.envBasis.push_back(CVec::Unit(d, k));
  }
  return p;
}

void SchmidtPair::validate() const {
  if (coefficients.size() == 0) throw std::invalid_argument("SchmidtPair: no coefficients");
  if (std::abs(coefficients.squaredNorm() - 1.0) > policy().stateTol)
    throw std::invalid_argument("SchmidtPair: coefficients not normalized");
  if (systemBasis.size() != static_cast<std::size_t>(coefficients.size()) ||
      envBasis.size() != static_cast<std::size_t>(coefficients.size()))
    throw std::invalid_argument("SchmidtPair: basis size differs from the number of coefficients");
  checkOrthonormal(systemBasis, "SchmidtPair system");
  checkOrthonormal(envBasis, "SchmidtPair environment");
}

int SchmidtPair::systemDim() const { return static_cast<int>(systemBasis.at(0).size()); }
int SchmidtPair::envDim() const { return static_cast<int>(envBasis.at(0).size()); }

StateVector SchmidtPair::state() const {
  validate();
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(systemDim()) * envDim());
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) psi += coefficients(k) * kron(systemBasis[k], envBasis[k]);
  return StateVector(HilbertShape({systemDim(), envDim()}), psi);
}

OrthogonalityReport orthogonalityCheck(const std::vector<CVec>& sStates, const CMat& transferUnitary,
                                       const CVec& envInit) {
  if (sStates.empty()) throw std::invalid_argument("orthogonalityCheck: no candidate states");
  const Eigen::Index ds = sStates[0].size(), de = envInit.size();
  if (transferUnitary.rows() != ds * de || transferUnitary.cols() != ds * de)
    throw std::invalid_argument("orthogonalityCheck: unitary does not act on S x E");
  if (!isUnitary(transferUnitary, policy().stateTol)) throw std::invalid_argument("orthogonalityCheck: not unitary");
  if (std::abs(envInit.squaredNorm() - 1.0) > policy().stateTol)
    throw std::invalid_argument("orthogonalityCheck: environment state not normalized");

  const double tol = policy().spectrumTol;
  OrthogonalityReport rep;
  for (const auto& s : sStates) {
    if (s.size() != ds || std::abs(s.squaredNorm() - 1.0) > policy().stateTol)
      throw std::invalid_argument("orthogonalityCheck: candidate state malformed");
    const CVec out = transferUnitary * kron(s, envInit);
    CVec rec = CVec::Zero(de);
    for (Eigen::Index a = 0; a < ds; ++a) rec += std::conj(s(a)) * out.segment(a * de, de);
    const bool kept = (out - kron(s, rec)).norm() < tol;
    rep.preserved.push_back(kept);
    rep.records.push_back(kept ? rec : CVec());
  }
  rep.consistent = true;
  for (std::size_t j = 0; j < sStates.size(); ++j) {
    for (std::size_t k = j + 1; k < sStates.size(); ++k) {
      OrthogonalityPair p{static_cast<int>(j), static_cast<int>(k), sStates[j].dot(sStates[k]), cplx(0.0), 0.0, true};
      if (rep.preserved[j] && rep.preserved[k]) {
        p.recordOverlap = rep.records[j].dot(rep.records[k]);
        p.residual = std::abs(p.systemOverlap * (1.0 - p.recordOverlap));
        p.violation = p.residual > tol;
      } else {
        p.recordOverlap = cplx(std::nan(""), 0.0);
        p.residual = std::nan("");
      }
      rep.consistent = rep.consistent && !p.violation;
      rep.pairs.push_back(p);
    }
  }
  return rep;
}

SwapResult swapAndCounterswap(const SchmidtPair& state, int k, int l) {
  state.validate();
  const int n = static_cast<int>(state.coefficients.size());
  if (k < 0 || l < 0 || k >= n || l >= n || k == l)
    throw std::invalid_argument("swapAndCounterswap: indices must be distinct Schmidt labels");
  const int ds = state.systemDim(), de = state.envDim();
  const CVec& sk = state.systemBasis[k];
  const CVec& sl = state.systemBasis[l];
  const CVec& ek = state.envBasis[k];
  const CVec& el = state.envBasis[l];

  CMat swap = CMat::Identity(ds, ds) - sk * sk.adjoint() - sl * sl.adjoint() + sl * sk.adjoint() + sk * sl.adjoint();
  const cplx ak = state.coefficients(k), al = state.coefficients(l);
  const double phk = std::abs(ak) > 0.0 ? std::arg(ak) : 0.0;
  const double phl = std::abs(al) > 0.0 ? std::arg(al) : 0.0;
  const cplx toL = std::polar(1.0, phl - phk), toK = std::polar(1.0, phk - phl);
  CMat counter = CMat::Identity(de, de) - ek * ek.adjoint() - el * el.adjoint() + toL * el * ek.adjoint() +
                 toK * ek * el.adjoint();

  const StateVector psi = state.state();
  StateVector swapped = applyUnitary(psi, swap, {0});
  StateVector restored = applyUnitary(swapped, counter, {1});
  const bool envariant = std::abs(std::abs(ak) - std::abs(al)) <= policy().stateTol;
  return {swapped, restored, swap, counter, envariant, fidelity(psi, swapped), fidelity(psi, restored)};
}

PhaseResult phaseCountertransform(const SchmidtPair& state, const RVec& phases) {
  state.validate();
  if (phases.size() != state.coefficients.size())
    throw std::invalid_argument("phaseCountertransform: one phase per Schmidt term required");
  const int ds = state.systemDim(), de = state.envDim();
  CMat us = CMat::Identity(ds, ds), ue = CMat::Identity(de, de);
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    us += (std::polar(1.0, phases(k)) - 1.0) * state.systemBasis[k] * state.systemBasis[k].adjoint();
    ue += (std::polar(1.0, -phases(k)) - 1.0) * state.envBasis[k] * state.envBasis[k].adjoint();
  }
  const StateVector psi = state.state();
  const StateVector out = applyUnitary(applyUnitary(psi, us, {0}), ue, {1});
  return {us, ue, fidelity(psi, out)};
}

long long FineGrainSpec::total() const { return std::accumulate(mu.begin(), mu.end(), 0LL); }

void FineGrainSpec::validate() const {
  if (mu.empty()) throw std::invalid_argument("FineGrainSpec: no outcomes");
  for (long long m : mu)
    if (m < 0) throw std::invalid_argument("FineGrainSpec: negative numerator");
  const long long m = total();
  if (m <= 0) throw std::invalid_argument("FineGrainSpec: all numerators zero");
  if (m > cap) throw CapExceeded("FineGrainSpec: M exceeds the configured cap");
}

FineGrainResult fineGrainDetailed(const FineGrainSpec& spec) {
  spec.validate();
  const long long M = spec.total();
  // |k>|0'> -> |k> sum_{j in block k} |j'> / sqrt(mu_k); each fine-grained branch carries amplitude
  // sqrt(mu_k / M) / sqrt(mu_k).
  std::vector<int> label;
  std::vector<double> amp;
  label.reserve(M);
  amp.reserve(M);
  for (std::size_t k = 0; k < spec.mu.size(); ++k) {
    const double ak = std::sqrt(static_cast<double>(spec.mu[k]) / static_cast<double>(M));
    for (long long j = 0; j < spec.mu[k]; ++j) {
      label.push_back(static_cast<int>(k));
      amp.push_back(ak / std::sqrt(static_cast<double>(spec.mu[k])));
    }
  }
  const double even = 1.0 / std::sqrt(static_cast<double>(M));
  double spread = 0.0;
  for (double a : amp) spread = std::max(spread, std::abs(a - even));
  if (spread > policy().stateTol) throw std::logic_error("fineGrainBorn: fine-grained branches are not even");

  FineGrainResult r;
  r.totalBranches = static_cast<long long>(label.size());
  r.branchCounts.assign(spec.mu.size(), 0);
  for (int k : label) ++r.branchCounts[k];
  for (long long c : r.branchCounts) {
    r.exact.emplace_back(c, r.totalBranches);
    r.probabilities.push_back(boost::rational_cast<double>(r.exact.back()));
  }
  r.maxAmplitudeSpread = spread;
  return r;
}

ProbVector fineGrainBorn(const FineGrainSpec& spec) { return fineGrainDetailed(spec).probabilities; }

FineGrainSpec fineGrainApproximation(const ProbVector& target, long long M) {
  validateProbVector(target);
  if (M <= 0) throw std::invalid_argument("fineGrainApproximation: M must be positive");
  FineGrainSpec spec;
  spec.cap = std::max(spec.cap, M);
  std::vector<std::pair<double, std::size_t>> rem;
  long long used = 0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double x = target[k] * static_cast<double>(M);
    const long long f = static_cast<long long>(std::floor(x));
    spec.mu.push_back(f);
    used += f;
    rem.emplace_back(x - static_cast<double>(f), k);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < M; ++i, ++used) ++spec.mu[rem[i % rem.size()].second];
  return spec;
}

Rational coarseGrainProbability(long long N, const std::vector<long long>& subset) {
  if (N <= 0) throw std::invalid_argument("coarseGrainProbability: N must be positive");
  std::set<long long> seen;
  for (long long k : subset) {
    if (k < 1 || k > N) throw std::invalid_argument("coarseGrainProbability: index outside 1..N");
    if (!seen.insert(k).second) throw std::invalid_argument("coarseGrainProbability: repeated index");
  }
  return Rational(static_cast<long long>(seen.size()), N);
}

Rational coarseGrainRecursive(long long N, long long subsetSize) {
  if (N <= 0 || subsetSize < 0 || subsetSize > N)
    throw std::invalid_argument("coarseGrainRecursive: need 0 <= n <= N");
  Rational p(1);
  for (long long i = 0; i < N - subsetSize; ++i) p *= Rational(1) - Rational(1, N - i);
  return p;
}

AlgebraReport recordAlgebraCheck(const RecordProjectorSet& set, double tol) {
  const auto& ps = set.projectors;
  if (ps.empty()) throw std::invalid_argument("recordAlgebraCheck: empty projector set");
  const Eigen::Index d = ps[0].rows();
  for (const auto& p : ps) {
    if (p.rows() != d || p.cols() != d) throw std::invalid_argument("recordAlgebraCheck: dimension mismatch");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > policy().stateTol ||
        (p * p - p).cwiseAbs().maxCoeff() > policy().stateTol)
      throw std::invalid_argument("recordAlgebraCheck: input is not an orthogonal projector");
  }
  for (const auto& p : ps)
    for (const auto& q : ps)
      if ((p * q - q * p).cwiseAbs().maxCoeff() > policy().stateTol)
        throw std::invalid_argument("recordAlgebraCheck: projectors do not commute");

  const CMat id = CMat::Identity(d, d);
  auto meet = [](const CMat& a, const CMat& b) -> CMat { return a * b; };
  auto join = [](const CMat& a, const CMat& b) -> CMat { return a + b - a * b; };
  auto comp = [&](const CMat& a) -> CMat { return id - a; };
  auto err = [](const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); };

  double eComm = 0, eAssoc = 0, eAbs = 0, eDist = 0, eOrtho = 0;
  for (const auto& p : ps) {
    eOrtho = std::max({eOrtho, err(join(p, comp(p)), id), err(meet(p, comp(p)), CMat::Zero(d, d)),
                       err(comp(comp(p)), p)});
    for (const auto& q : ps) {
      eComm = std::max({eComm, err(meet(p, q), meet(q, p)), err(join(p, q), join(q, p))});
      eAbs = std::max({eAbs, err(join(p, meet(q, p)), p), err(meet(p, join(q, p)), p)});
      for (const auto& r : ps) {
        eAssoc = std::max({eAssoc, err(meet(meet(p, q), r), meet(p, meet(q, r))),
                           err(join(join(p, q), r), join(p, join(q, r)))});
        eDist = std::max({eDist, err(meet(p, join(q, r)), join(meet(p, q), meet(p, r))),
                          err(join(p, meet(q, r)), meet(join(p, q), join(p, r)))});
      }
    }
  }
  AlgebraReport rep{eComm <= tol, eAssoc <= tol, eAbs <= tol, eDist <= tol, eOrtho <= tol, 0.0};
  rep.maxError = std::max({eComm, eAssoc, eAbs, eDist, eOrtho});
  return rep;
}

RVec branchFrequencies(long long M, double w0, double w1) {
  checkWeights(w0, w1);
  if (M < 0 || M > 1000000) throw std::invalid_argument("branchFrequencies: M must lie in [0, 10^6]");
  RVec p(M + 1);
  const double lm = std::lgamma(static_cast<double>(M) + 1.0);
  for (long long m = 0; m <= M; ++m) {
    const double logC = lm - std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(M - m) + 1.0);
    const double lw = xlogy(static_cast<double>(M - m), w0) + xlogy(static_cast<double>(m), w1);
    p(m) = std::exp(logC + lw);
  }
  return p;
}

RVec gaussianFrequencies(long long M, double w0, double w1) {
  checkWeights(w0, w1);
  if (M < 0) throw std::invalid_argument("gaussianFrequencies: negative M");
  RVec g = RVec::Zero(M + 1);
  const double mean = w1 * static_cast<double>(M);
  const double var = static_cast<double>(M) * w0 * w1;
  if (var <= 0.0) {
    g(static_cast<Eigen::Index>(std::llround(mean))) = 1.0;
    return g;
  }
  for (long long m = 0; m <= M; ++m)
    g(m) = std::exp(-sq(static_cast<double>(m) - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
  return g / g.sum();
}

double totalVariation(const RVec& p, const RVec& q) {
  if (p.size() != q.size()) throw std::invalid_argument("totalVariation: size mismatch");
  return 0.5 * (p - q).cwiseAbs().sum();
}

RVec branchAmplitudes(long long M, double w0, double w1) { return branchFrequencies(M, w0, w1).cwiseSqrt(); }

std::vector<CircuitStage> agentCircuit(double systemPhase, std::uint64_t seed, CircuitVariant variant) {
  CounterRng rng(seed);
  const double agentPhase = 2.0 * std::numbers::pi * rng.uniform();
  const HilbertShape shape = HilbertShape::qubits(3);  // A, S, E
  CMat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  auto phase = [](double a) {
    CMat p = CMat::Identity(2, 2);
    p(1, 1) = std::polar(1.0, a);
    return p;
  };
  // Swaps |0> and |1> of E while moving the Schmidt phase from one branch to the other.
  CMat counter(2, 2);
  counter << 0, std::polar(1.0, -systemPhase), std::polar(1.0, systemPhase), 0;

  CVec se(4);
  se << 1, 0, 0, std::polar(1.0, systemPhase);
  se /= std::sqrt(2.0);

  std::vector<CircuitStage> trace;
  auto record = [&](const std::string& label, const StateVector& psi) {
    const DensityMatrix a = partialTrace(psi, {0});
    const DensityMatrix seRho = partialTrace(psi, {1, 2});
    const double f = (se.adjoint() * seRho.matrix() * se)(0, 0).real();
    trace.push_back({label, purity(a), f});
  };

  StateVector psi = StateVector::basis(shape, 0);
  record("initial", psi);
  psi = applyUnitary(psi, phase(agentPhase) * h, {0});
  psi = applyUnitary(psi, phase(systemPhase) * h, {1});
  record("superposed", psi);
  psi = applyUnitary(psi, controlled(x), {1, 2});
  record("entangled", psi);
  psi = applyUnitary(psi, controlled(x), {0, 1});
  record("swapped", psi);
  switch (variant) {
    case CircuitVariant::Ideal:
      psi = applyUnitary(psi, controlled(counter), {0, 2});
      break;
    case CircuitVariant::OmitCounterswap:
      break;
    case CircuitVariant::WrongTarget:
      psi = applyUnitary(psi, controlled(counter), {1, 2});
      break;
  }
  record("counterswapped", psi);
  return trace;
}

ReversalResult reversalDemo(const CVec& amplitudes) {
  const int d = static_cast<int>(amplitudes.size());
  if (d < 1) throw std::invalid_argument("reversalDemo: empty amplitude vector");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > policy().stateTol)
    throw std::invalid_argument("reversalDemo: amplitudes not normalized");
  const HilbertShape shape({d, d, d});
  CVec init = CVec::Zero(static_cast<Eigen::Index>(shape.total()));
  for (int s = 0; s < d; ++s) init(static_cast<Eigen::Index>(s) * d * d) = amplitudes(s);
  const StateVector psi0(shape, init);
  const CMat u = controlledShift(d);
  const CMat ud = u.adjoint();

  const StateVector measured = applyUnitary(psi0, u, {0, 1});
  const double withoutCopy = fidelity(psi0, applyUnitary(measured, ud, {0, 1}));
  const StateVector copied = applyUnitary(measured, u, {1, 2});
  const DensityMatrix rhoS = partialTrace(applyUnitary(copied, ud, {0, 1}), {0});
  const double f = (amplitudes.adjoint() * rhoS.matrix() * amplitudes)(0, 0).real();
  return {withoutCopy, rhoS, f};
}

}  // namespace qd
