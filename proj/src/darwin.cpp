#include "qd/darwin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qd {

namespace {

FragmentSpec fullRange(int n) {
  FragmentSpec all(n);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

FragmentSpec complementIn(int n, const FragmentSpec& frag) {
  std::vector<bool> in(n, false);
  for (int l : frag) in.at(l) = true;
  FragmentSpec rest;
  for (int l = 0; l < n; ++l)
    if (!in[l]) rest.push_back(l);
  return rest;
}

// First crossing of `target` by the piecewise-linear curve through (sizes, values), which starts at (0, 0).
// A crossing below one subsystem counts as one subsystem.
struct Crossing {
  double sharpF;
  bool interpolated;
  bool found;
};

Crossing firstCrossing(const std::vector<int>& sizes, const std::vector<double>& values, double target) {
  const double slack = 1e-12;
  double prevF = 0.0, prevV = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      prevV = values[i];
      continue;
    }
    if (values[i] >= target - slack) {
      if (sizes[i] == 1 || values[i] - prevV <= 0.0) return {static_cast<double>(sizes[i]), false, true};
      double x = prevF + (target - prevV) / (values[i] - prevV) * (sizes[i] - prevF);
      return {std::max(1.0, x), true, true};
    }
    prevF = sizes[i];
    prevV = values[i];
  }
  return {sizes.empty() ? 0.0 : static_cast<double>(sizes.back()), false, false};
}

struct MeanStd {
  double mean;
  double stddev;
};

MeanStd meanStd(const std::vector<double>& v) {
  double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace

BranchingSource::BranchingSource(BranchingState b, std::string tag) : b_(std::move(b)), tag_(std::move(tag)) {
  b_.validate();
  hs_ = decoheredSystemEntropy(b_, fullRange(b_.envSize()));
}

double BranchingSource::mutualInfo(const FragmentSpec& frag) const {
  if (frag.empty()) return 0.0;
  return hs_ + qd::fragmentEntropy(b_, frag, false) - qd::fragmentEntropy(b_, frag, true);
}

std::optional<double> BranchingSource::fragmentEntropy(const FragmentSpec& frag) const {
  return qd::fragmentEntropy(b_, frag, false);
}

std::optional<double> BranchingSource::decoheredEntropy(const FragmentSpec& frag) const {
  return decoheredSystemEntropy(b_, frag);
}

DenseSource::DenseSource(StateVector psi, int systemSubsystems, std::string tag)
    : psi_(std::move(psi)), sys_(systemSubsystems), tag_(std::move(tag)) {
  if (sys_ < 1 || sys_ >= psi_.shape().size()) throw std::invalid_argument("DenseSource: bad system size");
  hs_ = entanglementEntropy(psi_, fullRange(sys_));
}

FragmentSpec DenseSource::globalIndices(const FragmentSpec& frag, bool withSystem) const {
  FragmentSpec g;
  if (withSystem) g = fullRange(sys_);
  for (int l : frag) {
    if (l < 0 || l >= envSize()) throw std::out_of_range("DenseSource: fragment index out of range");
    g.push_back(l + sys_);
  }
  return g;
}

double DenseSource::mutualInfo(const FragmentSpec& frag) const {
  if (frag.empty()) return 0.0;
  return hs_ + entanglementEntropy(psi_, globalIndices(frag, false)) -
         entanglementEntropy(psi_, globalIndices(frag, true));
}

std::optional<double> DenseSource::fragmentEntropy(const FragmentSpec& frag) const {
  if (frag.empty()) return 0.0;
  return entanglementEntropy(psi_, globalIndices(frag, false));
}

AnalyticSource::AnalyticSource(int envSize, double hs, std::function<double(double)> curve, std::string tag)
    : n_(envSize), hs_(hs), curve_(std::move(curve)), tag_(std::move(tag)) {
  if (n_ < 1) throw std::invalid_argument("AnalyticSource: environment size must be positive");
}

double AnalyticSource::mutualInfo(const FragmentSpec& frag) const {
  return curve_(static_cast<double>(frag.size()) / n_);
}

std::vector<int> defaultSizeGrid(int envSize, double ratio) {
  std::vector<int> g;
  const int dense = std::min(envSize, 64);
  for (int k = 0; k <= dense; ++k) g.push_back(k);
  double x = dense;
  while (g.back() < envSize) {
    x *= ratio;
    int k = std::min(envSize, static_cast<int>(std::ceil(x)));
    if (k > g.back()) g.push_back(k);
  }
  return g;
}

PartialInfoPlot buildPIP(const PipSource& source, const std::vector<int>& sizes, int samplesPerFraction,
                         std::uint64_t seed) {
  const int n = source.envSize();
  if (samplesPerFraction < 1) throw std::invalid_argument("buildPIP: need at least one sample per fraction");
  PartialInfoPlot pip;
  pip.sourceTag = source.tag();
  pip.HS = source.systemEntropy();
  pip.envSize = n;
  int last = -1;
  for (int k : sizes) {
    if (k < 0 || k > n) throw std::out_of_range("buildPIP: fragment size outside environment");
    if (k <= last) throw std::invalid_argument("buildPIP: sizes must be strictly increasing");
    last = k;
    const bool single = k == 0 || k == n || source.sizeOnly();
    const int count = single ? 1 : samplesPerFraction;
    CounterRng rng = CounterRng(seed).split(static_cast<std::uint64_t>(k));
    std::vector<double> vals;
    vals.reserve(count);
    for (int s = 0; s < count; ++s) vals.push_back(source.mutualInfo(rng.sampleSubset(n, k)));
    MeanStd ms = meanStd(vals);
    pip.points.push_back({static_cast<double>(k) / n, k, ms.mean, ms.stddev, count});
  }
  return pip;
}

RedundancyReport redundancy(const PartialInfoPlot& pip, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("redundancy: delta outside (0, 1)");
  if (pip.HS <= policy().spectrumTol) throw std::domain_error("redundancy: system entropy is zero");
  std::vector<int> sizes;
  std::vector<double> vals;
  for (const PipPoint& p : pip.points) {
    sizes.push_back(p.sharpF);
    vals.push_back(p.meanI);
  }
  Crossing c = firstCrossing(sizes, vals, (1.0 - delta) * pip.HS);
  RedundancyReport r;
  r.delta = delta;
  r.sharpF_delta = c.found ? c.sharpF : pip.envSize;
  r.f_delta = r.sharpF_delta / pip.envSize;
  r.R_delta = pip.envSize / r.sharpF_delta;
  r.interpolated = c.interpolated;
  r.plateauReached = c.found && r.f_delta <= 0.5 + 1e-12;
  return r;
}

double redundancyOfDecoherence(const PipSource& source, double deltaD, const std::vector<int>& sizes, int samples,
                               std::uint64_t seed) {
  if (!(deltaD > 0.0 && deltaD < 1.0)) throw std::domain_error("redundancyOfDecoherence: delta outside (0, 1)");
  const int n = source.envSize();
  const double hs = source.systemEntropy();
  std::vector<int> used;
  std::vector<double> vals;
  for (int k : sizes) {
    const int count = (k == 0 || k == n) ? 1 : samples;
    CounterRng rng = CounterRng(seed).split(static_cast<std::uint64_t>(k));
    std::vector<double> v;
    for (int s = 0; s < count; ++s) {
      auto h = source.decoheredEntropy(rng.sampleSubset(n, k));
      if (!h) throw std::invalid_argument("redundancyOfDecoherence: source cannot decohere against subsets");
      v.push_back(*h);
    }
    used.push_back(k);
    vals.push_back(meanStd(v).mean);
  }
  Crossing c = firstCrossing(used, vals, (1.0 - deltaD) * hs);
  return n / (c.found ? c.sharpF : static_cast<double>(n));
}

InfoSplit decomposeMutualInfo(const PipSource& source, const FragmentSpec& frag) {
  auto hf = source.fragmentEntropy(frag);
  auto h0 = source.initialFragmentEntropy(frag);
  auto hRest = source.decoheredEntropy(complementIn(source.envSize(), frag));
  if (!hf || !h0 || !hRest) throw std::invalid_argument("decomposeMutualInfo: evolution does not factorize for this source");
  return {*hf - *h0, source.systemEntropy() - *hRest};
}

double observableHolevo(const BranchingState& b, double mu, const FragmentSpec& frag) {
  if (b.branches() != 2) throw std::invalid_argument("observableHolevo: qubit system required");
  const int n = b.envSize();
  FragmentSpec rest = complementIn(n, frag);
  CMat gramF = CMat::Identity(2, 2), gramR = CMat::Identity(2, 2);
  for (int l : frag) gramF = gramF.cwiseProduct(b.overlaps(l));
  for (int l : rest) gramR = gramR.cwiseProduct(b.overlaps(l));
  Eigen::Vector2cd a;
  for (int j = 0; j < 2; ++j) a(j) = std::sqrt(b.branchProbs[j]) * std::polar(1.0, b.branchPhases[j]);
  const double c = std::cos(mu / 2), s = std::sin(mu / 2);
  Eigen::Vector2cd outcomes[2];
  outcomes[0] << c, s;
  outcomes[1] << -s, c;
  CMat total = CMat::Zero(2, 2);
  double inner = 0.0;
  for (const auto& u : outcomes) {
    CMat coef(2, 2);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) coef(j, k) = std::conj(u(j)) * a(j) * std::conj(a(k)) * u(k) * gramR(k, j);
    total += coef;
    RVec spec = gramMixtureSpectrum(coef, gramF);
    double q = spec.sum();
    if (q > policy().eigenClip) inner += q * spectrumEntropy(spec / q);
  }
  return spectrumEntropy(gramMixtureSpectrum(total, gramF)) - inner;
}

std::vector<ObservableRow> observableSweep(const BranchingState& b, const std::vector<double>& muGrid, int fragmentSize,
                                           int samples, std::uint64_t seed, double delta) {
  b.validate();
  const int n = b.envSize();
  if (fragmentSize < 1 || fragmentSize > n) throw std::out_of_range("observableSweep: fragment size");
  CMat rhoS = fragmentGram(b, fullRange(n), false).conjugate();
  std::vector<ObservableRow> rows;
  for (double mu : muGrid) {
    const double c = std::cos(mu / 2), s = std::sin(mu / 2);
    Eigen::Vector2cd up(c, s), down(-s, c);
    double qUp = std::clamp((up.adjoint() * rhoS * up)(0, 0).real(), 0.0, 1.0);
    double h = shannonEntropy({qUp, 1.0 - qUp});
    double hc = 0.0;
    for (int k = 0; k < 2; ++k) {
      double w = std::norm(up(k));
      hc += b.branchProbs[k] * shannonEntropy({w, 1.0 - w});
    }
    ObservableRow row{mu, 0.0, 0.0, h, hc, h - hc, hc <= delta * h + 1e-12, 0.0};

    CounterRng rng = CounterRng(seed).split(static_cast<std::uint64_t>(fragmentSize));
    std::vector<double> chis;
    for (int i = 0; i < samples; ++i) chis.push_back(observableHolevo(b, mu, rng.sampleSubset(n, fragmentSize)));
    MeanStd ms = meanStd(chis);
    row.chi = ms.mean;
    row.chiStddev = ms.stddev;

    if (h > policy().spectrumTol) {
      std::vector<int> sizes;
      std::vector<double> vals;
      for (int k = 1; k <= n; ++k) {
        CounterRng r2 = CounterRng(seed ^ 0x9e37ULL).split(static_cast<std::uint64_t>(k));
        std::vector<double> v;
        for (int i = 0; i < (k == n ? 1 : samples); ++i) v.push_back(observableHolevo(b, mu, r2.sampleSubset(n, k)));
        sizes.push_back(k);
        vals.push_back(meanStd(v).mean);
        if (vals.back() >= (1.0 - delta) * h) break;
      }
      Crossing cr = firstCrossing(sizes, vals, (1.0 - delta) * h);
      row.R_delta = cr.found ? n / cr.sharpF : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

StateVector haarRandomState(const HilbertShape& shape, CounterRng& rng) {
  CVec v(static_cast<Eigen::Index>(shape.total()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(rng.normal(), rng.normal());
  return StateVector::normalized(shape, std::move(v));
}

}  // namespace qd
