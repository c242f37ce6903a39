#include <doctest.h>

#include "helpers.hpp"
#include "qd/branching.hpp"

using namespace qd;

namespace {

BranchingState randomBranching(int k, int n, CounterRng& rng, bool mixedDims = false) {
  BranchingState b;
  std::vector<int> dims(n);
  for (int l = 0; l < n; ++l) dims[l] = mixedDims && rng.below(3) == 0 ? 3 : 2;
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    b.branchProbs.push_back(rng.uniformOpenLeft());
    total += b.branchProbs.back();
    b.branchPhases.push_back(2 * std::numbers::pi * rng.uniform());
    std::vector<CVec> row;
    for (int l = 0; l < n; ++l) row.push_back(testing::randomVector(dims[l], rng));
    b.conditional.push_back(row);
  }
  for (auto& p : b.branchProbs) p /= total;
  return b;
}

std::vector<int> denseDims(const BranchingState& b) {
  std::vector<int> dims{std::max(b.branches(), 2)};
  for (int l = 0; l < b.envSize(); ++l) dims.push_back(static_cast<int>(b.conditional[0][l].size()));
  return dims;
}

double denseEntropy(const BranchingState& b, const FragmentSpec& envFrag, bool withSystem) {
  std::vector<int> keep;
  if (withSystem) keep.push_back(0);
  for (int l : envFrag) keep.push_back(l + 1);
  std::sort(keep.begin(), keep.end());
  if (keep.empty()) return 0.0;
  return testing::entropyOf(testing::bruteForceReduced(b.toStateVector().amplitudes(), denseDims(b), keep));
}

BranchingState twoBranchOverlap(int n, double theta) {
  // conditionals |0> and cos(theta)|0> + sin(theta)|1>: overlap c = cos(theta)
  BranchingState b{{0.5, 0.5}, {0.0, 0.0}, {}};
  CVec e0 = CVec::Unit(2, 0), e1(2);
  e1 << std::cos(theta), std::sin(theta);
  b.conditional = {std::vector<CVec>(n, e0), std::vector<CVec>(n, e1)};
  return b;
}

}  // namespace

TEST_CASE("fragmentGram examples") {
  CounterRng rng(1);
  auto b = randomBranching(3, 4, rng);
  CMat g0 = fragmentGram(b, {}, false);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const cplx expect = std::sqrt(b.branchProbs[j] * b.branchProbs[k]) *
                          std::polar(1.0, b.branchPhases[k] - b.branchPhases[j]);
      CHECK(std::abs(g0(j, k) - expect) < 1e-14);
    }
  CHECK(std::abs(fragmentEntropy(b, {}, false)) < 1e-9);

  CMat gs = fragmentGram(b, {1, 2}, true);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(gs(j, j) - b.branchProbs[j]) < 1e-14);
  CHECK(std::abs(gs(0, 1)) == 0.0);

  BranchingState perfect{{0.3, 0.7}, {0.0, 1.0}, {{CVec::Unit(2, 0), CVec::Unit(2, 0)}, {CVec::Unit(2, 1), CVec::Unit(2, 1)}}};
  CMat gp = fragmentGram(perfect, {1}, false);
  CHECK(std::abs(gp(0, 1)) < 1e-15);
  CHECK(std::abs(gp(0, 0) - 0.3) < 1e-15);

  CHECK_THROWS(fragmentGram(b, {4}, false));
  CHECK_THROWS(fragmentGram(b, {1, 1}, false));
}

TEST_CASE("two-branch single-qubit Gram eigenvalues") {
  for (double p0 : {0.2, 0.5, 0.9}) {
    for (double theta : {0.0, 0.4, 1.2}) {
      BranchingState b{{p0, 1 - p0}, {0.3, 2.0}, {}};
      CVec e1(2);
      e1 << std::cos(theta), std::sin(theta);
      b.conditional = {{CVec::Unit(2, 0)}, {e1}};
      const double c = std::cos(theta);
      const double disc = std::sqrt(1 - 4 * p0 * (1 - p0) * (1 - c * c));
      RVec ev = hermitianEigenvalues(fragmentGram(b, {0}, false));
      CHECK(std::abs(ev(0) - (1 - disc) / 2) < 1e-12);
      CHECK(std::abs(ev(1) - (1 + disc) / 2) < 1e-12);
    }
  }
}

TEST_CASE("fast path matches dense partial trace") {
  CounterRng rng(2);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(9));
    auto b = randomBranching(k, n, rng, trial % 3 == 0);
    const int m = static_cast<int>(rng.below(n + 1));
    auto frag = rng.sampleSubset(n, m);
    CHECK(std::abs(fragmentEntropy(b, frag, false) - denseEntropy(b, frag, false)) < 1e-9);
    CHECK(std::abs(fragmentEntropy(b, frag, true) - denseEntropy(b, frag, true)) < 1e-9);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("fragment entropy special cases") {
  CounterRng rng(3);
  auto b = randomBranching(3, 6, rng);
  FragmentSpec all{0, 1, 2, 3, 4, 5};
  CHECK(std::abs(fragmentEntropy(b, all, true)) < 1e-9);
  BranchingState cn{{0.5, 0.5}, {0, 0}, {std::vector<CVec>(5, CVec::Unit(2, 0)), std::vector<CVec>(5, CVec::Unit(2, 1))}};
  for (int l = 0; l < 5; ++l) CHECK(std::abs(fragmentEntropy(cn, {l}, false) - std::log(2.0)) < 1e-12);
}

TEST_CASE("mutual information of branching states") {
  CounterRng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = randomBranching(2 + static_cast<int>(rng.below(3)), 8, rng);
    FragmentSpec all{0, 1, 2, 3, 4, 5, 6, 7};
    const double hs = decoheredSystemEntropy(b, all);
    CHECK(std::abs(mutualInfoBranching(b, all) - 2 * hs) < 1e-9);
    CHECK(std::abs(mutualInfoBranching(b, {})) < 1e-9);
    auto frag = rng.sampleSubset(8, 3);
    FragmentSpec rest;
    for (int l = 0; l < 8; ++l)
      if (std::find(frag.begin(), frag.end(), l) == frag.end()) rest.push_back(l);
    CHECK(std::abs(mutualInfoBranching(b, frag) + mutualInfoBranching(b, rest) - 2 * hs) < 1e-9);
    // monotone under inclusion
    FragmentSpec grow;
    double prev = 0.0;
    for (int l = 0; l < 8; ++l) {
      grow.push_back(l);
      const double v = mutualInfoBranching(b, grow);
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("two-branch closed form matches dense evaluation") {
  const double theta = 0.5;
  const double c = std::cos(theta);
  const int n = 10;
  auto b = twoBranchOverlap(n, theta);
  const double hs = twoBranchEntropy(std::pow(c * c, n));
  for (int m = 1; m < n; ++m) {
    FragmentSpec frag;
    for (int l = 0; l < m; ++l) frag.push_back(l);
    const double closed = twoBranchEntropy(std::pow(c * c, m)) + hs - twoBranchEntropy(std::pow(c * c, n - m));
    CHECK(std::abs(mutualInfoBranching(b, frag) - closed) < 1e-9);
    const double dense = denseEntropy(b, frag, false) + denseEntropy(b, {}, true) - denseEntropy(b, frag, true);
    CHECK(std::abs(dense - closed) < 1e-9);
  }
}

TEST_CASE("twoBranchEntropy limits and series") {
  CHECK(std::abs(twoBranchEntropy(0.0) - std::log(2.0)) < 1e-15);
  CHECK(twoBranchEntropy(1.0) == 0.0);
  CHECK_THROWS_AS(twoBranchEntropy(1.5), std::domain_error);
  CHECK_THROWS_AS(twoBranchEntropy(-0.1), std::domain_error);
  double series = std::log(2.0), pw = 1.0;
  for (int k = 1; k < 200; ++k) {
    pw *= 0.5;
    series -= pw / (2.0 * k * (2.0 * k - 1.0));
  }
  CHECK(std::abs(twoBranchEntropy(0.5) - series) < 1e-14);
  const double g = std::sqrt(0.3);
  CHECK(std::abs(twoBranchEntropy(0.3) - (std::log(2.0) - g * std::atanh(g) - std::log(std::sqrt(1 - 0.3)))) < 1e-14);
  double prev = twoBranchEntropy(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double v = twoBranchEntropy(i / 100.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("classical plus quantum equals mutual information") {
  CounterRng rng(5);
  auto b = randomBranching(2, 6, rng);
  auto z = classicalQuantumDecomposition(b, {});
  CHECK(std::abs(z.classical) < 1e-9);
  CHECK(std::abs(z.quantum) < 1e-9);
  FragmentSpec all{0, 1, 2, 3, 4, 5};
  auto full = classicalQuantumDecomposition(b, all);
  const double hs = decoheredSystemEntropy(b, all);
  CHECK(std::abs(full.classical - hs) < 1e-9);
  CHECK(std::abs(full.quantum - hs) < 1e-9);
  for (int trial = 0; trial < 10; ++trial) {
    auto frag = rng.sampleSubset(6, static_cast<int>(rng.below(7)));
    auto s = classicalQuantumDecomposition(b, frag);
    CHECK(std::abs(s.classical + s.quantum - mutualInfoBranching(b, frag)) < 1e-9);
  }

  auto big = twoBranchOverlap(50, 0.8);
  FragmentSpec mid;
  for (int l = 0; l < 20; ++l) mid.push_back(l);
  CHECK(classicalQuantumDecomposition(big, mid).quantum < 1e-6);
  auto small = twoBranchOverlap(12, 0.8);
  FragmentSpec six{0, 1, 2, 3, 4, 5};
  auto s = classicalQuantumDecomposition(small, six);
  // Pure global state: S decohered by the complement alone has the entropy of S with F.
  const double denseQ = denseEntropy(small, {}, true) - denseEntropy(small, six, true);
  CHECK(std::abs(s.quantum - denseQ) < 1e-9);
}

TEST_CASE("branch phases cancel in all entropies") {
  CounterRng rng(6);
  auto b = randomBranching(3, 5, rng);
  auto c = b;
  for (auto& ph : c.branchPhases) ph = 2 * std::numbers::pi * rng.uniform();
  for (int trial = 0; trial < 10; ++trial) {
    auto frag = rng.sampleSubset(5, static_cast<int>(rng.below(6)));
    CHECK(std::abs(fragmentEntropy(b, frag, false) - fragmentEntropy(c, frag, false)) < 1e-12);
    CHECK(std::abs(fragmentEntropy(b, frag, true) - fragmentEntropy(c, frag, true)) < 1e-12);
    CHECK(std::abs(mutualInfoBranching(b, frag) - mutualInfoBranching(c, frag)) < 1e-12);
  }
}

TEST_CASE("zero-weight branches contribute nothing") {
  CounterRng rng(7);
  auto b = randomBranching(2, 4, rng);
  auto z = b;
  z.branchProbs.push_back(0.0);
  z.branchPhases.push_back(1.0);
  z.conditional.push_back({testing::randomVector(2, rng), testing::randomVector(2, rng), testing::randomVector(2, rng),
                           testing::randomVector(2, rng)});
  FragmentSpec all{0, 1, 2, 3};
  CHECK(std::abs(decoheredSystemEntropy(b, all) - decoheredSystemEntropy(z, all)) < 1e-12);
  CHECK(std::abs(mutualInfoBranching(b, {0, 2}) - mutualInfoBranching(z, {0, 2})) < 1e-12);
}

TEST_CASE("gramMixtureSpectrum equals the spectrum of V C V^dagger") {
  CounterRng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    CMat v(5, 3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 3; ++j) v(i, j) = cplx(rng.normal(), rng.normal());
    CMat a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    CMat c = a * a.adjoint();
    RVec fast = gramMixtureSpectrum(c, v.adjoint() * v);
    RVec full = hermitianEigenvalues(v * c * v.adjoint());
    std::vector<double> f(fast.data(), fast.data() + fast.size()), d(full.data(), full.data() + full.size());
    std::sort(f.rbegin(), f.rend());
    std::sort(d.rbegin(), d.rend());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - d[i]) < 1e-9 * (1 + d[0]));
  }
}

TEST_CASE("BranchingState validation") {
  BranchingState b{{0.5, 0.5}, {0.0}, {{CVec::Unit(2, 0)}, {CVec::Unit(2, 1)}}};
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  BranchingState c{{0.5, 0.5}, {0.0, 0.0}, {{CVec::Unit(2, 0)}, {CVec::Ones(2)}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
