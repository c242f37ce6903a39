#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "qd/darwin.hpp"
#include "qd/photonenv.hpp"
#include "qd/spinmodels.hpp"

using namespace qd;

namespace {

const double ln2 = std::numbers::ln2;

std::vector<int> allSizes(int n) {
  std::vector<int> s(n + 1);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

}  // namespace

TEST_CASE("default size grid") {
  std::vector<int> g = defaultSizeGrid(10);
  CHECK(g == allSizes(10));
  std::vector<int> big = defaultSizeGrid(1000);
  CHECK(big.front() == 0);
  CHECK(big.back() == 1000);
  for (int k = 0; k <= 64; ++k) CHECK(big[k] == k);
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK(std::adjacent_find(big.begin(), big.end()) == big.end());
}

TEST_CASE("c-not PIP has the quantum peak") {
  const double r2 = 1.0 / std::sqrt(2.0);
  BranchingSource src(cnotModel(r2, r2, 20));
  PartialInfoPlot pip = buildPIP(src, allSizes(20), 4, 1);
  CHECK(pip.points.front().meanI == doctest::Approx(0.0).epsilon(1e-12));
  for (int k = 1; k < 20; ++k) CHECK(std::abs(pip.points[k].meanI - ln2) < 1e-12);
  CHECK(std::abs(pip.points.back().meanI - 2.0 * ln2) < 1e-12);
  RedundancyReport r = redundancy(pip, 0.1);
  CHECK(r.R_delta == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(r.plateauReached);
  CHECK(redundancy(pip, 0.01).R_delta == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("PIP is deterministic given the seed") {
  CentralSpinParams p = randomCentralSpin(14, 2.0, 3);
  BranchingSource src(centralSpinBranching(p));
  PartialInfoPlot a = buildPIP(src, allSizes(14), 6, 42);
  PartialInfoPlot b = buildPIP(src, allSizes(14), 6, 42);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].meanI == b.points[i].meanI);
    CHECK(a.points[i].stddev == b.points[i].stddev);
  }
}

TEST_CASE("PIP antisymmetry for branching and dense sources") {
  CentralSpinParams p = randomCentralSpin(10, 1.5, 8);
  BranchingState b = centralSpinBranching(p);
  BranchingSource fast(b);
  DenseSource dense(b.toStateVector());
  CounterRng rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    FragmentSpec perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 9; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const int k = 1 + static_cast<int>(rng.below(9));
    FragmentSpec f(perm.begin(), perm.begin() + k), g(perm.begin() + k, perm.end());
    CHECK(fast.mutualInfo(f) + fast.mutualInfo(g) == doctest::Approx(2.0 * fast.systemEntropy()).epsilon(1e-9));
    CHECK(dense.mutualInfo(f) == doctest::Approx(fast.mutualInfo(f)).epsilon(1e-9));
  }
}

TEST_CASE("haar-random state PIP is near a step at one half") {
  CounterRng rng(12);
  StateVector psi = haarRandomState(HilbertShape::qubits(11), rng);
  CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
  DenseSource src(psi);
  PartialInfoPlot pip = buildPIP(src, allSizes(10), 8, 5);
  CHECK(pip.points[2].meanI < 0.05);
  CHECK(pip.points[8].meanI > 2.0 * src.systemEntropy() - 0.05);
  RedundancyReport r = redundancy(pip, 0.1);
  CHECK(r.R_delta > 1.5);
  CHECK(r.R_delta < 3.0);
}

TEST_CASE("analytic photon source reproduces the curve exactly") {
  PhotonSource src(12.0, 200);
  PartialInfoPlot pip = buildPIP(src, defaultSizeGrid(200), 16, 9);
  for (const PipPoint& pt : pip.points) {
    CHECK(pt.samples == 1);
    CHECK(pt.stddev == 0.0);
    CHECK(pt.meanI == doctest::Approx(photonMutualInfo(std::exp(-12.0), pt.f)).epsilon(1e-12));
  }
}

TEST_CASE("redundancy interpolates between grid points") {
  PartialInfoPlot pip;
  pip.HS = 1.0;
  pip.envSize = 10;
  pip.points = {{0.0, 0, 0.0, 0.0, 1}, {0.1, 1, 0.5, 0.0, 1}, {0.2, 2, 0.95, 0.0, 1}, {1.0, 10, 2.0, 0.0, 1}};
  RedundancyReport r = redundancy(pip, 0.1);
  CHECK(r.interpolated);
  CHECK(r.sharpF_delta == doctest::Approx(1.0 + 0.4 / 0.45).epsilon(1e-12));
  CHECK(r.R_delta == doctest::Approx(10.0 / r.sharpF_delta).epsilon(1e-12));
  CHECK(r.plateauReached);
  CHECK_THROWS_AS(redundancy(pip, 0.0), std::domain_error);
  CHECK_THROWS_AS(redundancy(pip, 1.0), std::domain_error);
}

TEST_CASE("unreached plateau is flagged") {
  PartialInfoPlot pip;
  pip.HS = 1.0;
  pip.envSize = 4;
  pip.points = {{0.0, 0, 0.0, 0.0, 1}, {0.5, 2, 0.3, 0.0, 1}, {0.75, 3, 1.7, 0.0, 1}, {1.0, 4, 2.0, 0.0, 1}};
  RedundancyReport r = redundancy(pip, 0.1);
  CHECK_FALSE(r.plateauReached);
  CHECK(r.R_delta < 2.0);
}

TEST_CASE("redundancy is antitone in delta for spin sources") {
  CentralSpinParams p = randomCentralSpin(40, 3.0, 21);
  BranchingSource src(centralSpinBranching(p));
  PartialInfoPlot pip = buildPIP(src, allSizes(40), 8, 2);
  double prev = 0.0;
  for (double d : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    const double r = redundancy(pip, d).R_delta;
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
}

TEST_CASE("redundancy of decoherence dominates redundancy") {
  CentralSpinParams p = randomCentralSpin(30, 3.0, 17);
  BranchingSource src(centralSpinBranching(p));
  const std::vector<int> sizes = allSizes(30);
  PartialInfoPlot pip = buildPIP(src, sizes, 8, 3);
  const double r = redundancy(pip, 0.1).R_delta;
  const double rd = redundancyOfDecoherence(src, 0.1, sizes, 8, 3);
  CHECK(rd >= r - 1e-9);
  // Pure environment: the two agree up to sampling error.
  CHECK(rd == doctest::Approx(r).epsilon(0.2));
}

TEST_CASE("decomposition into classical and quantum parts") {
  CentralSpinParams p = randomCentralSpin(12, 3.0, 19);
  BranchingSource src(centralSpinBranching(p));
  for (FragmentSpec f : {FragmentSpec{0, 1}, FragmentSpec{2, 5, 7}, FragmentSpec{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}}) {
    InfoSplit s = decomposeMutualInfo(src, f);
    CHECK(s.classical + s.quantum == doctest::Approx(src.mutualInfo(f)).epsilon(1e-9));
  }
  FragmentSpec all(12);
  std::iota(all.begin(), all.end(), 0);
  CHECK(decomposeMutualInfo(src, all).quantum == doctest::Approx(src.systemEntropy()).epsilon(1e-9));
  CounterRng rng(1);
  DenseSource dense(haarRandomState(HilbertShape::qubits(4), rng));
  CHECK_THROWS_AS(decomposeMutualInfo(dense, {0}), std::invalid_argument);
}

TEST_CASE("sub-half mutual information equals the fragment entropy for pure environments") {
  CentralSpinParams p = randomCentralSpin(16, 2.5, 23);
  BranchingSource src(centralSpinBranching(p));
  for (FragmentSpec f : {FragmentSpec{3}, FragmentSpec{0, 4, 9}, FragmentSpec{1, 2, 3, 5, 8}}) {
    const double hf = *src.fragmentEntropy(f);
    const double quantum = decomposeMutualInfo(src, f).quantum;
    CHECK(src.mutualInfo(f) == doctest::Approx(hf + quantum).epsilon(1e-9));
    CHECK(quantum < 1e-3);
  }
}

TEST_CASE("observable holevo at the pointer and the conjugate angle") {
  const double r2 = 1.0 / std::sqrt(2.0);
  BranchingState b = cnotModel(r2, r2, 6);
  CHECK(observableHolevo(b, 0.0, {0, 1, 2}) == doctest::Approx(ln2).epsilon(1e-10));
  CHECK(std::abs(observableHolevo(b, std::numbers::pi / 2.0, {0, 1, 2})) < 1e-10);
}

TEST_CASE("observable sweep is peaked at the pointer observable") {
  CentralSpinParams p = randomCentralSpin(16, 6.0, 29);
  BranchingState b = centralSpinBranching(p);
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(i * std::numbers::pi / 16.0);
  std::vector<ObservableRow> rows = observableSweep(b, grid, 4, 6, 11);
  REQUIRE(rows.size() == grid.size());
  for (const ObservableRow& r : rows) {
    CHECK(r.chi <= rows.front().chi + 1e-12);
    CHECK(r.chi <= r.chiBound + 1e-9);
    CHECK(r.chiBound == doctest::Approx(r.entropy - r.condEntropy).epsilon(1e-12));
  }
  CHECK(rows.front().boundAllowsRedundancy);
  CHECK_FALSE(rows.back().boundAllowsRedundancy);
  CHECK(rows.back().chi < 0.01);
  CHECK_THROWS_AS(observableSweep(b, grid, 0, 4, 1), std::out_of_range);
}

TEST_CASE("sources validate their inputs") {
  CounterRng rng(2);
  StateVector psi = haarRandomState(HilbertShape::qubits(3), rng);
  CHECK_THROWS_AS(DenseSource(psi, 3), std::invalid_argument);
  DenseSource src(psi);
  CHECK_THROWS_AS(src.mutualInfo({5}), std::out_of_range);
  CHECK_THROWS_AS(buildPIP(src, {0, 1, 3}, 2, 1), std::out_of_range);
  CHECK_THROWS_AS(buildPIP(src, {1, 0}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(buildPIP(src, {0, 1}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticSource(0, 1.0, [](double) { return 0.0; }), std::invalid_argument);
}
