#include "qd/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qd {

NumericPolicy& policy() {
  static NumericPolicy p;
  return p;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::result_type CounterRng::operator()() {
  std::uint64_t key = mix64(seed_ ^ mix64(stream_ + 0x632be59bd9b4e019ULL));
  return mix64(key + mix64(counter_++));
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::uniformOpenLeft() { return 1.0 - uniform(); }

double CounterRng::normal(double sigma) {
  double u1 = uniformOpenLeft();
  double u2 = uniform();
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t CounterRng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("CounterRng::below: empty range");
  std::uint64_t limit = max() - (max() % n);
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return static_cast<std::size_t>(r % n);
}

std::vector<int> CounterRng::sampleSubset(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("sampleSubset: k out of range");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    std::size_t j = i + below(static_cast<std::size_t>(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(mix64(seed_ + 0x5851f42d4c957f2dULL * (stream_ + 1)), stream);
}

double spectrumEntropy(const RVec& eigenvalues) {
  double h = 0.0;
  const double clip = policy().eigenClip;
  for (double v : eigenvalues)
    if (v > clip) h -= v * std::log(v);
  return h;
}

RVec hermitianEigenvalues(const CMat& m) {
  if (m.rows() == 1) return RVec::Constant(1, m(0, 0).real());
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace qd
