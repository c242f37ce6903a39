#pragma once

#include <cmath>
#include <vector>

#include "qd/infomeasures.hpp"
#include "qd/numeric.hpp"
#include "qd/qstate.hpp"

namespace testing {

inline qd::CVec randomVector(int d, qd::CounterRng& rng) {
  qd::CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = qd::cplx(rng.normal(), rng.normal());
  return v.normalized();
}

inline qd::StateVector randomState(const qd::HilbertShape& shape, qd::CounterRng& rng) {
  return qd::StateVector(shape, randomVector(static_cast<int>(shape.total()), rng));
}

inline qd::CMat randomUnitary(int d, qd::CounterRng& rng) {
  qd::CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = qd::cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<qd::CMat> qr(m);
  return qr.householderQ() * qd::CMat::Identity(d, d);
}

inline qd::DensityMatrix randomMixed(const qd::HilbertShape& shape, int rank, qd::CounterRng& rng) {
  const int d = static_cast<int>(shape.total());
  qd::CMat a(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = qd::cplx(rng.normal(), rng.normal());
  qd::CMat rho = a * a.adjoint();
  rho /= rho.trace().real();
  return qd::DensityMatrix(shape, rho);
}

// Reduced state by reshaping the amplitudes into a (kept x rest) matrix M, rho = M M^dagger.
// psi reshaped to (kept subsystems) x (the rest), both in subsystem order.
inline qd::CMat splitMatrix(const qd::CVec& psi, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;
  int dk = 1, dr = 1;
  for (int i = 0; i < n; ++i) (kept[i] ? dk : dr) *= dims[i];
  qd::CMat m = qd::CMat::Zero(dk, dr);
  std::vector<int> dg(n);
  for (long a = 0; a < psi.size(); ++a) {
    long idx = a;
    for (int i = n - 1; i >= 0; --i) {
      dg[i] = static_cast<int>(idx % dims[i]);
      idx /= dims[i];
    }
    int r = 0, c = 0;
    for (int i = 0; i < n; ++i) {
      if (kept[i]) r = r * dims[i] + dg[i];
      else c = c * dims[i] + dg[i];
    }
    m(r, c) = psi(a);
  }
  return m;
}

inline qd::CMat bruteForceReduced(const qd::CVec& psi, const std::vector<int>& dims, const std::vector<int>& keep) {
  const qd::CMat m = splitMatrix(psi, dims, keep);
  return m * m.adjoint();
}

// Entanglement entropy of the kept subsystems from the singular values of the split matrix.
inline double schmidtEntropy(const qd::CVec& psi, const std::vector<int>& dims, const std::vector<int>& keep) {
  Eigen::BDCSVD<qd::CMat> svd(splitMatrix(psi, dims, keep));
  double h = 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-16) h -= p * std::log(p);
  }
  return h;
}

inline double entropyOf(const qd::CMat& rho) {
  Eigen::SelfAdjointEigenSolver<qd::CMat> es(rho);
  double h = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) h -= p * std::log(p);
  }
  return h;
}

inline double binaryEntropy(double p) {
  double h = 0.0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log(1 - p);
  return h;
}

}  // namespace testing
