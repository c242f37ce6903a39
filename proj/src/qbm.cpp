#include "qd/qbm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qd {

namespace {

RMat symplecticForm(int modes) {
  RMat j = RMat::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    j(2 * m, 2 * m + 1) = 1.0;
    j(2 * m + 1, 2 * m) = -1.0;
  }
  return j;
}

double nuEntropy(double nu) {
  if (nu <= 0.5 + 1e-12) return 0.0;
  return (nu + 0.5) * std::log(nu + 0.5) - (nu - 0.5) * std::log(nu - 0.5);
}

}  // namespace

void GaussianState::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0)
    throw std::invalid_argument("GaussianState: covariance must be square with two rows per mode");
  if (means.size() != cov.rows()) throw std::invalid_argument("GaussianState: mean vector size");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("GaussianState: covariance not symmetric");
  RVec nu = symplecticEigenvalues(cov);
  if (nu.minCoeff() < 0.5 - 1e-8) throw std::invalid_argument("GaussianState: uncertainty principle violated");
}

RMat GaussianState::block(const std::vector<int>& modeList) const {
  const auto k = static_cast<Eigen::Index>(modeList.size());
  RMat b(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) b.block<2, 2>(2 * i, 2 * j) = cov.block<2, 2>(2 * modeList[i], 2 * modeList[j]);
  return b;
}

void OhmicBathParams::validate() const {
  if (bands < 1) throw std::invalid_argument("OhmicBathParams: need at least one band");
  if (bands > maxBands) throw CapExceeded("OhmicBathParams: band count above cap");
  if (!(cutoff > 0.0) || !(systemMass > 0.0) || !(bandMass > 0.0) || !(omega0 > 0.0) || gamma0 < 0.0)
    throw std::invalid_argument("OhmicBathParams: parameters must be positive");
}

double OhmicBathParams::recurrenceTime() const { return 2.0 * std::numbers::pi / bandWidth(); }

double OhmicBathParams::coupling(int n) const {
  const double w = bandFrequency(n);
  return std::sqrt(4.0 * systemMass * bandMass * gamma0 / std::numbers::pi * w * w * bandWidth());
}

double symplecticArea(const Eigen::Matrix2d& delta) {
  const double det = delta.determinant();
  if (det < 0.25 - 1e-8) throw std::domain_error("symplecticArea: determinant below the vacuum bound");
  return std::sqrt(std::max(det, 0.25) / 0.25);
}

double gaussianEntropy(double a) {
  if (a < 1.0 - 1e-12) throw std::domain_error("gaussianEntropy: a < 1");
  if (a <= 1.0) return 0.0;
  return 0.5 * ((a + 1.0) * std::log(a + 1.0) - (a - 1.0) * std::log(a - 1.0)) - std::numbers::ln2;
}

RVec symplecticEigenvalues(const RMat& cov) {
  const int modes = static_cast<int>(cov.rows() / 2);
  Eigen::SelfAdjointEigenSolver<RMat> es(cov);
  RVec w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  RMat root = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  RMat k = root * symplecticForm(modes) * root;
  Eigen::SelfAdjointEigenSolver<RMat> ks(k.transpose() * k, Eigen::EigenvaluesOnly);
  RVec e = ks.eigenvalues();
  RVec nu(modes);
  for (int m = 0; m < modes; ++m) nu(m) = std::sqrt(std::max(0.0, 0.5 * (e(2 * m) + e(2 * m + 1))));
  return nu;
}

double gaussianStateEntropy(const RMat& cov) {
  if (cov.rows() == 2) return gaussianEntropy(2.0 * std::sqrt(std::max(cov.determinant(), 0.25)));
  double h = 0.0;
  for (double nu : symplecticEigenvalues(cov)) h += nuEntropy(nu);
  return h;
}

QbmRun qbmEvolve(const OhmicBathParams& bath, double s, Squeeze direction, double t) {
  bath.validate();
  if (!(s >= 1.0)) throw std::domain_error("qbmEvolve: squeezing must be >= 1");
  const int n = bath.bands + 1;
  // Mass-weighted coordinates: H = (P^T P + Q^T K Q) / 2.
  RMat kmat = RMat::Zero(n, n);
  kmat(0, 0) = bath.omega0 * bath.omega0;
  for (int b = 0; b < bath.bands; ++b) {
    const double w = bath.bandFrequency(b);
    kmat(b + 1, b + 1) = w * w;
    kmat(0, b + 1) = kmat(b + 1, 0) = bath.coupling(b) / std::sqrt(bath.systemMass * bath.bandMass);
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(kmat);
  if (es.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("qbmEvolve: coupled potential is not positive");
  const RMat& v = es.eigenvectors();
  RVec om = es.eigenvalues().cwiseSqrt();
  RVec c(n), sOverOm(n), omS(n);
  for (int i = 0; i < n; ++i) {
    c(i) = std::cos(om(i) * t);
    sOverOm(i) = std::sin(om(i) * t) / om(i);
    omS(i) = -om(i) * std::sin(om(i) * t);
  }
  RMat qq = v * c.asDiagonal() * v.transpose();
  RMat qp = v * sOverOm.asDiagonal() * v.transpose();
  RMat pq = v * omS.asDiagonal() * v.transpose();
  RMat sym(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      sym(2 * i, 2 * j) = qq(i, j);
      sym(2 * i, 2 * j + 1) = qp(i, j);
      sym(2 * i + 1, 2 * j) = pq(i, j);
      sym(2 * i + 1, 2 * j + 1) = qq(i, j);
    }

  RMat cov0 = RMat::Zero(2 * n, 2 * n);
  const double w0 = bath.omega0;
  if (direction == Squeeze::X) {
    cov0(0, 0) = 1.0 / (2.0 * w0 * s * s);
    cov0(1, 1) = w0 * s * s / 2.0;
  } else {
    cov0(0, 0) = s * s / (2.0 * w0);
    cov0(1, 1) = w0 / (2.0 * s * s);
  }
  for (int b = 0; b < bath.bands; ++b) {
    const double w = bath.bandFrequency(b);
    cov0(2 * (b + 1), 2 * (b + 1)) = 1.0 / (2.0 * w);
    cov0(2 * (b + 1) + 1, 2 * (b + 1) + 1) = w / 2.0;
  }
  GaussianState st;
  st.cov = sym * cov0 * sym.transpose();
  st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();
  st.means = RVec::Zero(2 * n);
  st.globallyPure = true;
  return {std::move(st), t > bath.recurrenceTime()};
}

double qbmMutualInfo(const GaussianState& state, const FragmentSpec& frag) {
  if (frag.empty()) return 0.0;
  const int bands = state.modes() - 1;
  std::vector<bool> in(bands, false);
  std::vector<int> fModes, sfModes{0}, restModes;
  for (int b : frag) {
    if (b < 0 || b >= bands) throw std::out_of_range("qbmMutualInfo: band index out of range");
    if (in[b]) throw std::invalid_argument("qbmMutualInfo: band repeated");
    in[b] = true;
  }
  for (int b = 0; b < bands; ++b) (in[b] ? fModes : restModes).push_back(b + 1);
  sfModes.insert(sfModes.end(), fModes.begin(), fModes.end());
  const double hs = gaussianStateEntropy(state.block({0}));
  const double hf = gaussianStateEntropy(state.block(fModes));
  double hsf;
  if (state.globallyPure && restModes.size() < sfModes.size())
    hsf = restModes.empty() ? 0.0 : gaussianStateEntropy(state.block(restModes));
  else
    hsf = gaussianStateEntropy(state.block(sfModes));
  return hs + hf - hsf;
}

double universalPIP(double hs, double f) {
  if (!(f > 0.0 && f < 1.0)) throw std::domain_error("universalPIP: f must lie in (0, 1)");
  return hs + 0.5 * std::log(f / (1.0 - f));
}

double qbmRedundancy(double s, double delta) {
  if (!(s > 1.0)) throw std::domain_error("qbmRedundancy: squeezing must exceed 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("qbmRedundancy: delta outside (0, 1)");
  return std::pow(s, 2.0 * delta);
}

GaussianSource::GaussianSource(GaussianState state) : state_(std::move(state)) {
  if (state_.modes() < 2) throw std::invalid_argument("GaussianSource: no bath modes");
  hs_ = gaussianStateEntropy(state_.block({0}));
}

}  // namespace qd
