#include "qd/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qd {

HilbertShape::HilbertShape(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("HilbertShape: subsystem dimension must be >= 2");
    if (total_ > policy().dimensionCap / static_cast<std::size_t>(d))
      throw CapExceeded("HilbertShape: total dimension exceeds cap");
    total_ *= static_cast<std::size_t>(d);
  }
}

HilbertShape HilbertShape::qubits(int n) { return HilbertShape(std::vector<int>(n, 2)); }

std::size_t HilbertShape::productOf(const std::vector<int>& subsystems) const {
  std::size_t p = 1;
  for (int i : subsystems) p *= static_cast<std::size_t>(dims_.at(i));
  return p;
}

HilbertShape HilbertShape::restrictTo(const std::vector<int>& subsystems) const {
  std::vector<int> d;
  d.reserve(subsystems.size());
  for (int i : subsystems) d.push_back(dims_.at(i));
  return HilbertShape(std::move(d));
}

HilbertShape HilbertShape::concat(const HilbertShape& other) const {
  std::vector<int> d = dims_;
  d.insert(d.end(), other.dims_.begin(), other.dims_.end());
  return HilbertShape(std::move(d));
}

void validateFragment(const HilbertShape& shape, const FragmentSpec& frag) {
  std::vector<bool> seen(shape.size(), false);
  for (int i : frag) {
    if (i < 0 || i >= shape.size())
      throw std::out_of_range("fragment index " + std::to_string(i) + " out of range");
    if (seen[i]) throw std::invalid_argument("fragment index " + std::to_string(i) + " repeated");
    seen[i] = true;
  }
}

FragmentSpec complementOf(const HilbertShape& shape, const FragmentSpec& frag) {
  std::vector<bool> in(shape.size(), false);
  for (int i : frag) in.at(i) = true;
  FragmentSpec out;
  for (int i = 0; i < shape.size(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> indexOffsets(const HilbertShape& shape, const FragmentSpec& subsystems) {
  const int n = shape.size();
  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = s;
    s *= static_cast<std::size_t>(shape.dim(i));
  }
  std::vector<std::size_t> offsets{0};
  for (int sub : subsystems) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * shape.dim(sub));
    for (std::size_t base : offsets)
      for (int v = 0; v < shape.dim(sub); ++v) next.push_back(base + v * stride[sub]);
    offsets.swap(next);
  }
  return offsets;
}

StateVector::StateVector(HilbertShape shape, CVec amplitudes) : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != shape_.total())
    throw std::invalid_argument("StateVector: amplitude count does not match shape");
  if (std::abs(amps_.norm() - 1.0) > policy().stateTol)
    throw std::invalid_argument("StateVector: not normalized");
}

StateVector StateVector::basis(const HilbertShape& shape, std::size_t index) {
  CVec v = CVec::Zero(static_cast<Eigen::Index>(shape.total()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(shape, std::move(v));
}

StateVector StateVector::normalized(HilbertShape shape, CVec amplitudes) {
  double n = amplitudes.norm();
  if (n == 0.0) throw std::invalid_argument("StateVector: zero vector");
  return StateVector(std::move(shape), amplitudes / n);
}

DensityMatrix::DensityMatrix(HilbertShape shape, CMat matrix) : shape_(std::move(shape)), m_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(shape_.total());
  if (m_.rows() != d || m_.cols() != d) throw std::invalid_argument("DensityMatrix: size does not match shape");
  const double tol = policy().stateTol;
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace() - cplx(1.0)) > tol) throw std::invalid_argument("DensityMatrix: trace != 1");
  if (d <= 256 && hermitianEigenvalues(m_).minCoeff() < -tol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::fromPure(const StateVector& psi) {
  const CVec& a = psi.amplitudes();
  return DensityMatrix(psi.shape(), a * a.adjoint());
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  HilbertShape s = a.shape().concat(b.shape());
  const CVec& x = a.amplitudes();
  const CVec& y = b.amplitudes();
  CVec out(static_cast<Eigen::Index>(s.total()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return StateVector(std::move(s), std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  HilbertShape s = a.shape().concat(b.shape());
  const CMat& x = a.matrix();
  const CMat& y = b.matrix();
  CMat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return DensityMatrix(std::move(s), std::move(out));
}

namespace {

FragmentSpec sortedValid(const HilbertShape& shape, FragmentSpec f) {
  validateFragment(shape, f);
  std::sort(f.begin(), f.end());
  return f;
}

// Rows: multi-index over `keep`; columns: multi-index over the complement.
CMat reshapePure(const StateVector& psi, const FragmentSpec& keep) {
  const HilbertShape& shape = psi.shape();
  FragmentSpec rest = complementOf(shape, keep);
  auto ko = indexOffsets(shape, keep);
  auto ro = indexOffsets(shape, rest);
  const CVec& a = psi.amplitudes();
  CMat m(static_cast<Eigen::Index>(ko.size()), static_cast<Eigen::Index>(ro.size()));
  for (std::size_t t = 0; t < ro.size(); ++t)
    for (std::size_t i = 0; i < ko.size(); ++i) m(i, t) = a(static_cast<Eigen::Index>(ko[i] + ro[t]));
  return m;
}

}  // namespace

DensityMatrix partialTrace(const DensityMatrix& rho, const FragmentSpec& keepIn) {
  const HilbertShape& shape = rho.shape();
  FragmentSpec keep = sortedValid(shape, keepIn);
  if (keep.empty()) throw std::invalid_argument("partialTrace: empty keep set");
  if (static_cast<int>(keep.size()) == shape.size()) return rho;
  FragmentSpec rest = complementOf(shape, keep);
  auto ko = indexOffsets(shape, keep);
  auto to = indexOffsets(shape, rest);
  const CMat& m = rho.matrix();
  const auto dk = static_cast<Eigen::Index>(ko.size());
  CMat out = CMat::Zero(dk, dk);
  for (Eigen::Index b = 0; b < dk; ++b)
    for (Eigen::Index a = 0; a < dk; ++a) {
      cplx s = 0.0;
      for (std::size_t t : to) s += m(static_cast<Eigen::Index>(ko[a] + t), static_cast<Eigen::Index>(ko[b] + t));
      out(a, b) = s;
    }
  return DensityMatrix(shape.restrictTo(keep), std::move(out));
}

DensityMatrix partialTrace(const StateVector& psi, const FragmentSpec& keepIn) {
  FragmentSpec keep = sortedValid(psi.shape(), keepIn);
  if (keep.empty()) throw std::invalid_argument("partialTrace: empty keep set");
  CMat m = reshapePure(psi, keep);
  CMat rho = m * m.adjoint();
  return DensityMatrix(psi.shape().restrictTo(keep), 0.5 * (rho + rho.adjoint()));
}

RVec reducedSpectrum(const StateVector& psi, const FragmentSpec& partIn) {
  FragmentSpec part = sortedValid(psi.shape(), partIn);
  if (part.empty() || static_cast<int>(part.size()) == psi.shape().size()) return RVec::Ones(1);
  CMat m = reshapePure(psi, part);
  CMat g = m.rows() <= m.cols() ? CMat(m * m.adjoint()) : CMat(m.adjoint() * m);
  return hermitianEigenvalues(g);
}

double entanglementEntropy(const StateVector& psi, const FragmentSpec& part) {
  return spectrumEntropy(reducedSpectrum(psi, part));
}

bool isUnitary(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace {

void checkTargets(const HilbertShape& shape, const CMat& u, const FragmentSpec& targets) {
  validateFragment(shape, targets);
  if (targets.empty()) throw std::invalid_argument("applyUnitary: no targets");
  if (static_cast<std::size_t>(u.rows()) != shape.productOf(targets) || u.rows() != u.cols())
    throw std::invalid_argument("applyUnitary: dimension mismatch");
  if (!isUnitary(u, policy().stateTol)) throw std::invalid_argument("applyUnitary: matrix is not unitary");
}

}  // namespace

StateVector applyUnitary(const StateVector& state, const CMat& u, const FragmentSpec& targets) {
  const HilbertShape& shape = state.shape();
  checkTargets(shape, u, targets);
  auto to = indexOffsets(shape, targets);
  auto ro = indexOffsets(shape, complementOf(shape, targets));
  const CVec& in = state.amplitudes();
  CVec out(in.size());
  CVec v(static_cast<Eigen::Index>(to.size()));
  for (std::size_t r : ro) {
    for (std::size_t i = 0; i < to.size(); ++i) v(i) = in(static_cast<Eigen::Index>(r + to[i]));
    CVec w = u * v;
    for (std::size_t i = 0; i < to.size(); ++i) out(static_cast<Eigen::Index>(r + to[i])) = w(i);
  }
  return StateVector(shape, std::move(out));
}

CMat embedOperator(const HilbertShape& shape, const CMat& op, const FragmentSpec& targets) {
  validateFragment(shape, targets);
  if (static_cast<std::size_t>(op.rows()) != shape.productOf(targets) || op.rows() != op.cols())
    throw std::invalid_argument("embedOperator: dimension mismatch");
  auto to = indexOffsets(shape, targets);
  auto ro = indexOffsets(shape, complementOf(shape, targets));
  const auto d = static_cast<Eigen::Index>(shape.total());
  CMat full = CMat::Zero(d, d);
  for (std::size_t r : ro)
    for (std::size_t i = 0; i < to.size(); ++i)
      for (std::size_t j = 0; j < to.size(); ++j)
        full(static_cast<Eigen::Index>(r + to[i]), static_cast<Eigen::Index>(r + to[j])) = op(i, j);
  return full;
}

DensityMatrix applyUnitary(const DensityMatrix& rho, const CMat& u, const FragmentSpec& targets) {
  checkTargets(rho.shape(), u, targets);
  CMat full = embedOperator(rho.shape(), u, targets);
  CMat out = full * rho.matrix() * full.adjoint();
  return DensityMatrix(rho.shape(), 0.5 * (out + out.adjoint()));
}

std::vector<SchmidtTerm> schmidt(const StateVector& state, const FragmentSpec& bipartition) {
  FragmentSpec left = sortedValid(state.shape(), bipartition);
  FragmentSpec right = complementOf(state.shape(), left);
  if (left.empty() || right.empty()) throw std::invalid_argument("schmidt: trivial bipartition");
  CMat m = reshapePure(state, left);
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  HilbertShape ls = state.shape().restrictTo(left);
  HilbertShape rs = state.shape().restrictTo(right);
  std::vector<SchmidtTerm> out;
  const RVec& s = svd.singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) * s(k) <= policy().eigenClip) break;
    out.push_back({s(k), StateVector::normalized(ls, svd.matrixU().col(k)),
                   StateVector::normalized(rs, svd.matrixV().col(k).conjugate())});
  }
  return out;
}

StateVector evolveDiagonal(const StateVector& state, const RVec& phases) {
  const CVec& a = state.amplitudes();
  if (phases.size() != a.size()) throw std::invalid_argument("evolveDiagonal: phase vector length mismatch");
  CVec out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out(i) = a(i) * std::polar(1.0, -phases(i));
  return StateVector(state.shape(), std::move(out));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("fidelity: shape mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace qd
