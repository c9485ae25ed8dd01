#include "dilation/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace dilation {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::not_well_defined: return "not-well-defined";
    case ErrorKind::invalid_flip: return "invalid-flip";
    case ErrorKind::incoherent_flips: return "incoherent-flips";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& e : other.entries) entries.push_back({prefix + e.name, e.value, e.tolerance});
  for (const auto& w : other.warnings) warnings.push_back(prefix + w);
}

bool Report::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const Residual& r) { return r.pass(); });
}

const Residual* Report::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

double Report::value(const std::string& name) const {
  if (const auto* r = find(name)) return r->value;
  throw Error(ErrorKind::invalid_argument, "no report entry named " + name);
}

namespace linalg {

namespace {
Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) * 0.5; }
}  // namespace

RealVec eigenvalues(const Mat& hermitian) {
  if (hermitian.rows() == 0) return RealVec();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const Mat& hermitian) {
  if (hermitian.rows() == 0) return std::numeric_limits<double>::infinity();
  return eigenvalues(hermitian)(0);
}

HermitianFactor hermitian_factor(const Mat& gram, double cutoff) {
  HermitianFactor out;
  out.cutoff = cutoff;
  const Index n = gram.rows();
  if (n == 0) {
    out.factor = Mat(0, 0);
    out.pinv = Mat(0, 0);
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram));
  out.eigenvalues = es.eigenvalues();
  out.min_eigenvalue = out.eigenvalues(0);
  out.max_eigenvalue = out.eigenvalues(n - 1);
  std::vector<Index> kept;
  for (Index i = n - 1; i >= 0; --i) {
    const double lambda = out.eigenvalues(i);
    if (lambda > cutoff) kept.push_back(i);
    if (cutoff > 0 && std::abs(lambda) >= cutoff / 10 && std::abs(lambda) <= cutoff * 10) ++out.ambiguous;
  }
  out.factor.resize(static_cast<Index>(kept.size()), n);
  out.pinv.resize(n, static_cast<Index>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const double root = std::sqrt(out.eigenvalues(kept[r]));
    const auto v = es.eigenvectors().col(kept[r]);
    out.factor.row(static_cast<Index>(r)) = root * v.adjoint();
    out.pinv.col(static_cast<Index>(r)) = v / root;
  }
  return out;
}

Mat pivoted_cholesky(const Mat& gram, double abs_tol) {
  const Index n = gram.rows();
  Mat g = hermitian_part(gram);
  RealVec diag = g.diagonal().real();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Mat r = Mat::Zero(n, n);
  Index rank = 0;
  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    for (Index i = k + 1; i < n; ++i)
      if (diag(perm[i]) > diag(perm[piv])) piv = i;
    const double d = diag(perm[piv]);
    if (!(d > abs_tol) || d <= 0) break;
    std::swap(perm[k], perm[piv]);
    const Index p = perm[k];
    const double root = std::sqrt(d);
    // row k of R over the original column ordering
    for (Index j = k; j < n; ++j) {
      const Index c = perm[j];
      Complex acc = g(p, c);
      for (Index l = 0; l < k; ++l) acc -= std::conj(r(l, p)) * r(l, c);
      r(k, c) = acc / root;
    }
    for (Index j = k + 1; j < n; ++j) diag(perm[j]) -= std::norm(r(k, perm[j]));
    ++rank;
  }
  return r.topRows(rank);
}

Mat pinv(const Mat& a, double rtol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& s = svd.singularValues();
  const double cut = rtol * s(0);
  RealVec inv(s.size());
  for (Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut && s(i) > 0 ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat range_basis(const Mat& a, double rtol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  const RealVec& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > rtol * s(0) && s(r) > 0) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& a, double rtol) {
  const Index n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RealVec& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > rtol * s(0) && s(r) > 0) ++r;
  return svd.matrixV().rightCols(n - r);
}

double subspace_distance(const Mat& a, const Mat& b, double rtol) {
  const Mat qa = range_basis(a, rtol);
  const Mat qb = range_basis(b, rtol);
  const Mat da = qa - qb * (qb.adjoint() * qa);
  const Mat db = qb - qa * (qa.adjoint() * qb);
  return std::max(op_norm(da), op_norm(db));
}

}  // namespace linalg
}  // namespace dilation
