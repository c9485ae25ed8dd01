#include "dilation/hat.hpp"

#include <algorithm>
#include <limits>

#include "dilation/linalg.hpp"

namespace dilation {

TruncatedFock::TruncatedFock(std::shared_ptr<const CCRepresentation> rep, LatticePoint bound)
    : rep_(std::move(rep)), bound_(std::move(bound)) {
  if (!rep_) throw Error(ErrorKind::invalid_argument, "null representation");
  if (bound_.k() != rep_->k() || !bound_.nonnegative())
    throw Error(ErrorKind::invalid_argument, "truncation bound must be a point of N^k");
  blocks_ = box(bound_);
  for (const auto& s : blocks_) {
    offsets_.push_back(dim_);
    dim_ += rep_->localized(s).rank();
  }
}

TruncatedFock build_truncated_space(std::shared_ptr<const CCRepresentation> rep, const LatticePoint& bound) {
  return TruncatedFock(std::move(rep), bound);
}

Index TruncatedFock::offset(const LatticePoint& s) const {
  const auto it = std::lower_bound(blocks_.begin(), blocks_.end(), s);
  if (it == blocks_.end() || !(*it == s)) throw Error(ErrorKind::invalid_argument, "block " + s.str() + " outside the box");
  return offsets_[static_cast<std::size_t>(it - blocks_.begin())];
}

Index TruncatedFock::block_dim(const LatticePoint& s) const {
  if (!contains(s)) throw Error(ErrorKind::invalid_argument, "block " + s.str() + " outside the box");
  return rep_->localized(s).rank();
}

Vec TruncatedFock::inject(const LatticePoint& s, const Vec& local) const {
  if (local.size() != block_dim(s)) throw Error(ErrorKind::invalid_argument, "local vector has wrong size");
  Vec out = Vec::Zero(dim_);
  out.segment(offset(s), local.size()) = local;
  return out;
}

Vec TruncatedFock::extract(const LatticePoint& s, const Vec& global) const {
  return global.segment(offset(s), block_dim(s));
}

Vec TruncatedFock::delta(const LatticePoint& s, const Vec& x, const Vec& h) const {
  if (s.is_zero()) return inject(s, rep_->sigma()(x) * h);
  return inject(s, rep_->localized(s).factor * linalg::kron(Mat(x), Mat(h)));
}

const Mat& TruncatedFock::hat_T(const LatticePoint& s) const {
  return hats_.get(s, [&] {
    if (s.k() != rep_->k() || !s.nonnegative()) throw Error(ErrorKind::invalid_argument, "hat_T needs s in N^k");
    Mat out = Mat::Zero(dim_, dim_);
    if (!contains(s)) return out;
    for (const auto& t : blocks_) {
      if (!s.leq(t)) continue;
      const Mat& low = rep_->lowering(t, s);
      if (low.size() == 0) continue;
      out.block(offset(t - s), offset(t), low.rows(), low.cols()) = low;
    }
    return out;
  });
}

Mat TruncatedFock::a_action(const Vec& a) const {
  Mat out = Mat::Zero(dim_, dim_);
  for (const auto& s : blocks_) {
    const Index n = block_dim(s);
    if (n == 0) continue;
    out.block(offset(s), offset(s), n, n) = rep_->algebra_block(s, a);
  }
  return out;
}

double check_hat_semigroup(const TruncatedFock& space, const LatticePoint& s, const LatticePoint& t) {
  // T^_s vanishes identically unless s <= L
  if (!space.contains(s) || !space.contains(t)) {
    if (!space.contains(s + t)) return 0.0;
  }
  return linalg::op_norm(Mat(space.hat_T(s) * space.hat_T(t) - space.hat_T(s + t)));
}

double hat_semigroup_residual(const TruncatedFock& space) {
  double worst = 0.0;
  const LatticePoint twice = space.bound() + space.bound();
  for (const auto& s : box(twice))
    for (const auto& t : box(twice - s)) worst = std::max(worst, check_hat_semigroup(space, s, t));
  return worst;
}

double check_technology(const TruncatedFock& space, const LatticePoint& s, const Vec& x, const Vec& h) {
  if (s.is_zero() || !space.contains(s)) throw Error(ErrorKind::invalid_argument, "technology check needs 0 < s <= L");
  if (space.block_dim(s) == 0) return 0.0;
  const Vec lhs = space.hat_T(s) * space.delta(s, x, h);
  const Vec rhs = space.inject(LatticePoint(s.k()), space.rep().apply(s, x) * h);
  return (lhs - rhs).norm();
}

double technology_residual(const TruncatedFock& space) {
  double worst = 0.0;
  const Index d = space.rep().H_dim();
  for (const auto& s : space.blocks()) {
    if (s.is_zero()) continue;
    const Index m = space.rep().system().fiber_dim(s);
    for (Index b = 0; b < m; ++b)
      for (Index k = 0; k < d; ++k) worst = std::max(worst, check_technology(space, s, Vec::Unit(m, b), Vec::Unit(d, k)));
  }
  return worst;
}

double hat_contraction_excess(const TruncatedFock& space) {
  double worst = -1.0;
  for (const auto& s : space.blocks()) worst = std::max(worst, linalg::op_norm(space.hat_T(s)) - 1.0);
  return worst;
}

double a_action_commutator(const TruncatedFock& space) {
  double worst = 0.0;
  const int D = space.rep().system().algebra().dim();
  for (int p = 0; p < D; ++p) {
    const Mat a = space.a_action(Vec::Unit(D, p));
    for (const auto& s : space.blocks()) {
      const Mat& t = space.hat_T(s);
      worst = std::max(worst, linalg::op_norm(Mat(a * t - t * a)));
    }
  }
  return worst;
}

double a_action_star_defect(const TruncatedFock& space) {
  const auto& alg = space.rep().system().algebra();
  const int D = alg.dim();
  std::vector<Mat> images;
  for (int p = 0; p < D; ++p) images.push_back(space.a_action(Vec::Unit(D, p)));
  double worst = 0.0;
  for (int p = 0; p < D; ++p) {
    worst = std::max(worst, linalg::op_norm(Mat(images[p].adjoint() - images[alg.adjoint_index(p)])));
    for (int q = 0; q < D; ++q)
      worst = std::max(worst, linalg::op_norm(Mat(space.a_action(alg.basis_product(p, q)) - images[p] * images[q])));
  }
  return worst;
}

double brehmer_check_hat(const TruncatedFock& space, unsigned v, const LatticePoint& s) {
  const Index n = space.dim();
  Mat sum = Mat::Zero(n, n);
  for (unsigned u = 0; u < (1u << space.rep().k()); ++u) {
    if ((u & v) != u) continue;
    const Mat& t = space.hat_T(s.restrict(u));
    const double sign = subset_size(u) % 2 ? -1.0 : 1.0;
    sum += sign * (t.adjoint() * t);
  }
  return linalg::min_eigenvalue(sum);
}

double verify_hat_doubly_commuting(const TruncatedFock& space, int j, int k, int s_j, int s_k) {
  const int K = space.rep().k();
  if (j == k || j < 0 || k < 0 || j >= K || k >= K) throw Error(ErrorKind::invalid_argument, "need distinct generator indices");
  LatticePoint pj(K);
  LatticePoint pk(K);
  pj[j] = s_j;
  pk[k] = s_k;
  const Mat& tj = space.hat_T(pj);
  const Mat& tk = space.hat_T(pk);
  return linalg::op_norm(Mat(tk.adjoint() * tj - tj * tk.adjoint()));
}

double hat_doubly_commuting_residual(const TruncatedFock& space) {
  double worst = 0.0;
  const auto& L = space.bound();
  for (int j = 0; j < L.k(); ++j)
    for (int k = 0; k < L.k(); ++k) {
      if (j == k) continue;
      for (int a = 1; a <= L[j]; ++a)
        for (int b = 1; b <= L[k]; ++b) worst = std::max(worst, verify_hat_doubly_commuting(space, j, k, a, b));
    }
  return worst;
}

}  // namespace dilation
