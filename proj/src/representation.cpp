#include "dilation/representation.hpp"

#include <cmath>
#include <limits>

#include "dilation/linalg.hpp"

namespace dilation {

namespace {

using linalg::kron;

Mat eye(Index n) { return Mat::Identity(n, n); }

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Mat combine(const std::vector<Mat>& ops, const Vec& x, Index d) {
  Mat out = Mat::Zero(d, d);
  for (std::size_t b = 0; b < ops.size(); ++b)
    if (x(static_cast<Index>(b)) != Complex(0)) out += x(static_cast<Index>(b)) * ops[b];
  return out;
}

Mat row_of(const std::vector<Mat>& ops, Index d) {
  Mat out(d, d * static_cast<Index>(ops.size()));
  for (std::size_t b = 0; b < ops.size(); ++b) out.middleCols(static_cast<Index>(b) * d, d) = ops[b];
  return out;
}

}  // namespace

Report validate_sigma(const CStarAlgebra& algebra, const AlgebraRepresentation& sigma, double tol) {
  if (static_cast<int>(sigma.images.size()) != algebra.dim())
    throw Error(ErrorKind::invalid_argument, "sigma needs one matrix per algebra basis element");
  for (const auto& m : sigma.images)
    if (m.rows() != sigma.dim || m.cols() != sigma.dim) throw Error(ErrorKind::invalid_argument, "sigma image has wrong size");
  Report r;
  const int D = algebra.dim();
  double mult = 0.0;
  double star = 0.0;
  for (int p = 0; p < D; ++p) {
    star = std::max(star, max_abs(sigma.images[p].adjoint() - sigma.images[algebra.adjoint_index(p)]));
    for (int q = 0; q < D; ++q)
      mult = std::max(mult, max_abs(sigma(algebra.basis_product(p, q)) - sigma.images[p] * sigma.images[q]));
  }
  r.add("sigma_multiplicative", mult, tol);
  r.add("sigma_star", star, tol);
  r.add("sigma_unital", max_abs(sigma(algebra.unit_coords()) - eye(sigma.dim)), tol);
  return r;
}

CCRepresentation::CCRepresentation(std::shared_ptr<const ProductSystem> system, AlgebraRepresentation sigma,
                                   std::vector<std::vector<Mat>> generator_maps, double tol)
    : system_(std::move(system)), sigma_(std::move(sigma)), raw_maps_(std::move(generator_maps)), tol_(tol) {
  if (!system_) throw Error(ErrorKind::invalid_argument, "null product system");
  if (static_cast<int>(sigma_.images.size()) != system_->algebra().dim())
    throw Error(ErrorKind::invalid_argument, "sigma needs one matrix per algebra basis element");
  for (const auto& m : sigma_.images)
    if (m.rows() != sigma_.dim || m.cols() != sigma_.dim) throw Error(ErrorKind::invalid_argument, "sigma image has wrong size");
  if (static_cast<int>(raw_maps_.size()) != system_->k())
    throw Error(ErrorKind::invalid_argument, "T needs one list of matrices per generator");
  for (int i = 0; i < system_->k(); ++i) {
    const auto& maps = raw_maps_[static_cast<std::size_t>(i)];
    if (static_cast<Index>(maps.size()) != system_->generator_lift(i).rows())
      throw Error(ErrorKind::invalid_argument, "T_" + std::to_string(i + 1) + " needs one matrix per basis vector");
    for (const auto& m : maps)
      if (m.rows() != sigma_.dim || m.cols() != sigma_.dim)
        throw Error(ErrorKind::invalid_argument, "T_" + std::to_string(i + 1) + " matrix has wrong size");
  }
}

const std::vector<Mat>& CCRepresentation::operators(const LatticePoint& s) const {
  return operators_.get(s, [&] {
    const Index d = sigma_.dim;
    std::vector<Mat> out;
    const int j = s.max_index();
    if (j < 0) return sigma_.images;
    if (s == LatticePoint::unit(k(), j)) {
      const Mat& lift = system_->generator_lift(j);
      const auto& raw = raw_maps_[static_cast<std::size_t>(j)];
      for (Index b = 0; b < lift.cols(); ++b) out.push_back(combine(raw, lift.col(b), d));
      return out;
    }
    const LatticePoint rest = s - LatticePoint::unit(k(), j);
    const auto& prev = operators(rest);
    const auto& gen = operators(LatticePoint::unit(k(), j));
    const Mat& lift = system_->fiber_lift(s);
    const Index mj = static_cast<Index>(gen.size());
    for (Index b = 0; b < lift.cols(); ++b) {
      Mat t = Mat::Zero(d, d);
      for (Index a = 0; a < static_cast<Index>(prev.size()); ++a)
        for (Index c = 0; c < mj; ++c) {
          const Complex w = lift(a * mj + c, b);
          if (w != Complex(0)) t += w * prev[static_cast<std::size_t>(a)] * gen[static_cast<std::size_t>(c)];
        }
      out.push_back(t);
    }
    return out;
  });
}

Mat CCRepresentation::row(const LatticePoint& s) const { return row_of(operators(s), sigma_.dim); }

Mat CCRepresentation::apply(const LatticePoint& s, const Vec& x) const { return combine(operators(s), x, sigma_.dim); }

const LocalizedSpace& CCRepresentation::localized(const LatticePoint& s) const {
  return localized_.get(s, [&] {
    if (s.is_zero()) return identity_space(sigma_.dim);
    return localize(system_->fiber(s), sigma_, tol_);
  });
}

const Mat& CCRepresentation::t_tilde(const LatticePoint& s) const {
  return t_tilde_.get(s, [&]() -> Mat {
    if (s.is_zero()) return eye(sigma_.dim);
    const auto& loc = localized(s);
    if (s.degree() == 1) return row(s) * loc.pinv;
    return descend_map(row(s), loc, localized(LatticePoint(k())));
  });
}

const Mat& CCRepresentation::lowering(const LatticePoint& t, const LatticePoint& s) const {
  return lowering_.get({t, s}, [&]() -> Mat {
    if (!s.leq(t) || !s.nonnegative()) throw Error(ErrorKind::invalid_argument, "lowering needs 0 <= s <= t");
    if (s.is_zero()) return eye(localized(t).rank());
    if (s == t) return t_tilde(s);
    const LatticePoint r = t - s;
    const Index d = sigma_.dim;
    const Mat raw = kron(eye(system_->fiber_dim(r)), row(s)) * kron(linalg::pinv(system_->mult_iso(r, s)), eye(d));
    return descend_map(raw, localized(t), localized(r));
  });
}

Mat CCRepresentation::tensor_map(const LatticePoint& s, const LatticePoint& t, const Vec& x) const {
  if (s.is_zero()) return algebra_block(t, x);
  const Index d = sigma_.dim;
  if (t.is_zero()) return localized(s).factor * kron(Mat(x), eye(d));
  const Index mt = system_->fiber_dim(t);
  const Mat raw = kron(Mat(system_->mult_iso(s, t) * kron(Mat(x), eye(mt))), eye(d));
  return descend_map(raw, localized(t), localized(s + t));
}

Mat CCRepresentation::algebra_block(const LatticePoint& s, const Vec& a) const {
  if (s.is_zero()) return sigma_(a);
  const auto& loc = localized(s);
  return descend_map(kron(system_->fiber(s).left(a), eye(sigma_.dim)), loc, loc);
}

Report validate_representation(const CCRepresentation& rep, double tol) {
  const auto& x = rep.system();
  const auto& alg = x.algebra();
  Report r = validate_sigma(alg, rep.sigma(), tol);
  const Index d = rep.H_dim();
  double cov_right = 0.0;
  double cov_left = 0.0;
  double null_part = 0.0;
  for (int i = 0; i < rep.k(); ++i) {
    const LatticePoint ei = LatticePoint::unit(rep.k(), i);
    const auto& e = x.generator(i);
    const auto& ops = rep.operators(ei);
    for (int p = 0; p < alg.dim(); ++p)
      for (int b = 0; b < e.dim; ++b) {
        Mat xr = Mat::Zero(d, d);
        Mat xl = Mat::Zero(d, d);
        for (int l = 0; l < e.dim; ++l) {
          xr += e.right_action[p](l, b) * ops[l];
          xl += e.left_action[p](l, b) * ops[l];
        }
        cov_right = std::max(cov_right, max_abs(xr - ops[b] * rep.sigma().images[p]));
        cov_left = std::max(cov_left, max_abs(xl - rep.sigma().images[p] * ops[b]));
      }
    // raw maps must vanish on null vectors, both in the module and in the localization
    const Mat& surj = x.generator_surjection(i);
    const Mat reduced_row = rep.row(ei);
    null_part = std::max(null_part, max_abs(row_of(rep.raw_generator_maps(i), d) - reduced_row * kron(surj, eye(d))));
    const auto& loc = rep.localized(ei);
    if (reduced_row.size() > 0)
      null_part = std::max(null_part, linalg::op_norm(Mat(reduced_row - reduced_row * loc.pinv * loc.factor)));
    const double norm = linalg::op_norm(rep.t_tilde(ei));
    r.add("contraction_" + std::to_string(i + 1), std::max(0.0, norm - 1.0), tol);
  }
  r.add("covariance_right", cov_right, tol);
  r.add("covariance_left", cov_left, tol);
  r.add("generator_null", null_part, tol);

  for (int i = 0; i < rep.k(); ++i)
    for (int j = i + 1; j < rep.k(); ++j) {
      const auto& ti = rep.operators(LatticePoint::unit(rep.k(), i));
      const auto& tj = rep.operators(LatticePoint::unit(rep.k(), j));
      const Index mi = static_cast<Index>(ti.size());
      const Index mj = static_cast<Index>(tj.size());
      const Mat& flip = x.flip(i, j);
      Mat lhs(d, mi * mj * d);
      std::vector<Mat> swapped;  // T_j(b') T_i(a') indexed by E_j (x) E_i raw
      for (Index b = 0; b < mj; ++b)
        for (Index a = 0; a < mi; ++a) swapped.push_back(tj[b] * ti[a]);
      for (Index a = 0; a < mi; ++a)
        for (Index b = 0; b < mj; ++b) lhs.middleCols((a * mj + b) * d, d) = ti[a] * tj[b];
      const Mat rhs = row_of(swapped, d) * kron(flip, eye(d));
      const LocalizedSpace loc = localize(raw_tensor(x.generator(i), x.generator(j)), rep.sigma(), rep.tolerance());
      const Mat diff = lhs - rhs;
      double res = linalg::op_norm(Mat(diff * loc.pinv));
      const Mat null_proj = eye(diff.cols()) - loc.pinv * loc.factor;
      res = std::max(res, linalg::op_norm(Mat(diff * null_proj)));
      r.add("commutation_" + std::to_string(i + 1) + "," + std::to_string(j + 1), res, tol);
    }
  return r;
}

bool is_isometric(const CCRepresentation& rep, const LatticePoint& s, double tol) {
  const Mat& t = rep.t_tilde(s);
  return linalg::op_norm(Mat(t.adjoint() * t - eye(t.cols()))) <= tol;
}

bool is_fully_coisometric(const CCRepresentation& rep, const LatticePoint& s, double tol) {
  const Mat& t = rep.t_tilde(s);
  return linalg::op_norm(Mat(t * t.adjoint() - eye(t.rows()))) <= tol;
}

double doubly_commuting_check(const CCRepresentation& rep, int j, int k, int s_j, int s_k) {
  if (j == k) throw Error(ErrorKind::invalid_argument, "doubly commuting check needs distinct generators");
  if (j < 0 || k < 0 || j >= rep.k() || k >= rep.k()) throw Error(ErrorKind::invalid_argument, "generator index out of range");
  if (s_j < 1 || s_k < 1) throw Error(ErrorKind::invalid_argument, "doubly commuting check needs s_j, s_k >= 1");
  const auto& x = rep.system();
  const Index d = rep.H_dim();
  LatticePoint pj(rep.k());
  LatticePoint pk(rep.k());
  pj[j] = s_j;
  pk[k] = s_k;
  const auto& lj = rep.localized(pj);
  const auto& lk = rep.localized(pk);
  const Mat& tj = rep.t_tilde(pj);
  const Mat& tk = rep.t_tilde(pk);
  const Mat flip = linalg::pinv(x.mult_iso(pk, pj)) * x.mult_iso(pj, pk);
  const Index mj = x.fiber_dim(pj);
  const Index mk = x.fiber_dim(pk);
  const Mat lhs = lk.factor * kron(eye(mk), rep.row(pj)) * kron(flip, eye(d)) *
                  kron(eye(mj), Mat(lk.pinv * tk.adjoint())) * lj.pinv;
  const Mat rhs = tk.adjoint() * tj;
  return linalg::op_norm(Mat(lhs - rhs));
}

double doubly_commuting_residual(const CCRepresentation& rep, const LatticePoint& bound) {
  double worst = 0.0;
  for (int j = 0; j < rep.k(); ++j)
    for (int k = j + 1; k < rep.k(); ++k)
      for (int a = 1; a <= bound[j]; ++a)
        for (int b = 1; b <= bound[k]; ++b) worst = std::max(worst, doubly_commuting_check(rep, j, k, a, b));
  return worst;
}

double brehmer_check_NS(const CCRepresentation& rep, unsigned v, const LatticePoint& s) {
  const LatticePoint top = s.restrict(v);
  const Index n = rep.localized(top).rank();
  if (n == 0) return std::numeric_limits<double>::infinity();
  Mat sum = Mat::Zero(n, n);
  for (unsigned u = 0; u < (1u << rep.k()); ++u) {
    if ((u & v) != u) continue;
    const Mat& w = rep.lowering(top, s.restrict(u));
    const double sign = subset_size(u) % 2 ? -1.0 : 1.0;
    sum += sign * (w.adjoint() * w);
  }
  return linalg::min_eigenvalue(sum);
}

BrehmerSummary brehmer_minimum(const CCRepresentation& rep, const LatticePoint& bound) {
  BrehmerSummary out;
  out.minimum = std::numeric_limits<double>::infinity();
  for (const auto& s : box(bound)) {
    if (s.is_zero()) continue;
    unsigned v = 0;
    for (int i = 0; i < s.k(); ++i)
      if (s[i] > 0) v |= 1u << i;
    const double m = brehmer_check_NS(rep, v, s);
    if (m < out.minimum) out = {m, v, s};
  }
  return out;
}

}  // namespace dilation
