#include "dilation/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dilation/linalg.hpp"

namespace dilation {

Mat Correspondence::embedded_gram() const {
  const int n = algebra.rep_dim();
  Mat out(static_cast<Index>(dim) * n, static_cast<Index>(dim) * n);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out.block(i * n, j * n, n, n) = algebra.embed(inner(i, j));
  return out;
}

Mat Correspondence::trace_gram() const {
  Mat out(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out(i, j) = algebra.embed(inner(i, j)).trace();
  return out;
}

Mat Correspondence::right(const Vec& a) const {
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t p = 0; p < right_action.size(); ++p)
    if (a(static_cast<Index>(p)) != Complex(0)) out += a(static_cast<Index>(p)) * right_action[p];
  return out;
}

Mat Correspondence::left(const Vec& a) const {
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t p = 0; p < left_action.size(); ++p)
    if (a(static_cast<Index>(p)) != Complex(0)) out += a(static_cast<Index>(p)) * left_action[p];
  return out;
}

void check_shape(const Correspondence& e) {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_argument, what); };
  if (e.dim < 0) fail("negative correspondence dimension");
  const auto D = static_cast<std::size_t>(e.algebra.dim());
  if (e.gram.size() != static_cast<std::size_t>(e.dim) * e.dim) fail("gram must have dim x dim entries");
  for (const auto& g : e.gram)
    if (g.size() != e.algebra.dim()) fail("gram entry has wrong coordinate length");
  if (e.right_action.size() != D) fail("right_action needs one matrix per algebra basis element");
  if (e.left_action.size() != D) fail("left_action needs one matrix per algebra basis element");
  for (const auto& m : e.right_action)
    if (m.rows() != e.dim || m.cols() != e.dim) fail("right_action matrix has wrong size");
  for (const auto& m : e.left_action)
    if (m.rows() != e.dim || m.cols() != e.dim) fail("left_action matrix has wrong size");
}

Correspondence algebra_correspondence(const CStarAlgebra& algebra) {
  Correspondence e;
  e.algebra = algebra;
  const int D = algebra.dim();
  e.dim = D;
  for (int p = 0; p < D; ++p)
    for (int q = 0; q < D; ++q) e.gram.push_back(algebra.basis_product(algebra.adjoint_index(p), q));
  for (int r = 0; r < D; ++r) {
    Mat right(D, D);
    Mat left(D, D);
    for (int p = 0; p < D; ++p) {
      right.col(p) = algebra.basis_product(p, r);
      left.col(p) = algebra.basis_product(r, p);
    }
    e.right_action.push_back(right);
    e.left_action.push_back(left);
  }
  return e;
}

Correspondence scalar_correspondence(int m) {
  Correspondence e;
  e.algebra = CStarAlgebra({1});
  e.dim = m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) e.gram.push_back(Vec::Constant(1, i == j ? 1.0 : 0.0));
  e.right_action.push_back(Mat::Identity(m, m));
  e.left_action.push_back(Mat::Identity(m, m));
  return e;
}

Report validate_correspondence(const Correspondence& e, double tol) {
  check_shape(e);
  Report report;
  const auto& alg = e.algebra;
  const int m = e.dim;
  const int D = alg.dim();
  const Mat id = Mat::Identity(m, m);

  double herm = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      herm = std::max(herm, (alg.embed(e.inner(i, j)).adjoint() - alg.embed(e.inner(j, i))).cwiseAbs().maxCoeff());
  report.add("gram_hermitian", herm, tol);
  report.add("gram_positive", std::max(0.0, -linalg::min_eigenvalue(e.embedded_gram())), tol);

  const Vec one = alg.unit_coords();
  report.add("right_unital", m ? (e.right(one) - id).cwiseAbs().maxCoeff() : 0.0, tol);
  report.add("left_unital", m ? (e.left(one) - id).cwiseAbs().maxCoeff() : 0.0, tol);

  double right_hom = 0.0;
  double left_hom = 0.0;
  double commute = 0.0;
  for (int p = 0; p < D; ++p)
    for (int q = 0; q < D; ++q) {
      const Vec pq = alg.basis_product(p, q);
      if (m == 0) continue;
      right_hom = std::max(right_hom, (e.right(pq) - e.right_action[q] * e.right_action[p]).cwiseAbs().maxCoeff());
      left_hom = std::max(left_hom, (e.left(pq) - e.left_action[p] * e.left_action[q]).cwiseAbs().maxCoeff());
      commute = std::max(commute, (e.left_action[p] * e.right_action[q] - e.right_action[q] * e.left_action[p])
                                      .cwiseAbs()
                                      .maxCoeff());
    }
  report.add("right_homomorphism", right_hom, tol);
  report.add("left_homomorphism", left_hom, tol);
  report.add("left_right_commute", commute, tol);

  // <e_i, e_j . f_p> = <e_i, e_j> f_p and <f_p . e_i, e_j> = <e_i, f_p^* . e_j>
  double compat = 0.0;
  double adjointable = 0.0;
  for (int p = 0; p < D; ++p) {
    const Mat fp = alg.embed(Vec::Unit(D, p));
    const int ps = alg.adjoint_index(p);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vec lhs = Vec::Zero(D);
        Vec a = Vec::Zero(D);
        Vec b = Vec::Zero(D);
        for (int l = 0; l < m; ++l) {
          lhs += e.right_action[p](l, j) * e.inner(i, l);
          a += std::conj(e.left_action[p](l, i)) * e.inner(l, j);
          b += e.left_action[ps](l, j) * e.inner(i, l);
        }
        compat = std::max(compat, (alg.embed(lhs) - alg.embed(e.inner(i, j)) * fp).cwiseAbs().maxCoeff());
        adjointable = std::max(adjointable, (a - b).cwiseAbs().maxCoeff());
      }
  }
  report.add("right_compatibility", compat, tol);
  report.add("left_adjointable", adjointable, tol);
  return report;
}

namespace {

std::string ambiguity_warning(int count, double tol) {
  std::ostringstream os;
  os << "degenerate-rank: " << count << " eigenvalue(s) within a factor 10 of cutoff " << tol;
  return os.str();
}

Correspondence transform(const Correspondence& e, const Mat& s, const Mat& l) {
  Correspondence out;
  out.algebra = e.algebra;
  out.dim = static_cast<int>(s.rows());
  const int D = e.algebra.dim();
  for (int r = 0; r < out.dim; ++r)
    for (int c = 0; c < out.dim; ++c) {
      Vec g = Vec::Zero(D);
      for (int i = 0; i < e.dim; ++i)
        for (int j = 0; j < e.dim; ++j) {
          const Complex w = std::conj(l(i, r)) * l(j, c);
          if (w != Complex(0)) g += w * e.inner(i, j);
        }
      out.gram.push_back(g);
    }
  for (int p = 0; p < D; ++p) {
    out.right_action.push_back(s * e.right_action[p] * l);
    out.left_action.push_back(s * e.left_action[p] * l);
  }
  return out;
}

}  // namespace

Reduced reduce_null(const Correspondence& e, double tol) {
  check_shape(e);
  Reduced out;
  const auto f = linalg::hermitian_factor(e.trace_gram(), tol);
  if (f.ambiguous > 0) out.warnings.push_back(ambiguity_warning(f.ambiguous, tol));
  if (f.rank() == e.dim) {
    out.space = e;
    out.surjection = Mat::Identity(e.dim, e.dim);
    out.lift = Mat::Identity(e.dim, e.dim);
    return out;
  }
  // Orthonormal eigenvectors of the kept range: rows of the factor divided by sqrt(lambda).
  Mat q(e.dim, f.rank());
  for (Index r = 0; r < f.rank(); ++r) q.col(r) = f.factor.row(r).adjoint() / f.factor.row(r).norm();
  out.surjection = q.adjoint();
  out.lift = q;
  out.space = transform(e, out.surjection, out.lift);
  return out;
}

Correspondence raw_tensor(const Correspondence& e, const Correspondence& f) {
  if (e.algebra != f.algebra) throw Error(ErrorKind::invalid_argument, "tensor factors over different algebras");
  check_shape(e);
  check_shape(f);
  Correspondence out;
  out.algebra = e.algebra;
  const int me = e.dim;
  const int mf = f.dim;
  const int D = e.algebra.dim();
  out.dim = me * mf;
  out.gram.assign(static_cast<std::size_t>(out.dim) * out.dim, Vec::Zero(D));
  for (int i = 0; i < me; ++i)
    for (int k = 0; k < me; ++k) {
      // <e_i (x) f_j, e_k (x) f_l> = <f_j, <e_i, e_k> . f_l>
      const Mat phi = f.left(e.inner(i, k));
      for (int j = 0; j < mf; ++j)
        for (int l = 0; l < mf; ++l) {
          Vec g = Vec::Zero(D);
          for (int q = 0; q < mf; ++q)
            if (phi(q, l) != Complex(0)) g += phi(q, l) * f.inner(j, q);
          out.gram[static_cast<std::size_t>((i * mf + j) * out.dim + (k * mf + l))] = g;
        }
    }
  for (int p = 0; p < D; ++p) {
    out.right_action.push_back(linalg::kron(Mat::Identity(me, me), f.right_action[p]));
    out.left_action.push_back(linalg::kron(e.left_action[p], Mat::Identity(mf, mf)));
  }
  return out;
}

Reduced interior_tensor(const Correspondence& e, const Correspondence& f, double tol) {
  return reduce_null(raw_tensor(e, f), tol);
}

Mat localized_gram(const Correspondence& e, const AlgebraRepresentation& sigma) {
  const int d = sigma.dim;
  Mat g(static_cast<Index>(e.dim) * d, static_cast<Index>(e.dim) * d);
  for (int i = 0; i < e.dim; ++i)
    for (int j = 0; j < e.dim; ++j) g.block(i * d, j * d, d, d) = sigma(e.inner(i, j));
  return g;
}

LocalizedSpace localize(const Correspondence& e, const AlgebraRepresentation& sigma, double tol) {
  LocalizedSpace out;
  out.source_dim = static_cast<Index>(e.dim) * sigma.dim;
  out.tolerance = tol;
  const auto f = linalg::hermitian_factor(localized_gram(e, sigma), tol);
  out.factor = f.factor;
  out.pinv = f.pinv;
  out.min_eigenvalue = f.min_eigenvalue;
  out.ambiguous = f.ambiguous;
  return out;
}

LocalizedSpace identity_space(Index d) {
  LocalizedSpace out;
  out.source_dim = d;
  out.factor = Mat::Identity(d, d);
  out.pinv = Mat::Identity(d, d);
  out.min_eigenvalue = d > 0 ? 1.0 : 0.0;
  return out;
}

Mat descend_map(const Mat& raw, const LocalizedSpace& source, const LocalizedSpace& target, double tol,
                double* residual) {
  if (raw.rows() != target.source_dim || raw.cols() != source.source_dim)
    throw Error(ErrorKind::invalid_argument, "raw map does not match localized spaces");
  const Mat tm = target.factor * raw;
  Mat b = tm * source.pinv;
  double res = 0.0;
  if (tm.size() > 0) {
    res = (b * source.factor - tm).norm();
    const double scale = std::max(1.0, tm.norm());
    if (res > tol * scale) {
      std::ostringstream os;
      os << "raw map does not respect the quotient (residual " << res << ")";
      throw Error(ErrorKind::not_well_defined, os.str());
    }
  }
  if (residual) *residual = res;
  return b;
}

double module_norm(const Mat& d, const Mat& source, const Mat& target, int n) {
  const Mat dn = linalg::kron(d, Mat::Identity(n, n));
  if (dn.size() == 0) return 0.0;
  const double scale = std::max(source.cwiseAbs().maxCoeff(), target.cwiseAbs().maxCoeff());
  const double cut = 1e-12 * std::max(1.0, scale);
  const auto fs = linalg::hermitian_factor(source, cut);
  const auto ft = linalg::hermitian_factor(target, cut);
  const Mat img = ft.factor * dn;
  const double on_range = linalg::op_norm(Mat(img * fs.pinv));
  const Mat proj = Mat::Identity(dn.cols(), dn.cols()) - fs.pinv * fs.factor;
  const double on_null = linalg::op_norm(Mat(img * proj));
  return std::max(on_range, on_null);
}

}  // namespace dilation
