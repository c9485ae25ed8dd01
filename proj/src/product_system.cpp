#include "dilation/product_system.hpp"

#include <cmath>
#include <sstream>

#include "dilation/linalg.hpp"

namespace dilation {

namespace {

using linalg::kron;

Mat eye(Index n) { return Mat::Identity(n, n); }

std::string pair_name(int i, int j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

}  // namespace

ProductSystem::ProductSystem(CStarAlgebra algebra, std::vector<Correspondence> generators, FlipMap flips, double tol)
    : algebra_(std::move(algebra)), tol_(tol) {
  if (generators.empty()) throw Error(ErrorKind::invalid_argument, "product system needs at least one generator");
  const int k = static_cast<int>(generators.size());
  if (k > 16) throw Error(ErrorKind::invalid_argument, "at most 16 generators supported");
  for (auto& g : generators) {
    if (g.algebra != algebra_) throw Error(ErrorKind::invalid_argument, "generator over a different algebra");
    check_shape(g);
    generators_.push_back(reduce_null(g, tol));
    for (const auto& w : generators_.back().warnings) warnings_.push_back("generator: " + w);
  }
  for (const auto& [key, m] : flips) {
    const auto [i, j] = key;
    if (i < 0 || j >= k || i >= j) throw Error(ErrorKind::invalid_argument, "flip key out of range");
  }

  const int n = algebra_.rep_dim();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const auto it = flips.find({i, j});
      if (it == flips.end()) throw Error(ErrorKind::invalid_argument, "missing flip " + pair_name(i, j));
      const Mat& raw = it->second;
      const auto& gi = generators_[static_cast<std::size_t>(i)];
      const auto& gj = generators_[static_cast<std::size_t>(j)];
      const Index raw_mi = gi.lift.rows();
      const Index raw_mj = gj.lift.rows();
      if (raw.rows() != raw_mi * raw_mj || raw.cols() != raw_mi * raw_mj)
        throw Error(ErrorKind::invalid_argument, "flip " + pair_name(i, j) + " has wrong size");
      const Mat t = kron(gj.surjection, gi.surjection) * raw * kron(gi.lift, gj.lift);

      const Correspondence ij = raw_tensor(gi.space, gj.space);
      const Correspondence ji = raw_tensor(gj.space, gi.space);
      const Mat g_ij = ij.embedded_gram();
      const Mat g_ji = ji.embedded_gram();
      const Mat tn = kron(t, eye(n));
      const double iso = t.size() ? (tn.adjoint() * g_ji * tn - g_ij).cwiseAbs().maxCoeff() : 0.0;
      double intertwine = 0.0;
      for (int p = 0; p < algebra_.dim(); ++p) {
        intertwine = std::max(intertwine, module_norm(t * ij.left_action[p] - ji.left_action[p] * t, g_ij, g_ji, n));
        intertwine = std::max(intertwine, module_norm(t * ij.right_action[p] - ji.right_action[p] * t, g_ij, g_ji, n));
      }
      const Reduced rij = reduce_null(ij, tol);
      const Reduced rji = reduce_null(ji, tol);
      const Mat quotient = rji.surjection * t * rij.lift;
      double bijective = rij.space.dim == rji.space.dim ? 0.0 : 1.0;
      if (bijective == 0.0 && quotient.size() > 0) {
        Eigen::JacobiSVD<Mat> svd(quotient);
        const auto& sv = svd.singularValues();
        if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff())) bijective = 1.0;
      }
      const std::string name = "flip_" + pair_name(i, j);
      report_.add(name + "_isometry", iso, tol);
      report_.add(name + "_intertwining", intertwine, tol);
      report_.add(name + "_bijective", bijective, tol);
      if (iso > tol || intertwine > tol || bijective > tol) {
        std::ostringstream os;
        os << "flip " << pair_name(i, j) << " is not a correspondence isomorphism (isometry " << iso
           << ", intertwining " << intertwine << ", bijectivity " << bijective << ")";
        throw Error(ErrorKind::invalid_flip, os.str());
      }
      flips_[{i, j}] = t;
      // raw inverse E_j (x) E_i -> E_i (x) E_j through the quotients
      Mat inverse(0, 0);
      if (quotient.size() > 0) inverse = rij.lift * quotient.inverse() * rji.surjection;
      else inverse = Mat::Zero(t.cols(), t.rows());
      flips_[{j, i}] = inverse;
    }

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) {
        const Index mi = generator(i).dim, mj = generator(j).dim, ml = generator(l).dim;
        const Mat r1 = kron(flip(j, l), eye(mi)) * kron(eye(mj), flip(i, l)) * kron(flip(i, j), eye(ml));
        const Mat r2 = kron(eye(ml), flip(i, j)) * kron(flip(i, l), eye(mj)) * kron(eye(mi), flip(j, l));
        const Mat src = raw_tensor(raw_tensor(generator(i), generator(j)), generator(l)).embedded_gram();
        const Mat tgt = raw_tensor(raw_tensor(generator(l), generator(j)), generator(i)).embedded_gram();
        const double braid = module_norm(r1 - r2, src, tgt, n);
        const std::string name = "braid_" + pair_name(i, j) + "," + std::to_string(l + 1);
        report_.add(name, braid, tol);
        if (braid > tol) {
          std::ostringstream os;
          os << "flips " << pair_name(i, j) << "," << l + 1 << " fail the braid relation (residual " << braid << ")";
          throw Error(ErrorKind::incoherent_flips, os.str());
        }
      }
}

std::shared_ptr<const ProductSystem> make_product_system(CStarAlgebra algebra, std::vector<Correspondence> generators,
                                                         FlipMap flips, double tol) {
  return std::make_shared<const ProductSystem>(std::move(algebra), std::move(generators), std::move(flips), tol);
}

const Mat& ProductSystem::flip(int i, int j) const {
  const auto it = flips_.find({i, j});
  if (it == flips_.end()) throw Error(ErrorKind::invalid_argument, "no flip for generators " + pair_name(i, j));
  return it->second;
}

std::vector<std::string> ProductSystem::warnings() const {
  std::lock_guard lock(mutex_);
  return warnings_;
}

void ProductSystem::check_point(const LatticePoint& s) const {
  if (s.k() != k() || !s.nonnegative())
    throw Error(ErrorKind::invalid_argument, "lattice point " + s.str() + " is not in N^" + std::to_string(k()));
}

const ProductSystem::FiberEntry& ProductSystem::fiber_entry(const LatticePoint& s) const {
  check_point(s);
  {
    std::lock_guard lock(mutex_);
    const auto it = fibers_.find(s);
    if (it != fibers_.end()) return it->second;
  }
  FiberEntry entry;
  std::vector<std::string> warn;
  const int j = s.max_index();
  if (j < 0) {
    entry.space = algebra_correspondence(algebra_);
  } else if (s == LatticePoint::unit(k(), j)) {
    entry.space = generator(j);
  } else {
    const auto& prev = fiber_entry(s - LatticePoint::unit(k(), j));
    Reduced r = interior_tensor(prev.space, generator(j), tol_);
    for (const auto& w : r.warnings) warn.push_back("fiber " + s.str() + ": " + w);
    entry.space = std::move(r.space);
    entry.surjection = std::move(r.surjection);
    entry.lift = std::move(r.lift);
  }
  std::lock_guard lock(mutex_);
  const auto [it, inserted] = fibers_.emplace(s, std::move(entry));
  if (inserted) warnings_.insert(warnings_.end(), warn.begin(), warn.end());
  return it->second;
}

const Correspondence& ProductSystem::fiber(const LatticePoint& s) const { return fiber_entry(s).space; }

const Mat& ProductSystem::fiber_surjection(const LatticePoint& s) const {
  const auto& e = fiber_entry(s);
  if (s.degree() < 2) throw Error(ErrorKind::invalid_argument, "fiber " + s.str() + " is not a tensor");
  return e.surjection;
}

const Mat& ProductSystem::fiber_lift(const LatticePoint& s) const {
  const auto& e = fiber_entry(s);
  if (s.degree() < 2) throw Error(ErrorKind::invalid_argument, "fiber " + s.str() + " is not a tensor");
  return e.lift;
}

const Mat& ProductSystem::mult_iso(const LatticePoint& s, const LatticePoint& t) const {
  check_point(s);
  check_point(t);
  const auto key = std::make_pair(s, t);
  {
    std::lock_guard lock(mutex_);
    const auto it = mults_.find(key);
    if (it != mults_.end()) return it->second;
  }
  Mat u = compute_mult(s, t);
  std::lock_guard lock(mutex_);
  return mults_.emplace(key, std::move(u)).first->second;
}

Mat ProductSystem::compute_mult(const LatticePoint& s, const LatticePoint& t) const {
  const int D = algebra_.dim();
  if (s.is_zero()) {
    const auto& x = fiber(t);
    Mat u(x.dim, static_cast<Index>(D) * x.dim);
    for (int p = 0; p < D; ++p)
      for (int i = 0; i < x.dim; ++i) u.col(p * x.dim + i) = x.left_action[static_cast<std::size_t>(p)].col(i);
    return u;
  }
  if (t.is_zero()) {
    const auto& x = fiber(s);
    Mat u(x.dim, static_cast<Index>(D) * x.dim);
    for (int i = 0; i < x.dim; ++i)
      for (int p = 0; p < D; ++p) u.col(i * D + p) = x.right_action[static_cast<std::size_t>(p)].col(i);
    return u;
  }
  const int j = t.max_index();
  const LatticePoint ej = LatticePoint::unit(k(), j);
  const Index mj = generator(j).dim;
  if (t == ej) {
    const int i = s.max_index();
    if (j >= i) return fiber_surjection(s + ej);
    const LatticePoint ei = LatticePoint::unit(k(), i);
    const LatticePoint rest = s - ei;
    const Index mi = generator(i).dim;
    if (rest.is_zero()) return mult_iso(ej, ei) * flip(i, j);
    const Index mr = fiber_dim(rest);
    return mult_iso(rest + ej, ei) * kron(mult_iso(rest, ej), eye(mi)) * kron(eye(mr), flip(i, j)) *
           kron(fiber_lift(s), eye(mj));
  }
  const LatticePoint rest = t - ej;
  return mult_iso(s + rest, ej) * kron(mult_iso(s, rest), eye(mj)) * kron(eye(fiber_dim(s)), fiber_lift(t));
}

double check_associativity(const ProductSystem& x, const LatticePoint& s, const LatticePoint& t,
                           const LatticePoint& r) {
  const Index ms = x.fiber_dim(s), mt = x.fiber_dim(t), mr = x.fiber_dim(r);
  const Mat lhs = x.mult_iso(s + t, r) * kron(x.mult_iso(s, t), eye(mr));
  const Mat rhs = x.mult_iso(s, t + r) * kron(eye(ms), x.mult_iso(t, r));
  (void)mt;
  const Mat src = raw_tensor(raw_tensor(x.fiber(s), x.fiber(t)), x.fiber(r)).embedded_gram();
  const Mat tgt = x.fiber(s + t + r).embedded_gram();
  return module_norm(lhs - rhs, src, tgt, x.algebra().rep_dim());
}

double unitarity_defect(const ProductSystem& x, const LatticePoint& s, const LatticePoint& t) {
  const Mat& u = x.mult_iso(s, t);
  const Correspondence raw = raw_tensor(x.fiber(s), x.fiber(t));
  const int n = x.algebra().rep_dim();
  const Mat un = kron(u, eye(n));
  double defect = 0.0;
  if (un.size() > 0) defect = (un.adjoint() * x.fiber(s + t).embedded_gram() * un - raw.embedded_gram()).cwiseAbs().maxCoeff();
  const Reduced q = reduce_null(raw, x.tolerance());
  if (q.space.dim != x.fiber_dim(s + t)) return std::max(defect, 1.0);
  return defect;
}

}  // namespace dilation
