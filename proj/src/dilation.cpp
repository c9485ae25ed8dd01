#include "dilation/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "dilation/linalg.hpp"

namespace dilation {

namespace {

using linalg::kron;
using linalg::op_norm;

Mat eye(Index n) { return Mat::Identity(n, n); }

/// Runs f(i) for i < n on up to `threads` workers; slot i is owned by one worker.
template <class F>
void parallel_for(std::size_t n, int threads, F f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  for (auto& t : pool) t.join();
}

Mat hcat(const std::vector<Mat>& parts, Index rows) {
  Index cols = 0;
  for (const auto& p : parts) cols += p.cols();
  Mat out(rows, cols);
  Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p;
    c += p.cols();
  }
  return out;
}

bool disjoint(const LatticePoint& a, const LatticePoint& b) {
  for (int i = 0; i < a.k(); ++i)
    if (a[i] != 0 && b[i] != 0) return false;
  return true;
}

LatticePoint clip_below_zero(const LatticePoint& s) { return s.positive(); }

}  // namespace

int worker_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DILATION_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

KernelWindow::KernelWindow(std::shared_ptr<const TruncatedFock> space, LatticePoint bound, int threads)
    : space_(std::move(space)), bound_(std::move(bound)) {
  if (!space_) throw Error(ErrorKind::invalid_argument, "null truncated space");
  const auto& rep = space_->rep();
  if (bound_.k() != rep.k() || !bound_.nonnegative()) throw Error(ErrorKind::invalid_argument, "window bound must be a point of N^k");
  points_ = box(bound_);

  std::map<LatticePoint, Component> by_level;
  for (const auto& s : points_)
    for (const auto& b : space_->blocks()) {
      const Index n = space_->block_dim(b);
      if (n == 0) continue;
      auto& comp = by_level[b - s];
      comp.level = b - s;
      comp.members.push_back({s, b, comp.size, n});
      comp.size += n;
    }
  for (auto& [level, comp] : by_level) {
    index_[level] = static_cast<int>(components_.size());
    components_.push_back(std::move(comp));
  }

  // warm the lowering cache in a fixed order before the parallel assembly
  for (const auto& b : space_->blocks())
    for (const auto& p : box(b.min(bound_))) rep.lowering(b, p);

  const int workers = worker_threads(threads);
  parallel_for(components_.size(), workers, [&](std::size_t ci) {
    auto& comp = components_[ci];
    comp.gram = Mat::Zero(comp.size, comp.size);
    for (std::size_t x = 0; x < comp.members.size(); ++x)
      for (std::size_t y = x; y < comp.members.size(); ++y) {
        const auto& mt = comp.members[x];
        const auto& ms = comp.members[y];
        const LatticePoint diff = ms.point - mt.point;
        const LatticePoint p = diff.positive();
        const LatticePoint m = diff.negative();
        if (!p.leq(ms.block)) continue;
        const Mat block = rep.lowering(mt.block, m).adjoint() * rep.lowering(ms.block, p);
        comp.gram.block(mt.offset, ms.offset, mt.size, ms.size) = block;
        if (x != y) comp.gram.block(ms.offset, mt.offset, ms.size, mt.size) = block.adjoint();
      }
    comp.eigenvalues = linalg::eigenvalues(comp.gram);
  });

  margin_ = std::numeric_limits<double>::infinity();
  max_eig_ = 0.0;
  for (const auto& comp : components_) {
    if (comp.size == 0) continue;
    margin_ = std::min(margin_, comp.eigenvalues(0));
    max_eig_ = std::max(max_eig_, comp.eigenvalues(comp.size - 1));
  }
  if (!std::isfinite(margin_)) margin_ = 0.0;
}

std::shared_ptr<const KernelWindow> window_gram(std::shared_ptr<const TruncatedFock> space, const LatticePoint& bound,
                                                int threads) {
  return std::make_shared<const KernelWindow>(std::move(space), bound, threads);
}

int KernelWindow::component_index(const LatticePoint& level) const {
  const auto it = index_.find(level);
  return it == index_.end() ? -1 : it->second;
}

Index KernelWindow::member_offset(int component, const LatticePoint& s, const LatticePoint& b) const {
  if (component < 0) return -1;
  for (const auto& m : components_[static_cast<std::size_t>(component)].members)
    if (m.point == s && m.block == b) return m.offset;
  return -1;
}

Mat KernelWindow::kernel(const LatticePoint& t, const LatticePoint& s) const {
  const LatticePoint diff = s - t;
  return space_->hat_T(diff.negative()).adjoint() * space_->hat_T(diff.positive());
}

Index KernelWindow::full_column(const LatticePoint& s, const LatticePoint& b, Index local) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), s);
  if (it == points_.end() || !(*it == s)) throw Error(ErrorKind::invalid_argument, "point " + s.str() + " outside the window");
  return static_cast<Index>(it - points_.begin()) * space_->dim() + space_->offset(b) + local;
}

Mat KernelWindow::full_gram() const {
  const Index n = static_cast<Index>(points_.size()) * space_->dim();
  Mat out = Mat::Zero(n, n);
  for (const auto& comp : components_)
    for (const auto& a : comp.members)
      for (const auto& b : comp.members)
        out.block(full_column(a.point, a.block, 0), full_column(b.point, b.block, 0), a.size, b.size) =
            comp.gram.block(a.offset, b.offset, a.size, b.size);
  return out;
}

DilationBundle::DilationBundle(std::shared_ptr<const KernelWindow> window, DilationOptions options)
    : window_(std::move(window)), options_(options) {
  if (!window_) throw Error(ErrorKind::invalid_argument, "null kernel window");
  const auto& comps = window_->components();
  const double cutoff = options_.rank_rtol * std::max(window_->max_eigenvalue(), 1e-300);
  factors_.resize(comps.size());
  parallel_for(comps.size(), worker_threads(options_.threads), [&](std::size_t c) {
    if (options_.method == Factorization::eigen)
      factors_[c] = linalg::hermitian_factor(comps[c].gram, cutoff).factor;
    else
      factors_[c] = linalg::pivoted_cholesky(comps[c].gram, cutoff);
  });
  for (const auto& f : factors_) {
    row_offsets_.push_back(rank_);
    rank_ += f.rows();
  }

  const auto& space = window_->space();
  const LatticePoint top = space.bound().min(window_->bound());
  for (const auto& s : box(top)) gen_points_.push_back(s);
  const int c0 = window_->component_index(LatticePoint(space.rep().k()));
  if (c0 < 0) throw Error(ErrorKind::invalid_argument, "window has no generating vectors");
  gen_ = factors_[static_cast<std::size_t>(c0)];
  for (const auto& m : comps[static_cast<std::size_t>(c0)].members) gen_cols_[m.point] = {m.offset, m.size};
  gen_pinv_ = linalg::pinv(gen_, sub_rtol());

  const int D = space.rep().system().algebra().dim();
  for (int p = 0; p < D; ++p) {
    const Vec a = Vec::Unit(D, p);
    std::vector<Mat> parts;
    for (const auto& s : gen_points_) {
      const Mat g = generator_block(s);
      if (g.cols() == 0) continue;
      parts.push_back(g * space.rep().algebra_block(s, a));
    }
    v0_.push_back(hcat(parts, gen_.rows()) * gen_pinv_);
  }
}

std::shared_ptr<const DilationBundle> kolmogorov(std::shared_ptr<const KernelWindow> window, DilationOptions options) {
  if (!window) throw Error(ErrorKind::invalid_argument, "null kernel window");
  if (window->psd_margin() < -options.psd_tol)
    throw Error(ErrorKind::not_positive_definite,
                "window Gram has minimum eigenvalue " + std::to_string(window->psd_margin()));
  return std::make_shared<const DilationBundle>(std::move(window), options);
}

double DilationBundle::sub_rtol() const { return std::sqrt(options_.rank_rtol); }

Mat DilationBundle::full_factor() const {
  const auto& w = *window_;
  const Index n = static_cast<Index>(w.points().size()) * w.space().dim();
  Mat out = Mat::Zero(rank_, n);
  for (std::size_t c = 0; c < factors_.size(); ++c)
    for (const auto& m : w.components()[c].members)
      out.block(row_offsets_[c], w.full_column(m.point, m.block, 0), factors_[c].rows(), m.size) =
          factors_[c].middleCols(m.offset, m.size);
  return out;
}

Mat DilationBundle::kappa(const LatticePoint& s) const {
  const Index n = window_->space().dim();
  Mat out = Mat::Zero(rank_, n);
  const auto& space = window_->space();
  for (std::size_t c = 0; c < factors_.size(); ++c)
    for (const auto& m : window_->components()[c].members)
      if (m.point == s)
        out.block(row_offsets_[c], space.offset(m.block), factors_[c].rows(), m.size) =
            factors_[c].middleCols(m.offset, m.size);
  return out;
}

DilationBundle::PartialIsometry DilationBundle::hat_V(const LatticePoint& u) const {
  if (u.k() != rep().k() || !u.nonnegative() || !u.leq(window_->bound()))
    throw Error(ErrorKind::invalid_argument, "hat_V needs 0 <= u <= M");
  PartialIsometry out{Mat::Zero(rank_, rank_), Mat::Zero(rank_, rank_)};
  const auto& comps = window_->components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const int target = window_->component_index(comps[c].level - u);
    std::vector<Mat> src;
    std::vector<Mat> tgt;
    for (const auto& m : comps[c].members) {
      const LatticePoint moved = m.point + u;
      if (!moved.leq(window_->bound())) continue;
      const Index off = window_->member_offset(target, moved, m.block);
      src.push_back(factors_[c].middleCols(m.offset, m.size));
      tgt.push_back(factors_[static_cast<std::size_t>(target)].middleCols(off, m.size));
    }
    if (src.empty()) continue;
    const Mat s = hcat(src, factors_[c].rows());
    const Mat t = hcat(tgt, factors_[static_cast<std::size_t>(target)].rows());
    const Mat sp = linalg::pinv(s, sub_rtol());
    out.op.block(row_offsets_[static_cast<std::size_t>(target)], row_offsets_[c], t.rows(), s.rows()) = t * sp;
    out.domain.block(row_offsets_[c], row_offsets_[c], s.rows(), s.rows()) = s * sp;
  }
  return out;
}

Mat DilationBundle::generator_block(const LatticePoint& s) const {
  const auto it = gen_cols_.find(s);
  if (it != gen_cols_.end()) return gen_.middleCols(it->second.first, it->second.second);
  if (std::find(gen_points_.begin(), gen_points_.end(), s) != gen_points_.end()) return Mat(gen_.rows(), 0);
  throw Error(ErrorKind::invalid_argument, "point " + s.str() + " carries no generating vectors");
}

Mat DilationBundle::V0(const Vec& a) const {
  Mat out = Mat::Zero(generated_rank(), generated_rank());
  for (std::size_t p = 0; p < v0_.size(); ++p)
    if (a(static_cast<Index>(p)) != Complex(0)) out += a(static_cast<Index>(p)) * v0_[p];
  return out;
}

const DilationBundle::VsEntry& DilationBundle::vs_entry(const LatticePoint& s) const {
  return vs_.get(s, [&] {
    const LatticePoint top = space().bound().min(window_->bound());
    if (s.k() != rep().k() || !s.nonnegative() || s.is_zero() || !s.leq(top))
      throw Error(ErrorKind::invalid_argument, "V_s needs 0 < s <= min(L, M)");
    const Index q = generated_rank();
    const Index m = rep().system().fiber_dim(s);
    std::vector<Mat> dom;
    std::vector<std::vector<Mat>> img(static_cast<std::size_t>(m));
    for (const auto& t : box(top - s)) {
      const Mat g = generator_block(t);
      if (g.cols() == 0) continue;
      dom.push_back(g);
      const Mat target = generator_block(s + t);
      for (Index b = 0; b < m; ++b)
        img[static_cast<std::size_t>(b)].push_back(target * rep().tensor_map(s, t, Vec::Unit(m, b)));
    }
    VsEntry e;
    const Mat gd = hcat(dom, q);
    const Mat gp = linalg::pinv(gd, sub_rtol());
    for (Index b = 0; b < m; ++b) e.basis.push_back(hcat(img[static_cast<std::size_t>(b)], q) * gp);
    e.domain = gd * gp;
    return e;
  });
}

const std::vector<Mat>& DilationBundle::Vs_basis(const LatticePoint& s) const { return vs_entry(s).basis; }
const Mat& DilationBundle::Vs_domain(const LatticePoint& s) const { return vs_entry(s).domain; }

Mat DilationBundle::Vs(const LatticePoint& s, const Vec& x) const {
  if (s.is_zero()) return V0(x);
  const auto& basis = Vs_basis(s);
  Mat out = Mat::Zero(generated_rank(), generated_rank());
  for (std::size_t b = 0; b < basis.size(); ++b)
    if (x(static_cast<Index>(b)) != Complex(0)) out += x(static_cast<Index>(b)) * basis[b];
  return out;
}

Mat DilationBundle::generated_projection(const LatticePoint& bound) const {
  std::vector<Mat> parts;
  for (const auto& s : gen_points_)
    if (s.leq(bound)) parts.push_back(generator_block(s));
  const Mat g = hcat(parts, generated_rank());
  return g * linalg::pinv(g, sub_rtol());
}

namespace {

LatticePoint probe_points_bound(const DilationBundle& b, const LatticePoint& probe) {
  return probe.min(b.space().bound().min(b.window().bound()));
}

/// Y_s = V~_s restricted to X(s) (x) H in localized coordinates.
Mat localized_V(const DilationBundle& b, const LatticePoint& s) {
  const Mat g0 = b.embedding();
  if (s.is_zero()) return g0;
  const auto& basis = b.Vs_basis(s);
  std::vector<Mat> parts;
  for (const auto& v : basis) parts.push_back(v * g0);
  return hcat(parts, b.generated_rank()) * b.rep().localized(s).pinv;
}

}  // namespace

Report verify_regular_dilation(const DilationBundle& b, const LatticePoint& probe) {
  Report r;
  const auto& rep = b.rep();
  const int D = rep.system().algebra().dim();
  const Mat g0 = b.embedding();
  const Mat ph = g0 * linalg::pinv(g0);

  double item1 = 0.0;
  for (int p = 0; p < D; ++p) {
    const Mat& v = b.V0_basis()[static_cast<std::size_t>(p)];
    item1 = std::max(item1, op_norm(Mat(v * ph - ph * v)));
    item1 = std::max(item1, op_norm(Mat(v * g0 - g0 * rep.sigma().images[static_cast<std::size_t>(p)])));
  }
  r.add("regular_item1", item1, 1e-8);

  const auto points = box(clip_below_zero(probe_points_bound(b, probe)));
  std::map<LatticePoint, Mat> ys;
  for (const auto& s : points) ys[s] = localized_V(b, s);
  double item2 = 0.0;
  for (const auto& sp : points)
    for (const auto& sm : points) {
      if (!disjoint(sp, sm)) continue;
      const Mat lhs = ys[sm].adjoint() * ys[sp];
      const Mat rhs = rep.t_tilde(sm).adjoint() * rep.t_tilde(sp);
      if (lhs.size()) item2 = std::max(item2, op_norm(Mat(lhs - rhs)));
    }
  r.add("regular_item2", item2, 1e-8);

  std::vector<Mat> yparts;
  std::vector<Mat> gparts;
  for (const auto& s : points) {
    yparts.push_back(ys[s]);
    gparts.push_back(b.generator_block(s));
  }
  const double rtol = std::sqrt(b.options().rank_rtol);
  r.add("regular_item3",
        linalg::subspace_distance(hcat(yparts, b.generated_rank()), hcat(gparts, b.generated_rank()), rtol), 1e-8);

  double item4 = 0.0;
  for (const auto& s : points) {
    if (s.is_zero()) continue;
    const Mat comp = b.Vs_domain(s) - ph;
    for (const auto& v : b.Vs_basis(s)) item4 = std::max(item4, op_norm(Mat(g0.adjoint() * v * comp)));
  }
  r.add("regular_item4", item4, 1e-6);
  return r;
}

double verify_V_isometry(const DilationBundle& b, const LatticePoint& probe) {
  const auto& x = b.rep().system();
  const int D = x.algebra().dim();
  double worst = 0.0;
  for (const auto& s : box(clip_below_zero(probe_points_bound(b, probe)))) {
    if (s.is_zero()) continue;
    const auto& e = x.fiber(s);
    const auto& basis = b.Vs_basis(s);
    const Mat& dom = b.Vs_domain(s);
    for (int i = 0; i < e.dim; ++i)
      for (int j = 0; j < e.dim; ++j) {
        const Mat diff = basis[i].adjoint() * basis[j] - b.V0(e.inner(i, j));
        worst = std::max(worst, op_norm(Mat(dom * diff * dom)));
      }
    for (int p = 0; p < D; ++p)
      for (int i = 0; i < e.dim; ++i) {
        const Mat right = b.Vs(s, e.right_action[p].col(i)) - basis[i] * b.V0_basis()[p];
        const Mat left = b.Vs(s, e.left_action[p].col(i)) - b.V0_basis()[p] * basis[i];
        worst = std::max(worst, op_norm(Mat(right * dom)));
        worst = std::max(worst, op_norm(Mat(left * dom)));
      }
  }
  return worst;
}

double verify_V_semigroup(const DilationBundle& b, const LatticePoint& probe) {
  const auto& x = b.rep().system();
  const auto points = box(clip_below_zero(probe_points_bound(b, probe)));
  double worst = 0.0;
  for (const auto& s : points)
    for (const auto& t : points) {
      if (s.is_zero() || t.is_zero() || !(s + t).leq(points.back())) continue;
      const Mat& u = x.mult_iso(s, t);
      const Mat& dom = b.Vs_domain(s + t);
      const auto& vs = b.Vs_basis(s);
      const auto& vt = b.Vs_basis(t);
      const Index mt = static_cast<Index>(vt.size());
      for (Index i = 0; i < static_cast<Index>(vs.size()); ++i)
        for (Index j = 0; j < mt; ++j) {
          const Mat diff = b.Vs(s + t, u.col(i * mt + j)) - vs[i] * vt[j];
          worst = std::max(worst, op_norm(Mat(diff * dom)));
        }
    }
  return worst;
}

double verify_V0_star_hom(const DilationBundle& b) {
  const auto& alg = b.rep().system().algebra();
  const auto& v = b.V0_basis();
  const int D = alg.dim();
  double worst = op_norm(Mat(b.V0(alg.unit_coords()) - eye(b.generated_rank())));
  for (int p = 0; p < D; ++p) {
    worst = std::max(worst, op_norm(Mat(v[p].adjoint() - v[alg.adjoint_index(p)])));
    for (int q = 0; q < D; ++q) worst = std::max(worst, op_norm(Mat(b.V0(alg.basis_product(p, q)) - v[p] * v[q])));
  }
  return worst;
}

double verify_doubly_commuting_V(const DilationBundle& b, int j, int k, int guard) {
  const auto& x = b.rep().system();
  if (j == k || j < 0 || k < 0 || j >= x.k() || k >= x.k()) throw Error(ErrorKind::invalid_argument, "need distinct generator indices");
  if (guard < 0) throw Error(ErrorKind::invalid_argument, "guard must be nonnegative");
  const Index q = b.generated_rank();
  const LatticePoint ej = LatticePoint::unit(x.k(), j);
  const LatticePoint ek = LatticePoint::unit(x.k(), k);
  const AlgebraRepresentation v0{static_cast<int>(q), b.V0_basis()};
  const LocalizedSpace zj = localize(x.generator(j), v0);
  const LocalizedSpace zk = localize(x.generator(k), v0);
  const Index mj = x.generator(j).dim;
  const Index mk = x.generator(k).dim;
  const Mat vj = hcat(b.Vs_basis(ej), q);
  const Mat vk = hcat(b.Vs_basis(ek), q);

  const LatticePoint guarded = (b.window().bound() - LatticePoint::constant(x.k(), guard)).positive();
  std::vector<Mat> parts;
  for (const auto& s : b.generating_points())
    if (s.leq(guarded)) parts.push_back(b.generator_block(s));
  const Mat gg = linalg::range_basis(hcat(parts, q), std::sqrt(b.options().rank_rtol));
  const Mat dom = kron(eye(mj), gg);

  const Mat lhs = zk.pinv.adjoint() * vk.adjoint() * vj * dom;
  const Mat lift = zk.pinv * zk.pinv.adjoint() * vk.adjoint();
  const Mat rhs = zk.factor * kron(eye(mk), vj) * kron(x.flip(j, k), eye(q)) * kron(eye(mj), lift) * dom;
  const Mat diff = lhs - rhs;
  if (diff.size() == 0) return 0.0;
  const Mat phi = zj.factor * dom;
  const Mat phi_pinv = linalg::pinv(phi, 1e-10);
  const double on_range = op_norm(Mat(diff * phi_pinv));
  const double on_null = op_norm(Mat(diff * (eye(dom.cols()) - phi_pinv * phi)));
  return std::max(on_range, on_null);
}

double doubly_commuting_V_residual(const DilationBundle& b, int guard) {
  double worst = 0.0;
  const int k = b.rep().k();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) worst = std::max(worst, verify_doubly_commuting_V(b, i, j, guard));
  return worst;
}

double compare_minimal_dilations(const DilationBundle& a, const DilationBundle& b) {
  std::vector<Mat> pa;
  std::vector<Mat> pb;
  for (const auto& s : a.generating_points()) {
    const auto& other = b.generating_points();
    if (std::find(other.begin(), other.end(), s) == other.end()) continue;
    pa.push_back(a.generator_block(s));
    pb.push_back(b.generator_block(s));
  }
  const Mat ga = hcat(pa, a.generated_rank());
  const Mat gb = hcat(pb, b.generated_rank());
  const double inf = std::numeric_limits<double>::infinity();
  if (ga.cols() != gb.cols()) return inf;
  const double rtol = std::sqrt(std::max(a.options().rank_rtol, b.options().rank_rtol));
  if (linalg::range_basis(ga, rtol).cols() != linalg::range_basis(gb, rtol).cols()) return inf;
  double worst = op_norm(Mat(ga.adjoint() * ga - gb.adjoint() * gb));
  const Mat gap = linalg::pinv(ga, rtol);
  const Mat w = gb * gap;
  worst = std::max(worst, op_norm(Mat(w * ga - gb)));
  worst = std::max(worst, op_norm(Mat(w.adjoint() * w - ga * gap)));
  return worst;
}

}  // namespace dilation
