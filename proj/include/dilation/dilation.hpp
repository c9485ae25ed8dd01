#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dilation/hat.hpp"

namespace dilation {

enum class Factorization { eigen, pivoted_cholesky };

struct DilationOptions {
  /// Negative window margins above -psd_tol count as positive.
  double psd_tol = 1e-8;
  /// Eigenvalues at most rank_rtol * (largest eigenvalue) are discarded.
  double rank_rtol = 1e-10;
  Factorization method = Factorization::eigen;
  /// 0 reads DILATION_LAB_THREADS, falling back to the hardware concurrency.
  int threads = 0;
};

int worker_threads(int requested = 0);

/// Kernel K(t,s) = T^_{(s-t)_-}^* T^_{(s-t)_+} on the window box(M). The Gram
/// splits exactly into level components: a pair (s, b) of a window point and a
/// block only meets pairs of the same level c = b - s.
class KernelWindow {
 public:
  struct Member {
    LatticePoint point;  // window point s
    LatticePoint block;  // block b of H_L
    Index offset;        // column offset inside the component
    Index size;
  };
  struct Component {
    LatticePoint level;
    std::vector<Member> members;
    Index size = 0;
    Mat gram;
    RealVec eigenvalues;
  };

  KernelWindow(std::shared_ptr<const TruncatedFock> space, LatticePoint bound, int threads = 0);

  const TruncatedFock& space() const { return *space_; }
  const std::shared_ptr<const TruncatedFock>& space_ptr() const { return space_; }
  const LatticePoint& bound() const { return bound_; }
  const std::vector<LatticePoint>& points() const { return points_; }
  const std::vector<Component>& components() const { return components_; }
  /// Index of the component of level c, -1 if absent.
  int component_index(const LatticePoint& level) const;
  /// Component-local column of (s, b), -1 if the pair is not present.
  Index member_offset(int component, const LatticePoint& s, const LatticePoint& b) const;

  double psd_margin() const { return margin_; }
  double max_eigenvalue() const { return max_eig_; }

  /// The N x N kernel block K(t, s).
  Mat kernel(const LatticePoint& t, const LatticePoint& s) const;
  /// The full (|W| N) x (|W| N) Gram in window order.
  Mat full_gram() const;
  /// Column of the full Gram for (s, block b, local index).
  Index full_column(const LatticePoint& s, const LatticePoint& b, Index local) const;

 private:
  std::shared_ptr<const TruncatedFock> space_;
  LatticePoint bound_;
  std::vector<LatticePoint> points_;
  std::vector<Component> components_;
  std::map<LatticePoint, int> index_;
  double margin_ = 0.0;
  double max_eig_ = 0.0;
};

std::shared_ptr<const KernelWindow> window_gram(std::shared_ptr<const TruncatedFock> space, const LatticePoint& bound,
                                                int threads = 0);

/// Kolmogorov factorization of a window plus the operators it induces.
class DilationBundle {
 public:
  DilationBundle(std::shared_ptr<const KernelWindow> window, DilationOptions options = {});

  const KernelWindow& window() const { return *window_; }
  const TruncatedFock& space() const { return window_->space(); }
  const CCRepresentation& rep() const { return window_->space().rep(); }
  const DilationOptions& options() const { return options_; }

  /// Numerical rank p of the full window Gram.
  Index rank() const { return rank_; }
  const Mat& component_factor(int c) const { return factors_[static_cast<std::size_t>(c)]; }
  Index component_row_offset(int c) const { return row_offsets_[static_cast<std::size_t>(c)]; }
  /// The p x (|W| N) factor R with R^H R = Gram.
  Mat full_factor() const;
  /// kappa_s as a p x N matrix.
  Mat kappa(const LatticePoint& s) const;

  /// Partial isometry V^_u on C^p with its domain projection.
  struct PartialIsometry {
    Mat op;
    Mat domain;
  };
  PartialIsometry hat_V(const LatticePoint& u) const;

  /// Generating points s <= min(L, M); their vectors kappa_s J_s span K_min.
  const std::vector<LatticePoint>& generating_points() const { return gen_points_; }
  /// dim K_min.
  Index generated_rank() const { return gen_.rows(); }
  /// q x (block dim of s) columns of the generating factor.
  Mat generator_block(const LatticePoint& s) const;
  /// Embedding of H into K_min.
  Mat embedding() const { return generator_block(LatticePoint(rep().k())); }

  /// V_0(a) on K_min.
  Mat V0(const Vec& a) const;
  const std::vector<Mat>& V0_basis() const { return v0_; }
  /// V_s(x) on K_min; zero off its domain.
  Mat Vs(const LatticePoint& s, const Vec& x) const;
  const std::vector<Mat>& Vs_basis(const LatticePoint& s) const;
  /// Projection onto the span of the generating vectors at t <= min(L, M) - s.
  const Mat& Vs_domain(const LatticePoint& s) const;

  /// Projection onto the generating vectors at points <= bound.
  Mat generated_projection(const LatticePoint& bound) const;

 private:
  struct VsEntry {
    std::vector<Mat> basis;
    Mat domain;
  };
  const VsEntry& vs_entry(const LatticePoint& s) const;
  double sub_rtol() const;

  std::shared_ptr<const KernelWindow> window_;
  DilationOptions options_;
  std::vector<Mat> factors_;
  std::vector<Index> row_offsets_;
  Index rank_ = 0;

  std::vector<LatticePoint> gen_points_;
  std::map<LatticePoint, std::pair<Index, Index>> gen_cols_;
  Mat gen_;
  Mat gen_pinv_;
  std::vector<Mat> v0_;
  Memo<LatticePoint, VsEntry> vs_;
};

/// Throws not-positive-definite when the window margin is below -psd_tol.
std::shared_ptr<const DilationBundle> kolmogorov(std::shared_ptr<const KernelWindow> window,
                                                 DilationOptions options = {});

/// Item residuals regular_item1..4 on probes s_+, s_- <= probe_bound.
Report verify_regular_dilation(const DilationBundle& bundle, const LatticePoint& probe_bound);
/// Isometry of each V~_s with the covariance identities folded in.
double verify_V_isometry(const DilationBundle& bundle, const LatticePoint& probe_bound);
/// V_{s+t}(U_{s,t}(x (x) y)) = V_s(x) V_t(y) on the guarded domains.
double verify_V_semigroup(const DilationBundle& bundle, const LatticePoint& probe_bound);
double verify_V0_star_hom(const DilationBundle& bundle);
/// V~_k^* V~_j against (I (x) V~_j)(t (x) I)(I (x) V~_k^*) on x (x) w with w
/// generated at points <= M - guard.
double verify_doubly_commuting_V(const DilationBundle& bundle, int j, int k, int guard);
double doubly_commuting_V_residual(const DilationBundle& bundle, int guard);
/// Gram mismatch of generating vectors on the common points plus the defect
/// of the induced intertwiner; +inf on a rank mismatch.
double compare_minimal_dilations(const DilationBundle& a, const DilationBundle& b);

}  // namespace dilation
