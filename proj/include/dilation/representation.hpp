#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dilation/memo.hpp"
#include "dilation/product_system.hpp"

namespace dilation {

Report validate_sigma(const CStarAlgebra& algebra, const AlgebraRepresentation& sigma, double tol = 1e-10);

/// Covariant representation (sigma, T) of a product system on C^d. The
/// generator maps are supplied on the raw generator bases and stored on the
/// reduced ones.
class CCRepresentation {
 public:
  CCRepresentation(std::shared_ptr<const ProductSystem> system, AlgebraRepresentation sigma,
                   std::vector<std::vector<Mat>> generator_maps, double tol = 1e-10);

  const ProductSystem& system() const { return *system_; }
  const std::shared_ptr<const ProductSystem>& system_ptr() const { return system_; }
  const AlgebraRepresentation& sigma() const { return sigma_; }
  int H_dim() const { return sigma_.dim; }
  int k() const { return system_->k(); }
  double tolerance() const { return tol_; }

  const std::vector<Mat>& raw_generator_maps(int i) const { return raw_maps_[static_cast<std::size_t>(i)]; }
  /// T_s(b) for each basis vector b of X(s); sigma(f_p) for s = 0.
  const std::vector<Mat>& operators(const LatticePoint& s) const;
  /// d x (m_s d) raw map x (x) h -> T_s(x) h.
  Mat row(const LatticePoint& s) const;
  /// T_s(x) for a coordinate vector of X(s).
  Mat apply(const LatticePoint& s, const Vec& x) const;

  /// Block space of s: H itself for s = 0, otherwise X(s) (x)_sigma H.
  const LocalizedSpace& localized(const LatticePoint& s) const;
  /// T~_s from the block of s to H; the identity for s = 0.
  const Mat& t_tilde(const LatticePoint& s) const;
  /// (I (x) T~_s)(U_{t-s,s}^{-1} (x) I) from the block of t to the block of t - s.
  const Mat& lowering(const LatticePoint& t, const LatticePoint& s) const;
  /// xi -> x (x) xi from the block of t to the block of s + t.
  Mat tensor_map(const LatticePoint& s, const LatticePoint& t, const Vec& x) const;
  /// Left action of a on the block of s.
  Mat algebra_block(const LatticePoint& s, const Vec& a) const;

 private:
  std::shared_ptr<const ProductSystem> system_;
  AlgebraRepresentation sigma_;
  std::vector<std::vector<Mat>> raw_maps_;
  double tol_;

  Memo<LatticePoint, std::vector<Mat>> operators_;
  Memo<LatticePoint, LocalizedSpace> localized_;
  Memo<LatticePoint, Mat> t_tilde_;
  Memo<std::pair<LatticePoint, LatticePoint>, Mat> lowering_;
};

/// sigma, covariance, contractivity of each T~_i and flip commutation.
Report validate_representation(const CCRepresentation& rep, double tol = 1e-10);

bool is_isometric(const CCRepresentation& rep, const LatticePoint& s, double tol = 1e-10);
bool is_fully_coisometric(const CCRepresentation& rep, const LatticePoint& s, double tol = 1e-10);

/// |(I (x) T~_j)(t (x) I)(I (x) T~_k^*) - T~_k^* T~_j| for the points s_j e_j and
/// s_k e_k (generator indices 0-based).
double doubly_commuting_check(const CCRepresentation& rep, int j, int k, int s_j, int s_k);

/// Maximum of doubly_commuting_check over all pairs j < k and 1 <= s_j, s_k <= bound.
double doubly_commuting_residual(const CCRepresentation& rep, const LatticePoint& bound);

/// Minimum eigenvalue of sum_{u in v} (-1)^|u| (I (x) T~_{s[u]}^* T~_{s[u]})
/// on the block of s[v]; v is a bitmask over generators. +inf on a zero block.
double brehmer_check_NS(const CCRepresentation& rep, unsigned v, const LatticePoint& s);

struct BrehmerSummary {
  double minimum = 0.0;
  unsigned subset = 0;
  LatticePoint point;
};

/// Minimum of brehmer_check_NS over nonempty v and s in box(bound) with
/// support exactly v (other s give trivially vanishing sums).
BrehmerSummary brehmer_minimum(const CCRepresentation& rep, const LatticePoint& bound);

}  // namespace dilation
