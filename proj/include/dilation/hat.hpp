#pragma once

#include <memory>
#include <vector>

#include "dilation/memo.hpp"
#include "dilation/representation.hpp"

namespace dilation {

/// H_L = H + sum_{0 < s <= L} X(s) (x)_sigma H with blocks in degree-then-lex
/// order. Block 0 is H itself.
class TruncatedFock {
 public:
  TruncatedFock(std::shared_ptr<const CCRepresentation> rep, LatticePoint bound);

  const CCRepresentation& rep() const { return *rep_; }
  const std::shared_ptr<const CCRepresentation>& rep_ptr() const { return rep_; }
  const LatticePoint& bound() const { return bound_; }
  const std::vector<LatticePoint>& blocks() const { return blocks_; }
  Index dim() const { return dim_; }
  bool contains(const LatticePoint& s) const { return s.nonnegative() && s.leq(bound_); }
  Index offset(const LatticePoint& s) const;
  Index block_dim(const LatticePoint& s) const;

  Vec inject(const LatticePoint& s, const Vec& local) const;
  Vec extract(const LatticePoint& s, const Vec& global) const;
  /// delta_s . (x (x) h) as a coordinate vector; for s = 0, x is an algebra element.
  Vec delta(const LatticePoint& s, const Vec& x, const Vec& h) const;

  /// Block-lowering contraction; the identity for s = 0 and zero when s is not <= L.
  const Mat& hat_T(const LatticePoint& s) const;
  /// Left action of the algebra, block diagonal.
  Mat a_action(const Vec& a) const;

 private:
  std::shared_ptr<const CCRepresentation> rep_;
  LatticePoint bound_;
  std::vector<LatticePoint> blocks_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
  Memo<LatticePoint, Mat> hats_;
};

TruncatedFock build_truncated_space(std::shared_ptr<const CCRepresentation> rep, const LatticePoint& bound);

double check_hat_semigroup(const TruncatedFock& space, const LatticePoint& s, const LatticePoint& t);
/// Maximum of check_hat_semigroup over all s, t >= 0 with s + t <= 2L.
double hat_semigroup_residual(const TruncatedFock& space);

/// |T^_s delta_s (x (x) h) - delta_0 T_s(x) h|.
double check_technology(const TruncatedFock& space, const LatticePoint& s, const Vec& x, const Vec& h);
/// Maximum over 0 < s <= L and basis vectors x, h.
double technology_residual(const TruncatedFock& space);

/// Maximum of |T^_s| - 1 over s <= L (negative when strictly contractive).
double hat_contraction_excess(const TruncatedFock& space);
/// Maximum commutator |[a_action(f_p), T^_s]| over s <= L and algebra basis elements.
double a_action_commutator(const TruncatedFock& space);
/// Multiplicativity and adjoint defects of a_action on basis elements.
double a_action_star_defect(const TruncatedFock& space);

/// Minimum eigenvalue of sum_{u in v} (-1)^|u| T^_{s[u]}^* T^_{s[u]}.
double brehmer_check_hat(const TruncatedFock& space, unsigned v, const LatticePoint& s);

/// |T^_k^* T^_j - T^_j T^_k^*| for the points s_j e_j and s_k e_k.
double verify_hat_doubly_commuting(const TruncatedFock& space, int j, int k, int s_j, int s_k);
/// Maximum over pairs j < k and 1 <= s_j, s_k <= L.
double hat_doubly_commuting_residual(const TruncatedFock& space);

}  // namespace dilation
