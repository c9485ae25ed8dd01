#pragma once

#include <string>
#include <vector>

#include "dilation/algebra.hpp"
#include "dilation/types.hpp"

namespace dilation {

/// Finite-dimensional Hilbert C*-correspondence over a block algebra, stored
/// on an abstract basis e_1..e_m. Inner products are conjugate-linear in the
/// first slot and linear in the second.
struct Correspondence {
  CStarAlgebra algebra;
  int dim = 0;
  /// gram[i * dim + j] holds the coordinates of <e_i, e_j>.
  std::vector<Vec> gram;
  /// One dim x dim matrix per algebra basis element; column i is e_i . f_p.
  std::vector<Mat> right_action;
  /// One dim x dim matrix per algebra basis element; column i is f_p . e_i.
  std::vector<Mat> left_action;

  const Vec& inner(int i, int j) const { return gram[static_cast<std::size_t>(i * dim + j)]; }
  /// The (dim*n) x (dim*n) matrix [embed <e_i, e_j>], n the faithful rep dimension.
  Mat embedded_gram() const;
  /// dim x dim matrix Gamma_ij = trace embed <e_i, e_j>.
  Mat trace_gram() const;
  Mat right(const Vec& a) const;
  Mat left(const Vec& a) const;
};

/// Throws invalid-argument on inconsistent sizes.
void check_shape(const Correspondence& e);

/// The algebra as a correspondence over itself: <a, b> = a* b, both actions by multiplication.
Correspondence algebra_correspondence(const CStarAlgebra& algebra);

/// A = C, E = C^m with the identity Gram.
Correspondence scalar_correspondence(int m);

Report validate_correspondence(const Correspondence& e, double tol = 1e-10);

/// Quotient by null vectors together with its coordinate maps.
struct Reduced {
  Correspondence space;
  /// new_dim x raw_dim; raw coordinates to quotient coordinates.
  Mat surjection;
  /// raw_dim x new_dim; quotient coordinates to a raw representative.
  Mat lift;
  std::vector<std::string> warnings;
};

Reduced reduce_null(const Correspondence& e, double tol = 1e-10);

/// Algebraic tensor product E (x) F before the null quotient. The raw index of
/// e_i (x) f_j is i * F.dim + j.
Correspondence raw_tensor(const Correspondence& e, const Correspondence& f);

Reduced interior_tensor(const Correspondence& e, const Correspondence& f, double tol = 1e-10);

/// Hilbert space E (x)_sigma C^d with quotient coordinates in C^rank.
struct LocalizedSpace {
  Index source_dim = 0;
  /// rank x source_dim, factor^H factor = localized Gram.
  Mat factor;
  /// source_dim x rank, factor * pinv = I.
  Mat pinv;
  double tolerance = 0.0;
  double min_eigenvalue = 0.0;
  int ambiguous = 0;

  Index rank() const { return factor.rows(); }
  Mat gram() const { return factor.adjoint() * factor; }
};

/// Localized Gram G[(i,k),(j,l)] = sigma(<e_i, e_j>)_{kl}; raw index i * d + k.
Mat localized_gram(const Correspondence& e, const AlgebraRepresentation& sigma);

LocalizedSpace localize(const Correspondence& e, const AlgebraRepresentation& sigma, double tol = 1e-10);

/// C^d with its standard inner product viewed as a localized space.
LocalizedSpace identity_space(Index d);

/// Quotient-coordinate matrix B with B F_source = F_target M. Throws
/// not-well-defined if M does not respect the null spaces within tol,
/// measured relative to max(1, |F_target M|).
Mat descend_map(const Mat& raw, const LocalizedSpace& source, const LocalizedSpace& target,
                double tol = 1e-8, double* residual = nullptr);

/// Operator norm of D from the semi-inner-product space with embedded Gram
/// `source` to the one with embedded Gram `target`, both over an algebra whose
/// faithful representation has dimension n. Vectors null for the source but
/// not for the target count at unit weight.
double module_norm(const Mat& d, const Mat& source, const Mat& target, int n);

}  // namespace dilation
