#pragma once

#include <vector>

#include "dilation/types.hpp"

namespace dilation {

/// Finite-dimensional C*-algebra as a direct sum of full matrix blocks
/// M_{n_1} + ... + M_{n_r}. The canonical basis is the list of matrix units,
/// block-major then row-major.
class CStarAlgebra {
 public:
  struct Unit {
    int block;
    int row;
    int col;
  };

  CStarAlgebra() : CStarAlgebra(std::vector<int>{1}) {}
  explicit CStarAlgebra(std::vector<int> block_sizes);

  const std::vector<int>& blocks() const { return blocks_; }
  /// Linear dimension sum n_i^2.
  int dim() const { return dim_; }
  /// Dimension n = sum n_i of the faithful block-diagonal representation.
  int rep_dim() const { return rep_dim_; }

  Unit unit(int p) const;
  int index(int block, int row, int col) const;
  int coord_offset(int block) const { return coord_offsets_[block]; }
  int rep_offset(int block) const { return rep_offsets_[block]; }

  /// Block-diagonal n x n image of a coordinate vector.
  Mat embed(const Vec& coords) const;
  /// Coordinates of the diagonal blocks of an n x n matrix (off-block entries ignored).
  Vec coords(const Mat& block_diagonal) const;
  Vec unit_coords() const;
  /// Coordinates of the product of basis elements f_p f_q.
  Vec basis_product(int p, int q) const;
  /// Index of f_p^* (matrix units are closed under the involution).
  int adjoint_index(int p) const;

  bool operator==(const CStarAlgebra& other) const { return blocks_ == other.blocks_; }
  bool operator!=(const CStarAlgebra& other) const { return !(*this == other); }

 private:
  std::vector<int> blocks_;
  std::vector<int> coord_offsets_;
  std::vector<int> rep_offsets_;
  int dim_ = 0;
  int rep_dim_ = 0;
};

CStarAlgebra make_algebra(std::vector<int> block_sizes);

class AlgebraElement {
 public:
  AlgebraElement(CStarAlgebra algebra, Vec coords);
  static AlgebraElement zero(const CStarAlgebra& algebra);
  static AlgebraElement basis(const CStarAlgebra& algebra, int p);

  const CStarAlgebra& algebra() const { return algebra_; }
  const Vec& coords() const { return coords_; }
  /// The n_b x n_b matrix of block b.
  Mat block(int b) const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex scalar) const;

 private:
  CStarAlgebra algebra_;
  Vec coords_;
};

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement adjoint(const AlgebraElement& a);
AlgebraElement unit(const CStarAlgebra& algebra);
Mat embed(const AlgebraElement& a);
/// C*-norm, i.e. the largest singular value over the blocks.
double norm(const AlgebraElement& a);
bool is_positive(const AlgebraElement& a, double tol = 1e-10);

/// A representation of the algebra on C^d, one d x d image per basis element.
struct AlgebraRepresentation {
  int dim = 0;
  std::vector<Mat> images;

  /// sigma(a) for a coordinate vector.
  Mat operator()(const Vec& coords) const;
  Mat operator()(const AlgebraElement& a) const { return (*this)(a.coords()); }
};

/// The faithful block-diagonal representation, unital by construction.
AlgebraRepresentation identity_representation(const CStarAlgebra& algebra);

}  // namespace dilation
