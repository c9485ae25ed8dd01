#include "dilation/algebra.hpp"

#include "dilation/linalg.hpp"

namespace dilation {

CStarAlgebra::CStarAlgebra(std::vector<int> block_sizes) : blocks_(std::move(block_sizes)) {
  if (blocks_.empty()) throw Error(ErrorKind::invalid_argument, "algebra needs at least one block");
  for (int n : blocks_) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "block sizes must be positive");
    coord_offsets_.push_back(dim_);
    rep_offsets_.push_back(rep_dim_);
    dim_ += n * n;
    rep_dim_ += n;
  }
}

CStarAlgebra make_algebra(std::vector<int> block_sizes) { return CStarAlgebra(std::move(block_sizes)); }

CStarAlgebra::Unit CStarAlgebra::unit(int p) const {
  if (p < 0 || p >= dim_) throw Error(ErrorKind::invalid_argument, "basis index out of range");
  int b = static_cast<int>(blocks_.size()) - 1;
  while (coord_offsets_[b] > p) --b;
  const int local = p - coord_offsets_[b];
  return {b, local / blocks_[b], local % blocks_[b]};
}

int CStarAlgebra::index(int block, int row, int col) const {
  return coord_offsets_[block] + row * blocks_[block] + col;
}

Mat CStarAlgebra::embed(const Vec& c) const {
  if (c.size() != dim_) throw Error(ErrorKind::invalid_argument, "coordinate length does not match algebra");
  Mat out = Mat::Zero(rep_dim_, rep_dim_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int n = blocks_[b];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(rep_offsets_[b] + i, rep_offsets_[b] + j) = c(coord_offsets_[b] + i * n + j);
  }
  return out;
}

Vec CStarAlgebra::coords(const Mat& m) const {
  Vec c(dim_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int n = blocks_[b];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(coord_offsets_[b] + i * n + j) = m(rep_offsets_[b] + i, rep_offsets_[b] + j);
  }
  return c;
}

Vec CStarAlgebra::unit_coords() const { return coords(Mat::Identity(rep_dim_, rep_dim_)); }

Vec CStarAlgebra::basis_product(int p, int q) const {
  Vec out = Vec::Zero(dim_);
  const Unit a = unit(p);
  const Unit b = unit(q);
  if (a.block == b.block && a.col == b.row) out(index(a.block, a.row, b.col)) = 1.0;
  return out;
}

int CStarAlgebra::adjoint_index(int p) const {
  const Unit u = unit(p);
  return index(u.block, u.col, u.row);
}

AlgebraElement::AlgebraElement(CStarAlgebra algebra, Vec coords)
    : algebra_(std::move(algebra)), coords_(std::move(coords)) {
  if (coords_.size() != algebra_.dim())
    throw Error(ErrorKind::invalid_argument, "coordinate length does not match algebra");
}

AlgebraElement AlgebraElement::zero(const CStarAlgebra& algebra) {
  return AlgebraElement(algebra, Vec::Zero(algebra.dim()));
}

AlgebraElement AlgebraElement::basis(const CStarAlgebra& algebra, int p) {
  Vec c = Vec::Zero(algebra.dim());
  c(p) = 1.0;
  return AlgebraElement(algebra, c);
}

Mat AlgebraElement::block(int b) const {
  const int n = algebra_.blocks()[b];
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = coords_(algebra_.index(b, i, j));
  return m;
}

namespace {
void require_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra() != b.algebra()) throw Error(ErrorKind::invalid_argument, "elements of different algebras");
}
}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  require_same(*this, other);
  return AlgebraElement(algebra_, coords_ + other.coords_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  require_same(*this, other);
  return AlgebraElement(algebra_, coords_ - other.coords_);
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const { return AlgebraElement(algebra_, coords_ * scalar); }

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b);
  const auto& alg = a.algebra();
  return AlgebraElement(alg, alg.coords(alg.embed(a.coords()) * alg.embed(b.coords())));
}

AlgebraElement adjoint(const AlgebraElement& a) {
  const auto& alg = a.algebra();
  return AlgebraElement(alg, alg.coords(alg.embed(a.coords()).adjoint()));
}

AlgebraElement unit(const CStarAlgebra& algebra) { return AlgebraElement(algebra, algebra.unit_coords()); }

Mat embed(const AlgebraElement& a) { return a.algebra().embed(a.coords()); }

double norm(const AlgebraElement& a) { return linalg::op_norm(embed(a)); }

bool is_positive(const AlgebraElement& a, double tol) {
  const Mat m = embed(a);
  if (linalg::hermitian_defect(m) > tol) return false;
  return linalg::min_eigenvalue(m) >= -tol;
}

Mat AlgebraRepresentation::operator()(const Vec& coords) const {
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t p = 0; p < images.size(); ++p)
    if (coords(static_cast<Index>(p)) != Complex(0)) out += coords(static_cast<Index>(p)) * images[p];
  return out;
}

AlgebraRepresentation identity_representation(const CStarAlgebra& algebra) {
  AlgebraRepresentation rep;
  rep.dim = algebra.rep_dim();
  for (int p = 0; p < algebra.dim(); ++p) rep.images.push_back(algebra.embed(AlgebraElement::basis(algebra, p).coords()));
  return rep;
}

}  // namespace dilation
