#pragma once

// Hand-rolled generators and small builders shared by the test binaries.

#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "dilation/dilation.hpp"
#include "dilation/linalg.hpp"

namespace testing_support {

using namespace dilation;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  Complex gaussian() {
    std::normal_distribution<double> n;
    const double re = n(rng);
    return {re, n(rng)};
  }
  Complex phase() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }
  Mat matrix(Index r, Index c) {
    Mat m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = gaussian();
    return m;
  }
  Vec vector(Index n) { return matrix(n, 1).col(0); }
  /// Random matrix rescaled to the given operator norm.
  Mat contraction(Index d, double norm) {
    Mat m = matrix(d, d);
    return m * (norm / linalg::op_norm(m));
  }
  Mat unitary(Index n) {
    Eigen::HouseholderQR<Mat> qr(matrix(n, n));
    return qr.householderQ();
  }
};

inline Mat eye(Index n) { return Mat::Identity(n, n); }

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// A = C, E_i = C, flips 1.
inline std::shared_ptr<const ProductSystem> scalar_system(int k) {
  FlipMap f;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) f[{i, j}] = Mat::Identity(1, 1);
  return make_product_system(CStarAlgebra({1}), std::vector<Correspondence>(static_cast<std::size_t>(k), scalar_correspondence(1)), f);
}

inline std::shared_ptr<const CCRepresentation> scalar_rep(const std::vector<Mat>& ts) {
  const int d = static_cast<int>(ts.front().rows());
  std::vector<std::vector<Mat>> maps;
  for (const auto& t : ts) maps.push_back({t});
  return std::make_shared<const CCRepresentation>(scalar_system(static_cast<int>(ts.size())),
                                                  AlgebraRepresentation{d, {eye(d)}}, maps);
}

/// Swap e_a (x) e_b -> e_b (x) e_a twisted by unimodular phases; coherent for any phases.
inline Mat twisted_swap(int mi, int mj, Gen* gen) {
  Mat s = Mat::Zero(mi * mj, mi * mj);
  for (int a = 0; a < mi; ++a)
    for (int b = 0; b < mj; ++b) s(b * mi + a, a * mj + b) = gen ? gen->phase() : Complex(1.0);
  return s;
}

/// A = C, E_i = C^{m_i}, plain swaps, diagonal row contractions on C^d. Twisted
/// swaps would break the commutation relation for diagonal operators.
inline std::shared_ptr<const CCRepresentation> diagonal_rep(Gen& g, int d, const std::vector<int>& m) {
  const int k = static_cast<int>(m.size());
  std::vector<Correspondence> gens;
  for (int mi : m) gens.push_back(scalar_correspondence(mi));
  FlipMap f;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) f[{i, j}] = twisted_swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)], nullptr);
  auto x = make_product_system(CStarAlgebra({1}), gens, f);
  std::vector<std::vector<Mat>> maps;
  for (int i = 0; i < k; ++i) {
    const int mi = m[static_cast<std::size_t>(i)];
    std::vector<Mat> row(static_cast<std::size_t>(mi), Mat::Zero(d, d));
    for (int a = 0; a < d; ++a) {
      Vec v = g.vector(mi);
      v *= g.uniform(0.1, 0.95) / v.norm();
      for (int b = 0; b < mi; ++b) row[static_cast<std::size_t>(b)](a, a) = v(b);
    }
    maps.push_back(std::move(row));
  }
  return std::make_shared<const CCRepresentation>(x, AlgebraRepresentation{d, {eye(d)}}, maps);
}

/// The flip of A (x) A -> A (x) A for A = M_n acting on itself: x (x) y -> xy (x) 1.
inline Mat matrix_unit_flip(int n) {
  const int n2 = n * n;
  Mat f = Mat::Zero(n2 * n2, n2 * n2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int q = 0; q < n; ++q) f((a * n + d) * n2 + q * n + q, (a * n + b) * n2 + b * n + d) += 1.0;
  return f;
}

/// A = M_n, E_i = A, sigma = id on C^n, T_i(x) = lambda_i x.
inline std::shared_ptr<const CCRepresentation> multiplication_rep(int n, const std::vector<Complex>& lambdas) {
  const CStarAlgebra a({n});
  const int k = static_cast<int>(lambdas.size());
  FlipMap f;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) f[{i, j}] = matrix_unit_flip(n);
  auto x = make_product_system(a, std::vector<Correspondence>(static_cast<std::size_t>(k), algebra_correspondence(a)), f);
  const AlgebraRepresentation id = identity_representation(a);
  std::vector<std::vector<Mat>> maps;
  for (const Complex& l : lambdas) {
    std::vector<Mat> row;
    for (const auto& img : id.images) row.push_back(l * img);
    maps.push_back(std::move(row));
  }
  return std::make_shared<const CCRepresentation>(x, id, maps);
}

/// Commuting normal tuple U diag U^* on C^d.
inline std::vector<Mat> normal_tuple(Gen& g, int k, int d) {
  const Mat u = g.unitary(d);
  std::vector<Mat> ts;
  for (int i = 0; i < k; ++i) {
    Vec diag(d);
    for (int a = 0; a < d; ++a) diag(a) = std::polar(g.uniform(0.0, 0.95), g.uniform(0.0, 2.0 * M_PI));
    ts.push_back(u * diag.asDiagonal() * u.adjoint());
  }
  return ts;
}

inline Mat power(const Mat& t, int n) {
  Mat out = eye(t.rows());
  for (int i = 0; i < n; ++i) out = out * t;
  return out;
}

inline std::shared_ptr<const TruncatedFock> space_of(std::shared_ptr<const CCRepresentation> rep, const LatticePoint& L) {
  return std::make_shared<const TruncatedFock>(std::move(rep), L);
}

inline std::shared_ptr<const DilationBundle> bundle_of(std::shared_ptr<const CCRepresentation> rep, const LatticePoint& L,
                                                       const LatticePoint& M, DilationOptions opts = {}) {
  return kolmogorov(window_gram(space_of(std::move(rep), L), M), opts);
}

}  // namespace testing_support
