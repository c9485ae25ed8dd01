#include "dilation/lab/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dilation/linalg.hpp"

namespace dilation::lab {

namespace {

using Rng = std::mt19937_64;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::invalid_argument, what); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Mat gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = Complex(re, im);
    }
  return m;
}

Mat random_unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(rng, n, n));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

/// Uniform in the disc of radius `radius`.
Complex disc(Rng& rng, double radius) {
  const double rho = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  const double theta = uniform(rng, 0.0, 2.0 * M_PI);
  return std::polar(rho, theta);
}

Instance scalar_shell(int k, int d) {
  Instance inst;
  inst.algebra = CStarAlgebra({1});
  inst.k = k;
  inst.generators.assign(static_cast<std::size_t>(k), scalar_correspondence(1));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) inst.flips[{i, j}] = Mat::Identity(1, 1);
  inst.sigma = AlgebraRepresentation{d, {Mat::Identity(d, d)}};
  return inst;
}

int dim_or(const FamilyRequest& r, std::size_t i, int fallback) {
  return r.dims.size() > i ? r.dims[i] : fallback;
}

void only_d(const FamilyRequest& r) {
  if (r.dims.size() > 1) bad("family " + r.family + " takes --dims d only");
}

Instance scalar_commuting(const FamilyRequest& r, Rng& rng) {
  only_d(r);
  const int d = dim_or(r, 0, 2);
  Instance inst = scalar_shell(r.k, d);
  if (r.k == 1) {
    Mat t = gaussian(rng, d, d);
    inst.T.push_back({t * (uniform(rng, 0.3, 0.98) / linalg::op_norm(t))});
    return inst;
  }
  // normal commuting tuples doubly commute
  const Mat u = random_unitary(rng, d);
  for (int i = 0; i < r.k; ++i) {
    Vec diag(d);
    for (int a = 0; a < d; ++a) diag(a) = disc(rng, 0.98);
    inst.T.push_back({Mat(u * diag.asDiagonal() * u.adjoint())});
  }
  return inst;
}

/// A = C, E_i = C^{m_i}, diagonal row contractions, swap flips.
Instance diagonal_doubly_commuting(const FamilyRequest& r, Rng& rng) {
  if (r.dims.size() > 1 && static_cast<int>(r.dims.size()) != r.k + 1) bad("--dims must be d or d,m_1,...,m_k");
  const int d = dim_or(r, 0, 2);
  Instance inst;
  inst.algebra = CStarAlgebra({1});
  inst.k = r.k;
  std::vector<int> m;
  for (int i = 0; i < r.k; ++i) m.push_back(dim_or(r, static_cast<std::size_t>(i + 1), i == 0 ? 2 : 1));
  for (int i = 0; i < r.k; ++i) inst.generators.push_back(scalar_correspondence(m[static_cast<std::size_t>(i)]));
  for (int i = 0; i < r.k; ++i)
    for (int j = i + 1; j < r.k; ++j) {
      const int mi = m[static_cast<std::size_t>(i)];
      const int mj = m[static_cast<std::size_t>(j)];
      Mat swap = Mat::Zero(mi * mj, mi * mj);
      for (int a = 0; a < mi; ++a)
        for (int b = 0; b < mj; ++b) swap(b * mi + a, a * mj + b) = 1.0;
      inst.flips[{i, j}] = swap;
    }
  inst.sigma = AlgebraRepresentation{d, {Mat::Identity(d, d)}};
  for (int i = 0; i < r.k; ++i) {
    const int mi = m[static_cast<std::size_t>(i)];
    std::vector<Mat> maps(static_cast<std::size_t>(mi), Mat::Zero(d, d));
    for (int a = 0; a < d; ++a) {
      std::vector<Complex> row;
      double norm2 = 0.0;
      for (int b = 0; b < mi; ++b) {
        row.push_back(disc(rng, 1.0));
        norm2 += std::norm(row.back());
      }
      const double scale = uniform(rng, 0.2, 0.98) / std::sqrt(std::max(norm2, 1e-300));
      for (int b = 0; b < mi; ++b) maps[static_cast<std::size_t>(b)](a, a) = scale * row[static_cast<std::size_t>(b)];
    }
    inst.T.push_back(std::move(maps));
  }
  return inst;
}

/// A = M_n acting on itself, H = C^n, T_i(x) = lambda_i x with |lambda_i| = 1.
Instance multiplication_isometric(const FamilyRequest& r, Rng& rng) {
  only_d(r);
  const int n = dim_or(r, 0, 2);
  Instance inst;
  inst.algebra = CStarAlgebra({n});
  inst.k = r.k;
  const Correspondence e = algebra_correspondence(inst.algebra);
  inst.generators.assign(static_cast<std::size_t>(r.k), e);
  // x (x) y -> xy (x) 1 on matrix units
  const int n2 = n * n;
  Mat flip = Mat::Zero(n2 * n2, n2 * n2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int q = 0; q < n; ++q) flip((a * n + d) * n2 + q * n + q, (a * n + b) * n2 + b * n + d) += 1.0;
  for (int i = 0; i < r.k; ++i)
    for (int j = i + 1; j < r.k; ++j) inst.flips[{i, j}] = flip;
  inst.sigma = identity_representation(inst.algebra);
  for (int i = 0; i < r.k; ++i) {
    const Complex lambda = std::polar(1.0, uniform(rng, 0.0, 2.0 * M_PI));
    std::vector<Mat> maps;
    for (const auto& img : inst.sigma.images) maps.push_back(lambda * img);
    inst.T.push_back(std::move(maps));
  }
  return inst;
}

/// T_1 a scaled random matrix, later T_i polynomials in T_1; commuting, nothing more.
Instance random_contractive(const FamilyRequest& r, Rng& rng) {
  only_d(r);
  const int d = dim_or(r, 0, 2);
  Instance inst = scalar_shell(r.k, d);
  Mat t1 = gaussian(rng, d, d);
  t1 *= uniform(rng, 0.3, 1.0) / linalg::op_norm(t1);
  inst.T.push_back({t1});
  for (int i = 1; i < r.k; ++i) {
    Mat p = disc(rng, 1.0) * Mat::Identity(d, d);
    Mat power = Mat::Identity(d, d);
    for (int deg = 1; deg <= 2; ++deg) {
      power = power * t1;
      p += disc(rng, 1.0) * power;
    }
    p *= uniform(rng, 0.3, 1.0) / std::max(linalg::op_norm(p), 1e-300);
    inst.T.push_back({p});
  }
  return inst;
}

Instance nilpotent_counterexample(const FamilyRequest& r) {
  if (r.k != 2) bad("nilpotent-counterexample needs k = 2");
  if (!r.dims.empty() && (r.dims.size() > 1 || r.dims[0] != 2)) bad("nilpotent-counterexample needs d = 2");
  Instance inst = scalar_shell(2, 2);
  Mat e12 = Mat::Zero(2, 2);
  e12(0, 1) = 1.0;
  inst.T = {{e12}, {e12}};
  return inst;
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"scalar-commuting",        "scalar-doubly-commuting", "diagonal-doubly-commuting",
                                              "multiplication-isometric", "random-contractive",      "nilpotent-counterexample"};
  return names;
}

Instance generate_instance(const FamilyRequest& r) {
  if (r.k < 1) bad("k must be positive");
  for (int v : r.dims)
    if (v < 1) bad("dimensions must be positive");
  Rng rng(r.seed);
  if (r.family == "scalar-commuting" || r.family == "scalar-doubly-commuting") return scalar_commuting(r, rng);
  if (r.family == "diagonal-doubly-commuting") return diagonal_doubly_commuting(r, rng);
  if (r.family == "multiplication-isometric") return multiplication_isometric(r, rng);
  if (r.family == "random-contractive") return random_contractive(r, rng);
  if (r.family == "nilpotent-counterexample") return nilpotent_counterexample(r);
  bad("unknown family \"" + r.family + "\"");
}

}  // namespace dilation::lab
