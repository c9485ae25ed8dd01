#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace dilation;
using namespace testing_support;

namespace {

Mat e12() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Mat scalar(double v) { return Mat::Constant(1, 1, v); }

/// [T_{(s-t)_-}^* T_{(s-t)_+}] over box(M) for commuting matrices, T_s = prod T_i^{s_i}.
Mat classical_kernel(const std::vector<Mat>& ts, const LatticePoint& M) {
  const auto pts = box(M);
  const Index d = ts.front().rows();
  auto tpow = [&](const LatticePoint& s) {
    Mat out = eye(d);
    for (int i = 0; i < s.k(); ++i) out = out * power(ts[static_cast<std::size_t>(i)], s[i]);
    return out;
  };
  Mat g(static_cast<Index>(pts.size()) * d, static_cast<Index>(pts.size()) * d);
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const LatticePoint diff = pts[b] - pts[a];
      g.block(static_cast<Index>(a) * d, static_cast<Index>(b) * d, d, d) = tpow(diff.negative()).adjoint() * tpow(diff.positive());
    }
  return g;
}

const KernelWindow::Component& level_zero(const KernelWindow& w) {
  return w.components()[static_cast<std::size_t>(w.component_index(LatticePoint(w.bound().k())))];
}

/// <V^n h, V^m g> for the minimal isometric dilation in Schaffer form
/// V(h, h_1, h_2, ...) = (T h, D h, h_1, ...), D = (I - T^* T)^{1/2}.
Complex schaffer(const Mat& t, int n, int m, const Vec& h, const Vec& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(eye(t.rows()) - t.adjoint() * t);
  const Mat dmat = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
                   es.eigenvectors().adjoint();
  Complex out = (power(t, n) * h).dot(power(t, m) * g);
  for (int j = 1; j <= std::min(n, m); ++j) out += (dmat * power(t, n - j) * h).dot(dmat * power(t, m - j) * g);
  return out;
}

}  // namespace

TEST_CASE("kernel of T = 0.5") {
  const auto rep = scalar_rep({scalar(0.5)});
  const auto sp = space_of(rep, LatticePoint{2});
  const KernelWindow w(sp, LatticePoint{2});
  CHECK(max_abs(w.kernel(LatticePoint{0}, LatticePoint{1}) - sp->hat_T(LatticePoint{1})) == 0.0);
  for (const auto& s : box(LatticePoint{2})) CHECK(max_abs(w.kernel(s, s) - eye(sp->dim())) == 0.0);
}

TEST_CASE("property: window Gram is Toeplitz, Hermitian and splits by level") {
  Gen g(50);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rep = trial % 2 ? diagonal_rep(g, 2, {2, 1}) : scalar_rep(normal_tuple(g, 2, 2));
    const auto sp = space_of(rep, LatticePoint{2, 1});
    const KernelWindow w(sp, LatticePoint{2, 2});
    const Mat full = w.full_gram();
    CHECK(linalg::hermitian_defect(full) <= 1e-12);
    const Index N = sp->dim();
    const auto& pts = w.points();
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = 0; b < pts.size(); ++b) {
        const Mat blk = full.block(static_cast<Index>(a) * N, static_cast<Index>(b) * N, N, N);
        CHECK(max_abs(blk - w.kernel(pts[a], pts[b])) <= 1e-14);
        const LatticePoint u{g.integer(0, 2), g.integer(0, 2)};
        CHECK(max_abs(w.kernel(pts[a] + u, pts[b] + u) - w.kernel(pts[a], pts[b])) == 0.0);
        for (const auto& x : sp->blocks())
          for (const auto& y : sp->blocks()) {
            if (x - pts[a] == y - pts[b]) continue;
            CHECK(max_abs(blk.block(sp->offset(x), sp->offset(y), sp->block_dim(x), sp->block_dim(y))) == 0.0);
          }
      }
    const KernelWindow serial(sp, LatticePoint{2, 2}, 1);
    const KernelWindow threaded(sp, LatticePoint{2, 2}, 3);
    CHECK((serial.full_gram().array() == threaded.full_gram().array()).all());
    CHECK(serial.psd_margin() == threaded.psd_margin());
  }
}

TEST_CASE("AR(1) kernel: level-zero spectrum matches the 3x3 oracle") {
  const auto rep = scalar_rep({scalar(0.5)});
  const auto w = window_gram(space_of(rep, LatticePoint{2}), LatticePoint{2});
  const RealVec oracle = linalg::eigenvalues(classical_kernel({scalar(0.5)}, LatticePoint{2}));
  const auto& c0 = level_zero(*w);
  REQUIRE(c0.eigenvalues.size() == 3);
  CHECK((c0.eigenvalues - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(w->psd_margin() > 0.0);

  const auto b = kolmogorov(w);
  CHECK(b->generated_rank() == 3);
  const Mat k0 = b->generator_block(LatticePoint{0});
  const Mat k1 = b->generator_block(LatticePoint{1});
  CHECK(std::abs((k0.adjoint() * k1)(0, 0) - 0.5) <= 1e-12);
}

TEST_CASE("nilpotent pair: the 8x8 level-zero kernel is not positive") {
  const auto rep = scalar_rep({e12(), e12()});
  const auto w = window_gram(space_of(rep, LatticePoint{1, 1}), LatticePoint{1, 1});
  const RealVec oracle = linalg::eigenvalues(classical_kernel({e12(), e12()}, LatticePoint{1, 1}));
  const auto& c0 = level_zero(*w);
  REQUIRE(c0.eigenvalues.size() == 8);
  CHECK((c0.eigenvalues - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(oracle(0) < 0.0);
  CHECK(w->psd_margin() < 0.0);
  try {
    kolmogorov(w);
    CHECK_MESSAGE(false, "expected not-positive-definite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_positive_definite);
  }
}

TEST_CASE("unit scalar: all-ones kernel") {
  const auto rep = scalar_rep({scalar(1.0)});
  const auto w = window_gram(space_of(rep, LatticePoint{2}), LatticePoint{2});
  const auto& c0 = level_zero(*w);
  CHECK(max_abs(c0.gram - Mat::Ones(3, 3)) <= 1e-14);
  CHECK(w->psd_margin() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const auto b = kolmogorov(w);
  CHECK(b->generated_rank() == 1);
  // one rank-one component per level b - s in {-2, ..., 2}
  CHECK(b->rank() == 5);
  for (const auto& s : b->generating_points()) CHECK(max_abs(b->generator_block(s) - b->generator_block(LatticePoint{0})) <= 1e-12);
  const auto r = verify_regular_dilation(*b, LatticePoint{1});
  for (const auto& e : r.entries) CHECK(e.value <= 1e-12);
}

TEST_CASE("hat_V on the AR(1) window") {
  const auto rep = scalar_rep({scalar(0.5)});
  const auto b = bundle_of(rep, LatticePoint{2}, LatticePoint{2});
  const auto& sp = b->space();
  const Mat k0 = b->kappa(LatticePoint{0});
  const Mat k1 = b->kappa(LatticePoint{1});
  const Vec d0 = k0.col(sp.offset(LatticePoint{0}));
  const Vec d1 = k0.col(sp.offset(LatticePoint{1}));
  const auto v1 = b->hat_V(LatticePoint{1});
  CHECK(max_abs(v1.op * k0 - k1) <= 1e-9);
  CHECK(std::abs(d0.dot(v1.op * d1) - 0.5) <= 1e-12);

  const auto v0 = b->hat_V(LatticePoint{0});
  CHECK(max_abs(v0.op - v0.domain) <= 1e-9);
  CHECK(max_abs(v0.domain - eye(b->rank())) <= 1e-9);
  CHECK_THROWS_AS(b->hat_V(LatticePoint{3}), Error);
}

TEST_CASE("property: hat_V partial isometries") {
  Gen g(51);
  for (int trial = 0; trial < 3; ++trial) {
    const auto rep = trial == 0 ? diagonal_rep(g, 1, {2, 1}) : scalar_rep(normal_tuple(g, 2, 2));
    const LatticePoint M{2, 2};
    const auto b = bundle_of(rep, LatticePoint{1, 1}, M);
    const Mat full = b->full_factor();
    CHECK(max_abs(full.adjoint() * full - b->window().full_gram()) <= 1e-9);
    for (const auto& t : box(M))
      for (const auto& s : box(M)) CHECK(max_abs(b->kappa(t).adjoint() * b->kappa(s) - b->window().kernel(t, s)) <= 1e-9);
    for (const auto& u : box(M)) {
      const auto v = b->hat_V(u);
      CHECK(max_abs(v.domain * (v.op.adjoint() * v.op - eye(b->rank())) * v.domain) <= 1e-9);
      for (const auto& s : box(M))
        if ((s + u).leq(M)) CHECK(max_abs(v.op * b->kappa(s) - b->kappa(s + u)) <= 1e-9);
      for (const auto& w : box(M))
        for (const auto& s : box(M))
          if ((s + u + w).leq(M)) {
            const Mat lhs = b->hat_V(u).op * b->hat_V(w).op * b->kappa(s);
            CHECK(max_abs(lhs - b->hat_V(u + w).op * b->kappa(s)) <= 1e-9);
          }
    }
  }
}

TEST_CASE("V0 basics") {
  const auto rep = scalar_rep({scalar(0.5), scalar(0.3)});
  const auto b = bundle_of(rep, LatticePoint{1, 1}, LatticePoint{1, 1});
  CHECK(max_abs(b->V0(Vec::Ones(1)) - eye(b->generated_rank())) <= 1e-12);
  Vec lambda(1);
  lambda << Complex(0.5, 2.0);
  CHECK(max_abs(b->V0(lambda) - lambda(0) * eye(b->generated_rank())) <= 1e-12);

  Gen g(52);
  const auto m2 = bundle_of(multiplication_rep(2, {g.phase(), 0.7 * g.phase()}), LatticePoint{2, 2}, LatticePoint{2, 2});
  const CStarAlgebra& a = m2->rep().system().algebra();
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = g.vector(a.dim());
    const Vec xs = adjoint(AlgebraElement(a, x)).coords();
    CHECK(max_abs(m2->V0(x).adjoint() - m2->V0(xs)) <= 1e-8);
  }
  CHECK(verify_V0_star_hom(*m2) <= 1e-8);
}

TEST_CASE("V1 of T = 0.5 compresses to T") {
  const auto rep = scalar_rep({scalar(0.5)});
  const auto b = bundle_of(rep, LatticePoint{3}, LatticePoint{3});
  const Mat g0 = b->embedding();
  const Mat v1 = b->Vs(LatticePoint{1}, Vec::Ones(1));
  CHECK(std::abs((g0.adjoint() * v1 * g0)(0, 0) - 0.5) <= 1e-12);
  // <P_H V_1 h, P_H V_1 g> = <T h, T g>
  const Mat compressed = g0.adjoint() * v1 * g0;
  CHECK(std::abs((compressed.adjoint() * compressed)(0, 0) - 0.25) <= 1e-12);
  const auto r = verify_regular_dilation(*b, LatticePoint{2});
  for (const auto& e : r.entries) CHECK(e.value <= e.tolerance);
}

TEST_CASE("isometric multiplication representation: V is isometric and multiplicative") {
  const auto b = bundle_of(multiplication_rep(2, {1.0, Complex(0, 1)}), LatticePoint{2, 2}, LatticePoint{2, 2});
  CHECK(verify_V_isometry(*b, LatticePoint{2, 2}) <= 1e-8);
  CHECK(verify_V_semigroup(*b, LatticePoint{2, 2}) <= 1e-8);
}

TEST_CASE("double commutation of V") {
  const auto pair = bundle_of(scalar_rep({scalar(0.6), scalar(0.8)}), LatticePoint{3, 3}, LatticePoint{3, 3});
  CHECK(doubly_commuting_V_residual(*pair, 1) <= 1e-6);

  Mat unitary(1, 1);
  unitary(0, 0) = std::polar(1.0, 0.7);
  const auto mixed = bundle_of(scalar_rep({unitary, scalar(0.45)}), LatticePoint{3, 3}, LatticePoint{3, 3});
  CHECK(doubly_commuting_V_residual(*mixed, 1) <= 1e-6);

  const auto zero = bundle_of(scalar_rep({scalar(0.0), scalar(0.5)}), LatticePoint{2, 2}, LatticePoint{2, 2});
  CHECK(doubly_commuting_V_residual(*zero, 1) <= 1e-12);
}

TEST_CASE("minimal dilations agree") {
  const auto rep = scalar_rep({scalar(0.5)});
  const auto w = window_gram(space_of(rep, LatticePoint{3}), LatticePoint{2});
  const auto eig = kolmogorov(w);
  CHECK(compare_minimal_dilations(*eig, *eig) <= 1e-12);
  DilationOptions chol;
  chol.method = Factorization::pivoted_cholesky;
  CHECK(compare_minimal_dilations(*eig, *kolmogorov(w, chol)) <= 1e-9);
  const auto wider = bundle_of(rep, LatticePoint{3}, LatticePoint{3});
  CHECK(compare_minimal_dilations(*eig, *wider) <= 1e-9);
}

TEST_CASE("property: Schaffer oracle for single contractions") {
  Gen g(53);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = g.integer(1, 3);
    const Mat t = g.contraction(d, g.uniform(0.2, 0.99));
    const auto b = bundle_of(scalar_rep({t}), LatticePoint{4}, LatticePoint{4});
    const Mat g0 = b->embedding();
    const Mat v = b->Vs(LatticePoint{1}, Vec::Ones(1));
    std::vector<Mat> powers{g0};
    for (int n = 1; n <= 4; ++n) powers.push_back(v * powers.back());
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m) {
        const Mat ip = powers[static_cast<std::size_t>(m)].adjoint() * powers[static_cast<std::size_t>(n)];
        for (int a = 0; a < d; ++a)
          for (int c = 0; c < d; ++c)
            CHECK(std::abs(ip(c, a) - schaffer(t, m, n, Vec::Unit(d, c), Vec::Unit(d, a))) <= 1e-9);
      }
  }
}

TEST_CASE("property: kolmogorov succeeds exactly when the margin allows it") {
  Gen g(54);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = g.integer(1, 2);
    const Mat t1 = g.contraction(d, g.uniform(0.3, 1.0));
    Mat t2 = g.uniform(-1, 1) * eye(d) + g.uniform(-1, 1) * t1;
    t2 *= g.uniform(0.3, 1.0) / std::max(linalg::op_norm(t2), 1e-12);
    const auto w = window_gram(space_of(scalar_rep({t1, t2}), LatticePoint{1, 1}), LatticePoint{1, 1});
    bool built = true;
    try {
      kolmogorov(w);
    } catch (const Error& e) {
      built = false;
      CHECK(e.kind() == ErrorKind::not_positive_definite);
    }
    CHECK(built == (w->psd_margin() >= -1e-8));
    // the level-zero spectrum is the classical kernel spectrum
    const RealVec oracle = linalg::eigenvalues(classical_kernel({t1, t2}, LatticePoint{1, 1}));
    CHECK((level_zero(*w).eigenvalues - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("property: growing the window keeps ranks and residuals") {
  Gen g(55);
  const auto rep = diagonal_rep(g, 1, {2, 1});
  Index last_rank = 0;
  Index last_q = 0;
  for (int m = 1; m <= 3; ++m) {
    const auto b = bundle_of(rep, LatticePoint{2, 2}, LatticePoint{m, m});
    CHECK(b->rank() >= last_rank);
    CHECK(b->generated_rank() >= last_q);
    last_rank = b->rank();
    last_q = b->generated_rank();
    const auto r = verify_regular_dilation(*b, LatticePoint{1, 1});
    for (const auto& e : r.entries) CHECK(e.value <= 1e-10);
    CHECK(verify_V_isometry(*b, LatticePoint{1, 1}) <= 1e-10);
  }
}

TEST_CASE("property: regular dilation of doubly commuting instances") {
  Gen g(56);
  for (int trial = 0; trial < 4; ++trial) {
    std::shared_ptr<const CCRepresentation> rep;
    switch (trial % 3) {
      case 0: rep = diagonal_rep(g, 2, {2, 1}); break;
      case 1: rep = scalar_rep(normal_tuple(g, 2, 2)); break;
      default: rep = multiplication_rep(2, {g.phase(), 0.6 * g.phase()}); break;
    }
    const auto w = window_gram(space_of(rep, LatticePoint{2, 2}), LatticePoint{2, 2});
    const auto b = kolmogorov(w);
    const auto r = verify_regular_dilation(*b, LatticePoint{1, 1});
    for (const auto& e : r.entries) CHECK(e.value <= e.tolerance);
    CHECK(verify_V_isometry(*b, LatticePoint{1, 1}) <= 1e-8);
    CHECK(verify_V_semigroup(*b, LatticePoint{2, 2}) <= 1e-8);
    CHECK(verify_V0_star_hom(*b) <= 1e-8);
    CHECK(doubly_commuting_V_residual(*b, 1) <= 1e-6);
    DilationOptions chol;
    chol.method = Factorization::pivoted_cholesky;
    CHECK(compare_minimal_dilations(*b, *kolmogorov(w, chol)) <= 1e-9);
  }
}
