#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace dilation;
using namespace testing_support;

TEST_CASE("single generator needs no flips") {
  const CStarAlgebra a({2});
  const auto x = make_product_system(a, {algebra_correspondence(a)}, {});
  CHECK(x->report().passed());
  CHECK(x->fiber_dim(LatticePoint{3}) == 4);
  for (int s = 0; s <= 2; ++s)
    for (int t = 0; t <= 2; ++t)
      for (int r = 0; r <= 2; ++r) CHECK(check_associativity(*x, LatticePoint{s}, LatticePoint{t}, LatticePoint{r}) <= 1e-12);
}

TEST_CASE("iterated M2 fiber rank matches the raw trace Gram rank") {
  const CStarAlgebra a({2});
  const auto e = algebra_correspondence(a);
  const auto x = make_product_system(a, {e}, {});
  const Mat raw = raw_tensor(raw_tensor(e, e), e).trace_gram();
  Eigen::SelfAdjointEigenSolver<Mat> es(raw);
  int rank = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-10;
  CHECK(x->fiber_dim(LatticePoint{3}) == rank);
}

TEST_CASE("scalar system fibers") {
  const auto x = scalar_system(2);
  CHECK(x->report().passed());
  CHECK(x->fiber_dim(LatticePoint{1, 1}) == 1);
  CHECK(x->fiber_dim(LatticePoint{3, 2}) == 1);
  CHECK(x->fiber(LatticePoint{0, 0}).dim == 1);
  for (const auto& s : box(LatticePoint{2, 2}))
    for (const auto& t : box(LatticePoint{1, 1}))
      for (const auto& r : box(LatticePoint{1, 1})) CHECK(check_associativity(*x, s, t, r) == doctest::Approx(0.0));
}

TEST_CASE("unit fibers are the algebra and the generators") {
  const CStarAlgebra a({1, 2});
  const auto e = algebra_correspondence(a);
  const auto x = make_product_system(a, {e, e}, {{{0, 1}, Mat(Mat::Identity(25, 25))}});
  CHECK(x->fiber(LatticePoint{0, 0}).dim == a.dim());
  CHECK(x->fiber(LatticePoint{1, 0}).dim == e.dim);
  // with s = 0 or t = 0 multiplication is the left or right action
  const Vec c = Vec::LinSpaced(a.dim(), 1.0, 2.0);
  const Mat& left = x->mult_iso(LatticePoint{0, 0}, LatticePoint{1, 0});
  const Mat& right = x->mult_iso(LatticePoint{1, 0}, LatticePoint{0, 0});
  CHECK(left.rows() == e.dim);
  CHECK(right.rows() == e.dim);
  Mat expected_left(e.dim, a.dim() * e.dim);
  Mat expected_right(e.dim, e.dim * a.dim());
  for (int p = 0; p < a.dim(); ++p)
    for (int i = 0; i < e.dim; ++i) {
      expected_left.col(p * e.dim + i) = e.left_action[static_cast<std::size_t>(p)].col(i);
      expected_right.col(i * a.dim() + p) = e.right_action[static_cast<std::size_t>(p)].col(i);
    }
  CHECK(max_abs(left - expected_left) <= 1e-12);
  CHECK(max_abs(right - expected_right) <= 1e-12);
}

TEST_CASE("C^2 swap flip is valid and a non-unitary flip is rejected") {
  const auto e = scalar_correspondence(2);
  const auto x = make_product_system(CStarAlgebra({1}), {e, e}, {{{0, 1}, twisted_swap(2, 2, nullptr)}});
  CHECK(x->report().passed());
  Mat bad = twisted_swap(2, 2, nullptr);
  bad(0, 0) = 2.0;
  try {
    make_product_system(CStarAlgebra({1}), {e, e}, {{{0, 1}, bad}});
    CHECK_MESSAGE(false, "expected invalid-flip");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::invalid_flip);
  }
}

TEST_CASE("one flip realizes U_{(0,1),(1,0)}") {
  Gen g(8);
  const auto e = scalar_correspondence(2);
  const auto x = make_product_system(CStarAlgebra({1}), {e, e}, {{{0, 1}, twisted_swap(2, 2, &g)}});
  const Mat& u = x->mult_iso(LatticePoint{0, 1}, LatticePoint{1, 0});
  CHECK(max_abs(u * u.adjoint() - eye(4)) <= 1e-12);
  CHECK(unitarity_defect(*x, LatticePoint{0, 1}, LatticePoint{1, 0}) <= 1e-12);
}

TEST_CASE("property: twisted swaps are coherent for k = 3") {
  Gen g(31);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> m{g.integer(1, 2), g.integer(1, 2), g.integer(1, 2)};
    std::vector<Correspondence> gens;
    for (int mi : m) gens.push_back(scalar_correspondence(mi));
    FlipMap f;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) f[{i, j}] = twisted_swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)], &g);
    const auto x = make_product_system(CStarAlgebra({1}), gens, f);
    CHECK(x->report().passed());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          CHECK(check_associativity(*x, LatticePoint::unit(3, i), LatticePoint::unit(3, j), LatticePoint::unit(3, l)) <= 1e-10);
    for (const auto& s : box(LatticePoint{1, 1, 1}))
      for (const auto& t : box(LatticePoint{1, 1, 1})) {
        CHECK(unitarity_defect(*x, s, t) <= 1e-10);
        int expected = 1;
        for (int i = 0; i < 3; ++i)
          for (int p = 0; p < s[i] + t[i]; ++p) expected *= m[static_cast<std::size_t>(i)];
        CHECK(x->fiber_dim(s + t) == expected);
      }
  }
}

TEST_CASE("random unitary flips on three generators are incoherent") {
  Gen g(17);
  const auto e = scalar_correspondence(2);
  FlipMap f;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) f[{i, j}] = g.unitary(4);
  try {
    make_product_system(CStarAlgebra({1}), {e, e, e}, f);
    CHECK_MESSAGE(false, "expected incoherent-flips");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::incoherent_flips);
  }
  // k = 2 carries no braid constraint, so the same flip is valid
  const auto x = make_product_system(CStarAlgebra({1}), {e, e}, {{{0, 1}, f.at({0, 1})}});
  CHECK(x->report().passed());
  for (const auto& s : box(LatticePoint{2, 2}))
    for (const auto& t : box(LatticePoint{1, 1})) {
      CHECK(unitarity_defect(*x, s, t) <= 1e-10);
      for (const auto& r : box(LatticePoint{1, 1})) CHECK(check_associativity(*x, s, t, r) <= 1e-10);
    }
}

TEST_CASE("M2 multiplication system") {
  const CStarAlgebra a({2});
  const auto e = algebra_correspondence(a);
  const auto x = make_product_system(a, {e, e}, {{{0, 1}, matrix_unit_flip(2)}});
  CHECK(x->report().passed());
  for (const auto& s : box(LatticePoint{2, 1}))
    for (const auto& t : box(LatticePoint{1, 1})) {
      CHECK(x->fiber_dim(s + t) == 4);
      CHECK(unitarity_defect(*x, s, t) <= 1e-10);
      for (const auto& r : box(LatticePoint{1, 1})) CHECK(check_associativity(*x, s, t, r) <= 1e-10);
    }
}
