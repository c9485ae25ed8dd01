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

/// Zero outside the block pattern t -> t - s.
double off_pattern(const TruncatedFock& sp, const LatticePoint& s) {
  const Mat& h = sp.hat_T(s);
  double worst = 0.0;
  for (const auto& t : sp.blocks())
    for (const auto& r : sp.blocks()) {
      if (s.leq(t) && r == t - s) continue;
      const Mat blk = h.block(sp.offset(r), sp.offset(t), sp.block_dim(r), sp.block_dim(t));
      worst = std::max(worst, max_abs(blk));
    }
  return worst;
}

}  // namespace

TEST_CASE("truncated space dimensions") {
  const auto scalar = scalar_rep({Mat::Constant(1, 1, 0.5)});
  CHECK(TruncatedFock(scalar, LatticePoint{2}).dim() == 3);
  CHECK(TruncatedFock(scalar, LatticePoint{0}).dim() == 1);
  const auto m2 = multiplication_rep(2, {1.0});
  const TruncatedFock sp(m2, LatticePoint{2});
  CHECK(sp.dim() == 6);
  for (const auto& s : sp.blocks()) CHECK(sp.block_dim(s) == 2);
  Index expected = 0;
  for (const auto& s : sp.blocks()) {
    CHECK(sp.offset(s) == expected);
    expected += sp.block_dim(s);
  }
  CHECK(expected == sp.dim());
}

TEST_CASE("lowering operator of T = 0.5") {
  const auto rep = scalar_rep({Mat::Constant(1, 1, 0.5)});
  const TruncatedFock sp(rep, LatticePoint{2});
  CHECK(max_abs(sp.hat_T(LatticePoint{0}) - eye(3)) == 0.0);
  Mat expected = Mat::Zero(3, 3);
  expected(0, 1) = 0.5;
  expected(1, 2) = 0.5;
  const Mat& t1 = sp.hat_T(LatticePoint{1});
  // block signs depend on the localization basis; moduli are basis free
  CHECK(max_abs(Mat(t1.cwiseAbs().cast<Complex>()) - expected) <= 1e-12);
  CHECK(linalg::op_norm(t1) == doctest::Approx(0.5));
  CHECK(max_abs(sp.hat_T(LatticePoint{3})) == 0.0);
  const TruncatedFock sp3(rep, LatticePoint{3});
  CHECK(check_hat_semigroup(sp3, LatticePoint{1}, LatticePoint{1}) <= 1e-15);
  CHECK(check_hat_semigroup(sp3, LatticePoint{0}, LatticePoint{2}) == 0.0);
  CHECK(check_technology(sp, LatticePoint{1}, Vec::Ones(1), Vec::Ones(1)) <= 1e-15);
  CHECK(brehmer_check_hat(sp, 1u, LatticePoint{1}) == doctest::Approx(0.75));
  const auto ev = linalg::eigenvalues(eye(3) - sp.hat_T(LatticePoint{1}).adjoint() * sp.hat_T(LatticePoint{1}));
  for (Index i = 0; i < ev.size(); ++i) CHECK((std::abs(ev(i) - 1.0) < 1e-12 || std::abs(ev(i) - 0.75) < 1e-12));
}

TEST_CASE("empty Brehmer subset gives the identity") {
  const auto rep = scalar_rep({Mat::Constant(1, 1, 0.5), Mat::Constant(1, 1, 0.3)});
  const TruncatedFock sp(rep, LatticePoint{1, 1});
  CHECK(brehmer_check_hat(sp, 0u, LatticePoint{1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("nilpotent pair lifted") {
  const auto rep = scalar_rep({e12(), e12()});
  const TruncatedFock sp(rep, LatticePoint{1, 1});
  CHECK(brehmer_check_hat(sp, 3u, LatticePoint{1, 1}) < 0.0);
  CHECK(verify_hat_doubly_commuting(sp, 0, 1, 1, 1) > 0.1);
}

TEST_CASE("scalar pair 0.6, 0.8 hat operators doubly commute") {
  const auto rep = scalar_rep({Mat::Constant(1, 1, 0.6), Mat::Constant(1, 1, 0.8)});
  const TruncatedFock sp(rep, LatticePoint{3, 3});
  CHECK(verify_hat_doubly_commuting(sp, 0, 1, 1, 1) <= 1e-15);
  CHECK(verify_hat_doubly_commuting(sp, 0, 1, 4, 1) == 0.0);
}

TEST_CASE("M2 multiplication technology residual") {
  const auto rep = multiplication_rep(2, {1.0, Complex(0, 1)});
  const auto sp = space_of(rep, LatticePoint{2, 2});
  CHECK(technology_residual(*sp) <= 1e-12);
  CHECK(a_action_commutator(*sp) <= 1e-10);
  CHECK(a_action_star_defect(*sp) <= 1e-10);
}

TEST_CASE("algebra action basics") {
  const auto rep = scalar_rep({Mat::Constant(1, 1, 0.5), Mat::Constant(1, 1, 0.3)});
  const TruncatedFock sp(rep, LatticePoint{2, 1});
  CHECK(max_abs(sp.a_action(Vec::Ones(1)) - eye(sp.dim())) <= 1e-14);
  Vec lambda(1);
  lambda << Complex(2, -1);
  CHECK(max_abs(sp.a_action(lambda) - lambda(0) * eye(sp.dim())) <= 1e-14);
}

TEST_CASE("property: hat operators on random instances") {
  Gen g(40);
  for (int trial = 0; trial < 6; ++trial) {
    std::shared_ptr<const CCRepresentation> rep;
    switch (trial % 3) {
      case 0: rep = diagonal_rep(g, 2, {2, 1}); break;
      case 1: rep = scalar_rep(normal_tuple(g, 2, 2)); break;
      default: rep = multiplication_rep(2, {g.phase(), g.uniform(0.2, 1.0) * g.phase()}); break;
    }
    const LatticePoint L{2, 2};
    const auto sp = space_of(rep, L);
    CHECK(hat_semigroup_residual(*sp) <= 1e-10);
    CHECK(check_hat_semigroup(*sp, LatticePoint{1, 0}, LatticePoint{0, 1}) <= 1e-10);
    CHECK(hat_contraction_excess(*sp) <= 1e-10);
    CHECK(technology_residual(*sp) <= 1e-10);
    CHECK(a_action_commutator(*sp) <= 1e-10);
    CHECK(a_action_star_defect(*sp) <= 1e-10);
    for (const auto& s : box(LatticePoint{3, 3})) CHECK(off_pattern(*sp, s) == 0.0);
    for (const auto& s : box(L)) {
      double bound = 0.0;
      for (const auto& t : sp->blocks())
        if (s.leq(t)) bound = std::max(bound, linalg::op_norm(rep->lowering(t, s)));
      CHECK(linalg::op_norm(sp->hat_T(s)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("property: NS on the box carries over to the hat operators") {
  Gen g(41);
  int checked = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const int d = g.integer(1, 3);
    const Mat t1 = g.contraction(d, g.uniform(0.2, 1.0));
    Mat t2 = g.uniform(-1, 1) * eye(d) + g.uniform(-1, 1) * t1;
    t2 *= g.uniform(0.2, 1.0) / std::max(linalg::op_norm(t2), 1e-12);
    const auto rep = scalar_rep({t1, t2});
    const LatticePoint L{2, 2};
    const auto sp = space_of(rep, L);
    if (brehmer_minimum(*rep, L).minimum < -1e-10) continue;
    ++checked;
    for (unsigned v = 1; v < 4; ++v)
      for (const auto& s : box(L)) CHECK(brehmer_check_hat(*sp, v, s) >= -1e-9);
  }
  CHECK(checked > 0);
}
