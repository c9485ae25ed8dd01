#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dilation/correspondence.hpp"
#include "dilation/lattice.hpp"

namespace dilation {

/// Flips keyed by 0-based generator pairs (i, j) with i < j. A flip maps the
/// raw tensor E_i (x) E_j (index a * m_j + b) to E_j (x) E_i.
using FlipMap = std::map<std::pair<int, int>, Mat>;

/// Product system over N^k presented by generators and flips. Fibers are the
/// normal-ordered reduced tensors E_1^{s_1} (x) ... (x) E_k^{s_k}.
class ProductSystem {
 public:
  ProductSystem(CStarAlgebra algebra, std::vector<Correspondence> generators, FlipMap flips, double tol = 1e-10);

  int k() const { return static_cast<int>(generators_.size()); }
  const CStarAlgebra& algebra() const { return algebra_; }
  double tolerance() const { return tol_; }

  /// Reduced generator and its coordinate maps from the raw generator basis.
  const Correspondence& generator(int i) const { return generators_[static_cast<std::size_t>(i)].space; }
  const Mat& generator_lift(int i) const { return generators_[static_cast<std::size_t>(i)].lift; }
  const Mat& generator_surjection(int i) const { return generators_[static_cast<std::size_t>(i)].surjection; }

  /// Raw map E_i (x) E_j -> E_j (x) E_i on reduced generator bases, i != j.
  /// For i > j this is a quotient inverse of the stored flip (j, i).
  const Mat& flip(int i, int j) const;

  const Correspondence& fiber(const LatticePoint& s) const;
  int fiber_dim(const LatticePoint& s) const { return fiber(s).dim; }
  /// For s with j = s.max_index() and s != e_j: maps between X(s) and the raw
  /// tensor X(s - e_j) (x) E_j.
  const Mat& fiber_surjection(const LatticePoint& s) const;
  const Mat& fiber_lift(const LatticePoint& s) const;

  /// Multiplication U_{s,t}: raw X(s) (x) X(t) -> X(s + t).
  const Mat& mult_iso(const LatticePoint& s, const LatticePoint& t) const;

  /// Construction residuals (flip isometry, intertwining, braid).
  const Report& report() const { return report_; }
  std::vector<std::string> warnings() const;

 private:
  struct FiberEntry {
    Correspondence space;
    Mat surjection;
    Mat lift;
  };
  const FiberEntry& fiber_entry(const LatticePoint& s) const;
  Mat compute_mult(const LatticePoint& s, const LatticePoint& t) const;
  void check_point(const LatticePoint& s) const;

  CStarAlgebra algebra_;
  std::vector<Reduced> generators_;
  std::map<std::pair<int, int>, Mat> flips_;
  double tol_;
  Report report_;

  mutable std::mutex mutex_;
  mutable std::map<LatticePoint, FiberEntry> fibers_;
  mutable std::map<std::pair<LatticePoint, LatticePoint>, Mat> mults_;
  mutable std::vector<std::string> warnings_;
};

std::shared_ptr<const ProductSystem> make_product_system(CStarAlgebra algebra, std::vector<Correspondence> generators,
                                                         FlipMap flips, double tol = 1e-10);

/// |U_{s+t,r}(U_{s,t} (x) I) - U_{s,t+r}(I (x) U_{t,r})| on quotient coordinates.
double check_associativity(const ProductSystem& x, const LatticePoint& s, const LatticePoint& t,
                           const LatticePoint& r);

/// Defect of U_{s,t} from being a unitary of quotient spaces.
double unitarity_defect(const ProductSystem& x, const LatticePoint& s, const LatticePoint& t);

}  // namespace dilation
