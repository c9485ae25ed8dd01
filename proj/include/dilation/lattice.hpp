#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <string>
#include <vector>

#include "dilation/types.hpp"

namespace dilation {

/// Point of Z^k; the semigroup N^k is the nonnegative orthant.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(int k) : c_(static_cast<std::size_t>(k), 0) {}
  LatticePoint(std::initializer_list<int> coords) : c_(coords) {}
  explicit LatticePoint(std::vector<int> coords) : c_(std::move(coords)) {}

  static LatticePoint unit(int k, int i) {
    LatticePoint e(k);
    e[i] = 1;
    return e;
  }
  static LatticePoint constant(int k, int v) { return LatticePoint(std::vector<int>(static_cast<std::size_t>(k), v)); }

  int k() const { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& coords() const { return c_; }

  int degree() const { return std::accumulate(c_.begin(), c_.end(), 0); }
  bool is_zero() const { return std::all_of(c_.begin(), c_.end(), [](int v) { return v == 0; }); }
  bool nonnegative() const { return std::all_of(c_.begin(), c_.end(), [](int v) { return v >= 0; }); }
  /// Largest index with a nonzero coordinate, -1 for the origin.
  int max_index() const {
    for (int i = k() - 1; i >= 0; --i)
      if (c_[static_cast<std::size_t>(i)] != 0) return i;
    return -1;
  }

  LatticePoint operator+(const LatticePoint& o) const { return zip(o, [](int a, int b) { return a + b; }); }
  LatticePoint operator-(const LatticePoint& o) const { return zip(o, [](int a, int b) { return a - b; }); }
  LatticePoint positive() const { return map([](int a) { return std::max(a, 0); }); }
  /// s_- = s_+ - s.
  LatticePoint negative() const { return map([](int a) { return std::max(-a, 0); }); }
  LatticePoint min(const LatticePoint& o) const { return zip(o, [](int a, int b) { return std::min(a, b); }); }
  LatticePoint max(const LatticePoint& o) const { return zip(o, [](int a, int b) { return std::max(a, b); }); }
  /// e[u] . s for the subset u encoded as a bitmask.
  LatticePoint restrict(unsigned mask) const {
    LatticePoint out(k());
    for (int i = 0; i < k(); ++i)
      if (mask & (1u << i)) out[i] = c_[static_cast<std::size_t>(i)];
    return out;
  }

  /// Partial order of Z^k.
  bool leq(const LatticePoint& o) const {
    for (int i = 0; i < k(); ++i)
      if (c_[static_cast<std::size_t>(i)] > o[i]) return false;
    return true;
  }

  bool operator==(const LatticePoint& o) const = default;
  /// Total order used for map keys and enumeration: degree, then lexicographic.
  bool operator<(const LatticePoint& o) const {
    const int a = degree();
    const int b = o.degree();
    if (a != b) return a < b;
    return c_ < o.c_;
  }

  std::string str() const {
    std::string out = "(";
    for (int i = 0; i < k(); ++i) out += (i ? "," : "") + std::to_string(c_[static_cast<std::size_t>(i)]);
    return out + ")";
  }

 private:
  template <class F>
  LatticePoint zip(const LatticePoint& o, F f) const {
    if (o.k() != k()) throw Error(ErrorKind::invalid_argument, "lattice points of different rank");
    LatticePoint out(k());
    for (int i = 0; i < k(); ++i) out[i] = f(c_[static_cast<std::size_t>(i)], o[i]);
    return out;
  }
  template <class F>
  LatticePoint map(F f) const {
    LatticePoint out(k());
    for (int i = 0; i < k(); ++i) out[i] = f(c_[static_cast<std::size_t>(i)]);
    return out;
  }

  std::vector<int> c_;
};

/// All s with 0 <= s <= bound, by degree then lexicographically.
inline std::vector<LatticePoint> box(const LatticePoint& bound) {
  std::vector<LatticePoint> out;
  if (!bound.nonnegative()) return out;
  LatticePoint s(bound.k());
  while (true) {
    out.push_back(s);
    int i = bound.k() - 1;
    while (i >= 0 && s[i] == bound[i]) s[i--] = 0;
    if (i < 0) break;
    ++s[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Number of elements of the subset mask.
inline int subset_size(unsigned mask) { return __builtin_popcount(mask); }

}  // namespace dilation
