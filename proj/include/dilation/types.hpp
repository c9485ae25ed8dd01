#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dilation {

using Complex = std::complex<double>;

template <class Scalar_, int Rows_ = Eigen::Dynamic, int Cols_ = Eigen::Dynamic>
using mat_type = Eigen::Matrix<Scalar_, Rows_, Cols_>;

template <class Scalar_, int Rows_ = Eigen::Dynamic>
using vec_type = Eigen::Matrix<Scalar_, Rows_, 1>;

using Mat = mat_type<Complex>;
using Vec = vec_type<Complex>;
using RealVec = vec_type<double>;
using Index = Eigen::Index;

enum class ErrorKind {
  invalid_argument,
  not_well_defined,
  invalid_flip,
  incoherent_flips,
  not_positive_definite,
  schema,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One named residual of a validation or verification pass.
struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

/// Ordered list of residuals plus non-fatal diagnostics.
struct Report {
  std::vector<Residual> entries;
  std::vector<std::string> warnings;

  void add(std::string name, double value, double tolerance) {
    entries.push_back({std::move(name), value, tolerance});
  }
  void merge(const Report& other, const std::string& prefix = {});
  bool passed() const;
  /// Value of the named entry; throws if absent.
  double value(const std::string& name) const;
  const Residual* find(const std::string& name) const;
};

}  // namespace dilation
