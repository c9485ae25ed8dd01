#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dilation/lab/io.hpp"

namespace dilation::lab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int input_error = 2;
inline constexpr int not_dilatable = 3;
inline constexpr int check_failed = 4;
inline constexpr int mismatch = 5;
}  // namespace exit_code

/// Command-line overrides; unset fields fall back to the instance parameters.
struct RunOptions {
  std::optional<LatticePoint> L;
  std::optional<LatticePoint> M;
  std::optional<LatticePoint> probes;
  std::optional<int> guard;
  std::optional<double> tol;
  /// Optional path receiving the bundle matrices of a dilate run.
  std::string dump_path;
  int threads = 0;
};

struct Outcome {
  int exit = exit_code::ok;
  /// Null when the input could not be read.
  ordered_json report;
  /// Lines for stderr.
  std::vector<std::string> diagnostics;
};

Outcome run_validate(const json& instance);
Outcome run_check(const json& instance, const RunOptions& options = {});
Outcome run_dilate(const json& instance, const RunOptions& options = {});
/// Reruns the reference's command with its echoed parameters and compares.
Outcome run_verify(const json& instance, const json& reference, int threads = 0);

/// Report with the timing field removed, for byte comparisons.
std::string report_without_timing(const ordered_json& report);

}  // namespace dilation::lab
