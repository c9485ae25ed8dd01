#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dilation/lab/io.hpp"

namespace dilation::lab {

struct FamilyRequest {
  std::string family;
  std::uint64_t seed = 0;
  int k = 2;
  /// Empty, {d}, or {d, m_1, ..., m_k}; family defaults fill the rest.
  std::vector<int> dims;
};

const std::vector<std::string>& family_names();

/// Deterministic for a fixed request. Throws invalid-argument on an unknown
/// family or dimensions the family cannot honor.
Instance generate_instance(const FamilyRequest& request);

}  // namespace dilation::lab
