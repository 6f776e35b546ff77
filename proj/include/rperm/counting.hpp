#pragma once

#include "core.hpp"
#include "numeric.hpp"

namespace rperm {

/// |S_b| = prod_i (1 + i - b_i). The empty vector counts 1.
inline BigInt count_b_regular(const RestrictionVector& b) {
  BigInt r = 1;
  for (std::size_t i = 1; i <= b.size(); ++i) r *= static_cast<long>(1 + static_cast<long>(i) - b(i));
  return r;
}

}  // namespace rperm
