#pragma once

#include <utility>
#include <vector>

#include "wmcen/types.hpp"

namespace wmcen {

/// Row-difference system: r (m x p) holds x_i - x_j and g (m x q) holds
/// y_i - y_j for every sample pair i < j, in lexicographic pair order.
/// Regressing g on r with an absolute-value loss reproduces the pairwise
/// rank dispersion of the original data.
struct PairwiseSystem {
  Matrix r;
  Matrix g;
  std::vector<std::pair<Index, Index>> pair_index;

  Index m() const { return r.rows(); }
};

PairwiseSystem build_pairwise(const Dataset& d);

}  // namespace wmcen
