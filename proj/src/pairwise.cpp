#include "wmcen/pairwise.hpp"

#include <stdexcept>

namespace wmcen {

PairwiseSystem build_pairwise(const Dataset& d) {
  const Index n = d.n();
  if (n < 2) {
    throw std::invalid_argument("pairwise system requires at least 2 samples");
  }
  const Index m = n * (n - 1) / 2;

  PairwiseSystem ps;
  ps.r.resize(m, d.p());
  ps.g.resize(m, d.q());
  ps.pair_index.reserve(static_cast<std::size_t>(m));

  Index o = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      ps.r.row(o) = d.x.row(i) - d.x.row(j);
      ps.g.row(o) = d.y.row(i) - d.y.row(j);
      ps.pair_index.emplace_back(i, j);
      ++o;
    }
  }
  return ps;
}

}  // namespace wmcen
