#include "wmcen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmcen {

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of an empty range");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return 0.5 * (lower + upper);
}

MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("mean_sd of an empty range");
  }
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() == 1) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace wmcen
