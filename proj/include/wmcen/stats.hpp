#pragma once

#include <vector>

namespace wmcen {

/// Median with the even-count convention of averaging the two central
/// order statistics. Takes its argument by value; the input is consumed.
double median(std::vector<double> values);

/// Mean and (sample, n-1 denominator) standard deviation.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& values);

}  // namespace wmcen
