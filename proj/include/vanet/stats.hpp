#pragma once

// Small-sample summary statistics for replication averaging.

#include <cmath>
#include <cstddef>
#include <vector>

namespace vanet {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0;
  double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Two-sided 95% Student-t quantiles for df = 1..30; normal beyond.
inline double t95(std::size_t df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) return 0;
  if (df <= 30) return table[df - 1];
  return 1.960;
}

// Half-width of the 95% confidence interval around the replication mean.
inline double ci95_halfwidth(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0;
  return t95(xs.size() - 1) * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace vanet
