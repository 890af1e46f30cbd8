#include "gicl/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gicl {

double accuracy(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("accuracy of an empty trial list");
  std::size_t correct = 0;
  for (const auto& r : results) correct += r.correct ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(results.size());
}

double relative_improvement(double best, double baseline) {
  if (!(baseline > 0.0)) throw std::invalid_argument("relative improvement needs a positive baseline");
  return 100.0 * (best - baseline) / baseline;
}

double percentage_point_delta(double with, double without) {
  return std::round((with - without) * 100.0) / 100.0;
}

std::string format_signed(double value) {
  const double rounded = std::round(value * 100.0) / 100.0;
  char buf[64];
  if (rounded == 0.0) return "0.00";
  std::snprintf(buf, sizeof buf, "%+.2f", rounded);
  return buf;
}

}  // namespace gicl
