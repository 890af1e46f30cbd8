#pragma once

#include <span>
#include <string>

#include "gicl/trial.hpp"

namespace gicl {

/// 100 * correct / n. Unparsed and errored trials count as incorrect.
/// Throws std::invalid_argument on an empty list.
double accuracy(std::span<const TrialResult> results);

/// 100 * (best - baseline) / baseline. Throws std::invalid_argument unless
/// baseline > 0.
double relative_improvement(double best, double baseline);

/// Absolute percentage-point difference, rounded to two decimals.
double percentage_point_delta(double with, double without);

/// Two decimals with an explicit sign ("+76.96", "-3.69"); zero is "0.00".
std::string format_signed(double value);

}  // namespace gicl
