#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace phosphene {

// Mean of squared differences. Throws ArgumentError on length mismatch or
// empty input.
double mse(std::span<const double> a, std::span<const double> b);

// Sample Pearson correlation. Throws ArgumentError on length mismatch or
// fewer than two samples, DegenerateVarianceError when either input is
// constant.
double pearson_r(std::span<const double> a, std::span<const double> b);

struct Score {
  double mse = 0.0;
  // Empty when the correlation is undefined (constant prediction/observation).
  std::optional<double> r;
  std::size_t n = 0;
};

// Scores a prediction against an observation sampled on the same grid.
Score score(std::span<const double> predicted, std::span<const double> observed);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 when fewer than two values
  std::size_t count = 0;
};

MeanSd mean_sd(std::span<const double> values);

}  // namespace phosphene
