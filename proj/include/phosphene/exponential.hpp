#pragma once

#include <span>

#include "phosphene/data.hpp"
#include "phosphene/fit.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

// Six-segment recursive model evaluated on the grid. Each boundary t_i owns
// the grid sample nearest to it (ties to the earlier sample); "previous
// sample" in the multiplicative segments is the preceding grid value, and
// every step is clamped at 0. Throws ArgumentError for freq_pps <= 0 and
// ParameterError for unordered boundaries.
TimeCourse exp_predict(const ExpParams& params, const Stimulus& stimulus, const Grid& grid);

// Minimizes the mean MSE over `trials` from one data-driven start per
// distinct stimulus duration, then
// `options.restarts` random starts, then any `extra_starts`. Boundaries are
// optimized as t1 plus nonnegative increments.
FitResult exp_fit(TrialSet trials, const FitOptions& options = {},
                  std::span<const ExpParams> extra_starts = {});

}  // namespace phosphene
