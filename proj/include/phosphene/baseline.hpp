#pragma once

#include <span>

#include "phosphene/data.hpp"
#include "phosphene/fit.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

// Normalized onset intensity and the background level it decays to.
inline constexpr double kBaselineI0 = 1.0;
inline constexpr double kBaselineIe = 0.02 * kBaselineI0;

// Time constant that takes i0 down to ie over `duration` seconds. Throws
// ArgumentError unless duration > 0 and i0 > ie > 0.
double tau(double duration, double i0, double ie);

// Onset jump to k, plateau until t_pfo, exponential fading (reaching k*Ie
// after t_pfd seconds) until offset, then persistence from the value at
// offset for t_per seconds, then 0.
TimeCourse baseline_predict(const BaselineParams& params, const Stimulus& stimulus, const Grid& grid);

FitResult baseline_fit(TrialSet trials, const FitOptions& options = {},
                       std::span<const BaselineParams> extra_starts = {});

}  // namespace phosphene
