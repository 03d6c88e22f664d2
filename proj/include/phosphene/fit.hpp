#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phosphene/data.hpp"
#include "phosphene/optim.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

// Non-owning list of trials handed to the fitting routines.
using TrialRef = std::reference_wrapper<const Trial>;
using TrialSet = std::span<const TrialRef>;

std::vector<TrialRef> refs(std::span<const Trial> trials);

// Model parameters live on scales of a few units, so start with wider steps
// than the optimizer default.
inline OptimOptions fit_optim_defaults() {
  OptimOptions o;
  o.initial_step = 0.5;
  return o;
}

struct FitOptions {
  OptimOptions optim = fit_optim_defaults();
  // Random restarts for the exponential and baseline fits.
  int restarts = 8;
  std::uint64_t seed = 0;
};

enum class FitMode { descriptive, predictive };

std::string_view to_string(FitMode mode);

struct FitResult {
  ModelParams params;
  FitMode mode = FitMode::descriptive;
  // Mean over trials of the per-trial MSE at `params`.
  double objective = 0.0;
  // Same quantity at the first starting point.
  double initial_objective = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int starts = 0;
  bool converged = false;
  std::string method;
};

// Shape of a training set shared by the fitting routines.
struct TrainingSummary {
  // Onset-aligned mean of the observed curves on a grid starting at 0;
  // trials drop out of the average past their last sample.
  std::vector<double> mean_curve;
  double dt = 0.0;
  double max_duration = 0.0;
  // Latest exclusive grid end over all trials.
  double max_end = 0.0;
};

// Throws ArgumentError for an empty set, FitError("insufficient data") when a
// trial has fewer than two samples and FitError("degenerate trial") when
// every observation is zero.
TrainingSummary summarize_training(TrialSet trials);

// Mean over trials of the per-trial MSE of a prediction function.
double mean_trial_mse(TrialSet trials,
                      const std::function<TimeCourse(const Trial&)>& predict_trial);

// Outcome of minimizing a cost over a box from several starting points.
struct BoxedFit {
  std::vector<double> x;
  double f = 0.0;
  double f_first_start = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int starts = 0;
  bool converged = false;
};

// Runs the Nelder-Mead -> Powell chain in the unconstrained space of `box`
// from every start (clamped into the box) and keeps the lowest cost,
// earliest start on ties. Each start is itself a candidate, so the result
// never exceeds the cost of any start.
BoxedFit fit_in_box(const std::function<double(std::span<const double>)>& cost,
                    const BoxTransform& box, std::span<const std::vector<double>> starts,
                    const OptimOptions& opts);

}  // namespace phosphene
