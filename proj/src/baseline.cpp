#include "phosphene/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "phosphene/errors.hpp"

namespace phosphene {

namespace {

std::vector<double> flatten(const BaselineParams& p) { return {p.t_per, p.t_pfo, p.t_pfd, p.k}; }

BaselineParams unflatten(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }

}  // namespace

double tau(double duration, double i0, double ie) {
  if (!(duration > 0.0)) throw ArgumentError("tau: duration must be > 0");
  if (!(ie > 0.0) || !(i0 > ie)) throw ArgumentError("tau: need i0 > ie > 0");
  return duration / (std::log(i0) - std::log(ie));
}

TimeCourse baseline_predict(const BaselineParams& params, const Stimulus& stimulus, const Grid& grid) {
  params.validate();
  if (grid.size == 0) throw ArgumentError("baseline_predict: empty grid");
  const double tau_fading = tau(params.t_pfd, kBaselineI0, kBaselineIe);
  const double tau_persistence = tau(params.t_per, kBaselineI0, kBaselineIe);
  const double offset = stimulus.duration_s;

  // Normalized intensity while the stimulus is on.
  auto during = [&](double t) {
    if (t < params.t_pfo) return kBaselineI0;
    return kBaselineI0 * std::exp(-(t - params.t_pfo) / tau_fading);
  };
  const double at_offset = during(offset);

  std::vector<double> out(grid.size, 0.0);
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double t = grid.time_at(i);
    double g = 0.0;
    if (t < 0.0) {
      g = 0.0;
    } else if (t <= offset) {
      g = during(t);
    } else if (t - offset <= params.t_per) {
      g = at_offset * std::exp(-(t - offset) / tau_persistence);
    }
    out[i] = params.k * g;
  }
  return TimeCourse(grid.t0, grid.dt, std::move(out));
}

FitResult baseline_fit(TrialSet trials, const FitOptions& options,
                       std::span<const BaselineParams> extra_starts) {
  const TrainingSummary summary = summarize_training(trials);
  const double span = summary.max_end;
  const BoxTransform box({1e-3, 0.0, 1e-3, 1e-3}, {span, span, span, 20.0});

  std::vector<std::vector<double>> starts;
  {
    const auto& mean = summary.mean_curve;
    const double peak = std::max(*std::max_element(mean.begin(), mean.end()), 0.1);
    starts.push_back(flatten({2.0, 0.5, std::max(summary.max_duration, 1.0), peak}));
  }
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  for (int r = 0; r < options.restarts; ++r) {
    starts.push_back(flatten({uniform(0.1, 20.0), uniform(0.0, summary.max_duration),
                              uniform(0.1, summary.max_duration + 10.0), uniform(1.0, 12.0)}));
  }
  for (const BaselineParams& p : extra_starts) {
    p.validate();
    starts.push_back(flatten(p));
  }

  auto cost = [&](std::span<const double> x) {
    const BaselineParams p = unflatten(x);
    return mean_trial_mse(trials, [&](const Trial& trial) {
      return baseline_predict(p, trial.stimulus, trial.observed.grid());
    });
  };
  const BoxedFit fit = fit_in_box(cost, box, starts, options.optim);

  FitResult result;
  result.params = unflatten(fit.x);
  result.mode = FitMode::predictive;
  result.objective = fit.f;
  result.initial_objective = fit.f_first_start;
  result.iterations = fit.iterations;
  result.evaluations = fit.evaluations;
  result.starts = fit.starts;
  result.converged = fit.converged;
  result.method = "nelder-mead+powell";
  return result;
}

}  // namespace phosphene
