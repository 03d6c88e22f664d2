#include "phosphene/fit.hpp"

#include <algorithm>
#include <cmath>

#include "phosphene/baseline.hpp"
#include "phosphene/errors.hpp"
#include "phosphene/exponential.hpp"
#include "phosphene/metrics.hpp"
#include "phosphene/models.hpp"
#include "phosphene/spectral.hpp"

namespace phosphene {

std::vector<TrialRef> refs(std::span<const Trial> trials) {
  return {trials.begin(), trials.end()};
}

std::string_view to_string(FitMode mode) {
  return mode == FitMode::descriptive ? "descriptive" : "predictive";
}

TrainingSummary summarize_training(TrialSet trials) {
  if (trials.empty()) throw ArgumentError("empty training set");
  TrainingSummary summary;
  summary.dt = trials.front().get().observed.dt();
  std::vector<double> count;
  bool any_signal = false;
  for (const Trial& trial : trials) {
    const TimeCourse& obs = trial.observed;
    if (obs.size() < 2) throw FitError("insufficient data");
    const std::size_t onset = obs.grid().snap(0.0);
    for (std::size_t i = onset; i < obs.size(); ++i) {
      const std::size_t k = i - onset;
      if (k >= summary.mean_curve.size()) {
        summary.mean_curve.resize(k + 1, 0.0);
        count.resize(k + 1, 0.0);
      }
      summary.mean_curve[k] += obs[i];
      count[k] += 1.0;
      any_signal = any_signal || obs[i] != 0.0;
    }
    summary.max_duration = std::max(summary.max_duration, trial.stimulus.duration_s);
    summary.max_end = std::max(summary.max_end, obs.grid().end());
  }
  if (!any_signal) throw FitError("degenerate trial");
  for (std::size_t k = 0; k < count.size(); ++k) summary.mean_curve[k] /= count[k];
  return summary;
}

double mean_trial_mse(TrialSet trials, const std::function<TimeCourse(const Trial&)>& predict_trial) {
  double sum = 0.0;
  for (const Trial& trial : trials) {
    sum += mse(predict_trial(trial).samples(), trial.observed.samples());
  }
  return sum / static_cast<double>(trials.size());
}

BoxedFit fit_in_box(const std::function<double(std::span<const double>)>& cost,
                    const BoxTransform& box, std::span<const std::vector<double>> starts,
                    const OptimOptions& opts) {
  if (starts.empty()) throw ArgumentError("fit_in_box: no starting points");
  const Objective free_objective{[&](std::span<const double> u) { return cost(box.to_box(u)); },
                                 box.dimension()};
  BoxedFit best;
  bool have_best = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::vector<double> start = starts[s];
    if (start.size() != box.dimension()) throw ArgumentError("fit_in_box: start has wrong size");
    for (std::size_t i = 0; i < start.size(); ++i) {
      start[i] = std::clamp(start[i], box.lower()[i], box.upper()[i]);
    }
    const double f_start = cost(start);
    if (s == 0) best.f_first_start = f_start;
    ++best.starts;

    std::vector<double> x = start;
    double f = f_start;
    bool converged = false;
    if (std::isfinite(f_start)) {
      const OptResult r = minimize_chain(free_objective, box.to_free(start), opts);
      best.iterations += r.iterations;
      best.evaluations += r.evaluations + 1;
      converged = r.converged;
      std::vector<double> boxed = box.to_box(r.x_best);
      const double f_opt = cost(boxed);
      if (f_opt < f) {
        x = std::move(boxed);
        f = f_opt;
      }
    }
    if (!have_best || f < best.f) {
      best.x = std::move(x);
      best.f = f;
      best.converged = converged;
      have_best = true;
    }
  }
  if (!std::isfinite(best.f)) throw FitError("objective is not finite at any starting point");
  return best;
}

TimeCourse predict(const ModelParams& params, const Stimulus& stimulus, const Grid& grid) {
  return std::visit(
      [&](const auto& p) -> TimeCourse {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpectralParams>) {
          return spectral_predict(p, stimulus, grid);
        } else if constexpr (std::is_same_v<T, ExpParams>) {
          return exp_predict(p, stimulus, grid);
        } else {
          return baseline_predict(p, stimulus, grid);
        }
      },
      params);
}

FitResult fit_descriptive(ModelKind kind, const Trial& trial, int m, const FitOptions& options) {
  switch (kind) {
    case ModelKind::spectral:
      return spectral_fit_descriptive(trial, m, options);
    case ModelKind::exponential: {
      const std::vector<TrialRef> one{std::cref(trial)};
      FitResult r = exp_fit(one, options);
      r.mode = FitMode::descriptive;
      return r;
    }
    case ModelKind::baseline: {
      const std::vector<TrialRef> one{std::cref(trial)};
      FitResult r = baseline_fit(one, options);
      r.mode = FitMode::descriptive;
      return r;
    }
  }
  throw ArgumentError("unknown model kind");
}

FitResult fit_predictive(ModelKind kind, TrialSet training, int m, const FitOptions& options) {
  switch (kind) {
    case ModelKind::spectral:
      return spectral_fit_predictive(training, m, options);
    case ModelKind::exponential:
      return exp_fit(training, options);
    case ModelKind::baseline:
      return baseline_fit(training, options);
  }
  throw ArgumentError("unknown model kind");
}

}  // namespace phosphene
