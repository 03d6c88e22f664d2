#include "phosphene/exponential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"

namespace phosphene {

namespace {

constexpr std::size_t kDim = 10;

// Free vector layout: k1..k5, t1, then the four nonnegative increments
// t2-t1 .. t5-t4.
std::vector<double> flatten(const ExpParams& p) {
  return {p.k[0], p.k[1], p.k[2], p.k[3], p.k[4],
          p.t[0], p.t[1] - p.t[0], p.t[2] - p.t[1], p.t[3] - p.t[2], p.t[4] - p.t[3]};
}

ExpParams unflatten(std::span<const double> x) {
  ExpParams p;
  for (std::size_t i = 0; i < 5; ++i) p.k[i] = x[i];
  p.t[0] = x[5];
  for (std::size_t i = 1; i < 5; ++i) p.t[i] = p.t[i - 1] + x[5 + i];
  return p;
}

}  // namespace

TimeCourse exp_predict(const ExpParams& params, const Stimulus& stimulus, const Grid& grid) {
  params.validate();
  if (!(stimulus.freq_pps > 0.0)) throw ArgumentError("exp_predict: stimulus frequency must be > 0");
  if (grid.size == 0) throw ArgumentError("exp_predict: empty grid");

  std::array<std::size_t, 5> owner{};
  for (std::size_t b = 0; b < 5; ++b) owner[b] = grid.snap(params.t[b]);
  const double freq_scale = std::pow(stimulus.freq_pps, 0.25);
  const auto& k = params.k;
  const auto& tb = params.t;

  std::vector<double> out(grid.size, 0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double t = grid.time_at(i);
    std::size_t segment = 0;
    while (segment < 5 && owner[segment] <= i) ++segment;
    // A boundary's owning sample can sit just before it; elapsed time
    // starts at 0 there rather than going negative.
    auto since = [&](std::size_t b) { return std::max(0.0, t - tb[b]); };
    double v = 0.0;
    switch (segment) {
      case 0:
        v = 0.0;
        break;
      case 1:
        v = k[0] * (t - tb[0]);
        break;
      case 2:
        v = prev * std::exp(-k[1] * since(1) * freq_scale);
        break;
      case 3:
        v = prev * std::exp(-k[2] * since(2));
        break;
      case 4:
        v = prev * k[3] * std::sin(k[4] * since(3));
        break;
      default:
        v = prev * std::exp(-k[2] * since(4));
        break;
    }
    v = std::max(v, 0.0);
    out[i] = v;
    prev = v;
  }
  return TimeCourse(grid.t0, grid.dt, std::move(out));
}

FitResult exp_fit(TrialSet trials, const FitOptions& options, std::span<const ExpParams> extra_starts) {
  const TrainingSummary summary = summarize_training(trials);
  const double span = summary.max_end;

  const BoxTransform box({1e-3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                         {50.0, 5.0, 5.0, 5.0, 4.0 * std::numbers::pi, span, span, span, span, span});

  // Data-driven starts: rise to the mean curve's peak, slow decay, then a
  // faster decay from one of the training durations with the rebound
  // segment collapsed. Boundaries are absolute times, so each distinct
  // offset in the training set gets its own start.
  std::vector<std::vector<double>> starts;
  const auto& mean = summary.mean_curve;
  const auto peak_it = std::max_element(mean.begin(), mean.end());
  const double t_peak = std::max(summary.dt, static_cast<double>(peak_it - mean.begin()) * summary.dt);
  std::vector<double> offsets;
  for (const Trial& trial : trials) offsets.push_back(trial.stimulus.duration_s);
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  for (double d : offsets) {
    ExpParams guess;
    guess.k = {std::max(*peak_it, 0.1) / t_peak, 0.002, 0.2, 1.0, 1.0};
    const double offset = std::max(d, t_peak);
    guess.t = {0.0, t_peak, offset, offset, offset};
    starts.push_back(flatten(guess));
  }
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double increment_hi = summary.max_duration + 10.0;
  for (int r = 0; r < options.restarts; ++r) {
    ExpParams p;
    p.k = {uniform(1.0, 20.0), uniform(0.0, 5.0), uniform(0.0, 5.0), uniform(0.0, 3.0), uniform(0.1, 6.3)};
    p.t[0] = uniform(0.0, 1.0);
    for (std::size_t i = 1; i < 5; ++i) p.t[i] = p.t[i - 1] + uniform(0.0, increment_hi);
    starts.push_back(flatten(p));
  }
  for (const ExpParams& p : extra_starts) {
    p.validate();
    starts.push_back(flatten(p));
  }

  // The prediction depends on the stimulus only through its frequency and
  // is causal, so trials sharing a frequency and grid origin can read
  // prefixes of one evaluation on the longest such grid.
  struct SharedCurve {
    Stimulus stimulus;
    Grid grid;
  };
  std::vector<SharedCurve> shared;
  std::vector<std::size_t> slot;
  for (const Trial& trial : trials) {
    const Grid g = trial.observed.grid();
    std::size_t k = 0;
    while (k < shared.size() && !(shared[k].stimulus.freq_pps == trial.stimulus.freq_pps &&
                                  shared[k].grid.t0 == g.t0 && shared[k].grid.dt == g.dt)) {
      ++k;
    }
    if (k == shared.size()) shared.push_back({trial.stimulus, g});
    shared[k].grid.size = std::max(shared[k].grid.size, g.size);
    slot.push_back(k);
  }

  auto cost = [&](std::span<const double> x) {
    const ExpParams p = unflatten(x);
    std::vector<TimeCourse> curves;
    for (const SharedCurve& c : shared) curves.push_back(exp_predict(p, c.stimulus, c.grid));
    double sum = 0.0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto observed = trials[i].get().observed.samples();
      sum += mse(curves[slot[i]].samples().first(observed.size()), observed);
    }
    return sum / static_cast<double>(trials.size());
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
  static_assert(kDim == 10);
  return result;
}

}  // namespace phosphene
