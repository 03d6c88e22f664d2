#include "phosphene/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"

namespace phosphene {

namespace {

constexpr double kFlatlineFraction = 0.02;
constexpr double kBiasBound = 20.0;
constexpr double kAmplitudeBound = 20.0;
constexpr double kPhaseBound = 2.0 * std::numbers::pi;

double wrap_phase(double phase) {
  double p = std::remainder(phase, 2.0 * std::numbers::pi);
  if (p >= std::numbers::pi) p -= 2.0 * std::numbers::pi;
  if (p < -std::numbers::pi) p += 2.0 * std::numbers::pi;
  return p;
}

void check_m(int m) {
  if (m < 1 || m > static_cast<int>(kMaxComponents)) {
    throw ArgumentError("m must be in [1, " + std::to_string(kMaxComponents) + "]");
  }
}

// Samples from index `first` through the last nonzero sample.
std::span<const double> decay_window(std::span<const double> samples, std::size_t first) {
  std::size_t last = samples.size();
  while (last > first && samples[last - 1] == 0.0) --last;
  if (last <= first) return {};
  return samples.subspan(first, last - first);
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

void accumulate(FitResult& into, const BoxedFit& fit) {
  into.iterations += fit.iterations;
  into.evaluations += fit.evaluations;
  into.starts += fit.starts;
  into.converged = fit.converged;
}

// The DFT-derived starting point shared by both fitting modes.
struct SeriesInit {
  std::vector<SpectrumComponent> components;  // top kMaxComponents (or fewer)
  double k2 = 0.0;
  // Frequency of DFT bin 1 for the window the components came from.
  double fundamental_hz = 0.0;
};

SeriesInit init_from_curve(std::span<const double> curve, const Grid& grid, double t1, int m) {
  const auto window = decay_window(curve, grid.snap(t1));
  if (window.size() / 2 < static_cast<std::size_t>(m)) {
    throw FitError("insufficient data: decay window of " + std::to_string(window.size()) +
                   " samples cannot hold " + std::to_string(m) + " components");
  }
  SeriesInit init;
  init.components = top_m_components(dft(window), m, grid.dt);
  init.k2 = mean_of(window);
  init.fundamental_hz = 1.0 / (static_cast<double>(window.size()) * grid.dt);
  return init;
}

}  // namespace

double eval_series(std::span<const SpectrumComponent> components, double k2, double t) {
  double value = k2;
  for (const auto& c : components) {
    value += c.amplitude * std::cos(2.0 * std::numbers::pi * c.freq_hz * t + c.phase);
  }
  return value;
}

std::size_t first_local_max(std::span<const double> samples, std::size_t start_index) {
  if (start_index >= samples.size()) throw ArgumentError("first_local_max: start index out of range");
  for (std::size_t i = std::max<std::size_t>(start_index, 1); i + 1 < samples.size(); ++i) {
    if (samples[i] >= samples[i - 1] && samples[i] >= samples[i + 1]) return i;
  }
  return start_index;
}

namespace {

// The decay series sampled on `grid`, in time since t1.
std::vector<double> series_on(const SpectralParams& params, const Grid& grid) {
  std::vector<double> series(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) {
    series[i] = eval_series(params.components, params.k2, grid.time_at(i) - params.t1);
  }
  return series;
}

// `series` holds series_on(params, grid) for at least grid.size samples;
// callers that share a grid origin can pass one longer precomputed series.
TimeCourse assemble(const SpectralParams& params, const Stimulus& stimulus, const Grid& grid,
                    std::span<const double> series) {
  if (grid.size == 0) throw ArgumentError("spectral_predict: empty grid");
  double t3 = params.t3;
  if (params.t3_anchor == ExtinctionAnchor::offset) {
    t3 = std::clamp(stimulus.duration_s + params.t3, params.t1 + grid.dt,
                    std::max(grid.end(), params.t1 + grid.dt));
  }
  if (!(t3 > params.t1)) throw ParameterError("spectral: t3 must be greater than t1");

  const std::size_t n = grid.size;
  const std::size_t i1 = grid.snap(params.t1);
  const std::size_t i3 = grid.snap(t3);

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < std::min(i1, n); ++i) {
    const double t = grid.time_at(i);
    if (t >= 0.0) out[i] = params.k1 / params.t1 * t;
  }
  if (i1 < n) {
    series = series.first(n);
    // Searching from the sample after t1 guarantees a connector, so the
    // curve never jumps from the rise straight onto the series.
    const std::size_t i2 = i1 + 1 < n ? first_local_max(series, i1 + 1) : i1;
    const double ta = grid.time_at(i1);
    const double tb = grid.time_at(i2);
    for (std::size_t i = i1; i < std::min(i3, n); ++i) {
      if (i < i2) {
        out[i] = params.k1 + (series[i2] - params.k1) * (grid.time_at(i) - ta) / (tb - ta);
      } else {
        out[i] = series[i];
      }
    }
  }
  for (double& v : out) v = std::max(v, 0.0);
  return TimeCourse(grid.t0, grid.dt, std::move(out));
}

}  // namespace

TimeCourse spectral_predict(const SpectralParams& params, const Stimulus& stimulus, const Grid& grid) {
  params.validate();
  if (grid.size == 0) throw ArgumentError("spectral_predict: empty grid");
  return assemble(params, stimulus, grid, series_on(params, grid));
}

double flatline_time(const TimeCourse& observed) {
  const auto s = observed.samples();
  const double peak = *std::max_element(s.begin(), s.end());
  const double threshold = kFlatlineFraction * peak;
  std::size_t last_above = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= threshold) last_above = i;
  }
  if (last_above + 1 >= s.size()) return observed.grid().end();
  return observed.time_at(last_above + 1);
}

FitResult spectral_fit_descriptive(const Trial& trial, int m, const FitOptions& options) {
  check_m(m);
  const TimeCourse& observed = trial.observed;
  if (observed.size() < 2) throw FitError("insufficient data");
  if (all_zero(observed.samples())) throw FitError("degenerate trial");
  const Grid grid = observed.grid();

  SpectralParams base;
  const SeriesInit init = init_from_curve(observed.samples(), grid, base.t1, m);
  const double t3_lo = base.t1 + grid.dt;
  const double t3_hi = std::max(grid.end(), t3_lo);
  const double t3_init = std::clamp(flatline_time(observed), t3_lo, t3_hi);
  const BoxTransform box({-kBiasBound, t3_lo}, {kBiasBound, t3_hi});

  auto make = [&](const std::vector<SpectrumComponent>& comps, std::span<const double> x) {
    SpectralParams p = base;
    p.components = comps;
    p.k2 = x[0];
    p.t3 = x[1];
    return p;
  };
  auto cost_for = [&](const std::vector<SpectrumComponent>& comps) {
    return [&, comps](std::span<const double> x) {
      return mse(spectral_predict(make(comps, x), trial.stimulus, grid).samples(), observed.samples());
    };
  };

  FitResult result;
  result.mode = FitMode::descriptive;
  result.method = "nelder-mead+powell";
  SpectralParams best;
  double best_f = 0.0;
  for (int j = 1; j <= m; ++j) {
    const std::vector<SpectrumComponent> comps(init.components.begin(), init.components.begin() + j);
    const std::vector<std::vector<double>> start{{init.k2, t3_init}};
    BoxedFit fresh = fit_in_box(cost_for(comps), box, start, options.optim);
    accumulate(result, fresh);
    SpectralParams candidate = make(comps, fresh.x);
    double candidate_f = fresh.f;
    if (j == m) result.initial_objective = fresh.f_first_start;

    if (j > 1) {
      // Previous solution plus the new component switched off.
      std::vector<SpectrumComponent> padded = best.components;
      padded.push_back(comps.back());
      padded.back().amplitude = 0.0;
      const std::vector<std::vector<double>> warm{{best.k2, best.t3}};
      BoxedFit nested = fit_in_box(cost_for(padded), box, warm, options.optim);
      accumulate(result, nested);
      if (nested.f < candidate_f) {
        candidate = make(padded, nested.x);
        candidate_f = nested.f;
      }
    }
    best = std::move(candidate);
    best_f = candidate_f;
  }
  result.params = best;
  result.objective = best_f;
  return result;
}

std::vector<FitResult> spectral_fit_predictive_path(TrialSet training, int m_max,
                                                    const FitOptions& options,
                                                    std::span<const SpectralParams> extra_starts) {
  check_m(m_max);
  for (const SpectralParams& p : extra_starts) {
    p.validate();
    if (p.t3_anchor != ExtinctionAnchor::offset || p.components.empty() ||
        p.components.size() > static_cast<std::size_t>(m_max)) {
      throw ArgumentError("extra spectral starts need an offset anchor and 1..m components");
    }
  }

  const TrainingSummary summary = summarize_training(training);
  const double dt = summary.dt;
  const double max_duration = summary.max_duration;
  const double max_end = summary.max_end;
  const std::vector<double>& mean_curve = summary.mean_curve;
  const Grid mean_grid{0.0, dt, mean_curve.size()};
  std::vector<double> extinction_offsets;
  for (const Trial& trial : training) {
    if (!all_zero(trial.observed.samples())) {
      extinction_offsets.push_back(flatline_time(trial.observed) - trial.stimulus.duration_s);
    }
  }

  SpectralParams base;
  base.t3_anchor = ExtinctionAnchor::offset;
  const SeriesInit init = init_from_curve(mean_curve, mean_grid, base.t1, m_max);
  const double offset_init = median_of(extinction_offsets);
  const double nyquist = 0.5 / dt;

  // Trials normally share one grid origin, so one series evaluation serves
  // them all.
  Grid shared_grid = training.front().get().observed.grid();
  for (const Trial& trial : training) {
    const Grid g = trial.observed.grid();
    if (g.t0 == shared_grid.t0 && g.dt == shared_grid.dt) shared_grid.size = std::max(shared_grid.size, g.size);
  }

  auto make = [&](std::span<const double> x, std::size_t m) {
    SpectralParams p = base;
    p.k2 = x[0];
    p.t3 = x[1];
    p.components.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      p.components[i] = {x[2 + 3 * i], x[3 + 3 * i], wrap_phase(x[4 + 3 * i])};
    }
    return p;
  };
  auto flatten = [](const SpectralParams& p) {
    std::vector<double> x{p.k2, p.t3};
    for (const auto& c : p.components) {
      x.insert(x.end(), {c.freq_hz, c.amplitude, c.phase});
    }
    return x;
  };

  std::vector<FitResult> path;
  for (int j = 1; j <= m_max; ++j) {
    const auto m = static_cast<std::size_t>(j);
    std::vector<double> lower{-kBiasBound, -max_duration};
    std::vector<double> upper{kBiasBound, max_end};
    for (std::size_t i = 0; i < m; ++i) {
      lower.insert(lower.end(), {init.fundamental_hz, 0.0, -kPhaseBound});
      upper.insert(upper.end(), {nyquist, kAmplitudeBound, kPhaseBound});
    }
    const BoxTransform box(lower, upper);
    auto cost = [&](std::span<const double> x) {
      const SpectralParams p = make(x, m);
      p.validate();
      const std::vector<double> series = series_on(p, shared_grid);
      return mean_trial_mse(training, [&](const Trial& trial) {
        const Grid grid = trial.observed.grid();
        if (grid.t0 == shared_grid.t0 && grid.dt == shared_grid.dt) {
          return assemble(p, trial.stimulus, grid, series);
        }
        return spectral_predict(p, trial.stimulus, grid);
      });
    };

    SpectralParams fresh = base;
    fresh.k2 = init.k2;
    fresh.t3 = offset_init;
    fresh.components.assign(init.components.begin(), init.components.begin() + j);
    std::vector<std::vector<double>> starts{flatten(fresh)};
    if (j > 1) {
      SpectralParams padded = std::get<SpectralParams>(path.back().params);
      padded.components.push_back(init.components[m - 1]);
      padded.components.back().amplitude = 0.0;
      starts.push_back(flatten(padded));
    }
    for (const SpectralParams& p : extra_starts) {
      if (p.components.size() == m) starts.push_back(flatten(p));
    }
    const BoxedFit fit = fit_in_box(cost, box, starts, options.optim);

    FitResult result;
    result.mode = FitMode::predictive;
    result.method = "nelder-mead+powell";
    accumulate(result, fit);
    result.params = make(fit.x, m);
    result.objective = fit.f;
    result.initial_objective = fit.f_first_start;
    path.push_back(std::move(result));
  }
  return path;
}

FitResult spectral_fit_predictive(TrialSet training, int m, const FitOptions& options,
                                  std::span<const SpectralParams> extra_starts) {
  return spectral_fit_predictive_path(training, m, options, extra_starts).back();
}

}  // namespace phosphene
