#include "phosphene/crossval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "phosphene/errors.hpp"
#include "phosphene/models.hpp"

namespace phosphene {

namespace {

// Runs job(i) for i in [0, count) on up to `threads` workers. Each job writes
// only its own slot, so the results do not depend on scheduling.
template <typename Job>
void run_parallel(std::size_t count, unsigned threads, Job&& job) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
}

std::vector<FoldSpec> make_folds(const Dataset& dataset, std::vector<std::pair<std::string, std::vector<std::size_t>>> groups) {
  std::vector<FoldSpec> folds;
  const std::size_t total = dataset.trials().size();
  for (auto& [key, test] : groups) {
    FoldSpec fold;
    fold.key = std::move(key);
    fold.test = std::move(test);
    std::vector<bool> held(total, false);
    for (std::size_t i : fold.test) held[i] = true;
    for (std::size_t i = 0; i < total; ++i) {
      if (!held[i]) fold.train.push_back(i);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<TrialRef> select(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  std::vector<TrialRef> out;
  for (std::size_t i : indices) out.push_back(std::cref(dataset.trials()[i]));
  return out;
}

int argmin_m(const std::vector<SweepPoint>& points, MeanSd SweepPoint::*member) {
  int best = 0;
  double best_value = 0.0;
  for (const SweepPoint& p : points) {
    const double v = (p.*member).mean;
    if (best == 0 || v < best_value) {
      best = p.m;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(Protocol p) { return p == Protocol::subject ? "subject" : "stimulus"; }

Protocol parse_protocol(std::string_view name) {
  if (name == "subject" || name == "loso") return Protocol::subject;
  if (name == "stimulus" || name == "loco") return Protocol::stimulus;
  throw ArgumentError("unknown protocol \"" + std::string(name) + "\" (expected subject or stimulus)");
}

std::string FoldSpec::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (char c : key) mix(static_cast<unsigned char>(c));
  for (const auto* list : {&train, &test}) {
    mix(0xff);
    for (std::size_t i : *list) {
      for (int b = 0; b < 8; ++b) mix((static_cast<std::uint64_t>(i) >> (8 * b)) & 0xff);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<FoldSpec> subject_folds(const Dataset& dataset) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (int s : dataset.subjects()) groups.emplace_back(std::to_string(s), dataset.indices_for_subject(s));
  return make_folds(dataset, std::move(groups));
}

std::vector<FoldSpec> condition_folds(const Dataset& dataset) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (const Condition& c : dataset.conditions()) {
    groups.emplace_back(to_string(c), dataset.indices_for_condition(c));
  }
  return make_folds(dataset, std::move(groups));
}

EvalReport evaluate(const Dataset& dataset, ModelKind model, Protocol protocol, const EvalConfig& config) {
  const std::vector<FoldSpec> folds =
      protocol == Protocol::subject ? subject_folds(dataset) : condition_folds(dataset);
  if (folds.size() < 2) {
    throw ArgumentError(std::string("need at least two ") +
                        (protocol == Protocol::subject ? "subjects" : "stimulus conditions") +
                        " for cross-validation");
  }

  EvalReport report;
  report.protocol = protocol;
  report.model = model;
  report.m = config.m;
  report.seed = config.fit.seed;
  report.rows.resize(folds.size());

  run_parallel(folds.size(), config.threads, [&](std::size_t f) {
    const FoldSpec& fold = folds[f];
    FoldRow& row = report.rows[f];
    row.key = fold.key;
    row.hash = fold.hash();
    row.n = fold.test.size();
    try {
      const std::vector<TrialRef> train = select(dataset, fold.train);
      const FitResult fit = fit_predictive(model, train, config.m, config.fit);
      row.train_objective = fit.objective;
      for (std::size_t i : fold.test) {
        const Trial& trial = dataset.trials()[i];
        const TimeCourse pred = predict(fit.params, trial.stimulus, trial.observed.grid());
        const Score s = score(pred.samples(), trial.observed.samples());
        row.trial_mse.push_back(s.mse);
        if (s.r) {
          row.trial_r.push_back(*s.r);
        } else {
          ++row.skipped;
        }
      }
      row.mse = mean_sd(row.trial_mse);
      row.r = mean_sd(row.trial_r);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.trial_mse.clear();
      row.trial_r.clear();
    }
  });

  // Single-threaded reduction in fold order.
  std::vector<double> fold_mse, fold_r, pooled_mse, pooled_r;
  for (const FoldRow& row : report.rows) {
    if (row.failed) {
      ++report.failed_folds;
      continue;
    }
    fold_mse.push_back(row.mse.mean);
    if (row.r.count > 0) fold_r.push_back(row.r.mean);
    pooled_mse.insert(pooled_mse.end(), row.trial_mse.begin(), row.trial_mse.end());
    pooled_r.insert(pooled_r.end(), row.trial_r.begin(), row.trial_r.end());
    report.aggregate.n += row.n;
    report.aggregate.skipped += row.skipped;
  }
  report.aggregate.mse = {mean_sd(fold_mse).mean, mean_sd(pooled_mse).sd, fold_mse.size()};
  report.aggregate.r = {mean_sd(fold_r).mean, mean_sd(pooled_r).sd, fold_r.size()};
  return report;
}

EvalReport loso(const Dataset& dataset, ModelKind model, const EvalConfig& config) {
  return evaluate(dataset, model, Protocol::subject, config);
}

EvalReport loco(const Dataset& dataset, ModelKind model, const EvalConfig& config) {
  return evaluate(dataset, model, Protocol::stimulus, config);
}

double SweepPoint::train_se() const {
  return train.count > 0 ? train.sd / std::sqrt(static_cast<double>(train.count)) : 0.0;
}

double SweepPoint::validation_se() const {
  return validation.count > 0 ? validation.sd / std::sqrt(static_cast<double>(validation.count)) : 0.0;
}

SweepReport sweep_m(const Dataset& dataset, int m_min, int m_max, const EvalConfig& config) {
  if (m_min < 1 || m_max > static_cast<int>(kMaxComponents) || m_min > m_max) {
    throw ArgumentError("m range must satisfy 1 <= m_min <= m_max <= " + std::to_string(kMaxComponents));
  }
  const std::vector<FoldSpec> folds = subject_folds(dataset);
  if (folds.size() < 2) throw ArgumentError("need at least two subjects for cross-validation");

  SweepReport report;
  report.m_min = m_min;
  report.m_max = m_max;
  report.seed = config.fit.seed;
  report.curves.resize(folds.size());

  run_parallel(folds.size(), config.threads, [&](std::size_t f) {
    const FoldSpec& fold = folds[f];
    SweepCurve& curve = report.curves[f];
    curve.subject_id = std::stoi(fold.key);
    try {
      const std::vector<TrialRef> train = select(dataset, fold.train);
      const std::vector<TrialRef> test = select(dataset, fold.test);
      // The path always starts at m = 1 so the fits stay nested.
      const std::vector<FitResult> path = spectral_fit_predictive_path(train, m_max, config.fit);
      for (int m = m_min; m <= m_max; ++m) {
        const ModelParams& params = path[static_cast<std::size_t>(m - 1)].params;
        auto per_trial = [&](const std::vector<TrialRef>& trials) {
          std::vector<double> values;
          for (const Trial& trial : trials) {
            values.push_back(mse(predict(params, trial.stimulus, trial.observed.grid()).samples(),
                                 trial.observed.samples()));
          }
          return mean_sd(values);
        };
        curve.points.push_back({m, per_trial(train), per_trial(test)});
      }
      curve.train_argmin = argmin_m(curve.points, &SweepPoint::train);
      curve.validation_argmin = argmin_m(curve.points, &SweepPoint::validation);
    } catch (const std::exception& e) {
      curve.failed = true;
      curve.error = e.what();
      curve.points.clear();
    }
  });
  return report;
}

}  // namespace phosphene
