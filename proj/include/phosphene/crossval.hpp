#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phosphene/data.hpp"
#include "phosphene/fit.hpp"
#include "phosphene/metrics.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

enum class Protocol { subject, stimulus };

std::string_view to_string(Protocol p);
// Accepts "subject" and "stimulus" (also "loso" / "loco").
Protocol parse_protocol(std::string_view name);

// One held-out group. Indices refer to Dataset::trials().
struct FoldSpec {
  std::string key;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  // FNV-1a over the key and both index lists, as 16 hex digits.
  std::string hash() const;
};

std::vector<FoldSpec> subject_folds(const Dataset& dataset);
std::vector<FoldSpec> condition_folds(const Dataset& dataset);

struct EvalConfig {
  int m = 2;  // spectral components; ignored by the other models
  FitOptions fit;
  // Worker threads for independent folds; 0 picks the hardware count.
  unsigned threads = 0;
};

struct FoldRow {
  std::string key;
  std::string hash;
  std::size_t n = 0;        // held-out trials
  std::size_t skipped = 0;  // held-out trials with undefined r
  MeanSd mse;
  MeanSd r;
  double train_objective = 0.0;
  bool failed = false;
  std::string error;
  // Per-trial scores in test order, kept for pooled aggregates.
  std::vector<double> trial_mse;
  std::vector<double> trial_r;
};

struct Aggregate {
  // Unweighted mean over fold means; sd is the sample SD over all pooled
  // held-out trials.
  MeanSd mse;
  MeanSd r;
  std::size_t n = 0;
  std::size_t skipped = 0;
};

struct EvalReport {
  Protocol protocol = Protocol::subject;
  ModelKind model = ModelKind::spectral;
  int m = 2;
  std::uint64_t seed = 0;
  std::vector<FoldRow> rows;
  Aggregate aggregate;
  std::size_t failed_folds = 0;
};

// Fit on each fold's training trials, score every held-out trial. A fold
// whose fit throws is marked failed and the run continues. Throws
// ArgumentError when fewer than two folds exist.
EvalReport evaluate(const Dataset& dataset, ModelKind model, Protocol protocol,
                    const EvalConfig& config);
EvalReport loso(const Dataset& dataset, ModelKind model, const EvalConfig& config);
EvalReport loco(const Dataset& dataset, ModelKind model, const EvalConfig& config);

struct SweepPoint {
  int m = 0;
  MeanSd train;       // per-trial MSE over the fold's training trials
  MeanSd validation;  // per-trial MSE over the held-out subject
  double train_se() const;
  double validation_se() const;
};

struct SweepCurve {
  int subject_id = 0;
  std::vector<SweepPoint> points;
  int train_argmin = 0;
  int validation_argmin = 0;
  bool failed = false;
  std::string error;
};

struct SweepReport {
  int m_min = 1;
  int m_max = 8;
  std::uint64_t seed = 0;
  std::vector<SweepCurve> curves;
};

// Spectral predictive fits for m in [m_min, m_max] on every leave-one-
// subject-out fold. Throws ArgumentError unless 1 <= m_min <= m_max <= 8.
SweepReport sweep_m(const Dataset& dataset, int m_min, int m_max, const EvalConfig& config);

}  // namespace phosphene
