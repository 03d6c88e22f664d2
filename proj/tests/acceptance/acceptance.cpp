// Acceptance suite: one PASS/FAIL line per criterion, details indented
// below it. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phosphene/cli.hpp"
#include "phosphene/crossval.hpp"
#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"
#include "phosphene/models.hpp"
#include "phosphene/optim.hpp"

using namespace phosphene;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(bool ok, const std::string& id, const std::string& summary) {
  if (!ok) ++failures;
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), summary.c_str());
  std::fflush(stdout);
}

void detail(const std::string& line) {
  std::printf("    %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Dataset& fixture() {
  static const Dataset ds = load_dataset(PHOSPHENE_FIXTURE);
  return ds;
}

// 1. Both optimizers solve Rosenbrock from the textbook start.
void optimizer() {
  const Objective rosen{[](std::span<const double> x) {
                          return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
                        },
                        2};
  const std::vector<double> x0{-1.2, 1.0};
  OptimOptions opts;
  opts.max_iters = 200 * 2;
  bool ok = true;
  std::string summary;
  for (auto [name, method] : {std::pair{"nelder-mead", &nelder_mead}, std::pair{"powell", &powell}}) {
    const auto start = Clock::now();
    const OptResult r = method(rosen, x0, opts);
    const double secs = seconds_since(start);
    const bool pass = r.f_best < 1e-6 && r.iterations <= 400 && secs < 1.0;
    ok = ok && pass;
    summary += fmt("%s f=%.2e iters=%d %.3fs; ", name, r.f_best, r.iterations, secs);
  }
  verdict(ok, "C1 optimizer", summary + "need f<1e-6, iters<=400, <1s each");
}

// 2. DFT against the O(n^2) sum and its own inverse.
void dft_accuracy() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(2, 512);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  double worst_fwd = 0.0, worst_rt = 0.0;
  for (int s = 0; s < 50; ++s) {
    const std::size_t n = len(rng);
    std::vector<double> x(n);
    for (double& v : x) v = val(rng);
    const Spectrum X = dft(x);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> ref = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ref += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                                          static_cast<double>(n));
      }
      err = std::max(err, std::abs(X[k] - ref));
      scale = std::max(scale, std::abs(ref));
    }
    worst_fwd = std::max(worst_fwd, err / scale);
    const Spectrum back = inverse_dft(X);
    double rt = 0.0, xmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      rt = std::max(rt, std::abs(back[j] - x[j]));
      xmax = std::max(xmax, std::abs(x[j]));
    }
    worst_rt = std::max(worst_rt, rt / xmax);
  }
  const double secs = seconds_since(start);
  verdict(worst_fwd <= 1e-10 && worst_rt < 1e-9 && secs < 5.0, "C2 dft",
          fmt("max rel err %.2e (<=1e-10), round trip %.2e (<1e-9), %.2fs (<5s)", worst_fwd, worst_rt, secs));
}

// 3. Each model recovers data it generated, with the generating parameters
// among the starts.
void self_consistency() {
  const auto start = Clock::now();
  std::mt19937_64 rng(99);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const Stimulus stim{20.0, 10.0, {}};
  const Grid grid{0.0, 0.25, 88};
  auto synthetic = [&](const ModelParams& p) {
    return std::vector<Trial>{{1, stim, predict(p, stim, grid)}};
  };

  std::vector<SpectralParams> sp;
  std::vector<ExpParams> ep;
  std::vector<BaselineParams> bp;
  for (int d = 0; d < 10; ++d) {
    SpectralParams s;
    s.t3_anchor = ExtinctionAnchor::offset;
    const int m = 1 + d % 4;
    for (int c = 0; c < m; ++c) s.components.push_back({u(0.1, 1.5), u(0.0, 3.0), u(-3.1, 3.1)});
    s.k2 = u(3.0, 8.0);
    s.t3 = u(0.0, 4.0);
    sp.push_back(s);

    ExpParams e;
    e.k = {u(1.0, 20.0), u(0.0, 5.0), u(0.0, 5.0), u(0.0, 3.0), u(0.1, 6.3)};
    e.t[0] = u(0.0, 1.0);
    for (std::size_t i = 1; i < 5; ++i) e.t[i] = e.t[i - 1] + u(0.0, 5.0);
    ep.push_back(e);

    bp.push_back({u(0.1, 20.0), u(0.0, 10.0), u(0.1, 20.0), u(1.0, 12.0)});
  }

  int ok_s = 0, ok_e = 0, ok_b = 0;
  for (int d = 0; d < 10; ++d) {
    const auto ts = synthetic(sp[d]);
    const auto rs = refs(ts);
    ok_s += spectral_fit_predictive(rs, static_cast<int>(sp[d].components.size()), {},
                                    std::span(&sp[d], 1)).objective < 1e-6;
    const auto te = synthetic(ep[d]);
    const auto re = refs(te);
    ok_e += exp_fit(re, {}, std::span(&ep[d], 1)).objective < 1e-6;
    const auto tb = synthetic(bp[d]);
    const auto rb = refs(tb);
    ok_b += baseline_fit(rb, {}, std::span(&bp[d], 1)).objective < 1e-6;
  }
  const double secs = seconds_since(start);
  verdict(ok_s >= 9 && ok_e >= 9 && ok_b >= 9 && secs < 120.0, "C3 self-consistency",
          fmt("objective<1e-6 on spectral %d/10, exponential %d/10, baseline %d/10 (>=9 each), %.1fs (<120s)",
              ok_s, ok_e, ok_b, secs));

  // Without the generating start; informational only.
  int blind_s = 0, blind_e = 0, blind_b = 0;
  for (int d = 0; d < 10; ++d) {
    const auto ts = synthetic(sp[d]);
    const auto rs = refs(ts);
    blind_s += spectral_fit_predictive(rs, static_cast<int>(sp[d].components.size())).objective < 1e-6;
    const auto te = synthetic(ep[d]);
    const auto re = refs(te);
    blind_e += exp_fit(re).objective < 1e-6;
    const auto tb = synthetic(bp[d]);
    const auto rb = refs(tb);
    blind_b += baseline_fit(rb).objective < 1e-6;
  }
  detail(fmt("info: from data-driven and random starts alone: spectral %d/10, exponential %d/10, baseline %d/10",
             blind_s, blind_e, blind_b));
}

// 4. Descriptive fits on ten representative trials, chosen before any
// fitting: A-J cover every condition, D and H show a post-offset rebound.
void descriptive_capacity() {
  struct Pick {
    char label;
    int subject;
    double freq, dur;
  };
  const Pick picks[] = {{'A', 1, 20, 10}, {'B', 5, 5, 10},  {'C', 3, 60, 10}, {'D', 4, 20, 10},
                        {'E', 3, 20, 60}, {'F', 6, 5, 10},  {'G', 1, 20, 1},  {'H', 9, 20, 60},
                        {'I', 9, 60, 10}, {'J', 8, 5, 10}};
  int spectral_ok = 0, exp_ok = 0;
  double base_d = 0.0, base_h = 0.0;
  for (const Pick& p : picks) {
    const Trial* t = fixture().find(p.subject, Condition{p.freq, p.dur});
    if (t == nullptr) throw std::runtime_error("representative trial missing from fixture");
    auto r_of = [&](ModelKind kind, int m) {
      const FitResult fit = fit_descriptive(kind, *t, m);
      return pearson_r(predict(fit.params, t->stimulus, t->observed.grid()).samples(), t->observed.samples());
    };
    const double rs = r_of(ModelKind::spectral, 4);
    const double re = r_of(ModelKind::exponential, 0);
    const double rb = r_of(ModelKind::baseline, 0);
    spectral_ok += rs >= 0.9;
    exp_ok += re >= 0.85;
    if (p.label == 'D') base_d = rb;
    if (p.label == 'H') base_h = rb;
    detail(fmt("%c subject %d %gpps/%gs: r spectral %.3f, exponential %.3f, baseline %.3f", p.label, p.subject,
               p.freq, p.dur, rs, re, rb));
  }
  verdict(spectral_ok >= 8 && exp_ok >= 8 && base_d < 0.85 && base_h < 0.85, "C4 descriptive",
          fmt("spectral r>=0.9 on %d/10 (>=8), exponential r>=0.85 on %d/10 (>=8), baseline r on D %.3f and "
              "H %.3f (<0.85 both)",
              spectral_ok, exp_ok, base_d, base_h));
}

EvalReport run_eval(ModelKind kind, Protocol protocol) {
  EvalConfig cfg;
  cfg.m = 2;
  return evaluate(fixture(), kind, protocol, cfg);
}

void print_report(const EvalReport& r) {
  for (const FoldRow& row : r.rows) {
    if (row.failed) {
      detail(fmt("%s %s: failed (%s)", std::string(to_string(r.model)).c_str(), row.key.c_str(), row.error.c_str()));
    } else {
      detail(fmt("%s %s: mse %.3f +/- %.3f, r %.3f +/- %.3f", std::string(to_string(r.model)).c_str(),
                 row.key.c_str(), row.mse.mean, row.mse.sd, row.r.mean, row.r.sd));
    }
  }
}

// 5. Leave-one-subject-out.
void loso_criterion() {
  const auto start = Clock::now();
  const EvalReport s = run_eval(ModelKind::spectral, Protocol::subject);
  const EvalReport e = run_eval(ModelKind::exponential, Protocol::subject);
  const EvalReport b = run_eval(ModelKind::baseline, Protocol::subject);
  const double secs = seconds_since(start);
  for (const EvalReport* r : {&s, &e, &b}) print_report(*r);
  const double rs = s.aggregate.r.mean, re = e.aggregate.r.mean, rb = b.aggregate.r.mean;
  const bool failed_folds = s.failed_folds + e.failed_folds + b.failed_folds > 0;
  verdict(!failed_folds && rs >= 0.55 && s.aggregate.mse.mean <= 9.0 && rs > re && re > rb && secs < 900.0,
          "C5 loso",
          fmt("spectral m=2 r %.3f (>=0.55) mse %.3f (<=9); r order spectral %.3f > exponential %.3f > baseline "
              "%.3f; mse exponential %.3f baseline %.3f; %.0fs (<900s)",
              rs, s.aggregate.mse.mean, rs, re, rb, e.aggregate.mse.mean, b.aggregate.mse.mean, secs));
}

// 6. Leave-one-stimulus-out.
void loco_criterion() {
  const EvalReport s = run_eval(ModelKind::spectral, Protocol::stimulus);
  const EvalReport e = run_eval(ModelKind::exponential, Protocol::stimulus);
  const EvalReport b = run_eval(ModelKind::baseline, Protocol::stimulus);
  for (const EvalReport* r : {&s, &e, &b}) print_report(*r);
  const double rs = s.aggregate.r.mean;
  const double ms = s.aggregate.mse.mean, me = e.aggregate.mse.mean, mb = b.aggregate.mse.mean;
  const bool failed_folds = s.failed_folds + e.failed_folds + b.failed_folds > 0;
  verdict(!failed_folds && std::abs(rs - 0.634) <= 0.15 && ms < mb && me < mb, "C6 loco",
          fmt("spectral m=2 r %.3f (0.634 +/- 0.15); mse spectral %.3f, exponential %.3f, both < baseline %.3f", rs,
              ms, me, mb));
}

// 7. m-sweep over leave-one-subject-out folds.
void sweep_criterion() {
  const auto start = Clock::now();
  EvalConfig cfg;
  const SweepReport r = sweep_m(fixture(), 1, 8, cfg);
  const double secs = seconds_since(start);
  int monotone = 0, small_argmin = 0, failed = 0;
  for (const SweepCurve& c : r.curves) {
    if (c.failed) {
      ++failed;
      detail(fmt("subject %d: failed (%s)", c.subject_id, c.error.c_str()));
      continue;
    }
    bool mono = true;
    std::string train, val;
    for (std::size_t j = 0; j < c.points.size(); ++j) {
      if (j > 0 && c.points[j].train.mean > c.points[j - 1].train.mean) mono = false;
      train += fmt(" %.3f", c.points[j].train.mean);
      val += fmt(" %.3f", c.points[j].validation.mean);
    }
    monotone += mono;
    small_argmin += c.validation_argmin <= 2;
    detail(fmt("subject %d: train%s | validation%s | argmin train %d validation %d", c.subject_id, train.c_str(),
               val.c_str(), c.train_argmin, c.validation_argmin));
  }
  const int n = static_cast<int>(r.curves.size());
  verdict(failed == 0 && monotone == n && small_argmin >= 5, "C7 sweep",
          fmt("training mse nonincreasing for %d/%d subjects (all); validation argmin <= 2 for %d/%d (>=5); %.0fs",
              monotone, n, small_argmin, n, secs));
}

// 8. Metrics against brute-force oracles.
void metrics_criterion() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  double worst_mse = 0.0, worst_r = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = len(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = val(rng);
      b[i] = 0.3 * a[i] + val(rng);
    }
    long double sq = 0.0L, ma = 0.0L, mb = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      sq += (static_cast<long double>(a[i]) - b[i]) * (static_cast<long double>(a[i]) - b[i]);
      ma += a[i];
      mb += b[i];
    }
    const long double mse_ref = sq / n;
    ma /= n;
    mb /= n;
    long double sab = 0.0L, saa = 0.0L, sbb = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    const long double r_ref = sab / std::sqrt(saa * sbb);
    // Error relative to the oracle's magnitude, floored at 1.
    worst_mse = std::max(worst_mse, static_cast<double>(std::abs(mse(a, b) - mse_ref) / std::max(1.0L, mse_ref)));
    worst_r = std::max(worst_r, static_cast<double>(std::abs(pearson_r(a, b) - r_ref)));
  }
  bool constant_raises = false;
  try {
    pearson_r(std::vector<double>{3, 3, 3, 3}, std::vector<double>{1, 2, 3, 4});
  } catch (const DegenerateVarianceError&) {
    constant_raises = true;
  }
  verdict(worst_mse <= 1e-12 && worst_r <= 1e-12 && constant_raises, "C8 metrics",
          fmt("mse err %.1e, pearson_r err %.1e (<=1e-12); constant input %s", worst_mse, worst_r,
              constant_raises ? "raises degenerate variance" : "does NOT raise"));
}

// 9. Two identical `evaluate` invocations write identical reports.
void determinism() {
  const fs::path dir = fs::temp_directory_path() / "phosphene_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  int codes = 0;
  for (const char* name : {"run1.json", "run2.json"}) {
    const std::string out = (dir / name).string();
    const std::vector<std::string> args{"phosphene", "evaluate", "--dataset", PHOSPHENE_FIXTURE, "--model",
                                        "spectral",  "--m",      "2",         "--protocol",      "subject",
                                        "--seed",    "7",        "--format",  "json",            "--out",
                                        out};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink_out, sink_err;
    codes |= run_cli(static_cast<int>(argv.size()), argv.data(), sink_out, sink_err);
    std::ifstream in(out, std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    outputs.push_back(bytes.str());
  }
  fs::remove_all(dir);
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  verdict(codes == 0 && same, "C9 determinism",
          fmt("exit codes %s, reports %s (%zu bytes)", codes == 0 ? "0" : "nonzero",
              same ? "byte-identical" : "differ", outputs[0].size()));
}

void guarded(const char* id, const std::function<void()>& check) {
  try {
    check();
  } catch (const std::exception& e) {
    verdict(false, id, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  const auto start = Clock::now();
  guarded("C1 optimizer", optimizer);
  guarded("C2 dft", dft_accuracy);
  guarded("C8 metrics", metrics_criterion);
  guarded("C3 self-consistency", self_consistency);
  guarded("C4 descriptive", descriptive_capacity);
  guarded("C5 loso", loso_criterion);
  guarded("C6 loco", loco_criterion);
  guarded("C7 sweep", sweep_criterion);
  guarded("C9 determinism", determinism);
  std::printf("%d criterion(s) failed, %.0fs total\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
