#include "phosphene/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phosphene/crossval.hpp"
#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"
#include "phosphene/models.hpp"
#include "phosphene/plot.hpp"
#include "phosphene/report.hpp"
#include "phosphene/serialize.hpp"

namespace phosphene {

namespace {

namespace fs = std::filesystem;

// Thrown for bad flags or inputs discovered after parsing; maps to exit 2.
struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::string dataset;
  std::string model = "spectral";
  int m = 2;
  std::uint64_t seed = 0;
  int restarts = 8;
  std::optional<double> f_tol;
  std::optional<double> x_tol;
  std::optional<int> max_iters;
  unsigned threads = 0;
};

struct Selector {
  std::optional<int> subject;
  std::optional<double> freq;
  std::optional<double> dur;
};

void add_dataset(CLI::App& cmd, Common& c) {
  cmd.add_option("--dataset", c.dataset, "Dataset CSV")->required();
}

void add_model(CLI::App& cmd, Common& c) {
  cmd.add_option("--model", c.model, "spectral, exponential or baseline")->capture_default_str();
  cmd.add_option("--m", c.m, "Spectral components (1-8)")->capture_default_str();
}

void add_optimizer(CLI::App& cmd, Common& c) {
  cmd.add_option("--seed", c.seed, "Seed for random restarts")->capture_default_str();
  cmd.add_option("--restarts", c.restarts, "Random restarts (exponential, baseline)")->capture_default_str();
  cmd.add_option("--f-tol", c.f_tol, "Objective tolerance");
  cmd.add_option("--x-tol", c.x_tol, "Parameter tolerance");
  cmd.add_option("--max-iters", c.max_iters, "Iteration budget per optimizer run (default 200 per parameter)");
}

void add_selector(CLI::App& cmd, Selector& s) {
  cmd.add_option("--subject", s.subject, "Subject id");
  cmd.add_option("--freq", s.freq, "Stimulus frequency (pps)");
  cmd.add_option("--dur", s.dur, "Stimulus duration (s)");
}

ModelKind model_kind(const Common& c) {
  try {
    return parse_model_kind(c.model);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

void check_m(int m) {
  if (m < 1 || m > static_cast<int>(kMaxComponents)) {
    throw UsageError("--m must be in [1, " + std::to_string(kMaxComponents) + "]");
  }
}

FitOptions fit_options(const Common& c) {
  FitOptions o;
  o.seed = c.seed;
  if (c.restarts < 0) throw UsageError("--restarts must be >= 0");
  o.restarts = c.restarts;
  if (c.f_tol) o.optim.f_tol = *c.f_tol;
  if (c.x_tol) o.optim.x_tol = *c.x_tol;
  if (c.max_iters) {
    if (*c.max_iters < 0) throw UsageError("--max-iters must be >= 0");
    o.optim.max_iters = *c.max_iters;
  }
  return o;
}

Dataset open_dataset(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("dataset not found: " + path);
  try {
    return load_dataset(path);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::size_t> select(const Dataset& ds, const Selector& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Trial& t = ds[i];
    if (s.subject && t.subject_id != *s.subject) continue;
    if (s.freq && t.stimulus.freq_pps != *s.freq) continue;
    if (s.dur && t.stimulus.duration_s != *s.dur) continue;
    out.push_back(i);
  }
  if (out.empty()) throw UsageError("no trial matches the selection");
  return out;
}

void check_output_dir(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError("output directory does not exist: " + parent.string());
  }
}

std::string label(const Trial& t) {
  return "subject " + std::to_string(t.subject_id) + "  " + to_string(t.condition());
}

std::string score_line(const Trial& t, const Score& s) {
  std::ostringstream line;
  line << label(t) << "  mse=" << format_number(s.mse) << "  r=";
  if (s.r) {
    line << format_number(*s.r);
  } else {
    line << "n/a";
  }
  return line.str();
}

// Reads FitRecords from a document holding one record or an array of them.
std::vector<FitRecord> read_records(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("params file not found: " + path);
  const Json doc = read_json_file(path);
  std::vector<FitRecord> records;
  if (doc.is_array()) {
    for (const Json& j : doc) records.push_back(fit_record_from_json(j));
  } else {
    records.push_back(fit_record_from_json(doc));
  }
  if (records.empty()) throw FormatError(path + ": no fit records");
  return records;
}

bool record_matches(const FitRecord& r, const Trial& t) {
  if (r.subject_id && *r.subject_id != t.subject_id) return false;
  if (r.freq_pps && *r.freq_pps != t.stimulus.freq_pps) return false;
  if (r.duration_s && *r.duration_s != t.stimulus.duration_s) return false;
  return true;
}

const FitRecord& record_for(const std::vector<FitRecord>& records, const Trial& t) {
  for (const FitRecord& r : records) {
    if (record_matches(r, t)) return r;
  }
  throw Error("no parameter set in the params file applies to " + label(t));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_fit(const Common& c, const Selector& sel, const std::string& mode_name, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  const ModelKind kind = model_kind(c);
  check_m(c.m);
  if (mode_name != "descriptive" && mode_name != "predictive") {
    throw UsageError("--mode must be descriptive or predictive");
  }
  const FitOptions options = fit_options(c);
  check_output_dir(out_path);
  const Dataset ds = open_dataset(c.dataset);
  const std::vector<std::size_t> chosen = select(ds, sel);

  // Score lines share stdout only when the JSON goes to a file.
  std::ostream& log = out_path.empty() ? err : out;
  std::vector<FitRecord> records;
  bool failed = false;
  if (mode_name == "descriptive") {
    for (std::size_t i : chosen) {
      const Trial& t = ds[i];
      try {
        FitRecord rec{fit_descriptive(kind, t, c.m, options), t.subject_id, t.stimulus.freq_pps,
                      t.stimulus.duration_s};
        const TimeCourse pred = predict(rec.result.params, t.stimulus, t.observed.grid());
        log << score_line(t, score(pred.samples(), t.observed.samples())) << '\n';
        records.push_back(std::move(rec));
      } catch (const Error& e) {
        err << label(t) << ": fit failed: " << e.what() << '\n';
        failed = true;
      }
    }
  } else {
    std::vector<TrialRef> training;
    for (std::size_t i : chosen) training.push_back(std::cref(ds[i]));
    try {
      FitRecord rec{fit_predictive(kind, training, c.m, options), {}, {}, {}};
      for (const Trial& t : training) {
        const TimeCourse pred = predict(rec.result.params, t.stimulus, t.observed.grid());
        log << score_line(t, score(pred.samples(), t.observed.samples())) << '\n';
      }
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      err << "fit failed: " << e.what() << '\n';
      failed = true;
    }
  }
  if (!records.empty()) {
    Json doc;
    if (records.size() == 1) {
      doc = to_json(records.front());
    } else {
      doc = Json::array();
      for (const FitRecord& r : records) doc.push_back(to_json(r));
    }
    emit(dump(doc), out_path, out);
  }
  return failed ? kExitFailure : kExitOk;
}

int cmd_predict(const Common& c, const Selector& sel, const std::string& params_path,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  check_output_dir(out_path);
  const std::vector<FitRecord> records = read_records(params_path);
  const Dataset ds = open_dataset(c.dataset);
  const std::vector<std::size_t> chosen = select(ds, sel);

  std::ostream& log = out_path.empty() ? err : out;
  std::vector<Trial> predicted;
  for (std::size_t i : chosen) {
    const Trial& t = ds[i];
    const FitRecord& rec = record_for(records, t);
    TimeCourse pred = predict(rec.result.params, t.stimulus, t.observed.grid());
    log << score_line(t, score(pred.samples(), t.observed.samples())) << '\n';
    predicted.push_back({t.subject_id, t.stimulus, std::move(pred)});
  }
  std::ostringstream csv;
  write_dataset(csv, Dataset(std::move(predicted)));
  emit(csv.str(), out_path, out);
  return kExitOk;
}

int cmd_evaluate(const Common& c, const std::string& protocol_name, const std::string& format,
                 const std::string& out_path, std::ostream& out) {
  const ModelKind kind = model_kind(c);
  check_m(c.m);
  Protocol protocol;
  try {
    protocol = parse_protocol(protocol_name);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  if (format != "json" && format != "table") throw UsageError("--format must be json or table");
  EvalConfig config;
  config.m = c.m;
  config.fit = fit_options(c);
  config.threads = c.threads;
  check_output_dir(out_path);
  const Dataset ds = open_dataset(c.dataset);

  EvalReport report;
  try {
    report = evaluate(ds, kind, protocol, config);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  const std::string text = format == "json" ? dump(to_json(report)) : format_table(report);
  emit(text, out_path, out);
  if (!out_path.empty()) out << format_table(report);
  return report.failed_folds > 0 ? kExitFailure : kExitOk;
}

int cmd_sweep(const Common& c, int m_min, int m_max, const std::string& format, const std::string& out_path,
              std::ostream& out) {
  if (m_min < 1 || m_max > static_cast<int>(kMaxComponents) || m_min > m_max) {
    throw UsageError("need 1 <= --m-min <= --m-max <= " + std::to_string(kMaxComponents));
  }
  if (format != "csv" && format != "json" && format != "table") {
    throw UsageError("--format must be csv, json or table");
  }
  EvalConfig config;
  config.fit = fit_options(c);
  config.threads = c.threads;
  check_output_dir(out_path);
  const Dataset ds = open_dataset(c.dataset);

  SweepReport report;
  try {
    report = sweep_m(ds, m_min, m_max, config);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  std::string text;
  if (format == "csv") {
    text = format_sweep_csv(report);
  } else if (format == "json") {
    text = dump(to_json(report));
  } else {
    text = format_sweep_table(report);
  }
  emit(text, out_path, out);
  if (!out_path.empty()) out << format_sweep_table(report);
  bool failed = false;
  for (const SweepCurve& curve : report.curves) failed = failed || curve.failed;
  return failed ? kExitFailure : kExitOk;
}

int cmd_export_plot(const Common& c, const Selector& sel, const std::vector<std::string>& params_paths,
                    const std::vector<std::string>& expected_models, const std::string& out_dir,
                    std::ostream& out) {
  if (out_dir.empty()) throw UsageError("--out directory is required");
  if (!expected_models.empty() && expected_models.size() != params_paths.size()) {
    throw UsageError("give one --model per --params or none");
  }
  std::vector<ModelKind> expected;
  for (const std::string& name : expected_models) {
    try {
      expected.push_back(parse_model_kind(name));
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<std::vector<FitRecord>> sources;
  for (const std::string& p : params_paths) sources.push_back(read_records(p));
  const Dataset ds = open_dataset(c.dataset);
  const std::vector<std::size_t> chosen = select(ds, sel);
  if (chosen.size() != 1) throw UsageError("export-plot needs a selection matching exactly one trial");
  const Trial& trial = ds[chosen.front()];

  std::vector<NamedCurve> curves;
  std::vector<std::string> used_names;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const FitRecord& rec = record_for(sources[k], trial);
    const ModelKind kind = kind_of(rec.result.params);
    if (!expected.empty() && expected[k] != kind) {
      throw Error(params_paths[k] + " holds " + std::string(to_string(kind)) + " parameters, expected " +
                  std::string(to_string(expected[k])));
    }
    std::string name(to_string(kind));
    int copies = 0;
    for (const std::string& u : used_names) copies += u == name;
    used_names.push_back(name);
    if (copies > 0) name += "_" + std::to_string(copies + 1);
    curves.push_back({name, predict(rec.result.params, trial.stimulus, trial.observed.grid())});
  }

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_text_file(dir / "observed.csv", observed_csv(trial));
  for (const NamedCurve& nc : curves) write_text_file(dir / (nc.name + ".csv"), curve_csv(nc.curve));
  write_text_file(dir / "overlay.svg", overlay_svg(trial, curves));
  out << "wrote " << curves.size() + 2 << " files to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phosphene brightness models: fit, predict, cross-validate"};
  app.name("phosphene");
  app.require_subcommand(1);

  Common common;
  Selector selector;
  std::string out_path, format, mode = "descriptive", protocol = "subject", params_path;
  std::vector<std::string> params_paths, plot_models;
  int m_min = 1, m_max = 8;

  CLI::App* fit = app.add_subcommand("fit", "Fit a model to selected trials");
  add_dataset(*fit, common);
  add_model(*fit, common);
  add_selector(*fit, selector);
  add_optimizer(*fit, common);
  fit->add_option("--mode", mode, "descriptive (one fit per trial) or predictive (one fit for all)")
      ->capture_default_str();
  fit->add_option("--out", out_path, "FitResult JSON path (stdout when omitted)");

  CLI::App* pred = app.add_subcommand("predict", "Predict selected trials from saved parameters");
  add_dataset(*pred, common);
  add_selector(*pred, selector);
  pred->add_option("--params", params_path, "FitResult JSON from `fit`")->required();
  pred->add_option("--out", out_path, "Prediction CSV in the dataset layout");

  CLI::App* eval = app.add_subcommand("evaluate", "Leave-one-subject-out or leave-one-stimulus-out evaluation");
  add_dataset(*eval, common);
  add_model(*eval, common);
  add_optimizer(*eval, common);
  eval->add_option("--protocol", protocol, "subject or stimulus")->capture_default_str();
  eval->add_option("--format", format, "json or table")->default_str("table");
  eval->add_option("--out", out_path, "Report path (stdout when omitted)");
  eval->add_option("--threads", common.threads, "Worker threads (0: one per core)");

  CLI::App* sweep = app.add_subcommand("sweep", "Spectral training/validation MSE over a range of m");
  add_dataset(*sweep, common);
  add_optimizer(*sweep, common);
  sweep->add_option("--m-min", m_min, "Smallest m")->capture_default_str();
  sweep->add_option("--m-max", m_max, "Largest m")->capture_default_str();
  sweep->add_option("--format", format, "csv, json or table")->default_str("csv");
  sweep->add_option("--out", out_path, "Report path (stdout when omitted)");
  sweep->add_option("--threads", common.threads, "Worker threads (0: one per core)");

  CLI::App* plot = app.add_subcommand("export-plot", "Write observed and model curves as CSV plus an SVG overlay");
  add_dataset(*plot, common);
  add_selector(*plot, selector);
  plot->add_option("--params", params_paths, "FitResult JSON, repeatable")->required();
  plot->add_option("--model", plot_models, "Expected model kind for each --params, repeatable");
  plot->add_option("--out", out_path, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run `phosphene --help` for usage\n";
    return kExitUsage;
  }

  if (format.empty()) format = *sweep ? "csv" : "table";
  try {
    if (*fit) return cmd_fit(common, selector, mode, out_path, out, err);
    if (*pred) return cmd_predict(common, selector, params_path, out_path, out, err);
    if (*eval) return cmd_evaluate(common, protocol, format, out_path, out);
    if (*sweep) return cmd_sweep(common, m_min, m_max, format, out_path, out);
    if (*plot) return cmd_export_plot(common, selector, params_paths, plot_models, out_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace phosphene
