#include "phosphene/serialize.hpp"

#include <fstream>

#include "phosphene/errors.hpp"

namespace phosphene {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw FormatError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::array<double, 5> five_numbers(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != 5) {
    throw FormatError(std::string("field \"") + key + "\" must be an array of 5 numbers");
  }
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) {
    if (!v[i].is_number()) throw FormatError(std::string("field \"") + key + "\" must hold numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

FitMode parse_mode(const std::string& s) {
  if (s == "descriptive") return FitMode::descriptive;
  if (s == "predictive") return FitMode::predictive;
  throw FormatError("unknown fit mode \"" + s + "\"");
}

}  // namespace

Json to_json(const SpectralParams& p) {
  Json j;
  j["k1"] = p.k1;
  j["t1"] = p.t1;
  j["k2"] = p.k2;
  j["t3"] = p.t3;
  Json comps = Json::array();
  for (const auto& c : p.components) {
    comps.push_back({{"freq_hz", c.freq_hz}, {"amplitude", c.amplitude}, {"phase", c.phase}});
  }
  j["components"] = std::move(comps);
  if (p.t3_anchor == ExtinctionAnchor::offset) j["t3_anchor"] = "offset";
  return j;
}

Json to_json(const ExpParams& p) {
  return {{"k", p.k}, {"t", p.t}};
}

Json to_json(const BaselineParams& p) {
  return {{"t_per", p.t_per}, {"t_pfo", p.t_pfo}, {"t_pfd", p.t_pfd}, {"k", p.k}};
}

Json to_json(const ModelParams& p) {
  return std::visit([](const auto& v) { return to_json(v); }, p);
}

SpectralParams spectral_params_from_json(const Json& j) {
  SpectralParams p;
  p.k1 = number(j, "k1");
  p.t1 = number(j, "t1");
  p.k2 = number(j, "k2");
  p.t3 = number(j, "t3");
  const Json& comps = field(j, "components");
  if (!comps.is_array()) throw FormatError("field \"components\" must be an array");
  for (const Json& c : comps) {
    p.components.push_back({number(c, "freq_hz"), number(c, "amplitude"), number(c, "phase")});
  }
  if (j.contains("t3_anchor")) {
    const std::string anchor = text(j, "t3_anchor");
    if (anchor == "offset") {
      p.t3_anchor = ExtinctionAnchor::offset;
    } else if (anchor != "onset") {
      throw FormatError("unknown t3_anchor \"" + anchor + "\"");
    }
  }
  p.validate();
  return p;
}

ExpParams exp_params_from_json(const Json& j) {
  ExpParams p;
  p.k = five_numbers(j, "k");
  p.t = five_numbers(j, "t");
  p.validate();
  return p;
}

BaselineParams baseline_params_from_json(const Json& j) {
  BaselineParams p{number(j, "t_per"), number(j, "t_pfo"), number(j, "t_pfd"), number(j, "k")};
  p.validate();
  return p;
}

ModelParams model_params_from_json(ModelKind kind, const Json& j) {
  switch (kind) {
    case ModelKind::spectral:
      return spectral_params_from_json(j);
    case ModelKind::exponential:
      return exp_params_from_json(j);
    case ModelKind::baseline:
      return baseline_params_from_json(j);
  }
  throw ArgumentError("unknown model kind");
}

Json to_json(const FitRecord& record) {
  const FitResult& r = record.result;
  Json j;
  j["model"] = std::string(to_string(kind_of(r.params)));
  j["mode"] = std::string(to_string(r.mode));
  if (record.subject_id) j["subject_id"] = *record.subject_id;
  if (record.freq_pps) j["freq_pps"] = *record.freq_pps;
  if (record.duration_s) j["duration_s"] = *record.duration_s;
  j["params"] = to_json(r.params);
  j["objective"] = r.objective;
  j["initial_objective"] = r.initial_objective;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["starts"] = r.starts;
  j["converged"] = r.converged;
  j["method"] = r.method;
  return j;
}

FitRecord fit_record_from_json(const Json& j) {
  FitRecord record;
  FitResult& r = record.result;
  const ModelKind kind = parse_model_kind(text(j, "model"));
  r.params = model_params_from_json(kind, field(j, "params"));
  r.mode = parse_mode(text(j, "mode"));
  r.objective = number(j, "objective");
  if (j.contains("initial_objective")) r.initial_objective = number(j, "initial_objective");
  if (j.contains("iterations")) r.iterations = static_cast<int>(number(j, "iterations"));
  if (j.contains("evaluations")) r.evaluations = static_cast<int>(number(j, "evaluations"));
  if (j.contains("starts")) r.starts = static_cast<int>(number(j, "starts"));
  if (j.contains("converged")) {
    if (!j["converged"].is_boolean()) throw FormatError("field \"converged\" must be a boolean");
    r.converged = j["converged"].get<bool>();
  }
  if (j.contains("method")) r.method = text(j, "method");
  if (j.contains("subject_id")) record.subject_id = static_cast<int>(number(j, "subject_id"));
  if (j.contains("freq_pps")) record.freq_pps = number(j, "freq_pps");
  if (j.contains("duration_s")) record.duration_s = number(j, "duration_s");
  return record;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace phosphene
