#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "phosphene/fit.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

using Json = nlohmann::ordered_json;

Json to_json(const SpectralParams& p);
Json to_json(const ExpParams& p);
Json to_json(const BaselineParams& p);
Json to_json(const ModelParams& p);

// Throw FormatError on missing or mistyped fields and ParameterError when
// the decoded parameters are invalid.
SpectralParams spectral_params_from_json(const Json& j);
ExpParams exp_params_from_json(const Json& j);
BaselineParams baseline_params_from_json(const Json& j);
ModelParams model_params_from_json(ModelKind kind, const Json& j);

// A FitResult document: {"model", "mode", "params", "objective", ...}, plus
// the trial it was fit to when there was exactly one.
struct FitRecord {
  FitResult result;
  std::optional<int> subject_id;
  std::optional<double> freq_pps;
  std::optional<double> duration_s;
};

Json to_json(const FitRecord& record);
FitRecord fit_record_from_json(const Json& j);

// Pretty-printed with a trailing newline; doubles use the shortest
// round-trip representation so output is stable across runs.
std::string dump(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace phosphene
