#include "phosphene/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phosphene/errors.hpp"

namespace phosphene {

void SpectralParams::validate() const {
  if (!(k1 > 0.0) || !std::isfinite(k1)) throw ParameterError("spectral: k1 must be > 0");
  if (!(t1 > 0.0) || !std::isfinite(t1)) throw ParameterError("spectral: t1 must be > 0");
  if (!std::isfinite(k2) || !std::isfinite(t3)) throw ParameterError("spectral: k2 and t3 must be finite");
  if (t3_anchor == ExtinctionAnchor::onset && !(t3 > t1)) {
    throw ParameterError("spectral: t3 must be greater than t1");
  }
  if (components.size() > kMaxComponents) {
    throw ParameterError("spectral: at most " + std::to_string(kMaxComponents) + " components");
  }
  for (const auto& c : components) {
    if (!(c.amplitude >= 0.0) || !(c.freq_hz >= 0.0) || !std::isfinite(c.amplitude) ||
        !std::isfinite(c.freq_hz)) {
      throw ParameterError("spectral: component amplitude and frequency must be >= 0");
    }
    if (!(c.phase >= -std::numbers::pi) || !(c.phase < std::numbers::pi)) {
      throw ParameterError("spectral: component phase must lie in [-pi, pi)");
    }
  }
}

void ExpParams::validate() const {
  for (double v : k) {
    if (!std::isfinite(v)) throw ParameterError("exponential: k values must be finite");
  }
  if (!(k[0] > 0.0)) throw ParameterError("exponential: k1 must be > 0");
  if (k[1] < 0.0 || k[2] < 0.0) throw ParameterError("exponential: k2 and k3 must be >= 0");
  if (!std::isfinite(t[0]) || t[0] < 0.0) throw ParameterError("exponential: t1 must be >= 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < t[i - 1]) {
      throw ParameterError("exponential: t1..t5 must be nondecreasing");
    }
  }
}

void BaselineParams::validate() const {
  if (!(t_per > 0.0) || !std::isfinite(t_per)) throw ParameterError("baseline: t_per must be > 0");
  if (!(t_pfd > 0.0) || !std::isfinite(t_pfd)) throw ParameterError("baseline: t_pfd must be > 0");
  if (!(t_pfo >= 0.0) || !std::isfinite(t_pfo)) throw ParameterError("baseline: t_pfo must be >= 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("baseline: k must be > 0");
}

ModelKind kind_of(const ModelParams& params) {
  switch (params.index()) {
    case 0:
      return ModelKind::spectral;
    case 1:
      return ModelKind::exponential;
    default:
      return ModelKind::baseline;
  }
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::spectral:
      return "spectral";
    case ModelKind::exponential:
      return "exponential";
    case ModelKind::baseline:
      return "baseline";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "spectral") return ModelKind::spectral;
  if (name == "exponential" || name == "exp") return ModelKind::exponential;
  if (name == "baseline") return ModelKind::baseline;
  throw ArgumentError("unknown model '" + std::string(name) +
                      "' (expected spectral, exponential or baseline)");
}

}  // namespace phosphene
