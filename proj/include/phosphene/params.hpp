#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace phosphene {

// Largest number of retained spectral components a SpectralParams may hold.
inline constexpr std::size_t kMaxComponents = 8;

// One term of a real cosine series: amplitude * cos(2 pi freq t + phase).
struct SpectrumComponent {
  double freq_hz = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // radians, in [-pi, pi)

  friend bool operator==(const SpectrumComponent&, const SpectrumComponent&) = default;
};

// What the extinction time t3 is measured from.
enum class ExtinctionAnchor {
  onset,   // t3 is an absolute time after stimulus onset
  offset,  // t3 is an offset from stimulus end (used by cross-condition fits)
};

struct SpectralParams {
  double k1 = 10.0;  // onset peak brightness
  double t1 = 1.0;   // time of the onset peak, seconds
  std::vector<SpectrumComponent> components;
  double k2 = 0.0;  // bias of the decay series
  double t3 = 0.0;  // extinction time, seconds
  ExtinctionAnchor t3_anchor = ExtinctionAnchor::onset;

  // Throws ParameterError when an invariant does not hold.
  void validate() const;
  friend bool operator==(const SpectralParams&, const SpectralParams&) = default;
};

struct ExpParams {
  // k[0] rise slope, k[1] first decay rate (scaled by f^1/4), k[2] second
  // decay rate, k[3] rebound magnitude, k[4] rebound angular frequency.
  std::array<double, 5> k{};
  // Segment boundaries t1..t5 in seconds, nondecreasing.
  std::array<double, 5> t{};

  void validate() const;
  friend bool operator==(const ExpParams&, const ExpParams&) = default;
};

struct BaselineParams {
  double t_per = 1.0;  // persistence duration
  double t_pfo = 0.0;  // fading onset
  double t_pfd = 1.0;  // fading duration
  double k = 1.0;      // brightness scale

  void validate() const;
  friend bool operator==(const BaselineParams&, const BaselineParams&) = default;
};

enum class ModelKind { spectral, exponential, baseline };

using ModelParams = std::variant<SpectralParams, ExpParams, BaselineParams>;

ModelKind kind_of(const ModelParams& params);
std::string_view to_string(ModelKind kind);
// Throws ArgumentError for unknown names.
ModelKind parse_model_kind(std::string_view name);

}  // namespace phosphene
