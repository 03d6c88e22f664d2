#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phosphene {

// Sample spacing of the canonical dataset, in seconds.
inline constexpr double kCanonicalDt = 0.25;

// A uniform time grid: sample i sits at t0 + i * dt.
struct Grid {
  double t0 = 0.0;
  double dt = kCanonicalDt;
  std::size_t size = 0;

  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  // Exclusive end, i.e. the time one step past the last sample.
  double end() const { return time_at(size); }
  // Nearest grid index to t, ties resolved toward the earlier index, clamped
  // to [0, size].
  std::size_t snap(double t) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

// Uniformly sampled brightness trajectory. Times are implicit.
class TimeCourse {
 public:
  TimeCourse() = default;
  // Throws ArgumentError if dt <= 0, samples is empty or holds a non-finite
  // value.
  TimeCourse(double t0, double dt, std::vector<double> samples);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return samples_.size(); }
  double time_at(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
  double last_time() const { return time_at(samples_.size() - 1); }
  Grid grid() const { return Grid{t0_, dt_, samples_.size()}; }

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  friend bool operator==(const TimeCourse&, const TimeCourse&) = default;

 private:
  double t0_ = 0.0;
  double dt_ = kCanonicalDt;
  std::vector<double> samples_;
};

// Pulse-train descriptor. Ordering and equality ignore the label.
struct Stimulus {
  double freq_pps = 20.0;
  double duration_s = 10.0;
  std::optional<std::string> amplitude_label;

  friend bool operator==(const Stimulus& a, const Stimulus& b) {
    return a.freq_pps == b.freq_pps && a.duration_s == b.duration_s;
  }
  friend std::partial_ordering operator<=>(const Stimulus& a, const Stimulus& b) {
    if (auto c = a.freq_pps <=> b.freq_pps; c != 0) return c;
    return a.duration_s <=> b.duration_s;
  }
};

// Condition key used by the leave-one-stimulus-out protocol.
struct Condition {
  double freq_pps = 0.0;
  double duration_s = 0.0;

  friend auto operator<=>(const Condition&, const Condition&) = default;
};

std::string to_string(const Condition& c);

struct Trial {
  int subject_id = 0;
  Stimulus stimulus;
  TimeCourse observed;

  Condition condition() const { return {stimulus.freq_pps, stimulus.duration_s}; }
  friend bool operator==(const Trial&, const Trial&) = default;
};

// Immutable collection of trials sorted by (subject, freq, duration).
class Dataset {
 public:
  Dataset() = default;
  // Throws DataError on duplicate (subject, condition) pairs, mixed dt or an
  // empty trial list.
  explicit Dataset(std::vector<Trial> trials);

  std::span<const Trial> trials() const { return trials_; }
  std::size_t size() const { return trials_.size(); }
  const Trial& operator[](std::size_t i) const { return trials_[i]; }
  double dt() const { return trials_.front().observed.dt(); }

  std::vector<int> subjects() const;
  std::vector<Condition> conditions() const;
  // Indices into trials(), in storage order.
  std::vector<std::size_t> indices_for_subject(int subject_id) const;
  std::vector<std::size_t> indices_for_condition(const Condition& c) const;
  const Trial* find(int subject_id, const Condition& c) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Trial> trials_;
};

// CSV ingestion. Header `subject_id,freq_pps,duration_s,time_s,brightness`.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::istream& in);

// Emits the same CSV layout: trials in dataset order, times ascending, six
// significant digits.
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Six-significant-digit formatting shared by every CSV writer.
std::string format_number(double value);

// Linear interpolation onto a grid of spacing dt_out covering
// [tc.t0(), tc.last_time()].
TimeCourse resample(const TimeCourse& tc, double dt_out);

}  // namespace phosphene
