#include "phosphene/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "phosphene/errors.hpp"

namespace phosphene {

namespace {

constexpr const char* kHeader = "subject_id,freq_pps,duration_s,time_s,brightness";

// Digitized curves are extended this far past stimulus offset.
constexpr double kTrailingWindowS = 10.0;
// A curve whose last sample is within this fraction of its peak counts as
// having returned to zero.
constexpr double kReturnedToZeroFraction = 0.02;

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no, const char* column) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw FormatError("line " + std::to_string(line_no) + ": cannot parse " + column +
                      " from '" + std::string(text) + "'");
  }
  return value;
}

using TrialKey = std::tuple<int, double, double>;

struct RawTrial {
  std::vector<double> times;
  std::vector<double> values;
};

// Converts the raw (time, value) rows of one trial to a uniform grid.
TimeCourse to_uniform(const RawTrial& raw, double fallback_dt) {
  const auto& t = raw.times;
  const std::size_t n = t.size();
  if (n == 1) return TimeCourse(t.front(), fallback_dt, raw.values);

  const double mean_step = (t.back() - t.front()) / static_cast<double>(n - 1);
  double min_step = mean_step;
  bool uniform = true;
  for (std::size_t i = 1; i < n; ++i) {
    const double step = t[i] - t[i - 1];
    min_step = std::min(min_step, step);
    if (std::abs(step - mean_step) > 1e-6 * mean_step) uniform = false;
  }
  if (uniform) return TimeCourse(t.front(), mean_step, raw.values);

  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((t.back() - t.front()) / min_step + 1e-9)) + 1;
  out.reserve(count);
  std::size_t j = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double ti = t.front() + static_cast<double>(i) * min_step;
    while (j + 2 < n && t[j + 1] <= ti) ++j;
    const double frac = std::clamp((ti - t[j]) / (t[j + 1] - t[j]), 0.0, 1.0);
    out.push_back(raw.values[j] + (raw.values[j + 1] - raw.values[j]) * frac);
  }
  return TimeCourse(t.front(), min_step, std::move(out));
}

// Zero-pads so that the grid starts at or before onset, and extends past
// offset when the curve has already returned to zero.
TimeCourse align_window(const TimeCourse& tc, double duration_s) {
  const double dt = tc.dt();
  std::vector<double> samples(tc.samples().begin(), tc.samples().end());
  double t0 = tc.t0();

  if (t0 > 0.0) {
    const auto lead = static_cast<std::size_t>(std::ceil(t0 / dt - 1e-9));
    samples.insert(samples.begin(), lead, 0.0);
    t0 -= static_cast<double>(lead) * dt;
  }

  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  const double wanted_end = duration_s + kTrailingWindowS;
  const double last = t0 + static_cast<double>(samples.size() - 1) * dt;
  if (last < wanted_end - 1e-9 && std::abs(samples.back()) <= kReturnedToZeroFraction * peak) {
    const auto extra = static_cast<std::size_t>(std::ceil((wanted_end - last) / dt - 1e-9));
    samples.insert(samples.end(), extra, 0.0);
  }
  return TimeCourse(t0, dt, std::move(samples));
}

}  // namespace

std::size_t Grid::snap(double t) const {
  const double pos = (t - t0) / dt;
  if (!(pos > 0.0)) return 0;
  const double idx = std::ceil(pos - 0.5);
  if (idx >= static_cast<double>(size)) return size;
  return static_cast<std::size_t>(idx);
}

TimeCourse::TimeCourse(double t0, double dt, std::vector<double> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ArgumentError("time course dt must be > 0");
  if (!std::isfinite(t0_)) throw ArgumentError("time course t0 must be finite");
  if (samples_.empty()) throw ArgumentError("time course must hold at least one sample");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw ArgumentError("time course samples must be finite");
  }
}

std::string to_string(const Condition& c) {
  return format_number(c.freq_pps) + "pps/" + format_number(c.duration_s) + "s";
}

Dataset::Dataset(std::vector<Trial> trials) : trials_(std::move(trials)) {
  if (trials_.empty()) throw DataError("no trials");
  std::stable_sort(trials_.begin(), trials_.end(), [](const Trial& a, const Trial& b) {
    return std::tie(a.subject_id, a.stimulus.freq_pps, a.stimulus.duration_s) <
           std::tie(b.subject_id, b.stimulus.freq_pps, b.stimulus.duration_s);
  });
  const double dt = trials_.front().observed.dt();
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    const Trial& t = trials_[i];
    if (std::abs(t.observed.dt() - dt) > 1e-9 * dt) {
      throw DataError("trials do not share a sample spacing");
    }
    if (i > 0 && trials_[i - 1].subject_id == t.subject_id &&
        trials_[i - 1].condition() == t.condition()) {
      throw DataError("duplicate trial for subject " + std::to_string(t.subject_id) + " at " +
                      to_string(t.condition()));
    }
  }
}

std::vector<int> Dataset::subjects() const {
  std::vector<int> out;
  for (const Trial& t : trials_) {
    if (out.empty() || out.back() != t.subject_id) out.push_back(t.subject_id);
  }
  return out;
}

std::vector<Condition> Dataset::conditions() const {
  std::vector<Condition> out;
  for (const Trial& t : trials_) out.push_back(t.condition());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> Dataset::indices_for_subject(int subject_id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    if (trials_[i].subject_id == subject_id) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Dataset::indices_for_condition(const Condition& c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    if (trials_[i].condition() == c) out.push_back(i);
  }
  return out;
}

const Trial* Dataset::find(int subject_id, const Condition& c) const {
  for (const Trial& t : trials_) {
    if (t.subject_id == subject_id && t.condition() == c) return &t;
  }
  return nullptr;
}

Dataset parse_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing header");
  std::string_view header = trim(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  {
    const auto cols = split_commas(header);
    const auto expected = split_commas(kHeader);
    bool ok = cols.size() == expected.size();
    for (std::size_t i = 0; ok && i < cols.size(); ++i) ok = trim(cols[i]) == expected[i];
    if (!ok) {
      throw FormatError("expected header '" + std::string(kHeader) + "', got '" +
                        std::string(header) + "'");
    }
  }

  std::map<TrialKey, RawTrial> grouped;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto fields = split_commas(row);
    if (fields.size() != 5) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 5 columns, got " +
                        std::to_string(fields.size()));
    }
    const int subject = parse_field<int>(fields[0], line_no, "subject_id");
    const double freq = parse_field<double>(fields[1], line_no, "freq_pps");
    const double dur = parse_field<double>(fields[2], line_no, "duration_s");
    const double time = parse_field<double>(fields[3], line_no, "time_s");
    const double value = parse_field<double>(fields[4], line_no, "brightness");
    if (!std::isfinite(value)) {
      throw DataError("line " + std::to_string(line_no) + ": non-finite brightness");
    }
    if (!std::isfinite(time) || !(freq > 0.0) || !(dur > 0.0) || !std::isfinite(freq) ||
        !std::isfinite(dur)) {
      throw DataError("line " + std::to_string(line_no) + ": invalid time or stimulus");
    }
    RawTrial& raw = grouped[{subject, freq, dur}];
    if (!raw.times.empty()) {
      if (time == raw.times.back()) {
        throw DataError("line " + std::to_string(line_no) + ": duplicate sample");
      }
      if (time < raw.times.back()) {
        throw DataError("line " + std::to_string(line_no) + ": non-monotonic time within trial");
      }
    }
    raw.times.push_back(time);
    raw.values.push_back(value);
  }
  if (grouped.empty()) throw DataError("no trials");

  // Single-sample trials borrow the spacing of the others.
  double common_dt = kCanonicalDt;
  for (const auto& [key, raw] : grouped) {
    if (raw.times.size() > 1) {
      common_dt = to_uniform(raw, kCanonicalDt).dt();
      break;
    }
  }

  std::vector<Trial> trials;
  trials.reserve(grouped.size());
  for (const auto& [key, raw] : grouped) {
    const auto& [subject, freq, dur] = key;
    Trial trial;
    trial.subject_id = subject;
    trial.stimulus = Stimulus{freq, dur, std::nullopt};
    trial.observed = align_window(to_uniform(raw, common_dt), dur);
    trials.push_back(std::move(trial));
  }
  return Dataset(std::move(trials));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  // Avoid emitting "-0".
  if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return std::string(buf + 1);
  return buf;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << kHeader << '\n';
  for (const Trial& trial : dataset.trials()) {
    const std::string prefix = std::to_string(trial.subject_id) + ',' +
                               format_number(trial.stimulus.freq_pps) + ',' +
                               format_number(trial.stimulus.duration_s) + ',';
    for (std::size_t i = 0; i < trial.observed.size(); ++i) {
      out << prefix << format_number(trial.observed.time_at(i)) << ','
          << format_number(trial.observed[i]) << '\n';
    }
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write dataset '" + path.string() + "'");
  write_dataset(out, dataset);
}

TimeCourse resample(const TimeCourse& tc, double dt_out) {
  if (!(dt_out > 0.0) || !std::isfinite(dt_out)) throw ArgumentError("resample: dt_out must be > 0");
  const double span = tc.last_time() - tc.t0();
  const auto count = static_cast<std::size_t>(std::floor(span / dt_out + 1e-9)) + 1;
  const double ratio = dt_out / tc.dt();
  const auto samples = tc.samples();
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double pos = static_cast<double>(j) * ratio;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= samples.size()) {
      out.push_back(samples.back());
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out.push_back(frac == 0.0 ? samples[i] : samples[i] + (samples[i + 1] - samples[i]) * frac);
  }
  return TimeCourse(tc.t0(), dt_out, std::move(out));
}

}  // namespace phosphene
