#include "phosphene/metrics.hpp"

#include <cmath>

#include "phosphene/errors.hpp"

namespace phosphene {

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("mse: length mismatch");
  if (a.empty()) throw ArgumentError("mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("pearson_r: length mismatch");
  if (a.size() < 2) throw ArgumentError("pearson_r: need at least two samples");
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw DegenerateVarianceError();
  const double r = sab / std::sqrt(saa * sbb);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

Score score(std::span<const double> predicted, std::span<const double> observed) {
  Score s;
  s.mse = mse(predicted, observed);
  s.n = predicted.size();
  if (s.n >= 2) {
    try {
      s.r = pearson_r(predicted, observed);
    } catch (const DegenerateVarianceError&) {
      s.r.reset();
    }
  }
  return s;
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace phosphene
