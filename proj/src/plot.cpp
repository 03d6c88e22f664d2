#include "phosphene/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace phosphene {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kMargin = 48.0;

const char* const kPalette[] = {"#000000", "#1f5fbf", "#e07b00", "#2a9d3a", "#b5179e", "#6a4c93"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// SVG-safe copy of a label.
std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string curve_csv(const TimeCourse& curve) {
  std::ostringstream out;
  out << "time_s,brightness\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_number(curve.time_at(i)) << ',' << format_number(curve[i]) << '\n';
  }
  return out.str();
}

std::string observed_csv(const Trial& trial) {
  std::ostringstream out;
  write_dataset(out, Dataset({trial}));
  return out.str();
}

std::string overlay_svg(const Trial& trial, const std::vector<NamedCurve>& models) {
  std::vector<NamedCurve> curves{{"observed", trial.observed}};
  curves.insert(curves.end(), models.begin(), models.end());

  double t_min = trial.observed.t0(), t_max = trial.observed.last_time();
  double y_min = 0.0, y_max = 1.0;
  for (const NamedCurve& c : curves) {
    t_min = std::min(t_min, c.curve.t0());
    t_max = std::max(t_max, c.curve.last_time());
    for (double v : c.curve.samples()) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (t_max <= t_min) t_max = t_min + 1.0;
  const double plot_w = kWidth - 2.0 * kMargin;
  const double plot_h = kHeight - 2.0 * kMargin;
  auto x_of = [&](double t) { return kMargin + (t - t_min) / (t_max - t_min) * plot_w; };
  auto y_of = [&](double v) { return kHeight - kMargin - (v - y_min) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double bar_x0 = x_of(std::max(0.0, t_min));
  const double bar_x1 = x_of(std::min(trial.stimulus.duration_s, t_max));
  svg << "<rect class=\"stimulus\" x=\"" << px(bar_x0) << "\" y=\"" << px(kMargin - 14.0) << "\" width=\""
      << px(std::max(0.0, bar_x1 - bar_x0)) << "\" height=\"6\" fill=\"#999999\"/>\n";

  svg << "<g class=\"axes\" stroke=\"#444444\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << px(kMargin) << "\" y1=\"" << px(kHeight - kMargin) << "\" x2=\""
      << px(kWidth - kMargin) << "\" y2=\"" << px(kHeight - kMargin) << "\"/>\n";
  svg << "<line x1=\"" << px(kMargin) << "\" y1=\"" << px(kMargin) << "\" x2=\"" << px(kMargin)
      << "\" y2=\"" << px(kHeight - kMargin) << "\"/>\n";
  svg << "</g>\n";
  svg << "<text x=\"" << px(kWidth / 2.0) << "\" y=\"" << px(kHeight - 12.0)
      << "\" font-size=\"12\" text-anchor=\"middle\">time (s)</text>\n";
  svg << "<text x=\"14\" y=\"" << px(kHeight / 2.0) << "\" font-size=\"12\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 14 " << px(kHeight / 2.0) << ")\">brightness</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const NamedCurve& c = curves[k];
    const char* color = k == 0 ? "#a0a0a0" : kPalette[(k - 1) % std::size(kPalette)];
    svg << "<polyline class=\"curve\" data-name=\"" << escape(c.name) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"" << (k == 0 ? "3" : "1.5") << "\" points=\"";
    for (std::size_t i = 0; i < c.curve.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << px(x_of(c.curve.time_at(i))) << ',' << px(y_of(c.curve[i]));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << px(kWidth - kMargin - 4.0) << "\" y=\"" << px(kMargin + 14.0 * static_cast<double>(k))
        << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(c.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace phosphene
