#include "phosphene/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace phosphene {

namespace {

Json mean_sd_json(const MeanSd& v) {
  return {{"mean", v.mean}, {"sd", v.sd}, {"count", v.count}};
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string cell(const MeanSd& v) {
  if (v.count == 0) return "n/a";
  return fixed3(v.mean) + " +/- " + fixed3(v.sd);
}

// Left-aligns the first column and right-aligns the rest.
std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

Json to_json(const EvalReport& report) {
  Json j;
  j["protocol"] = std::string(to_string(report.protocol));
  j["model"] = std::string(to_string(report.model));
  if (report.model == ModelKind::spectral) j["m"] = report.m;
  j["seed"] = report.seed;
  Json rows = Json::array();
  for (const FoldRow& row : report.rows) {
    Json r;
    r["held_out"] = row.key;
    r["fold_hash"] = row.hash;
    r["n"] = row.n;
    if (row.failed) {
      r["failed"] = true;
      r["error"] = row.error;
    } else {
      r["mse"] = mean_sd_json(row.mse);
      r["r"] = mean_sd_json(row.r);
      r["skipped"] = row.skipped;
      r["train_objective"] = row.train_objective;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["aggregate"] = {{"mse", mean_sd_json(report.aggregate.mse)},
                    {"r", mean_sd_json(report.aggregate.r)},
                    {"n", report.aggregate.n},
                    {"skipped", report.aggregate.skipped}};
  j["failed_folds"] = report.failed_folds;
  return j;
}

std::string format_table(const EvalReport& report) {
  std::string title = "model: " + std::string(to_string(report.model));
  if (report.model == ModelKind::spectral) title += " (m=" + std::to_string(report.m) + ")";
  title += "  protocol: " + std::string(to_string(report.protocol));
  title += "  seed: " + std::to_string(report.seed) + "\n";

  std::vector<std::vector<std::string>> rows;
  rows.push_back({report.protocol == Protocol::subject ? "subject" : "condition", "n", "skipped", "MSE", "r"});
  for (const FoldRow& row : report.rows) {
    if (row.failed) {
      rows.push_back({row.key, std::to_string(row.n), "-", "failed: " + row.error, ""});
    } else {
      rows.push_back({row.key, std::to_string(row.n), std::to_string(row.skipped), cell(row.mse), cell(row.r)});
    }
  }
  const Aggregate& a = report.aggregate;
  rows.push_back({"Average", std::to_string(a.n), std::to_string(a.skipped), cell(a.mse), cell(a.r)});
  std::string out = title + render(rows);
  if (report.failed_folds > 0) out += std::to_string(report.failed_folds) + " fold(s) failed\n";
  return out;
}

Json to_json(const SweepReport& report) {
  Json j;
  j["m_min"] = report.m_min;
  j["m_max"] = report.m_max;
  j["seed"] = report.seed;
  Json curves = Json::array();
  for (const SweepCurve& c : report.curves) {
    Json cj;
    cj["subject_id"] = c.subject_id;
    if (c.failed) {
      cj["failed"] = true;
      cj["error"] = c.error;
    } else {
      Json points = Json::array();
      for (const SweepPoint& p : c.points) {
        points.push_back({{"m", p.m},
                          {"train_mse", p.train.mean},
                          {"train_se", p.train_se()},
                          {"validation_mse", p.validation.mean},
                          {"validation_se", p.validation_se()}});
      }
      cj["points"] = std::move(points);
      cj["train_argmin"] = c.train_argmin;
      cj["validation_argmin"] = c.validation_argmin;
    }
    curves.push_back(std::move(cj));
  }
  j["curves"] = std::move(curves);
  return j;
}

std::string format_sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "subject_id,m,train_mse,train_se,validation_mse,validation_se\n";
  for (const SweepCurve& c : report.curves) {
    for (const SweepPoint& p : c.points) {
      out << c.subject_id << ',' << p.m << ',' << format_number(p.train.mean) << ','
          << format_number(p.train_se()) << ',' << format_number(p.validation.mean) << ','
          << format_number(p.validation_se()) << '\n';
    }
  }
  return out.str();
}

std::string format_sweep_table(const SweepReport& report) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"subject"};
  for (int m = report.m_min; m <= report.m_max; ++m) header.push_back("m=" + std::to_string(m));
  header.push_back("argmin train");
  header.push_back("argmin validation");
  rows.push_back(std::move(header));
  for (const SweepCurve& c : report.curves) {
    std::vector<std::string> row{std::to_string(c.subject_id)};
    if (c.failed) {
      row.push_back("failed: " + c.error);
    } else {
      for (const SweepPoint& p : c.points) row.push_back(fixed3(p.train.mean) + "/" + fixed3(p.validation.mean));
      row.push_back(std::to_string(c.train_argmin));
      row.push_back(std::to_string(c.validation_argmin));
    }
    rows.push_back(std::move(row));
  }
  return "cells: training MSE/validation MSE\n" + render(rows);
}

}  // namespace phosphene
