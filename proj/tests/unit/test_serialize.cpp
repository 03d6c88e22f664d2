#include <gtest/gtest.h>

#include <filesystem>

#include "phosphene/errors.hpp"
#include "phosphene/serialize.hpp"

using namespace phosphene;

namespace {

SpectralParams spectral_sample() {
  SpectralParams p;
  p.components = {{0.1, 2.5, -0.75}, {0.0375, 1.0 / 3.0, 3.0}};
  p.k2 = 3.1;
  p.t3 = 17.25;
  return p;
}

}  // namespace

TEST(Serialize, SpectralLayout) {
  const Json j = to_json(spectral_sample());
  EXPECT_EQ(j["k1"], 10.0);
  EXPECT_EQ(j["t1"], 1.0);
  EXPECT_EQ(j["components"].size(), 2u);
  EXPECT_EQ(j["components"][0]["freq_hz"], 0.1);
  EXPECT_FALSE(j.contains("t3_anchor"));
  EXPECT_EQ(spectral_params_from_json(j), spectral_sample());

  SpectralParams off = spectral_sample();
  off.t3_anchor = ExtinctionAnchor::offset;
  off.t3 = -2.0;
  const Json jo = to_json(off);
  EXPECT_EQ(jo["t3_anchor"], "offset");
  EXPECT_EQ(spectral_params_from_json(jo), off);
}

TEST(Serialize, ExpAndBaselineLayouts) {
  ExpParams e;
  e.k = {8.0, 0.01, 0.4, 1.2, 1.5};
  e.t = {0.0, 1.0, 10.0, 12.0, 14.0};
  const Json je = to_json(e);
  EXPECT_EQ(je["k"].size(), 5u);
  EXPECT_EQ(je["t"][2], 10.0);
  EXPECT_EQ(exp_params_from_json(je), e);

  const BaselineParams b{2.0, 0.5, 7.25, 4.125};
  const Json jb = to_json(b);
  EXPECT_EQ(jb.dump(), R"({"t_per":2.0,"t_pfo":0.5,"t_pfd":7.25,"k":4.125})");
  EXPECT_EQ(baseline_params_from_json(jb), b);
}

TEST(Serialize, FitRecordRoundTrip) {
  FitRecord rec;
  rec.result.params = spectral_sample();
  rec.result.mode = FitMode::descriptive;
  rec.result.objective = 0.1 + 0.2;
  rec.result.initial_objective = 1.5;
  rec.result.iterations = 42;
  rec.result.evaluations = 900;
  rec.result.starts = 3;
  rec.result.converged = true;
  rec.result.method = "nelder-mead+powell";
  rec.subject_id = 5;
  rec.freq_pps = 20.0;
  rec.duration_s = 10.0;

  const std::string text = dump(to_json(rec));
  EXPECT_EQ(text.back(), '\n');
  const FitRecord back = fit_record_from_json(Json::parse(text));
  EXPECT_EQ(back.result.params, rec.result.params);
  EXPECT_EQ(back.result.objective, rec.result.objective);
  EXPECT_EQ(back.result.iterations, 42);
  EXPECT_EQ(back.result.method, rec.result.method);
  EXPECT_EQ(back.subject_id, 5);
  EXPECT_EQ(back.duration_s, 10.0);
  EXPECT_EQ(dump(to_json(back)), text);
}

TEST(Serialize, Errors) {
  EXPECT_THROW(baseline_params_from_json(Json{{"t_per", 1.0}}), FormatError);
  EXPECT_THROW(baseline_params_from_json(Json{{"t_per", "x"}, {"t_pfo", 0}, {"t_pfd", 1}, {"k", 1}}),
               FormatError);
  EXPECT_THROW(baseline_params_from_json(Json{{"t_per", -1.0}, {"t_pfo", 0}, {"t_pfd", 1}, {"k", 1}}),
               ParameterError);
  EXPECT_THROW(exp_params_from_json(Json{{"k", {1, 2, 3}}, {"t", {0, 1, 2, 3, 4}}}), FormatError);
  Json bad = to_json(spectral_sample());
  bad["t3_anchor"] = "sideways";
  EXPECT_THROW(spectral_params_from_json(bad), FormatError);
  EXPECT_THROW(spectral_params_from_json(Json::array()), FormatError);
  EXPECT_THROW(read_json_file("/nonexistent/params.json"), ArgumentError);
}

TEST(Serialize, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "phosphene_serialize_test.json";
  const Json j = to_json(ModelParams{BaselineParams{1.0, 2.0, 3.0, 4.0}});
  write_text_file(path, dump(j));
  EXPECT_EQ(read_json_file(path), j);
  std::filesystem::remove(path);
}
