#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phosphene/errors.hpp"
#include "phosphene/spectral.hpp"

using namespace phosphene;

namespace {

constexpr double kPi = std::numbers::pi;

Spectrum direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  Spectrum out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

double max_abs_diff(const Spectrum& a, const Spectrum& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_abs(const Spectrum& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST(Dft, ConstantIsAllDc) {
  const std::vector<double> x(12, 2.5);
  const Spectrum X = dft(x);
  EXPECT_NEAR(std::abs(X[0]), 12 * 2.5, 1e-12);
  for (std::size_t k = 1; k < X.size(); ++k) EXPECT_NEAR(std::abs(X[k]), 0.0, 1e-12);
}

TEST(Dft, PureToneHitsTwoBins) {
  for (std::size_t n : {16u, 15u, 30u}) {
    const std::size_t k0 = 3;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * kPi * k0 * i / static_cast<double>(n));
    const Spectrum X = dft(x);
    for (std::size_t k = 0; k < n; ++k) {
      const bool on = k == k0 || k == n - k0;
      EXPECT_NEAR(std::abs(X[k]), on ? n / 2.0 : 0.0, 1e-10) << n << ' ' << k;
    }
  }
}

TEST(Dft, LengthEightMatchesDirectSum) {
  const std::vector<double> x{1.0, -2.0, 0.5, 3.25, 0.0, 7.0, -1.5, 2.0};
  const Spectrum want = direct_dft(x);
  EXPECT_LE(max_abs_diff(dft(x), want) / max_abs(want), 1e-10);
}

TEST(Dft, RandomLengthsMatchDirectSum) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {2u, 3u, 5u, 7u, 64u, 97u, 100u, 128u, 241u, 256u}) {
    const auto x = random_signal(rng, n);
    const Spectrum want = direct_dft(x);
    EXPECT_LE(max_abs_diff(dft(x), want) / max_abs(want), 1e-10) << n;
  }
}

TEST(Dft, RoundTripUpTo4096) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 17u, 1000u, 1024u, 4095u, 4096u}) {
    const auto x = random_signal(rng, n);
    const Spectrum back = inverse_dft(dft(x));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(back[i] - x[i]));
      scale = std::max(scale, std::abs(x[i]));
    }
    EXPECT_LE(err / scale, 1e-9) << n;
  }
}

TEST(Dft, TooShort) {
  EXPECT_THROW(dft(std::vector<double>{1.0}), ArgumentError);
  EXPECT_THROW(dft(std::vector<double>{}), ArgumentError);
}

TEST(TopM, PureCosineAtBin3) {
  const std::size_t n = 32;
  const double dt = 0.25;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 2.0 * std::cos(2.0 * kPi * 3.0 * i / n);
  const auto comps = top_m_components(dft(x), 1, dt);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_NEAR(comps[0].freq_hz, 3.0 / (n * dt), 1e-12);
  EXPECT_NEAR(comps[0].amplitude, 2.0, 1e-12);
  EXPECT_NEAR(comps[0].phase, 0.0, 1e-12);
}

TEST(TopM, TwoTones) {
  const std::size_t n = 40;
  const double dt = 0.5;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.5 * std::cos(2.0 * kPi * 2.0 * i / n + 0.3) + 4.0 * std::cos(2.0 * kPi * 7.0 * i / n - 1.0);
  }
  const auto comps = top_m_components(dft(x), 2, dt);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_NEAR(comps[0].freq_hz, 7.0 / (n * dt), 1e-12);
  EXPECT_NEAR(comps[0].amplitude, 4.0, 1e-10);
  EXPECT_NEAR(comps[0].phase, -1.0, 1e-10);
  EXPECT_NEAR(comps[1].freq_hz, 2.0 / (n * dt), 1e-12);
  EXPECT_NEAR(comps[1].amplitude, 1.5, 1e-10);
  EXPECT_NEAR(comps[1].phase, 0.3, 1e-10);
}

TEST(TopM, TiesGoToLowerBin) {
  Spectrum X(10, 0.0);
  X[2] = X[8] = {3.0, 0.0};
  X[4] = X[6] = {0.0, 3.0};
  const auto comps = top_m_components(X, 2, 1.0);
  EXPECT_NEAR(comps[0].freq_hz, 0.2, 1e-12);
  EXPECT_NEAR(comps[1].freq_hz, 0.4, 1e-12);
}

TEST(TopM, RangeChecks) {
  const Spectrum X(8, 1.0);
  EXPECT_THROW(top_m_components(X, 0, 1.0), ArgumentError);
  EXPECT_THROW(top_m_components(X, 5, 1.0), ArgumentError);
  EXPECT_NO_THROW(top_m_components(X, 4, 1.0));
}

TEST(TopM, ScaleInvariantSelection) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_signal(rng, 50);
    const auto a = top_m_components(dft(x), 6, 0.25);
    for (double& v : x) v *= 3.7;
    const auto b = top_m_components(dft(x), 6, 0.25);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].freq_hz, b[i].freq_hz);
  }
}

TEST(Series, BiasOnly) {
  EXPECT_DOUBLE_EQ(eval_series({}, 5.0, 0.0), 5.0);
  EXPECT_DOUBLE_EQ(eval_series({}, 5.0, 123.4), 5.0);
}

TEST(Series, CosinePeakAtZero) {
  const std::vector<SpectrumComponent> c{{0.3, 2.0, 0.0}};
  EXPECT_DOUBLE_EQ(eval_series(c, 1.0, 0.0), 3.0);
}

TEST(Series, FullBinCountReconstructsSignal) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {16u, 21u}) {
    const double dt = 0.25;
    const auto x = random_signal(rng, n);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    const auto comps = top_m_components(dft(x), static_cast<int>(n / 2), dt);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(eval_series(comps, 0.0, static_cast<double>(i) * dt), x[i] - mean, 1e-9) << n << ' ' << i;
    }
  }
}

TEST(LocalMax, Examples) {
  EXPECT_EQ(first_local_max(std::vector<double>{1, 3, 2, 4, 1}, 0), 1u);
  EXPECT_EQ(first_local_max(std::vector<double>{5, 4, 3, 2, 1}, 0), 0u);
  EXPECT_EQ(first_local_max(std::vector<double>{0, 2, 2, 1}, 0), 1u);
  EXPECT_EQ(first_local_max(std::vector<double>{1, 3, 2, 4, 1}, 2), 3u);
  EXPECT_THROW(first_local_max(std::vector<double>{1, 2}, 2), ArgumentError);
}
