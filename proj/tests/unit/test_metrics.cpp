#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"

using namespace phosphene;

namespace {

using Vec = std::vector<double>;

// Brute-force oracles in long double.
double mse_oracle(const Vec& a, const Vec& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    s += d * d;
  }
  return static_cast<double>(s / a.size());
}

double pearson_oracle(const Vec& a, const Vec& b) {
  const std::size_t n = a.size();
  long double ma = 0.0L, mb = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0.0L, saa = 0.0L, sbb = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

}  // namespace

TEST(Mse, Examples) {
  EXPECT_DOUBLE_EQ(mse(Vec{0, 0}, Vec{1, 3}), 5.0);
  EXPECT_DOUBLE_EQ(mse(Vec{1.5, -2, 7}, Vec{1.5, -2, 7}), 0.0);
  EXPECT_GT(mse(Vec{1.5, -2, 7}, Vec{1.5, -2, 7.000001}), 0.0);
}

TEST(Mse, Errors) {
  EXPECT_THROW(mse(Vec{1, 2}, Vec{1}), ArgumentError);
  EXPECT_THROW(mse(Vec{}, Vec{}), ArgumentError);
}

TEST(Mse, MatchesOracle) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 100; ++rep) {
    Vec a(10), b(10);
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    EXPECT_NEAR(mse(a, b), mse_oracle(a, b), 1e-12);
  }
}

TEST(Pearson, Examples) {
  EXPECT_NEAR(pearson_r(Vec{1, 2, 3, 4}, Vec{1, 3, 2, 4}), 0.8, 1e-15);
  const Vec a{0.3, -1.0, 2.5, 4.0, 0.0};
  Vec affine, neg;
  for (double v : a) {
    affine.push_back(2.0 * v + 3.0);
    neg.push_back(-v);
  }
  EXPECT_NEAR(pearson_r(a, affine), 1.0, 1e-15);
  EXPECT_NEAR(pearson_r(a, neg), -1.0, 1e-15);
}

TEST(Pearson, ConstantInputIsAnErrorNotZero) {
  EXPECT_THROW(pearson_r(Vec{2, 2, 2}, Vec{1, 2, 3}), DegenerateVarianceError);
  EXPECT_THROW(pearson_r(Vec{1, 2, 3}, Vec{0, 0, 0}), DegenerateVarianceError);
  EXPECT_THROW(pearson_r(Vec{1}, Vec{1}), ArgumentError);
  EXPECT_THROW(pearson_r(Vec{1, 2}, Vec{1, 2, 3}), ArgumentError);
}

TEST(Pearson, MatchesOracleAndAffineInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0), scale(0.1, 5.0);
  for (int rep = 0; rep < 100; ++rep) {
    Vec a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = u(rng);
      b[i] = 0.5 * a[i] + u(rng);
    }
    const double r = pearson_r(a, b);
    EXPECT_NEAR(r, pearson_oracle(a, b), 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
    const double s = scale(rng), shift = u(rng);
    Vec t = a;
    for (double& v : t) v = s * v + shift;
    EXPECT_NEAR(pearson_r(t, b), r, 1e-12);
    for (double& v : t) v = -v;
    EXPECT_NEAR(pearson_r(t, b), -r, 1e-12);
  }
}

TEST(Score, UndefinedCorrelationIsEmpty) {
  const Score s = score(Vec{0, 0, 0}, Vec{1, 2, 3});
  EXPECT_FALSE(s.r.has_value());
  EXPECT_DOUBLE_EQ(s.mse, 14.0 / 3.0);
  EXPECT_EQ(s.n, 3u);
  EXPECT_TRUE(score(Vec{0, 1, 0}, Vec{1, 2, 3}).r.has_value());
}

TEST(MeanSd, SampleSd) {
  const MeanSd m = mean_sd(Vec{2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(m.mean, 5.0);
  EXPECT_NEAR(m.sd, std::sqrt(32.0 / 7.0), 1e-14);
  EXPECT_EQ(m.count, 8u);
  EXPECT_EQ(mean_sd(Vec{3}).sd, 0.0);
  EXPECT_EQ(mean_sd(Vec{}).count, 0u);
}
