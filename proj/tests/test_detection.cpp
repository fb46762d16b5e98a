#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <random>

#include "mbflow/detection.hpp"
#include "oracles.hpp"

using namespace mbflow;
using doctest::Approx;

namespace {

InfluenceMap sample_truth() {
  InfluenceMap m;
  m.edges[0][2] = m.edges[1][2] = m.edges[2][3] = m.edges[3][3] = m.edges[4][5] = true;
  return m;
}

TEMatrix as_te(const InfluenceMap& m) {
  TEMatrix t;
  for (int i = 0; i < kNeuronCount; ++i)
    for (int j = 0; j < kNeuronCount; ++j) t.values[i][j] = m(i, j) ? 1.0 : 0.0;
  return t;
}

}  // namespace

TEST_CASE("perfect detector") {
  const InfluenceMap truth = sample_truth();
  const ConfusionCounts c = confusion(as_te(truth), truth, 0.0);
  CHECK(c.hits == 5);
  CHECK(c.misses == 0);
  CHECK(c.false_alarms == 0);
  CHECK(c.scored() == 16 * 14);
  CHECK(c.hit_rate() == 1.0);
  CHECK(c.fa_rate() == 0.0);

  const ConfusionCounts top = confusion(as_te(truth), truth, 1.0);
  CHECK(top.hits == 0);
  CHECK(top.false_alarms == 0);
}

TEST_CASE("sensor targets are excluded unless asked otherwise") {
  InfluenceMap truth;
  TEMatrix te;
  te.values[5][0] = 0.5;  // TE into a sensor
  te.values[5][6] = 0.5;
  CHECK(confusion(te, truth, 0.0).false_alarms == 1);
  CHECK(confusion(te, truth, 0.0, std::vector<NeuronIndex>{}).false_alarms == 2);
  CHECK(confusion(te, truth, 0.0, std::vector<NeuronIndex>{}).scored() == 256);
}

TEST_CASE("rates with empty classes are zero") {
  ConfusionCounts c;
  CHECK(c.hit_rate() == 0.0);
  CHECK(c.fa_rate() == 0.0);
  c.hits = 1;
  c.misses = 3;
  c.false_alarms = 2;
  c.correct_rejections = 198;
  CHECK(c.hit_rate() == 0.25);
  CHECK(c.fa_rate() == 0.01);
}

TEST_CASE("split by truth") {
  const InfluenceMap truth = sample_truth();
  TEMatrix te = as_te(truth);
  te.values[7][8] = 0.3;
  const auto [present, absent] = split_by_truth(te, truth);
  CHECK(present.size() == 5);
  CHECK(absent.size() == 16 * 14 - 5);
  CHECK(std::count(absent.begin(), absent.end(), 0.3) == 1);
}

TEST_CASE("ROC sweep is monotone and conserves counts") {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    InfluenceMap truth;
    TEMatrix te;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        truth.edges[i][j] = rng.chance(0.1);
        te.values[i][j] = rng.chance(0.5) ? 0.0 : rng.uniform();
      }
    const RocCurve c = roc_curve(te, truth, default_thresholds());
    REQUIRE(c.points.size() == 21);
    const int scored = c.points[0].counts.scored();
    for (std::size_t p = 1; p < c.points.size(); ++p) {
      CHECK(c.points[p].counts.scored() == scored);
      CHECK(c.points[p].hit_rate <= c.points[p - 1].hit_rate);
      CHECK(c.points[p].fa_rate <= c.points[p - 1].fa_rate);
      CHECK(c.points[p].threshold > c.points[p - 1].threshold);
    }
  }
}

TEST_CASE("sweep extremes") {
  const InfluenceMap truth = sample_truth();
  TEMatrix te = as_te(truth);
  te.values[9][10] = 0.4;
  const std::vector<double> th{0.0, 1.0};
  const RocCurve c = roc_curve(te, truth, th);
  CHECK(c.points[0].hit_rate == 1.0);
  CHECK(c.points[0].fa_rate > 0.0);
  CHECK(c.points[1].hit_rate == 0.0);
  CHECK(c.points[1].fa_rate == 0.0);
  CHECK_THROWS_AS(roc_curve(te, truth, std::vector<double>{0.5, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(roc_curve(te, truth, std::vector<double>{-0.1}), std::invalid_argument);
}

TEST_CASE("pooled curve sums counts before rating") {
  const InfluenceMap t1 = sample_truth();
  InfluenceMap t2;
  t2.edges[6][7] = true;
  TEMatrix e1 = as_te(t1);
  TEMatrix e2;  // misses its single edge
  const std::vector<TEMatrix> te{e1, e2};
  const std::vector<InfluenceMap> truth{t1, t2};
  const RocCurve pooled = pooled_roc_curve(te, truth, std::vector<double>{0.0});
  CHECK(pooled.points[0].counts.hits == 5);
  CHECK(pooled.points[0].counts.misses == 1);
  CHECK(pooled.points[0].hit_rate == Approx(5.0 / 6.0));
}

TEST_CASE("erfc and its inverse") {
  CHECK(mbflow::erfc(0.0) == 1.0);
  CHECK(erfc_inv(1.0) == Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(erfc_inv(mbflow::erfc(1.234)) - 1.234) <= 1e-7);
  for (double x = -4.0; x <= 4.0; x += 0.01) {
    CHECK(std::abs(mbflow::erfc(x) - boost::math::erfc(x)) <= 1e-10);
    CHECK(std::abs(erfc_inv(mbflow::erfc(x)) - x) <= 1e-7);
  }
  for (double y = 1e-12; y < 2.0; y = y < 1e-3 ? y * 10 : y + 0.01)
    CHECK(erfc_inv(y) == Approx(boost::math::erfc_inv(y)).epsilon(1e-9));
  CHECK_THROWS_AS(erfc_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(erfc_inv(2.0), std::domain_error);
  CHECK_THROWS_AS(erfc_inv(-1.0), std::domain_error);
}

TEST_CASE("identical class distributions give the chance diagonal") {
  const GaussianRocFit f{0.3, 0.2, 0.3, 0.2};
  for (int k = 1; k <= 99; ++k) CHECK(std::abs(f(k / 100.0) - k / 100.0) <= 1e-9);
}

TEST_CASE("fitted curve is monotone and above chance when present exceeds absent") {
  const GaussianRocFit f{0.5, 0.2, 0.1, 0.1};
  double prev = 0.0;
  for (int k = 1; k <= 999; ++k) {
    const double x = k / 1000.0;
    const double y = f(x);
    CHECK(y >= prev);
    CHECK(y >= x);
    prev = y;
  }
  CHECK(f(1e-6) > 1e-6);
  CHECK(f(0.0) == 0.0);
  CHECK(f(1.0) == 1.0);
}

TEST_CASE("fit recovers known normal parameters") {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> present(0.6, 0.15), absent(0.1, 0.05);
  const int n = 4000;
  std::vector<double> p(n), a(n);
  for (auto& v : p) v = present(gen);
  for (auto& v : a) v = absent(gen);
  const GaussianRocFit fit = gaussian_roc_fit(p, a);
  // Standard errors of the mean and of the SD.
  CHECK(std::abs(fit.mu1 - 0.6) <= 3 * 0.15 / std::sqrt(n));
  CHECK(std::abs(fit.mu2 - 0.1) <= 3 * 0.05 / std::sqrt(n));
  CHECK(std::abs(fit.sigma1 - 0.15) <= 3 * 0.15 / std::sqrt(2.0 * (n - 1)));
  CHECK(std::abs(fit.sigma2 - 0.05) <= 3 * 0.05 / std::sqrt(2.0 * (n - 1)));
}

TEST_CASE("degenerate fits are rejected") {
  CHECK_THROWS_AS(gaussian_roc_fit(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_roc_fit(std::vector<double>{0.1, 0.1}, std::vector<double>{0.1, 0.2}),
                  std::invalid_argument);
}
