#include "mbflow/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mbflow {

double ConfusionCounts::hit_rate() const {
  const int edges = hits + misses;
  return edges == 0 ? 0.0 : static_cast<double>(hits) / edges;
}

double ConfusionCounts::fa_rate() const {
  const int non_edges = false_alarms + correct_rejections;
  return non_edges == 0 ? 0.0 : static_cast<double>(false_alarms) / non_edges;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  hits += o.hits;
  misses += o.misses;
  false_alarms += o.false_alarms;
  correct_rejections += o.correct_rejections;
  return *this;
}

namespace {

bool excluded(std::span<const NeuronIndex> targets, int j) {
  return std::find(targets.begin(), targets.end(), static_cast<NeuronIndex>(j)) != targets.end();
}

void check_thresholds(std::span<const double> thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0))
      throw std::invalid_argument("thresholds must lie in [0,1]");
    if (i > 0 && thresholds[i] < thresholds[i - 1])
      throw std::invalid_argument("thresholds must be sorted ascending");
  }
}

double sample_sd(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::optional<GaussianRocFit> try_fit(std::span<const double> present, std::span<const double> absent) {
  try {
    return gaussian_roc_fit(present, absent);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

RocPoint make_point(double threshold, const ConfusionCounts& c) {
  return RocPoint{threshold, c.fa_rate(), c.hit_rate(), c};
}

}  // namespace

ConfusionCounts confusion(const TEMatrix& te, const InfluenceMap& truth, double threshold,
                          std::span<const NeuronIndex> excluded_targets) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  ConfusionCounts c;
  for (int i = 0; i < kNeuronCount; ++i) {
    for (int j = 0; j < kNeuronCount; ++j) {
      if (excluded(excluded_targets, j)) continue;
      const bool predicted = te(i, j) > threshold;
      if (truth(i, j))
        (predicted ? c.hits : c.misses) += 1;
      else
        (predicted ? c.false_alarms : c.correct_rejections) += 1;
    }
  }
  return c;
}

std::pair<std::vector<double>, std::vector<double>> split_by_truth(
    const TEMatrix& te, const InfluenceMap& truth, std::span<const NeuronIndex> excluded_targets) {
  std::pair<std::vector<double>, std::vector<double>> out;
  for (int i = 0; i < kNeuronCount; ++i)
    for (int j = 0; j < kNeuronCount; ++j) {
      if (excluded(excluded_targets, j)) continue;
      (truth(i, j) ? out.first : out.second).push_back(te(i, j));
    }
  return out;
}

double erfc(double x) { return std::erfc(x); }

double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) throw std::domain_error("erfc_inv argument must lie in (0,2)");
  if (y > 1.0) return -erfc_inv(2.0 - y);
  if (y == 1.0) return 0.0;

  // Normal tail quantile approximation (error < 5e-4) as the starting point.
  const double p = 0.5 * y;
  const double t = std::sqrt(-2.0 * std::log(p));
  const double z = t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                           (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
  double x = std::max(0.0, z / std::numbers::sqrt2);

  // Halley iterations on f(x) = erfc(x) - y.
  for (int iter = 0; iter < 50; ++iter) {
    const double f = std::erfc(x) - y;
    const double df = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x);
    if (df == 0.0) break;
    const double newton = f / df;
    const double dx = newton / (1.0 + x * newton);  // f''/f' = -2x
    x -= dx;
    if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double GaussianRocFit::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Threshold t with false-alarm rate x under N(mu2, sigma2), mapped
  // through the survival function of N(mu1, sigma1).
  const double arg = (mu2 - mu1) / (std::numbers::sqrt2 * sigma1) + (sigma2 / sigma1) * erfc_inv(2.0 * x);
  return 0.5 * erfc(arg);
}

GaussianRocFit gaussian_roc_fit(std::span<const double> te_present, std::span<const double> te_absent) {
  if (te_present.size() < 2 || te_absent.size() < 2)
    throw std::invalid_argument("gaussian fit needs at least two values per class");
  auto mean = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  GaussianRocFit fit;
  fit.mu1 = mean(te_present);
  fit.sigma1 = sample_sd(te_present, fit.mu1);
  fit.mu2 = mean(te_absent);
  fit.sigma2 = sample_sd(te_absent, fit.mu2);
  if (!(fit.sigma1 > 0.0) || !(fit.sigma2 > 0.0))
    throw std::invalid_argument("gaussian fit needs nonzero spread in both classes");
  return fit;
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(i / 20.0);
  return t;
}

RocCurve roc_curve(const TEMatrix& te, const InfluenceMap& truth, std::span<const double> thresholds,
                   std::span<const NeuronIndex> excluded_targets) {
  check_thresholds(thresholds);
  RocCurve curve;
  for (double t : thresholds) curve.points.push_back(make_point(t, confusion(te, truth, t, excluded_targets)));
  const auto [present, absent] = split_by_truth(te, truth, excluded_targets);
  curve.fit = try_fit(present, absent);
  return curve;
}

RocCurve pooled_roc_curve(std::span<const TEMatrix> te, std::span<const InfluenceMap> truth,
                          std::span<const double> thresholds,
                          std::span<const NeuronIndex> excluded_targets) {
  if (te.size() != truth.size()) throw std::invalid_argument("TE and truth batches differ in size");
  check_thresholds(thresholds);
  RocCurve curve;
  for (double t : thresholds) {
    ConfusionCounts total;
    for (std::size_t b = 0; b < te.size(); ++b) total += confusion(te[b], truth[b], t, excluded_targets);
    curve.points.push_back(make_point(t, total));
  }
  std::vector<double> present, absent;
  for (std::size_t b = 0; b < te.size(); ++b) {
    auto [p, a] = split_by_truth(te[b], truth[b], excluded_targets);
    present.insert(present.end(), p.begin(), p.end());
    absent.insert(absent.end(), a.begin(), a.end());
  }
  curve.fit = try_fit(present, absent);
  return curve;
}

}  // namespace mbflow
