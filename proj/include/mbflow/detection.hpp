#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mbflow/core.hpp"
#include "mbflow/groundtruth.hpp"
#include "mbflow/infoflow.hpp"

namespace mbflow {

/// Target neurons excluded from scoring by default: the two sensors.
inline constexpr NeuronIndex kDefaultExcludedTargets[] = {0, 1};

struct ConfusionCounts {
  int hits = 0;
  int misses = 0;
  int false_alarms = 0;
  int correct_rejections = 0;

  double hit_rate() const;  // 0 when there are no true edges
  double fa_rate() const;   // 0 when there are no non-edges
  int scored() const { return hits + misses + false_alarms + correct_rejections; }

  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Predicts edge (i, j) iff te(i, j) > threshold and scores every ordered
/// pair, diagonal included, whose target is not excluded.
ConfusionCounts confusion(const TEMatrix& te, const InfluenceMap& truth, double threshold,
                          std::span<const NeuronIndex> excluded_targets = kDefaultExcludedTargets);

/// Scored TE values split by ground truth: first = edge present, second = absent.
std::pair<std::vector<double>, std::vector<double>> split_by_truth(
    const TEMatrix& te, const InfluenceMap& truth,
    std::span<const NeuronIndex> excluded_targets = kDefaultExcludedTargets);

double erfc(double x);

/// Inverse of erfc on (0, 2); throws std::domain_error outside it.
double erfc_inv(double y);

/// Two-Gaussian ROC model: present ~ N(mu1, sigma1), absent ~ N(mu2, sigma2).
struct GaussianRocFit {
  double mu1 = 0.0;
  double sigma1 = 1.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;

  /// Hit rate at false-alarm rate x in [0, 1].
  double operator()(double x) const;
};

/// Sample means and (n-1) standard deviations of each class. Throws
/// std::invalid_argument for fewer than two values or zero spread.
GaussianRocFit gaussian_roc_fit(std::span<const double> te_present, std::span<const double> te_absent);

struct RocPoint {
  double threshold = 0.0;
  double fa_rate = 0.0;
  double hit_rate = 0.0;
  ConfusionCounts counts;
};

struct RocCurve {
  std::vector<RocPoint> points;
  std::optional<GaussianRocFit> fit;
};

/// Default sweep: 0, 0.05, ..., 1.0.
std::vector<double> default_thresholds();

/// Throws std::invalid_argument unless thresholds lie in [0,1] and ascend.
RocCurve roc_curve(const TEMatrix& te, const InfluenceMap& truth, std::span<const double> thresholds,
                   std::span<const NeuronIndex> excluded_targets = kDefaultExcludedTargets);

/// Batch curve with counts summed across brains before rating; the fit uses
/// the pooled TE values.
RocCurve pooled_roc_curve(std::span<const TEMatrix> te, std::span<const InfluenceMap> truth,
                          std::span<const double> thresholds,
                          std::span<const NeuronIndex> excluded_targets = kDefaultExcludedTargets);

}  // namespace mbflow
