#pragma once

// Threshold sweeps producing the ROC, precision-recall and MCC-F1 curves.
//
// The sweep visits an upper sentinel (everything predicted negative) and then
// every distinct score in descending order, so each achievable confusion
// matrix appears exactly once and the final point predicts everything
// positive. With this grid the trapezoidal ROC area equals the Mann-Whitney
// statistic with ties counted as one half.
//
// PR area is the trapezoid over the step points, not interpolated average
// precision; expect small differences from average-precision libraries.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "icm/error.hpp"
#include "icm/metrics.hpp"

namespace icm {

enum class CurveKind { kRoc, kPr, kMccF1 };

struct CurvePoint {
  double threshold = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct Curve {
  CurveKind kind = CurveKind::kRoc;
  std::vector<CurvePoint> points;
  std::optional<double> auc;                  // ROC, PR
  std::optional<double> baseline;             // PR: prevalence
  std::optional<double> area_above_baseline;  // PR
  std::optional<CurvePoint> best_point;       // MCC-F1: nearest (1, 1)

  bool operator==(const Curve&) const = default;
};

template <typename P>
concept PlanarPoint = requires(const P& p) {
  { p.x } -> std::convertible_to<double>;
  { p.y } -> std::convertible_to<double>;
};

struct XY {
  double x = 0.0;
  double y = 0.0;
};

/// Sum over consecutive pairs of (x[i+1] - x[i]) * (y[i] + y[i+1]) / 2.
template <PlanarPoint P>
double trapezoid_area(std::span<const P> points) {
  if (points.size() < 2) throw Error(ErrorCode::kInsufficientPoints, "insufficient points");
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].x - points[i - 1].x;
    if (dx < 0.0) throw Error(ErrorCode::kUnsortedAbscissae, "unsorted abscissae");
    area += dx * (points[i].y + points[i - 1].y) / 2.0;
  }
  return area;
}

template <PlanarPoint P>
double trapezoid_area(const std::vector<P>& points) {
  return trapezoid_area(std::span<const P>(points));
}

namespace detail {

inline std::vector<double> sorted_descending(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double sentinel_above(double max_score) {
  double s = max_score + 1.0;
  if (!(s > max_score)) s = std::nextafter(max_score, std::numeric_limits<double>::infinity());
  return s;
}

struct SweepStep {
  double threshold;
  ConfusionCounts counts;
};

// One step per grid threshold, in grid order. Linear after sorting.
inline std::vector<SweepStep> sweep(std::span<const double> neg, std::span<const double> pos) {
  if (neg.empty() || pos.empty()) throw Error(ErrorCode::kEmptySample, "empty sample");
  const auto n = sorted_descending(neg);
  const auto p = sorted_descending(pos);

  std::vector<SweepStep> steps;
  steps.reserve(n.size() + p.size() + 1);
  ConfusionCounts c{0, 0, n.size(), p.size()};
  steps.push_back({sentinel_above(std::max(n.front(), p.front())), c});

  std::size_t i = 0;  // into n
  std::size_t j = 0;  // into p
  while (i < n.size() || j < p.size()) {
    double t = -std::numeric_limits<double>::infinity();
    if (i < n.size()) t = std::max(t, n[i]);
    if (j < p.size()) t = std::max(t, p[j]);
    while (i < n.size() && n[i] == t) {
      ++i;
      ++c.fp;
      --c.tn;
    }
    while (j < p.size() && p[j] == t) {
      ++j;
      ++c.tp;
      --c.fn;
    }
    steps.push_back({t, c});
  }
  return steps;
}

inline double distance_to_perfect(const CurvePoint& pt) { return std::hypot(1.0 - pt.x, 1.0 - pt.y); }

}  // namespace detail

/// Sentinel above the maximum score, then each distinct score descending.
inline std::vector<double> threshold_grid(std::span<const double> neg, std::span<const double> pos) {
  std::vector<double> grid;
  for (const auto& step : detail::sweep(neg, pos)) grid.push_back(step.threshold);
  return grid;
}

inline Curve roc_curve(std::span<const double> neg, std::span<const double> pos) {
  Curve curve;
  curve.kind = CurveKind::kRoc;
  for (const auto& [t, c] : detail::sweep(neg, pos)) {
    const double fpr = static_cast<double>(c.fp) / static_cast<double>(c.negatives());
    const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.positives());
    curve.points.push_back({t, fpr, tpr});
  }
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

inline Curve pr_curve(std::span<const double> neg, std::span<const double> pos) {
  Curve curve;
  curve.kind = CurveKind::kPr;
  for (const auto& [t, c] : detail::sweep(neg, pos)) {
    const auto m = metric_suite(c);
    curve.points.push_back({t, m.recall.value, m.precision.value});
  }
  const double prevalence =
      static_cast<double>(pos.size()) / static_cast<double>(pos.size() + neg.size());
  curve.auc = trapezoid_area(curve.points);
  curve.baseline = prevalence;

  std::vector<XY> lifted;
  lifted.reserve(curve.points.size());
  for (const auto& pt : curve.points) lifted.push_back({pt.x, std::max(pt.y - prevalence, 0.0)});
  curve.area_above_baseline = trapezoid_area(lifted);
  return curve;
}

/// Points are (F1, unit-normalised MCC). The best point is the one nearest
/// (1, 1); on ties the earlier (larger) threshold wins.
inline Curve mcc_f1_curve(std::span<const double> neg, std::span<const double> pos) {
  Curve curve;
  curve.kind = CurveKind::kMccF1;
  for (const auto& [t, c] : detail::sweep(neg, pos)) {
    const auto m = metric_suite(c);
    curve.points.push_back({t, m.f1.value, m.mcc_norm.value});
  }
  const CurvePoint* best = &curve.points.front();
  double best_distance = detail::distance_to_perfect(*best);
  for (const auto& pt : curve.points) {
    const double d = detail::distance_to_perfect(pt);
    if (d < best_distance) {
      best = &pt;
      best_distance = d;
    }
  }
  curve.best_point = *best;
  return curve;
}

}  // namespace icm
