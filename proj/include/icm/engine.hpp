#pragma once

// One scenario in, one bundle out. Both classes are sampled once and that
// single pass feeds the histograms, the confusion matrix and every curve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icm/curves.hpp"
#include "icm/distributions.hpp"
#include "icm/error.hpp"
#include "icm/metrics.hpp"

namespace icm {

inline constexpr std::uint32_t kNegativeStream = 0;
inline constexpr std::uint32_t kPositiveStream = 1;
inline constexpr std::size_t kPdfTracePoints = 201;

struct ScenarioConfig {
  DistributionParams negative;
  DistributionParams positive;
  double threshold = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const ScenarioConfig&) const = default;
};

struct PdfTrace {
  std::vector<double> x;
  std::vector<double> y;

  bool operator==(const PdfTrace&) const = default;
};

struct EvaluationBundle {
  ScenarioConfig config;
  HistogramSummary neg_histogram;
  HistogramSummary pos_histogram;
  PdfTrace neg_pdf_trace;
  PdfTrace pos_pdf_trace;
  ConfusionCounts confusion;
  MetricSuite metrics;
  Curve roc;
  Curve pr;
  Curve mccf1;

  bool operator==(const EvaluationBundle&) const = default;
};

inline void validate_config(const ScenarioConfig& cfg) {
  require_valid(cfg.negative, "negative.");
  require_valid(cfg.positive, "positive.");
  if (!std::isfinite(cfg.threshold)) {
    throw Error(ErrorCode::kInvalidParameter, "non-finite parameter", "threshold");
  }
}

namespace detail {

inline PdfTrace pdf_trace(const DistributionParams& p, double lo, double hi) {
  PdfTrace trace;
  trace.x.reserve(kPdfTracePoints);
  trace.y.reserve(kPdfTracePoints);
  const double step = (hi - lo) / static_cast<double>(kPdfTracePoints - 1);
  for (std::size_t i = 0; i < kPdfTracePoints; ++i) {
    const double x = (i + 1 == kPdfTracePoints) ? hi : lo + static_cast<double>(i) * step;
    trace.x.push_back(x);
    trace.y.push_back(skew_normal_pdf(x, p));
  }
  return trace;
}

}  // namespace detail

inline EvaluationBundle evaluate_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);

  const ScoreSample neg = sample_skew_normal(cfg.negative, cfg.seed, kNegativeStream);
  const ScoreSample pos = sample_skew_normal(cfg.positive, cfg.seed, kPositiveStream);

  EvaluationBundle b;
  b.config = cfg;
  b.neg_histogram = histogram(neg.view());
  b.pos_histogram = histogram(pos.view());

  const auto [neg_lo, neg_hi] = std::minmax_element(neg.values.begin(), neg.values.end());
  const auto [pos_lo, pos_hi] = std::minmax_element(pos.values.begin(), pos.values.end());
  const double lo = std::min(*neg_lo, *pos_lo);
  const double hi = std::max(*neg_hi, *pos_hi);
  const double pad = hi > lo ? 0.1 * (hi - lo) : 0.5;
  b.neg_pdf_trace = detail::pdf_trace(cfg.negative, lo - pad, hi + pad);
  b.pos_pdf_trace = detail::pdf_trace(cfg.positive, lo - pad, hi + pad);

  b.confusion = confusion_at_threshold(neg.view(), pos.view(), cfg.threshold);
  b.metrics = metric_suite(b.confusion);
  b.roc = roc_curve(neg.view(), pos.view());
  b.pr = pr_curve(neg.view(), pos.view());
  b.mccf1 = mcc_f1_curve(neg.view(), pos.view());
  return b;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"default", "imbalance-trap"};
  return names;
}

/// "default": two overlapping unit normals. "imbalance-trap": 100 negatives,
/// 500 positives and a threshold low enough that everything is predicted
/// positive, so accuracy looks good while MCC sits at chance.
inline ScenarioConfig preset(std::string_view name) {
  if (name == "default") {
    return {.negative = {500, 0.0, 1.0, 0.0},
            .positive = {500, 2.0, 1.0, 0.0},
            .threshold = 1.0,
            .seed = 42};
  }
  if (name == "imbalance-trap") {
    return {.negative = {100, 0.0, 1.0, 0.0},
            .positive = {500, 1.0, 1.0, 0.0},
            .threshold = -10.0,
            .seed = 42};
  }
  std::string available;
  for (const auto& n : preset_names()) available += (available.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::kUnknownPreset,
              "unknown preset '" + std::string(name) + "' (available: " + available + ")");
}

}  // namespace icm
