#pragma once

// Confusion matrix at a threshold and the point metrics derived from it.
// A score at or above the threshold is predicted positive.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "icm/error.hpp"

namespace icm {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t positives() const noexcept { return tp + fn; }
  std::size_t negatives() const noexcept { return tn + fp; }
  std::size_t total() const noexcept { return tp + fp + tn + fn; }

  bool operator==(const ConfusionCounts&) const = default;
};

// Tags recorded on a MetricValue whose denominator vanished.
namespace convention {
inline constexpr const char* kNoPredictedPositives = "no-predicted-positives";
inline constexpr const char* kNoPredictedNegatives = "no-predicted-negatives";
inline constexpr const char* kZeroPrecisionRecall = "zero-precision-recall";
inline constexpr const char* kZeroMccDenominator = "zero-mcc-denominator";
}  // namespace convention

/// A metric reading. When `defined` is false, `value` holds the fallback
/// and `convention` names the rule that produced it.
struct MetricValue {
  double value = 0.0;
  bool defined = true;
  std::optional<std::string> convention;

  static MetricValue of(double v) { return {v, true, std::nullopt}; }
  static MetricValue fallback(double v, const char* tag) { return {v, false, std::string(tag)}; }

  bool operator==(const MetricValue&) const = default;
};

struct MetricSuite {
  MetricValue accuracy;
  MetricValue recall;
  MetricValue specificity;
  MetricValue precision;
  MetricValue npv;
  MetricValue f1;
  MetricValue mcc_raw;   // [-1, 1]
  MetricValue mcc_norm;  // (mcc_raw + 1) / 2

  bool operator==(const MetricSuite&) const = default;
};

inline ConfusionCounts confusion_at_threshold(std::span<const double> neg, std::span<const double> pos,
                                              double threshold) {
  if (neg.empty() || pos.empty()) throw Error(ErrorCode::kEmptySample, "empty sample");
  if (!std::isfinite(threshold)) {
    throw Error(ErrorCode::kInvalidParameter, "non-finite parameter", "threshold");
  }
  ConfusionCounts c;
  for (const double s : pos) (s >= threshold ? c.tp : c.fn)++;
  for (const double s : neg) (s >= threshold ? c.fp : c.tn)++;
  return c;
}

inline MetricSuite metric_suite(const ConfusionCounts& c) {
  if (c.positives() == 0 || c.negatives() == 0) {
    throw Error(ErrorCode::kDegenerateScenario, "degenerate scenario: empty class");
  }
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto tn = static_cast<double>(c.tn);
  const auto fn = static_cast<double>(c.fn);

  MetricSuite m;
  m.accuracy = MetricValue::of((tp + tn) / (tp + tn + fp + fn));
  m.recall = MetricValue::of(tp / (tp + fn));
  m.specificity = MetricValue::of(tn / (tn + fp));
  m.precision = (c.tp + c.fp == 0) ? MetricValue::fallback(1.0, convention::kNoPredictedPositives)
                                   : MetricValue::of(tp / (tp + fp));
  m.npv = (c.tn + c.fn == 0) ? MetricValue::fallback(1.0, convention::kNoPredictedNegatives)
                             : MetricValue::of(tn / (tn + fn));

  // precision + recall vanishes exactly when tp = 0 with some predicted
  // positives. Otherwise the harmonic mean reduces to 2tp / (2tp + fp + fn),
  // including the tp + fp = 0 case where precision carries its fallback 1.
  if (c.tp == 0 && c.fp > 0) {
    m.f1 = MetricValue::fallback(0.0, convention::kZeroPrecisionRecall);
  } else {
    m.f1 = MetricValue::of(2.0 * tp / (2.0 * tp + fp + fn));
  }

  const double denom = std::sqrt((tp + fp) * (tp + fn)) * std::sqrt((tn + fp) * (tn + fn));
  if (denom == 0.0) {
    m.mcc_raw = MetricValue::fallback(0.0, convention::kZeroMccDenominator);
  } else {
    m.mcc_raw = MetricValue::of(std::clamp((tp * tn - fp * fn) / denom, -1.0, 1.0));
  }
  m.mcc_norm = m.mcc_raw;
  m.mcc_norm.value = (m.mcc_raw.value + 1.0) / 2.0;
  return m;
}

}  // namespace icm
