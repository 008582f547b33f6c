#pragma once

// Flat CSV views of a bundle: one row of point metrics, and one
// threshold,x,y table per curve.

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

#include "icm/engine.hpp"

namespace icm {

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

inline void write_metrics_csv(std::ostream& os, const EvaluationBundle& b) {
  const auto& m = b.metrics;
  os << "threshold,tp,fp,tn,fn,accuracy,recall,specificity,precision,npv,f1,mcc_raw,mcc_norm,"
        "precision_defined,npv_defined,f1_defined,mcc_defined,roc_auc,pr_auc,pr_baseline,"
        "pr_area_above_baseline,mccf1_best_threshold\n";
  const auto& c = b.confusion;
  auto flag = [](const MetricValue& v) { return v.defined ? "1" : "0"; };
  os << format_real(b.config.threshold) << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ','
     << format_real(m.accuracy.value) << ',' << format_real(m.recall.value) << ','
     << format_real(m.specificity.value) << ',' << format_real(m.precision.value) << ','
     << format_real(m.npv.value) << ',' << format_real(m.f1.value) << ','
     << format_real(m.mcc_raw.value) << ',' << format_real(m.mcc_norm.value) << ','
     << flag(m.precision) << ',' << flag(m.npv) << ',' << flag(m.f1) << ',' << flag(m.mcc_raw) << ','
     << format_real(b.roc.auc.value_or(0.0)) << ',' << format_real(b.pr.auc.value_or(0.0)) << ','
     << format_real(b.pr.baseline.value_or(0.0)) << ','
     << format_real(b.pr.area_above_baseline.value_or(0.0)) << ','
     << format_real(b.mccf1.best_point ? b.mccf1.best_point->threshold : 0.0) << '\n';
}

inline void write_curve_csv(std::ostream& os, const Curve& curve) {
  os << "threshold,x,y\n";
  for (const auto& p : curve.points) {
    os << format_real(p.threshold) << ',' << format_real(p.x) << ',' << format_real(p.y) << '\n';
  }
}

}  // namespace icm
