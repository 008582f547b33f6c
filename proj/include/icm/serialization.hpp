#pragma once

// JSON forms of scenario configs and evaluation bundles.
//
// Requests are strict: every field is required, unknown fields are rejected
// and errors name the offending dotted path. Output uses insertion-ordered
// objects and nlohmann's round-trip double formatting, so identical bundles
// always serialise to identical bytes.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "icm/engine.hpp"
#include "icm/error.hpp"

namespace icm {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string join_path(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

[[noreturn]] inline void schema_error(const std::string& message, const std::string& field) {
  throw Error(ErrorCode::kSchemaViolation, message, field);
}

inline void require_object(const Json& j, const std::string& path,
                           std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) schema_error("expected object", path.empty() ? "$" : path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) schema_error("unknown field", join_path(path, key));
  }
  for (auto k : keys) {
    if (!j.contains(k)) schema_error("missing field", join_path(path, k));
  }
}

inline double read_real(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error("expected number", path);
  return j.get<double>();
}

inline std::size_t read_sample_size(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v == 0 || v > kMaxSampleSize) {
      throw Error(ErrorCode::kInvalidParameter, "sample size out of range", path);
    }
    return static_cast<std::size_t>(v);
  }
  if (j.is_number_integer()) {
    throw Error(ErrorCode::kInvalidParameter, "sample size out of range", path);
  }
  schema_error("expected integer", path);
}

inline std::uint64_t read_seed(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) schema_error("expected unsigned integer", path);
  return j.get<std::uint64_t>();
}

inline DistributionParams read_params(const Json& j, const std::string& path) {
  require_object(j, path, {"n", "loc", "scale", "shape"});
  DistributionParams p;
  p.n = read_sample_size(j.at("n"), path + ".n");
  p.loc = read_real(j.at("loc"), path + ".loc");
  p.scale = read_real(j.at("scale"), path + ".scale");
  p.shape = read_real(j.at("shape"), path + ".shape");
  return p;
}

inline const char* kind_name(CurveKind k) {
  switch (k) {
    case CurveKind::kRoc: return "ROC";
    case CurveKind::kPr: return "PR";
    case CurveKind::kMccF1: return "MCCF1";
  }
  return "?";
}

inline CurveKind kind_from_name(const std::string& s) {
  if (s == "ROC") return CurveKind::kRoc;
  if (s == "PR") return CurveKind::kPr;
  if (s == "MCCF1") return CurveKind::kMccF1;
  schema_error("unknown curve kind", "kind");
}

}  // namespace detail

/// Parses an EvaluateRequest document; throws icm::Error on any violation.
/// Parameter values are then checked with validate_config.
inline ScenarioConfig config_from_json(const Json& j) {
  detail::require_object(j, "", {"negative", "positive", "threshold", "seed"});
  ScenarioConfig cfg;
  cfg.negative = detail::read_params(j.at("negative"), "negative");
  cfg.positive = detail::read_params(j.at("positive"), "positive");
  cfg.threshold = detail::read_real(j.at("threshold"), "threshold");
  cfg.seed = detail::read_seed(j.at("seed"), "seed");
  validate_config(cfg);
  return cfg;
}

inline Json to_json(const DistributionParams& p) {
  return Json{{"n", p.n}, {"loc", p.loc}, {"scale", p.scale}, {"shape", p.shape}};
}

inline Json to_json(const ScenarioConfig& c) {
  return Json{{"negative", to_json(c.negative)},
              {"positive", to_json(c.positive)},
              {"threshold", c.threshold},
              {"seed", c.seed}};
}

inline Json to_json(const HistogramSummary& h) { return Json{{"edges", h.edges}, {"counts", h.counts}}; }

inline Json to_json(const PdfTrace& t) { return Json{{"x", t.x}, {"y", t.y}}; }

inline Json to_json(const ConfusionCounts& c) {
  return Json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

inline Json to_json(const MetricValue& m) {
  Json j{{"value", m.value}, {"defined", m.defined}};
  if (m.convention) j["convention"] = *m.convention;
  return j;
}

inline Json to_json(const MetricSuite& m) {
  return Json{{"accuracy", to_json(m.accuracy)}, {"recall", to_json(m.recall)},
              {"specificity", to_json(m.specificity)}, {"precision", to_json(m.precision)},
              {"npv", to_json(m.npv)}, {"f1", to_json(m.f1)},
              {"mcc_raw", to_json(m.mcc_raw)}, {"mcc_norm", to_json(m.mcc_norm)}};
}

inline Json to_json(const CurvePoint& p) {
  return Json{{"threshold", p.threshold}, {"x", p.x}, {"y", p.y}};
}

// Points are stored column-wise to keep large sweeps compact.
inline Json to_json(const Curve& c) {
  std::vector<double> t, x, y;
  t.reserve(c.points.size());
  x.reserve(c.points.size());
  y.reserve(c.points.size());
  for (const auto& p : c.points) {
    t.push_back(p.threshold);
    x.push_back(p.x);
    y.push_back(p.y);
  }
  Json j{{"kind", detail::kind_name(c.kind)},
         {"points", Json{{"threshold", t}, {"x", x}, {"y", y}}}};
  if (c.auc) j["auc"] = *c.auc;
  if (c.baseline) j["baseline"] = *c.baseline;
  if (c.area_above_baseline) j["area_above_baseline"] = *c.area_above_baseline;
  if (c.best_point) j["best_point"] = to_json(*c.best_point);
  return j;
}

inline Json to_json(const EvaluationBundle& b) {
  return Json{{"config", to_json(b.config)},
              {"neg_histogram", to_json(b.neg_histogram)},
              {"pos_histogram", to_json(b.pos_histogram)},
              {"neg_pdf_trace", to_json(b.neg_pdf_trace)},
              {"pos_pdf_trace", to_json(b.pos_pdf_trace)},
              {"confusion", to_json(b.confusion)},
              {"metrics", to_json(b.metrics)},
              {"roc", to_json(b.roc)},
              {"pr", to_json(b.pr)},
              {"mccf1", to_json(b.mccf1)}};
}

// Inverse of to_json(EvaluationBundle). Trusts that its input came from
// to_json and throws nlohmann exceptions on structural mismatch.
namespace detail {

inline MetricValue metric_from_json(const Json& j) {
  MetricValue m{j.at("value").get<double>(), j.at("defined").get<bool>(), std::nullopt};
  if (j.contains("convention")) m.convention = j.at("convention").get<std::string>();
  return m;
}

inline CurvePoint point_from_json(const Json& j) {
  return {j.at("threshold").get<double>(), j.at("x").get<double>(), j.at("y").get<double>()};
}

inline Curve curve_from_json(const Json& j) {
  Curve c;
  c.kind = kind_from_name(j.at("kind").get<std::string>());
  const auto& pts = j.at("points");
  const auto t = pts.at("threshold").get<std::vector<double>>();
  const auto x = pts.at("x").get<std::vector<double>>();
  const auto y = pts.at("y").get<std::vector<double>>();
  if (t.size() != x.size() || t.size() != y.size()) schema_error("ragged curve columns", "points");
  for (std::size_t i = 0; i < t.size(); ++i) c.points.push_back({t[i], x[i], y[i]});
  if (j.contains("auc")) c.auc = j.at("auc").get<double>();
  if (j.contains("baseline")) c.baseline = j.at("baseline").get<double>();
  if (j.contains("area_above_baseline")) c.area_above_baseline = j.at("area_above_baseline").get<double>();
  if (j.contains("best_point")) c.best_point = point_from_json(j.at("best_point"));
  return c;
}

inline DistributionParams params_from_json(const Json& j) {
  return {j.at("n").get<std::size_t>(), j.at("loc").get<double>(), j.at("scale").get<double>(),
          j.at("shape").get<double>()};
}

}  // namespace detail

inline EvaluationBundle bundle_from_json(const Json& j) {
  EvaluationBundle b;
  const auto& cfg = j.at("config");
  b.config.negative = detail::params_from_json(cfg.at("negative"));
  b.config.positive = detail::params_from_json(cfg.at("positive"));
  b.config.threshold = cfg.at("threshold").get<double>();
  b.config.seed = cfg.at("seed").get<std::uint64_t>();

  auto hist = [](const Json& h) {
    return HistogramSummary{h.at("edges").get<std::vector<double>>(),
                            h.at("counts").get<std::vector<std::size_t>>()};
  };
  auto trace = [](const Json& t) {
    return PdfTrace{t.at("x").get<std::vector<double>>(), t.at("y").get<std::vector<double>>()};
  };
  b.neg_histogram = hist(j.at("neg_histogram"));
  b.pos_histogram = hist(j.at("pos_histogram"));
  b.neg_pdf_trace = trace(j.at("neg_pdf_trace"));
  b.pos_pdf_trace = trace(j.at("pos_pdf_trace"));

  const auto& c = j.at("confusion");
  b.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                 c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};

  const auto& m = j.at("metrics");
  b.metrics.accuracy = detail::metric_from_json(m.at("accuracy"));
  b.metrics.recall = detail::metric_from_json(m.at("recall"));
  b.metrics.specificity = detail::metric_from_json(m.at("specificity"));
  b.metrics.precision = detail::metric_from_json(m.at("precision"));
  b.metrics.npv = detail::metric_from_json(m.at("npv"));
  b.metrics.f1 = detail::metric_from_json(m.at("f1"));
  b.metrics.mcc_raw = detail::metric_from_json(m.at("mcc_raw"));
  b.metrics.mcc_norm = detail::metric_from_json(m.at("mcc_norm"));

  b.roc = detail::curve_from_json(j.at("roc"));
  b.pr = detail::curve_from_json(j.at("pr"));
  b.mccf1 = detail::curve_from_json(j.at("mccf1"));
  return b;
}

inline Json presets_json() {
  Json list = Json::array();
  for (const auto& name : preset_names()) list.push_back(Json{{"name", name}, {"config", to_json(preset(name))}});
  return list;
}

}  // namespace icm
