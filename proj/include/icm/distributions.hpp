#pragma once

// Class-score distributions: skew-normal sampling under a seed, the density
// used for plot overlays, and histogram summaries.
//
// Scores live on an unbounded axis. They play the role of a model's raw
// output (think logits before a softmax), not probabilities in [0, 1].
//
// The "mean", "SD" and "skew" controls map directly onto the skew-normal
// location, scale and shape parameters. They are NOT the moments of the
// resulting distribution: with shape != 0 the true mean is
// loc + scale * delta * sqrt(2/pi), delta = shape / sqrt(1 + shape^2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icm/error.hpp"

namespace icm {

inline constexpr std::size_t kMaxSampleSize = 100000;
inline constexpr std::size_t kDefaultBinCount = 40;

struct DistributionParams {
  std::size_t n = 1;
  double loc = 0.0;
  double scale = 1.0;
  double shape = 0.0;

  bool operator==(const DistributionParams&) const = default;
};

struct ScoreSample {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
  std::span<const double> view() const noexcept { return values; }

  bool operator==(const ScoreSample&) const = default;
};

struct HistogramSummary {
  std::vector<double> edges;          // counts.size() + 1 entries
  std::vector<std::size_t> counts;

  bool operator==(const HistogramSummary&) const = default;
};

/// A rejected parameter: `field` is the member name, `reason` the diagnostic.
struct FieldError {
  std::string field;
  std::string reason;
};

/// Returns nothing when `p` is acceptable.
[[nodiscard]] inline std::optional<FieldError> validate_params(const DistributionParams& p) {
  if (p.n == 0 || p.n > kMaxSampleSize) return FieldError{"n", "sample size out of range"};
  if (!std::isfinite(p.loc)) return FieldError{"loc", "non-finite parameter"};
  if (!std::isfinite(p.scale)) return FieldError{"scale", "non-finite parameter"};
  if (!std::isfinite(p.shape)) return FieldError{"shape", "non-finite parameter"};
  if (!(p.scale > 0.0)) return FieldError{"scale", "nonpositive scale"};
  return std::nullopt;
}

/// Throws icm::Error naming `prefix + field` if `p` is invalid.
inline void require_valid(const DistributionParams& p, const std::string& prefix = {}) {
  if (auto err = validate_params(p)) {
    throw Error(ErrorCode::kInvalidParameter, err->reason, prefix + err->field);
  }
}

namespace detail {

// Portable normal variates. Both std::seed_seq and std::mt19937_64 are fully
// specified by the standard; std::normal_distribution is not, so the
// transform is done here (Marsaglia polar method).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint32_t stream_id)
      : engine_(make_engine(seed, stream_id)) {}

  std::pair<double, double> next_pair() {
    for (;;) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s >= 1.0 || s == 0.0) continue;
      const double factor = std::sqrt(-2.0 * std::log(s) / s);
      return {u * factor, v * factor};
    }
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), stream_id};
    return std::mt19937_64(seq);
  }

  // 53 random bits mapped to [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
};

inline double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace detail

/// Draws p.n skew-normal scores. Each draw takes two standard normals u0, u1
/// and returns loc + scale * (delta * |u0| + sqrt(1 - delta^2) * u1).
/// Output is a pure function of (p, seed, stream_id).
inline ScoreSample sample_skew_normal(const DistributionParams& p, std::uint64_t seed,
                                      std::uint32_t stream_id) {
  require_valid(p);
  const double root = std::hypot(1.0, p.shape);
  const double delta = p.shape / root;
  const double complement = 1.0 / root;  // sqrt(1 - delta^2)

  detail::NormalStream normals(seed, stream_id);
  ScoreSample out;
  out.values.reserve(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const auto [u0, u1] = normals.next_pair();
    const double z = delta * std::abs(u0) + complement * u1;
    const double score = p.loc + p.scale * z;
    if (!std::isfinite(score)) {
      throw Error(ErrorCode::kInvalidParameter, "non-finite sample", "scale");
    }
    out.values.push_back(score);
  }
  return out;
}

inline double skew_normal_pdf(double x, const DistributionParams& p) {
  require_valid(p);
  const double z = (x - p.loc) / p.scale;
  return (2.0 / p.scale) * detail::standard_normal_pdf(z) * detail::standard_normal_cdf(p.shape * z);
}

/// Uniform bins over [min, max]; bins are right-open except the last. When all
/// values coincide the result is a single bin of width 1 centred on the value.
inline HistogramSummary histogram(std::span<const double> values,
                                  std::size_t bin_count = kDefaultBinCount) {
  if (values.empty()) throw Error(ErrorCode::kEmptySample, "empty sample");
  if (bin_count == 0) throw Error(ErrorCode::kInvalidParameter, "bin count must be positive", "bin_count");

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;

  HistogramSummary h;
  if (lo == hi) {
    h.edges = {lo - 0.5, lo + 0.5};
    h.counts = {values.size()};
    return h;
  }

  const double width = (hi - lo) / static_cast<double>(bin_count);
  h.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i < bin_count; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges[bin_count] = hi;
  h.counts.assign(bin_count, 0);

  const std::size_t last = bin_count - 1;
  for (const double v : values) {
    auto idx = static_cast<std::size_t>(
        std::clamp(std::floor((v - lo) / width), 0.0, static_cast<double>(last)));
    // Reconcile floor() rounding with the stored edges.
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx < last && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  return h;
}

}  // namespace icm
