#include "afsim/metrics.hpp"

#include <cmath>

namespace afsim {

namespace {

double throughput(std::uint64_t bytes, double duration_s) {
  if (!(duration_s > 0.0)) throw MetricError("throughput undefined for a zero-length run");
  return static_cast<double>(bytes) * 8.0 / duration_s;
}

}  // namespace

double green_throughput(const CustomerStats& stats) {
  return throughput(stats.delivered_bytes[index_of(Color::Green)], stats.duration_s);
}

double reserved_rate_utilization(const CustomerStats& stats, double green_rate_bps) {
  if (!(green_rate_bps > 0.0)) {
    throw MetricError("utilization undefined for customer " + std::to_string(stats.customer_id) +
                      ": reserved rate is zero");
  }
  return green_throughput(stats) / green_rate_bps;
}

double excess_throughput(const CustomerStats& stats) {
  return throughput(stats.delivered_bytes[index_of(Color::Yellow)] + stats.delivered_bytes[index_of(Color::Red)],
                    stats.duration_s);
}

double fairness_index(std::span<const double> x) {
  if (x.empty()) throw MetricError("fairness index needs at least one value");
  // Normalising by the largest entry keeps the squares in range.
  double peak = 0.0;
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw MetricError("fairness index inputs must be finite and non-negative");
    peak = std::max(peak, v);
  }
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : x) {
    const double u = v / peak;
    sum += u;
    sum_sq += u * u;
  }
  return (sum * sum) / (static_cast<double>(x.size()) * sum_sq);
}

}  // namespace afsim
