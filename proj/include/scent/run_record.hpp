#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scent {

struct MetricRow {
  std::uint64_t iteration;
  double wall_clock_seconds;
  std::string metric;
  double value;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string config_id;
  std::vector<MetricRow> rows;

  void add(std::uint64_t iteration, double wall, std::string metric, double value) {
    rows.push_back({iteration, wall, std::move(metric), value});
  }

  // Last value recorded under a metric name.
  std::optional<double> last(const std::string& metric) const {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      if (it->metric == metric) return it->value;
    }
    return std::nullopt;
  }

  std::vector<MetricRow> series(const std::string& metric) const {
    std::vector<MetricRow> out;
    for (const auto& r : rows) {
      if (r.metric == metric) out.push_back(r);
    }
    return out;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace scent
