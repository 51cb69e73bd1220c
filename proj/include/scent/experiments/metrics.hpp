#pragma once

// Metrics files: one `<config_id>_<seed>.csv` per run with header
// `iteration,metric,value`, and a `summary.csv` with per (config_id, metric,
// iteration) mean and sample standard deviation across seeds. Wall-clock
// times are not written, so reruns are byte-identical.

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/run_record.hpp"

namespace scent {

struct SummaryRow {
  std::string config_id;
  std::string metric;
  std::uint64_t iteration;
  double mean;
  double std;
  std::size_t count;
};

inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  struct Acc {
    std::vector<double> values;
  };
  std::map<std::tuple<std::string, std::string, std::uint64_t>, Acc> groups;
  for (const auto& rec : records) {
    for (const auto& row : rec.rows) groups[{rec.config_id, row.metric, row.iteration}].values.push_back(row.value);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, acc] : groups) {
    const auto& v = acc.values;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean, sd, v.size()});
  }
  return out;
}

inline std::string run_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "iteration,metric,value\n";
  for (const auto& row : rec.rows) out << row.iteration << ',' << row.metric << ',' << format_double(row.value) << '\n';
  return out.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "config_id,metric,iteration,mean,std,count\n";
  for (const auto& r : rows) {
    out << r.config_id << ',' << r.metric << ',' << r.iteration << ',' << format_double(r.mean) << ','
        << format_double(r.std) << ',' << r.count << '\n';
  }
  return out.str();
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

inline void emit_metrics(const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
  ensure_dir(dir);
  for (const auto& rec : records) {
    write_file_atomic(dir / (rec.config_id + "_" + std::to_string(rec.seed) + ".csv"), run_csv(rec));
  }
  write_file_atomic(dir / "summary.csv", summary_csv(summarize(records)));
}

}  // namespace scent
