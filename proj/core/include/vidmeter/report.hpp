#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace vidmeter {

/// One plot-ready data point: metric name, value, unit, and where the number
/// came from ("computed", "config", "model", "input").
struct ReportRecord {
  std::string metric;
  double value = 0.0;
  std::string unit;
  std::string provenance = "computed";
};

/// Flat key-value report with the exact configuration echoed, so any figure
/// built from it can be regenerated.
class Report {
 public:
  void set_config(std::string key, std::string value);
  /// DomainError on non-finite values — every emitted number must be real.
  void add(std::string metric, double value, std::string unit,
           std::string provenance = "computed");
  void note(std::string key, std::string value);  // free-form config note

  const std::vector<ReportRecord>& rows() const { return rows_; }

  std::string to_csv() const;
  std::string to_json() const;
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<ReportRecord> rows_;
};

}  // namespace vidmeter
