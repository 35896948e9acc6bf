#include "vidmeter/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "vidmeter/error.hpp"
#include "vidmeter/framelog_csv.hpp"

namespace vidmeter {

namespace {

std::string shortest_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

void Report::set_config(std::string key, std::string value) {
  config_.emplace_back(std::move(key), std::move(value));
}

void Report::note(std::string key, std::string value) {
  set_config(std::move(key), std::move(value));
}

void Report::add(std::string metric, double value, std::string unit,
                 std::string provenance) {
  if (!std::isfinite(value)) {
    raise(Errc::domain_error, "non-finite value for metric '" + metric + "'");
  }
  rows_.push_back(
      {std::move(metric), value, std::move(unit), std::move(provenance)});
}

std::string Report::to_csv() const {
  std::string out;
  for (const auto& [key, value] : config_) {
    out += "# " + key + "=" + value + "\n";
  }
  out += "metric,value,unit,provenance\n";
  for (const auto& row : rows_) {
    out += row.metric + "," + shortest_double(row.value) + "," + row.unit +
           "," + row.provenance + "\n";
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_) j["config"][key] = value;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r;
    r["metric"] = row.metric;
    r["value"] = row.value;
    r["unit"] = row.unit;
    r["provenance"] = row.provenance;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

void Report::write_csv(const std::filesystem::path& path) const {
  write_file(path, to_csv());
}

void Report::write_json(const std::filesystem::path& path) const {
  write_file(path, to_json());
}

}  // namespace vidmeter
