#include "report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "pavinglab/errors.hpp"

namespace pavinglab::cli {

std::string iso_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json_report(const std::string& path, const std::string& subcommand,
                       const std::map<std::string, ordered_json>& config,
                       const ordered_json& results, bool with_timestamp) {
  ordered_json doc;
  doc["schema"] = "paving-lab/1";
  doc["subcommand"] = subcommand;
  ordered_json cfg;
  for (const auto& [key, value] : config) cfg[key] = value;
  doc["config"] = std::move(cfg);
  if (with_timestamp) doc["timestamp"] = iso_timestamp();
  doc["results"] = results;
  std::ofstream out(path);
  if (!out) throw IoError("report: cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("report: write failed for " + path);
}

void write_csv_report(const std::string& path, const std::string& subcommand,
                      const std::map<std::string, std::string>& config,
                      const std::string& header,
                      const std::vector<std::string>& rows,
                      bool with_timestamp) {
  std::ofstream out(path);
  if (!out) throw IoError("report: cannot write " + path);
  out << "# schema = paving-lab/1\n";
  out << "# subcommand = " << subcommand << "\n";
  for (const auto& [key, value] : config) {
    out << "# " << key << " = " << value << "\n";
  }
  if (with_timestamp) out << "# timestamp = " << iso_timestamp() << "\n";
  out << header << "\n";
  for (const std::string& row : rows) out << row << "\n";
  if (!out) throw IoError("report: write failed for " + path);
}

}  // namespace pavinglab::cli
