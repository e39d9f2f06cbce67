#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace pavinglab::cli {

using ordered_json = nlohmann::ordered_json;

std::string iso_timestamp();

// JSON report: {"schema","subcommand","config",("timestamp",)"results"}.
// Config keys are emitted sorted; rerunning with the same config and seed
// produces byte-identical files when the timestamp is suppressed.
void write_json_report(const std::string& path, const std::string& subcommand,
                       const std::map<std::string, ordered_json>& config,
                       const ordered_json& results, bool with_timestamp);

// CSV report: "# key = value" comment header (config echo), one header row,
// then data rows. Same determinism contract as the JSON writer.
void write_csv_report(const std::string& path, const std::string& subcommand,
                      const std::map<std::string, std::string>& config,
                      const std::string& header,
                      const std::vector<std::string>& rows,
                      bool with_timestamp);

}  // namespace pavinglab::cli
