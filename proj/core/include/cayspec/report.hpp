#pragma once

// Byte-stable report serialization.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cayspec/experiments.hpp"

namespace cayspec {

using Json = nlohmann::json;

std::string_view version() noexcept;

/// Sorted keys, floats with 12 significant digits, non-finite floats as
/// null, two-space indent, trailing newline.
std::string dump_stable(const Json& j);

/// "%.12g" formatting used by both JSON and CSV output.
std::string format_number(double x);

/// Removes every "seconds" and "timing" key, recursively.
Json strip_timing(Json j);

struct RunManifest {
  std::string command;                 ///< reproduction command line
  Json config = Json::object();        ///< echoed options
  std::string group;
  std::map<std::string, double> timing;  ///< seconds per phase

  Json to_json() const;
};

/// Builds "cayspec <sub> --key value ..." from a config echo, keys sorted.
std::string reproduction_command(std::string_view subcommand, const Json& config);

Json to_json(const TrialRecord& r);
Json to_json(const ExperimentResult& r);

inline constexpr std::string_view kExperimentCsvHeader = "trial,m,nu,bound,mu,fail,seconds";

/// One row per trial with the kExperimentCsvHeader columns.
std::string experiment_csv(const ExperimentResult& r);

/// Writes `text` to `path`, or to `console` when path is empty or "-". IoError on failure.
void write_output(const std::string& path, std::string_view text, std::ostream& console);

}  // namespace cayspec
