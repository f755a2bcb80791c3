#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hermite_obs::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kContract = 2, kPrecisionCeiling = 3, kIo = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MergedArgs {
  std::vector<std::string> args;  // argv without the program name, config folded in
  std::vector<std::string> warnings;
  std::string config_path;
};

// Folds `--config file.json` into the argument list.  Keys name long flags
// without the dashes; flags already on the command line win.
MergedArgs merge_config(const std::vector<std::string>& argv);

// "4:64:4" (inclusive range with step), "4,8,16" or "8".
std::vector<int> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

using Cell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  // Fixed column order, %.17g floats, LF line endings.
  std::string render() const;
};

// Writes `content`; a missing parent directory is created only with mkdirs.
void write_file(const std::string& path, const std::string& content, bool mkdirs);

}  // namespace hermite_obs::cli
