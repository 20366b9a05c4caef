#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace catq::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kInputError = 2, kNumericalFailure = 3 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = ".";
  bool verify = false;
  std::uint64_t seed = 0;
  std::optional<int> cutoff;
  std::optional<double> tol;
  bool fit = false;
};

// Effective configuration: command defaults overlaid with the config file.
struct Config {
  std::string command;
  nlohmann::json values;
  std::string hash;  // 16 hex digits over command + canonical JSON

  double real(const std::string& key) const { return values.at(key).get<double>(); }
  int integer(const std::string& key) const { return values.at(key).get<int>(); }
  std::string text(const std::string& key) const { return values.at(key).get<std::string>(); }
  bool flag(const std::string& key) const { return values.at(key).get<bool>(); }
};

// Defaults of every config key accepted by `command`.
nlohmann::json command_defaults(const std::string& command);

// Rejects non-object documents, unknown keys, and values whose JSON type differs from the
// default's (an integer default requires an integer).
Config make_config(const std::string& command, const nlohmann::json& file_values);
Config load_config(const std::string& command, const std::optional<std::filesystem::path>& path);

std::string provenance_line(const Config& config, std::uint64_t seed);

int cmd_table1(const Options& opts, const Config& config, std::ostream& log);
int cmd_fidelity_map(const Options& opts, const Config& config, std::ostream& log);
int cmd_entangled(const Options& opts, const Config& config, std::ostream& log);
int cmd_fock_scheme(const Options& opts, const Config& config, std::ostream& log);
int cmd_wigner(const Options& opts, const Config& config, std::ostream& log);

// Full command line: parses, dispatches, maps exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catq::cli
