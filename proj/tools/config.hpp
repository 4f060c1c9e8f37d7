#pragma once

// Subcommand options that may also come from a JSON config file. Flags
// given on the command line win over file values, which win over defaults.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace gencur::cli {

class OptionSet {
 public:
  explicit OptionSet(CLI::App* app);

  template <class T>
  void add(const std::string& flag, T default_value, const std::string& description) {
    auto value = std::make_shared<T>(default_value);
    CLI::Option* opt = app_->add_option("--" + flag, *value, description);
    const std::string key = key_of(flag);
    defaults_[key] = default_value;
    entries_.push_back({key, opt, [value] { return nlohmann::json(*value); }});
  }

  /// Defaults, overlaid by the --config file, overlaid by explicit flags.
  /// Unknown config keys throw ArgumentError.
  nlohmann::json resolve() const;

  static std::string key_of(const std::string& flag);

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<nlohmann::json()> value;
  };

  CLI::App* app_;
  std::string config_path_;
  nlohmann::json defaults_ = nlohmann::json::object();
  std::vector<Entry> entries_;
};

/// Comma-separated list to vector.
std::vector<std::string> split_list(const std::string& s);

}  // namespace gencur::cli
