#include "config.hpp"

#include <fstream>
#include <sstream>

#include "gencur/errors.hpp"

namespace gencur::cli {

OptionSet::OptionSet(CLI::App* app) : app_(app) {
  app_->add_option("--config", config_path_, "JSON file with option values; flags override it");
}

std::string OptionSet::key_of(const std::string& flag) {
  std::string key = flag;
  for (auto& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

nlohmann::json OptionSet::resolve() const {
  nlohmann::json resolved = defaults_;
  if (!config_path_.empty()) {
    std::ifstream in(config_path_);
    if (!in) throw ArgumentError("cannot open config file: " + config_path_);
    nlohmann::json file;
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ArgumentError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!file.is_object()) throw ArgumentError("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      const std::string k = key_of(key);
      if (!resolved.contains(k)) throw ArgumentError("unknown config key: " + key);
      if (value.type() != resolved[k].type() &&
          !(value.is_number() && resolved[k].is_number())) {
        throw ArgumentError("config key has the wrong type: " + key);
      }
      resolved[k] = value;
    }
  }
  for (const auto& e : entries_) {
    if (e.option->count() > 0) resolved[e.key] = e.value();
  }
  return resolved;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace gencur::cli
