#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "cloudcraft/costmodel.hpp"
#include "cloudcraft/domain.hpp"
#include "cloudcraft/money.hpp"

namespace cloudcraft {

class BadConfig : public std::runtime_error {
 public:
  explicit BadConfig(const std::string& why) : std::runtime_error("bad config: " + why) {}
};

// Declarative configuration: a JSON tree merged from built-in defaults,
// an optional config file, and CLOUDCRAFT_* environment overrides (in
// that order). Underscores in variable names match nested keys greedily,
// e.g. CLOUDCRAFT_API_PORT -> api.port, CLOUDCRAFT_DATA_DIR -> data_dir.
class Config {
 public:
  static Config defaults();
  static Config load(const std::filesystem::path& file);  // defaults + file + env
  static Config from_json(nlohmann::json tree);            // tree + env

  const nlohmann::json& tree() const { return tree_; }

  std::string get_string(const std::string& dotted_path) const;
  int64_t get_int(const std::string& dotted_path) const;
  double get_double(const std::string& dotted_path) const;
  bool get_bool(const std::string& dotted_path) const;
  Money get_money(const std::string& dotted_path) const;

  void apply_env_overrides(const char* prefix = "CLOUDCRAFT_");
  void merge_file(const std::filesystem::path& file);

 private:
  const nlohmann::json& at_path(const std::string& dotted_path) const;
  nlohmann::json tree_;
};

// Everything the composed platform needs, decoded once.
struct PlatformSettings {
  std::string api_listen = "127.0.0.1";
  int api_port = 8080;
  std::string gateway_listen = "127.0.0.1";
  int gateway_port = 8453;
  std::filesystem::path data_dir = "cloudcraft-data";

  std::string signing_key;
  int64_t token_lifetime_s = 3600;
  int pbkdf2_iterations = 10'000;

  int64_t service_ttl_s = 10;
  int64_t agent_ttl_s = 60;

  cost::EnergyTariff tariff{Money::parse("0.30")};
  cost::FixedCosts fixed_costs;
  cost::ShareWeights share_weights;
  Money default_sale_price = Money::parse("10.00");

  std::map<std::string, PrinterProfile> printers;
};

PlatformSettings settings_from_config(const Config& config);

// Profile in the human config format (grams, watt-hours, seconds).
PrinterProfile profile_from_config(const std::string& printer_id, const nlohmann::json& node);

}  // namespace cloudcraft
