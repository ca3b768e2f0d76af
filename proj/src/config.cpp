#include "cloudcraft/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

extern char** environ;

namespace cloudcraft {

namespace {

// Table 2 testbed printers and the published operating assumptions.
constexpr const char* kDefaultConfig = R"JSON({
  "api": {"listen": "127.0.0.1", "port": 8080},
  "cloud_gateway": {"listen": "127.0.0.1", "port": 8453},
  "data_dir": "cloudcraft-data",
  "auth": {
    "signing_key": "dev-signing-key-change-me",
    "token_lifetime_s": 3600,
    "pbkdf2_iterations": 10000
  },
  "discovery": {"service_ttl_s": 10, "agent_ttl_s": 60},
  "tariff_eur_per_kwh": "0.30",
  "fixed_costs": {
    "webshop_monthly_eur": "29.00",
    "cloud_monthly_eur": "175.00",
    "monthly_volume": 100,
    "transaction_fee": 0.02,
    "transaction_fee_enabled": false
  },
  "share_weights": {
    "platform": 0.40,
    "printer_operator": 0.30,
    "webshop_operator": 0.20,
    "designer": 0.10
  },
  "sale_price_eur": "10.00",
  "printers": {
    "ultimaker2plus": {
      "model_name": "Ultimaker 2+ CONNECT",
      "filament": {"material": "PLA", "spool_mass_g": 750, "spool_price_eur": "42.99"},
      "unit_filament_mass_g": 2.9,
      "capabilities": ["PLA"],
      "location": {"lat": 48.2082, "lon": 16.3738},
      "phases": {
        "pre_print": {"duration_s": 198, "energy_wh": 12.28},
        "print": {"duration_s": 2105, "energy_wh": 77.93},
        "post_print": {"duration_s": 352, "energy_wh": 0.52}
      }
    },
    "k1max": {
      "model_name": "Creality K1 MAX",
      "filament": {"material": "PLA", "spool_mass_g": 1000, "spool_price_eur": "23.14"},
      "unit_filament_mass_g": 2.835,
      "capabilities": ["PLA"],
      "location": {"lat": 47.0707, "lon": 15.4395},
      "phases": {
        "pre_print": {"duration_s": 254, "energy_wh": 14.18},
        "print": {"duration_s": 546, "energy_wh": 22.06},
        "post_print": {"duration_s": 10, "energy_wh": 0.1}
      }
    },
    "mk4": {
      "model_name": "Prusa MK4",
      "filament": {"material": "PLA", "spool_mass_g": 1000, "spool_price_eur": "29.99"},
      "unit_filament_mass_g": 2.85,
      "capabilities": ["PLA"],
      "location": {"lat": 48.3069, "lon": 14.2858},
      "phases": {
        "pre_print": {"duration_s": 287, "energy_wh": 15.73},
        "print": {"duration_s": 640, "energy_wh": 34.29},
        "post_print": {"duration_s": 46, "energy_wh": 1.02}
      }
    }
  }
})JSON";

void deep_merge(nlohmann::json& base, const nlohmann::json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()))
      deep_merge(base[it.key()], it.value());
    else
      base[it.key()] = it.value();
  }
}

size_t line_of_offset(const std::string& text, size_t offset) {
  return 1 + static_cast<size_t>(
                 std::count(text.begin(), text.begin() + std::min(offset, text.size()), '\n'));
}

Money money_from_node(const nlohmann::json& node) {
  if (node.is_string()) return Money::parse(node.get<std::string>());
  if (node.is_number()) return Money::from_euros_approx(node.get<double>());
  throw BadConfig("expected a money amount, got " + node.dump());
}

// Greedily join underscore-separated tokens against existing keys so
// CLOUDCRAFT_FIXED_COSTS_MONTHLY_VOLUME reaches fixed_costs.monthly_volume.
bool apply_override(nlohmann::json& node, const std::vector<std::string>& tokens, size_t start,
                    const std::string& raw_value) {
  if (!node.is_object()) return false;
  std::string key;
  for (size_t end = start; end < tokens.size(); ++end) {
    key = key.empty() ? tokens[end] : key + "_" + tokens[end];
    if (!node.contains(key)) continue;
    if (end + 1 == tokens.size()) {
      nlohmann::json parsed = nlohmann::json::parse(raw_value, nullptr, false);
      if (parsed.is_discarded() || parsed.is_object() || parsed.is_array())
        node[key] = raw_value;
      else
        node[key] = parsed;
      return true;
    }
    if (apply_override(node[key], tokens, end + 1, raw_value)) return true;
  }
  return false;
}

}  // namespace

Config Config::defaults() {
  Config c;
  c.tree_ = nlohmann::json::parse(kDefaultConfig);
  return c;
}

Config Config::from_json(nlohmann::json tree) {
  Config c = defaults();
  deep_merge(c.tree_, tree);
  c.apply_env_overrides();
  return c;
}

Config Config::load(const std::filesystem::path& file) {
  Config c = defaults();
  if (!file.empty()) c.merge_file(file);
  c.apply_env_overrides();
  return c;
}

void Config::merge_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw BadConfig("cannot open " + file.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    nlohmann::json overlay = nlohmann::json::parse(text);
    deep_merge(tree_, overlay);
  } catch (const nlohmann::json::parse_error& e) {
    throw BadConfig(file.string() + " line " + std::to_string(line_of_offset(text, e.byte)) +
                    ": " + e.what());
  }
}

void Config::apply_env_overrides(const char* prefix) {
  const size_t prefix_len = std::strlen(prefix);
  for (char** env = environ; *env != nullptr; ++env) {
    std::string entry(*env);
    if (entry.compare(0, prefix_len, prefix) != 0) continue;
    size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix_len, eq - prefix_len);
    std::string value = entry.substr(eq + 1);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::vector<std::string> tokens;
    size_t pos = 0;
    while (pos <= name.size()) {
      size_t next = name.find('_', pos);
      if (next == std::string::npos) next = name.size();
      tokens.push_back(name.substr(pos, next - pos));
      pos = next + 1;
    }
    apply_override(tree_, tokens, 0, value);
  }
}

const nlohmann::json& Config::at_path(const std::string& dotted_path) const {
  const nlohmann::json* node = &tree_;
  size_t pos = 0;
  while (pos <= dotted_path.size()) {
    size_t next = dotted_path.find('.', pos);
    if (next == std::string::npos) next = dotted_path.size();
    const std::string key = dotted_path.substr(pos, next - pos);
    if (!node->is_object() || !node->contains(key))
      throw BadConfig("missing key: " + dotted_path);
    node = &node->at(key);
    pos = next + 1;
  }
  return *node;
}

std::string Config::get_string(const std::string& p) const {
  const auto& n = at_path(p);
  if (!n.is_string()) throw BadConfig(p + " must be a string");
  return n.get<std::string>();
}

int64_t Config::get_int(const std::string& p) const {
  const auto& n = at_path(p);
  if (!n.is_number_integer()) throw BadConfig(p + " must be an integer");
  return n.get<int64_t>();
}

double Config::get_double(const std::string& p) const {
  const auto& n = at_path(p);
  if (!n.is_number()) throw BadConfig(p + " must be a number");
  return n.get<double>();
}

bool Config::get_bool(const std::string& p) const {
  const auto& n = at_path(p);
  if (!n.is_boolean()) throw BadConfig(p + " must be a boolean");
  return n.get<bool>();
}

Money Config::get_money(const std::string& p) const { return money_from_node(at_path(p)); }

PrinterProfile profile_from_config(const std::string& printer_id, const nlohmann::json& node) {
  try {
    PrinterProfile p;
    p.printer_id = printer_id;
    p.model_name = node.value("model_name", printer_id);
    const auto& fil = node.at("filament");
    p.filament.material_name = fil.at("material").get<std::string>();
    p.filament.spool_mass = Mass::from_grams(fil.at("spool_mass_g").get<double>());
    p.filament.spool_price = money_from_node(fil.at("spool_price_eur"));
    p.unit_filament_mass = Mass::from_grams(node.at("unit_filament_mass_g").get<double>());
    if (node.contains("capabilities"))
      for (const auto& c : node.at("capabilities")) p.capabilities.insert(c.get<std::string>());
    else
      p.capabilities.insert(p.filament.material_name);
    p.location.latitude = node.at("location").at("lat").get<double>();
    p.location.longitude = node.at("location").at("lon").get<double>();
    const auto& phases = node.at("phases");
    const std::array<std::pair<Phase, const char*>, 3> order = {
        std::pair{Phase::PrePrint, "pre_print"}, std::pair{Phase::Print, "print"},
        std::pair{Phase::PostPrint, "post_print"}};
    for (size_t i = 0; i < 3; ++i) {
      const auto& ph = phases.at(order[i].second);
      p.phases[i].phase = order[i].first;
      p.phases[i].duration =
          std::chrono::milliseconds(std::llround(ph.at("duration_s").get<double>() * 1000.0));
      p.phases[i].energy = Energy::from_wh(ph.at("energy_wh").get<double>());
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw BadConfig("printer '" + printer_id + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw BadConfig("printer '" + printer_id + "': " + e.what());
  }
}

PlatformSettings settings_from_config(const Config& config) {
  try {
    PlatformSettings s;
    s.api_listen = config.get_string("api.listen");
    s.api_port = static_cast<int>(config.get_int("api.port"));
    s.gateway_listen = config.get_string("cloud_gateway.listen");
    s.gateway_port = static_cast<int>(config.get_int("cloud_gateway.port"));
    s.data_dir = config.get_string("data_dir");
    s.signing_key = config.get_string("auth.signing_key");
    s.token_lifetime_s = config.get_int("auth.token_lifetime_s");
    s.pbkdf2_iterations = static_cast<int>(config.get_int("auth.pbkdf2_iterations"));
    s.service_ttl_s = config.get_int("discovery.service_ttl_s");
    s.agent_ttl_s = config.get_int("discovery.agent_ttl_s");
    s.tariff.rate_per_kwh = config.get_money("tariff_eur_per_kwh");
    s.fixed_costs.webshop_monthly = config.get_money("fixed_costs.webshop_monthly_eur");
    s.fixed_costs.cloud_monthly = config.get_money("fixed_costs.cloud_monthly_eur");
    s.fixed_costs.monthly_volume = config.get_int("fixed_costs.monthly_volume");
    s.fixed_costs.transaction_fee_ppm =
        static_cast<int32_t>(std::llround(config.get_double("fixed_costs.transaction_fee") * 1e6));
    s.fixed_costs.transaction_fee_enabled = config.get_bool("fixed_costs.transaction_fee_enabled");
    s.share_weights.platform_ppm =
        static_cast<int32_t>(std::llround(config.get_double("share_weights.platform") * 1e6));
    s.share_weights.printer_operator_ppm = static_cast<int32_t>(
        std::llround(config.get_double("share_weights.printer_operator") * 1e6));
    s.share_weights.webshop_operator_ppm = static_cast<int32_t>(
        std::llround(config.get_double("share_weights.webshop_operator") * 1e6));
    s.share_weights.designer_ppm =
        static_cast<int32_t>(std::llround(config.get_double("share_weights.designer") * 1e6));
    s.default_sale_price = config.get_money("sale_price_eur");

    const auto& printers = config.tree().at("printers");
    for (auto it = printers.begin(); it != printers.end(); ++it)
      s.printers.emplace(it.key(), profile_from_config(it.key(), it.value()));

    s.tariff.validate();
    s.fixed_costs.validate();
    s.share_weights.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw BadConfig(e.what());
  } catch (const std::invalid_argument& e) {
    throw BadConfig(e.what());
  }
}

}  // namespace cloudcraft
