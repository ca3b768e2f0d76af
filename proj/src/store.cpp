#include "cloudcraft/store.hpp"

#include <mutex>

#include <json.hpp>

namespace cloudcraft {

const char* namespace_name(Namespace ns) {
  switch (ns) {
    case Namespace::Users: return "users";
    case Namespace::Orders: return "orders";
    case Namespace::Printers: return "printers";
    case Namespace::Billing: return "billing";
    case Namespace::RedeemCodes: return "redeem_codes";
    case Namespace::Models: return "models";
  }
  return "?";
}

Namespace namespace_from_name(const std::string& name) {
  for (Namespace ns : kAllNamespaces)
    if (name == namespace_name(ns)) return ns;
  throw std::invalid_argument("unknown namespace: " + name);
}

namespace {

std::string record_line(Namespace ns, const std::string& key, uint64_t version,
                        const std::string& value) {
  nlohmann::json j{{"namespace", namespace_name(ns)},
                   {"key", key},
                   {"version", version},
                   {"value", value}};
  return j.dump();
}

}  // namespace

JournalStore::JournalStore(const std::filesystem::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StorageUnavailable("cannot create " + dir.string() + ": " + ec.message());
  journal_path_ = dir / "journal.ndjson";

  if (std::filesystem::exists(journal_path_)) {
    std::ifstream in(journal_path_);
    if (!in) throw StorageUnavailable("cannot open " + journal_path_.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded())
        throw StorageUnavailable("corrupt journal line " + std::to_string(lineno));
      Key k{namespace_from_name(j.at("namespace").get<std::string>()),
            j.at("key").get<std::string>()};
      records_[k] = VersionedValue{j.at("value").get<std::string>(),
                                   j.at("version").get<uint64_t>()};
    }
  }

  journal_.open(journal_path_, std::ios::app);
  if (!journal_) throw StorageUnavailable("cannot append to " + journal_path_.string());
}

uint64_t JournalStore::put(Namespace ns, const std::string& key, const std::string& value,
                           std::optional<uint64_t> expected_version) {
  std::unique_lock lock(mu_);
  auto it = records_.find(Key{ns, key});
  const uint64_t current = it == records_.end() ? 0 : it->second.version;
  if (expected_version && *expected_version != current)
    throw VersionConflict(ns, key, *expected_version, current);
  const uint64_t next = current + 1;

  if (journal_.is_open()) {
    journal_ << record_line(ns, key, next, value) << '\n';
    journal_.flush();
    if (!journal_) throw StorageUnavailable("journal write failed");
  }
  records_[Key{ns, key}] = VersionedValue{value, next};
  return next;
}

std::optional<VersionedValue> JournalStore::try_get(Namespace ns, const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(Key{ns, key});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, std::string>> JournalStore::scan_prefix(
    Namespace ns, const std::string& key_prefix) const {
  std::shared_lock lock(mu_);
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = records_.lower_bound(Key{ns, key_prefix}); it != records_.end(); ++it) {
    if (it->first.first != ns) break;
    const std::string& k = it->first.second;
    if (k.compare(0, key_prefix.size(), key_prefix) != 0) break;
    out.emplace_back(k, it->second.value);
  }
  return out;
}

void JournalStore::dump(std::ostream& out) const {
  std::shared_lock lock(mu_);
  for (const auto& [key, rec] : records_)
    out << record_line(key.first, key.second, rec.version, rec.value) << '\n';
}

}  // namespace cloudcraft
