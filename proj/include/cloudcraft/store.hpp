#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace cloudcraft {

enum class Namespace { Users, Orders, Printers, Billing, RedeemCodes, Models };

inline constexpr std::array<Namespace, 6> kAllNamespaces = {
    Namespace::Users,   Namespace::Orders,      Namespace::Printers,
    Namespace::Billing, Namespace::RedeemCodes, Namespace::Models};

const char* namespace_name(Namespace ns);
Namespace namespace_from_name(const std::string& name);

struct VersionedValue {
  std::string value;
  uint64_t version = 0;
};

class NotFound : public std::runtime_error {
 public:
  NotFound(Namespace ns, const std::string& key)
      : std::runtime_error(std::string("not found: ") + namespace_name(ns) + "/" + key) {}
};

class VersionConflict : public std::runtime_error {
 public:
  VersionConflict(Namespace ns, const std::string& key, uint64_t expected, uint64_t actual)
      : std::runtime_error(std::string("version conflict on ") + namespace_name(ns) + "/" + key +
                           ": expected " + std::to_string(expected) + ", have " +
                           std::to_string(actual)),
        expected(expected),
        actual(actual) {}
  uint64_t expected;
  uint64_t actual;
};

class StorageUnavailable : public std::runtime_error {
 public:
  explicit StorageUnavailable(const std::string& why)
      : std::runtime_error("storage unavailable: " + why) {}
};

// Centralized key-value persistence shared by all services. Writes are
// serialized and versioned per key; reads are concurrent.
class Store {
 public:
  virtual ~Store() = default;

  // expected_version semantics: absent = unconditional; 0 = key must not
  // exist; otherwise must equal the current version. Returns the new
  // version (previous + 1, or 1 for a new key).
  virtual uint64_t put(Namespace ns, const std::string& key, const std::string& value,
                       std::optional<uint64_t> expected_version = std::nullopt) = 0;
  virtual std::optional<VersionedValue> try_get(Namespace ns, const std::string& key) const = 0;
  virtual std::vector<std::pair<std::string, std::string>> scan_prefix(
      Namespace ns, const std::string& key_prefix) const = 0;
  // One record per line: {"namespace":..., "key":..., "version":..., "value":...}
  virtual void dump(std::ostream& out) const = 0;

  VersionedValue get(Namespace ns, const std::string& key) const {
    auto v = try_get(ns, key);
    if (!v) throw NotFound(ns, key);
    return *v;
  }
};

// Durable store backed by an append-only NDJSON journal replayed on open.
// The journal line format doubles as the dump format.
class JournalStore final : public Store {
 public:
  // In-memory only when dir is empty.
  explicit JournalStore(const std::filesystem::path& dir = {});

  uint64_t put(Namespace ns, const std::string& key, const std::string& value,
               std::optional<uint64_t> expected_version = std::nullopt) override;
  std::optional<VersionedValue> try_get(Namespace ns, const std::string& key) const override;
  std::vector<std::pair<std::string, std::string>> scan_prefix(
      Namespace ns, const std::string& key_prefix) const override;
  void dump(std::ostream& out) const override;

 private:
  using Key = std::pair<Namespace, std::string>;
  mutable std::shared_mutex mu_;
  std::map<Key, VersionedValue> records_;
  std::filesystem::path journal_path_;
  std::ofstream journal_;
};

}  // namespace cloudcraft
