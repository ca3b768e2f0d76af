#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "cloudcraft/clock.hpp"
#include "cloudcraft/store.hpp"

namespace cloudcraft::auth {

enum class Role { Customer, WebshopOperator, PlatformOperator, Designer, PrinterOperator };

inline constexpr std::array<Role, 5> kAllRoles = {Role::Customer, Role::WebshopOperator,
                                                  Role::PlatformOperator, Role::Designer,
                                                  Role::PrinterOperator};

const char* role_name(Role r);
Role role_from_name(const std::string& name);

enum class Action {
  UploadModel,
  CreateOrder,
  ReadOrder,
  RegisterPrinter,
  ManageCodes,
  ReadLedger,
};

inline constexpr std::array<Action, 6> kAllActions = {
    Action::UploadModel, Action::CreateOrder, Action::ReadOrder,
    Action::RegisterPrinter, Action::ManageCodes, Action::ReadLedger};

// Fixed role/action matrix, deny by default. ReadLedger allows every
// role but is scoped to the caller's own entries unless the caller is
// the platform operator (scoping enforced at the endpoint).
bool authorize(Role role, Action action);

struct UserAccount {
  std::string user_id;
  std::string display_name;
  std::string credential_hash;  // pbkdf2$<iters>$<salt-hex>$<hash-hex>
  Role role = Role::Customer;
};

struct TokenClaims {
  std::string subject;
  Role role = Role::Customer;
  int64_t issued_at_ms = 0;
  int64_t expires_at_ms = 0;
};

class DuplicateUser : public std::runtime_error {
 public:
  explicit DuplicateUser(const std::string& name)
      : std::runtime_error("user already exists: " + name) {}
};

class WeakCredential : public std::runtime_error {
 public:
  WeakCredential() : std::runtime_error("credential must be at least 8 characters") {}
};

// One error for unknown user and wrong credential alike.
class BadCredentials : public std::runtime_error {
 public:
  BadCredentials() : std::runtime_error("bad credentials") {}
};

class InvalidToken : public std::runtime_error {
 public:
  InvalidToken() : std::runtime_error("invalid token") {}
};

class ExpiredToken : public std::runtime_error {
 public:
  ExpiredToken() : std::runtime_error("expired token") {}
};

class AuthService {
 public:
  AuthService(Store& store, Clock& clock, std::string signing_key,
              int64_t token_lifetime_s = 3600, int pbkdf2_iterations = 10'000);

  UserAccount register_user(const std::string& name, const std::string& credential, Role role);
  std::string login(const std::string& name, const std::string& credential);
  TokenClaims validate(const std::string& token) const;
  std::optional<UserAccount> find_user(const std::string& name) const;

  // Exposed for tests: stable salted hash of a credential.
  std::string hash_credential(const std::string& credential, const std::string& salt_hex) const;

 private:
  std::string sign(const std::string& payload) const;

  Store& store_;
  Clock& clock_;
  std::string signing_key_;
  int64_t token_lifetime_s_;
  int pbkdf2_iterations_;
};

std::string base64url_encode(const std::string& bytes);
std::optional<std::string> base64url_decode(const std::string& text);
std::string random_hex(size_t bytes);
// Unambiguous alphabet (no 0/O/1/I), used for redeem codes.
std::string random_code(size_t length);

}  // namespace cloudcraft::auth
