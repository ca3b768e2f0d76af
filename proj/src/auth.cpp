#include "cloudcraft/auth.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <json.hpp>

namespace cloudcraft::auth {

const char* role_name(Role r) {
  switch (r) {
    case Role::Customer: return "customer";
    case Role::WebshopOperator: return "webshop_operator";
    case Role::PlatformOperator: return "platform_operator";
    case Role::Designer: return "designer";
    case Role::PrinterOperator: return "printer_operator";
  }
  return "?";
}

Role role_from_name(const std::string& name) {
  for (Role r : kAllRoles)
    if (name == role_name(r)) return r;
  throw std::invalid_argument("unknown role: " + name);
}

bool authorize(Role role, Action action) {
  switch (action) {
    case Action::UploadModel:
      return role == Role::Designer;
    case Action::CreateOrder:
      return role == Role::WebshopOperator;
    case Action::ReadOrder:
      return role == Role::WebshopOperator || role == Role::PlatformOperator;
    case Action::RegisterPrinter:
      return role == Role::PrinterOperator;
    case Action::ManageCodes:
      return role == Role::WebshopOperator || role == Role::PlatformOperator;
    case Action::ReadLedger:
      return true;  // own entries; platform operator reads all
  }
  return false;
}

namespace {

constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

std::string hmac_sha256(const std::string& key, const std::string& payload) {
  unsigned char mac[EVP_MAX_MD_SIZE];
  unsigned int mac_len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(payload.data()), payload.size(), mac, &mac_len);
  return std::string(reinterpret_cast<char*>(mac), mac_len);
}

bool constant_time_equal(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  unsigned char diff = 0;
  for (size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
  return diff == 0;
}

std::string to_hex(const unsigned char* data, size_t len) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(len * 2, '0');
  for (size_t i = 0; i < len; ++i) {
    out[2 * i] = digits[data[i] >> 4];
    out[2 * i + 1] = digits[data[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string base64url_encode(const std::string& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
    out += kB64Alphabet[v & 63];
    i += 3;
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
  } else if (rest == 2) {
    uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
  }
  return out;
}

std::optional<std::string> base64url_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '-') return 62;
    if (c == '_') return 63;
    return -1;
  };
  if (text.size() % 4 == 1) return std::nullopt;
  std::string out;
  uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    int v = value_of(c);
    if (v < 0) return std::nullopt;
    acc = (acc << 6) | static_cast<uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((acc >> bits) & 0xff);
    }
  }
  return out;
}

std::string random_hex(size_t bytes) {
  std::string buf(bytes, '\0');
  if (RAND_bytes(reinterpret_cast<unsigned char*>(buf.data()), static_cast<int>(bytes)) != 1)
    throw std::runtime_error("RAND_bytes failed");
  return to_hex(reinterpret_cast<const unsigned char*>(buf.data()), buf.size());
}

std::string random_code(size_t length) {
  static constexpr char alphabet[] = "23456789ABCDEFGHJKLMNPQRSTUVWXYZ";
  constexpr size_t n = sizeof(alphabet) - 1;
  std::string buf(length, '\0');
  if (RAND_bytes(reinterpret_cast<unsigned char*>(buf.data()), static_cast<int>(length)) != 1)
    throw std::runtime_error("RAND_bytes failed");
  std::string out(length, '\0');
  for (size_t i = 0; i < length; ++i)
    out[i] = alphabet[static_cast<unsigned char>(buf[i]) % n];
  return out;
}

AuthService::AuthService(Store& store, Clock& clock, std::string signing_key,
                         int64_t token_lifetime_s, int pbkdf2_iterations)
    : store_(store),
      clock_(clock),
      signing_key_(std::move(signing_key)),
      token_lifetime_s_(token_lifetime_s),
      pbkdf2_iterations_(pbkdf2_iterations) {
  if (signing_key_.empty()) throw std::invalid_argument("signing key must not be empty");
}

std::string AuthService::hash_credential(const std::string& credential,
                                         const std::string& salt_hex) const {
  unsigned char derived[32];
  if (PKCS5_PBKDF2_HMAC(credential.data(), static_cast<int>(credential.size()),
                        reinterpret_cast<const unsigned char*>(salt_hex.data()),
                        static_cast<int>(salt_hex.size()), pbkdf2_iterations_, EVP_sha256(),
                        sizeof(derived), derived) != 1)
    throw std::runtime_error("PBKDF2 failed");
  return "pbkdf2$" + std::to_string(pbkdf2_iterations_) + "$" + salt_hex + "$" +
         to_hex(derived, sizeof(derived));
}

UserAccount AuthService::register_user(const std::string& name, const std::string& credential,
                                       Role role) {
  if (name.empty()) throw std::invalid_argument("user name must not be empty");
  if (credential.size() < 8) throw WeakCredential();

  UserAccount account;
  account.user_id = name;
  account.display_name = name;
  account.role = role;
  account.credential_hash = hash_credential(credential, random_hex(16));

  nlohmann::json doc{{"user_id", account.user_id},
                     {"display_name", account.display_name},
                     {"credential_hash", account.credential_hash},
                     {"role", role_name(account.role)}};
  try {
    store_.put(Namespace::Users, name, doc.dump(), 0);
  } catch (const VersionConflict&) {
    throw DuplicateUser(name);
  }
  return account;
}

std::optional<UserAccount> AuthService::find_user(const std::string& name) const {
  auto rec = store_.try_get(Namespace::Users, name);
  if (!rec) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(rec->value);
  UserAccount account;
  account.user_id = doc.at("user_id").get<std::string>();
  account.display_name = doc.at("display_name").get<std::string>();
  account.credential_hash = doc.at("credential_hash").get<std::string>();
  account.role = role_from_name(doc.at("role").get<std::string>());
  return account;
}

std::string AuthService::sign(const std::string& payload) const {
  return hmac_sha256(signing_key_, payload);
}

std::string AuthService::login(const std::string& name, const std::string& credential) {
  auto account = find_user(name);
  if (!account) {
    // Hash anyway so unknown users cost the same as wrong credentials.
    hash_credential(credential, "0000000000000000");
    throw BadCredentials();
  }
  // stored form: pbkdf2$<iters>$<salt>$<hash>
  const std::string& stored = account->credential_hash;
  size_t p1 = stored.find('$');
  size_t p2 = stored.find('$', p1 + 1);
  size_t p3 = stored.find('$', p2 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos || p3 == std::string::npos)
    throw BadCredentials();
  const std::string salt = stored.substr(p2 + 1, p3 - p2 - 1);
  if (!constant_time_equal(hash_credential(credential, salt), stored)) throw BadCredentials();

  const int64_t now = clock_.now_ms();
  nlohmann::json payload{{"sub", account->user_id},
                         {"role", role_name(account->role)},
                         {"iat", now},
                         {"exp", now + token_lifetime_s_ * 1000}};
  const std::string body = payload.dump();
  return base64url_encode(body) + "." + base64url_encode(sign(body));
}

TokenClaims AuthService::validate(const std::string& token) const {
  const size_t dot = token.find('.');
  if (dot == std::string::npos) throw InvalidToken();
  auto body = base64url_decode(token.substr(0, dot));
  auto mac = base64url_decode(token.substr(dot + 1));
  if (!body || !mac) throw InvalidToken();
  if (!constant_time_equal(sign(*body), *mac)) throw InvalidToken();

  nlohmann::json payload = nlohmann::json::parse(*body, nullptr, false);
  if (payload.is_discarded()) throw InvalidToken();
  TokenClaims claims;
  try {
    claims.subject = payload.at("sub").get<std::string>();
    claims.role = role_from_name(payload.at("role").get<std::string>());
    claims.issued_at_ms = payload.at("iat").get<int64_t>();
    claims.expires_at_ms = payload.at("exp").get<int64_t>();
  } catch (const std::exception&) {
    throw InvalidToken();
  }
  if (clock_.now_ms() >= claims.expires_at_ms) throw ExpiredToken();
  return claims;
}

}  // namespace cloudcraft::auth
