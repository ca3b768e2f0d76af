#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace cloudcraft::net {

enum class MsgKind {
  Register,
  Heartbeat,
  JobAssign,
  JobAccept,
  PhaseStarted,
  PhaseCompleted,
  MeterSample,
  JobComplete,
  JobError,
};

inline constexpr std::array<MsgKind, 9> kAllMsgKinds = {
    MsgKind::Register,   MsgKind::Heartbeat,      MsgKind::JobAssign,
    MsgKind::JobAccept,  MsgKind::PhaseStarted,   MsgKind::PhaseCompleted,
    MsgKind::MeterSample, MsgKind::JobComplete,   MsgKind::JobError};

const char* msg_kind_name(MsgKind k);
MsgKind msg_kind_from_name(const std::string& name);

class MalformedMessage : public std::runtime_error {
 public:
  explicit MalformedMessage(const std::string& why)
      : std::runtime_error("malformed agent message: " + why) {}
};

// One JSON document per line, UTF-8. Sequence numbers increase by
// exactly one within a session, each direction counting its own.
struct AgentMessage {
  MsgKind kind = MsgKind::Heartbeat;
  uint64_t sequence = 0;
  std::string printer_id;
  nlohmann::json body = nlohmann::json::object();
};

std::string encode_line(const AgentMessage& msg);
AgentMessage decode_line(const std::string& line);

}  // namespace cloudcraft::net
