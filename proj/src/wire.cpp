#include "cloudcraft/wire.hpp"

namespace cloudcraft::net {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::Register: return "register";
    case MsgKind::Heartbeat: return "heartbeat";
    case MsgKind::JobAssign: return "job_assign";
    case MsgKind::JobAccept: return "job_accept";
    case MsgKind::PhaseStarted: return "phase_started";
    case MsgKind::PhaseCompleted: return "phase_completed";
    case MsgKind::MeterSample: return "meter_sample";
    case MsgKind::JobComplete: return "job_complete";
    case MsgKind::JobError: return "job_error";
  }
  return "?";
}

MsgKind msg_kind_from_name(const std::string& name) {
  for (MsgKind k : kAllMsgKinds)
    if (name == msg_kind_name(k)) return k;
  throw MalformedMessage("unknown kind: " + name);
}

std::string encode_line(const AgentMessage& msg) {
  nlohmann::json j{{"kind", msg_kind_name(msg.kind)},
                   {"sequence", msg.sequence},
                   {"printer_id", msg.printer_id},
                   {"body", msg.body}};
  return j.dump();
}

AgentMessage decode_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) throw MalformedMessage("not valid JSON");
  if (!j.is_object()) throw MalformedMessage("not an object");
  AgentMessage msg;
  try {
    msg.kind = msg_kind_from_name(j.at("kind").get<std::string>());
    msg.sequence = j.at("sequence").get<uint64_t>();
    msg.printer_id = j.at("printer_id").get<std::string>();
    msg.body = j.value("body", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw MalformedMessage(e.what());
  }
  return msg;
}

}  // namespace cloudcraft::net
