#pragma once

// Wire format shared by every protocol message:
//
//   kind:u8 | src:u32 | dst:u32 | seq:u64 | body_len:u32 | body bytes
//
// Bodies are flat field lists, each field prefixed with a u16 length, in
// the order the protocol line writes them. Sealed blobs are single fields
// whose decrypted content is again a field list. Everything little-endian
// and stable across runs, so golden-file tests can freeze exact bytes.

#include <cstdint>
#include <vector>

#include "vanet/bytes.hpp"
#include "vanet/errors.hpp"

namespace vanet {

using EntityId = std::uint32_t;

enum class MsgKind : std::uint8_t {
  KeyReq1 = 1,    // vehicle -> RSU:      ELP || N1 (plaintext)
  KeyReq2 = 2,    // RSU -> manager:      seal(ELP || N1 || N2)
  KeyReq3 = 3,    // manager -> CA:       seal(ELP || N1 || N2 || N3)
  KeyResp4 = 4,   // CA -> manager:       seal(E_VAC(key||f(N1)) || N2 || N3 || expiry)
  KeyResp5 = 5,   // manager -> RSU:      seal(E_VAC(key||f(N1)) || N2 || expiry)
  KeyResp6 = 6,   // RSU -> vehicle:      E_VAC(key||f(N1))
  Register = 7,   // RSU -> manager:      seal(ELP || expiry || prev RSU)
  ManagerHandoff = 8,
  RevokeToManager = 9,
  RevokeToRsu = 10,
  RevokeBroadcast = 11,
  ManagerForward = 12,
};

inline const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::KeyReq1: return "KeyReq1";
    case MsgKind::KeyReq2: return "KeyReq2";
    case MsgKind::KeyReq3: return "KeyReq3";
    case MsgKind::KeyResp4: return "KeyResp4";
    case MsgKind::KeyResp5: return "KeyResp5";
    case MsgKind::KeyResp6: return "KeyResp6";
    case MsgKind::Register: return "Register";
    case MsgKind::ManagerHandoff: return "ManagerHandoff";
    case MsgKind::RevokeToManager: return "RevokeToManager";
    case MsgKind::RevokeToRsu: return "RevokeToRsu";
    case MsgKind::RevokeBroadcast: return "RevokeBroadcast";
    case MsgKind::ManagerForward: return "ManagerForward";
  }
  return "?";
}

struct ProtocolMessage {
  MsgKind kind{};
  EntityId src = 0;
  EntityId dst = 0;
  std::uint64_t seq = 0;  // monotone per run, stamped at send
  Bytes body;
};

inline Bytes pack_fields(const std::vector<Bytes>& fields) {
  Bytes out;
  for (const auto& f : fields) {
    if (f.size() > 0xffff) throw ArgumentError("field too long for u16 prefix");
    put_u16(out, static_cast<std::uint16_t>(f.size()));
    append(out, f);
  }
  return out;
}

inline std::vector<Bytes> unpack_fields(ByteView body) {
  std::vector<Bytes> fields;
  std::size_t at = 0;
  while (at < body.size()) {
    if (at + 2 > body.size()) throw ParseError("field prefix truncated");
    std::uint16_t len = get_u16(body, at);
    at += 2;
    if (at + len > body.size()) throw ParseError("field truncated");
    fields.emplace_back(body.begin() + static_cast<std::ptrdiff_t>(at),
                        body.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
  }
  return fields;
}

inline Bytes encode_message(const ProtocolMessage& m) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(m.kind));
  put_u32(out, m.src);
  put_u32(out, m.dst);
  put_u64(out, m.seq);
  put_u32(out, static_cast<std::uint32_t>(m.body.size()));
  append(out, m.body);
  return out;
}

inline ProtocolMessage decode_message(ByteView in) {
  constexpr std::size_t header = 1 + 4 + 4 + 8 + 4;
  if (in.size() < header) throw ParseError("message header truncated");
  ProtocolMessage m;
  std::uint8_t kind = in[0];
  if (kind < 1 || kind > 12) throw ParseError("unknown message kind");
  m.kind = static_cast<MsgKind>(kind);
  m.src = get_u32(in, 1);
  m.dst = get_u32(in, 5);
  m.seq = get_u64(in, 9);
  std::uint32_t body_len = get_u32(in, 17);
  if (in.size() != header + body_len) throw ParseError("body length mismatch");
  m.body.assign(in.begin() + header, in.end());
  return m;
}

}  // namespace vanet
