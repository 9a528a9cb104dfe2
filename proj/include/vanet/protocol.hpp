#pragma once

// The four entity state machines and every protocol message they
// exchange: the six-message key acquisition handshake, mobility
// registration with forwarding chains, cross-manager handoff, and
// revocation delivery.
//
// Handlers are pure state-machine steps: they take the current sim time
// and a message, mutate their own ledgers, and return the messages to
// send next. Transport (delays, ranges, loss) lives in netsim.

#include <bit>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vanet/crypto.hpp"
#include "vanet/geometry.hpp"
#include "vanet/identity.hpp"
#include "vanet/wire.hpp"

namespace vanet {

// --- certificates -----------------------------------------------------------

struct SessionKey {
  Bytes key_material;
  double lifetime = 0;    // seconds
  double issue_time = 0;  // sim-seconds
};

struct Certificate {
  SessionKey session_key;
  double issue_time = 0;
  double lifetime = 0;
  Elp subject_elp;

  bool valid(double now) const { return now < issue_time + lifetime; }
  double expiry() const { return issue_time + lifetime; }
};

// --- events and bookkeeping ---------------------------------------------------

enum class SecurityEventKind {
  BadSeal,            // a sealed message failed to open at an infrastructure node
  NonceMismatch,      // echoed nonce does not match the pending transaction
  ReplayOrForgery,    // response carries a transaction this entity never opened
  StaleResponse,      // vehicle saw an out-of-date f(N1); replay or crossed exchange
  UnaddressedResponse,  // key response not sealed under this vehicle's VAC
  AttackerRebuffed,   // adversary captured material it could not decrypt
};

inline const char* security_event_name(SecurityEventKind k) {
  switch (k) {
    case SecurityEventKind::BadSeal: return "BadSeal";
    case SecurityEventKind::NonceMismatch: return "NonceMismatch";
    case SecurityEventKind::ReplayOrForgery: return "ReplayOrForgery";
    case SecurityEventKind::StaleResponse: return "StaleResponse";
    case SecurityEventKind::UnaddressedResponse: return "UnaddressedResponse";
    case SecurityEventKind::AttackerRebuffed: return "AttackerRebuffed";
  }
  return "?";
}

struct SecurityEvent {
  SecurityEventKind kind;
  EntityId entity;
  double time;
  std::string detail;
};

struct FlowCounters {
  std::uint64_t malformed_drops = 0;
  std::uint64_t badseal_drops = 0;
  std::uint64_t nonce_drops = 0;
  std::uint64_t refusals_blacklisted = 0;
  std::uint64_t refusals_unknown = 0;
  std::uint64_t handoff_no_record = 0;
};

// Everything a handler needs besides its own state.
struct ProtocolContext {
  CryptoProvider& crypto;
  const std::map<EntityId, Bytes>& pubkeys;  // infrastructure public keys
  std::vector<SecurityEvent>& events;
  FlowCounters& counters;
  double now = 0;
  std::uint64_t* msg_seq = nullptr;

  std::uint64_t next_seq() { return (*msg_seq)++; }

  const Bytes& pubkey(EntityId id) const {
    auto it = pubkeys.find(id);
    if (it == pubkeys.end()) throw TopologyError("no public key for entity " + std::to_string(id));
    return it->second;
  }

  void raise(SecurityEventKind kind, EntityId at, std::string detail) {
    events.push_back({kind, at, now, std::move(detail)});
  }
};

// --- wire helpers -------------------------------------------------------------

inline Bytes f64_bytes(double v) { return u64_bytes(std::bit_cast<std::uint64_t>(v)); }

inline double as_f64(const Bytes& b) {
  if (b.size() != 8) throw ParseError("expected 8-byte float field");
  return std::bit_cast<double>(get_u64(ByteView{b.data(), b.size()}, 0));
}

inline std::uint64_t as_u64(const Bytes& b) {
  if (b.size() != 8) throw ParseError("expected 8-byte field");
  return get_u64(ByteView{b.data(), b.size()}, 0);
}

inline std::uint32_t as_u32(const Bytes& b) {
  if (b.size() != 4) throw ParseError("expected 4-byte field");
  return get_u32(ByteView{b.data(), b.size()}, 0);
}

inline Bytes u32_bytes(std::uint32_t v) {
  Bytes b;
  put_u32(b, v);
  return b;
}

// How a revocation is delivered past the manager layer.
//   ChainRsus  — targeted: only the RSUs recorded in the vehicle's chain.
//   DomainRsus — every RSU of each manager the vehicle visited.
//   AllRsus    — the BRD baseline: every manager floods all of its RSUs.
enum class RevokeMode : std::uint8_t { ChainRsus = 0, DomainRsus = 1, AllRsus = 2 };

// Chain delivery order: fan out from the manager, or relay RSU-to-RSU.
enum class RevokeRouting : std::uint8_t { FanOut = 0, Sequential = 1 };

// --- vehicle -------------------------------------------------------------------

enum class KeyRespOutcome { Accepted, Stale, NotForMe };

struct KeyRespResult {
  KeyRespOutcome outcome;
  std::optional<Certificate> cert;  // set when accepted
};

class VehicleNode {
 public:
  EntityId id = 0;
  VehicleIdentity identity;
  std::optional<Certificate> cert;
  std::optional<Nonce> pending_nonce;  // set iff a key request is in flight
  std::set<Elp> local_blacklist;       // peers this vehicle was warned about
  std::set<std::uint64_t> seen_nonces; // f(N1) values already accepted
  NonceLedger nonces{0};
  bool revoked = false;  // own certificate erased by a revocation broadcast

  bool has_valid_cert(double now) const { return cert && cert->valid(now); }

  // Message (1): plaintext ELP || N1. A second call before the reply
  // replaces the pending nonce (retry semantics).
  ProtocolMessage request_key(ProtocolContext& ctx, EntityId rsu_id) {
    Nonce n1 = nonces.fresh();
    pending_nonce = n1;
    ProtocolMessage m;
    m.kind = MsgKind::KeyReq1;
    m.src = id;
    m.dst = rsu_id;
    m.seq = ctx.next_seq();
    m.body = pack_fields({Bytes(identity.elp.value.begin(), identity.elp.value.end()), u64_bytes(n1.value)});
    return m;
  }

  // Message (6): E_VAC(key || f(N1)). Accept only when the echoed nonce is
  // f of the one currently pending; anything else is stale (replayed or
  // crossed) and the caller should re-request.
  KeyRespResult handle_key_response(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes plain;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      plain = ctx.crypto.sym_open(identity.vac, ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.raise(SecurityEventKind::UnaddressedResponse, id, "key response not openable with own VAC");
      return {KeyRespOutcome::NotForMe, std::nullopt};
    }
    Bytes key;
    double lifetime = 0;
    std::uint64_t fn1 = 0;
    try {
      auto inner = unpack_fields(ByteView{plain.data(), plain.size()});
      if (inner.size() != 3) throw ParseError("bad inner field count");
      key = inner[0];
      lifetime = as_f64(inner[1]);
      fn1 = as_u64(inner[2]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      ctx.raise(SecurityEventKind::UnaddressedResponse, id, "malformed key payload");
      return {KeyRespOutcome::NotForMe, std::nullopt};
    }
    if (!pending_nonce || fn1 != f_nonce(*pending_nonce).value || seen_nonces.count(fn1)) {
      ctx.raise(SecurityEventKind::StaleResponse, id, "old key response ignored");
      return {KeyRespOutcome::Stale, std::nullopt};
    }
    Certificate c;
    c.session_key = {key, lifetime, ctx.now};
    c.issue_time = ctx.now;
    c.lifetime = lifetime;
    c.subject_elp = identity.elp;
    cert = c;
    seen_nonces.insert(fn1);
    pending_nonce.reset();
    revoked = false;
    return {KeyRespOutcome::Accepted, c};
  }

  // Revocation warning: peers blacklist the subject; the subject itself
  // erases its certificate (the broadcast doubles as the erase trigger).
  bool handle_revocation_broadcast(const ProtocolMessage& m) {
    auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
    if (fields.size() < 1 || fields[0].size() != kElpSize) return false;
    Elp subject = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
    if (subject == identity.elp) {
      cert.reset();
      pending_nonce.reset();
      revoked = true;
      return true;
    }
    local_blacklist.insert(subject);
    return false;
  }

  std::string dump() const {
    std::ostringstream os;
    os << "vehicle " << id << " elp=" << to_hex(ByteView{identity.elp.value.data(), kElpSize});
    if (cert) os << " cert_expiry=" << cert->expiry();
    if (pending_nonce) os << " pending_n1=" << pending_nonce->value;
    os << " blacklist=" << local_blacklist.size() << " revoked=" << revoked;
    return os.str();
  }
};

// --- RSU ------------------------------------------------------------------------

class RsuNode {
 public:
  struct PassedVehicle {
    double cert_expiry = 0;
    std::optional<EntityId> next_rsu;  // soft-handover pointer
    EntityId vehicle_id = 0;
  };

  EntityId id = 0;
  Vec2 position;
  double range = 0;  // radio range, meters
  EntityId manager_id = 0;
  KeyPair keys;
  std::map<Elp, PassedVehicle> passed_vehicles;
  NonceLedger nonces{0};

  // Message (2): append N2, seal with own private key then the manager's
  // public key, forward upstream.
  std::optional<ProtocolMessage> handle_key_request(ProtocolContext& ctx, const ProtocolMessage& m) {
    Elp elp;
    std::uint64_t n1 = 0;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 2 || fields[0].size() != kElpSize) throw ParseError("bad request");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      n1 = as_u64(fields[1]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    Nonce n2 = nonces.fresh();
    pending_[n2.value] = {elp, m.src};
    Bytes inner = pack_fields(
        {Bytes(elp.value.begin(), elp.value.end()), u64_bytes(n1), u64_bytes(n2.value)});
    ProtocolMessage out;
    out.kind = MsgKind::KeyReq2;
    out.src = id;
    out.dst = manager_id;
    out.seq = ctx.next_seq();
    out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(manager_id), inner)});
    return out;
  }

  // Message (5) -> (6): check N2, strip it, record the vehicle, unicast the
  // VAC-sealed key material.
  std::optional<ProtocolMessage> handle_key_response(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(manager_id), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "key response seal failure at RSU");
      return std::nullopt;
    }
    Bytes evac;
    std::uint64_t n2 = 0;
    double expiry = 0;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 3) throw ParseError("bad inner count");
      evac = fields[0];
      n2 = as_u64(fields[1]);
      expiry = as_f64(fields[2]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    auto pending = pending_.find(n2);
    if (pending == pending_.end()) {
      ctx.counters.nonce_drops++;
      ctx.raise(SecurityEventKind::NonceMismatch, id, "N2 echo mismatch");
      return std::nullopt;
    }
    auto [elp, vehicle] = pending->second;
    pending_.erase(pending);
    passed_vehicles[elp] = {expiry, std::nullopt, vehicle};
    // The vehicle may have driven on while the reply climbed the
    // hierarchy; a departure noted in the meantime becomes the pointer.
    if (auto gone = recent_departures_.find(elp); gone != recent_departures_.end()) {
      passed_vehicles[elp].next_rsu = gone->second;
      recent_departures_.erase(gone);
    }
    ProtocolMessage out;
    out.kind = MsgKind::KeyResp6;
    out.src = id;
    out.dst = vehicle;
    out.seq = ctx.next_seq();
    out.body = pack_fields({evac});
    return out;
  }

  // A certified vehicle entered this RSU's range: record it and register
  // with the manager. No state changes for expired certificates.
  std::optional<ProtocolMessage> register_vehicle(ProtocolContext& ctx, const Elp& elp, EntityId vehicle,
                                                  double cert_expiry, std::optional<EntityId> prev_rsu) {
    if (cert_expiry <= ctx.now) return std::nullopt;
    passed_vehicles[elp] = {cert_expiry, std::nullopt, vehicle};
    recent_departures_.erase(elp);  // it came back here
    Bytes inner = pack_fields({Bytes(elp.value.begin(), elp.value.end()), f64_bytes(cert_expiry),
                               prev_rsu ? u32_bytes(*prev_rsu) : Bytes{}});
    ProtocolMessage out;
    out.kind = MsgKind::Register;
    out.src = id;
    out.dst = manager_id;
    out.seq = ctx.next_seq();
    out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(manager_id), inner)});
    return out;
  }

  // Vehicle moved on: leave a forwarding pointer for in-flight replies.
  // With no ledger entry yet (handshake still upstream) the departure is
  // remembered until the entry is created.
  void note_vehicle_departed(const Elp& elp, EntityId next_rsu) {
    auto it = passed_vehicles.find(elp);
    if (it != passed_vehicles.end())
      it->second.next_rsu = next_rsu;
    else
      recent_departures_[elp] = next_rsu;
  }

  struct RevocationAction {
    std::optional<ProtocolMessage> broadcast;
    std::optional<ProtocolMessage> relay;  // sequential chain delivery
  };

  // Revocation reached this RSU: warn the neighborhood (once per
  // transaction) and relay onward if a sequential chain remains.
  RevocationAction handle_revocation(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "revocation seal failure at RSU");
      return {};
    }
    Elp elp;
    std::uint64_t txn = 0;
    std::vector<EntityId> relay;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 3 || fields[0].size() != kElpSize) throw ParseError("bad inner count");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      txn = as_u64(fields[1]);
      if (fields[2].size() % 4 != 0) throw ParseError("bad relay list");
      for (std::size_t i = 0; i < fields[2].size(); i += 4)
        relay.push_back(get_u32(ByteView{fields[2].data(), fields[2].size()}, i));
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return {};
    }
    RevocationAction action;
    if (seen_revocations_.insert(txn).second) {
      ProtocolMessage bc;
      bc.kind = MsgKind::RevokeBroadcast;
      bc.src = id;
      bc.dst = 0;  // local broadcast; receivers resolved by the link layer
      bc.seq = ctx.next_seq();
      bc.body = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(txn)});
      action.broadcast = bc;
    }
    if (!relay.empty()) {
      EntityId next = relay.front();
      Bytes rest;
      for (std::size_t i = 1; i < relay.size(); ++i) put_u32(rest, relay[i]);
      Bytes fwd = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(txn), rest});
      ProtocolMessage out;
      out.kind = MsgKind::RevokeToRsu;
      out.src = id;
      out.dst = next;
      out.seq = ctx.next_seq();
      out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(next), fwd)});
      action.relay = out;
    }
    return action;
  }

  // Assumption: state about passing vehicles is kept only while their
  // certificate lifetime has not expired.
  void purge_expired(double now) {
    for (auto it = passed_vehicles.begin(); it != passed_vehicles.end();)
      it = (it->second.cert_expiry <= now) ? passed_vehicles.erase(it) : std::next(it);
    recent_departures_.clear();
  }

  std::string dump() const {
    std::ostringstream os;
    os << "rsu " << id << " mgr=" << manager_id << " passed=[";
    for (const auto& [elp, entry] : passed_vehicles) {
      os << to_hex(ByteView{elp.value.data(), 4}) << "(exp=" << entry.cert_expiry;
      if (entry.next_rsu) os << ",next=" << *entry.next_rsu;
      os << ") ";
    }
    os << "]";
    return os.str();
  }

 private:
  struct PendingRequest {
    Elp elp;
    EntityId vehicle;
  };
  std::map<std::uint64_t, PendingRequest> pending_;  // keyed by N2
  std::map<Elp, EntityId> recent_departures_;        // departures seen before the ledger entry
  std::set<std::uint64_t> seen_revocations_;
};

// --- manager ----------------------------------------------------------------------

class ManagerNode {
 public:
  struct RegistryEntry {
    std::vector<EntityId> rsu_chain;          // distinct RSUs visited this era, in order
    std::optional<EntityId> next_manager;     // set after the vehicle left for another domain
    std::vector<EntityId> forward_log;        // every outgoing handoff, repeats included
    double cert_expiry = 0;
  };

  EntityId id = 0;
  KeyPair keys;
  EntityId ca_id = 0;
  std::set<EntityId> rsus;                   // RSUs under this manager
  const std::map<EntityId, EntityId>* rsu_owner = nullptr;  // deployment-wide RSU -> manager
  std::map<Elp, RegistryEntry> registry;
  NonceLedger nonces{0};

  // Message (3): verify the RSU's seal, append N3, reseal for the CA.
  std::optional<ProtocolMessage> handle_key_request(ProtocolContext& ctx, const ProtocolMessage& m) {
    if (!rsus.count(m.src)) {
      ctx.counters.malformed_drops++;  // not one of ours
      return std::nullopt;
    }
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "key request seal failure at manager");
      return std::nullopt;
    }
    Elp elp;
    std::uint64_t n1 = 0, n2 = 0;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 3 || fields[0].size() != kElpSize) throw ParseError("bad inner count");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      n1 = as_u64(fields[1]);
      n2 = as_u64(fields[2]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    Nonce n3 = nonces.fresh();
    pending_[n3.value] = {elp, m.src};
    Bytes next = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(n1), u64_bytes(n2),
                              u64_bytes(n3.value)});
    ProtocolMessage out;
    out.kind = MsgKind::KeyReq3;
    out.src = id;
    out.dst = ca_id;
    out.seq = ctx.next_seq();
    out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(ca_id), next)});
    return out;
  }

  // Message (4) -> (5): check N3, strip it, commit the vehicle's location
  // (chain restarts at the requesting RSU), reseal for the RSU.
  std::optional<ProtocolMessage> handle_key_response(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(ca_id), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "key response seal failure at manager");
      return std::nullopt;
    }
    Bytes evac;
    std::uint64_t n2 = 0, n3 = 0;
    double expiry = 0;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 4) throw ParseError("bad inner count");
      evac = fields[0];
      n2 = as_u64(fields[1]);
      n3 = as_u64(fields[2]);
      expiry = as_f64(fields[3]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    auto pending = pending_.find(n3);
    if (pending == pending_.end()) {
      ctx.counters.nonce_drops++;
      ctx.raise(SecurityEventKind::ReplayOrForgery, id, "N3 echo mismatch");
      return std::nullopt;
    }
    auto [elp, rsu] = pending->second;
    pending_.erase(pending);
    RegistryEntry& entry = registry[elp];
    entry.rsu_chain = {rsu};  // one active credential, one routable location
    entry.next_manager.reset();
    entry.cert_expiry = expiry;
    Bytes next = pack_fields({evac, u64_bytes(n2), f64_bytes(expiry)});
    ProtocolMessage out;
    out.kind = MsgKind::KeyResp5;
    out.src = id;
    out.dst = rsu;
    out.seq = ctx.next_seq();
    out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(rsu), next)});
    return out;
  }

  // Mobility registration from one of this manager's RSUs. When the
  // vehicle arrived from another domain, a fresh chain era starts here and
  // the previous manager is informed so future revocations are forwarded.
  std::optional<ProtocolMessage> handle_register(ProtocolContext& ctx, const ProtocolMessage& m) {
    if (!rsus.count(m.src)) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "register seal failure at manager");
      return std::nullopt;
    }
    Elp elp;
    double expiry = 0;
    std::optional<EntityId> prev_rsu;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 3 || fields[0].size() != kElpSize) throw ParseError("bad inner count");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      expiry = as_f64(fields[1]);
      if (!fields[2].empty()) prev_rsu = as_u32(fields[2]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    if (expiry <= ctx.now) return std::nullopt;

    bool cross_domain = prev_rsu && rsu_owner && rsu_owner->count(*prev_rsu) &&
                        rsu_owner->at(*prev_rsu) != id;
    RegistryEntry& entry = registry[elp];
    if (cross_domain) {
      entry.rsu_chain.clear();  // fresh era under this manager
      entry.next_manager.reset();
    }
    entry.cert_expiry = expiry;
    bool already = false;
    for (EntityId r : entry.rsu_chain) already = already || r == m.src;
    if (!already) entry.rsu_chain.push_back(m.src);

    if (!cross_domain) return std::nullopt;
    EntityId prev_manager = rsu_owner->at(*prev_rsu);
    ProtocolMessage out;
    out.kind = MsgKind::ManagerHandoff;
    out.src = id;
    out.dst = prev_manager;
    out.seq = ctx.next_seq();
    out.body = pack_fields(
        {ctx.crypto.asym_seal(keys, ctx.pubkey(prev_manager), pack_fields({Bytes(elp.value.begin(), elp.value.end())}))});
    return out;
  }

  // The vehicle is now under the sender's authority; future revocations
  // are forwarded there.
  void handle_handoff(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "handoff seal failure at manager");
      return;
    }
    auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
    if (fields.size() != 1 || fields[0].size() != kElpSize) {
      ctx.counters.malformed_drops++;
      return;
    }
    Elp elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
    auto it = registry.find(elp);
    if (it == registry.end() || it->second.cert_expiry <= ctx.now) {
      ctx.counters.handoff_no_record++;  // already expired: ack'd with NoRecord
      return;
    }
    it->second.next_manager = m.src;
    it->second.forward_log.push_back(m.src);
  }

  // Route a revocation. Targeted mode sends one message per chain RSU and
  // follows the handoff pointer once per transaction; domain mode covers
  // this manager's whole region and walks the full forward log; flood mode
  // is the BRD baseline.
  std::vector<ProtocolMessage> route_revocation(ProtocolContext& ctx, const ProtocolMessage& m,
                                                RevokeRouting routing = RevokeRouting::FanOut) {
    std::vector<ProtocolMessage> out;
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "revocation seal failure at manager");
      return out;
    }
    Elp elp;
    std::uint64_t txn = 0;
    RevokeMode mode{};
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 3 || fields[0].size() != kElpSize || fields[2].size() != 1)
        throw ParseError("bad inner count");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      txn = as_u64(fields[1]);
      mode = static_cast<RevokeMode>(fields[2][0]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return out;
    }

    auto make_revoke_to_rsu = [&](EntityId rsu, const std::vector<EntityId>& relay) {
      Bytes rest;
      for (EntityId r : relay) put_u32(rest, r);
      Bytes body = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(txn), rest});
      ProtocolMessage msg;
      msg.kind = MsgKind::RevokeToRsu;
      msg.src = id;
      msg.dst = rsu;
      msg.seq = ctx.next_seq();
      msg.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(rsu), body)});
      return msg;
    };
    auto make_forward = [&](EntityId mgr) {
      Bytes body = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(txn),
                                Bytes{static_cast<std::uint8_t>(mode)}});
      ProtocolMessage msg;
      msg.kind = MsgKind::ManagerForward;
      msg.src = id;
      msg.dst = mgr;
      msg.seq = ctx.next_seq();
      msg.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(mgr), body)});
      return msg;
    };
    auto send_rsu_set = [&](const std::vector<EntityId>& targets) {
      if (routing == RevokeRouting::Sequential && targets.size() > 1) {
        std::vector<EntityId> relay(targets.begin() + 1, targets.end());
        out.push_back(make_revoke_to_rsu(targets.front(), relay));
      } else {
        for (EntityId r : targets) out.push_back(make_revoke_to_rsu(r, {}));
      }
    };

    if (mode == RevokeMode::AllRsus) {
      send_rsu_set({rsus.begin(), rsus.end()});
      return out;
    }

    bool first_receipt = routed_txns_.insert(txn).second;
    if (!first_receipt) return out;

    auto it = registry.find(elp);
    if (mode == RevokeMode::ChainRsus) {
      if (it == registry.end() || it->second.cert_expiry <= ctx.now) return out;  // unregistered
      send_rsu_set(it->second.rsu_chain);
      if (it->second.next_manager) out.push_back(make_forward(*it->second.next_manager));
      return out;
    }
    // DomainRsus: cover the whole region; forward along every recorded
    // handoff, repeats included (the unbounded manager chain).
    send_rsu_set({rsus.begin(), rsus.end()});
    if (it != registry.end())
      for (EntityId mgr : it->second.forward_log) out.push_back(make_forward(mgr));
    return out;
  }

  void purge_expired(double now) {
    for (auto it = registry.begin(); it != registry.end();)
      it = (it->second.cert_expiry <= now) ? registry.erase(it) : std::next(it);
  }

  std::string dump() const {
    std::ostringstream os;
    os << "manager " << id << " rsus=" << rsus.size() << " registry=[";
    for (const auto& [elp, entry] : registry) {
      os << to_hex(ByteView{elp.value.data(), 4}) << "(chain=";
      for (EntityId r : entry.rsu_chain) os << r << ",";
      os << "exp=" << entry.cert_expiry;
      if (entry.next_manager) os << ",next_mgr=" << *entry.next_manager;
      os << ") ";
    }
    os << "]";
    return os.str();
  }

 private:
  struct PendingTxn {
    Elp elp;
    EntityId rsu;
  };
  std::map<std::uint64_t, PendingTxn> pending_;  // keyed by N3
  std::set<std::uint64_t> routed_txns_;
};

// --- certificate authority ------------------------------------------------------

class CaNode {
 public:
  struct IssuedEntry {
    EntityId manager_id = 0;
    double cert_expiry = 0;
    Bytes key_material;  // retained so end-to-end tests can compare key bytes
  };

  EntityId id = 0;
  KeyPair keys;
  std::map<Elp, Vac> vac_directory;
  std::set<Elp> blacklist;
  std::map<Elp, IssuedEntry> issued;
  std::vector<EntityId> managers;
  double key_lifetime = 300;  // policy, seconds
  Rng key_rng{0};
  std::uint64_t txn_counter = 0;

  // Message (3) -> (4). Blacklisted or unknown vehicles get a silent
  // refusal: no message leaves, so probing the blacklist learns nothing.
  std::optional<ProtocolMessage> handle_key_request(ProtocolContext& ctx, const ProtocolMessage& m) {
    Bytes inner;
    try {
      auto fields = unpack_fields(ByteView{m.body.data(), m.body.size()});
      if (fields.size() != 1) throw ParseError("bad field count");
      inner = ctx.crypto.asym_open(keys, ctx.pubkey(m.src), ByteView{fields[0].data(), fields[0].size()});
    } catch (const Error&) {
      ctx.counters.badseal_drops++;
      ctx.raise(SecurityEventKind::BadSeal, id, "key request seal failure at CA");
      return std::nullopt;
    }
    Elp elp;
    std::uint64_t n1 = 0, n2 = 0, n3 = 0;
    try {
      auto fields = unpack_fields(ByteView{inner.data(), inner.size()});
      if (fields.size() != 4 || fields[0].size() != kElpSize) throw ParseError("bad inner count");
      elp = Elp::from_bytes(ByteView{fields[0].data(), fields[0].size()});
      n1 = as_u64(fields[1]);
      n2 = as_u64(fields[2]);
      n3 = as_u64(fields[3]);
    } catch (const Error&) {
      ctx.counters.malformed_drops++;
      return std::nullopt;
    }
    auto vac = vac_directory.find(elp);
    if (vac == vac_directory.end()) {
      ctx.counters.refusals_unknown++;
      return std::nullopt;
    }
    if (blacklist.count(elp)) {
      ctx.counters.refusals_blacklisted++;
      return std::nullopt;
    }
    Bytes key = key_rng.next_bytes(32);
    double expiry = ctx.now + key_lifetime;
    issued[elp] = {m.src, expiry, key};
    Bytes evac = ctx.crypto.sym_seal(
        vac->second, pack_fields({key, f64_bytes(key_lifetime), u64_bytes(f_nonce(Nonce{n1}).value)}));
    Bytes next = pack_fields({evac, u64_bytes(n2), u64_bytes(n3), f64_bytes(expiry)});
    ProtocolMessage out;
    out.kind = MsgKind::KeyResp4;
    out.src = id;
    out.dst = m.src;
    out.seq = ctx.next_seq();
    out.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(m.src), next)});
    return out;
  }

  struct RevocationStart {
    std::vector<ProtocolMessage> messages;
    std::uint64_t txn = 0;
    bool moot = false;  // nothing routable (never issued or already expired)
  };

  // Targeted revocation: always blacklist; message the stored manager only
  // while the certificate is still alive.
  RevocationStart initiate_revocation(ProtocolContext& ctx, const Elp& elp, RevokeMode mode) {
    blacklist.insert(elp);
    RevocationStart start;
    start.txn = ++txn_counter;
    auto it = issued.find(elp);
    if (it == issued.end() || it->second.cert_expiry <= ctx.now) {
      start.moot = true;
      return start;
    }
    start.messages.push_back(make_revoke(ctx, elp, start.txn, mode, it->second.manager_id));
    return start;
  }

  // BRD baseline: flood every manager regardless of ledgers.
  RevocationStart initiate_flood_revocation(ProtocolContext& ctx, const Elp& elp) {
    blacklist.insert(elp);
    RevocationStart start;
    start.txn = ++txn_counter;
    for (EntityId mgr : managers)
      start.messages.push_back(make_revoke(ctx, elp, start.txn, RevokeMode::AllRsus, mgr));
    return start;
  }

  void purge_expired(double now) {
    for (auto it = issued.begin(); it != issued.end();)
      it = (it->second.cert_expiry <= now) ? issued.erase(it) : std::next(it);
  }

  std::string dump() const {
    std::ostringstream os;
    os << "ca " << id << " directory=" << vac_directory.size() << " blacklist=" << blacklist.size()
       << " issued=[";
    for (const auto& [elp, entry] : issued)
      os << to_hex(ByteView{elp.value.data(), 4}) << "(mgr=" << entry.manager_id
         << ",exp=" << entry.cert_expiry << ") ";
    os << "]";
    return os.str();
  }

 private:
  ProtocolMessage make_revoke(ProtocolContext& ctx, const Elp& elp, std::uint64_t txn, RevokeMode mode,
                              EntityId mgr) {
    Bytes body = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(txn),
                              Bytes{static_cast<std::uint8_t>(mode)}});
    ProtocolMessage msg;
    msg.kind = MsgKind::RevokeToManager;
    msg.src = id;
    msg.dst = mgr;
    msg.seq = ctx.next_seq();
    msg.body = pack_fields({ctx.crypto.asym_seal(keys, ctx.pubkey(mgr), body)});
    return msg;
  }
};

}  // namespace vanet
