#pragma once

// Scripted attacker drivers. The attacker can observe any link, capture,
// replay, modify, and inject messages, and knows every public key and any
// ELP it has seen — but holds no VAC and no legitimate private key. Each
// scenario runs against a live world and reports whether the protocol's
// documented outcome held.

#include <memory>
#include <sstream>

#include "vanet/netsim.hpp"

namespace vanet {

enum class AttackKind { Replay, MitmTamper, Sybil, MasqueradeCa, MasqueradeVehicle };

inline const char* attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::Replay: return "replay";
    case AttackKind::MitmTamper: return "mitm-tamper";
    case AttackKind::Sybil: return "sybil";
    case AttackKind::MasqueradeCa: return "masquerade-ca";
    case AttackKind::MasqueradeVehicle: return "masquerade-vehicle";
  }
  return "?";
}

struct AttackOutcome {
  AttackKind kind{};
  bool succeeded = true;  // the protocol failed; must come out false
  bool victim_certified = false;
  std::size_t detection_events = 0;
  std::size_t injections = 0;
  std::string detail;

  std::string report() const {
    std::ostringstream os;
    os << "scenario=" << attack_name(kind) << " succeeded=" << (succeeded ? "true" : "false")
       << " victim_certified=" << (victim_certified ? "true" : "false")
       << " detections=" << detection_events << " injections=" << injections << " " << detail;
    return os.str();
  }
};

namespace detail {

// Four RSUs under one manager, victim parked near the first one, two
// bystanders and the attacker node scattered nearby.
struct AttackWorld {
  std::unique_ptr<SimWorld> world;
  EntityId rsu_near_victim = 0;
  EntityId rsu_near_attacker = 0;
  EntityId victim = 0;
  EntityId attacker = 0;

  explicit AttackWorld(std::uint64_t seed, CryptoMode mode) {
    WorldConfig cfg;
    cfg.seed = seed;
    cfg.crypto_mode = mode;
    cfg.duration = 12;
    world = std::make_unique<SimWorld>(cfg);
    world->add_ca(cfg.cert_lifetime);
    EntityId mgr = world->add_manager();
    std::vector<EntityId> rsus;
    for (int i = 0; i < 4; ++i) rsus.push_back(world->add_rsu(mgr, {i * 500.0, 0}));

    Rng place(derive_seed(seed, {0xa77ULL}));
    auto near_rsu = [&](int rsu_index) {
      return Vec2{rsu_index * 500.0 + place.uniform(-150, 150), place.uniform(-150, 150)};
    };
    victim = world->add_vehicle();
    world->set_vehicle_position(victim, near_rsu(0));
    rsu_near_victim = rsus[0];
    rsu_near_attacker = rsus[3];
    for (int i = 1; i <= 2; ++i) {
      EntityId peer = world->add_vehicle();
      world->set_vehicle_position(peer, near_rsu(i));
    }
    attacker = world->add_vehicle();
    world->set_vehicle_position(attacker, near_rsu(3));
    world->exclude_from_protocol(attacker);
    // Rogue node: not provisioned with the CA.
    world->ca().vac_directory.erase(world->vehicle_of(attacker).identity.elp);
  }
};

inline ProtocolMessage forge_key_request(EntityId src, EntityId rsu, const Elp& elp,
                                         std::uint64_t fake_nonce) {
  ProtocolMessage m;
  m.kind = MsgKind::KeyReq1;
  m.src = src;
  m.dst = rsu;
  m.seq = 0;  // injected outside the normal sequence
  m.body = pack_fields({Bytes(elp.value.begin(), elp.value.end()), u64_bytes(fake_nonce)});
  return m;
}

}  // namespace detail

inline AttackOutcome run_attack(AttackKind kind, std::uint64_t seed, CryptoMode mode = CryptoMode::Mock) {
  detail::AttackWorld aw(seed, mode);
  SimWorld& w = *aw.world;
  AttackOutcome outcome;
  outcome.kind = kind;

  std::optional<ProtocolMessage> captured;      // first key response to the victim
  std::optional<ProtocolMessage> attacker_got;  // key response delivered to the attacker
  bool tampered = false;
  Rng attacker_rng(derive_seed(seed, {0xbadULL}));

  w.set_link_tap([&](const ProtocolMessage& m) -> std::optional<ProtocolMessage> {
    if (m.kind == MsgKind::KeyResp6 && m.dst == aw.victim && !captured) captured = m;
    if (m.kind == MsgKind::KeyResp6 && m.dst == aw.attacker) attacker_got = m;
    if (kind == AttackKind::MitmTamper && m.kind == MsgKind::KeyResp6 && m.dst == aw.victim && !tampered) {
      tampered = true;
      ProtocolMessage mod = m;
      std::size_t bit = attacker_rng.next_below(mod.body.size() * 8);
      mod.body[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      return mod;
    }
    return m;
  });

  w.start_protocol();

  switch (kind) {
    case AttackKind::Replay:
      // Resend the captured key response long after it was consumed.
      w.schedule(6.0, [&](SimWorld& w2) {
        if (!captured) throw ScriptError("replay: nothing captured in time");
        outcome.injections++;
        w2.unicast(*captured);
      });
      break;
    case AttackKind::MitmTamper:
      // Tampering happens inside the tap; count it as one injection.
      break;
    case AttackKind::Sybil: {
      // The attacker requests a key under the victim's identity from its
      // own position; the sealed reply lands at the attacker.
      w.schedule(4.0, [&](SimWorld& w2) {
        Elp victim_elp = w2.vehicle_of(aw.victim).identity.elp;
        outcome.injections++;
        w2.unicast(detail::forge_key_request(aw.attacker, aw.rsu_near_attacker, victim_elp,
                                             attacker_rng.next_u64()));
      });
      break;
    }
    case AttackKind::MasqueradeCa:
      // Forged "here is your key" racing the real response: sealed under a
      // VAC the intruder invented, since it cannot know the victim's.
      w.schedule(0.105, [&](SimWorld& w2) {
        Vac fake_vac = make_vac(Elp::from_u64(attacker_rng.next_u64()), Ecn::from_u64(attacker_rng.next_u64()));
        Bytes evac = w2.crypto().sym_seal(
            fake_vac, pack_fields({attacker_rng.next_bytes(32), f64_bytes(300.0), u64_bytes(attacker_rng.next_u64())}));
        ProtocolMessage forged;
        forged.kind = MsgKind::KeyResp6;
        forged.src = aw.rsu_near_victim;
        forged.dst = aw.victim;
        forged.seq = 0;
        forged.body = pack_fields({evac});
        outcome.injections++;
        w2.unicast(forged);
      });
      break;
    case AttackKind::MasqueradeVehicle:
      // Replayed request on the victim's behalf; the CA-issued reply is
      // useless to the attacker and stale to the victim.
      w.schedule(6.0, [&](SimWorld& w2) {
        Elp victim_elp = w2.vehicle_of(aw.victim).identity.elp;
        outcome.injections++;
        w2.unicast(detail::forge_key_request(aw.victim, aw.rsu_near_victim, victim_elp,
                                             attacker_rng.next_u64()));
      });
      break;
  }

  w.run_to_end();
  if (kind == AttackKind::MitmTamper) {
    if (!tampered) throw ScriptError("mitm: no key response crossed the tap");
    outcome.injections = 1;
  }
  if ((kind == AttackKind::Replay || kind == AttackKind::MasqueradeVehicle) && !captured)
    throw ScriptError("victim never completed a handshake to attack");

  // The attacker tries to use whatever it managed to harvest.
  auto ctx = w.context();
  Bytes harvest = attacker_got ? attacker_got->body : (captured ? captured->body : Bytes{});
  if (!harvest.empty()) {
    try {
      auto fields = unpack_fields(ByteView{harvest.data(), harvest.size()});
      Vac guess = w.vehicle_of(aw.attacker).identity.vac;  // best key material it owns
      w.crypto().sym_open(guess, ByteView{fields[0].data(), fields[0].size()});
      outcome.succeeded = true;
      outcome.detail = "attacker decrypted captured key material";
    } catch (const Error&) {
      ctx.raise(SecurityEventKind::AttackerRebuffed, aw.attacker, "captured key material unreadable");
      outcome.succeeded = false;
    }
  } else {
    outcome.succeeded = false;
  }

  VehicleNode& victim = w.vehicle_of(aw.victim);
  outcome.victim_certified = victim.has_valid_cert(w.now());
  if (!outcome.victim_certified) outcome.succeeded = true;  // liveness broken counts as a win for the attacker
  outcome.detection_events = w.security_log().size();
  if (outcome.detail.empty()) {
    std::ostringstream os;
    for (const auto& e : w.security_log()) os << security_event_name(e.kind) << " ";
    outcome.detail = "events: " + os.str();
  }
  return outcome;
}

}  // namespace vanet
