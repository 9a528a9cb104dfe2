#pragma once

// Deterministic discrete-event engine. One SimWorld owns a clock, an
// ordered event queue, the entity registry, the link model, and the
// metrics sinks. Everything that happens in a run is a pure function of
// (topology, config, seed): RNG streams are derived from the run seed and
// entities are always iterated in id order.

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "vanet/mobility.hpp"
#include "vanet/protocol.hpp"

namespace vanet {

struct LinkModel {
  double t_ca = 0.010;   // CA <-> manager travel, seconds
  double t_man = 0.010;  // manager <-> RSU and manager <-> manager travel
  double t_rsu = 0.005;  // RSU <-> RSU travel
  double proc_ca = 0.001;
  double proc_man = 0.001;
  double proc_rsu = 0.001;
  double radio_latency = 0.002;  // RSU <-> vehicle hop
  double radio_range = 300;      // meters; vehicles hear an RSU inside this
  double loss_rate = 0;
  bool recursive_handover = false;  // keep chasing next_rsu past one hop
};

struct WorldConfig {
  std::uint64_t seed = 1;
  CryptoMode crypto_mode = CryptoMode::Mock;
  LinkModel link;
  double cert_lifetime = 300;
  double duration = 100;
  double mobility_sample_interval = 1.0;
  double request_start = 0.1;
  double request_stagger = 0.02;
  double retry_timeout = 0;  // 0: derived from the configured delays
  bool auto_refresh = true;  // re-request keys when the certificate expires
  RevokeRouting revoke_routing = RevokeRouting::FanOut;
};

struct NetMetrics {
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t loss_drops = 0;
  std::uint64_t delivery_failures = 0;  // out of range, no forward path
  std::uint64_t tap_suppressed = 0;     // adversary swallowed a delivery
  std::uint64_t no_infrastructure = 0;  // request deferred, no RSU in range
  std::uint64_t broadcast_receptions = 0;
  std::uint64_t reception_loss_drops = 0;
  std::uint64_t handover_forwards = 0;  // in-flight replies chased to the next RSU
  std::uint64_t in_flight = 0;          // delivery events still queued

  std::uint64_t total_dropped() const { return loss_drops + delivery_failures + tap_suppressed; }
};

// Per-revocation bookkeeping; one transaction active at a time.
struct RevocationTracker {
  std::uint64_t txn = 0;
  double start_time = 0;
  double last_warning_time = -1;
  std::uint64_t messages = 0;      // every Revoke*/Forward transmission
  std::uint64_t rsu_messages = 0;  // RevokeToRsu transmissions
  std::uint64_t forwards = 0;
  std::uint64_t broadcasts = 0;
  std::set<EntityId> warned;
  std::set<EntityId> intended;
  std::vector<std::size_t> chain_lengths;  // per routing manager
};

class SimWorld {
 public:
  using EventFn = std::function<void(SimWorld&)>;

  explicit SimWorld(WorldConfig cfg)
      : cfg_(cfg),
        crypto_(cfg.crypto_mode, cfg.seed),
        keygen_(derive_seed(cfg.seed, {0x6e7ULL})),
        loss_rng_(derive_seed(cfg.seed, {0x10550ULL})) {
    if (cfg_.retry_timeout <= 0) {
      const auto& l = cfg_.link;
      double rtt = 2 * (l.radio_latency + l.t_man + l.t_ca) + l.proc_ca + l.proc_man + 2 * l.proc_rsu;
      cfg_.retry_timeout = std::max(2.0, 5 * rtt);
    }
  }

  // --- topology -------------------------------------------------------------

  EntityId add_ca(double key_lifetime) {
    ca_.id = next_id_++;
    ca_.keys = crypto_.make_keypair(ca_.id, keygen_);
    ca_.key_lifetime = key_lifetime;
    ca_.key_rng = Rng(derive_seed(cfg_.seed, {0x5e55ULL}));
    kinds_[ca_.id] = {EntityKind::Ca, 0};
    pubkeys_[ca_.id] = ca_.keys.public_key;
    return ca_.id;
  }

  EntityId add_manager() {
    ManagerNode m;
    m.id = next_id_++;
    m.keys = crypto_.make_keypair(m.id, keygen_);
    m.ca_id = ca_.id;
    m.rsu_owner = &rsu_owner_;
    m.nonces = NonceLedger(derive_seed(cfg_.seed, {0x4eULL, m.id}));
    kinds_[m.id] = {EntityKind::Manager, managers_.size()};
    pubkeys_[m.id] = m.keys.public_key;
    ca_.managers.push_back(m.id);
    managers_.push_back(std::move(m));
    return managers_.back().id;
  }

  EntityId add_rsu(EntityId manager, Vec2 position) {
    RsuNode r;
    r.id = next_id_++;
    r.keys = crypto_.make_keypair(r.id, keygen_);
    r.manager_id = manager;
    r.position = position;
    r.range = cfg_.link.radio_range;
    r.nonces = NonceLedger(derive_seed(cfg_.seed, {0x125ULL, r.id}));
    kinds_[r.id] = {EntityKind::Rsu, rsus_.size()};
    pubkeys_[r.id] = r.keys.public_key;
    manager_of(manager).rsus.insert(r.id);
    rsu_owner_[r.id] = manager;
    rsus_.push_back(std::move(r));
    return rsus_.back().id;
  }

  EntityId add_vehicle() {
    VehicleNode v;
    v.id = next_id_++;
    v.identity = provision_identity(cfg_.seed, static_cast<std::uint32_t>(vehicles_.size()));
    v.nonces = NonceLedger(derive_seed(cfg_.seed, {0xecULL, v.id}));
    kinds_[v.id] = {EntityKind::Vehicle, vehicles_.size()};
    ca_.vac_directory[v.identity.elp] = v.identity.vac;
    vehicles_.push_back(std::move(v));
    runtime_.push_back({});
    return vehicles_.back().id;
  }

  void set_trace(MobilityTrace trace) { trace_ = std::move(trace); }
  void set_vehicle_position(EntityId vehicle, Vec2 pos) { runtime_at(vehicle).fixed_pos = pos; }

  // --- engine -----------------------------------------------------------------

  double now() const { return clock_; }

  std::uint64_t schedule(double delay, EventFn fn, bool is_delivery = false) {
    if (delay < 0) throw ArgumentError("schedule: negative delay");
    Event ev;
    ev.time = clock_ + delay;
    ev.seq = event_seq_++;
    ev.fn = std::move(fn);
    ev.delivery = is_delivery;
    if (is_delivery) metrics_.in_flight++;
    std::uint64_t seq = ev.seq;
    queue_.push(std::move(ev));
    return seq;
  }

  // Processes every event with fire_time <= t_end, in (time, seq) order,
  // then advances the clock to exactly t_end.
  void run_until(double t_end) {
    if (t_end < clock_) throw ArgumentError("run_until: time moves forward only");
    while (!queue_.empty() && queue_.top().time <= t_end) {
      Event ev = queue_.top();
      queue_.pop();
      clock_ = ev.time;
      if (ev.delivery) metrics_.in_flight--;
      try {
        ev.fn(*this);
      } catch (const std::exception& e) {
        throw SimAbort(ev.seq, e.what());
      }
    }
    clock_ = t_end;
  }

  void run_to_end() {
    run_until(cfg_.duration);
    purge_all(clock_);  // end-of-run sweep
  }

  // Transmit a message: one counted transmission, delivery after the link
  // delay, radio range enforced at delivery time.
  void unicast(const ProtocolMessage& msg) {
    if (!kinds_.count(msg.src) || !kinds_.count(msg.dst)) throw TopologyError("unicast: unknown entity");
    metrics_.messages_sent++;
    note_revocation_send(msg.kind);
    double delay = travel_delay(kind_of(msg.src), kind_of(msg.dst));
    ProtocolMessage copy = msg;
    schedule(delay, [copy](SimWorld& w) { w.deliver(copy, 0); }, true);
  }

  // One local broadcast transmission from an RSU; every vehicle inside the
  // radio range at delivery time (and not hit by loss) receives it.
  void broadcast_in_range(EntityId rsu_id, const ProtocolMessage& msg) {
    metrics_.messages_sent++;
    note_revocation_send(msg.kind);
    if (revocation_ && msg.kind == MsgKind::RevokeBroadcast) {
      // Intended recipients snapshot, taken at broadcast time.
      const RsuNode& r = rsu_of(rsu_id);
      for (std::size_t i = 0; i < vehicles_.size(); ++i)
        if (distance(vehicle_position(i), r.position) <= r.range) revocation_->intended.insert(vehicles_[i].id);
    }
    ProtocolMessage copy = msg;
    schedule(cfg_.link.radio_latency, [rsu_id, copy](SimWorld& w) { w.deliver_broadcast(rsu_id, copy); }, true);
  }

  // --- protocol driving ---------------------------------------------------------

  // Schedules initial key requests, per-vehicle certify watchdogs, and the
  // periodic mobility sampler.
  void start_protocol() {
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      EntityId vid = vehicles_[i].id;
      if (bystanders_only_.count(vid)) continue;
      schedule(cfg_.request_start + static_cast<double>(i) * cfg_.request_stagger,
               [vid](SimWorld& w) { w.certify_watchdog(vid); });
    }
    if (!trace_.vehicles.empty() || !vehicles_.empty())
      schedule(cfg_.mobility_sample_interval, [](SimWorld& w) { w.mobility_sample(); });
  }

  // The entity exists on the air but never runs the key-acquisition logic
  // on its own (adversary scripts drive it directly).
  void exclude_from_protocol(EntityId id) { bystanders_only_.insert(id); }

  // Revocation entry points used by the schemes layer.
  RevocationTracker& begin_revocation_tracking(std::uint64_t txn) {
    revocation_ = RevocationTracker{};
    revocation_->txn = txn;
    revocation_->start_time = clock_;
    return *revocation_;
  }

  std::optional<RevocationTracker>& revocation_tracker() { return revocation_; }

  void note_intended_all_vehicles() {
    for (const auto& v : vehicles_) revocation_->intended.insert(v.id);
  }

  // --- accessors ------------------------------------------------------------------

  const WorldConfig& config() const { return cfg_; }
  CryptoProvider& crypto() { return crypto_; }
  CaNode& ca() { return ca_; }
  std::vector<ManagerNode>& managers() { return managers_; }
  std::vector<RsuNode>& rsus() { return rsus_; }
  std::vector<VehicleNode>& vehicles() { return vehicles_; }
  NetMetrics& metrics() { return metrics_; }
  std::vector<SecurityEvent>& security_log() { return security_log_; }
  FlowCounters& counters() { return counters_; }
  const std::map<EntityId, Bytes>& pubkeys() const { return pubkeys_; }
  const std::map<EntityId, EntityId>& rsu_owner() const { return rsu_owner_; }

  enum class EntityKind { Ca, Manager, Rsu, Vehicle };

  EntityKind kind_of(EntityId id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) throw TopologyError("unknown entity " + std::to_string(id));
    return it->second.first;
  }

  ManagerNode& manager_of(EntityId id) { return managers_[index_of(id, EntityKind::Manager)]; }
  RsuNode& rsu_of(EntityId id) { return rsus_[index_of(id, EntityKind::Rsu)]; }
  VehicleNode& vehicle_of(EntityId id) { return vehicles_[index_of(id, EntityKind::Vehicle)]; }

  Vec2 vehicle_position(std::size_t index) const {
    if (index < trace_.vehicles.size())
      return position_at(trace_, index, std::min(clock_, trace_.duration));
    return runtime_[index].fixed_pos;
  }

  Vec2 position_of(EntityId id) const {
    auto [kind, index] = kinds_.at(id);
    if (kind == EntityKind::Vehicle) return vehicle_position(index);
    if (kind == EntityKind::Rsu) return rsus_[index].position;
    throw TopologyError("entity has no position");
  }

  // Nearest RSU whose range covers the vehicle, if any.
  std::optional<EntityId> serving_rsu(std::size_t vehicle_index) const {
    Vec2 pos = vehicle_position(vehicle_index);
    std::optional<EntityId> best;
    double best_d = 0;
    for (const auto& r : rsus_) {
      double d = distance(pos, r.position);
      if (d <= r.range && (!best || d < best_d)) {
        best = r.id;
        best_d = d;
      }
    }
    return best;
  }

  ProtocolContext context() { return {crypto_, pubkeys_, security_log_, counters_, clock_, &msg_seq_}; }

  // Adversary hook: sees every unicast delivery; may modify or suppress.
  using LinkTap = std::function<std::optional<ProtocolMessage>(const ProtocolMessage&)>;
  void set_link_tap(LinkTap tap) { tap_ = std::move(tap); }

  void purge_all(double t) {
    for (auto& r : rsus_) r.purge_expired(t);
    for (auto& m : managers_) m.purge_expired(t);
    ca_.purge_expired(t);
  }

  // Asks the vehicle to (re)acquire a certificate right now; defers with a
  // NoInfrastructure mark when no RSU is in range.
  void request_key_now(EntityId vehicle_id) {
    VehicleNode& v = vehicle_of(vehicle_id);
    std::size_t index = index_of(vehicle_id, EntityKind::Vehicle);
    auto rsu = serving_rsu(index);
    if (!rsu) {
      metrics_.no_infrastructure++;
      return;
    }
    auto ctx = context();
    ProtocolMessage m1 = v.request_key(ctx, *rsu);
    runtime_[index].last_request = clock_;
    unicast(m1);
  }

 private:
  struct Event {
    double time = 0;
    std::uint64_t seq = 0;
    EventFn fn;
    bool delivery = false;
  };
  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      return a.time > b.time || (a.time == b.time && a.seq > b.seq);
    }
  };

  struct VehicleRuntime {
    Vec2 fixed_pos;
    std::optional<EntityId> serving;
    double last_request = -1e9;
  };

  std::size_t index_of(EntityId id, EntityKind want) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end() || it->second.first != want) throw TopologyError("wrong entity kind");
    return it->second.second;
  }

  VehicleRuntime& runtime_at(EntityId vehicle_id) { return runtime_[index_of(vehicle_id, EntityKind::Vehicle)]; }

  double travel_delay(EntityKind from, EntityKind to) const {
    const LinkModel& l = cfg_.link;
    auto is = [&](EntityKind a, EntityKind b) {
      return (from == a && to == b) || (from == b && to == a);
    };
    if (is(EntityKind::Ca, EntityKind::Manager)) return l.t_ca;
    if (is(EntityKind::Manager, EntityKind::Rsu)) return l.t_man;
    if (from == EntityKind::Manager && to == EntityKind::Manager) return l.t_man;
    if (from == EntityKind::Rsu && to == EntityKind::Rsu) return l.t_rsu;
    if (is(EntityKind::Rsu, EntityKind::Vehicle)) return l.radio_latency;
    return l.t_man;
  }

  double proc_delay(EntityKind k) const {
    switch (k) {
      case EntityKind::Ca: return cfg_.link.proc_ca;
      case EntityKind::Manager: return cfg_.link.proc_man;
      case EntityKind::Rsu: return cfg_.link.proc_rsu;
      case EntityKind::Vehicle: return 0;
    }
    return 0;
  }

  void note_revocation_send(MsgKind kind) {
    if (!revocation_) return;
    switch (kind) {
      case MsgKind::RevokeToManager:
      case MsgKind::RevokeToRsu:
      case MsgKind::ManagerForward:
      case MsgKind::RevokeBroadcast:
        revocation_->messages++;
        if (kind == MsgKind::RevokeToRsu) revocation_->rsu_messages++;
        if (kind == MsgKind::ManagerForward) revocation_->forwards++;
        if (kind == MsgKind::RevokeBroadcast) revocation_->broadcasts++;
        break;
      default:
        break;
    }
  }

  // Sends every handler-produced message after the entity's processing time.
  void send_after_processing(EntityKind k, std::vector<ProtocolMessage> out) {
    if (out.empty()) return;
    double proc = proc_delay(k);
    schedule(proc, [msgs = std::move(out)](SimWorld& w) {
      for (const auto& m : msgs) w.unicast(m);
    });
  }

  void deliver(ProtocolMessage msg, int forward_hops) {
    if (cfg_.link.loss_rate > 0 && loss_rng_.chance(cfg_.link.loss_rate)) {
      metrics_.loss_drops++;
      return;
    }
    if (tap_) {
      auto kept = tap_(msg);
      if (!kept) {
        metrics_.tap_suppressed++;
        return;
      }
      msg = std::move(*kept);
    }
    EntityKind dst_kind = kind_of(msg.dst);

    // Radio legs enforce range at delivery time.
    if (dst_kind == EntityKind::Vehicle) {
      std::size_t vi = index_of(msg.dst, EntityKind::Vehicle);
      EntityKind src_kind = kind_of(msg.src);
      if (src_kind == EntityKind::Rsu) {
        RsuNode& r = rsu_of(msg.src);
        if (distance(vehicle_position(vi), r.position) > r.range) {
          // Soft handover: chase the vehicle one RSU forward.
          std::optional<EntityId> next;
          for (const auto& [elp, entry] : r.passed_vehicles)
            if (entry.vehicle_id == msg.dst && entry.next_rsu) next = entry.next_rsu;
          if (next && (forward_hops == 0 || cfg_.link.recursive_handover)) {
            // Same message continuing on a new path, not a fresh send.
            ProtocolMessage fwd = msg;
            fwd.src = *next;
            metrics_.handover_forwards++;
            schedule(cfg_.link.t_rsu + cfg_.link.radio_latency,
                     [fwd, forward_hops](SimWorld& w) { w.deliver(fwd, forward_hops + 1); }, true);
          } else {
            metrics_.delivery_failures++;
          }
          return;
        }
      }
    }
    if (dst_kind == EntityKind::Rsu && kind_of(msg.src) == EntityKind::Vehicle) {
      std::size_t vi = index_of(msg.src, EntityKind::Vehicle);
      RsuNode& r = rsu_of(msg.dst);
      if (distance(vehicle_position(vi), r.position) > r.range) {
        metrics_.delivery_failures++;
        return;
      }
    }

    metrics_.messages_delivered++;
    dispatch(msg);
  }

  void deliver_broadcast(EntityId rsu_id, const ProtocolMessage& msg) {
    metrics_.messages_delivered++;  // the transmission itself; receptions counted per vehicle
    const RsuNode& r = rsu_of(rsu_id);
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      if (distance(vehicle_position(i), r.position) > r.range) continue;
      if (cfg_.link.loss_rate > 0 && loss_rng_.chance(cfg_.link.loss_rate)) {
        metrics_.reception_loss_drops++;
        continue;
      }
      metrics_.broadcast_receptions++;
      VehicleNode& v = vehicles_[i];
      if (msg.kind == MsgKind::RevokeBroadcast) {
        v.handle_revocation_broadcast(msg);
        if (revocation_) {
          revocation_->warned.insert(v.id);
          revocation_->last_warning_time = clock_;
        }
      }
    }
  }

  void dispatch(const ProtocolMessage& msg) {
    auto ctx = context();
    switch (kind_of(msg.dst)) {
      case EntityKind::Rsu: {
        RsuNode& r = rsu_of(msg.dst);
        if (msg.kind == MsgKind::KeyReq1) {
          if (auto out = r.handle_key_request(ctx, msg)) send_after_processing(EntityKind::Rsu, {*out});
        } else if (msg.kind == MsgKind::KeyResp5) {
          if (auto out = r.handle_key_response(ctx, msg)) send_after_processing(EntityKind::Rsu, {*out});
        } else if (msg.kind == MsgKind::RevokeToRsu) {
          auto action = r.handle_revocation(ctx, msg);
          EntityId rid = r.id;
          double proc = proc_delay(EntityKind::Rsu);
          if (action.broadcast) {
            ProtocolMessage bc = *action.broadcast;
            schedule(proc, [rid, bc](SimWorld& w) { w.broadcast_in_range(rid, bc); });
          }
          if (action.relay) send_after_processing(EntityKind::Rsu, {*action.relay});
        }
        break;
      }
      case EntityKind::Manager: {
        ManagerNode& m = manager_of(msg.dst);
        if (msg.kind == MsgKind::KeyReq2) {
          if (auto out = m.handle_key_request(ctx, msg)) send_after_processing(EntityKind::Manager, {*out});
        } else if (msg.kind == MsgKind::KeyResp4) {
          if (auto out = m.handle_key_response(ctx, msg)) send_after_processing(EntityKind::Manager, {*out});
        } else if (msg.kind == MsgKind::Register) {
          if (auto out = m.handle_register(ctx, msg)) send_after_processing(EntityKind::Manager, {*out});
        } else if (msg.kind == MsgKind::ManagerHandoff) {
          m.handle_handoff(ctx, msg);
        } else if (msg.kind == MsgKind::RevokeToManager || msg.kind == MsgKind::ManagerForward) {
          auto out = m.route_revocation(ctx, msg, cfg_.revoke_routing);
          if (revocation_) {
            std::size_t chain = 0;
            for (const auto& o : out) chain += o.kind == MsgKind::RevokeToRsu ? 1 : 0;
            if (chain) revocation_->chain_lengths.push_back(chain);
          }
          send_after_processing(EntityKind::Manager, std::move(out));
        }
        break;
      }
      case EntityKind::Ca: {
        if (msg.kind == MsgKind::KeyReq3) {
          if (auto out = ca_.handle_key_request(ctx, msg)) send_after_processing(EntityKind::Ca, {*out});
        }
        break;
      }
      case EntityKind::Vehicle: {
        VehicleNode& v = vehicle_of(msg.dst);
        if (msg.kind == MsgKind::KeyResp6) {
          auto result = v.handle_key_response(ctx, msg);
          if (result.outcome == KeyRespOutcome::Stale && !v.revoked) {
            // Old response: ignore it and request another key, rate-limited
            // so a burst of stale replies cannot snowball.
            std::size_t vi = index_of(msg.dst, EntityKind::Vehicle);
            if (clock_ - runtime_[vi].last_request >= cfg_.retry_timeout / 2) request_key_now(msg.dst);
          }
        } else if (msg.kind == MsgKind::RevokeBroadcast) {
          // Unicast variant used by tests; the normal path is broadcast.
          v.handle_revocation_broadcast(msg);
        }
        break;
      }
    }
  }

  // Re-arms itself until the vehicle is certified (or revoked).
  void certify_watchdog(EntityId vehicle_id) {
    VehicleNode& v = vehicle_of(vehicle_id);
    std::size_t vi = index_of(vehicle_id, EntityKind::Vehicle);
    if (v.revoked) return;
    if (v.has_valid_cert(clock_)) {
      if (!cfg_.auto_refresh) return;
      double at_expiry = v.cert->expiry() - clock_ + 1e-6;
      if (clock_ + at_expiry < cfg_.duration)
        schedule(at_expiry, [vehicle_id](SimWorld& w) { w.certify_watchdog(vehicle_id); });
      return;
    }
    bool awaiting = v.pending_nonce && (clock_ - runtime_[vi].last_request) < cfg_.retry_timeout;
    if (!awaiting) request_key_now(vehicle_id);
    double next = awaiting ? cfg_.retry_timeout - (clock_ - runtime_[vi].last_request) : cfg_.retry_timeout;
    next = std::max(next, cfg_.mobility_sample_interval / 4);
    if (clock_ + next < cfg_.duration)
      schedule(next, [vehicle_id](SimWorld& w) { w.certify_watchdog(vehicle_id); });
  }

  // Periodic serving-RSU tracking: departures leave soft-handover pointers,
  // arrivals with valid certificates register with the new RSU's manager.
  void mobility_sample() {
    auto ctx = context();
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      VehicleNode& v = vehicles_[i];
      auto now_serving = serving_rsu(i);
      auto& rt = runtime_[i];
      if (now_serving == rt.serving) continue;
      if (rt.serving && now_serving) rsu_of(*rt.serving).note_vehicle_departed(v.identity.elp, *now_serving);
      if (now_serving && v.has_valid_cert(clock_)) {
        RsuNode& r = rsu_of(*now_serving);
        if (auto reg = r.register_vehicle(ctx, v.identity.elp, v.id, v.cert->expiry(), rt.serving))
          send_after_processing(EntityKind::Rsu, {*reg});
      }
      rt.serving = now_serving;
    }
    if (clock_ + cfg_.mobility_sample_interval <= cfg_.duration)
      schedule(cfg_.mobility_sample_interval, [](SimWorld& w) { w.mobility_sample(); });
  }

  WorldConfig cfg_;
  CryptoProvider crypto_;
  Rng keygen_;
  Rng loss_rng_;

  double clock_ = 0;
  std::uint64_t event_seq_ = 0;
  std::uint64_t msg_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;

  EntityId next_id_ = 1;
  CaNode ca_;
  std::vector<ManagerNode> managers_;
  std::vector<RsuNode> rsus_;
  std::vector<VehicleNode> vehicles_;
  std::vector<VehicleRuntime> runtime_;
  std::map<EntityId, std::pair<EntityKind, std::size_t>> kinds_;
  std::map<EntityId, Bytes> pubkeys_;
  std::map<EntityId, EntityId> rsu_owner_;
  MobilityTrace trace_;

  NetMetrics metrics_;
  FlowCounters counters_;
  std::vector<SecurityEvent> security_log_;
  std::optional<RevocationTracker> revocation_;
  LinkTap tap_;
  std::set<EntityId> bystanders_only_;
};

}  // namespace vanet
