#pragma once

// Vehicle identity material: the public electronic license plate (ELP),
// the secret electronic chassis number (ECN), and the vehicle
// authentication code (VAC) composed from both. The VAC is the shared
// secret between a vehicle and the certificate authority; the ECN never
// appears on the wire.

#include <array>
#include <compare>
#include <cstdint>

#include "vanet/bytes.hpp"
#include "vanet/errors.hpp"
#include "vanet/rng.hpp"

namespace vanet {

inline constexpr std::size_t kElpSize = 8;
inline constexpr std::size_t kEcnSize = 8;
inline constexpr std::size_t kVacSize = kElpSize + kEcnSize;

struct Elp {
  std::array<std::uint8_t, kElpSize> value{};

  static Elp from_bytes(ByteView b) {
    if (b.size() != kElpSize) throw InvalidIdentity("ELP must be 8 bytes");
    Elp e;
    std::copy(b.begin(), b.end(), e.value.begin());
    return e;
  }

  static Elp from_u64(std::uint64_t v) { return from_bytes(u64_bytes(v)); }

  std::uint64_t as_u64() const { return get_u64(ByteView{value.data(), value.size()}, 0); }

  auto operator<=>(const Elp&) const = default;
};

struct Ecn {
  std::array<std::uint8_t, kEcnSize> value{};

  static Ecn from_bytes(ByteView b) {
    if (b.size() != kEcnSize) throw InvalidIdentity("ECN must be 8 bytes");
    Ecn e;
    std::copy(b.begin(), b.end(), e.value.begin());
    return e;
  }

  static Ecn from_u64(std::uint64_t v) { return from_bytes(u64_bytes(v)); }

  auto operator<=>(const Ecn&) const = default;
};

struct Vac {
  std::array<std::uint8_t, kVacSize> value{};

  static Vac from_bytes(ByteView b) {
    if (b.size() != kVacSize) throw InvalidIdentity("VAC must be 16 bytes");
    Vac v;
    std::copy(b.begin(), b.end(), v.value.begin());
    return v;
  }

  auto operator<=>(const Vac&) const = default;
};

// VAC := ELP || ECN. Deterministic and injective over distinct pairs.
inline Vac make_vac(const Elp& elp, const Ecn& ecn) {
  Vac v;
  std::copy(elp.value.begin(), elp.value.end(), v.value.begin());
  std::copy(ecn.value.begin(), ecn.value.end(), v.value.begin() + kElpSize);
  return v;
}

// Fleet provisioning helper: distinct (ELP, ECN) per vehicle index.
struct VehicleIdentity {
  Elp elp;
  Ecn ecn;
  Vac vac;
};

inline VehicleIdentity provision_identity(std::uint64_t fleet_seed, std::uint32_t index) {
  Rng r(derive_seed(fleet_seed, {0x1dULL, index}));
  // Index in the high bytes guarantees uniqueness; low bytes randomized.
  Elp elp = Elp::from_u64((static_cast<std::uint64_t>(index) << 32) | (r.next_u64() & 0xffffffffULL));
  Ecn ecn = Ecn::from_u64((static_cast<std::uint64_t>(index) << 32) | (r.next_u64() & 0xffffffffULL));
  return {elp, ecn, make_vac(elp, ecn)};
}

}  // namespace vanet
