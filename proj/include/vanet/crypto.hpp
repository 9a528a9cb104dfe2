#pragma once

// Sealing primitives behind the protocol messages.
//
// Two providers satisfy the same contract:
//   Real — libsodium: crypto_secretbox for VAC sealing, crypto_box for the
//          private-then-public double encryption of messages (2)-(5).
//   Mock — plaintext plus a keyed 32-bit checksum. Orders of magnitude
//          faster for large sweeps while still detecting wrong keys and
//          tampering, so the adversary suite passes in either mode.
//
// Both asymmetric formats carry sender/recipient key fingerprints so the
// opener can tell "forged or tampered" (AuthenticationFailure) apart from
// "not addressed to me" (ConfidentialityFailure). A forged fingerprint
// still fails the authenticated open.

#include <sodium.h>

#include <cstdint>
#include <unordered_set>

#include "vanet/bytes.hpp"
#include "vanet/errors.hpp"
#include "vanet/identity.hpp"
#include "vanet/rng.hpp"

namespace vanet {

// --- nonces ---------------------------------------------------------------

struct Nonce {
  std::uint64_t value = 0;
  auto operator<=>(const Nonce&) const = default;
};

// The agreed-upon function f applied to a challenge nonce before it is
// echoed back: increment mod 2^64. Injective; centralized so it can be
// swapped without touching the handlers.
inline Nonce f_nonce(Nonce n) { return Nonce{n.value + 1}; }

// Per-entity nonce source: duplicate-free within a run, reproducible from
// the run seed.
class NonceLedger {
 public:
  explicit NonceLedger(std::uint64_t seed = 0) : rng_(seed) {}

  Nonce fresh() {
    std::uint64_t v = rng_.next_u64();
    while (!issued_.insert(v).second) v = rng_.next_u64();
    return Nonce{v};
  }

  std::size_t issued_count() const { return issued_.size(); }

 private:
  Rng rng_;
  std::unordered_set<std::uint64_t> issued_;
};

// --- key material ----------------------------------------------------------

struct KeyPair {
  Bytes public_key;
  Bytes private_key;
  std::uint32_t owner_id = 0;
};

enum class CryptoMode { Real, Mock };

namespace detail {

inline std::uint64_t fnv1a(ByteView data, std::uint64_t h = 1469598103934665603ULL) {
  for (auto b : data) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

inline Bytes expand_key(ByteView material, std::size_t n) {
  Rng r(fnv1a(material));
  return r.next_bytes(n);
}

inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium failed to initialize");
}

inline Bytes blake2b(ByteView data, std::size_t n) {
  ensure_sodium();
  Bytes out(n);
  crypto_generichash(out.data(), n, data.data(), data.size(), nullptr, 0);
  return out;
}

}  // namespace detail

class CryptoProvider {
 public:
  explicit CryptoProvider(CryptoMode mode, std::uint64_t seed = 0)
      : mode_(mode), nonce_rng_(derive_seed(seed, {0xcafeULL})) {
    if (mode_ == CryptoMode::Real) detail::ensure_sodium();
  }

  CryptoMode mode() const { return mode_; }

  KeyPair make_keypair(std::uint32_t owner, Rng& rng) const {
    KeyPair kp;
    kp.owner_id = owner;
    kp.private_key = rng.next_bytes(32);
    kp.public_key = public_half(kp.private_key);
    return kp;
  }

  // Public half recomputed from the private half; used for the recipient
  // check so a mismatched (public, private) pairing cannot slip through.
  Bytes public_half(ByteView private_key) const {
    if (mode_ == CryptoMode::Mock) return detail::expand_key(private_key, 32);
    detail::ensure_sodium();
    Bytes pk(crypto_scalarmult_BYTES);
    crypto_scalarmult_base(pk.data(), private_key.data());
    return pk;
  }

  // --- symmetric (VAC) sealing: E_VAC(...) --------------------------------

  Bytes sym_seal(const Vac& vac, ByteView payload) {
    if (payload.empty()) throw ArgumentError("sym_seal: empty payload");
    if (mode_ == CryptoMode::Mock) {
      Bytes out(payload.begin(), payload.end());
      put_u32(out, mock_tag(sym_key_hash(vac), payload));
      return out;
    }
    Bytes key = detail::blake2b(ByteView{vac.value.data(), vac.value.size()}, crypto_secretbox_KEYBYTES);
    Bytes out = nonce_rng_.next_bytes(crypto_secretbox_NONCEBYTES);
    Bytes ct(payload.size() + crypto_secretbox_MACBYTES);
    crypto_secretbox_easy(ct.data(), payload.data(), payload.size(), out.data(), key.data());
    append(out, ct);
    return out;
  }

  Bytes sym_open(const Vac& vac, ByteView sealed) const {
    if (mode_ == CryptoMode::Mock) {
      if (sealed.size() < 5) throw AuthenticationFailure("sym_open: truncated");
      ByteView payload = sealed.subspan(0, sealed.size() - 4);
      if (get_u32(sealed, sealed.size() - 4) != mock_tag(sym_key_hash(vac), payload))
        throw AuthenticationFailure("sym_open: bad tag");
      return Bytes(payload.begin(), payload.end());
    }
    if (sealed.size() < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES + 1)
      throw AuthenticationFailure("sym_open: truncated");
    Bytes key = detail::blake2b(ByteView{vac.value.data(), vac.value.size()}, crypto_secretbox_KEYBYTES);
    ByteView nonce = sealed.subspan(0, crypto_secretbox_NONCEBYTES);
    ByteView ct = sealed.subspan(crypto_secretbox_NONCEBYTES);
    Bytes out(ct.size() - crypto_secretbox_MACBYTES);
    if (crypto_secretbox_open_easy(out.data(), ct.data(), ct.size(), nonce.data(), key.data()) != 0)
      throw AuthenticationFailure("sym_open: wrong key or tampered");
    return out;
  }

  // --- asymmetric sealing: E_pub(E_priv(...)) ------------------------------
  //
  // One call covers the double encryption of a Fig-style protocol line:
  // authenticity from the sender's private half, confidentiality to the
  // recipient's public half.

  Bytes asym_seal(const KeyPair& sender, ByteView recipient_public, ByteView payload) {
    if (payload.empty()) throw ArgumentError("asym_seal: empty payload");
    Bytes out;
    append(out, fingerprint(sender.public_key));
    append(out, fingerprint(recipient_public));
    if (mode_ == CryptoMode::Mock) {
      append(out, payload);
      put_u32(out, mock_tag(pair_key_hash(sender.public_key, recipient_public), payload));
      return out;
    }
    Bytes nonce = nonce_rng_.next_bytes(crypto_box_NONCEBYTES);
    append(out, nonce);
    Bytes ct(payload.size() + crypto_box_MACBYTES);
    if (crypto_box_easy(ct.data(), payload.data(), payload.size(), nonce.data(), recipient_public.data(),
                        sender.private_key.data()) != 0)
      throw ArgumentError("asym_seal: bad key material");
    append(out, ct);
    return out;
  }

  Bytes asym_open(const KeyPair& recipient, ByteView sender_public, ByteView sealed) const {
    if (sealed.size() < 2 * kFingerprint + 1) throw AuthenticationFailure("asym_open: truncated");
    ByteView sender_fp = sealed.subspan(0, kFingerprint);
    ByteView recipient_fp = sealed.subspan(kFingerprint, kFingerprint);
    Bytes my_public = public_half(recipient.private_key);
    if (!fp_equal(recipient_fp, fingerprint(my_public)))
      throw ConfidentialityFailure("asym_open: not addressed to this key");
    if (!fp_equal(sender_fp, fingerprint(sender_public)))
      throw AuthenticationFailure("asym_open: sender mismatch");
    ByteView rest = sealed.subspan(2 * kFingerprint);
    if (mode_ == CryptoMode::Mock) {
      if (rest.size() < 5) throw AuthenticationFailure("asym_open: truncated");
      ByteView payload = rest.subspan(0, rest.size() - 4);
      if (get_u32(rest, rest.size() - 4) != mock_tag(pair_key_hash(sender_public, my_public), payload))
        throw AuthenticationFailure("asym_open: bad tag");
      return Bytes(payload.begin(), payload.end());
    }
    if (rest.size() < crypto_box_NONCEBYTES + crypto_box_MACBYTES + 1)
      throw AuthenticationFailure("asym_open: truncated");
    ByteView nonce = rest.subspan(0, crypto_box_NONCEBYTES);
    ByteView ct = rest.subspan(crypto_box_NONCEBYTES);
    Bytes out(ct.size() - crypto_box_MACBYTES);
    if (crypto_box_open_easy(out.data(), ct.data(), ct.size(), nonce.data(), sender_public.data(),
                             recipient.private_key.data()) != 0)
      throw AuthenticationFailure("asym_open: forged or tampered");
    return out;
  }

 private:
  static constexpr std::size_t kFingerprint = 8;

  Bytes fingerprint(ByteView public_key) const {
    if (mode_ == CryptoMode::Mock) return u64_bytes(detail::fnv1a(public_key));
    return detail::blake2b(public_key, kFingerprint);
  }

  static bool fp_equal(ByteView a, ByteView b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
  }

  static std::uint64_t sym_key_hash(const Vac& vac) {
    return detail::fnv1a(ByteView{vac.value.data(), vac.value.size()});
  }

  static std::uint64_t pair_key_hash(ByteView sender_public, ByteView recipient_public) {
    return detail::fnv1a(recipient_public, detail::fnv1a(sender_public));
  }

  // Keyed 32-bit checksum over the payload; mock mode's stand-in for a MAC.
  static std::uint32_t mock_tag(std::uint64_t key_hash, ByteView payload) {
    return static_cast<std::uint32_t>(detail::fnv1a(payload, key_hash));
  }

  CryptoMode mode_;
  Rng nonce_rng_;  // deterministic IV/nonce source, derived from the run seed
};

}  // namespace vanet
