#include "vanet/crypto.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

namespace vanet {
namespace {

class CryptoBothModes : public ::testing::TestWithParam<CryptoMode> {
 protected:
  CryptoProvider provider{GetParam(), 99};
  Rng rng{123};
  Vac vac = make_vac(Elp::from_u64(1), Ecn::from_u64(2));
  Vac other_vac = make_vac(Elp::from_u64(3), Ecn::from_u64(4));
  Bytes payload{0xde, 0xad, 0xbe, 0xef, 0x00, 0x42};
};

TEST_P(CryptoBothModes, SymRoundTrip) {
  Bytes sealed = provider.sym_seal(vac, payload);
  EXPECT_EQ(provider.sym_open(vac, sealed), payload);
}

TEST_P(CryptoBothModes, SymWrongKeyFails) {
  Bytes sealed = provider.sym_seal(vac, payload);
  EXPECT_THROW(provider.sym_open(other_vac, sealed), AuthenticationFailure);
}

TEST_P(CryptoBothModes, SymEmptyPayloadRejected) {
  EXPECT_THROW(provider.sym_seal(vac, Bytes{}), ArgumentError);
}

// Bit-flip sweep: flipping any single ciphertext bit must break the seal.
TEST_P(CryptoBothModes, SymTamperDetectedAtRandomBitPositions) {
  Bytes sealed = provider.sym_seal(vac, payload);
  Rng positions(2024);
  for (int i = 0; i < 100; ++i) {
    Bytes tampered = sealed;
    std::size_t bit = positions.next_below(tampered.size() * 8);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_THROW(provider.sym_open(vac, tampered), AuthenticationFailure) << "bit " << bit;
  }
}

TEST_P(CryptoBothModes, AsymRoundTrip) {
  KeyPair rsu = provider.make_keypair(1, rng);
  KeyPair mgr = provider.make_keypair(2, rng);
  Bytes sealed = provider.asym_seal(rsu, mgr.public_key, payload);
  EXPECT_EQ(provider.asym_open(mgr, rsu.public_key, sealed), payload);
}

TEST_P(CryptoBothModes, AsymWrongSenderPublicIsAuthenticationFailure) {
  KeyPair rsu = provider.make_keypair(1, rng);
  KeyPair mgr = provider.make_keypair(2, rng);
  KeyPair intruder = provider.make_keypair(3, rng);
  Bytes sealed = provider.asym_seal(rsu, mgr.public_key, payload);
  EXPECT_THROW(provider.asym_open(mgr, intruder.public_key, sealed), AuthenticationFailure);
}

TEST_P(CryptoBothModes, AsymWrongRecipientIsConfidentialityFailure) {
  KeyPair rsu = provider.make_keypair(1, rng);
  KeyPair mgr = provider.make_keypair(2, rng);
  KeyPair bystander = provider.make_keypair(3, rng);
  Bytes sealed = provider.asym_seal(rsu, mgr.public_key, payload);
  EXPECT_THROW(provider.asym_open(bystander, rsu.public_key, sealed), ConfidentialityFailure);
}

TEST_P(CryptoBothModes, AsymMismatchedHalvesFail) {
  KeyPair rsu = provider.make_keypair(1, rng);
  KeyPair mgr = provider.make_keypair(2, rng);
  KeyPair franken{mgr.public_key, provider.make_keypair(3, rng).private_key, 9};
  Bytes sealed = provider.asym_seal(rsu, mgr.public_key, payload);
  EXPECT_ANY_THROW(provider.asym_open(franken, rsu.public_key, sealed));
}

TEST_P(CryptoBothModes, AsymTamperDetected) {
  KeyPair rsu = provider.make_keypair(1, rng);
  KeyPair mgr = provider.make_keypair(2, rng);
  Bytes sealed = provider.asym_seal(rsu, mgr.public_key, payload);
  Rng positions(77);
  for (int i = 0; i < 100; ++i) {
    Bytes tampered = sealed;
    std::size_t bit = positions.next_below(tampered.size() * 8);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_ANY_THROW(provider.asym_open(mgr, rsu.public_key, tampered)) << "bit " << bit;
  }
}

// Round trip must hold for every ordered pair in a small topology.
TEST_P(CryptoBothModes, AsymRoundTripAllOrderedPairs) {
  std::vector<KeyPair> keys;
  for (std::uint32_t i = 0; i < 6; ++i) keys.push_back(provider.make_keypair(i, rng));
  for (const auto& from : keys)
    for (const auto& to : keys) {
      if (from.owner_id == to.owner_id) continue;
      Bytes sealed = provider.asym_seal(from, to.public_key, payload);
      EXPECT_EQ(provider.asym_open(to, from.public_key, sealed), payload);
    }
}

INSTANTIATE_TEST_SUITE_P(Modes, CryptoBothModes, ::testing::Values(CryptoMode::Mock, CryptoMode::Real),
                         [](const auto& info) { return info.param == CryptoMode::Mock ? "Mock" : "Real"; });

TEST(Nonces, FNonceDefinitionAndWraparound) {
  EXPECT_EQ(f_nonce(Nonce{0}).value, 1u);
  EXPECT_EQ(f_nonce(Nonce{0xffffffffffffffffULL}).value, 0u);
}

TEST(Nonces, FNonceInjectiveOverRandomPairs) {
  Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t a = r.next_u64(), b = r.next_u64();
    if (f_nonce(Nonce{a}).value == f_nonce(Nonce{b}).value) EXPECT_EQ(a, b);
  }
}

TEST(Nonces, ConsecutiveDrawsDistinct) {
  NonceLedger ledger(1);
  Nonce a = ledger.fresh();
  Nonce b = ledger.fresh();
  EXPECT_NE(a.value, b.value);
}

TEST(Nonces, SameSeedSameSequence) {
  NonceLedger a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.fresh().value, b.fresh().value);
}

TEST(Nonces, NoDuplicatesOverManyDraws) {
  NonceLedger ledger(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100000; ++i) EXPECT_TRUE(seen.insert(ledger.fresh().value).second);
}

}  // namespace
}  // namespace vanet
