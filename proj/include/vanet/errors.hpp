#pragma once

#include <stdexcept>
#include <string>

namespace vanet {

// Base for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Identity material of the wrong shape (bad ELP/ECN length, malformed VAC).
struct InvalidIdentity : Error {
  using Error::Error;
};

// A seal failed to open: wrong key, forged sender, or tampered ciphertext.
struct AuthenticationFailure : Error {
  using Error::Error;
};

// A sealed message was not addressed to the opener.
struct ConfidentialityFailure : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

// Unknown entity id or unsupported link.
struct TopologyError : Error {
  using Error::Error;
};

// Out-of-range trace query.
struct QueryError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Attack script inconsistent with the world it was pointed at.
struct ScriptError : Error {
  using Error::Error;
};

// An event handler threw; carries the offending event id.
struct SimAbort : Error {
  SimAbort(std::uint64_t event_id, const std::string& what)
      : Error("event " + std::to_string(event_id) + ": " + what), event_id(event_id) {}
  std::uint64_t event_id;
};

}  // namespace vanet
