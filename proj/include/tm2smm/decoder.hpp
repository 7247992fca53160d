#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tm2smm/compiler.hpp"
#include "tm2smm/smm.hpp"
#include "tm2smm/tm.hpp"

namespace tm2smm {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An edge bj that targets neither its own node nor the Origin.
class MalformedBit : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class UndeclaredIndex : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

struct DecodedConfiguration {
  TmConfiguration config;
  std::vector<NodeId> tape_nodes;  // west to east
  NodeId head_node = 0;            // the center
  NodeId origin = 0;
};

std::size_t read_bits(const SmmMachine& m, NodeId node, std::size_t width,
                      NodeId origin);

// Only valid between section runs: after the prologue or a completed step.
DecodedConfiguration decode_configuration(const SmmMachine& m,
                                          const EncodingPlan& plan);

// Walks the whole graph and lists every violation of the compiled-graph
// shape: f pairing, o -> Origin, chain symmetry, boundary sentinels, bit
// edges limited to self/Origin, and no nodes outside the two chains.
std::vector<std::string> check_structure(const SmmMachine& m,
                                         const EncodingPlan& plan);

struct ReadoutPredicate {
  std::string state;
  std::string symbol;  // symbol under the head
  unsigned base = 10;
};

// When the configuration has the predicate's state and the head is on the
// westmost cell over the predicate's symbol, reads the first maximal run of
// non-blank cells as a base-`base` numeral. Digits are 0-9 then a-z.
// Throws std::invalid_argument on a non-digit token.
std::optional<std::uint64_t> readout_value(const TmConfiguration& c,
                                           const std::string& blank,
                                           const ReadoutPredicate& pred);

}  // namespace tm2smm
