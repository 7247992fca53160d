#include "tm2smm/decoder.hpp"

#include <limits>
#include <unordered_set>

namespace tm2smm {

std::size_t read_bits(const SmmMachine& m, NodeId node, std::size_t width,
                      NodeId origin) {
  std::size_t value = 0;
  for (std::size_t j = 0; j < width; ++j) {
    const auto to = m.target(node, bit_direction(j));
    if (to == origin) {
      value |= std::size_t{1} << j;
    } else if (to != node) {
      throw MalformedBit("node " + std::to_string(node) + " bit b" +
                         std::to_string(j) + " targets node " +
                         std::to_string(to));
    }
  }
  return value;
}

namespace {

void require_shape(const SmmMachine& m, const EncodingPlan& plan) {
  if (m.direction_count() != 4 + plan.k)
    throw DecodeError("machine has " + std::to_string(m.direction_count()) +
                      " directions, plan expects " +
                      std::to_string(4 + plan.k));
  if (!m.center()) throw DecodeError("machine has no center");
}

// West-to-east tape nodes reachable from the center's tape node.
std::vector<NodeId> tape_chain(const SmmMachine& m, NodeId origin) {
  const NodeId head = *m.center();
  if (head == origin) throw DecodeError("center is the Origin");
  const NodeId cell = m.target(head, kF);
  if (cell == origin || cell == head)
    throw DecodeError("center has no tape node");
  if (m.target(cell, kF) != head)
    throw DecodeError("center and its tape node are not f-paired");

  std::unordered_set<NodeId> seen{cell};
  NodeId west = cell;
  while (m.target(west, kW) != origin) {
    west = m.target(west, kW);
    if (!seen.insert(west).second) throw DecodeError("cycle in the w chain");
  }
  std::vector<NodeId> chain;
  seen.clear();
  for (NodeId at = west; at != origin; at = m.target(at, kE)) {
    if (!seen.insert(at).second) throw DecodeError("cycle in the e chain");
    chain.push_back(at);
  }
  return chain;
}

}  // namespace

DecodedConfiguration decode_configuration(const SmmMachine& m,
                                          const EncodingPlan& plan) {
  require_shape(m, plan);
  DecodedConfiguration d;
  d.head_node = *m.center();
  d.origin = m.target(d.head_node, kO);
  d.tape_nodes = tape_chain(m, d.origin);

  const NodeId cell = m.target(d.head_node, kF);
  bool found = false;
  for (std::size_t i = 0; i < d.tape_nodes.size(); ++i) {
    const auto node = d.tape_nodes[i];
    const auto idx = read_bits(m, node, plan.n, d.origin);
    if (idx >= plan.symbols.size())
      throw UndeclaredIndex("tape node " + std::to_string(node) +
                            " holds symbol index " + std::to_string(idx));
    d.config.cells.push_back(plan.symbols[idx]);
    if (node == cell) {
      d.config.head = i;
      found = true;
    }
  }
  if (!found) throw DecodeError("center's tape node is not on the e chain");

  const auto state = read_bits(m, d.head_node, plan.m, d.origin);
  if (state >= plan.states.size())
    throw UndeclaredIndex("head node holds state index " +
                          std::to_string(state));
  d.config.state = plan.states[state];
  return d;
}

std::vector<std::string> check_structure(const SmmMachine& m,
                                         const EncodingPlan& plan) {
  std::vector<std::string> bad;
  try {
    require_shape(m, plan);
  } catch (const DecodeError& e) {
    return {e.what()};
  }
  const NodeId origin = m.target(*m.center(), kO);
  auto node = [](NodeId n) { return "node " + std::to_string(n); };

  for (std::size_t d = 0; d < m.direction_count(); ++d) {
    if (m.target(origin, Direction{static_cast<std::uint16_t>(d)}) != origin)
      bad.push_back("Origin edge " + m.directions()[d] + " is not a self-loop");
  }
  for (NodeId n = 0; n < m.node_count(); ++n) {
    if (m.target(n, kO) != origin) bad.push_back(node(n) + ": o is not Origin");
    for (std::size_t j = 0; j < plan.k; ++j) {
      const auto to = m.target(n, bit_direction(j));
      if (to != n && to != origin)
        bad.push_back(node(n) + ": b" + std::to_string(j) +
                      " targets neither self nor Origin");
    }
  }

  std::vector<NodeId> tapes;
  try {
    tapes = tape_chain(m, origin);
  } catch (const DecodeError& e) {
    bad.push_back(e.what());
    return bad;
  }
  std::vector<NodeId> heads;
  for (auto t : tapes) {
    const auto h = m.target(t, kF);
    heads.push_back(h);
    if (h == origin || h == t) {
      bad.push_back(node(t) + ": tape node without a head node");
    } else if (m.target(h, kF) != t) {
      bad.push_back(node(t) + ": f is not an involution");
    }
  }
  auto check_chain = [&](const std::vector<NodeId>& chain, const char* kind) {
    const auto last = chain.size() - 1;
    if (m.target(chain.front(), kW) != origin)
      bad.push_back(std::string("westmost ") + kind + " w is not Origin");
    if (m.target(chain.back(), kE) != origin)
      bad.push_back(std::string("eastmost ") + kind + " e is not Origin");
    for (std::size_t i = 0; i < last; ++i) {
      if (m.target(chain[i], kE) != chain[i + 1] ||
          m.target(chain[i + 1], kW) != chain[i])
        bad.push_back(std::string(kind) + " chain broken between cells " +
                      std::to_string(i) + " and " + std::to_string(i + 1));
    }
  };
  check_chain(tapes, "tape");
  check_chain(heads, "head");
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const auto h = heads[i];
    if (i + 1 < heads.size() &&
        m.target(m.target(h, kE), kF) != m.target(m.target(h, kF), kE))
      bad.push_back("head " + std::to_string(i) + ": e.f differs from f.e");
    if (i > 0 &&
        m.target(m.target(h, kW), kF) != m.target(m.target(h, kF), kW))
      bad.push_back("head " + std::to_string(i) + ": w.f differs from f.w");
  }

  std::unordered_set<NodeId> accounted{origin};
  accounted.insert(tapes.begin(), tapes.end());
  accounted.insert(heads.begin(), heads.end());
  if (accounted.size() != 1 + 2 * tapes.size())
    bad.push_back("tape and head chains share nodes");
  if (accounted.size() != m.node_count())
    bad.push_back(std::to_string(m.node_count() - accounted.size()) +
                  " node(s) outside the tape and head chains");
  return bad;
}

std::optional<std::uint64_t> readout_value(const TmConfiguration& c,
                                           const std::string& blank,
                                           const ReadoutPredicate& pred) {
  if (pred.base < 2 || pred.base > 36)
    throw std::invalid_argument("base must be in [2, 36]");
  if (c.state != pred.state || c.head != 0 || c.cells.empty() ||
      c.cells[0] != pred.symbol)
    return std::nullopt;

  std::size_t i = 0;
  while (i < c.cells.size() && c.cells[i] == blank) ++i;
  std::uint64_t value = 0;
  for (; i < c.cells.size() && c.cells[i] != blank; ++i) {
    const auto& tok = c.cells[i];
    unsigned digit = 36;
    if (tok.size() == 1) {
      const char ch = tok[0];
      if (ch >= '0' && ch <= '9') digit = static_cast<unsigned>(ch - '0');
      else if (ch >= 'a' && ch <= 'z') digit = static_cast<unsigned>(ch - 'a' + 10);
      else if (ch >= 'A' && ch <= 'Z') digit = static_cast<unsigned>(ch - 'A' + 10);
    }
    if (digit >= pred.base)
      throw std::invalid_argument("'" + tok + "' is not a base-" +
                                  std::to_string(pred.base) + " digit");
    if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / pred.base)
      throw std::overflow_error("readout value overflows 64 bits");
    value = value * pred.base + digit;
  }
  return value;
}

}  // namespace tm2smm
