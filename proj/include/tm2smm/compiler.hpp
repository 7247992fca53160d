#pragma once

// Turing machine -> storage modification machine compiler.
//
// Compiled graphs use four structural directions plus k shared bit
// directions:
//   f   head node <-> tape node of the same cell
//   o   every node -> Origin (the first node; all its edges are self-loops)
//   e,w east/west chain links; the outermost links target the Origin
//   bj  bit j of the symbol (tape node) or state (head node) index,
//       LSB first: self = 0, Origin = 1
// The center is always the head node over the current cell.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tm2smm/smm.hpp"
#include "tm2smm/tm.hpp"

namespace tm2smm {

inline constexpr Direction kF{0};
inline constexpr Direction kO{1};
inline constexpr Direction kE{2};
inline constexpr Direction kW{3};
inline constexpr Direction bit_direction(std::size_t j) {
  return Direction{static_cast<std::uint16_t>(4 + j)};
}

struct EncodingPlan {
  std::size_t n = 1;  // symbol bits
  std::size_t m = 1;  // state bits
  std::size_t k = 1;  // max(n, m)
  std::vector<std::string> symbols;  // index order; symbols[0] is blank
  std::vector<std::string> states;

  std::vector<std::string> directions() const;
  std::size_t symbol_index(const std::string& s) const;
  std::size_t state_index(const std::string& s) const;

  bool operator==(const EncodingPlan&) const = default;
};

// Smallest w >= 1 with 2^w >= count. Throws std::invalid_argument on 0.
std::size_t bit_width(std::size_t count);

EncodingPlan plan_encoding(const TuringMachine& m);

// LSB-first bits of i. Throws std::out_of_range when i >= 2^width.
std::vector<bool> encode_index(std::size_t i, std::size_t width);

// One `set` per bit on the node at `target`: 0 -> self, 1 -> Origin.
std::vector<Line> emit_write_bits(const Path& target,
                                  const std::vector<bool>& bits);

enum class Side { east, west };

std::vector<Line> emit_extension(Side side, const EncodingPlan& plan);
std::vector<Line> emit_transition(const Transition& t, const std::string& symbol,
                                  const std::string& state,
                                  const EncodingPlan& plan);
std::vector<Line> emit_step(const TuringMachine& m, const EncodingPlan& plan);
std::vector<Line> emit_prologue(const TuringMachine& m,
                                const TmConfiguration& c0,
                                const EncodingPlan& plan);

// Header comments carrying the plan, and the inverse.
std::vector<std::string> plan_header(const EncodingPlan& plan);
EncodingPlan read_plan(const SmmProgram& p);

struct Compiled {
  SmmProgram program;
  EncodingPlan plan;
};

Compiled compile(const TuringMachine& m, const TmConfiguration& c0);

// Messages used by generated stop instructions.
inline constexpr const char* kHaltMessage = "HALT";
inline constexpr const char* kBadCodeMessage = "BADCODE";

}  // namespace tm2smm
