#pragma once

// Recursive-descent checker for the subset of the DOT language an SMM
// snapshot can use: a (di)graph with node statements, edge statements and
// attribute lists. Returns an error description or the empty string.

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tm2smm::testing {

class DotChecker {
 public:
  explicit DotChecker(std::string text) : text_(std::move(text)) {}

  std::string check() {
    try {
      graph();
      skip_space();
      if (pos_ != text_.size()) fail("trailing input");
    } catch (const std::string& e) {
      return e;
    }
    return {};
  }

  std::size_t nodes = 0;
  std::size_t edges = 0;

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw what + " at offset " + std::to_string(pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(std::string_view s) {
    skip_space();
    return text_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s) {
    if (!peek(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  std::string id() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected ID");
    const char c = text_[pos_];
    if (c == '"') {
      std::string out;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    std::size_t start = pos_;
    auto word = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    };
    while (pos_ < text_.size() && word(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected ID");
    return std::string(text_.substr(start, pos_ - start));
  }

  void attr_list() {
    while (peek("[")) {
      expect("[");
      while (!peek("]")) {
        id();
        expect("=");
        id();
        if (peek(",")) expect(",");
        else if (peek(";")) expect(";");
      }
      expect("]");
    }
  }

  void graph() {
    auto kind = id();
    if (kind != "digraph" && kind != "graph") fail("expected graph keyword");
    if (!peek("{")) id();
    expect("{");
    while (!peek("}")) {
      auto first = id();
      if (first == "node" || first == "edge" || first == "graph") {
        attr_list();
      } else if (peek("->")) {
        while (peek("->")) {
          expect("->");
          id();
          ++edges;
        }
        attr_list();
      } else {
        ++nodes;
        attr_list();
      }
      if (peek(";")) expect(";");
    }
    expect("}");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace tm2smm::testing
