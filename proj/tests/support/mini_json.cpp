// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "mini_json.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace signforge::testing::mini_json {

long long Value::integer() const {
  const double d = num();
  if (d != std::floor(d)) throw std::runtime_error("mini_json: not an integer");
  return static_cast<long long>(d);
}

const Value& Value::operator[](const std::string& key) const {
  const auto& o = obj();
  const auto it = o.find(key);
  if (it == o.end()) throw std::runtime_error("mini_json: missing key " + key);
  return it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Value document() {
    Value v = value();
    ws();
    if (i_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::runtime_error(std::string("mini_json: ") + what + " at " + std::to_string(i_));
  }
  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }
  char peek() {
    ws();
    if (i_ >= s_.size()) fail("unexpected end");
    return s_[i_];
  }
  void expect(char c) {
    if (peek() != c) fail("unexpected character");
    ++i_;
  }
  bool literal(std::string_view word) {
    if (s_.substr(i_, word.size()) != word) return false;
    i_ += word.size();
    return true;
  }

  Value value() {
    const char c = peek();
    if (c == '{') return object();
    if (c == '[') return array();
    if (c == '"') return Value{string()};
    if (literal("true")) return Value{true};
    if (literal("false")) return Value{false};
    if (literal("null")) return Value{nullptr};
    return Value{number()};
  }

  Value object() {
    expect('{');
    auto o = std::make_shared<Object>();
    if (peek() == '}') {
      ++i_;
      return Value{o};
    }
    for (;;) {
      if (peek() != '"') fail("expected key");
      std::string key = string();
      expect(':');
      (*o)[key] = value();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect('}');
      return Value{o};
    }
  }

  Value array() {
    expect('[');
    auto a = std::make_shared<Array>();
    if (peek() == ']') {
      ++i_;
      return Value{a};
    }
    for (;;) {
      a->push_back(value());
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      return Value{a};
    }
  }

  std::string string() {
    expect('"');
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
      char c = s_[i_++];
      if (c == '\\') {
        if (i_ >= s_.size()) fail("bad escape");
        const char e = s_[i_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'u': {
            const unsigned cp = unsigned(std::stoul(std::string(s_.substr(i_, 4)), nullptr, 16));
            i_ += 4;
            if (cp < 0x80) out += char(cp);
            else out += '?';
            break;
          }
          default: out += e;
        }
      } else {
        out += c;
      }
    }
    if (i_ >= s_.size()) fail("unterminated string");
    ++i_;
    return out;
  }

  double number() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-' || s_[i_] == '+' ||
                              s_[i_] == '.' || s_[i_] == 'e' || s_[i_] == 'E'))
      ++i_;
    if (start == i_) fail("expected value");
    const std::string tok(s_.substr(start, i_ - start));
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("bad number");
    return d;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

Value parse(std::string_view text) { return Reader(text).document(); }

}  // namespace signforge::testing::mini_json
