// Copyright 2026 The zxverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zx/phase.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

namespace zx {

PhaseExpr PhaseExpr::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw PhaseError("phase denominator must be nonzero");
  PhaseExpr p;
  p.pi_num_ = num;
  p.pi_den_ = den;
  p.normalise();
  return p;
}

PhaseExpr PhaseExpr::symbol(const std::string& name, std::int64_t coeff) {
  if (name.empty()) throw PhaseError("empty symbol name");
  PhaseExpr p;
  if (coeff != 0) p.sym_[name] = coeff;
  return p;
}

void PhaseExpr::normalise() {
  if (pi_den_ < 0) {
    pi_den_ = -pi_den_;
    pi_num_ = -pi_num_;
  }
  const std::int64_t period = 2 * pi_den_;
  pi_num_ %= period;
  if (pi_num_ < 0) pi_num_ += period;
  const std::int64_t g = std::gcd(pi_num_, pi_den_);
  if (g > 1) {
    pi_num_ /= g;
    pi_den_ /= g;
  }
  if (pi_num_ == 0) pi_den_ = 1;
  for (auto it = sym_.begin(); it != sym_.end();) {
    it = it->second == 0 ? sym_.erase(it) : std::next(it);
  }
}

PhaseExpr PhaseExpr::operator+(const PhaseExpr& other) const {
  PhaseExpr r;
  r.pi_num_ = pi_num_ * other.pi_den_ + other.pi_num_ * pi_den_;
  r.pi_den_ = pi_den_ * other.pi_den_;
  r.sym_ = sym_;
  for (const auto& [name, coeff] : other.sym_) r.sym_[name] += coeff;
  r.normalise();
  return r;
}

PhaseExpr PhaseExpr::operator-() const {
  PhaseExpr r;
  r.pi_num_ = -pi_num_;
  r.pi_den_ = pi_den_;
  for (const auto& [name, coeff] : sym_) r.sym_[name] = -coeff;
  r.normalise();
  return r;
}

double PhaseExpr::to_radians(const AngleAssignment& assignment) const {
  double value = std::numbers::pi * static_cast<double>(pi_num_) /
                 static_cast<double>(pi_den_);
  for (const auto& [name, coeff] : sym_) {
    auto it = assignment.find(name);
    if (it == assignment.end())
      throw PhaseError("unassigned angle variable: " + name);
    value += static_cast<double>(coeff) * it->second;
  }
  return value;
}

std::string PhaseExpr::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  if (pi_num_ != 0) {
    out += std::to_string(pi_num_);
    if (pi_den_ != 1) out += "/" + std::to_string(pi_den_);
    out += "pi";
  }
  for (const auto& [name, coeff] : sym_) {
    if (coeff > 0 && !out.empty()) out += "+";
    if (coeff == -1) {
      out += "-";
    } else if (coeff != 1) {
      out += std::to_string(coeff) + "*";
    }
    out += name;
  }
  return out;
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw PhaseError("bad phase '" + text + "' at offset " +
                     std::to_string(pos) + ": " + msg);
  }
  std::int64_t integer() {
    bool neg = false;
    if (!done() && (peek() == '+' || peek() == '-')) neg = text[pos++] == '-';
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer");
    std::int64_t v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (text[pos++] - '0');
    return neg ? -v : v;
  }
  std::string ident() {
    std::string name;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                       peek() == '_'))
      name += text[pos++];
    if (name.empty()) fail("expected symbol name");
    return name;
  }
};

}  // namespace

PhaseExpr PhaseExpr::parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) throw PhaseError("empty phase literal");

  Cursor cur{text};
  PhaseExpr result;
  bool first = true;
  while (!cur.done()) {
    std::int64_t sign = 1;
    if (cur.peek() == '+' || cur.peek() == '-') {
      sign = cur.peek() == '-' ? -1 : 1;
      ++cur.pos;
    } else if (!first) {
      cur.fail("expected '+' or '-' between terms");
    }
    first = false;

    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      std::int64_t num = cur.integer();
      std::int64_t den = 1;
      if (!cur.done() && cur.peek() == '/') {
        ++cur.pos;
        den = cur.integer();
      }
      if (!cur.done() && text.compare(cur.pos, 2, "pi") == 0) {
        cur.pos += 2;
        result = result + rational(sign * num, den);
      } else if (!cur.done() && cur.peek() == '*') {
        ++cur.pos;
        result = result + symbol(cur.ident(), sign * num);
      } else if (num == 0 && den == 1) {
        // bare 0 stands for the zero phase
      } else {
        cur.fail("integer must be followed by 'pi' or '*<symbol>'");
      }
    } else if (std::isalpha(static_cast<unsigned char>(cur.peek())) ||
               cur.peek() == '_') {
      std::string name = cur.ident();
      if (name == "pi") {
        result = result + rational(sign, 1);
      } else {
        result = result + symbol(name, sign);
      }
    } else {
      cur.fail("unexpected character");
    }
  }
  return result;
}

}  // namespace zx
