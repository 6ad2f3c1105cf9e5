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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace zx {

/// Angle assignment for symbolic phase variables, in radians.
using AngleAssignment = std::map<std::string, double>;

struct PhaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact phase: a rational multiple of pi plus an integer combination of
/// named angle variables.  The rational part is kept reduced and normalised
/// into [0, 2) (angles live on the circle, units of pi).  The symbolic part
/// never stores zero coefficients.
class PhaseExpr {
 public:
  PhaseExpr() = default;

  static PhaseExpr zero() { return PhaseExpr(); }
  static PhaseExpr pi() { return rational(1, 1); }
  static PhaseExpr rational(std::int64_t num, std::int64_t den);
  static PhaseExpr symbol(const std::string& name, std::int64_t coeff = 1);

  PhaseExpr operator+(const PhaseExpr& other) const;
  PhaseExpr operator-() const;
  PhaseExpr operator-(const PhaseExpr& other) const { return *this + (-other); }
  bool operator==(const PhaseExpr& other) const {
    return pi_num_ == other.pi_num_ && pi_den_ == other.pi_den_ &&
           sym_ == other.sym_;
  }
  bool operator!=(const PhaseExpr& other) const { return !(*this == other); }

  bool is_zero() const { return pi_num_ == 0 && sym_.empty(); }
  bool is_pi() const { return pi_num_ == 1 && pi_den_ == 1 && sym_.empty(); }
  /// True for phases 0 or pi with no symbolic part.
  bool is_pauli() const { return is_zero() || is_pi(); }
  bool has_symbols() const { return !sym_.empty(); }

  std::int64_t pi_num() const { return pi_num_; }
  std::int64_t pi_den() const { return pi_den_; }
  const std::map<std::string, std::int64_t>& sym_part() const { return sym_; }

  /// Numeric value in radians; throws PhaseError on an unassigned symbol.
  double to_radians(const AngleAssignment& assignment = {}) const;

  /// Canonical text, e.g. "0", "1/2pi", "3/2pi+alpha", "-2*beta".
  std::string to_string() const;
  /// Inverse of to_string; also accepts whitespace-free sums of terms.
  static PhaseExpr parse(const std::string& text);

 private:
  void normalise();

  std::int64_t pi_num_ = 0;  // units of pi, reduced, in [0, 2)
  std::int64_t pi_den_ = 1;
  std::map<std::string, std::int64_t> sym_;
};

}  // namespace zx
