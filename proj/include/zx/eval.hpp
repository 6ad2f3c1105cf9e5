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

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zx/diagram.hpp"
#include "zx/serialize.hpp"

namespace zx {

using Complex = std::complex<double>;
/// Complex matrix of shape 2^m x 2^n for a diagram n -> m.  The first output
/// indexes the most significant row bit, the first input the most significant
/// column bit.
using DenseOperator = Eigen::MatrixXcd;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Value of a diagram, with closed (0 -> 0) components reported separately
/// from the boundary-bearing part.
struct EvalResult {
  DenseOperator matrix;
  Complex scalar{1.0, 0.0};

  DenseOperator total() const { return scalar * matrix; }
};

/// Tensor-network contraction of an unconditional diagram; greedy elimination
/// of the lowest-rank pending tensor.  Throws EvalError on condition sets,
/// unassigned symbols, or oversized intermediates.
EvalResult eval_parts(const Diagram& d, const AngleAssignment& a = {});

/// The functor value: closed scalars folded into the matrix.
DenseOperator eval_matrix(const Diagram& d, const AngleAssignment& a = {});

/// True iff a == lambda * b entrywise within tol for some nonzero lambda,
/// with lambda fixed from the largest-magnitude entry of b.  The zero matrix
/// equals only the zero matrix.
bool equal_up_to_scalar(const DenseOperator& a, const DenseOperator& b,
                        double tol);

/// Kraus-sum channel: one term per valuation of the signal set.
struct SuperOp {
  std::vector<std::string> signals;
  std::vector<std::pair<Valuation, DenseOperator>> kraus;

  /// Choi matrix sum_v vec(K_v) vec(K_v)^dagger; channel equality up to
  /// scalar is Choi equality up to scalar.
  DenseOperator choi() const;
};

/// Evaluates one Kraus term per valuation.  `signals` overrides the signal
/// set (it must contain every signal occurring in d); used to compare
/// channels over a common set.
SuperOp eval_superop(const Diagram& d, const AngleAssignment& a = {},
                     std::optional<std::vector<std::string>> signals = std::nullopt);

bool superop_equal_up_to_scalar(const SuperOp& a, const SuperOp& b, double tol);

// -- gates ------------------------------------------------------------------

enum class GateName { H, Zphase, Xphase, CX, CZ, BellPrep };

/// Diagram for a named gate; phase gates require params.
Diagram gate(GateName name, std::optional<PhaseExpr> params = std::nullopt);
GateName gate_name_from_string(const std::string& s);

/// 0 -> n diagram preparing |0...0> (up to scalar), for plugging circuits.
Diagram zero_state(std::size_t n);

// -- matrix formats -----------------------------------------------------------

/// Text format: first line "rows cols", then row-major entries "re+imj".
std::string matrix_to_text(const DenseOperator& m);
DenseOperator matrix_from_text(const std::string& text);
Json matrix_to_json(const DenseOperator& m);

/// Kronecker product (first factor = most significant bits).
DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

}  // namespace zx
