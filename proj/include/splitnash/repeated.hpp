// Copyright 2026 The SplitNash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Repeated games: a split problem whose two games coincide, usually with a
// row-stochastic (Markov) operator modifying strategies between rounds.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"
#include "splitnash/game.hpp"
#include "splitnash/split.hpp"

namespace splitnash {

enum class TransitionViolation { kNonSquare, kNegativeEntry, kRowSum };

inline const char* to_string(TransitionViolation v) {
  switch (v) {
    case TransitionViolation::kNonSquare: return "non-square";
    case TransitionViolation::kNegativeEntry: return "negative entry";
    case TransitionViolation::kRowSum: return "row sum";
  }
  return "?";
}

// Rejection naming the first violated constraint (row-major scan).
class TransitionMatrixError : public ValidationError {
 public:
  TransitionMatrixError(TransitionViolation kind, std::size_t row, std::size_t col, double value,
                        const std::string& message)
      : ValidationError(message), kind_(kind), row_(row), col_(col), value_(value) {}

  TransitionViolation kind() const { return kind_; }
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }  // unused for row-sum violations
  double value() const { return value_; }   // offending entry or row sum

 private:
  TransitionViolation kind_;
  std::size_t row_;
  std::size_t col_;
  double value_;
};

inline constexpr double kRowSumTolerance = 1e-12;

// Nonnegative square matrix with unit row sums.
class TransitionMatrix {
 public:
  const LinearOperator& op() const { return op_; }
  std::size_t size() const { return op_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return op_(r, c); }

 private:
  explicit TransitionMatrix(LinearOperator op) : op_(std::move(op)) {}
  friend TransitionMatrix validate_transition_matrix(const std::vector<std::vector<double>>& rows);

  LinearOperator op_;
};

inline TransitionMatrix validate_transition_matrix(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw TransitionMatrixError(TransitionViolation::kNonSquare, 0, 0, 0.0, "transition matrix is empty");
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw TransitionMatrixError(TransitionViolation::kNonSquare, r, 0, static_cast<double>(rows[r].size()),
                                  "transition matrix is not square: row " + std::to_string(r) + " has " +
                                      std::to_string(rows[r].size()) + " entries, expected " + std::to_string(n));
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double a = rows[r][c];
      if (!std::isfinite(a) || a < 0.0) {
        throw TransitionMatrixError(TransitionViolation::kNegativeEntry, r, c, a,
                                    "transition matrix entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                        ") = " + std::to_string(a) + " is not a nonnegative number");
      }
      sum += a;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw TransitionMatrixError(TransitionViolation::kRowSum, r, 0, sum,
                                  "transition matrix row " + std::to_string(r) + " sums to " + std::to_string(sum) +
                                      ", expected 1");
    }
  }
  return TransitionMatrix(LinearOperator::from_rows(rows));
}

inline SplitProblem make_repeated_problem(const Game& game, const LinearOperator& op) {
  if (op.rows() != game.dimension() || op.cols() != game.dimension()) {
    throw DimensionError("repeated-game operator must be " + std::to_string(game.dimension()) + "x" +
                         std::to_string(game.dimension()));
  }
  return SplitProblem(game, game, op);
}

inline SplitProblem make_repeated_problem(const Game& game, const TransitionMatrix& matrix) {
  return make_repeated_problem(game, matrix.op());
}

// CDP sampling with g = f; same report schema as the general check.
inline CdpReport repeated_cdp_check(const SplitProblem& problem, std::size_t samples, std::uint64_t seed,
                                    const SearchBudget& budget = {}) {
  return cdp_sample_check(problem, samples, seed, budget);
}

}  // namespace splitnash
