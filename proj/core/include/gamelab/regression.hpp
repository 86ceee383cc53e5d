// Copyright 2026 The gamelab Authors
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

#ifndef GAMELAB_REGRESSION_HPP_
#define GAMELAB_REGRESSION_HPP_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gamelab/types.hpp"

namespace gamelab {

enum class BasisKind { kPolynomial, kLocalConstant, kLocalLinear };

// Regression basis in the current state. Local bases split every coordinate
// into `cells` equal-count (empirical quantile) intervals and fit a constant
// or affine function on each tensor cell.
struct RegressionBasis {
  BasisKind kind = BasisKind::kLocalLinear;
  int degree = 2;   // polynomial
  int cells = 10;   // local, per coordinate

  static RegressionBasis polynomial(int degree);
  static RegressionBasis local_constant(int cells);
  static RegressionBasis local_linear(int cells);
  // "poly2", "lc8", "ll10".
  static RegressionBasis parse(const std::string& text);
  std::string name() const;
};

struct RegressionDiagnostics {
  int n_functions = 0;   // total basis functions
  int rank = 0;          // rank of the (global or summed local) design
  int fallback_cells = 0;  // local cells fitted by a lower order
  double r2 = 0.0;       // of the first target
};

// Least-squares fit of several targets on one design. Samples are rows of
// an n x d matrix.
class RegressionModel {
 public:
  using Samples = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                Eigen::RowMajor>;

  // Throws kRegressionDegenerate when a global design is rank deficient.
  static RegressionModel fit(const RegressionBasis& basis, const Samples& x,
                             const Eigen::MatrixXd& targets);
  // A model that returns fixed values everywhere.
  static RegressionModel constant(const Eigen::VectorXd& values, int dim);

  int dim() const { return dim_; }
  int n_targets() const { return n_targets_; }
  const RegressionDiagnostics& diagnostics() const { return diag_; }

  Eigen::VectorXd predict(const Vec& x) const;
  // One row per sample.
  Eigen::MatrixXd predict_all(const Samples& x) const;

 private:
  int cell_of(const double* x) const;
  void features(const double* x, double* out) const;

  RegressionBasis basis_;
  int dim_ = 1;
  int n_targets_ = 1;
  int n_local_ = 1;  // functions per cell or in total for polynomials
  std::vector<std::vector<int>> exponents_;
  std::vector<std::vector<double>> edges_;  // interior cut points per axis
  std::vector<Eigen::VectorXd> centers_;    // per cell, for local linear
  std::vector<Eigen::MatrixXd> coef_;       // per cell: n_local x n_targets
  RegressionDiagnostics diag_;
};

}  // namespace gamelab

#endif  // GAMELAB_REGRESSION_HPP_
