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

#include "gamelab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "gamelab/error.hpp"

namespace gamelab {

RegressionBasis RegressionBasis::polynomial(int degree) {
  if (degree < 0) throw Error(ErrorCode::kInvalidArgument, "degree < 0");
  RegressionBasis b;
  b.kind = BasisKind::kPolynomial;
  b.degree = degree;
  return b;
}

RegressionBasis RegressionBasis::local_constant(int cells) {
  if (cells < 1) throw Error(ErrorCode::kInvalidArgument, "cells < 1");
  RegressionBasis b;
  b.kind = BasisKind::kLocalConstant;
  b.cells = cells;
  return b;
}

RegressionBasis RegressionBasis::local_linear(int cells) {
  if (cells < 1) throw Error(ErrorCode::kInvalidArgument, "cells < 1");
  RegressionBasis b;
  b.kind = BasisKind::kLocalLinear;
  b.cells = cells;
  return b;
}

RegressionBasis RegressionBasis::parse(const std::string& text) {
  static const std::regex re("(poly|lc|ll)([0-9]+)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw Error(ErrorCode::kInvalidArgument,
                "basis must look like poly2, lc8 or ll10: '" + text + "'");
  }
  const int n = std::stoi(m[2]);
  if (m[1] == "poly") return polynomial(n);
  if (m[1] == "lc") return local_constant(n);
  return local_linear(n);
}

std::string RegressionBasis::name() const {
  switch (kind) {
    case BasisKind::kPolynomial: return "poly" + std::to_string(degree);
    case BasisKind::kLocalConstant: return "lc" + std::to_string(cells);
    case BasisKind::kLocalLinear: return "ll" + std::to_string(cells);
  }
  return "?";
}

namespace {

void exponents_up_to(int dim, int degree, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int e : cur) used += e;
  for (int e = 0; e + used <= degree; ++e) {
    cur.push_back(e);
    exponents_up_to(dim, degree, cur, out);
    cur.pop_back();
  }
}

}  // namespace

int RegressionModel::cell_of(const double* x) const {
  int cell = 0;
  for (int i = 0; i < dim_; ++i) {
    const auto& e = edges_[i];
    const int c = static_cast<int>(std::upper_bound(e.begin(), e.end(), x[i]) -
                                   e.begin());
    cell = cell * (static_cast<int>(e.size()) + 1) + c;
  }
  return cell;
}

void RegressionModel::features(const double* x, double* out) const {
  if (basis_.kind == BasisKind::kPolynomial) {
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      double v = 1.0;
      for (int i = 0; i < dim_; ++i) {
        for (int e = 0; e < exponents_[j][i]; ++e) v *= x[i];
      }
      out[j] = v;
    }
    return;
  }
  out[0] = 1.0;
  if (basis_.kind == BasisKind::kLocalLinear) {
    const Eigen::VectorXd& c = centers_[cell_of(x)];
    for (int i = 0; i < dim_; ++i) out[1 + i] = x[i] - c[i];
  }
}

RegressionModel RegressionModel::fit(const RegressionBasis& basis,
                                     const Samples& x,
                                     const Eigen::MatrixXd& targets) {
  const int n = static_cast<int>(x.rows());
  if (n == 0 || targets.rows() != n) {
    throw Error(ErrorCode::kInvalidArgument, "samples/targets mismatch");
  }
  RegressionModel m;
  m.basis_ = basis;
  m.dim_ = static_cast<int>(x.cols());
  m.n_targets_ = static_cast<int>(targets.cols());

  if (basis.kind == BasisKind::kPolynomial) {
    std::vector<int> cur;
    exponents_up_to(m.dim_, basis.degree, cur, m.exponents_);
    m.n_local_ = static_cast<int>(m.exponents_.size());
    Eigen::MatrixXd phi(n, m.n_local_);
    std::vector<double> row(m.n_local_);
    for (int r = 0; r < n; ++r) {
      m.features(x.row(r).data(), row.data());
      for (int j = 0; j < m.n_local_; ++j) phi(r, j) = row[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
    m.diag_.n_functions = m.n_local_;
    m.diag_.rank = static_cast<int>(qr.rank());
    if (qr.rank() < m.n_local_) {
      throw Error(ErrorCode::kRegressionDegenerate,
                  "polynomial design has rank " + std::to_string(qr.rank()) +
                      " < " + std::to_string(m.n_local_));
    }
    m.coef_.push_back(qr.solve(targets));
  } else {
    const bool linear = basis.kind == BasisKind::kLocalLinear;
    m.n_local_ = linear ? m.dim_ + 1 : 1;
    m.edges_.resize(m.dim_);
    std::vector<double> col(n);
    for (int i = 0; i < m.dim_; ++i) {
      for (int r = 0; r < n; ++r) col[r] = x(r, i);
      std::sort(col.begin(), col.end());
      for (int c = 1; c < basis.cells; ++c) {
        const double cut = col[static_cast<std::size_t>(
            static_cast<long long>(c) * n / basis.cells)];
        if (m.edges_[i].empty() || cut > m.edges_[i].back()) {
          m.edges_[i].push_back(cut);
        }
      }
    }
    int n_cells = 1;
    for (const auto& e : m.edges_) n_cells *= static_cast<int>(e.size()) + 1;
    std::vector<std::vector<int>> members(n_cells);
    for (int r = 0; r < n; ++r) members[m.cell_of(x.row(r).data())].push_back(r);

    const Eigen::VectorXd global = targets.colwise().mean().transpose();
    m.centers_.assign(n_cells, Eigen::VectorXd::Zero(m.dim_));
    m.coef_.assign(n_cells, Eigen::MatrixXd::Zero(m.n_local_, m.n_targets_));
    m.diag_.n_functions = n_cells * m.n_local_;
    for (int c = 0; c < n_cells; ++c) {
      const auto& idx = members[c];
      const int cnt = static_cast<int>(idx.size());
      if (cnt == 0) {
        m.coef_[c].row(0) = global.transpose();
        ++m.diag_.fallback_cells;
        continue;
      }
      Eigen::VectorXd center = Eigen::VectorXd::Zero(m.dim_);
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(m.n_targets_);
      for (int r : idx) {
        center += x.row(r).transpose();
        mean += targets.row(r).transpose();
      }
      center /= cnt;
      mean /= cnt;
      m.centers_[c] = center;
      bool fitted = false;
      if (linear && cnt >= 2 * m.n_local_) {
        Eigen::MatrixXd phi(cnt, m.n_local_);
        Eigen::MatrixXd y(cnt, m.n_targets_);
        for (int k = 0; k < cnt; ++k) {
          phi(k, 0) = 1.0;
          for (int i = 0; i < m.dim_; ++i) {
            phi(k, 1 + i) = x(idx[k], i) - center[i];
          }
          y.row(k) = targets.row(idx[k]);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
        if (qr.rank() == m.n_local_) {
          m.coef_[c] = qr.solve(y);
          m.diag_.rank += m.n_local_;
          fitted = true;
        }
      }
      if (!fitted) {
        m.coef_[c].row(0) = mean.transpose();
        m.diag_.rank += 1;
        if (linear) ++m.diag_.fallback_cells;
      }
    }
  }

  // R^2 of the first target.
  const double mean0 = targets.col(0).mean();
  double ss_res = 0.0, ss_tot = 0.0;
  for (int r = 0; r < n; ++r) {
    Vec xr(m.dim_);
    for (int i = 0; i < m.dim_; ++i) xr[i] = x(r, i);
    const double e = targets(r, 0) - m.predict(xr)[0];
    ss_res += e * e;
    ss_tot += (targets(r, 0) - mean0) * (targets(r, 0) - mean0);
  }
  m.diag_.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return m;
}

RegressionModel RegressionModel::constant(const Eigen::VectorXd& values,
                                          int dim) {
  RegressionModel m;
  m.basis_ = RegressionBasis::local_constant(1);
  m.dim_ = dim;
  m.n_targets_ = static_cast<int>(values.size());
  m.n_local_ = 1;
  m.edges_.assign(dim, {});
  m.centers_.assign(1, Eigen::VectorXd::Zero(dim));
  m.coef_.assign(1, values.transpose());
  m.diag_.n_functions = 1;
  m.diag_.rank = 1;
  m.diag_.r2 = 0.0;
  return m;
}

Eigen::VectorXd RegressionModel::predict(const Vec& x) const {
  double phi[32];
  features(x.data(), phi);
  const int cell = basis_.kind == BasisKind::kPolynomial ? 0 : cell_of(x.data());
  const Eigen::MatrixXd& coef = coef_[cell];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_targets_);
  for (int j = 0; j < n_local_; ++j) out += phi[j] * coef.row(j).transpose();
  return out;
}

Eigen::MatrixXd RegressionModel::predict_all(const Samples& x) const {
  Eigen::MatrixXd out(x.rows(), n_targets_);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Vec xr(dim_);
    for (int i = 0; i < dim_; ++i) xr[i] = x(r, i);
    out.row(r) = predict(xr).transpose();
  }
  return out;
}

}  // namespace gamelab
