// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

struct CostSample {
  double m = 0.0;
  double seconds = 0.0;
};

/// Polynomial runtime model: seconds(m) = Σ coefficients[i] · m^i.
struct CostModel {
  std::size_t degree = 0;
  std::vector<double> coefficients;  ///< ascending powers, degree + 1 entries
  std::vector<CostSample> training_set;

  double predict(double m) const noexcept {
    double y = 0.0;
    for (auto c = coefficients.rbegin(); c != coefficients.rend(); ++c) y = y * m + *c;
    return y;
  }

  /// Sum of squared residuals over `samples`.
  double residual(std::span<const CostSample> samples) const noexcept {
    double r = 0.0;
    for (const auto& s : samples) r += (s.seconds - predict(s.m)) * (s.seconds - predict(s.m));
    return r;
  }
};

/// Least-squares polynomial fit. The abscissa is scaled to [-1, 1]-ish
/// magnitude before a column-pivoted QR solve; coefficients are unscaled after.
inline CostModel fit_cost_model(std::span<const CostSample> samples, std::size_t degree) {
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (!std::isfinite(s.m) || !std::isfinite(s.seconds))
      throw invalid_argument("cost samples must be finite");
    distinct.insert(s.m);
  }
  if (distinct.size() < degree + 1)
    throw invalid_argument("degree-" + std::to_string(degree) + " fit needs " +
                           std::to_string(degree + 1) + " distinct lengths, got " +
                           std::to_string(distinct.size()));

  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.m));
  if (scale == 0.0) scale = 1.0;

  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double x = samples[static_cast<std::size_t>(r)].m / scale;
    double power = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, power *= x) design(r, c) = power;
    target(r) = samples[static_cast<std::size_t>(r)].seconds;
  }
  const Eigen::VectorXd scaled = design.colPivHouseholderQr().solve(target);

  CostModel model;
  model.degree = degree;
  model.training_set.assign(samples.begin(), samples.end());
  model.coefficients.resize(degree + 1);
  double power = 1.0;
  for (std::size_t c = 0; c <= degree; ++c, power *= scale)
    model.coefficients[c] = scaled(static_cast<Eigen::Index>(c)) / power;
  return model;
}

/// Cold-start weight: distance-matrix work per segment times segment count,
/// (m - ℓ + 1)(n - ℓ + 1)⌊n/m⌋.
inline double default_cost(std::size_t m, std::size_t n, std::size_t l) {
  detail::require(l >= 1 && l <= m && m <= n, "default_cost: need 1 <= l <= m <= n");
  return static_cast<double>(m - l + 1) * static_cast<double>(n - l + 1) *
         static_cast<double>(n / m);
}

}  // namespace tsnip
