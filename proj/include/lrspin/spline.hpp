#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "lrspin/errors.hpp"

namespace lrspin {

// Interpolating cubic spline with zero second derivative at both ends.
// Knots must be strictly increasing; callers validate.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) {
      throw InvalidArgument("spline needs at least 3 knots and matching values");
    }
    // Thomas algorithm on the interior second derivatives.
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      if (i > 1) {
        const double w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  double front() const noexcept { return x_.front(); }
  double back() const noexcept { return x_.back(); }

  // Value and first derivative at t in [front(), back()].
  std::pair<double, double> evaluate(double t) const {
    if (!(t >= x_.front() && t <= x_.back())) throw OutOfRange(t, x_.front(), x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double slope = (y_[i + 1] - y_[i]) / h -
                         (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
                         (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    return {value, slope};
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace lrspin
