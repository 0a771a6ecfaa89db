#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mhdbl/errors.hpp"

namespace mhdbl {

// Cubic Hermite interpolant on strictly increasing nodes.  Slopes come from
// three-point parabolic estimates; with enforce_monotone the Hyman filter
// clamps them so monotone data interpolates monotonically.  The filter is
// inactive on smooth, well-resolved monotone data, so full accuracy is kept
// there.  Outside the node range the interpolant extends by its end values.
class CubicInterpolant {
 public:
  CubicInterpolant() = default;

  CubicInterpolant(std::span<const double> xs, std::span<const double> ys,
                   bool enforce_monotone = true)
      : x_(xs.begin(), xs.end()), y_(ys.begin(), ys.end()) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw construction_error("interpolant needs >= 2 matching nodes");
    for (size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i]))
        throw construction_error("interpolant nodes must be strictly increasing");
    d_.resize(n);
    std::vector<double> h(n - 1), slope(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      slope[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = slope[0];
    } else {
      for (size_t i = 1; i + 1 < n; ++i)
        d_[i] = (h[i] * slope[i - 1] + h[i - 1] * slope[i]) / (h[i - 1] + h[i]);
      d_[0] = ((2.0 * h[0] + h[1]) * slope[0] - h[0] * slope[1]) / (h[0] + h[1]);
      d_[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * slope[n - 2] - h[n - 2] * slope[n - 3]) /
                  (h[n - 2] + h[n - 3]);
    }
    if (enforce_monotone) {
      for (size_t i = 0; i < n; ++i) {
        const double sl = i == 0 ? slope[0] : slope[i - 1];
        const double sr = i == n - 1 ? slope[n - 2] : slope[i];
        if (sl * sr <= 0.0 && i > 0 && i < n - 1) {
          d_[i] = 0.0;
        } else {
          const double bound = 3.0 * std::min(std::abs(sl), std::abs(sr));
          d_[i] = std::clamp(d_[i], -bound, bound);
          if ((sl + sr) * d_[i] < 0.0) d_[i] = 0.0;
        }
      }
    }
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * y_[i] + (s3 - 2.0 * s2 + s) * h * d_[i] +
           (-2.0 * s3 + 3.0 * s2) * y_[i + 1] + (s3 - s2) * h * d_[i + 1];
  }

  double derivative(double x) const {
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return 0.0;
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s;
    return (6.0 * s2 - 6.0 * s) / h * y_[i] + (3.0 * s2 - 4.0 * s + 1.0) * d_[i] +
           (6.0 * s - 6.0 * s2) / h * y_[i + 1] + (3.0 * s2 - 2.0 * s) * d_[i + 1];
  }

 private:
  size_t segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<size_t>(it - x_.begin()) - 1;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace mhdbl
