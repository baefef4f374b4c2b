#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varest {

/// Read-only view over three parallel columns (y, x, z) of equal length.
struct Trivariate {
  std::span<const double> y;
  std::span<const double> x;
  std::span<const double> z;

  [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

/// A fixed finite population of (y, x, z) triples.
///
/// y is the study variate, x the auxiliary expected to be positively
/// correlated with y, z the auxiliary expected to be negatively correlated.
/// Construction enforces equal column lengths, N >= 2 and finite values.
/// Variance positivity is checked lazily by the operations that need it.
class Population {
 public:
  Population(std::vector<double> y, std::vector<double> x, std::vector<double> z);

  [[nodiscard]] std::size_t size() const noexcept { return y_.size(); }
  [[nodiscard]] std::span<const double> y() const noexcept { return y_; }
  [[nodiscard]] std::span<const double> x() const noexcept { return x_; }
  [[nodiscard]] std::span<const double> z() const noexcept { return z_; }
  [[nodiscard]] Trivariate view() const noexcept { return {y_, x_, z_}; }

  /// Population variances with divisor N - 1.
  [[nodiscard]] double sy2() const;
  [[nodiscard]] double sx2() const;
  [[nodiscard]] double sz2() const;

  friend bool operator==(const Population&, const Population&) = default;

 private:
  std::vector<double> y_;
  std::vector<double> x_;
  std::vector<double> z_;
};

}  // namespace varest
