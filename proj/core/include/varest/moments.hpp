#pragma once

#include <span>
#include <string>
#include <vector>

#include "varest/population.hpp"

namespace varest {

/// Standardized fourth-order moments consumed by the first-order theory.
///
/// Field dNNN holds delta_pqr = mu_pqr / (mu200^{p/2} mu020^{q/2} mu002^{r/2})
/// with (p, q, r) read from the digits.
struct DeltaTable {
  double d400 = 1.0;
  double d040 = 1.0;
  double d004 = 1.0;
  double d220 = 1.0;
  double d202 = 1.0;
  double d022 = 1.0;

  friend bool operator==(const DeltaTable&, const DeltaTable&) = default;
};

/// Throws InvalidInputError if any entry is non-finite.
void require_finite(const DeltaTable& table);

/// Human-readable list of violated moment inequalities (kurtosis lower
/// bounds and the squared-deviation correlation bounds). Empty when the
/// table is attainable by some population.
[[nodiscard]] std::vector<std::string> delta_table_violations(const DeltaTable& table,
                                                              double tolerance = 1e-12);

struct MomentOptions {
  /// Requests with p + q + r above this are rejected.
  int max_order = 8;
};

/// mu_pqr = (1/N) sum (y - Ybar)^p (x - Xbar)^q (z - Zbar)^r, means with divisor N.
/// Two-pass: means first, then centered products.
[[nodiscard]] double central_moment(const Trivariate& data, int p, int q, int r,
                                    const MomentOptions& options = {});
[[nodiscard]] double central_moment(const Population& pop, int p, int q, int r,
                                    const MomentOptions& options = {});

/// Standardized moment delta_pqr. Throws DegeneratePopulationError naming the
/// variate whose mu200/mu020/mu002 is zero while its exponent is nonzero.
[[nodiscard]] double delta(const Trivariate& data, int p, int q, int r,
                           const MomentOptions& options = {});
[[nodiscard]] double delta(const Population& pop, int p, int q, int r,
                           const MomentOptions& options = {});

/// The six entries of DeltaTable computed in one pass over the centered data.
[[nodiscard]] DeltaTable delta_table(const Trivariate& data);
[[nodiscard]] DeltaTable delta_table(const Population& pop);

/// Unbiased (divisor n - 1) variance about the sample mean.
[[nodiscard]] double sample_variance(std::span<const double> values);

}  // namespace varest
