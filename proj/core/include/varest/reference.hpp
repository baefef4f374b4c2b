#pragma once

#include <string>
#include <vector>

namespace varest {

/// One cell of a published PRE table next to its recomputation from the
/// reference moment table with the corrected first-order formulas.
struct ReferenceCell {
  std::string table;      ///< "single-phase" or "two-phase"
  std::string estimator;  ///< canonical estimator name
  double published = 0.0;
  double computed = 0.0;
  double relative_deviation = 0.0;  ///< |computed - published| / published
  bool consistent = true;           ///< relative_deviation <= tolerance
};

/// Recomputes every published PRE cell (n = 10, n' = 25, optimal weights).
[[nodiscard]] std::vector<ReferenceCell> reproduce_reference_tables(double tolerance = 0.015);

}  // namespace varest
