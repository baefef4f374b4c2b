#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "varest/population.hpp"

namespace varest {

/// Marginal distribution applied to one latent standard-normal coordinate.
struct Marginal {
  enum class Family { Normal, LogNormal };
  Family family = Family::LogNormal;
  /// mu for Normal, log-scale mean for LogNormal.
  double location = 0.0;
  /// sigma for Normal, log-scale standard deviation for LogNormal. Must be > 0.
  double scale = 1.0;

  friend bool operator==(const Marginal&, const Marginal&) = default;
};

/// Gaussian-copula recipe for a synthetic (y, x, z) population. The rho_*
/// values are latent correlations; realized ones differ under nonlinear
/// marginals.
struct PopulationSpec {
  std::size_t size = 5000;
  double rho_yx = 0.8;
  double rho_yz = -0.6;
  double rho_xz = -0.5;
  Marginal y{Marginal::Family::LogNormal, 0.0, 0.25};
  Marginal x{Marginal::Family::LogNormal, 0.0, 0.4};
  Marginal z{Marginal::Family::LogNormal, 0.0, 0.3};
  std::uint64_t seed = 7;

  friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;
};

/// Draws N iid latent normal triples with the target correlation through the
/// Cholesky factor of the correlation matrix, then maps each through its
/// marginal. Throws InvalidSpecError if the matrix is not positive definite
/// or a scale is not positive.
[[nodiscard]] Population generate_population(const PopulationSpec& spec);

/// Spec from JSON, e.g.
/// {"N": 5000, "rho_yx": 0.8, "rho_yz": -0.6, "rho_xz": -0.5, "seed": 7,
///  "y": {"family": "lognormal", "logMu": 0, "logSigma": 0.5}, ...}.
/// Missing keys keep their defaults.
[[nodiscard]] PopulationSpec parse_population_spec_json(std::string_view text);
[[nodiscard]] std::string population_spec_to_json(const PopulationSpec& spec);

/// Population CSV: header `y,x,z`, one decimal triple per row. Any
/// non-numeric field is a ParseError carrying its 1-based line number.
/// Warnings about zero-variance columns are appended to `warnings` if given.
[[nodiscard]] Population parse_population_csv(std::istream& in,
                                              std::vector<std::string>* warnings = nullptr);
[[nodiscard]] Population load_population(const std::string& path,
                                         std::vector<std::string>* warnings = nullptr);

/// Writes the CSV with shortest round-trip decimal formatting.
void write_population_csv(std::ostream& out, const Population& pop);
void save_population(const std::string& path, const Population& pop);

/// Numeric CSV with an arbitrary header; used for partial data such as a
/// first-phase file carrying only x and z.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Column by header name; throws InvalidInputError when absent.
  [[nodiscard]] const std::vector<double>& column(std::string_view name) const;
};

[[nodiscard]] NumericTable parse_numeric_csv(std::istream& in);
[[nodiscard]] NumericTable load_numeric_csv(const std::string& path);

}  // namespace varest
