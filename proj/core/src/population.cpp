#include "varest/population.hpp"

#include <cmath>
#include <string>

#include "varest/error.hpp"
#include "varest/moments.hpp"

namespace varest {

namespace {

void require_finite_column(std::span<const double> column, char name) {
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!std::isfinite(column[i])) {
      throw InvalidInputError(std::string("non-finite value in column ") + name + " at row " +
                              std::to_string(i));
    }
  }
}

}  // namespace

Population::Population(std::vector<double> y, std::vector<double> x, std::vector<double> z)
    : y_(std::move(y)), x_(std::move(x)), z_(std::move(z)) {
  if (y_.size() != x_.size() || y_.size() != z_.size()) {
    throw InvalidInputError("population columns differ in length");
  }
  if (y_.size() < 2) {
    throw InvalidInputError("population needs N >= 2, got " + std::to_string(y_.size()));
  }
  require_finite_column(y_, 'y');
  require_finite_column(x_, 'x');
  require_finite_column(z_, 'z');
}

double Population::sy2() const { return sample_variance(y_); }
double Population::sx2() const { return sample_variance(x_); }
double Population::sz2() const { return sample_variance(z_); }

}  // namespace varest
